#include "sasp/grounder.hpp"

#include <algorithm>
#include <set>

namespace sasp {

auto domain_guard_predicate(Sort sort) -> std::string_view {
    switch (sort) {
    case Sort::Point:
        return "_point";
    case Sort::Rect:
        return "_rect";
    case Sort::Segment:
        return "_segment";
    }
    return "_point";
}

namespace {

class RuleRewriter {
public:
    RuleRewriter(Rule rule, std::size_t &aux_counter, std::vector<Rule> &extra)
        : rule_(std::move(rule))
        , aux_counter_(aux_counter)
        , extra_(extra) {
        if (rule_.head) {
            collect_variables(*rule_.head, used_);
        }
        for (auto const &lit : rule_.body) {
            collect_variables(lit.atom, used_);
        }
    }

    auto run() -> Rule {
        std::vector<BodyLiteral> body;
        std::vector<std::pair<std::string, Sort>> pending_guards;
        for (auto &lit : rule_.body) {
            auto *spatial = std::get_if<SpatialAtom>(&lit.atom);
            if (spatial != nullptr && lit.negated && has_anonymous(spatial->args)) {
                body.push_back(lift_negated(*spatial, lit.location, pending_guards));
                continue;
            }
            if (!lit.negated) {
                if (spatial != nullptr) {
                    replace_anonymous(spatial->args);
                } else if (auto *reg = std::get_if<RegularAtom>(&lit.atom)) {
                    replace_anonymous(reg->args);
                }
            }
            body.push_back(std::move(lit));
        }
        rule_.body = std::move(body);
        for (auto const &[var, sort] : pending_guards) {
            if (!bound_in_body(var)) {
                BodyLiteral guard;
                guard.atom = RegularAtom{std::string(domain_guard_predicate(sort)), {Term::variable(var)}};
                guard.location = rule_.location;
                rule_.body.push_back(std::move(guard));
            }
        }
        return std::move(rule_);
    }

private:
    static auto has_anonymous(std::vector<Term> const &args) -> bool {
        return std::any_of(args.begin(), args.end(), [](Term const &t) { return t.kind == Term::Kind::Anonymous; });
    }

    auto fresh() -> std::string {
        while (true) {
            auto name = "V" + std::to_string(++fresh_counter_);
            if (std::find(used_.begin(), used_.end(), name) == used_.end()) {
                used_.push_back(name);
                return name;
            }
        }
    }

    void replace_anonymous(std::vector<Term> &args) {
        for (auto &t : args) {
            if (t.kind == Term::Kind::Anonymous) {
                t = Term::variable(fresh());
            }
        }
    }

    auto lift_negated(SpatialAtom spatial, SourceLocation location,
                      std::vector<std::pair<std::string, Sort>> &guards) -> BodyLiteral {
        auto signature = relation_signature(spatial.relation);
        std::vector<Term> named;
        for (std::size_t i = 0; i < spatial.args.size(); ++i) {
            auto const &t = spatial.args[i];
            if (t.is_variable() && std::find(named.begin(), named.end(), t) == named.end()) {
                named.push_back(t);
                guards.emplace_back(t.text, signature[i]);
            }
        }
        replace_anonymous(spatial.args);
        auto name = "_aux" + std::to_string(++aux_counter_);

        Rule def;
        def.location = location;
        def.head = RegularAtom{name, named};
        BodyLiteral cond;
        cond.atom = std::move(spatial);
        cond.location = location;
        def.body.push_back(std::move(cond));
        extra_.push_back(std::move(def));

        BodyLiteral lit;
        lit.atom = RegularAtom{std::move(name), std::move(named)};
        lit.negated = true;
        lit.location = location;
        return lit;
    }

    auto bound_in_body(std::string const &var) const -> bool {
        for (auto const &lit : rule_.body) {
            std::vector<Term> const *args = nullptr;
            if (auto const *reg = std::get_if<RegularAtom>(&lit.atom); reg && !lit.negated) {
                args = &reg->args;
            } else if (auto const *sp = std::get_if<SpatialAtom>(&lit.atom)) {
                args = &sp->args;
            }
            if (args != nullptr &&
                std::any_of(args->begin(), args->end(), [&](Term const &t) { return t.is_variable() && t.text == var; })) {
                return true;
            }
        }
        return false;
    }

    Rule rule_;
    std::size_t &aux_counter_;
    std::vector<Rule> &extra_;
    std::vector<std::string> used_;
    std::size_t fresh_counter_ = 0;
};

} // namespace

auto rewrite_anonymous(Program const &program) -> Program {
    Program out;
    out.objects = program.objects;
    out.shows = program.shows;
    std::size_t aux_counter = 0;
    for (auto const &rule : program.rules) {
        std::vector<Rule> extra;
        auto rewritten = RuleRewriter{rule, aux_counter, extra}.run();
        for (auto &r : extra) {
            out.rules.push_back(std::move(r));
        }
        out.rules.push_back(std::move(rewritten));
    }
    return out;
}

} // namespace sasp
