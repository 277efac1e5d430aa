#include "sasp/parser.hpp"

#include <algorithm>
#include <set>

namespace sasp {

namespace {

auto has_anonymous(std::vector<Term> const &terms) -> bool {
    return std::any_of(terms.begin(), terms.end(), [](Term const &t) { return t.kind == Term::Kind::Anonymous; });
}

class RuleChecker {
public:
    RuleChecker(Rule const &rule, std::vector<Diagnostic> &out)
        : rule_(rule)
        , out_(out) {}

    void run() {
        for (auto const &lit : rule_.body) {
            if (auto const *reg = std::get_if<RegularAtom>(&lit.atom); reg && !lit.negated) {
                add_bound(reg->args);
            } else if (auto const *sp = std::get_if<SpatialAtom>(&lit.atom)) {
                add_bound(sp->args);
            }
        }
        if (rule_.head) {
            std::vector<std::string> vars;
            collect_variables(*rule_.head, vars);
            require_bound(vars, rule_.location, "in head");
        }
        for (auto const &lit : rule_.body) {
            std::visit([&](auto const &atom) { check(atom, lit); }, lit.atom);
        }
    }

private:
    void add_bound(std::vector<Term> const &terms) {
        for (auto const &t : terms) {
            if (t.is_variable()) {
                bound_.insert(t.text);
            }
        }
    }

    void require_bound(std::vector<std::string> const &vars, SourceLocation at, std::string_view where) {
        for (auto const &v : vars) {
            if (bound_.count(v) == 0 && reported_.insert(v).second) {
                out_.push_back({Severity::Error, at, "unsafe variable '" + v + "' " + std::string(where), v});
            }
        }
    }

    void check(RegularAtom const &atom, BodyLiteral const &lit) {
        if (!lit.negated) {
            return;
        }
        if (has_anonymous(atom.args)) {
            out_.push_back({Severity::Error, lit.location, "anonymous variable in negated literal is unsafe", "_"});
        }
        std::vector<std::string> vars;
        collect_variables(atom.args, vars);
        require_bound(vars, lit.location, "in negated literal");
    }

    static void check(SpatialAtom const & /*atom*/, BodyLiteral const & /*lit*/) {}

    void check(Comparison const &cmp, BodyLiteral const &lit) {
        if (cmp.lhs.kind == Term::Kind::Anonymous || cmp.rhs.kind == Term::Kind::Anonymous) {
            out_.push_back({Severity::Error, lit.location, "anonymous variable in comparison", "_"});
        }
        std::vector<std::string> vars;
        collect_variables({cmp.lhs, cmp.rhs}, vars);
        require_bound(vars, lit.location, "in comparison");
    }

    void check(AggregateAtom const &agg, BodyLiteral const &lit) {
        auto const &args = atom_args(agg.condition);
        if (has_anonymous(args)) {
            out_.push_back(
                {Severity::Error, lit.location, "anonymous variables are not supported inside aggregates", "_"});
        }
        if (std::none_of(args.begin(), args.end(), [&](Term const &t) { return t == agg.element; })) {
            out_.push_back({Severity::Error, lit.location,
                            "aggregate element '" + agg.element.text + "' does not occur in its condition",
                            agg.element.text});
        }
        std::vector<std::string> vars;
        collect_variables(args, vars);
        for (auto const &v : vars) {
            if (v != agg.element.text && bound_.count(v) == 0 && reported_.insert(v).second) {
                out_.push_back({Severity::Error, lit.location,
                                "aggregate condition may only bind the element variable; '" + v + "' is unsafe", v});
            }
        }
    }

    Rule const &rule_;
    std::vector<Diagnostic> &out_;
    std::set<std::string> bound_;
    std::set<std::string> reported_;
};

} // namespace

auto check_safety(Program const &program) -> std::vector<Diagnostic> {
    std::vector<Diagnostic> out;
    for (auto const &rule : program.rules) {
        RuleChecker{rule, out}.run();
    }
    return out;
}

} // namespace sasp
