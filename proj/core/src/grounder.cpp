#include "sasp/grounder.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace sasp {

namespace {

using Binding = std::map<std::string, Term>;
using Signature = std::pair<std::string, std::size_t>;

auto ground_term(std::string const &text) -> Term {
    if (!text.empty() && (std::isdigit(static_cast<unsigned char>(text[0])) || text[0] == '-')) {
        return Term{Term::Kind::Number, text};
    }
    return Term::constant(text);
}

auto substitute(Term const &t, Binding const &binding) -> Term {
    if (t.is_variable()) {
        auto it = binding.find(t.text);
        if (it != binding.end()) {
            return it->second;
        }
    }
    return t;
}

auto substitute(std::vector<Term> const &terms, Binding const &binding) -> std::vector<std::string> {
    std::vector<std::string> out;
    out.reserve(terms.size());
    for (auto const &t : terms) {
        out.push_back(substitute(t, binding).text);
    }
    return out;
}

auto guard_sort(std::string const &predicate) -> std::optional<Sort> {
    for (auto sort : {Sort::Point, Sort::Rect, Sort::Segment}) {
        if (predicate == domain_guard_predicate(sort)) {
            return sort;
        }
    }
    return std::nullopt;
}

auto is_reflexive(std::vector<std::string> const &args) -> bool {
    for (std::size_t i = 0; i < args.size(); ++i) {
        for (std::size_t j = i + 1; j < args.size(); ++j) {
            if (args[i] == args[j]) {
                return true;
            }
        }
    }
    return false;
}

class Grounder {
public:
    explicit Grounder(Program const &program)
        : program_(program) {}

    auto run() -> GroundProgram {
        collect_implicit_segments();
        compute_domain();
        compute_objects(true);
        for (auto const &rule : program_.rules) {
            current_rule_ = &rule;
            for_each_binding(rule, [&](Binding const &b) { emit(rule, b); });
        }
        finish();
        return std::move(out_);
    }

private:
    // -- domains ------------------------------------------------------------

    auto add_domain_atom(std::string const &predicate, std::vector<std::string> args) -> bool {
        GroundAtom atom{AtomKind::Regular, predicate, args};
        if (!domain_set_.insert(atom).second) {
            return false;
        }
        std::vector<Term> terms;
        terms.reserve(args.size());
        for (auto const &a : args) {
            terms.push_back(ground_term(a));
        }
        domain_[{predicate, args.size()}].push_back(std::move(terms));
        return true;
    }

    auto in_domain(std::string const &predicate, std::vector<std::string> const &args) const -> bool {
        return domain_set_.count(GroundAtom{AtomKind::Regular, predicate, args}) > 0;
    }

    void compute_domain() {
        bool changed = true;
        while (changed) {
            changed = false;
            compute_objects(false);
            for (auto const &rule : program_.rules) {
                auto const *head = rule.head ? std::get_if<RegularAtom>(&*rule.head) : nullptr;
                if (head == nullptr) {
                    continue;
                }
                for_each_binding(rule, [&](Binding const &b) {
                    changed |= add_domain_atom(head->predicate, substitute(head->args, b));
                });
            }
        }
    }

    void collect_implicit_segments() {
        auto visit_spatial = [&](SpatialAtom const &atom) {
            auto sig = relation_signature(atom.relation);
            for (std::size_t i = 0; i < atom.args.size(); ++i) {
                if (sig[i] == Sort::Segment && atom.args[i].kind == Term::Kind::Constant) {
                    segment_mentions_.insert(atom.args[i].text);
                }
            }
        };
        for (auto const &rule : program_.rules) {
            if (rule.head) {
                if (auto const *sp = std::get_if<SpatialAtom>(&*rule.head)) {
                    visit_spatial(*sp);
                }
            }
            for (auto const &lit : rule.body) {
                if (auto const *sp = std::get_if<SpatialAtom>(&lit.atom)) {
                    visit_spatial(*sp);
                } else if (auto const *agg = std::get_if<AggregateAtom>(&lit.atom)) {
                    if (auto const *cond = std::get_if<SpatialAtom>(&agg->condition)) {
                        visit_spatial(*cond);
                    }
                }
            }
        }
    }

    /// Objects are read off the sort predicates in the current domain. Sort
    /// conflicts are only reported once the domain is final.
    void compute_objects(bool final) {
        objects_.clear();
        object_index_.clear();
        by_sort_.clear();
        auto add = [&](std::string const &name, Sort sort, bool implicit) {
            auto it = object_index_.find(name);
            if (it != object_index_.end()) {
                auto const &existing = objects_[it->second].second;
                if (existing.sort != sort && final) {
                    throw InputError(Diagnostic{Severity::Error, {},
                                                "object '" + name + "' is declared both as " +
                                                    std::string(sort_name(existing.sort)) + " and as " +
                                                    std::string(sort_name(sort)),
                                                name});
                }
                return;
            }
            object_index_[name] = objects_.size();
            ObjectInfo info;
            info.sort = sort;
            info.implicit = implicit;
            objects_.emplace_back(name, info);
            by_sort_[sort].push_back(ground_term(name));
        };
        // Explicit declarations first keep object order stable across fixpoint
        // iterations.
        for (auto const &decl : program_.objects) {
            for (auto const &name : decl.names) {
                add(name, decl.sort, false);
            }
        }
        for (auto sort : {Sort::Point, Sort::Rect, Sort::Segment}) {
            auto it = domain_.find({std::string(sort_name(sort)), 1});
            if (it != domain_.end()) {
                for (auto const &args : it->second) {
                    add(args[0].text, sort, false);
                }
            }
        }
        if (auto it = domain_.find({"segment", 5}); it != domain_.end()) {
            for (auto const &args : it->second) {
                add(args[0].text, Sort::Segment, false);
            }
        }
        for (auto const &name : segment_mentions_) {
            if (object_index_.count(name) == 0) {
                add(name, Sort::Segment, true);
            }
        }
        for (auto const &decl : program_.objects) {
            if (decl.endpoints) {
                auto &info = objects_[object_index_.at(decl.names.front())].second;
                if (info.sort == Sort::Segment) {
                    info.endpoints = decl.endpoints;
                }
            }
        }
    }

    auto objects_of(Sort sort) const -> std::vector<Term> const & {
        static const std::vector<Term> empty;
        auto it = by_sort_.find(sort);
        return it == by_sort_.end() ? empty : it->second;
    }

    // -- instantiation --------------------------------------------------------

    void for_each_binding(Rule const &rule, std::function<void(Binding const &)> const &cb) {
        std::vector<RegularAtom const *> positives;
        std::vector<std::pair<std::string, Sort>> spatial_vars;
        auto note_spatial = [&](std::vector<Term> const &args, std::span<const Sort> sig) {
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (args[i].is_variable()) {
                    spatial_vars.emplace_back(args[i].text, sig[i]);
                }
            }
        };
        for (auto const &lit : rule.body) {
            if (auto const *reg = std::get_if<RegularAtom>(&lit.atom)) {
                if (auto sort = guard_sort(reg->predicate)) {
                    std::array<Sort, 1> sig{*sort};
                    note_spatial(reg->args, sig);
                } else if (!lit.negated) {
                    positives.push_back(reg);
                }
            } else if (auto const *sp = std::get_if<SpatialAtom>(&lit.atom)) {
                note_spatial(sp->args, relation_signature(sp->relation));
            }
        }
        Binding binding;
        join(rule, positives, 0, spatial_vars, binding, cb);
    }

    void join(Rule const &rule, std::vector<RegularAtom const *> const &positives, std::size_t index,
              std::vector<std::pair<std::string, Sort>> const &spatial_vars, Binding &binding,
              std::function<void(Binding const &)> const &cb) {
        if (index == positives.size()) {
            enumerate_spatial(rule, spatial_vars, 0, binding, cb);
            return;
        }
        auto const &atom = *positives[index];
        // Ground literals are kept even when underivable so that their
        // dependencies reach the tightness check; completion makes them false.
        if (std::all_of(atom.args.begin(), atom.args.end(), [](Term const &t) { return t.is_ground(); })) {
            join(rule, positives, index + 1, spatial_vars, binding, cb);
            return;
        }
        auto it = domain_.find({atom.predicate, atom.args.size()});
        if (it == domain_.end()) {
            return;
        }
        // Copy: the domain may grow while the callback runs.
        auto const tuples = it->second;
        for (auto const &tuple : tuples) {
            std::vector<std::string> bound_here;
            bool ok = true;
            for (std::size_t i = 0; i < tuple.size() && ok; ++i) {
                auto const &pattern = atom.args[i];
                if (pattern.is_variable()) {
                    auto found = binding.find(pattern.text);
                    if (found == binding.end()) {
                        binding.emplace(pattern.text, tuple[i]);
                        bound_here.push_back(pattern.text);
                    } else {
                        ok = found->second == tuple[i];
                    }
                } else {
                    ok = pattern == tuple[i];
                }
            }
            if (ok) {
                join(rule, positives, index + 1, spatial_vars, binding, cb);
            }
            for (auto const &v : bound_here) {
                binding.erase(v);
            }
        }
    }

    void enumerate_spatial(Rule const &rule, std::vector<std::pair<std::string, Sort>> const &vars,
                           std::size_t index, Binding &binding, std::function<void(Binding const &)> const &cb) {
        while (index < vars.size() && binding.count(vars[index].first) > 0) {
            ++index;
        }
        if (index == vars.size()) {
            if (comparisons_hold(rule, binding)) {
                cb(binding);
            }
            return;
        }
        auto const &[var, sort] = vars[index];
        auto const candidates = objects_of(sort);
        for (auto const &obj : candidates) {
            binding.emplace(var, obj);
            enumerate_spatial(rule, vars, index + 1, binding, cb);
            binding.erase(var);
        }
    }

    static auto comparisons_hold(Rule const &rule, Binding const &binding) -> bool {
        for (auto const &lit : rule.body) {
            if (auto const *cmp = std::get_if<Comparison>(&lit.atom)) {
                auto lhs = substitute(cmp->lhs, binding);
                auto rhs = substitute(cmp->rhs, binding);
                bool result = holds(cmp->op, compare_ground(lhs, rhs));
                if (result == lit.negated) {
                    return false;
                }
            }
        }
        return true;
    }

    // -- emission -------------------------------------------------------------

    [[noreturn]] void fail(std::string message, std::string snippet) const {
        SourceLocation at = current_rule_ != nullptr ? current_rule_->location : SourceLocation{};
        throw InputError(Diagnostic{Severity::Error, at, std::move(message), std::move(snippet)});
    }

    void check_sorts(Relation rel, std::vector<std::string> const &args) const {
        auto sig = relation_signature(rel);
        for (std::size_t i = 0; i < args.size(); ++i) {
            auto text = to_string(GroundAtom{AtomKind::Spatial, std::string(relation_name(rel)), args});
            auto it = object_index_.find(args[i]);
            if (it == object_index_.end()) {
                fail("undeclared object '" + args[i] + "' in " + text, text);
            }
            auto actual = objects_[it->second].second.sort;
            if (actual != sig[i]) {
                fail("object '" + args[i] + "' is a " + std::string(sort_name(actual)) + " but argument " +
                         std::to_string(i + 1) + " of " + std::string(relation_name(rel)) + " must be a " +
                         std::string(sort_name(sig[i])),
                     text);
            }
        }
    }

    auto intern_spatial(Relation rel, std::vector<std::string> args) -> AtomId {
        check_sorts(rel, args);
        return out_.atoms.intern(GroundAtom{AtomKind::Spatial, std::string(relation_name(rel)), std::move(args)});
    }

    /// False for instances with an underivable positive literal (possible for
    /// ground literals) or a reflexive spatial literal.
    auto instance_exists(Rule const &rule, Binding const &binding) const -> bool {
        for (auto const &lit : rule.body) {
            if (auto const *reg = std::get_if<RegularAtom>(&lit.atom)) {
                if (!lit.negated && !guard_sort(reg->predicate) &&
                    !in_domain(reg->predicate, substitute(reg->args, binding))) {
                    return false;
                }
            } else if (auto const *sp = std::get_if<SpatialAtom>(&lit.atom)) {
                if (is_reflexive(substitute(sp->args, binding))) {
                    return false;
                }
            }
        }
        return true;
    }

    void emit(Rule const &rule, Binding const &binding) {
        if (!instance_exists(rule, binding)) {
            return;
        }
        GroundRule ground;
        for (auto const &lit : rule.body) {
            if (auto const *reg = std::get_if<RegularAtom>(&lit.atom)) {
                if (guard_sort(reg->predicate)) {
                    continue;
                }
                auto args = substitute(reg->args, binding);
                if (!in_domain(reg->predicate, args)) {
                    continue; // `not p` with p underivable is true
                }
                auto id = out_.atoms.intern(GroundAtom{AtomKind::Regular, reg->predicate, std::move(args)});
                ground.body.push_back({id, lit.negated});
            } else if (auto const *sp = std::get_if<SpatialAtom>(&lit.atom)) {
                auto args = substitute(sp->args, binding);
                ground.body.push_back({intern_spatial(sp->relation, std::move(args)), lit.negated});
            } else if (auto const *agg = std::get_if<AggregateAtom>(&lit.atom)) {
                ground.body.push_back({ground_aggregate(*agg, binding), lit.negated});
            }
        }
        if (rule.head) {
            if (auto const *reg = std::get_if<RegularAtom>(&*rule.head)) {
                ground.head =
                    out_.atoms.intern(GroundAtom{AtomKind::Regular, reg->predicate, substitute(reg->args, binding)});
            } else if (auto const *sp = std::get_if<SpatialAtom>(&*rule.head)) {
                ground.head = intern_spatial(sp->relation, substitute(sp->args, binding));
            }
        }
        std::sort(ground.body.begin(), ground.body.end());
        ground.body.erase(std::unique(ground.body.begin(), ground.body.end()), ground.body.end());
        if (emitted_.insert(ground).second) {
            out_.rules.push_back(std::move(ground));
        }
    }

    auto ground_aggregate(AggregateAtom const &agg, Binding const &outer) -> AtomId {
        Binding binding = outer;
        std::vector<AtomId> elements;
        auto const &element = agg.element.text;
        bool element_global = outer.count(element) > 0;
        if (auto const *reg = std::get_if<RegularAtom>(&agg.condition)) {
            auto it = domain_.find({reg->predicate, reg->args.size()});
            if (it != domain_.end()) {
                for (auto const &tuple : it->second) {
                    bool ok = true;
                    std::optional<Term> value;
                    for (std::size_t i = 0; i < tuple.size() && ok; ++i) {
                        auto const &p = reg->args[i];
                        if (p.is_variable() && p.text == element && !element_global) {
                            ok = !value || *value == tuple[i];
                            value = tuple[i];
                        } else {
                            ok = substitute(p, binding) == tuple[i];
                        }
                    }
                    if (ok) {
                        std::vector<std::string> args;
                        for (auto const &t : tuple) {
                            args.push_back(t.text);
                        }
                        elements.push_back(
                            out_.atoms.intern(GroundAtom{AtomKind::Regular, reg->predicate, std::move(args)}));
                    }
                }
            }
        } else {
            auto const &sp = std::get<SpatialAtom>(agg.condition);
            auto sig = relation_signature(sp.relation);
            std::vector<Term> candidates;
            if (element_global) {
                candidates.push_back(outer.at(element));
            } else {
                for (std::size_t i = 0; i < sp.args.size(); ++i) {
                    if (sp.args[i].is_variable() && sp.args[i].text == element) {
                        candidates = objects_of(sig[i]);
                        break;
                    }
                }
            }
            for (auto const &value : candidates) {
                binding[element] = value;
                auto args = substitute(sp.args, binding);
                bool sorts_ok = true;
                for (std::size_t i = 0; i < args.size(); ++i) {
                    if (sp.args[i].is_variable() && sp.args[i].text == element) {
                        auto it = object_index_.find(args[i]);
                        sorts_ok &= it != object_index_.end() && objects_[it->second].second.sort == sig[i];
                    }
                }
                if (!sorts_ok || is_reflexive(args)) {
                    continue;
                }
                elements.push_back(intern_spatial(sp.relation, std::move(args)));
            }
        }
        std::sort(elements.begin(), elements.end());
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());

        std::ostringstream key;
        key << "#count{";
        for (std::size_t i = 0; i < elements.size(); ++i) {
            key << (i > 0 ? ";" : "") << to_string(out_.atoms.at(elements[i]));
        }
        key << "}" << to_string(agg.guard) << agg.bound.get_str();
        GroundAtom atom{AtomKind::Aggregate, key.str(), {}};
        if (auto existing = out_.atoms.find(atom)) {
            return *existing;
        }
        auto id = out_.atoms.intern(atom);
        CardinalityConstraint card;
        for (auto e : elements) {
            card.literals.push_back({e, false});
        }
        card.guard = agg.guard;
        card.bound = agg.bound;
        card.defined = id;
        out_.cardinalities.push_back(std::move(card));
        return id;
    }

    void finish() {
        out_.objects = objects_;
        out_.shows = program_.shows;
        for (auto id : out_.atoms.ids()) {
            if (out_.atoms.at(id).kind == AtomKind::Spatial) {
                out_.spatial_atoms.push_back(id);
            }
        }
    }

    Program const &program_;
    Rule const *current_rule_ = nullptr;
    GroundProgram out_;

    std::map<Signature, std::vector<std::vector<Term>>> domain_;
    std::set<GroundAtom> domain_set_;
    std::set<std::string> segment_mentions_;

    ObjectMap objects_;
    std::map<std::string, std::size_t> object_index_;
    std::map<Sort, std::vector<Term>> by_sort_;

    std::set<GroundRule> emitted_;
};

} // namespace

auto ground(Program const &program) -> GroundProgram { return Grounder{program}.run(); }

auto check_tight(GroundProgram const &ground) -> TightnessResult {
    auto n = ground.atoms.size();
    std::vector<std::vector<AtomId>> edges(n + 1);
    std::map<AtomId, CardinalityConstraint const *> cards;
    for (auto const &card : ground.cardinalities) {
        cards[card.defined] = &card;
    }
    auto is_regular = [&](AtomId id) { return ground.atoms.at(id).kind == AtomKind::Regular; };
    for (auto const &rule : ground.rules) {
        if (!rule.head || !is_regular(*rule.head)) {
            continue;
        }
        for (auto const &lit : rule.body) {
            if (lit.negated) {
                continue;
            }
            if (is_regular(lit.atom)) {
                edges[*rule.head].push_back(lit.atom);
            } else if (auto it = cards.find(lit.atom); it != cards.end()) {
                for (auto const &elem : it->second->literals) {
                    if (is_regular(elem.atom)) {
                        edges[*rule.head].push_back(elem.atom);
                    }
                }
            }
        }
    }

    enum class Color { White, Grey, Black };
    std::vector<Color> color(n + 1, Color::White);
    std::vector<AtomId> stack;
    TightnessResult result;
    std::function<bool(AtomId)> dfs = [&](AtomId v) -> bool {
        color[v] = Color::Grey;
        stack.push_back(v);
        for (auto w : edges[v]) {
            if (color[w] == Color::Grey) {
                auto from = std::find(stack.begin(), stack.end(), w);
                result.cycle.assign(from, stack.end());
                return true;
            }
            if (color[w] == Color::White && dfs(w)) {
                return true;
            }
        }
        stack.pop_back();
        color[v] = Color::Black;
        return false;
    };
    for (AtomId v = 1; v <= n; ++v) {
        if (color[v] == Color::White && dfs(v)) {
            result.tight = false;
            break;
        }
    }
    return result;
}

} // namespace sasp
