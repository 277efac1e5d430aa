#include "sasp/solver.hpp"

#include "sasp/grounder.hpp"
#include "sasp/parser.hpp"

#include <algorithm>
#include <stdexcept>

namespace sasp {

// ---------------------------------------------------------------------------
// Compilation

auto compile_program(std::string_view source) -> CompiledProgram {
    CompiledProgram out;
    auto parsed = parse_program(source);
    for (auto const &d : parsed.diagnostics) {
        if (d.severity == Severity::Warning) {
            out.warnings.push_back(d);
        }
    }
    if (!parsed.ok() || has_errors(parsed.diagnostics)) {
        throw InputError(parsed.diagnostics);
    }
    out.program = std::move(*parsed.program);
    if (auto unsafe = check_safety(out.program); has_errors(unsafe)) {
        throw InputError(std::move(unsafe));
    }
    out.ground = ground(rewrite_anonymous(out.program));
    if (auto tight = check_tight(out.ground); !tight.tight) {
        std::string cycle;
        for (auto id : tight.cycle) {
            cycle += to_string(out.ground.atoms.at(id)) + " -> ";
        }
        cycle += to_string(out.ground.atoms.at(tight.cycle.front()));
        throw InputError(Diagnostic{Severity::Error, {}, "program is not tight: positive cycle " + cycle, cycle});
    }
    out.scene = geometry::Scene(out.ground.objects);
    out.definitions = geometry::compile_definitions(out.ground, out.scene, out.table);
    out.background = geometry::background(out.scene, out.table);
    out.nogoods = build_nogoods(out.ground, out.definitions, out.background, out.table);
    return out;
}

// ---------------------------------------------------------------------------
// Projection

auto is_shown(GroundProgram const &ground, AtomId id) -> bool {
    auto const &atom = ground.atoms.at(id);
    if (atom.kind == AtomKind::Aggregate) {
        return false;
    }
    if (ground.shows.empty()) {
        return atom.kind == AtomKind::Regular && !is_internal(atom);
    }
    return std::any_of(ground.shows.begin(), ground.shows.end(), [&](ShowDirective const &s) {
        return s.predicate == atom.name && s.arity == atom.args.size();
    });
}

auto projected_atoms(GroundProgram const &ground, Projection const &projection) -> std::vector<AtomId> {
    std::vector<AtomId> out;
    for (auto id : ground.atoms.ids()) {
        auto const &atom = ground.atoms.at(id);
        bool keep = false;
        switch (projection.kind) {
        case Projection::Kind::Show:
            keep = is_shown(ground, id);
            break;
        case Projection::Kind::None:
            keep = atom.kind != AtomKind::Aggregate;
            break;
        case Projection::Kind::Predicates:
            keep = atom.kind != AtomKind::Aggregate &&
                   std::any_of(projection.predicates.begin(), projection.predicates.end(),
                               [&](auto const &p) { return p.first == atom.name && p.second == atom.args.size(); });
            break;
        }
        if (keep) {
            out.push_back(id);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Theory bridge

class Session::Theory : public sat::TheoryHook {
public:
    Theory(lra::Solver &lra, NogoodDatabase const &db, bool probe)
        : lra_(lra)
        , base_(db.inequality_base)
        , count_(db.num_inequalities)
        , probe_(probe)
        , assigned_(db.num_inequalities, false) {}

    auto assign(sat::Lit lit, std::uint32_t level) -> std::optional<sat::Clause> override {
        auto v = lit.var();
        if (v < base_ || v >= base_ + count_) {
            return std::nullopt;
        }
        auto id = static_cast<lra::AtomId>(v - base_);
        lra::Literal l{id, lit.negated()};
        if (l.negated && lra_.atom(id).op == lra::Relop::Eq) {
            return std::nullopt; // decided by its two inequality halves
        }
        if (auto why = lra_.assert_literal(l, level)) {
            return clause_from(*why, std::nullopt);
        }
        assigned_[id] = true;
        assigned_trail_.emplace_back(id, level);
        return std::nullopt;
    }

    void backtrack(std::uint32_t level) override {
        lra_.backtrack(level);
        while (!assigned_trail_.empty() && assigned_trail_.back().second > level) {
            assigned_[assigned_trail_.back().first] = false;
            assigned_trail_.pop_back();
        }
    }

    auto propagate(std::uint32_t /*level*/) -> std::vector<sat::Clause> override {
        if (!probe_) {
            return {};
        }
        std::vector<lra::Literal> free;
        for (lra::AtomId id = 0; id < count_; ++id) {
            if (!assigned_[id]) {
                free.push_back({id, false});
            }
        }
        if (free.empty()) {
            return {};
        }
        auto result = lra_.probe_implied(free);
        std::vector<sat::Clause> out;
        for (std::size_t i = 0; i < result.implied.size(); ++i) {
            out.push_back(clause_from(result.implied_reasons[i], result.implied[i]));
        }
        for (std::size_t i = 0; i < result.refuted.size(); ++i) {
            auto l = result.refuted[i];
            out.push_back(clause_from(result.refuted_reasons[i], lra::Literal{l.atom, !l.negated}));
        }
        return out;
    }

private:
    auto to_sat(lra::Literal l) const -> sat::Lit { return {base_ + l.atom, l.negated}; }

    /// The clause forbidding an infeasible literal set. With `implied`, that
    /// literal goes first and its own atom is dropped from the reason.
    auto clause_from(lra::Explanation const &why, std::optional<lra::Literal> implied) const -> sat::Clause {
        sat::Clause c;
        if (implied) {
            c.push_back(to_sat(*implied));
        }
        for (auto l : why) {
            if (implied && l.atom == implied->atom) {
                continue;
            }
            c.push_back(~to_sat(l));
        }
        return c;
    }

    lra::Solver &lra_;
    sat::Var base_;
    std::size_t count_;
    bool probe_;
    std::vector<bool> assigned_;
    std::vector<std::pair<lra::AtomId, std::uint32_t>> assigned_trail_;
};

// ---------------------------------------------------------------------------
// Session

Session::Session(CompiledProgram const &compiled, SearchOptions const &options)
    : compiled_(compiled) {
    for (std::size_t i = 0; i < compiled.scene.num_variables(); ++i) {
        lra_.add_variable();
    }
    // Rectangles are laid out before the points they may contain.
    for (auto const &name : compiled.scene.names()) {
        if (auto const *r = std::get_if<geometry::RectGeom>(compiled.scene.find(name))) {
            layout_order_.insert(layout_order_.end(), {r->x_min, r->y_min, r->x_max, r->y_max});
        }
    }
    for (auto const &c : compiled.table.atoms()) {
        lra_.add_atom(c);
    }
    auto const &db = compiled.nogoods;
    for (std::size_t i = 0; i < db.num_vars; ++i) {
        sat_.new_var();
    }
    sat_.set_order(db.order);
    if (options.seed) {
        sat_.set_seed(*options.seed);
    }
    sat_.set_deadline(options.deadline);
    theory_ = std::make_unique<Theory>(lra_, db, options.probe);
    sat_.set_theory(theory_.get());
    for (auto const &c : db.clauses) {
        if (!sat_.add_clause(c)) {
            break;
        }
    }
}

Session::~Session() = default;

auto Session::next() -> std::variant<StableModel, SolveStatus> {
    switch (sat_.solve()) {
    case sat::Result::Unsat:
        return SolveStatus::Unsatisfiable;
    case sat::Result::Unknown:
        return SolveStatus::Interrupted;
    case sat::Result::Sat:
        break;
    }
    StableModel model;
    auto const &ground = compiled_.ground;
    for (auto id : ground.atoms.ids()) {
        if (sat_.model_value(compiled_.nogoods.atom_var[id])) {
            model.true_atoms.push_back(id);
            if (is_shown(ground, id)) {
                model.shown.push_back(id);
            }
        }
    }
    if (lra_.check_sat()) {
        throw std::logic_error("accepted assignment is not geometrically realizable");
    }
    model.witness_seed = lra_.canonical_model(layout_order_);
    return model;
}

auto Session::block(StableModel const &model, std::vector<AtomId> const &atoms) -> bool {
    sat::Clause c;
    for (auto id : atoms) {
        auto v = compiled_.nogoods.atom_var[id];
        bool holds = std::binary_search(model.true_atoms.begin(), model.true_atoms.end(), id);
        c.push_back(holds ? sat::neg(v) : sat::pos(v));
    }
    return sat_.add_clause(std::move(c));
}

auto Session::require_some_false(std::vector<AtomId> const &atoms) -> bool {
    sat::Clause c;
    for (auto id : atoms) {
        c.push_back(sat::neg(compiled_.nogoods.atom_var[id]));
    }
    return sat_.add_clause(std::move(c));
}

auto Session::statistics() const -> SearchStatistics {
    auto const &s = sat_.statistics();
    return {s.conflicts, s.decisions, s.theory_conflicts, lra_.statistics().pivots};
}

// ---------------------------------------------------------------------------
// Reasoning modes

auto enumerate_projected(CompiledProgram const &compiled, Projection const &projection, std::size_t limit,
                         SearchOptions const &options) -> Enumeration {
    Enumeration out;
    Session session(compiled, options);
    auto atoms = projected_atoms(compiled.ground, projection);
    bool interrupted = false;
    while (limit == 0 || out.models.size() < limit) {
        auto next = session.next();
        if (auto const *status = std::get_if<SolveStatus>(&next)) {
            interrupted = *status == SolveStatus::Interrupted;
            break;
        }
        out.models.push_back(std::move(std::get<StableModel>(next)));
        if (!session.block(out.models.back(), atoms)) {
            break;
        }
    }
    out.status = interrupted            ? SolveStatus::Interrupted
                 : out.models.empty() ? SolveStatus::Unsatisfiable
                                      : SolveStatus::Satisfiable;
    out.stats = session.statistics();
    return out;
}

auto solve_first(CompiledProgram const &compiled, SearchOptions const &options) -> Enumeration {
    return enumerate_projected(compiled, Projection{Projection::Kind::None, {}}, 1, options);
}

auto cautious_consequences(CompiledProgram const &compiled, Projection const &projection,
                           SearchOptions const &options) -> CautiousResult {
    CautiousResult out;
    Session session(compiled, options);
    auto atoms = projected_atoms(compiled.ground, projection);
    auto first = session.next();
    if (auto const *status = std::get_if<SolveStatus>(&first)) {
        out.status = *status;
        out.stats = session.statistics();
        return out;
    }
    out.status = SolveStatus::Satisfiable;
    out.models.push_back(std::move(std::get<StableModel>(first)));
    auto const &t = out.models.back().true_atoms;
    std::set_intersection(atoms.begin(), atoms.end(), t.begin(), t.end(), std::back_inserter(out.consequences));
    while (!out.consequences.empty() && session.require_some_false(out.consequences)) {
        auto next = session.next();
        if (auto const *status = std::get_if<SolveStatus>(&next)) {
            if (*status == SolveStatus::Interrupted) {
                out.status = SolveStatus::Interrupted;
            }
            break;
        }
        out.models.push_back(std::move(std::get<StableModel>(next)));
        auto const &m = out.models.back().true_atoms;
        std::vector<AtomId> kept;
        std::set_intersection(out.consequences.begin(), out.consequences.end(), m.begin(), m.end(),
                              std::back_inserter(kept));
        out.consequences = std::move(kept);
    }
    out.stats = session.statistics();
    return out;
}

} // namespace sasp
