#pragma once

#include "sasp/ast.hpp"
#include "sasp/geometry.hpp"
#include "sasp/lra.hpp"
#include "sasp/sat.hpp"

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sasp {

/// Propositional encoding of a ground program. Nogoods are stored as the
/// clauses that forbid them.
struct NogoodDatabase {
    std::vector<sat::Clause> clauses;
    std::size_t num_vars = 0;
    sat::Var top = 0;                        // constant true
    std::vector<sat::Var> atom_var;          // by AtomId; index 0 unused
    sat::Var inequality_base = 0;            // inequality atom i is variable base + i
    std::size_t num_inequalities = 0;
    std::vector<sat::Var> order;             // atoms, then inequality atoms, then auxiliaries
};

/// Completion for regular atoms, implications for spatial heads, integrity
/// constraints, definition equivalences for spatial atoms, sequential
/// counters for cardinality constraints, and the background formulas.
/// The program must be tight.
[[nodiscard]] auto build_nogoods(GroundProgram const &ground, std::vector<geometry::SpatialDefinition> const &defs,
                                 std::vector<geometry::Formula> const &background,
                                 geometry::InequalityTable const &table) -> NogoodDatabase;

/// A compiled program ready for search.
struct CompiledProgram {
    Program program;
    GroundProgram ground;
    geometry::Scene scene;
    geometry::InequalityTable table;
    std::vector<geometry::SpatialDefinition> definitions;
    std::vector<geometry::Formula> background;
    NogoodDatabase nogoods;
    std::vector<Diagnostic> warnings;
};

/// Parse, safety check, rewrite, ground, tightness check and encode. Throws
/// InputError carrying every diagnostic on failure.
[[nodiscard]] auto compile_program(std::string_view source) -> CompiledProgram;

/// Which atoms distinguish models during enumeration.
struct Projection {
    enum class Kind { Show, None, Predicates };

    Kind kind = Kind::Show;
    std::vector<std::pair<std::string, std::size_t>> predicates; // for Kind::Predicates
};

/// Atom ids selected by a projection: Show follows the show directives (all
/// visible regular atoms without any), None selects every regular and
/// spatial atom.
[[nodiscard]] auto projected_atoms(GroundProgram const &ground, Projection const &projection) -> std::vector<AtomId>;

/// Visible atoms of a model: the show directives, or every regular atom not
/// introduced by rewriting when there are none.
[[nodiscard]] auto is_shown(GroundProgram const &ground, AtomId id) -> bool;

struct StableModel {
    std::vector<AtomId> true_atoms; // ascending
    std::vector<AtomId> shown;      // ascending
    std::vector<Rational> witness_seed; // by coordinate variable
};

enum class SolveStatus { Satisfiable, Unsatisfiable, Interrupted };

struct SearchOptions {
    bool probe = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SearchStatistics {
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t theory_conflicts = 0;
    std::uint64_t pivots = 0;
};

/// One search over a compiled program. Clauses added between calls to
/// `next` persist.
class Session {
public:
    Session(CompiledProgram const &compiled, SearchOptions const &options);
    ~Session();
    Session(Session const &) = delete;
    auto operator=(Session const &) -> Session & = delete;

    /// Next model, or the reason there is none.
    auto next() -> std::variant<StableModel, SolveStatus>;

    /// Forbids every model that agrees with `model` on `atoms`. Returns false
    /// when no model can remain.
    auto block(StableModel const &model, std::vector<AtomId> const &atoms) -> bool;

    /// Requires at least one of `atoms` to be false.
    auto require_some_false(std::vector<AtomId> const &atoms) -> bool;

    [[nodiscard]] auto statistics() const -> SearchStatistics;

private:
    class Theory;

    CompiledProgram const &compiled_;
    sat::Solver sat_;
    lra::Solver lra_;
    std::vector<lra::Var> layout_order_;
    std::unique_ptr<Theory> theory_;
};

/// Models distinct on the projected atoms, one per class. `limit` 0 means all.
struct Enumeration {
    SolveStatus status = SolveStatus::Unsatisfiable;
    std::vector<StableModel> models;
    SearchStatistics stats;
};

[[nodiscard]] auto enumerate_projected(CompiledProgram const &compiled, Projection const &projection,
                                       std::size_t limit, SearchOptions const &options = {}) -> Enumeration;

/// First model only.
[[nodiscard]] auto solve_first(CompiledProgram const &compiled, SearchOptions const &options = {}) -> Enumeration;

struct CautiousResult {
    SolveStatus status = SolveStatus::Unsatisfiable; // Unsatisfiable means no models at all
    std::vector<AtomId> consequences;                // projected atoms true in every model
    std::vector<StableModel> models;                 // models met while refining
    SearchStatistics stats;
};

[[nodiscard]] auto cautious_consequences(CompiledProgram const &compiled, Projection const &projection,
                                         SearchOptions const &options = {}) -> CautiousResult;

} // namespace sasp
