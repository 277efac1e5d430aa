#pragma once

#include "sasp/ast.hpp"
#include "sasp/lra.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sasp::geometry {

struct PointGeom {
    lra::Var x = 0;
    lra::Var y = 0;
};

struct RectGeom {
    lra::Var x_min = 0;
    lra::Var y_min = 0;
    lra::Var x_max = 0;
    lra::Var y_max = 0;
};

/// Segments have numeric endpoints, which keeps on_ps linear.
struct SegmentGeom {
    Rational x_start, y_start, x_end, y_end;
};

using ObjectGeom = std::variant<PointGeom, RectGeom, SegmentGeom>;

/// Endpoints given to a segment whose geometry is not declared.
[[nodiscard]] auto canonical_segment() -> SegmentEndpoints;

/// Coordinate variables for every object, allocated in declaration order:
/// points take (x, y), rectangles (x_min, y_min, x_max, y_max).
class Scene {
public:
    Scene() = default;
    explicit Scene(ObjectMap const &objects);

    [[nodiscard]] auto find(std::string const &name) const -> ObjectGeom const *;
    [[nodiscard]] auto names() const -> std::vector<std::string> const & { return names_; }
    [[nodiscard]] auto points() const -> std::vector<std::string> const & { return points_; }
    [[nodiscard]] auto num_variables() const -> std::size_t { return variable_names_.size(); }

    /// "x(a)", "xmin(r)", ... for diagnostics.
    [[nodiscard]] auto variable_name(lra::Var v) const -> std::string const & { return variable_names_.at(v); }

private:
    std::vector<std::string> names_;
    std::vector<std::string> points_;
    std::map<std::string, ObjectGeom> objects_;
    std::vector<std::string> variable_names_;
};

using InequalityId = lra::AtomId;

/// Interning table for normal-form inequality atoms. Ids are dense from 0 in
/// order of first sight, so an lra::Solver fed the atoms in id order assigns
/// identical ids.
class InequalityTable {
public:
    auto intern(lra::Constraint const &constraint) -> InequalityId;
    [[nodiscard]] auto at(InequalityId id) const -> lra::Constraint const & { return atoms_.at(id); }
    [[nodiscard]] auto size() const -> std::size_t { return atoms_.size(); }
    [[nodiscard]] auto atoms() const -> std::vector<lra::Constraint> const & { return atoms_; }

private:
    std::vector<lra::Constraint> atoms_;
    std::map<lra::Constraint, InequalityId, lra::ConstraintLess> index_;
};

struct Formula {
    enum class Kind { True, False, Atom, Not, And, Or };

    Kind kind = Kind::True;
    InequalityId atom = 0;
    std::vector<Formula> children;

    [[nodiscard]] static auto truth(bool value) -> Formula;
    [[nodiscard]] static auto leaf(InequalityId id) -> Formula;
    [[nodiscard]] static auto negation(Formula f) -> Formula;
    [[nodiscard]] static auto conjunction(std::vector<Formula> children) -> Formula;
    [[nodiscard]] static auto disjunction(std::vector<Formula> children) -> Formula;
};

/// Inequality atoms mentioned by a formula, ascending and without duplicates.
[[nodiscard]] auto atoms_of(Formula const &formula) -> std::vector<InequalityId>;

[[nodiscard]] auto to_string(Formula const &formula, InequalityTable const &table, Scene const &scene)
    -> std::string;

struct SpatialDefinition {
    AtomId atom = 0; // ground spatial atom id, 0 when compiled standalone
    Formula formula;
};

/// Emits `sum op rhs` as a formula over interned atoms. Equalities become
/// `(e <= c) and not (e < c)` so no atom is ever asserted as a negated
/// equality.
[[nodiscard]] auto compare(lra::LinearExpr expr, CompareOp op, Rational rhs, InequalityTable &table) -> Formula;

/// Defining formula of a ground spatial atom. Throws InputError on unknown
/// objects or sort mismatches.
[[nodiscard]] auto compile_spatial_atom(GroundAtom const &atom, Scene const &scene, InequalityTable &table)
    -> SpatialDefinition;

/// Always-on constraints: every rectangle has positive width and height.
[[nodiscard]] auto background(Scene const &scene, InequalityTable &table) -> std::vector<Formula>;

/// Definitions for every spatial atom of a ground program, in atom order.
[[nodiscard]] auto compile_definitions(GroundProgram const &ground, Scene const &scene, InequalityTable &table)
    -> std::vector<SpatialDefinition>;

/// Exact truth value under `values` (indexed by coordinate variable). Throws
/// std::out_of_range when a variable has no value.
[[nodiscard]] auto evaluate(Formula const &formula, InequalityTable const &table, std::span<Rational const> values)
    -> bool;

[[nodiscard]] auto evaluate_definition(SpatialDefinition const &def, InequalityTable const &table,
                                       std::span<Rational const> values) -> bool;

} // namespace sasp::geometry
