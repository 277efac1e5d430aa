#pragma once

#include "sasp/ast.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sasp::lra {

/// `real + delta * d` for a positive infinitesimal d.
class DeltaRational {
public:
    DeltaRational() = default;
    DeltaRational(Rational real, Rational delta = 0)
        : real_(std::move(real))
        , delta_(std::move(delta)) {}

    [[nodiscard]] auto real() const -> Rational const & { return real_; }
    [[nodiscard]] auto delta() const -> Rational const & { return delta_; }

    auto operator+=(DeltaRational const &rhs) -> DeltaRational &;
    auto operator-=(DeltaRational const &rhs) -> DeltaRational &;
    auto operator*=(Rational const &k) -> DeltaRational &;

    friend auto operator+(DeltaRational lhs, DeltaRational const &rhs) -> DeltaRational { return lhs += rhs; }
    friend auto operator-(DeltaRational lhs, DeltaRational const &rhs) -> DeltaRational { return lhs -= rhs; }
    friend auto operator*(DeltaRational lhs, Rational const &k) -> DeltaRational { return lhs *= k; }
    friend auto operator/(DeltaRational lhs, Rational const &k) -> DeltaRational;

    friend auto operator==(DeltaRational const &lhs, DeltaRational const &rhs) -> bool {
        return lhs.real_ == rhs.real_ && lhs.delta_ == rhs.delta_;
    }
    friend auto operator<=>(DeltaRational const &lhs, DeltaRational const &rhs) -> std::strong_ordering;

    /// Value after substituting `epsilon` for the infinitesimal.
    [[nodiscard]] auto concretize(Rational const &epsilon) const -> Rational { return real_ + delta_ * epsilon; }

private:
    Rational real_;
    Rational delta_;
};

[[nodiscard]] auto to_string(DeltaRational const &value) -> std::string;

using Var = std::uint32_t;

struct LinearTerm {
    Var var = 0;
    Rational coeff;

    friend auto operator==(LinearTerm const &, LinearTerm const &) -> bool = default;
};

/// Sum of terms, sorted by variable, no zero coefficients once normalized.
using LinearExpr = std::vector<LinearTerm>;

enum class Relop { Lt, Le, Eq };

[[nodiscard]] auto to_string(Relop op) -> std::string_view;

/// `lhs op rhs` in normal form: variables ascending, first coefficient 1.
struct Constraint {
    LinearExpr lhs;
    Relop op = Relop::Le;
    Rational rhs;

    friend auto operator==(Constraint const &, Constraint const &) -> bool = default;
};

[[nodiscard]] auto to_string(Constraint const &c) -> std::string;

struct ExprLess {
    auto operator()(LinearExpr const &lhs, LinearExpr const &rhs) const -> bool;
};

struct ConstraintLess {
    auto operator()(Constraint const &lhs, Constraint const &rhs) const -> bool;
};

/// A comparison over a linear expression, reduced to a signed normal-form
/// constraint. `negated` means the comparison holds iff the constraint is false.
struct NormalizedComparison {
    Constraint constraint;
    bool negated = false;
};

/// Collects like terms and rescales. Comparisons without variables reduce to
/// a constant truth value. `>=` becomes `not <` and `>` becomes `not <=`;
/// `!=` becomes `not =`.
[[nodiscard]] auto normalize(LinearExpr expr, CompareOp op, Rational rhs)
    -> std::variant<bool, NormalizedComparison>;

/// Exact evaluation of `sum coeff*value op rhs`.
[[nodiscard]] auto evaluate(Constraint const &c, std::span<Rational const> values) -> bool;

using AtomId = std::uint32_t;

struct Literal {
    AtomId atom = 0;
    bool negated = false;

    friend auto operator<=>(Literal const &, Literal const &) = default;
};

/// Set of asserted literals that is infeasible by itself.
using Explanation = std::vector<Literal>;

struct ProbeResult {
    std::vector<Literal> implied;
    std::vector<Literal> refuted;
    std::vector<Explanation> implied_reasons; // conflicts met asserting the negations
    std::vector<Explanation> refuted_reasons;
};

struct Statistics {
    std::uint64_t pivots = 0;
    std::uint64_t checks = 0;
    std::uint64_t conflicts = 0;
};

/// Incremental general simplex over delta-rationals with Bland's rule.
///
/// Every atom is bound to a variable: a single-variable constraint bounds the
/// original variable, otherwise a slack variable is introduced per distinct
/// linear form. Bounds are kept on a trail tagged with decision levels.
class Solver {
public:
    auto add_variable() -> Var;
    [[nodiscard]] auto num_variables() const -> std::size_t { return originals_.size(); }

    /// Interns a normal-form constraint; equal constraints share an id.
    auto add_atom(Constraint const &constraint) -> AtomId;
    [[nodiscard]] auto find_atom(Constraint const &constraint) const -> std::optional<AtomId>;
    [[nodiscard]] auto atom(AtomId id) const -> Constraint const &;
    [[nodiscard]] auto num_atoms() const -> std::size_t { return atoms_.size(); }

    /// Asserts a literal at `level` and checks feasibility. On conflict the
    /// assertion is undone and an explanation is returned. Asserting a
    /// negated equality is a logic error.
    auto assert_literal(Literal lit, std::uint32_t level) -> std::optional<Explanation>;

    /// Retracts every literal asserted above `level`.
    void backtrack(std::uint32_t level);

    auto check_sat() -> std::optional<Explanation>;

    /// Rational model for the original variables. Requires the last check to
    /// have been consistent.
    [[nodiscard]] auto extract_model() const -> std::vector<Rational>;

    /// Model that depends only on the asserted constraint set: variables are
    /// fixed in `order` (then any others ascending), each to the simplest
    /// dyadic rational (closest to zero, then smallest denominator) in its
    /// remaining feasible range. Requires a consistent state, which is
    /// restored afterwards.
    auto canonical_model(std::span<Var const> order = {}) -> std::vector<Rational>;

    auto probe_implied(std::span<Literal const> free) -> ProbeResult;

    [[nodiscard]] auto asserted() const -> std::vector<Literal>;
    [[nodiscard]] auto level() const -> std::uint32_t;
    [[nodiscard]] auto statistics() const -> Statistics const & { return stats_; }

private:
    struct Bound {
        DeltaRational value;
        Literal reason;
    };

    struct TrailEntry {
        Var var;
        bool upper;
        std::optional<Bound> previous;
        std::uint32_t level;
    };

    struct AtomInfo {
        Constraint constraint;
        Var var; // the variable the atom bounds: original or slack
    };

    using Row = std::map<Var, Rational>;

    auto new_var() -> Var;
    auto slack_for(LinearExpr const &expr) -> Var;
    auto set_bound(Var v, bool upper, DeltaRational value, Literal reason, std::uint32_t level)
        -> std::optional<Explanation>;
    void update(Var nonbasic, DeltaRational const &value);
    void pivot(Var basic, Var nonbasic);
    void pivot_and_update(Var basic, Var nonbasic, DeltaRational const &value);
    auto check() -> std::optional<Explanation>;
    void undo_to(std::size_t trail_size);

    [[nodiscard]] auto below_lower(Var v) const -> bool;
    [[nodiscard]] auto above_upper(Var v) const -> bool;

    std::vector<Var> originals_; // user variable -> tableau variable
    std::vector<DeltaRational> value_;
    std::vector<std::optional<Bound>> lower_;
    std::vector<std::optional<Bound>> upper_;
    std::vector<std::optional<Row>> rows_; // engaged for basic variables

    std::vector<AtomInfo> atoms_;
    std::map<Constraint, AtomId, ConstraintLess> atom_index_;
    std::map<LinearExpr, Var, ExprLess> slack_index_;

    std::vector<TrailEntry> trail_;
    std::vector<std::pair<Literal, std::uint32_t>> asserted_;
    bool consistent_ = true;
    Statistics stats_;
};

} // namespace sasp::lra
