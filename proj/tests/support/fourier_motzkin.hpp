#pragma once

#include "sasp/lra.hpp"

#include <vector>

namespace sasp::oracle {

/// `sum coeffs[i] * x_i < rhs` (strict) or `<= rhs`.
struct Row {
    std::vector<Rational> coeffs;
    bool strict = false;
    Rational rhs;
};

/// Decides feasibility over the rationals by Fourier-Motzkin elimination.
[[nodiscard]] auto fm_feasible(std::vector<Row> rows, std::size_t num_vars) -> bool;

/// Alternatives (a disjunction of row conjunctions) expressing a signed
/// normal-form constraint. Only a negated equality has two alternatives.
[[nodiscard]] auto rows_for(lra::Constraint const &c, bool negated, std::size_t num_vars)
    -> std::vector<std::vector<Row>>;

} // namespace sasp::oracle
