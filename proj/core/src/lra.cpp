#include "sasp/lra.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sasp::lra {

// ---------------------------------------------------------------------------
// DeltaRational

auto DeltaRational::operator+=(DeltaRational const &rhs) -> DeltaRational & {
    real_ += rhs.real_;
    delta_ += rhs.delta_;
    return *this;
}

auto DeltaRational::operator-=(DeltaRational const &rhs) -> DeltaRational & {
    real_ -= rhs.real_;
    delta_ -= rhs.delta_;
    return *this;
}

auto DeltaRational::operator*=(Rational const &k) -> DeltaRational & {
    real_ *= k;
    delta_ *= k;
    return *this;
}

auto operator/(DeltaRational lhs, Rational const &k) -> DeltaRational {
    lhs.real_ /= k;
    lhs.delta_ /= k;
    return lhs;
}

auto operator<=>(DeltaRational const &lhs, DeltaRational const &rhs) -> std::strong_ordering {
    if (auto c = cmp(lhs.real_, rhs.real_); c != 0) {
        return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    auto c = cmp(lhs.delta_, rhs.delta_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

auto to_string(DeltaRational const &value) -> std::string {
    if (value.delta() == 0) {
        return value.real().get_str();
    }
    return value.real().get_str() + (value.delta() > 0 ? "+" : "") + value.delta().get_str() + "d";
}

// ---------------------------------------------------------------------------
// Constraints

auto to_string(Relop op) -> std::string_view {
    switch (op) {
    case Relop::Lt:
        return "<";
    case Relop::Le:
        return "<=";
    case Relop::Eq:
        return "=";
    }
    return "?";
}

auto to_string(Constraint const &c) -> std::string {
    std::ostringstream out;
    for (std::size_t i = 0; i < c.lhs.size(); ++i) {
        auto const &t = c.lhs[i];
        if (i > 0) {
            out << (t.coeff < 0 ? " - " : " + ");
        } else if (t.coeff < 0) {
            out << '-';
        }
        Rational mag = abs(t.coeff);
        if (mag != 1) {
            out << mag.get_str() << '*';
        }
        out << 'v' << t.var;
    }
    out << ' ' << to_string(c.op) << ' ' << c.rhs.get_str();
    return out.str();
}

auto normalize(LinearExpr expr, CompareOp op, Rational rhs) -> std::variant<bool, NormalizedComparison> {
    std::stable_sort(expr.begin(), expr.end(), [](auto const &a, auto const &b) { return a.var < b.var; });
    LinearExpr merged;
    for (auto &t : expr) {
        if (!merged.empty() && merged.back().var == t.var) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(std::move(t));
        }
    }
    std::erase_if(merged, [](LinearTerm const &t) { return t.coeff == 0; });

    if (merged.empty()) {
        return holds(op, cmp(Rational(0), rhs));
    }

    Rational k = merged.front().coeff;
    for (auto &t : merged) {
        t.coeff /= k;
    }
    rhs /= k;
    if (k < 0) {
        switch (op) {
        case CompareOp::Lt:
            op = CompareOp::Gt;
            break;
        case CompareOp::Le:
            op = CompareOp::Ge;
            break;
        case CompareOp::Gt:
            op = CompareOp::Lt;
            break;
        case CompareOp::Ge:
            op = CompareOp::Le;
            break;
        default:
            break;
        }
    }

    NormalizedComparison out;
    out.constraint.lhs = std::move(merged);
    out.constraint.rhs = std::move(rhs);
    switch (op) {
    case CompareOp::Lt:
        out.constraint.op = Relop::Lt;
        break;
    case CompareOp::Le:
        out.constraint.op = Relop::Le;
        break;
    case CompareOp::Gt:
        out.constraint.op = Relop::Le;
        out.negated = true;
        break;
    case CompareOp::Ge:
        out.constraint.op = Relop::Lt;
        out.negated = true;
        break;
    case CompareOp::Eq:
        out.constraint.op = Relop::Eq;
        break;
    case CompareOp::Ne:
        out.constraint.op = Relop::Eq;
        out.negated = true;
        break;
    }
    return out;
}

auto evaluate(Constraint const &c, std::span<Rational const> values) -> bool {
    Rational sum = 0;
    for (auto const &t : c.lhs) {
        if (t.var >= values.size()) {
            throw std::out_of_range("no value for variable v" + std::to_string(t.var));
        }
        sum += t.coeff * values[t.var];
    }
    switch (c.op) {
    case Relop::Lt:
        return sum < c.rhs;
    case Relop::Le:
        return sum <= c.rhs;
    case Relop::Eq:
        return sum == c.rhs;
    }
    return false;
}

auto ExprLess::operator()(LinearExpr const &lhs, LinearExpr const &rhs) const -> bool {
    return std::lexicographical_compare(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                                        [](LinearTerm const &a, LinearTerm const &b) {
                                            return a.var != b.var ? a.var < b.var : a.coeff < b.coeff;
                                        });
}

auto ConstraintLess::operator()(Constraint const &lhs, Constraint const &rhs) const -> bool {
    if (ExprLess{}(lhs.lhs, rhs.lhs)) {
        return true;
    }
    if (ExprLess{}(rhs.lhs, lhs.lhs)) {
        return false;
    }
    if (lhs.op != rhs.op) {
        return lhs.op < rhs.op;
    }
    return lhs.rhs < rhs.rhs;
}

// ---------------------------------------------------------------------------
// Solver

auto Solver::new_var() -> Var {
    auto v = static_cast<Var>(value_.size());
    value_.emplace_back();
    lower_.emplace_back();
    upper_.emplace_back();
    rows_.emplace_back();
    return v;
}

auto Solver::add_variable() -> Var {
    originals_.push_back(new_var());
    return static_cast<Var>(originals_.size() - 1);
}

auto Solver::slack_for(LinearExpr const &expr) -> Var {
    if (auto it = slack_index_.find(expr); it != slack_index_.end()) {
        return it->second;
    }
    Row row;
    for (auto const &t : expr) {
        auto v = originals_[t.var];
        if (rows_[v]) {
            for (auto const &[w, a] : *rows_[v]) {
                row[w] += t.coeff * a;
            }
        } else {
            row[v] += t.coeff;
        }
    }
    std::erase_if(row, [](auto const &entry) { return entry.second == 0; });
    auto s = new_var();
    DeltaRational value;
    for (auto const &[w, a] : row) {
        value += value_[w] * a;
    }
    value_[s] = value;
    rows_[s] = std::move(row);
    slack_index_.emplace(expr, s);
    return s;
}

auto Solver::add_atom(Constraint const &constraint) -> AtomId {
    if (auto it = atom_index_.find(constraint); it != atom_index_.end()) {
        return it->second;
    }
    if (constraint.lhs.empty()) {
        throw std::invalid_argument("constraint without variables");
    }
    for (auto const &t : constraint.lhs) {
        if (t.var >= originals_.size()) {
            throw std::out_of_range("unregistered variable v" + std::to_string(t.var));
        }
    }
    Var v = constraint.lhs.size() == 1 && constraint.lhs[0].coeff == 1 ? originals_[constraint.lhs[0].var]
                                                                         : slack_for(constraint.lhs);
    auto id = static_cast<AtomId>(atoms_.size());
    atoms_.push_back({constraint, v});
    atom_index_.emplace(constraint, id);
    return id;
}

auto Solver::find_atom(Constraint const &constraint) const -> std::optional<AtomId> {
    if (auto it = atom_index_.find(constraint); it != atom_index_.end()) {
        return it->second;
    }
    return std::nullopt;
}

auto Solver::atom(AtomId id) const -> Constraint const & { return atoms_.at(id).constraint; }

auto Solver::below_lower(Var v) const -> bool { return lower_[v] && value_[v] < lower_[v]->value; }

auto Solver::above_upper(Var v) const -> bool { return upper_[v] && value_[v] > upper_[v]->value; }

auto Solver::set_bound(Var v, bool upper, DeltaRational value, Literal reason, std::uint32_t level)
    -> std::optional<Explanation> {
    auto &mine = upper ? upper_[v] : lower_[v];
    auto const &other = upper ? lower_[v] : upper_[v];
    if (mine && (upper ? mine->value <= value : mine->value >= value)) {
        return std::nullopt;
    }
    if (other && (upper ? value < other->value : value > other->value)) {
        return Explanation{reason, other->reason};
    }
    trail_.push_back({v, upper, mine, level});
    mine = Bound{value, reason};
    if (!rows_[v] && (upper ? value_[v] > value : value_[v] < value)) {
        update(v, value);
    }
    return std::nullopt;
}

void Solver::update(Var nonbasic, DeltaRational const &value) {
    auto diff = value - value_[nonbasic];
    for (Var b = 0; b < rows_.size(); ++b) {
        if (!rows_[b]) {
            continue;
        }
        if (auto it = rows_[b]->find(nonbasic); it != rows_[b]->end()) {
            value_[b] += diff * it->second;
        }
    }
    value_[nonbasic] = value;
}

void Solver::pivot(Var basic, Var nonbasic) {
    Row row = std::move(*rows_[basic]);
    rows_[basic].reset();
    Rational a = row.at(nonbasic);
    row.erase(nonbasic);
    Row solved;
    solved[basic] = 1 / a;
    for (auto const &[w, c] : row) {
        solved[w] = -c / a;
    }
    for (Var k = 0; k < rows_.size(); ++k) {
        if (!rows_[k]) {
            continue;
        }
        auto it = rows_[k]->find(nonbasic);
        if (it == rows_[k]->end()) {
            continue;
        }
        Rational c = it->second;
        rows_[k]->erase(it);
        for (auto const &[w, d] : solved) {
            auto &entry = (*rows_[k])[w];
            entry += c * d;
            if (entry == 0) {
                rows_[k]->erase(w);
            }
        }
    }
    rows_[nonbasic] = std::move(solved);
    ++stats_.pivots;
}

void Solver::pivot_and_update(Var basic, Var nonbasic, DeltaRational const &value) {
    Rational a = rows_[basic]->at(nonbasic);
    auto theta = (value - value_[basic]) / a;
    value_[basic] = value;
    value_[nonbasic] += theta;
    for (Var k = 0; k < rows_.size(); ++k) {
        if (k == basic || !rows_[k]) {
            continue;
        }
        if (auto it = rows_[k]->find(nonbasic); it != rows_[k]->end()) {
            value_[k] += theta * it->second;
        }
    }
    pivot(basic, nonbasic);
}

auto Solver::check() -> std::optional<Explanation> {
    ++stats_.checks;
    while (true) {
        Var b = 0;
        bool found = false;
        for (; b < rows_.size(); ++b) {
            if (rows_[b] && (below_lower(b) || above_upper(b))) {
                found = true;
                break;
            }
        }
        if (!found) {
            consistent_ = true;
            return std::nullopt;
        }
        bool increase = below_lower(b);
        auto can_increase = [&](Var v) { return !upper_[v] || value_[v] < upper_[v]->value; };
        auto can_decrease = [&](Var v) { return !lower_[v] || value_[v] > lower_[v]->value; };
        std::optional<Var> entering;
        for (auto const &[n, a] : *rows_[b]) {
            bool up = (a > 0) == increase;
            if (up ? can_increase(n) : can_decrease(n)) {
                entering = n;
                break;
            }
        }
        if (!entering) {
            // Farkas certificate: the violated bound of b together with the
            // bounds blocking every nonbasic variable of its row.
            Explanation why;
            why.push_back(increase ? lower_[b]->reason : upper_[b]->reason);
            for (auto const &[n, a] : *rows_[b]) {
                bool up = (a > 0) == increase;
                why.push_back(up ? upper_[n]->reason : lower_[n]->reason);
            }
            std::sort(why.begin(), why.end());
            why.erase(std::unique(why.begin(), why.end()), why.end());
            consistent_ = false;
            return why;
        }
        pivot_and_update(b, *entering, increase ? lower_[b]->value : upper_[b]->value);
    }
}

void Solver::undo_to(std::size_t trail_size) {
    while (trail_.size() > trail_size) {
        auto &entry = trail_.back();
        (entry.upper ? upper_ : lower_)[entry.var] = std::move(entry.previous);
        trail_.pop_back();
    }
}

auto Solver::assert_literal(Literal lit, std::uint32_t level) -> std::optional<Explanation> {
    auto const &info = atoms_.at(lit.atom);
    auto const &c = info.constraint;
    auto mark = trail_.size();
    std::optional<Explanation> conflict;
    switch (c.op) {
    case Relop::Lt:
        conflict = lit.negated ? set_bound(info.var, false, DeltaRational(c.rhs), lit, level)
                               : set_bound(info.var, true, DeltaRational(c.rhs, -1), lit, level);
        break;
    case Relop::Le:
        conflict = lit.negated ? set_bound(info.var, false, DeltaRational(c.rhs, 1), lit, level)
                               : set_bound(info.var, true, DeltaRational(c.rhs), lit, level);
        break;
    case Relop::Eq:
        if (lit.negated) {
            throw std::logic_error("negated equality cannot be asserted as a bound");
        }
        conflict = set_bound(info.var, true, DeltaRational(c.rhs), lit, level);
        if (!conflict) {
            conflict = set_bound(info.var, false, DeltaRational(c.rhs), lit, level);
        }
        break;
    }
    asserted_.emplace_back(lit, level);
    if (!conflict) {
        conflict = check();
    }
    if (conflict) {
        undo_to(mark);
        asserted_.pop_back();
        ++stats_.conflicts;
    }
    return conflict;
}

void Solver::backtrack(std::uint32_t level) {
    auto mark = trail_.size();
    while (mark > 0 && trail_[mark - 1].level > level) {
        --mark;
    }
    undo_to(mark);
    while (!asserted_.empty() && asserted_.back().second > level) {
        asserted_.pop_back();
    }
}

auto Solver::check_sat() -> std::optional<Explanation> { return check(); }

auto Solver::extract_model() const -> std::vector<Rational> {
    if (!consistent_) {
        throw std::logic_error("no model: the last check found a conflict");
    }
    // Largest epsilon keeping every bound, then halved.
    std::optional<Rational> limit;
    auto refine = [&](DeltaRational const &lo, DeltaRational const &hi) {
        if (lo.real() < hi.real() && lo.delta() > hi.delta()) {
            Rational r = (hi.real() - lo.real()) / (lo.delta() - hi.delta());
            if (!limit || r < *limit) {
                limit = r;
            }
        }
    };
    for (Var v = 0; v < value_.size(); ++v) {
        if (lower_[v]) {
            refine(lower_[v]->value, value_[v]);
        }
        if (upper_[v]) {
            refine(value_[v], upper_[v]->value);
        }
    }
    Rational epsilon = limit ? Rational(*limit / 2) : Rational(1);
    std::vector<Rational> model;
    model.reserve(originals_.size());
    for (auto v : originals_) {
        model.push_back(value_[v].concretize(epsilon));
    }
    return model;
}

auto Solver::canonical_model(std::span<Var const> order) -> std::vector<Rational> {
    if (check()) {
        throw std::logic_error("no model: the asserted constraints are infeasible");
    }
    auto base = level();
    auto fixed = base + 1;
    auto probe = base + 2;
    auto bound = [&](Var x, Relop op, Rational const &c, bool negated) {
        return Literal{add_atom({{{x, 1}}, op, c}), negated};
    };
    auto feasible = [&](Literal lit) {
        if (assert_literal(lit, probe)) {
            return false;
        }
        backtrack(fixed);
        return true;
    };
    auto ceiling = [](Rational const &q) {
        mpz_class r;
        mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
        return r;
    };
    std::vector<Var> sequence(order.begin(), order.end());
    for (Var x = 0; x < originals_.size(); ++x) {
        if (std::find(order.begin(), order.end(), x) == order.end()) {
            sequence.push_back(x);
        }
    }
    std::vector<Rational> model(originals_.size());
    for (auto x : sequence) {
        check();
        Rational v = extract_model()[x];
        Rational choice = v;
        if (feasible(bound(x, Relop::Lt, v, false)) || feasible(bound(x, Relop::Le, v, true))) {
            // Mirror so that the search runs over a positive range.
            int sign = v < 0 ? -1 : 1;
            Rational magnitude = abs(v);
            auto at_most = [&](Rational const &m) {
                return sign > 0 ? feasible(bound(x, Relop::Le, m, false)) : feasible(bound(x, Relop::Lt, -m, true));
            };
            bool found = feasible(bound(x, Relop::Eq, 0, false));
            if (found) {
                choice = 0;
            }
            for (Rational step = 1; !found; step /= 2) {
                // Smallest grid point k * step whose side of the range is feasible.
                mpz_class lo = 0;
                mpz_class hi = ceiling(magnitude / step);
                while (hi - lo > 1) {
                    mpz_class mid = (lo + hi) / 2;
                    if (at_most(Rational(mid) * step)) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                Rational candidate = Rational(hi) * step * sign;
                if (feasible(bound(x, Relop::Eq, candidate, false))) {
                    choice = candidate;
                    found = true;
                }
            }
        }
        if (assert_literal(bound(x, Relop::Eq, choice, false), fixed)) {
            throw std::logic_error("canonical value left the feasible range");
        }
        model[x] = choice;
    }
    backtrack(base);
    check();
    return model;
}

auto Solver::level() const -> std::uint32_t { return asserted_.empty() ? 0 : asserted_.back().second; }

auto Solver::asserted() const -> std::vector<Literal> {
    std::vector<Literal> out;
    out.reserve(asserted_.size());
    for (auto const &[lit, level] : asserted_) {
        out.push_back(lit);
    }
    return out;
}

auto Solver::probe_implied(std::span<Literal const> free) -> ProbeResult {
    ProbeResult result;
    auto base = level();
    auto probe = base + 1;
    for (auto lit : free) {
        if (!(lit.negated && atoms_.at(lit.atom).constraint.op == Relop::Eq)) {
            if (auto why = assert_literal(lit, probe)) {
                result.refuted.push_back(lit);
                result.refuted_reasons.push_back(std::move(*why));
                continue;
            }
            backtrack(base);
        }
        Literal flipped{lit.atom, !lit.negated};
        if (flipped.negated && atoms_.at(lit.atom).constraint.op == Relop::Eq) {
            continue;
        }
        if (auto why = assert_literal(flipped, probe)) {
            result.implied.push_back(lit);
            result.implied_reasons.push_back(std::move(*why));
        } else {
            backtrack(base);
        }
    }
    return result;
}

} // namespace sasp::lra
