#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sasp::sat {

using Var = std::uint32_t;

class Lit {
public:
    Lit() = default;
    Lit(Var var, bool negated)
        : code_(2 * var + (negated ? 1U : 0U)) {}

    [[nodiscard]] auto var() const -> Var { return code_ >> 1U; }
    [[nodiscard]] auto negated() const -> bool { return (code_ & 1U) != 0; }
    [[nodiscard]] auto code() const -> std::uint32_t { return code_; }
    [[nodiscard]] auto operator~() const -> Lit {
        Lit l;
        l.code_ = code_ ^ 1U;
        return l;
    }

    friend auto operator==(Lit, Lit) -> bool = default;
    friend auto operator<=>(Lit, Lit) = default;

private:
    std::uint32_t code_ = 0;
};

[[nodiscard]] inline auto pos(Var v) -> Lit { return {v, false}; }
[[nodiscard]] inline auto neg(Var v) -> Lit { return {v, true}; }

using Clause = std::vector<Lit>;

/// Receives every assigned literal in trail order. A returned clause must be
/// false under the current assignment.
class TheoryHook {
public:
    virtual ~TheoryHook() = default;

    virtual auto assign(Lit lit, std::uint32_t level) -> std::optional<Clause> = 0;
    virtual void backtrack(std::uint32_t level) = 0;

    /// Clauses whose first literal is implied by the current assignment and
    /// whose other literals are false. Called when propagation is quiet.
    virtual auto propagate(std::uint32_t /*level*/) -> std::vector<Clause> { return {}; }
};

enum class Result { Sat, Unsat, Unknown };

struct Statistics {
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;
    std::uint64_t theory_conflicts = 0;
    std::uint64_t learned = 0;
};

/// Conflict-driven clause learning with two watched literals and first-UIP
/// learning. Decisions follow a fixed variable order with false polarity;
/// a seed shuffles the order and randomizes polarity.
class Solver {
public:
    auto new_var() -> Var;
    [[nodiscard]] auto num_vars() const -> std::size_t { return value_.size(); }

    /// Adds a permanent clause. May be called between solve() calls.
    /// Returns false once the clause set is known to be unsatisfiable.
    auto add_clause(Clause clause) -> bool;

    void set_theory(TheoryHook *theory) { theory_ = theory; }
    void set_order(std::vector<Var> order);
    void set_seed(std::uint64_t seed);
    void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) { deadline_ = deadline; }

    auto solve() -> Result;

    /// Truth value of `v` in the last model.
    [[nodiscard]] auto model_value(Var v) const -> bool { return model_.at(v); }
    [[nodiscard]] auto model() const -> std::vector<bool> const & { return model_; }
    [[nodiscard]] auto statistics() const -> Statistics const & { return stats_; }

private:
    enum Value : std::int8_t { False = 0, True = 1, Undef = 2 };
    static constexpr std::uint32_t no_reason = UINT32_MAX;

    [[nodiscard]] auto value(Lit l) const -> Value;
    [[nodiscard]] auto level() const -> std::uint32_t { return static_cast<std::uint32_t>(trail_lim_.size()); }
    void enqueue(Lit l, std::uint32_t reason);
    auto attach(Clause clause, bool learned) -> std::uint32_t;
    auto propagate_clauses() -> std::optional<std::uint32_t>;
    auto propagate() -> std::optional<Clause>;
    auto inject(Clause clause, bool &enqueued) -> std::optional<Clause>;
    auto analyze(Clause const &conflict) -> std::pair<Clause, std::uint32_t>;
    void backtrack(std::uint32_t level);
    auto pick_branch() -> std::optional<Lit>;
    [[nodiscard]] auto out_of_time() const -> bool;

    std::vector<Clause> clauses_;
    std::vector<std::vector<std::uint32_t>> watches_; // by literal code
    std::vector<Value> value_;
    std::vector<std::uint32_t> level_;
    std::vector<std::uint32_t> reason_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    std::size_t theory_head_ = 0;
    std::vector<bool> seen_;

    std::vector<Var> order_;
    bool custom_order_ = false;
    std::vector<bool> polarity_; // true: branch on the negative literal
    std::size_t order_head_ = 0;

    TheoryHook *theory_ = nullptr;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::vector<bool> model_;
    bool unsat_ = false;
    Statistics stats_;
};

} // namespace sasp::sat
