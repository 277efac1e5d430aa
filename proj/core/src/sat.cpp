#include "sasp/sat.hpp"

#include <algorithm>
#include <random>

namespace sasp::sat {

auto Solver::new_var() -> Var {
    auto v = static_cast<Var>(value_.size());
    value_.push_back(Undef);
    level_.push_back(0);
    reason_.push_back(no_reason);
    seen_.push_back(false);
    polarity_.push_back(true);
    watches_.emplace_back();
    watches_.emplace_back();
    if (!custom_order_) {
        order_.push_back(v);
    }
    return v;
}

void Solver::set_order(std::vector<Var> order) {
    order_ = std::move(order);
    custom_order_ = true;
    order_head_ = 0;
}

void Solver::set_seed(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::shuffle(order_.begin(), order_.end(), rng);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t v = 0; v < polarity_.size(); ++v) {
        polarity_[v] = coin(rng);
    }
    custom_order_ = true;
    order_head_ = 0;
}

auto Solver::value(Lit l) const -> Value {
    auto v = value_[l.var()];
    if (v == Undef) {
        return Undef;
    }
    return (v == True) != l.negated() ? True : False;
}

void Solver::enqueue(Lit l, std::uint32_t reason) {
    value_[l.var()] = l.negated() ? False : True;
    level_[l.var()] = level();
    reason_[l.var()] = reason;
    trail_.push_back(l);
}

auto Solver::attach(Clause clause, bool learned) -> std::uint32_t {
    auto ref = static_cast<std::uint32_t>(clauses_.size());
    watches_[(~clause[0]).code()].push_back(ref);
    watches_[(~clause[1]).code()].push_back(ref);
    clauses_.push_back(std::move(clause));
    if (learned) {
        ++stats_.learned;
    }
    return ref;
}

auto Solver::add_clause(Clause clause) -> bool {
    if (unsat_) {
        return false;
    }
    backtrack(0);
    std::sort(clause.begin(), clause.end());
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    Clause kept;
    for (std::size_t i = 0; i < clause.size(); ++i) {
        if (i + 1 < clause.size() && clause[i + 1] == ~clause[i]) {
            return true; // tautology
        }
        auto v = value(clause[i]);
        if (v == True) {
            return true;
        }
        if (v == Undef) {
            kept.push_back(clause[i]);
        }
    }
    if (kept.empty()) {
        unsat_ = true;
        return false;
    }
    if (kept.size() == 1) {
        enqueue(kept[0], no_reason);
        return true;
    }
    attach(std::move(kept), false);
    return true;
}

auto Solver::propagate_clauses() -> std::optional<std::uint32_t> {
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        ++stats_.propagations;
        auto &watchers = watches_[p.code()];
        std::size_t keep = 0;
        for (std::size_t i = 0; i < watchers.size(); ++i) {
            auto ref = watchers[i];
            auto &c = clauses_[ref];
            Lit false_lit = ~p;
            if (c[0] == false_lit) {
                std::swap(c[0], c[1]);
            }
            if (value(c[0]) == True) {
                watchers[keep++] = ref;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (value(c[k]) != False) {
                    std::swap(c[1], c[k]);
                    watches_[(~c[1]).code()].push_back(ref);
                    moved = true;
                    break;
                }
            }
            if (moved) {
                continue;
            }
            watchers[keep++] = ref;
            if (value(c[0]) == False) {
                for (++i; i < watchers.size(); ++i) {
                    watchers[keep++] = watchers[i];
                }
                watchers.resize(keep);
                qhead_ = trail_.size();
                return ref;
            }
            enqueue(c[0], ref);
        }
        watchers.resize(keep);
    }
    return std::nullopt;
}

auto Solver::inject(Clause clause, bool &enqueued) -> std::optional<Clause> {
    // clause[0] is implied; the rest are false.
    auto v = value(clause[0]);
    if (v == True) {
        return std::nullopt;
    }
    if (v == False) {
        return clause;
    }
    if (clause.size() == 1) {
        if (level() == 0) {
            enqueue(clause[0], no_reason);
            enqueued = true;
        }
        return std::nullopt;
    }
    // Second watch on the deepest false literal.
    auto deepest = std::max_element(clause.begin() + 1, clause.end(),
                                    [&](Lit a, Lit b) { return level_[a.var()] < level_[b.var()]; });
    std::iter_swap(clause.begin() + 1, deepest);
    Lit implied = clause[0];
    auto ref = attach(std::move(clause), true);
    enqueue(implied, ref);
    enqueued = true;
    return std::nullopt;
}

auto Solver::propagate() -> std::optional<Clause> {
    while (true) {
        if (auto conflict = propagate_clauses()) {
            return clauses_[*conflict];
        }
        if (theory_ == nullptr) {
            return std::nullopt;
        }
        bool progressed = false;
        while (theory_head_ < trail_.size()) {
            Lit l = trail_[theory_head_++];
            if (auto conflict = theory_->assign(l, level_[l.var()])) {
                ++stats_.theory_conflicts;
                return conflict;
            }
        }
        for (auto &clause : theory_->propagate(level())) {
            if (auto conflict = inject(std::move(clause), progressed)) {
                return conflict;
            }
        }
        if (!progressed && qhead_ == trail_.size()) {
            return std::nullopt;
        }
    }
}

auto Solver::analyze(Clause const &conflict) -> std::pair<Clause, std::uint32_t> {
    Clause learnt{Lit{}};
    int pending = 0;
    std::optional<Lit> p;
    auto index = trail_.size();
    Clause const *clause = &conflict;
    while (true) {
        for (auto q : *clause) {
            if (p && q == *p) {
                continue;
            }
            auto v = q.var();
            if (!seen_[v] && level_[v] > 0) {
                seen_[v] = true;
                if (level_[v] == level()) {
                    ++pending;
                } else {
                    learnt.push_back(q);
                }
            }
        }
        do {
            --index;
        } while (!seen_[trail_[index].var()]);
        p = trail_[index];
        seen_[p->var()] = false;
        if (--pending == 0) {
            break;
        }
        clause = &clauses_[reason_[p->var()]];
    }
    learnt[0] = ~*p;
    std::uint32_t back = 0;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
        seen_[learnt[i].var()] = false;
        if (level_[learnt[i].var()] > back) {
            back = level_[learnt[i].var()];
            std::swap(learnt[1], learnt[i]);
        }
    }
    return {std::move(learnt), back};
}

void Solver::backtrack(std::uint32_t target) {
    if (level() <= target) {
        return;
    }
    auto mark = trail_lim_[target];
    for (auto i = trail_.size(); i > mark; --i) {
        auto v = trail_[i - 1].var();
        value_[v] = Undef;
        reason_[v] = no_reason;
    }
    trail_.resize(mark);
    trail_lim_.resize(target);
    qhead_ = std::min(qhead_, mark);
    theory_head_ = std::min(theory_head_, mark);
    order_head_ = 0;
    if (theory_ != nullptr) {
        theory_->backtrack(target);
    }
}

auto Solver::pick_branch() -> std::optional<Lit> {
    while (order_head_ < order_.size() && value_[order_[order_head_]] != Undef) {
        ++order_head_;
    }
    if (order_head_ == order_.size()) {
        // Variables created after a custom order was set.
        for (Var v = 0; v < value_.size(); ++v) {
            if (value_[v] == Undef) {
                return Lit{v, polarity_[v]};
            }
        }
        return std::nullopt;
    }
    auto v = order_[order_head_];
    return Lit{v, polarity_[v]};
}

auto Solver::out_of_time() const -> bool { return deadline_ && std::chrono::steady_clock::now() > *deadline_; }

auto Solver::solve() -> Result {
    if (unsat_) {
        return Result::Unsat;
    }
    backtrack(0);
    std::uint64_t steps = 0;
    while (true) {
        if (auto conflict = propagate()) {
            ++stats_.conflicts;
            std::uint32_t top = 0;
            for (auto l : *conflict) {
                top = std::max(top, level_[l.var()]);
            }
            if (top == 0) {
                unsat_ = true;
                backtrack(0);
                return Result::Unsat;
            }
            // A theory clause may not mention the newest level.
            backtrack(top);
            auto [learnt, back] = analyze(*conflict);
            backtrack(back);
            if (learnt.size() == 1) {
                enqueue(learnt[0], no_reason);
            } else {
                Lit asserting = learnt[0];
                auto ref = attach(std::move(learnt), true);
                enqueue(asserting, ref);
            }
            continue;
        }
        if ((++steps & 63U) == 0 && out_of_time()) {
            backtrack(0);
            return Result::Unknown;
        }
        auto branch = pick_branch();
        if (!branch) {
            model_.assign(value_.size(), false);
            for (Var v = 0; v < value_.size(); ++v) {
                model_[v] = value_[v] == True;
            }
            return Result::Sat;
        }
        ++stats_.decisions;
        trail_lim_.push_back(trail_.size());
        enqueue(*branch, no_reason);
    }
}

} // namespace sasp::sat
