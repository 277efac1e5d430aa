#include "sasp/solver.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sasp {

namespace {

using sat::Clause;
using sat::Lit;

class Encoder {
public:
    Encoder(GroundProgram const &ground, geometry::InequalityTable const &table)
        : ground_(ground) {
        auto n = ground.atoms.size();
        db_.atom_var.assign(n + 1, 0);
        for (AtomId id = 1; id <= n; ++id) {
            db_.atom_var[id] = fresh();
            db_.order.push_back(db_.atom_var[id]);
        }
        db_.inequality_base = static_cast<sat::Var>(db_.num_vars);
        db_.num_inequalities = table.size();
        for (std::size_t i = 0; i < table.size(); ++i) {
            db_.order.push_back(fresh());
        }
        db_.top = fresh();
        db_.order.push_back(db_.top);
        add({true_lit()});
    }

    auto run(std::vector<geometry::SpatialDefinition> const &defs, std::vector<geometry::Formula> const &background)
        -> NogoodDatabase {
        encode_rules();
        for (auto const &def : defs) {
            equate(atom(def.atom), formula(def.formula));
        }
        for (auto const &card : ground_.cardinalities) {
            equate(atom(card.defined), cardinality(card));
        }
        for (auto const &f : background) {
            add({formula(f)});
        }
        return std::move(db_);
    }

private:
    auto fresh() -> sat::Var { return static_cast<sat::Var>(db_.num_vars++); }

    auto aux() -> sat::Var {
        auto v = fresh();
        db_.order.push_back(v);
        return v;
    }

    [[nodiscard]] auto true_lit() const -> Lit { return sat::pos(db_.top); }
    [[nodiscard]] auto false_lit() const -> Lit { return sat::neg(db_.top); }
    [[nodiscard]] auto atom(AtomId id) const -> Lit { return sat::pos(db_.atom_var.at(id)); }

    auto literal(GroundLiteral const &l) const -> Lit { return l.negated ? ~atom(l.atom) : atom(l.atom); }

    void add(Clause clause) { db_.clauses.push_back(std::move(clause)); }

    void equate(Lit a, Lit b) {
        add({~a, b});
        add({a, ~b});
    }

    auto and_gate(std::vector<Lit> lits) -> Lit {
        std::erase(lits, true_lit());
        if (std::find(lits.begin(), lits.end(), false_lit()) != lits.end()) {
            return false_lit();
        }
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        if (lits.empty()) {
            return true_lit();
        }
        if (lits.size() == 1) {
            return lits.front();
        }
        if (auto it = and_cache_.find(lits); it != and_cache_.end()) {
            return it->second;
        }
        auto g = sat::pos(aux());
        Clause back{g};
        for (auto l : lits) {
            add({~g, l});
            back.push_back(~l);
        }
        add(std::move(back));
        and_cache_.emplace(lits, g);
        return g;
    }

    auto or_gate(std::vector<Lit> lits) -> Lit {
        for (auto &l : lits) {
            l = ~l;
        }
        return ~and_gate(std::move(lits));
    }

    auto formula(geometry::Formula const &f) -> Lit {
        using Kind = geometry::Formula::Kind;
        switch (f.kind) {
        case Kind::True:
            return true_lit();
        case Kind::False:
            return false_lit();
        case Kind::Atom:
            return sat::pos(db_.inequality_base + f.atom);
        case Kind::Not:
            return ~formula(f.children.front());
        case Kind::And:
        case Kind::Or: {
            std::vector<Lit> lits;
            for (auto const &c : f.children) {
                lits.push_back(formula(c));
            }
            return f.kind == Kind::And ? and_gate(std::move(lits)) : or_gate(std::move(lits));
        }
        }
        return false_lit();
    }

    void encode_rules() {
        std::map<AtomId, std::vector<Lit>> supports;
        for (auto const &rule : ground_.rules) {
            std::vector<Lit> body;
            for (auto const &l : rule.body) {
                body.push_back(literal(l));
            }
            if (!rule.head) {
                Clause c;
                for (auto l : body) {
                    c.push_back(~l);
                }
                add(std::move(c));
                continue;
            }
            auto b = and_gate(std::move(body));
            add({~b, atom(*rule.head)});
            supports[*rule.head].push_back(b);
        }
        // Completion: a regular atom needs a rule with a true body. Spatial
        // atoms are free.
        for (AtomId id = 1; id <= ground_.atoms.size(); ++id) {
            if (ground_.atoms.at(id).kind != AtomKind::Regular) {
                continue;
            }
            Clause c{~atom(id)};
            if (auto it = supports.find(id); it != supports.end()) {
                c.insert(c.end(), it->second.begin(), it->second.end());
            }
            add(std::move(c));
        }
    }

    /// Literal true iff the number of true elements satisfies the guard.
    auto cardinality(CardinalityConstraint const &card) -> Lit {
        std::vector<Lit> xs;
        for (auto const &l : card.literals) {
            xs.push_back(literal(l));
        }
        auto n = static_cast<long>(xs.size());
        auto clamp = [&](BigInt const &k) -> long {
            if (k < 0) {
                return 0;
            }
            if (k > n + 1) {
                return n + 1;
            }
            return k.get_si();
        };
        long k = clamp(card.bound);
        long k1 = clamp(card.bound + 1);
        long needed = std::min(n, std::max(k, k1));
        auto ge = counter(xs, needed);
        auto at_least = [&](long j) -> Lit {
            if (j <= 0) {
                return true_lit();
            }
            if (j > n) {
                return false_lit();
            }
            return ge[j];
        };
        switch (card.guard) {
        case CompareOp::Ge:
            return card.bound <= 0 ? true_lit() : at_least(k);
        case CompareOp::Gt:
            return card.bound < 0 ? true_lit() : at_least(k1);
        case CompareOp::Le:
            return card.bound < 0 ? false_lit() : ~at_least(k1);
        case CompareOp::Lt:
            return card.bound <= 0 ? false_lit() : ~at_least(k);
        case CompareOp::Eq:
            return card.bound < 0 ? false_lit() : and_gate({at_least(k), ~at_least(k1)});
        case CompareOp::Ne:
            return card.bound < 0 ? true_lit() : or_gate({~at_least(k), at_least(k1)});
        }
        return false_lit();
    }

    /// Sequential counter: result[j] holds iff at least j of `xs` are true,
    /// for j in 1..limit. Both directions are encoded.
    auto counter(std::vector<Lit> const &xs, long limit) -> std::vector<Lit> {
        std::vector<Lit> prev(static_cast<std::size_t>(limit) + 1, false_lit());
        prev[0] = true_lit();
        for (auto x : xs) {
            std::vector<Lit> cur(prev.size(), false_lit());
            cur[0] = true_lit();
            for (long j = 1; j <= limit; ++j) {
                auto carry = and_gate({prev[static_cast<std::size_t>(j - 1)], x});
                cur[static_cast<std::size_t>(j)] = or_gate({prev[static_cast<std::size_t>(j)], carry});
            }
            prev = std::move(cur);
        }
        return prev;
    }

    GroundProgram const &ground_;
    NogoodDatabase db_;
    std::map<std::vector<Lit>, Lit> and_cache_;
};

} // namespace

auto build_nogoods(GroundProgram const &ground, std::vector<geometry::SpatialDefinition> const &defs,
                   std::vector<geometry::Formula> const &background, geometry::InequalityTable const &table)
    -> NogoodDatabase {
    return Encoder{ground, table}.run(defs, background);
}

} // namespace sasp
