#include "stable_oracle.hpp"

#include "fourier_motzkin.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace sasp::oracle {

namespace {

template <class T>
auto pick(std::mt19937_64 &rng, std::vector<T> const &items) -> T const & {
    return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

auto chance(std::mt19937_64 &rng, double p) -> bool { return std::bernoulli_distribution(p)(rng); }

auto uniform(std::mt19937_64 &rng, std::size_t lo, std::size_t hi) -> std::size_t {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

struct SpatialPool {
    std::vector<std::string> atoms;
    std::vector<std::string> points;
};

auto spatial_pool(std::size_t points, std::size_t rects) -> SpatialPool {
    SpatialPool pool;
    std::vector<std::string> rs;
    for (std::size_t i = 0; i < points; ++i) {
        pool.points.push_back("p" + std::to_string(i));
    }
    for (std::size_t i = 0; i < rects; ++i) {
        rs.push_back("r" + std::to_string(i));
    }
    for (auto const &rel : {"samePlace_pp", "left_pp", "right_pp", "above_pp", "below_pp"}) {
        for (auto const &a : pool.points) {
            for (auto const &b : pool.points) {
                if (a != b) {
                    pool.atoms.push_back(std::string(rel) + "(" + a + "," + b + ")");
                }
            }
        }
    }
    for (auto const &rel : {"leftmost_p", "rightmost_p", "uppermost_p", "lowermost_p"}) {
        for (auto const &a : pool.points) {
            pool.atoms.push_back(std::string(rel) + "(" + a + ")");
        }
    }
    for (auto const &a : pool.points) {
        for (auto const &r : rs) {
            pool.atoms.push_back("in_pr(" + a + "," + r + ")");
        }
    }
    for (auto const &rel : {"left_rr", "right_rr", "overlap_rr"}) {
        for (auto const &a : rs) {
            for (auto const &b : rs) {
                if (a != b) {
                    pool.atoms.push_back(std::string(rel) + "(" + a + "," + b + ")");
                }
            }
        }
    }
    return pool;
}

} // namespace

auto random_tight_program(std::mt19937_64 &rng, RandomProgramOptions const &options) -> std::string {
    auto np = uniform(rng, 2, options.max_points);
    auto nr = uniform(rng, 0, options.max_rects);
    auto pool = spatial_pool(np, nr);
    std::set<std::string> occurring;

    // Spatial atoms used by plain literals.
    std::vector<std::string> chosen;
    auto budget = uniform(rng, 2, std::min<std::size_t>(options.max_spatial, 9));
    while (chosen.size() < budget) {
        auto const &a = pick(rng, pool.atoms);
        if (occurring.insert(a).second) {
            chosen.push_back(a);
        }
    }

    std::ostringstream out;
    out << "point(";
    for (std::size_t i = 0; i < np; ++i) {
        out << (i ? ";" : "") << pool.points[i];
    }
    out << ").\n";
    if (nr > 0) {
        out << "rect(";
        for (std::size_t i = 0; i < nr; ++i) {
            out << (i ? ";" : "") << "r" << i;
        }
        out << ").\n";
    }
    std::size_t regular_budget = options.max_regular - np - nr;

    std::vector<std::vector<std::string>> layers(3);
    std::size_t n_regular = 0;
    for (std::size_t k = 0; k < layers.size(); ++k) {
        auto count = uniform(rng, 1, 4);
        for (std::size_t i = 0; i < count && n_regular < regular_budget; ++i, ++n_regular) {
            layers[k].push_back("a" + std::to_string(k) + "_" + std::to_string(i));
        }
    }

    auto aggregate = [&]() -> std::optional<std::string> {
        auto const &target = pick(rng, pool.points);
        std::string rel = chance(rng, 0.5) ? "left_pp" : "above_pp";
        std::vector<std::string> elems;
        for (auto const &p : pool.points) {
            if (p != target) {
                elems.push_back(rel + "(" + p + "," + target + ")");
            }
        }
        std::set<std::string> merged = occurring;
        merged.insert(elems.begin(), elems.end());
        if (merged.size() > options.max_spatial) {
            return std::nullopt;
        }
        occurring = std::move(merged);
        static constexpr std::array<char const *, 6> ops{"=", "!=", "<", "<=", ">", ">="};
        return "#count{X : " + rel + "(X, " + target + ")} " + ops[uniform(rng, 0, ops.size() - 1)] + " " +
               std::to_string(uniform(rng, 0, 3));
    };

    auto body = [&](std::size_t below_layer) {
        std::vector<std::string> lits;
        auto n = uniform(rng, 1, 3);
        for (std::size_t i = 0; i < n; ++i) {
            auto roll = uniform(rng, 0, 9);
            bool negated = chance(rng, 0.35);
            std::string lit;
            if (roll < 5) {
                lit = pick(rng, chosen);
            } else if (roll < 9 && below_layer > 0) {
                lit = pick(rng, layers[uniform(rng, 0, below_layer - 1)]);
            } else if (auto agg = aggregate()) {
                lit = *agg;
            } else {
                lit = pick(rng, chosen);
            }
            lits.push_back((negated ? "not " : "") + lit);
        }
        std::string text;
        for (std::size_t i = 0; i < lits.size(); ++i) {
            text += (i ? ", " : "") + lits[i];
        }
        return text;
    };

    for (std::size_t k = 0; k < layers.size(); ++k) {
        for (auto const &atom : layers[k]) {
            auto rules = uniform(rng, 0, 2);
            for (std::size_t r = 0; r < rules; ++r) {
                if (chance(rng, 0.15)) {
                    out << atom << ".\n";
                } else {
                    out << atom << " :- " << body(k) << ".\n";
                }
            }
        }
    }
    if (chance(rng, 0.4)) {
        out << pick(rng, chosen) << ".\n";
    }
    for (std::size_t i = 0, n = uniform(rng, 0, 2); i < n; ++i) {
        out << pick(rng, chosen) << " :- " << body(layers.size()) << ".\n";
    }
    for (std::size_t i = 0, n = uniform(rng, 0, 2); i < n; ++i) {
        out << ":- " << body(layers.size()) << ".\n";
    }
    return out.str();
}

namespace {

using Alternative = std::vector<Row>;

/// Disjunctive normal form of `formula` (or its negation) as row sets.
auto dnf(geometry::Formula const &f, bool positive, geometry::InequalityTable const &table, std::size_t n)
    -> std::vector<Alternative> {
    using Kind = geometry::Formula::Kind;
    switch (f.kind) {
    case Kind::True:
        return positive ? std::vector<Alternative>{{}} : std::vector<Alternative>{};
    case Kind::False:
        return positive ? std::vector<Alternative>{} : std::vector<Alternative>{{}};
    case Kind::Atom:
        return rows_for(table.at(f.atom), !positive, n);
    case Kind::Not:
        return dnf(f.children.front(), !positive, table, n);
    case Kind::And:
    case Kind::Or: {
        bool conjunctive = (f.kind == Kind::And) == positive;
        if (!conjunctive) {
            std::vector<Alternative> out;
            for (auto const &c : f.children) {
                auto part = dnf(c, positive, table, n);
                out.insert(out.end(), part.begin(), part.end());
            }
            return out;
        }
        std::vector<Alternative> out{{}};
        for (auto const &c : f.children) {
            auto part = dnf(c, positive, table, n);
            std::vector<Alternative> next;
            for (auto const &lhs : out) {
                for (auto const &rhs : part) {
                    auto merged = lhs;
                    merged.insert(merged.end(), rhs.begin(), rhs.end());
                    next.push_back(std::move(merged));
                }
            }
            out = std::move(next);
        }
        return out;
    }
    }
    return {};
}

} // namespace

auto realizable(std::vector<std::pair<geometry::Formula, bool>> const &required,
                geometry::InequalityTable const &table, std::size_t num_vars) -> bool {
    std::vector<std::vector<Alternative>> choices;
    for (auto const &[f, value] : required) {
        choices.push_back(dnf(f, value, table, num_vars));
        if (choices.back().empty()) {
            return false;
        }
    }
    std::sort(choices.begin(), choices.end(), [](auto const &a, auto const &b) { return a.size() < b.size(); });
    std::vector<Row> rows;
    std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
        if (!fm_feasible(rows, num_vars)) {
            return false;
        }
        if (i == choices.size()) {
            return true;
        }
        for (auto const &alt : choices[i]) {
            auto mark = rows.size();
            rows.insert(rows.end(), alt.begin(), alt.end());
            if (search(i + 1)) {
                return true;
            }
            rows.resize(mark);
        }
        return false;
    };
    return search(0);
}

auto brute_force_models(CompiledProgram const &compiled) -> std::set<std::vector<AtomId>> {
    auto const &g = compiled.ground;
    auto n = g.atoms.size();
    std::map<AtomId, CardinalityConstraint const *> cards;
    for (auto const &c : g.cardinalities) {
        cards[c.defined] = &c;
    }
    std::map<AtomId, std::vector<GroundRule const *>> rules_for;
    std::vector<GroundRule const *> checks; // constraints and spatial heads
    for (auto const &r : g.rules) {
        if (r.head && g.atoms.at(*r.head).kind == AtomKind::Regular) {
            rules_for[*r.head].push_back(&r);
        } else {
            checks.push_back(&r);
        }
    }
    std::map<AtomId, geometry::Formula const *> definition;
    for (auto const &d : compiled.definitions) {
        definition[d.atom] = &d.formula;
    }
    auto const &spatial = g.spatial_atoms;
    if (spatial.size() > 20) {
        throw std::invalid_argument("too many spatial atoms for brute force");
    }

    std::set<std::vector<AtomId>> models;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << spatial.size()); ++mask) {
        enum class State : std::uint8_t { Unknown, Busy, False, True };
        std::vector<State> state(n + 1, State::Unknown);
        for (std::size_t i = 0; i < spatial.size(); ++i) {
            state[spatial[i]] = (mask >> i) & 1U ? State::True : State::False;
        }
        std::function<bool(AtomId)> value = [&](AtomId id) -> bool {
            if (state[id] == State::True || state[id] == State::False) {
                return state[id] == State::True;
            }
            if (state[id] == State::Busy) {
                throw std::invalid_argument("program is not stratified");
            }
            state[id] = State::Busy;
            bool result = false;
            if (auto it = cards.find(id); it != cards.end()) {
                long count = 0;
                for (auto const &l : it->second->literals) {
                    count += value(l.atom) != l.negated;
                }
                result = holds(it->second->guard, cmp(BigInt(count), it->second->bound));
            } else if (auto rs = rules_for.find(id); rs != rules_for.end()) {
                for (auto const *r : rs->second) {
                    bool body = std::all_of(r->body.begin(), r->body.end(),
                                            [&](GroundLiteral const &l) { return value(l.atom) != l.negated; });
                    if (body) {
                        result = true;
                        break;
                    }
                }
            }
            state[id] = result ? State::True : State::False;
            return result;
        };
        bool ok = true;
        for (auto const *r : checks) {
            bool body = std::all_of(r->body.begin(), r->body.end(),
                                    [&](GroundLiteral const &l) { return value(l.atom) != l.negated; });
            if (body && (!r->head || !value(*r->head))) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            continue;
        }
        std::vector<std::pair<geometry::Formula, bool>> required;
        for (auto const &f : compiled.background) {
            required.emplace_back(f, true);
        }
        for (auto id : spatial) {
            required.emplace_back(*definition.at(id), value(id));
        }
        if (!realizable(required, compiled.table, compiled.scene.num_variables())) {
            continue;
        }
        std::vector<AtomId> model;
        for (AtomId id = 1; id <= n; ++id) {
            if (g.atoms.at(id).kind != AtomKind::Aggregate && value(id)) {
                model.push_back(id);
            }
        }
        models.insert(std::move(model));
    }
    return models;
}

auto solver_models(CompiledProgram const &compiled, SearchOptions const &options) -> std::set<std::vector<AtomId>> {
    auto e = enumerate_projected(compiled, {Projection::Kind::None, {}}, 0, options);
    std::set<std::vector<AtomId>> out;
    for (auto const &m : e.models) {
        std::vector<AtomId> atoms;
        std::copy_if(m.true_atoms.begin(), m.true_atoms.end(), std::back_inserter(atoms),
                     [&](AtomId id) { return compiled.ground.atoms.at(id).kind != AtomKind::Aggregate; });
        out.insert(std::move(atoms));
    }
    return out;
}

} // namespace sasp::oracle
