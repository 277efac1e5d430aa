#include "sasp/geometry.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sasp::geometry {

auto canonical_segment() -> SegmentEndpoints { return {0, 0, 1000, 0}; }

Scene::Scene(ObjectMap const &objects) {
    auto fresh = [&](std::string label) {
        variable_names_.push_back(std::move(label));
        return static_cast<lra::Var>(variable_names_.size() - 1);
    };
    for (auto const &[name, info] : objects) {
        names_.push_back(name);
        switch (info.sort) {
        case Sort::Point: {
            PointGeom p;
            p.x = fresh("x(" + name + ")");
            p.y = fresh("y(" + name + ")");
            objects_.emplace(name, p);
            points_.push_back(name);
            break;
        }
        case Sort::Rect: {
            RectGeom r;
            r.x_min = fresh("xmin(" + name + ")");
            r.y_min = fresh("ymin(" + name + ")");
            r.x_max = fresh("xmax(" + name + ")");
            r.y_max = fresh("ymax(" + name + ")");
            objects_.emplace(name, r);
            break;
        }
        case Sort::Segment: {
            auto e = info.endpoints.value_or(canonical_segment());
            objects_.emplace(name, SegmentGeom{e.x_start, e.y_start, e.x_end, e.y_end});
            break;
        }
        }
    }
}

auto Scene::find(std::string const &name) const -> ObjectGeom const * {
    auto it = objects_.find(name);
    return it == objects_.end() ? nullptr : &it->second;
}

auto InequalityTable::intern(lra::Constraint const &constraint) -> InequalityId {
    if (auto it = index_.find(constraint); it != index_.end()) {
        return it->second;
    }
    auto id = static_cast<InequalityId>(atoms_.size());
    atoms_.push_back(constraint);
    index_.emplace(constraint, id);
    return id;
}

// ---------------------------------------------------------------------------
// Formulas

auto Formula::truth(bool value) -> Formula { return Formula{value ? Kind::True : Kind::False, 0, {}}; }

auto Formula::leaf(InequalityId id) -> Formula { return Formula{Kind::Atom, id, {}}; }

auto Formula::negation(Formula f) -> Formula {
    switch (f.kind) {
    case Kind::True:
        return truth(false);
    case Kind::False:
        return truth(true);
    case Kind::Not:
        return std::move(f.children.front());
    default:
        return Formula{Kind::Not, 0, {std::move(f)}};
    }
}

auto Formula::conjunction(std::vector<Formula> children) -> Formula {
    std::vector<Formula> kept;
    for (auto &c : children) {
        if (c.kind == Kind::False) {
            return truth(false);
        }
        if (c.kind == Kind::And) {
            for (auto &g : c.children) {
                kept.push_back(std::move(g));
            }
        } else if (c.kind != Kind::True) {
            kept.push_back(std::move(c));
        }
    }
    if (kept.empty()) {
        return truth(true);
    }
    if (kept.size() == 1) {
        return std::move(kept.front());
    }
    return Formula{Kind::And, 0, std::move(kept)};
}

auto Formula::disjunction(std::vector<Formula> children) -> Formula {
    std::vector<Formula> kept;
    for (auto &c : children) {
        if (c.kind == Kind::True) {
            return truth(true);
        }
        if (c.kind == Kind::Or) {
            for (auto &g : c.children) {
                kept.push_back(std::move(g));
            }
        } else if (c.kind != Kind::False) {
            kept.push_back(std::move(c));
        }
    }
    if (kept.empty()) {
        return truth(false);
    }
    if (kept.size() == 1) {
        return std::move(kept.front());
    }
    return Formula{Kind::Or, 0, std::move(kept)};
}

namespace {

void collect_atoms(Formula const &f, std::vector<InequalityId> &out) {
    if (f.kind == Formula::Kind::Atom) {
        out.push_back(f.atom);
    }
    for (auto const &c : f.children) {
        collect_atoms(c, out);
    }
}

void print(std::ostream &out, Formula const &f, InequalityTable const &table, Scene const &scene) {
    using Kind = Formula::Kind;
    switch (f.kind) {
    case Kind::True:
        out << "true";
        return;
    case Kind::False:
        out << "false";
        return;
    case Kind::Atom: {
        auto const &c = table.at(f.atom);
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
            out << scene.variable_name(t.var);
        }
        out << ' ' << lra::to_string(c.op) << ' ' << c.rhs.get_str();
        return;
    }
    case Kind::Not:
        out << "not (";
        print(out, f.children.front(), table, scene);
        out << ')';
        return;
    case Kind::And:
    case Kind::Or:
        for (std::size_t i = 0; i < f.children.size(); ++i) {
            if (i > 0) {
                out << (f.kind == Kind::And ? " & " : " | ");
            }
            bool nested = f.children[i].kind == Kind::And || f.children[i].kind == Kind::Or;
            out << (nested ? "(" : "");
            print(out, f.children[i], table, scene);
            out << (nested ? ")" : "");
        }
        return;
    }
}

using lra::LinearExpr;

auto var(lra::Var v, Rational k = 1) -> lra::LinearTerm { return {v, std::move(k)}; }

/// `lhs op rhs` between two coordinate variables.
auto cmp_vars(lra::Var lhs, CompareOp op, lra::Var rhs, InequalityTable &table) -> Formula {
    return compare({var(lhs), var(rhs, -1)}, op, 0, table);
}

[[noreturn]] void sort_error(GroundAtom const &atom, std::string const &message) {
    auto text = to_string(atom);
    throw InputError(Diagnostic{Severity::Error, {}, message + " in " + text, text});
}

template <typename Geom>
auto expect(GroundAtom const &atom, std::size_t index, Scene const &scene, Sort sort) -> Geom const & {
    auto const &name = atom.args.at(index);
    auto const *geom = scene.find(name);
    if (geom == nullptr) {
        sort_error(atom, "undeclared object '" + name + "'");
    }
    auto const *typed = std::get_if<Geom>(geom);
    if (typed == nullptr) {
        sort_error(atom, "argument " + std::to_string(index + 1) + " must be a " + std::string(sort_name(sort)));
    }
    return *typed;
}

auto point(GroundAtom const &atom, std::size_t i, Scene const &scene) -> PointGeom const & {
    return expect<PointGeom>(atom, i, scene, Sort::Point);
}

auto rect(GroundAtom const &atom, std::size_t i, Scene const &scene) -> RectGeom const & {
    return expect<RectGeom>(atom, i, scene, Sort::Rect);
}

auto left_rr(RectGeom const &a, RectGeom const &b, InequalityTable &table) -> Formula {
    return Formula::conjunction({
        cmp_vars(a.x_max, CompareOp::Le, b.x_min, table),
        cmp_vars(a.y_max, CompareOp::Gt, b.y_min, table),
        cmp_vars(a.y_min, CompareOp::Lt, b.y_max, table),
    });
}

/// Conjunction over every other point b of `not (coord_b op coord_a)`.
auto extreme(GroundAtom const &atom, Scene const &scene, InequalityTable &table, bool use_x, CompareOp op)
    -> Formula {
    auto const &a = point(atom, 0, scene);
    std::vector<Formula> parts;
    for (auto const &name : scene.points()) {
        if (name == atom.args[0]) {
            continue;
        }
        auto const &b = std::get<PointGeom>(*scene.find(name));
        auto lhs = use_x ? b.x : b.y;
        auto rhs = use_x ? a.x : a.y;
        parts.push_back(Formula::negation(cmp_vars(lhs, op, rhs, table)));
    }
    return Formula::conjunction(std::move(parts));
}

auto on_ps(GroundAtom const &atom, Scene const &scene, InequalityTable &table) -> Formula {
    auto const &p = point(atom, 0, scene);
    auto const &s = expect<SegmentGeom>(atom, 1, scene, Sort::Segment);
    Rational dx = s.x_end - s.x_start;
    Rational dy = s.y_end - s.y_start;
    // (x - xs) * dy - (y - ys) * dx = 0
    auto collinear = compare({var(p.x, dy), var(p.y, -dx)}, CompareOp::Eq, dy * s.x_start - dx * s.y_start, table);
    auto within = [&](lra::Var v, Rational const &a, Rational const &b) {
        return Formula::conjunction({
            compare({var(v)}, CompareOp::Ge, std::min(a, b), table),
            compare({var(v)}, CompareOp::Le, std::max(a, b), table),
        });
    };
    return Formula::conjunction({
        std::move(collinear),
        within(p.x, s.x_start, s.x_end),
        within(p.y, s.y_start, s.y_end),
    });
}

} // namespace

auto atoms_of(Formula const &formula) -> std::vector<InequalityId> {
    std::vector<InequalityId> out;
    collect_atoms(formula, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

auto to_string(Formula const &formula, InequalityTable const &table, Scene const &scene) -> std::string {
    std::ostringstream out;
    print(out, formula, table, scene);
    return out.str();
}

auto compare(lra::LinearExpr expr, CompareOp op, Rational rhs, InequalityTable &table) -> Formula {
    if (op == CompareOp::Eq || op == CompareOp::Ne) {
        auto eq = Formula::conjunction({
            compare(expr, CompareOp::Le, rhs, table),
            compare(expr, CompareOp::Ge, rhs, table),
        });
        return op == CompareOp::Eq ? eq : Formula::negation(std::move(eq));
    }
    auto normal = lra::normalize(std::move(expr), op, std::move(rhs));
    if (auto const *value = std::get_if<bool>(&normal)) {
        return Formula::truth(*value);
    }
    auto const &n = std::get<lra::NormalizedComparison>(normal);
    auto leaf = Formula::leaf(table.intern(n.constraint));
    return n.negated ? Formula::negation(std::move(leaf)) : leaf;
}

auto compile_spatial_atom(GroundAtom const &atom, Scene const &scene, InequalityTable &table) -> SpatialDefinition {
    if (atom.kind != AtomKind::Spatial) {
        throw std::invalid_argument("not a spatial atom: " + to_string(atom));
    }
    auto rel = atom.relation();
    if (atom.args.size() != relation_signature(rel).size()) {
        sort_error(atom, "wrong number of arguments");
    }
    SpatialDefinition def;
    switch (rel) {
    case Relation::SamePlacePP: {
        auto const &a = point(atom, 0, scene);
        auto const &b = point(atom, 1, scene);
        def.formula = Formula::conjunction(
            {cmp_vars(a.x, CompareOp::Eq, b.x, table), cmp_vars(a.y, CompareOp::Eq, b.y, table)});
        break;
    }
    case Relation::LeftPP:
        def.formula = cmp_vars(point(atom, 0, scene).x, CompareOp::Lt, point(atom, 1, scene).x, table);
        break;
    case Relation::RightPP:
        def.formula = cmp_vars(point(atom, 0, scene).x, CompareOp::Gt, point(atom, 1, scene).x, table);
        break;
    case Relation::AbovePP:
        def.formula = cmp_vars(point(atom, 0, scene).y, CompareOp::Lt, point(atom, 1, scene).y, table);
        break;
    case Relation::BelowPP:
        def.formula = cmp_vars(point(atom, 0, scene).y, CompareOp::Gt, point(atom, 1, scene).y, table);
        break;
    case Relation::LeftmostP:
        def.formula = extreme(atom, scene, table, true, CompareOp::Lt);
        break;
    case Relation::RightmostP:
        def.formula = extreme(atom, scene, table, true, CompareOp::Gt);
        break;
    case Relation::UppermostP:
        def.formula = extreme(atom, scene, table, false, CompareOp::Lt);
        break;
    case Relation::LowermostP:
        def.formula = extreme(atom, scene, table, false, CompareOp::Gt);
        break;
    case Relation::OnPS:
        def.formula = on_ps(atom, scene, table);
        break;
    case Relation::InPR: {
        auto const &a = point(atom, 0, scene);
        auto const &b = rect(atom, 1, scene);
        def.formula = Formula::conjunction({
            cmp_vars(a.x, CompareOp::Gt, b.x_min, table),
            cmp_vars(a.y, CompareOp::Gt, b.y_min, table),
            cmp_vars(a.x, CompareOp::Lt, b.x_max, table),
            cmp_vars(a.y, CompareOp::Lt, b.y_max, table),
        });
        break;
    }
    case Relation::LeftRR:
        def.formula = left_rr(rect(atom, 0, scene), rect(atom, 1, scene), table);
        break;
    case Relation::RightRR:
        def.formula = left_rr(rect(atom, 1, scene), rect(atom, 0, scene), table);
        break;
    case Relation::OverlapRR: {
        auto const &a = rect(atom, 0, scene);
        auto const &b = rect(atom, 1, scene);
        def.formula = Formula::conjunction({
            cmp_vars(a.x_min, CompareOp::Lt, b.x_max, table),
            cmp_vars(a.y_min, CompareOp::Lt, b.y_max, table),
            cmp_vars(a.x_max, CompareOp::Gt, b.x_min, table),
            cmp_vars(a.y_max, CompareOp::Gt, b.y_min, table),
        });
        break;
    }
    }
    return def;
}

auto background(Scene const &scene, InequalityTable &table) -> std::vector<Formula> {
    std::vector<Formula> out;
    for (auto const &name : scene.names()) {
        if (auto const *r = std::get_if<RectGeom>(scene.find(name))) {
            out.push_back(cmp_vars(r->x_min, CompareOp::Lt, r->x_max, table));
            out.push_back(cmp_vars(r->y_min, CompareOp::Lt, r->y_max, table));
        }
    }
    return out;
}

auto compile_definitions(GroundProgram const &ground, Scene const &scene, InequalityTable &table)
    -> std::vector<SpatialDefinition> {
    std::vector<SpatialDefinition> out;
    out.reserve(ground.spatial_atoms.size());
    for (auto id : ground.spatial_atoms) {
        auto def = compile_spatial_atom(ground.atoms.at(id), scene, table);
        def.atom = id;
        out.push_back(std::move(def));
    }
    return out;
}

auto evaluate(Formula const &formula, InequalityTable const &table, std::span<Rational const> values) -> bool {
    using Kind = Formula::Kind;
    switch (formula.kind) {
    case Kind::True:
        return true;
    case Kind::False:
        return false;
    case Kind::Atom:
        return lra::evaluate(table.at(formula.atom), values);
    case Kind::Not:
        return !evaluate(formula.children.front(), table, values);
    case Kind::And:
        return std::all_of(formula.children.begin(), formula.children.end(),
                           [&](Formula const &c) { return evaluate(c, table, values); });
    case Kind::Or:
        return std::any_of(formula.children.begin(), formula.children.end(),
                           [&](Formula const &c) { return evaluate(c, table, values); });
    }
    return false;
}

auto evaluate_definition(SpatialDefinition const &def, InequalityTable const &table,
                         std::span<Rational const> values) -> bool {
    for (auto id : atoms_of(def.formula)) {
        for (auto const &t : table.at(id).lhs) {
            if (t.var >= values.size()) {
                throw std::out_of_range("no value for coordinate variable " + std::to_string(t.var));
            }
        }
    }
    return evaluate(def.formula, table, values);
}

} // namespace sasp::geometry
