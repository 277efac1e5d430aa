#include "sasp/geometry.hpp"

#include <gtest/gtest.h>

#include <random>

namespace sasp::geometry {
namespace {

auto point(std::string name) -> std::pair<std::string, ObjectInfo> { return {std::move(name), {Sort::Point, {}, false}}; }

auto rect(std::string name) -> std::pair<std::string, ObjectInfo> { return {std::move(name), {Sort::Rect, {}, false}}; }

auto segment(std::string name, SegmentEndpoints e) -> std::pair<std::string, ObjectInfo> {
    return {std::move(name), {Sort::Segment, e, false}};
}

/// A scene with coordinates addressable by object name.
struct World {
    explicit World(ObjectMap objects)
        : scene(objects)
        , values(scene.num_variables()) {}

    void set_point(std::string const &name, Rational x, Rational y) {
        auto const &p = std::get<PointGeom>(*scene.find(name));
        values[p.x] = std::move(x);
        values[p.y] = std::move(y);
    }

    void set_rect(std::string const &name, Rational x0, Rational y0, Rational x1, Rational y1) {
        auto const &r = std::get<RectGeom>(*scene.find(name));
        values[r.x_min] = std::move(x0);
        values[r.y_min] = std::move(y0);
        values[r.x_max] = std::move(x1);
        values[r.y_max] = std::move(y1);
    }

    auto compile(std::string const &rel, std::vector<std::string> args) -> SpatialDefinition {
        return compile_spatial_atom({AtomKind::Spatial, rel, std::move(args)}, scene, table);
    }

    auto holds(std::string const &rel, std::vector<std::string> args) -> bool {
        return evaluate_definition(compile(rel, std::move(args)), table, values);
    }

    Scene scene;
    InequalityTable table;
    std::vector<Rational> values;
};

auto is_strict_literal(Formula const &f, InequalityTable const &table) -> bool {
    if (f.kind == Formula::Kind::Atom) {
        return table.at(f.atom).op == lra::Relop::Lt;
    }
    if (f.kind == Formula::Kind::Not && f.children.front().kind == Formula::Kind::Atom) {
        return table.at(f.children.front().atom).op == lra::Relop::Le;
    }
    return false;
}

TEST(Compile, InPrIsFourStrictAtoms) {
    World w({point("a"), rect("b")});
    auto def = w.compile("in_pr", {"a", "b"});
    ASSERT_EQ(def.formula.kind, Formula::Kind::And);
    ASSERT_EQ(def.formula.children.size(), 4U);
    for (auto const &c : def.formula.children) {
        EXPECT_TRUE(is_strict_literal(c, w.table)) << to_string(def.formula, w.table, w.scene);
    }
    EXPECT_EQ(atoms_of(def.formula).size(), 4U);
}

TEST(Compile, LeftmostAloneIsTrue) {
    World w({point("a")});
    EXPECT_EQ(w.compile("leftmost_p", {"a"}).formula.kind, Formula::Kind::True);
}

TEST(Compile, LeftmostOverFivePoints) {
    std::vector<std::string> names{"truck", "motorcycle", "limousine", "station_wagon", "sedan"};
    ObjectMap objects;
    for (auto const &n : names) {
        objects.push_back(point(n));
    }
    World w(objects);
    auto def = w.compile("leftmost_p", {"station_wagon"});
    ASSERT_EQ(def.formula.kind, Formula::Kind::And);
    ASSERT_EQ(def.formula.children.size(), 4U);
    // Each conjunct is non-strict: x_v >= x_station_wagon.
    for (auto const &c : def.formula.children) {
        EXPECT_FALSE(is_strict_literal(c, w.table));
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        w.set_point(names[i], static_cast<long>(i), 0);
    }
    w.set_point("station_wagon", -1, 0);
    EXPECT_TRUE(evaluate_definition(def, w.table, w.values));
    w.set_point("station_wagon", 0, 0); // tie with truck: still not strictly right of anyone
    EXPECT_TRUE(evaluate_definition(def, w.table, w.values));
    w.set_point("station_wagon", 1, 0);
    EXPECT_FALSE(evaluate_definition(def, w.table, w.values));
}

TEST(Compile, SortMismatchIsAnError) {
    World w({point("a"), rect("r")});
    EXPECT_THROW((void)w.compile("in_pr", {"r", "a"}), InputError);
    EXPECT_THROW((void)w.compile("left_pp", {"a", "ghost"}), InputError);
}

TEST(Compile, MirrorRelationsShareAtoms) {
    World w({point("a"), point("b"), rect("r"), rect("s")});
    EXPECT_EQ(atoms_of(w.compile("left_pp", {"a", "b"}).formula), atoms_of(w.compile("right_pp", {"b", "a"}).formula));
    EXPECT_EQ(atoms_of(w.compile("above_pp", {"a", "b"}).formula), atoms_of(w.compile("below_pp", {"b", "a"}).formula));
    EXPECT_EQ(atoms_of(w.compile("left_rr", {"r", "s"}).formula), atoms_of(w.compile("right_rr", {"s", "r"}).formula));
}

TEST(Evaluate, PointInsideRect) {
    World w({point("a"), rect("b")});
    w.set_point("a", 4, 4);
    w.set_rect("b", 2, 2, 6, 7);
    EXPECT_TRUE(w.holds("in_pr", {"a", "b"}));
}

TEST(Evaluate, RectBoundaryIsExcluded) {
    World w({point("a"), rect("b")});
    w.set_point("a", 2, 4);
    w.set_rect("b", 2, 2, 6, 7);
    EXPECT_FALSE(w.holds("in_pr", {"a", "b"}));
}

TEST(Evaluate, OnCanonicalSegment) {
    auto c = canonical_segment();
    World w({point("a"), segment("t", c)});
    w.set_point("a", 5, 0);
    EXPECT_TRUE(w.holds("on_ps", {"a", "t"}));
    w.set_point("a", 5, 1);
    EXPECT_FALSE(w.holds("on_ps", {"a", "t"}));
    w.set_point("a", 1001, 0);
    EXPECT_FALSE(w.holds("on_ps", {"a", "t"}));
}

TEST(Evaluate, BelowFollowsImageCoordinates) {
    World w({point("a"), point("b")});
    w.set_point("a", 0, 5);
    w.set_point("b", 0, 1);
    EXPECT_TRUE(w.holds("below_pp", {"a", "b"}));
    EXPECT_TRUE(w.holds("above_pp", {"b", "a"}));
}

TEST(Evaluate, LeftRrNeedsVerticalOverlap) {
    World w({rect("r"), rect("s")});
    w.set_rect("r", 0, 0, 1, 1);
    w.set_rect("s", 1, 0, 2, 1);
    EXPECT_TRUE(w.holds("left_rr", {"r", "s"}));
    w.set_rect("s", 1, 2, 2, 3);
    EXPECT_FALSE(w.holds("left_rr", {"r", "s"}));
}

TEST(Evaluate, SamePlace) {
    World w({point("a"), point("b")});
    w.set_point("a", 1, 2);
    w.set_point("b", 1, 2);
    EXPECT_TRUE(w.holds("samePlace_pp", {"a", "b"}));
    w.set_point("b", 1, 3);
    EXPECT_FALSE(w.holds("samePlace_pp", {"a", "b"}));
}

TEST(Evaluate, MissingVariableIsAnError) {
    World w({point("a"), rect("b")});
    auto def = w.compile("in_pr", {"a", "b"});
    std::vector<Rational> partial(2);
    EXPECT_THROW((void)evaluate_definition(def, w.table, partial), std::out_of_range);
}

TEST(Background, RectanglesAreNonDegenerate) {
    World w({rect("r")});
    auto bg = background(w.scene, w.table);
    w.set_rect("r", 0, 0, 1, 1);
    for (auto const &f : bg) {
        EXPECT_TRUE(evaluate(f, w.table, w.values));
    }
    w.set_rect("r", 0, 0, 0, 1);
    bool all = true;
    for (auto const &f : bg) {
        all = all && evaluate(f, w.table, w.values);
    }
    EXPECT_FALSE(all);
}

TEST(Normalize, FirstCoefficientIsOne) {
    lra::LinearExpr expr{lra::LinearTerm{1, 2}, lra::LinearTerm{0, -4}};
    for (auto op : {CompareOp::Lt, CompareOp::Le, CompareOp::Eq, CompareOp::Ne, CompareOp::Gt, CompareOp::Ge}) {
        auto normalized = lra::normalize(expr, op, 6);
        auto const &n = std::get<lra::NormalizedComparison>(normalized);
        ASSERT_EQ(n.constraint.lhs.size(), 2U);
        EXPECT_EQ(n.constraint.lhs[0].var, 0U);
        EXPECT_EQ(n.constraint.lhs[0].coeff, 1);
        EXPECT_EQ(n.constraint.lhs[1].coeff, Rational(-1, 2));
        for (long x = -4; x <= 4; ++x) {
            for (long y = -4; y <= 4; ++y) {
                std::vector<Rational> values{Rational(x), Rational(y)};
                long v = 2 * y - 4 * x - 6;
                auto direct = holds(op, (v > 0) - (v < 0));
                EXPECT_EQ(direct, lra::evaluate(n.constraint, values) != n.negated);
            }
        }
    }
    EXPECT_EQ(std::get<bool>(lra::normalize({{0, 0}}, CompareOp::Lt, 1)), true);
}

// ---------------------------------------------------------------------------
// Properties over random assignments

constexpr int kTrials = 1000;

auto random_value(std::mt19937_64 &rng) -> Rational {
    // Small grid so that ties and boundary cases are frequent.
    Rational q(std::uniform_int_distribution<long>(-6, 6)(rng), std::uniform_int_distribution<long>(1, 2)(rng));
    q.canonicalize();
    return q;
}

auto random_world(std::mt19937_64 &rng, SegmentEndpoints e) -> World {
    World w({point("a"), point("b"), point("c"), rect("r"), rect("s"), segment("t", e)});
    for (auto &v : w.values) {
        v = random_value(rng);
    }
    return w;
}

struct Case {
    std::string rel;
    std::vector<std::string> args;
};

auto all_cases() -> std::vector<Case> {
    return {{"samePlace_pp", {"a", "b"}}, {"left_pp", {"a", "b"}},  {"right_pp", {"a", "b"}},
            {"above_pp", {"a", "b"}},     {"below_pp", {"a", "b"}}, {"leftmost_p", {"a"}},
            {"rightmost_p", {"a"}},       {"uppermost_p", {"a"}},   {"lowermost_p", {"a"}},
            {"on_ps", {"a", "t"}},        {"in_pr", {"a", "r"}},    {"left_rr", {"r", "s"}},
            {"right_rr", {"r", "s"}},     {"overlap_rr", {"r", "s"}}};
}

TEST(Properties, MirrorDuality) {
    std::mt19937_64 rng(11);
    for (auto [lhs, rhs] : std::vector<std::pair<std::string, std::string>>{
             {"left_pp", "right_pp"}, {"above_pp", "below_pp"}}) {
        for (int i = 0; i < kTrials; ++i) {
            auto w = random_world(rng, canonical_segment());
            ASSERT_EQ(w.holds(lhs, {"a", "b"}), w.holds(rhs, {"b", "a"})) << lhs;
        }
    }
    for (int i = 0; i < kTrials; ++i) {
        auto w = random_world(rng, canonical_segment());
        ASSERT_EQ(w.holds("left_rr", {"r", "s"}), w.holds("right_rr", {"s", "r"}));
    }
}

TEST(Properties, Symmetry) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < kTrials; ++i) {
        auto w = random_world(rng, canonical_segment());
        ASSERT_EQ(w.holds("overlap_rr", {"r", "s"}), w.holds("overlap_rr", {"s", "r"}));
    }
    for (int i = 0; i < kTrials; ++i) {
        auto w = random_world(rng, canonical_segment());
        if (i % 4 == 0) {
            w.values[2] = w.values[0]; // force frequent coincidences
            w.values[3] = w.values[1];
        }
        ASSERT_EQ(w.holds("samePlace_pp", {"a", "b"}), w.holds("samePlace_pp", {"b", "a"}));
    }
}

TEST(Properties, TranslationInvariance) {
    std::mt19937_64 rng(13);
    SegmentEndpoints base{0, 0, 4, 2};
    for (auto const &c : all_cases()) {
        int holds_count = 0;
        for (int i = 0; i < kTrials; ++i) {
            Rational dx = random_value(rng) * 7;
            Rational dy = random_value(rng) * 5;
            auto w = random_world(rng, base);
            if (c.rel == "on_ps" && i % 2 == 0) {
                // Put a on the segment often enough to exercise both outcomes.
                Rational t(std::uniform_int_distribution<long>(-1, 5)(rng), 4);
                t.canonicalize();
                w.set_point("a", base.x_start + t * (base.x_end - base.x_start),
                            base.y_start + t * (base.y_end - base.y_start));
            }
            SegmentEndpoints moved{base.x_start + dx, base.y_start + dy, base.x_end + dx, base.y_end + dy};
            World v({point("a"), point("b"), point("c"), rect("r"), rect("s"), segment("t", moved)});
            for (auto const &name : {"a", "b", "c"}) {
                auto const &p = std::get<PointGeom>(*w.scene.find(name));
                v.set_point(name, w.values[p.x] + dx, w.values[p.y] + dy);
            }
            for (auto const &name : {"r", "s"}) {
                auto const &r = std::get<RectGeom>(*w.scene.find(name));
                v.set_rect(name, w.values[r.x_min] + dx, w.values[r.y_min] + dy, w.values[r.x_max] + dx,
                           w.values[r.y_max] + dy);
            }
            auto before = w.holds(c.rel, c.args);
            ASSERT_EQ(before, v.holds(c.rel, c.args)) << c.rel;
            holds_count += before;
        }
        // Both outcomes occur, so the property is not vacuous.
        EXPECT_GT(holds_count, 0) << c.rel;
        EXPECT_LT(holds_count, kTrials) << c.rel;
    }
}

} // namespace
} // namespace sasp::geometry
