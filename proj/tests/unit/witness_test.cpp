#include "corpus.hpp"
#include "stable_oracle.hpp"

#include "sasp/witness.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

namespace sasp {
namespace {

auto object(Witness const &w, std::string const &name) -> ObjectWitness const & {
    auto it = std::find_if(w.objects.begin(), w.objects.end(), [&](ObjectWitness const &o) { return o.name == name; });
    if (it == w.objects.end()) {
        throw std::out_of_range(name);
    }
    return *it;
}

auto count(std::string const &text, std::string const &needle) -> std::size_t {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

auto lines(std::string const &text) -> std::vector<std::string> {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

/// Object drawn by each line: a shape belongs to the label that follows it.
auto owners(std::vector<std::string> const &svg) -> std::vector<std::string> {
    std::vector<std::string> out(svg.size());
    std::string next;
    for (std::size_t i = svg.size(); i-- > 0;) {
        auto const &l = svg[i];
        if (l.starts_with("<text")) {
            auto open = l.find('>') + 1;
            next = l.substr(open, l.find("</text>") - open);
        } else if (!l.starts_with("<circle") && !l.starts_with("<line") &&
                   !(l.starts_with("<rect") && l.find("fill=\"none\"") != std::string::npos)) {
            next.clear();
        }
        out[i] = next;
    }
    return out;
}

auto rect_of(Witness const &w, std::string const &name) -> std::array<Rational, 4> {
    auto const &c = object(w, name).coords;
    return {c[0], c[1], c[2], c[3]};
}

auto x_disjoint_or_y_disjoint(std::array<Rational, 4> const &a, std::array<Rational, 4> const &b) -> bool {
    return a[2] <= b[0] || b[2] <= a[0] || a[3] <= b[1] || b[3] <= a[1];
}

TEST(Witness, LogicalDeductionTimeline) {
    auto c = compile_program(testing::read_corpus("logical_deduction.lp"));
    auto e = solve_first(c);
    ASSERT_EQ(e.models.size(), 1U);
    auto w = build_witness(c, e.models[0], 1);
    EXPECT_EQ(w.atoms, std::vector<std::string>{"answer(b)"});
    std::vector<std::string> order{"station_wagon", "motorcycle", "sedan", "limousine", "truck"};
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto const &p = object(w, order[i]);
        EXPECT_EQ(p.sort, Sort::Point);
        EXPECT_EQ(p.coords[1], 0) << order[i];
        EXPECT_GE(p.coords[0], 0);
        EXPECT_LE(p.coords[0], 1000);
        if (i > 0) {
            EXPECT_LT(object(w, order[i - 1]).coords[0], p.coords[0]) << order[i];
        }
    }
    auto const &line = object(w, "vehicle_line");
    EXPECT_EQ(line.sort, Sort::Segment);
    EXPECT_EQ(line.coords, (std::vector<Rational>{0, 0, 1000, 0}));
}

TEST(Witness, ZebraFirstModelLayout) {
    auto c = compile_program(testing::read_corpus("zebra.lp"));
    auto e = enumerate_projected(c, {Projection::Kind::Predicates, {{"in_pr", 2}}}, 0);
    ASSERT_EQ(e.models.size(), 2U);
    auto w = build_witness(c, e.models[0], 1);
    auto red = rect_of(w, "red");
    auto green = rect_of(w, "green");
    auto blue = rect_of(w, "blue");
    for (auto const *r : {&red, &green, &blue}) {
        EXPECT_LT((*r)[0], (*r)[2]);
        EXPECT_LT((*r)[1], (*r)[3]);
    }
    EXPECT_TRUE(x_disjoint_or_y_disjoint(red, green));
    EXPECT_TRUE(x_disjoint_or_y_disjoint(red, blue));
    EXPECT_TRUE(x_disjoint_or_y_disjoint(green, blue));
    // Horizontal row: every pair overlaps vertically.
    for (auto const &[a, b] : {std::pair{red, green}, std::pair{red, blue}, std::pair{green, blue}}) {
        EXPECT_TRUE(a[1] < b[3] && b[1] < a[3]);
    }
    EXPECT_LE(red[2], green[0]);
    EXPECT_LE(green[2], blue[0]);
    auto const &zebra = object(w, "zebra").coords;
    EXPECT_TRUE(blue[0] < zebra[0] && zebra[0] < blue[2] && blue[1] < zebra[1] && zebra[1] < blue[3]);
}

TEST(Witness, EmptyProgram) {
    auto c = compile_program("");
    auto e = solve_first(c);
    ASSERT_EQ(e.models.size(), 1U);
    auto w = build_witness(c, e.models[0], 1);
    EXPECT_TRUE(w.objects.empty());
    EXPECT_TRUE(w.atoms.empty());
    auto svg = render_svg(w);
    EXPECT_EQ(count(svg, "<circle"), 0U);
    EXPECT_EQ(count(svg, "<text"), 0U);
}

TEST(Witness, MissingSeedIsAnError) {
    auto c = compile_program("point(a).");
    StableModel m;
    EXPECT_THROW((void)build_witness(c, m, 1), std::invalid_argument);
}

TEST(Render, SinglePoint) {
    Witness w{1, {}, {{"a", Sort::Point, {0, 0}}}};
    auto svg = render_svg(w);
    EXPECT_EQ(count(svg, "<circle"), 1U);
    EXPECT_EQ(count(svg, "<text"), 1U);
    EXPECT_EQ(count(render_svg(w, {640, 480, false, false}), "<text"), 0U);
}

TEST(Render, LabelsAreEscaped) {
    Witness w{1, {}, {{"a<b&c", Sort::Point, {0, 0}}}};
    EXPECT_NE(render_svg(w).find("a&lt;b&amp;c"), std::string::npos);
}

TEST(Render, ScalingKeepsShapesOnCanvas) {
    Witness w{1, {}, {{"r", Sort::Rect, {Rational(-3, 2), 0, 10, 4}}, {"p", Sort::Point, {5, 2}}}};
    auto svg = render_svg(w);
    EXPECT_EQ(count(svg, "<rect"), 2U);
    EXPECT_NE(svg.find("<rect x=\"32\""), std::string::npos) << svg;
    EXPECT_NE(svg.find("width=\"576\""), std::string::npos) << svg;
}

TEST(Serialize, RationalText) {
    EXPECT_EQ(rational_text(3), "3/1");
    EXPECT_EQ(rational_text(Rational(-2, 4)), "-1/2");
    EXPECT_EQ(rational_text(0), "0/1");
}

TEST(Serialize, JsonDocument) {
    Witness w{2,
              {"answer(b)"},
              {{"a", Sort::Point, {Rational(1, 3), 0}},
               {"r", Sort::Rect, {0, 0, 1, 2}},
               {"s", Sort::Segment, {0, 0, 1000, 0}}}};
    auto doc = nlohmann::json::parse(witness_json(w));
    EXPECT_EQ(doc["modelIndex"], 2);
    EXPECT_EQ(doc["atoms"], nlohmann::json::array({"answer(b)"}));
    EXPECT_EQ(doc["objects"]["a"]["sort"], "point");
    EXPECT_EQ(doc["objects"]["a"]["coords"]["x"], "1/3");
    EXPECT_EQ(doc["objects"]["r"]["coords"]["ymax"], "2/1");
    EXPECT_EQ(doc["objects"]["s"]["coords"]["xe"], "1000/1");
}

auto run_once(std::string const &name) -> std::pair<std::string, std::string> {
    auto c = compile_program(testing::read_corpus(name));
    auto e = solve_first(c);
    auto w = build_witness(c, e.models.at(0), 1);
    return {witness_json(w), render_svg(w)};
}

TEST(Determinism, RepeatedSolvesAreByteIdentical) {
    for (auto const *name : {"logical_deduction.lp", "zebra.lp"}) {
        EXPECT_EQ(run_once(name), run_once(name)) << name;
    }
}

TEST(Fidelity, CorpusModels) {
    for (auto const &path : testing::corpus_programs()) {
        auto c = compile_program(testing::read_text(path));
        for (auto proj : {Projection{}, Projection{Projection::Kind::None}}) {
            auto e = enumerate_projected(c, proj, 50);
            ASSERT_FALSE(e.models.empty());
            for (std::size_t i = 0; i < e.models.size(); ++i) {
                EXPECT_TRUE(witness_mismatches(c, e.models[i]).empty()) << path << " model " << i;
                auto w = build_witness(c, e.models[i], i + 1);
                EXPECT_EQ(w.objects.size(), c.ground.objects.size());
            }
        }
    }
}

TEST(Fidelity, RandomPrograms) {
    std::mt19937_64 rng(4242);
    std::size_t checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto c = compile_program(oracle::random_tight_program(rng));
        for (auto const &m : enumerate_projected(c, {Projection::Kind::None}, 10).models) {
            ASSERT_TRUE(witness_mismatches(c, m).empty()) << "trial " << trial;
            ++checked;
        }
    }
    EXPECT_GT(checked, 200U);
}

auto zebra_svgs() -> std::pair<std::vector<std::string>, std::vector<std::string>> {
    auto c = compile_program(testing::read_corpus("zebra.lp"));
    auto e = enumerate_projected(c, {Projection::Kind::Predicates, {{"in_pr", 2}}}, 0);
    EXPECT_EQ(e.models.size(), 2U);
    if (e.models.size() != 2) {
        return {};
    }
    return {lines(render_svg(build_witness(c, e.models[0], 1))), lines(render_svg(build_witness(c, e.models[1], 2)))};
}

auto moved_objects(std::vector<std::string> const &a, std::vector<std::string> const &b) -> std::set<std::string> {
    auto owner = owners(a);
    std::set<std::string> moved;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
            moved.insert(owner[i]);
        }
    }
    return moved;
}

TEST(Render, ZebraModelsShareStructureAndMoveFoxAndDog) {
    auto [a, b] = zebra_svgs();
    ASSERT_EQ(a.size(), b.size());
    EXPECT_EQ(owners(a), owners(b));
    auto moved = moved_objects(a, b);
    EXPECT_TRUE(moved.contains("fox"));
    EXPECT_TRUE(moved.contains("dog"));
}

// The classes are projected on in_pr/2 only, so their representatives may
// disagree on free house relations and be drawn with different houses.
TEST(Render, DISABLED_ZebraModelsDifferOnlyInFoxAndDog) {
    auto [a, b] = zebra_svgs();
    ASSERT_EQ(a.size(), b.size());
    EXPECT_EQ(moved_objects(a, b), (std::set<std::string>{"dog", "fox"}));
}

} // namespace
} // namespace sasp
