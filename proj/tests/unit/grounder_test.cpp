#include "corpus.hpp"
#include "ground_oracle.hpp"

#include "sasp/grounder.hpp"
#include "sasp/parser.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

namespace sasp {
namespace {

auto parse_ok(std::string_view source) -> Program {
    auto r = parse_program(source);
    EXPECT_TRUE(r.ok());
    return r.ok() ? *r.program : Program{};
}

auto ground_text(std::string_view source) -> GroundProgram { return ground(rewrite_anonymous(parse_ok(source))); }

auto spatial_set(GroundProgram const &g) -> std::set<std::string> {
    std::set<std::string> out;
    for (auto id : g.spatial_atoms) {
        out.insert(to_string(g.atoms.at(id)));
    }
    return out;
}

auto regular_heads(GroundProgram const &g) -> std::set<std::string> {
    std::set<std::string> out;
    for (auto const &r : g.rules) {
        if (r.head && g.atoms.at(*r.head).kind == AtomKind::Regular) {
            out.insert(to_string(g.atoms.at(*r.head)));
        }
    }
    return out;
}

TEST(AtomTable, InterningIsIdempotent) {
    AtomTable t;
    GroundAtom p{AtomKind::Regular, "point", {"a"}};
    auto id = t.intern(p);
    EXPECT_EQ(t.intern(p), id);
    EXPECT_EQ(t.size(), 1U);
    EXPECT_EQ(t.at(id), p);
}

TEST(AtomTable, DistinctAtomsGetDistinctIds) {
    AtomTable t;
    auto ab = t.intern({AtomKind::Spatial, "left_pp", {"a", "b"}});
    auto ba = t.intern({AtomKind::Spatial, "left_pp", {"b", "a"}});
    EXPECT_NE(ab, ba);
    EXPECT_EQ(t.find({AtomKind::Spatial, "left_pp", {"b", "a"}}), ba);
    EXPECT_FALSE(t.find({AtomKind::Spatial, "left_pp", {"a", "c"}}).has_value());
}

TEST(AtomTable, LogicalDeductionIdsAreDense) {
    auto g = ground_text(testing::read_corpus("logical_deduction.lp"));
    auto ids = g.atoms.ids();
    ASSERT_EQ(ids.size(), g.atoms.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        EXPECT_EQ(ids[i], i + 1);
        EXPECT_EQ(g.atoms.find(g.atoms.at(ids[i])), ids[i]);
    }
}

TEST(Rewrite, PositiveAnonymousBecomesFreshVariables) {
    auto p = rewrite_anonymous(parse_ok(":- samePlace_pp(_,_)."));
    ASSERT_EQ(p.rules.size(), 1U);
    auto const &sp = std::get<SpatialAtom>(p.rules[0].body.at(0).atom);
    ASSERT_EQ(sp.args.size(), 2U);
    EXPECT_TRUE(sp.args[0].is_variable());
    EXPECT_TRUE(sp.args[1].is_variable());
    EXPECT_NE(sp.args[0].text, sp.args[1].text);

    auto g = ground_text("point(a;b;c).\n:- samePlace_pp(_,_).");
    auto constraints = std::count_if(g.rules.begin(), g.rules.end(), [](GroundRule const &r) { return !r.head; });
    EXPECT_EQ(constraints, 6); // ordered pairs of distinct points
    EXPECT_EQ(g.spatial_atoms.size(), 6U);
}

TEST(Rewrite, NegatedAnonymousBecomesAuxiliary) {
    auto p = rewrite_anonymous(parse_ok(":- not in_pr(Item,_), item(Item)."));
    ASSERT_EQ(p.rules.size(), 2U);
    Rule const *definition = nullptr;
    Rule const *constraint = nullptr;
    for (auto const &r : p.rules) {
        (r.is_constraint() ? constraint : definition) = &r;
    }
    ASSERT_NE(definition, nullptr);
    ASSERT_NE(constraint, nullptr);
    auto const &aux = std::get<RegularAtom>(*definition->head);
    EXPECT_EQ(aux.args, (std::vector<Term>{Term::variable("Item")}));
    auto has_spatial = std::any_of(definition->body.begin(), definition->body.end(), [](BodyLiteral const &l) {
        auto const *sp = std::get_if<SpatialAtom>(&l.atom);
        return sp != nullptr && !l.negated && sp->relation == Relation::InPR;
    });
    EXPECT_TRUE(has_spatial);
    auto negates_aux = std::any_of(constraint->body.begin(), constraint->body.end(), [&](BodyLiteral const &l) {
        auto const *reg = std::get_if<RegularAtom>(&l.atom);
        return reg != nullptr && l.negated && reg->predicate == aux.predicate;
    });
    EXPECT_TRUE(negates_aux);
}

TEST(Rewrite, NegatedAnonymousInRuleBody) {
    auto p = rewrite_anonymous(parse_ok("in_pr(cuban,House) :- not left_rr(_,House), house(House)."));
    ASSERT_EQ(p.rules.size(), 2U);
    auto const &rule = p.rules[0].head && std::holds_alternative<SpatialAtom>(*p.rules[0].head) ? p.rules[0]
                                                                                                 : p.rules[1];
    auto const &aux_rule = &rule == &p.rules[0] ? p.rules[1] : p.rules[0];
    auto const &aux = std::get<RegularAtom>(*aux_rule.head);
    EXPECT_EQ(aux.args, (std::vector<Term>{Term::variable("House")}));
    EXPECT_TRUE(is_internal({AtomKind::Regular, aux.predicate, {}}));
    auto negated = std::find_if(rule.body.begin(), rule.body.end(), [](BodyLiteral const &l) { return l.negated; });
    ASSERT_NE(negated, rule.body.end());
    EXPECT_EQ(std::get<RegularAtom>(negated->atom).predicate, aux.predicate);
}

TEST(Ground, SingleSpatialFact) {
    auto g = ground_text("point(a;b). left_pp(a,b).");
    EXPECT_EQ(spatial_set(g), (std::set<std::string>{"left_pp(a,b)"}));
}

TEST(Ground, LogicalDeductionSpatialSpace) {
    auto g = ground_text(testing::read_corpus("logical_deduction.lp"));
    std::vector<std::string> v{"truck", "motorcycle", "limousine", "station_wagon", "sedan"};
    std::set<std::string> expected;
    for (auto const &a : v) {
        for (auto const &b : v) {
            if (a != b) {
                expected.insert("left_pp(" + a + "," + b + ")");
                expected.insert("samePlace_pp(" + a + "," + b + ")");
            }
        }
        expected.insert("on_ps(" + a + ",vehicle_line)");
    }
    expected.insert({"right_pp(sedan,motorcycle)", "right_pp(limousine,sedan)", "leftmost_p(station_wagon)"});
    EXPECT_EQ(spatial_set(g), expected);
    EXPECT_EQ(expected.size(), 48U);
}

TEST(Ground, ZebraInPrSpace) {
    auto g = ground_text(testing::read_corpus("zebra.lp"));
    std::vector<std::string> items{"fox", "dog", "zebra", "cuban", "greek", "swiss", "tea", "milk", "beer"};
    std::set<std::string> expected;
    for (auto const &i : items) {
        for (auto const &h : {"blue", "red", "green"}) {
            expected.insert("in_pr(" + i + "," + h + ")");
        }
    }
    std::set<std::string> in_pr;
    for (auto const &a : spatial_set(g)) {
        if (a.rfind("in_pr(", 0) == 0) {
            in_pr.insert(a);
        }
    }
    EXPECT_EQ(in_pr, expected);
    EXPECT_EQ(in_pr.size(), 27U);
}

TEST(Ground, CardinalityRecord) {
    auto g = ground_text(testing::read_corpus("logical_deduction.lp"));
    auto answer_b = g.atoms.find({AtomKind::Regular, "answer", {"b"}});
    ASSERT_TRUE(answer_b);
    auto rule = std::find_if(g.rules.begin(), g.rules.end(), [&](GroundRule const &r) { return r.head == answer_b; });
    ASSERT_NE(rule, g.rules.end());
    ASSERT_EQ(rule->body.size(), 1U);
    auto card = std::find_if(g.cardinalities.begin(), g.cardinalities.end(),
                             [&](CardinalityConstraint const &c) { return c.defined == rule->body[0].atom; });
    ASSERT_NE(card, g.cardinalities.end());
    EXPECT_EQ(card->guard, CompareOp::Eq);
    EXPECT_EQ(card->bound, 1);
    std::set<std::string> elems;
    for (auto const &l : card->literals) {
        EXPECT_FALSE(l.negated);
        elems.insert(to_string(g.atoms.at(l.atom)));
    }
    EXPECT_EQ(elems, (std::set<std::string>{"left_pp(truck,motorcycle)", "left_pp(limousine,motorcycle)",
                                            "left_pp(station_wagon,motorcycle)", "left_pp(sedan,motorcycle)"}));
}

TEST(Ground, NegatedUnderivableLiteralIsDropped) {
    auto g = ground_text("p :- not q.");
    ASSERT_EQ(g.rules.size(), 1U);
    EXPECT_TRUE(g.rules[0].body.empty());
}

TEST(Ground, ImplicitSegmentIsCanonical) {
    auto g = ground_text("point(a). on_ps(a, line).");
    auto const *info = g.object("line");
    ASSERT_NE(info, nullptr);
    EXPECT_EQ(info->sort, Sort::Segment);
    EXPECT_TRUE(info->implicit);
}

TEST(Ground, UndeclaredObjectIsAnError) {
    try {
        (void)ground_text("point(a). left_pp(a, ghost).");
        FAIL() << "expected InputError";
    } catch (InputError const &e) {
        ASSERT_FALSE(e.diagnostics().empty());
        EXPECT_NE(e.diagnostics()[0].message.find("left_pp(a,ghost)"), std::string::npos);
    }
}

TEST(Ground, WrongSortIsAnError) {
    EXPECT_THROW((void)ground_text("point(a). rect(r). in_pr(r, a)."), InputError);
}

TEST(Ground, ConflictingSortsAreAnError) {
    EXPECT_THROW((void)ground_text("point(a). rect(a)."), InputError);
}

TEST(Ground, ComparisonsFilterInstances) {
    auto g = ground_text("n(1;2;3). big(X) :- n(X), X > 1. same(X) :- n(X), X = 2.");
    auto heads = regular_heads(g);
    EXPECT_TRUE(heads.count("big(2)") && heads.count("big(3)"));
    EXPECT_FALSE(heads.count("big(1)"));
    EXPECT_TRUE(heads.count("same(2)"));
    EXPECT_FALSE(heads.count("same(1)"));
}

TEST(Tightness, AcyclicChain) { EXPECT_TRUE(check_tight(ground_text("p :- q. q :- r.")).tight); }

TEST(Tightness, SelfLoop) {
    auto g = ground_text("p :- p.");
    auto r = check_tight(g);
    EXPECT_FALSE(r.tight);
    ASSERT_EQ(r.cycle.size(), 1U);
    EXPECT_EQ(to_string(g.atoms.at(r.cycle[0])), "p");
}

TEST(Tightness, LongerCycle) {
    auto g = ground_text("a :- b. b :- c. c :- a, not d.");
    auto r = check_tight(g);
    EXPECT_FALSE(r.tight);
    EXPECT_EQ(r.cycle.size(), 3U);
}

TEST(Tightness, NegationBreaksNoCycle) {
    EXPECT_TRUE(check_tight(ground_text("a :- not b. b :- not a.")).tight);
}

TEST(Tightness, CorpusIsTight) {
    for (auto const &path : testing::corpus_programs()) {
        EXPECT_TRUE(check_tight(ground_text(testing::read_text(path))).tight) << path;
    }
}

void expect_matches_naive(std::string_view source) {
    auto rewritten = rewrite_anonymous(parse_ok(source));
    auto g = ground(rewritten);
    auto naive = oracle::naive_ground(rewritten);
    EXPECT_LE(naive.substitutions, 1000000U);
    EXPECT_EQ(spatial_set(g), naive.spatial) << source;
    EXPECT_EQ(regular_heads(g), naive.regular) << source;
}

TEST(NaiveOracle, Corpus) {
    for (auto const &path : testing::corpus_programs()) {
        SCOPED_TRACE(path.string());
        expect_matches_naive(testing::read_text(path));
    }
}

TEST(NaiveOracle, SmallPrograms) {
    for (std::string_view s : {
             "point(a;b;c). p(X) :- point(X), not leftmost_p(X).",
             "point(a;b). rect(r). q :- in_pr(X, r). :- not in_pr(_, r).",
             "point(a;b;c). c :- #count{X : above_pp(X, b)} >= 1.",
             "item(a;b). point(X) :- item(X). near(X,Y) :- item(X), item(Y), X != Y, left_pp(X,Y).",
             "point(p). on_ps(p, s). segment(s, 0, 0, 4, 4).",
         }) {
        expect_matches_naive(s);
    }
}

} // namespace
} // namespace sasp
