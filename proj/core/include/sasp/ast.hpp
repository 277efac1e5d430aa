#pragma once

#include "sasp/diagnostic.hpp"
#include "sasp/vocabulary.hpp"

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sasp {

using BigInt = mpz_class;
using Rational = mpq_class;

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

[[nodiscard]] auto to_string(CompareOp op) -> std::string_view;

[[nodiscard]] auto holds(CompareOp op, int cmp) -> bool;

// ---------------------------------------------------------------------------
// Non-ground syntax

struct Term {
    enum class Kind { Constant, Number, Variable, Anonymous };

    Kind kind = Kind::Constant;
    std::string text; // numbers keep their canonical decimal text

    [[nodiscard]] static auto constant(std::string name) -> Term { return {Kind::Constant, std::move(name)}; }
    [[nodiscard]] static auto number(BigInt const &value) -> Term { return {Kind::Number, value.get_str()}; }
    [[nodiscard]] static auto variable(std::string name) -> Term { return {Kind::Variable, std::move(name)}; }
    [[nodiscard]] static auto anonymous() -> Term { return {Kind::Anonymous, "_"}; }

    [[nodiscard]] auto is_ground() const -> bool { return kind == Kind::Constant || kind == Kind::Number; }
    [[nodiscard]] auto is_variable() const -> bool { return kind == Kind::Variable; }

    friend auto operator==(Term const &, Term const &) -> bool = default;
};

/// Total order on ground terms: numbers before symbols, numbers by value,
/// symbols lexicographically.
[[nodiscard]] auto compare_ground(Term const &lhs, Term const &rhs) -> int;

struct RegularAtom {
    std::string predicate;
    std::vector<Term> args;

    friend auto operator==(RegularAtom const &, RegularAtom const &) -> bool = default;
};

struct SpatialAtom {
    Relation relation = Relation::LeftPP;
    std::vector<Term> args;

    friend auto operator==(SpatialAtom const &, SpatialAtom const &) -> bool = default;
};

using ConditionAtom = std::variant<RegularAtom, SpatialAtom>;

/// `#count{Element : Condition} guard bound`. Exactly one element variable.
struct AggregateAtom {
    Term element;
    ConditionAtom condition;
    CompareOp guard = CompareOp::Eq;
    BigInt bound;

    friend auto operator==(AggregateAtom const &lhs, AggregateAtom const &rhs) -> bool {
        return lhs.element == rhs.element && lhs.condition == rhs.condition && lhs.guard == rhs.guard &&
               lhs.bound == rhs.bound;
    }
};

/// Builtin comparison between terms, e.g. `Item1 != Item2`.
struct Comparison {
    Term lhs;
    CompareOp op = CompareOp::Eq;
    Term rhs;

    friend auto operator==(Comparison const &, Comparison const &) -> bool = default;
};

using Atom = std::variant<RegularAtom, SpatialAtom, AggregateAtom, Comparison>;

struct BodyLiteral {
    Atom atom;
    bool negated = false;
    SourceLocation location;

    friend auto operator==(BodyLiteral const &lhs, BodyLiteral const &rhs) -> bool {
        return lhs.negated == rhs.negated && lhs.atom == rhs.atom;
    }
};

/// A rule without head is an integrity constraint.
struct Rule {
    std::optional<Atom> head;
    std::vector<BodyLiteral> body;
    SourceLocation location;

    [[nodiscard]] auto is_constraint() const -> bool { return !head.has_value(); }
    [[nodiscard]] auto is_fact() const -> bool { return head.has_value() && body.empty(); }

    friend auto operator==(Rule const &lhs, Rule const &rhs) -> bool {
        return lhs.head == rhs.head && lhs.body == rhs.body;
    }
};

struct SegmentEndpoints {
    Rational x_start, y_start, x_end, y_end;

    friend auto operator==(SegmentEndpoints const &, SegmentEndpoints const &) -> bool = default;
};

struct ObjectDecl {
    Sort sort = Sort::Point;
    std::vector<std::string> names;
    std::optional<SegmentEndpoints> endpoints; // only for a single segment name

    friend auto operator==(ObjectDecl const &, ObjectDecl const &) -> bool = default;
};

struct ShowDirective {
    std::string predicate;
    std::size_t arity = 0;
    SourceLocation location;

    friend auto operator==(ShowDirective const &lhs, ShowDirective const &rhs) -> bool {
        return lhs.predicate == rhs.predicate && lhs.arity == rhs.arity;
    }
};

struct Program {
    std::vector<Rule> rules;
    std::vector<ObjectDecl> objects;
    std::vector<ShowDirective> shows;

    friend auto operator==(Program const &, Program const &) -> bool = default;
};

/// Variables of a term list in order of first occurrence (anonymous excluded).
void collect_variables(std::vector<Term> const &terms, std::vector<std::string> &out);
void collect_variables(Atom const &atom, std::vector<std::string> &out);

[[nodiscard]] auto atom_args(ConditionAtom const &atom) -> std::vector<Term> const &;

// ---------------------------------------------------------------------------
// Ground representation

using AtomId = std::uint32_t; // dense, starting at 1

enum class AtomKind { Regular, Spatial, Aggregate };

struct GroundAtom {
    AtomKind kind = AtomKind::Regular;
    std::string name; // predicate, relation name, or aggregate key
    std::vector<std::string> args;

    [[nodiscard]] auto relation() const -> Relation; // only for spatial atoms

    friend auto operator<=>(GroundAtom const &, GroundAtom const &) = default;
    friend auto operator==(GroundAtom const &, GroundAtom const &) -> bool = default;
};

[[nodiscard]] auto to_string(GroundAtom const &atom) -> std::string;

/// Predicates whose name begins with `_` are introduced by rewriting and
/// are never shown.
[[nodiscard]] auto is_internal(GroundAtom const &atom) -> bool;

/// Bijection between ground atoms and dense integer ids.
class AtomTable {
public:
    auto intern(GroundAtom const &atom) -> AtomId;
    [[nodiscard]] auto find(GroundAtom const &atom) const -> std::optional<AtomId>;
    [[nodiscard]] auto at(AtomId id) const -> GroundAtom const &;
    [[nodiscard]] auto size() const -> std::size_t { return atoms_.size(); }

    /// All ids in ascending order.
    [[nodiscard]] auto ids() const -> std::vector<AtomId>;

private:
    std::vector<GroundAtom> atoms_;
    std::map<GroundAtom, AtomId> index_;
};

struct GroundLiteral {
    AtomId atom = 0;
    bool negated = false;

    friend auto operator<=>(GroundLiteral const &, GroundLiteral const &) = default;
};

struct GroundRule {
    std::optional<AtomId> head;
    std::vector<GroundLiteral> body;

    friend auto operator<=>(GroundRule const &, GroundRule const &) = default;
};

/// `defined` holds iff the number of true `literals` satisfies `guard bound`.
struct CardinalityConstraint {
    std::vector<GroundLiteral> literals;
    CompareOp guard = CompareOp::Eq;
    BigInt bound;
    AtomId defined = 0;
};

struct ObjectInfo {
    Sort sort = Sort::Point;
    std::optional<SegmentEndpoints> endpoints;
    bool implicit = false; // segment referenced but never declared
};

/// Objects in a fixed order (first declaration); names are unique.
using ObjectMap = std::vector<std::pair<std::string, ObjectInfo>>;

struct GroundProgram {
    std::vector<GroundRule> rules;
    AtomTable atoms;
    std::vector<AtomId> spatial_atoms; // ascending
    std::vector<CardinalityConstraint> cardinalities;
    ObjectMap objects;
    std::vector<ShowDirective> shows;

    [[nodiscard]] auto object(std::string const &name) const -> ObjectInfo const *;
};

} // namespace sasp
