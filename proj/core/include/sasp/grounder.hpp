#pragma once

#include "sasp/ast.hpp"

#include <string_view>
#include <vector>

namespace sasp {

/// Name of the internal predicate restricting a variable to the objects of a
/// sort. Such literals are introduced by rewriting and never become atoms.
[[nodiscard]] auto domain_guard_predicate(Sort sort) -> std::string_view;

/// Removes anonymous variables:
///  - in positive literals each `_` becomes a fresh variable;
///  - a negated spatial literal with `_` is replaced by a negated auxiliary
///    atom `_auxN(named args)` defined by a rule projecting the spatial
///    literal onto its named arguments (existential closure under negation).
[[nodiscard]] auto rewrite_anonymous(Program const &program) -> Program;

/// Instantiates a rewritten, safe program. Throws InputError for undeclared
/// objects, sort mismatches, and objects declared with two sorts.
///
/// Grounding conventions:
///  - domains of regular predicates are the least fixpoint of the rules
///    read positively (negation ignored);
///  - variables not bound by a positive regular literal range over the
///    objects of the sort demanded by their spatial argument position;
///  - body instances in which a spatial literal repeats an object are skipped
///    (irreflexivity), as are such aggregate elements;
///  - a constant at a segment position that is declared with no sort denotes
///    an implicit segment with canonical endpoints.
[[nodiscard]] auto ground(Program const &program) -> GroundProgram;

struct TightnessResult {
    bool tight = true;
    std::vector<AtomId> cycle; // atoms on one positive cycle when not tight
};

/// Checks that the positive dependency graph among regular atoms is acyclic.
[[nodiscard]] auto check_tight(GroundProgram const &ground) -> TightnessResult;

} // namespace sasp
