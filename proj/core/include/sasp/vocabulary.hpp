#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace sasp {

/// Geometric sort of a declared object.
enum class Sort { Point, Rect, Segment };

/// Closed vocabulary of builtin spatial relations. The name suffix encodes the
/// argument sorts: `pp` point-point, `pr` point-rectangle, `rr`
/// rectangle-rectangle, `ps` point-segment, `p` a single point.
enum class Relation {
    SamePlacePP,
    LeftPP,
    RightPP,
    AbovePP,
    BelowPP,
    LeftmostP,
    RightmostP,
    UppermostP,
    LowermostP,
    OnPS,
    InPR,
    LeftRR,
    RightRR,
    OverlapRR,
};

inline constexpr Relation all_relations[] = {
    Relation::SamePlacePP, Relation::LeftPP,     Relation::RightPP,    Relation::AbovePP,
    Relation::BelowPP,     Relation::LeftmostP,  Relation::RightmostP, Relation::UppermostP,
    Relation::LowermostP,  Relation::OnPS,       Relation::InPR,       Relation::LeftRR,
    Relation::RightRR,     Relation::OverlapRR,
};

[[nodiscard]] auto relation_name(Relation rel) -> std::string_view;
[[nodiscard]] auto relation_from_name(std::string_view name) -> std::optional<Relation>;

/// Argument sorts of a relation; the size is the relation's arity.
[[nodiscard]] auto relation_signature(Relation rel) -> std::span<const Sort>;

[[nodiscard]] auto is_unary(Relation rel) -> bool;

[[nodiscard]] auto sort_name(Sort sort) -> std::string_view;
[[nodiscard]] auto sort_from_name(std::string_view name) -> std::optional<Sort>;

/// True for predicate names carrying a two-letter sort suffix (`_pp`, `_rr`,
/// ...). Such names are reserved for spatial relations, so an unknown one is
/// reported instead of silently becoming an ordinary predicate.
[[nodiscard]] auto has_spatial_suffix(std::string_view name) -> bool;

} // namespace sasp
