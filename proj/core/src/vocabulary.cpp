#include "sasp/vocabulary.hpp"

#include <array>

namespace sasp {

namespace {

constexpr std::array<Sort, 1> kP{Sort::Point};
constexpr std::array<Sort, 2> kPP{Sort::Point, Sort::Point};
constexpr std::array<Sort, 2> kPR{Sort::Point, Sort::Rect};
constexpr std::array<Sort, 2> kPS{Sort::Point, Sort::Segment};
constexpr std::array<Sort, 2> kRR{Sort::Rect, Sort::Rect};

struct Entry {
    Relation relation;
    std::string_view name;
    std::span<const Sort> signature;
};

constexpr std::array<Entry, 14> kTable{{
    {Relation::SamePlacePP, "samePlace_pp", kPP},
    {Relation::LeftPP, "left_pp", kPP},
    {Relation::RightPP, "right_pp", kPP},
    {Relation::AbovePP, "above_pp", kPP},
    {Relation::BelowPP, "below_pp", kPP},
    {Relation::LeftmostP, "leftmost_p", kP},
    {Relation::RightmostP, "rightmost_p", kP},
    {Relation::UppermostP, "uppermost_p", kP},
    {Relation::LowermostP, "lowermost_p", kP},
    {Relation::OnPS, "on_ps", kPS},
    {Relation::InPR, "in_pr", kPR},
    {Relation::LeftRR, "left_rr", kRR},
    {Relation::RightRR, "right_rr", kRR},
    {Relation::OverlapRR, "overlap_rr", kRR},
}};

auto entry(Relation rel) -> Entry const & {
    return kTable[static_cast<std::size_t>(rel)];
}

} // namespace

auto relation_name(Relation rel) -> std::string_view { return entry(rel).name; }

auto relation_from_name(std::string_view name) -> std::optional<Relation> {
    for (auto const &e : kTable) {
        if (e.name == name) {
            return e.relation;
        }
    }
    return std::nullopt;
}

auto relation_signature(Relation rel) -> std::span<const Sort> { return entry(rel).signature; }

auto is_unary(Relation rel) -> bool { return entry(rel).signature.size() == 1; }

auto sort_name(Sort sort) -> std::string_view {
    switch (sort) {
    case Sort::Point:
        return "point";
    case Sort::Rect:
        return "rect";
    case Sort::Segment:
        return "segment";
    }
    return "?";
}

auto sort_from_name(std::string_view name) -> std::optional<Sort> {
    if (name == "point") {
        return Sort::Point;
    }
    if (name == "rect") {
        return Sort::Rect;
    }
    if (name == "segment") {
        return Sort::Segment;
    }
    return std::nullopt;
}

auto has_spatial_suffix(std::string_view name) -> bool {
    if (name.size() < 4 || name[name.size() - 3] != '_') {
        return false;
    }
    auto is_sort_letter = [](char c) { return c == 'p' || c == 'r' || c == 's'; };
    return is_sort_letter(name[name.size() - 2]) && is_sort_letter(name.back());
}

} // namespace sasp
