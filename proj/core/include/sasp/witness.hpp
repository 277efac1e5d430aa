#pragma once

#include "sasp/solver.hpp"

#include <string>
#include <vector>

namespace sasp {

/// Exact geometry of one object. Coordinates are (x, y) for points,
/// (xmin, ymin, xmax, ymax) for rectangles and (xs, ys, xe, ye) for segments.
struct ObjectWitness {
    std::string name;
    Sort sort = Sort::Point;
    std::vector<Rational> coords;
};

struct Witness {
    std::size_t model_index = 1;
    std::vector<std::string> atoms; // shown atoms
    std::vector<ObjectWitness> objects;
};

/// Reads object coordinates off the model's seed. Throws std::invalid_argument
/// when the model carries no seed for this program.
[[nodiscard]] auto build_witness(CompiledProgram const &compiled, StableModel const &model, std::size_t model_index)
    -> Witness;

/// Spatial atoms whose defining formula disagrees with the model under the
/// model's own coordinates. Empty for every correct model.
[[nodiscard]] auto witness_mismatches(CompiledProgram const &compiled, StableModel const &model)
    -> std::vector<AtomId>;

/// `p/q` with q > 0, also for integers.
[[nodiscard]] auto rational_text(Rational const &value) -> std::string;

/// `{ modelIndex, atoms, objects: { name: { sort, coords } } }`.
[[nodiscard]] auto witness_json(Witness const &witness) -> std::string;

struct SvgOptions {
    unsigned width = 640;
    unsigned height = 480;
    bool labels = true;
    bool flip_y = false; // y grows downward in both the model and SVG
};

/// Deterministic drawing: rectangles as outlines, segments as lines, points
/// as dots, scaled into the canvas with a 5% margin.
[[nodiscard]] auto render_svg(Witness const &witness, SvgOptions const &options = {}) -> std::string;

} // namespace sasp
