#include "sasp/witness.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <span>
#include <sstream>
#include <stdexcept>

namespace sasp {

auto build_witness(CompiledProgram const &compiled, StableModel const &model, std::size_t model_index) -> Witness {
    auto const &scene = compiled.scene;
    auto const &values = model.witness_seed;
    if (values.size() != scene.num_variables()) {
        throw std::invalid_argument("model carries no coordinates for this program");
    }
    Witness w;
    w.model_index = model_index;
    for (auto id : model.shown) {
        w.atoms.push_back(to_string(compiled.ground.atoms.at(id)));
    }
    for (auto const &name : scene.names()) {
        ObjectWitness o;
        o.name = name;
        auto const &geom = *scene.find(name);
        if (auto const *p = std::get_if<geometry::PointGeom>(&geom)) {
            o.sort = Sort::Point;
            o.coords = {values[p->x], values[p->y]};
        } else if (auto const *r = std::get_if<geometry::RectGeom>(&geom)) {
            o.sort = Sort::Rect;
            o.coords = {values[r->x_min], values[r->y_min], values[r->x_max], values[r->y_max]};
        } else {
            auto const &s = std::get<geometry::SegmentGeom>(geom);
            o.sort = Sort::Segment;
            o.coords = {s.x_start, s.y_start, s.x_end, s.y_end};
        }
        w.objects.push_back(std::move(o));
    }
    return w;
}

auto witness_mismatches(CompiledProgram const &compiled, StableModel const &model) -> std::vector<AtomId> {
    std::vector<AtomId> out;
    for (auto const &def : compiled.definitions) {
        bool holds = std::binary_search(model.true_atoms.begin(), model.true_atoms.end(), def.atom);
        if (geometry::evaluate_definition(def, compiled.table, model.witness_seed) != holds) {
            out.push_back(def.atom);
        }
    }
    for (auto const &f : compiled.background) {
        if (!geometry::evaluate(f, compiled.table, model.witness_seed)) {
            out.push_back(0);
        }
    }
    return out;
}

auto rational_text(Rational const &value) -> std::string {
    Rational q = value;
    q.canonicalize();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

auto witness_json(Witness const &witness) -> std::string {
    nlohmann::ordered_json doc;
    doc["modelIndex"] = witness.model_index;
    doc["atoms"] = witness.atoms;
    auto objects = nlohmann::ordered_json::object();
    for (auto const &o : witness.objects) {
        static constexpr std::array<char const *, 2> point_keys{"x", "y"};
        static constexpr std::array<char const *, 4> rect_keys{"xmin", "ymin", "xmax", "ymax"};
        static constexpr std::array<char const *, 4> segment_keys{"xs", "ys", "xe", "ye"};
        std::span<char const *const> keys = o.sort == Sort::Point  ? std::span<char const *const>(point_keys)
                                            : o.sort == Sort::Rect ? std::span<char const *const>(rect_keys)
                                                                   : std::span<char const *const>(segment_keys);
        auto coords = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < keys.size() && i < o.coords.size(); ++i) {
            coords[keys[i]] = rational_text(o.coords[i]);
        }
        objects[o.name] = {{"sort", std::string(sort_name(o.sort))}, {"coords", std::move(coords)}};
    }
    doc["objects"] = std::move(objects);
    return doc.dump(2) + "\n";
}

namespace {

/// Exact rational rounded half away from zero to six decimals, trailing
/// zeros dropped.
auto decimal(Rational const &value) -> std::string {
    mpz_class scale = 1000000;
    mpz_class num = value.get_num() * scale;
    mpz_class den = value.get_den();
    bool negative = num < 0;
    num = abs(num);
    mpz_class q = (2 * num + den) / (2 * den);
    if (q == 0) {
        negative = false;
    }
    mpz_class whole = q / scale;
    mpz_class frac = q % scale;
    std::string out = (negative ? "-" : "") + whole.get_str();
    if (frac != 0) {
        auto digits = frac.get_str();
        digits.insert(0, 6 - digits.size(), '0');
        while (digits.back() == '0') {
            digits.pop_back();
        }
        out += "." + digits;
    }
    return out;
}

auto escape(std::string const &text) -> std::string {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

class Canvas {
public:
    Canvas(Witness const &witness, SvgOptions const &options)
        : options_(options) {
        bool any = false;
        auto extend = [&](Rational const &x, Rational const &y) {
            if (!any) {
                min_x_ = max_x_ = x;
                min_y_ = max_y_ = y;
                any = true;
                return;
            }
            min_x_ = std::min(min_x_, x);
            max_x_ = std::max(max_x_, x);
            min_y_ = std::min(min_y_, y);
            max_y_ = std::max(max_y_, y);
        };
        for (auto const &o : witness.objects) {
            for (std::size_t i = 0; i + 1 < o.coords.size(); i += 2) {
                extend(o.coords[i], o.coords[i + 1]);
            }
        }
        Rational span_x = max_x_ - min_x_;
        Rational span_y = max_y_ - min_y_;
        Rational inner_w = Rational(options.width) * Rational(9, 10);
        Rational inner_h = Rational(options.height) * Rational(9, 10);
        if (span_x == 0 && span_y == 0) {
            scale_ = 1;
        } else if (span_x == 0) {
            scale_ = inner_h / span_y;
        } else if (span_y == 0) {
            scale_ = inner_w / span_x;
        } else {
            scale_ = std::min(inner_w / span_x, inner_h / span_y);
        }
        offset_x_ = Rational(options.width) / 20 + (inner_w - span_x * scale_) / 2;
        offset_y_ = Rational(options.height) / 20 + (inner_h - span_y * scale_) / 2;
    }

    [[nodiscard]] auto x(Rational const &v) const -> Rational { return offset_x_ + (v - min_x_) * scale_; }

    [[nodiscard]] auto y(Rational const &v) const -> Rational {
        Rational t = offset_y_ + (v - min_y_) * scale_;
        return options_.flip_y ? Rational(options_.height) - t : t;
    }

    [[nodiscard]] auto scale() const -> Rational const & { return scale_; }

private:
    SvgOptions options_;
    Rational min_x_, max_x_, min_y_, max_y_;
    Rational scale_ = 1;
    Rational offset_x_, offset_y_;
};

} // namespace

auto render_svg(Witness const &witness, SvgOptions const &options) -> std::string {
    Canvas canvas(witness, options);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" fill=\"white\"/>\n";

    auto label = [&](std::string const &name, Rational const &x, Rational const &y) {
        if (options.labels) {
            out << "<text x=\"" << decimal(x) << "\" y=\"" << decimal(y)
                << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(name) << "</text>\n";
        }
    };

    for (auto const &o : witness.objects) {
        if (o.sort != Sort::Rect) {
            continue;
        }
        Rational x0 = canvas.x(o.coords[0]);
        Rational x1 = canvas.x(o.coords[2]);
        Rational y0 = canvas.y(o.coords[1]);
        Rational y1 = canvas.y(o.coords[3]);
        Rational left = std::min(x0, x1);
        Rational top = std::min(y0, y1);
        out << "<rect x=\"" << decimal(left) << "\" y=\"" << decimal(top) << "\" width=\""
            << decimal(abs(x1 - x0)) << "\" height=\"" << decimal(abs(y1 - y0))
            << "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n";
        label(o.name, left + 4, top + 14);
    }
    for (auto const &o : witness.objects) {
        if (o.sort != Sort::Segment) {
            continue;
        }
        Rational x0 = canvas.x(o.coords[0]);
        Rational y0 = canvas.y(o.coords[1]);
        out << "<line x1=\"" << decimal(x0) << "\" y1=\"" << decimal(y0) << "\" x2=\"" << decimal(canvas.x(o.coords[2]))
            << "\" y2=\"" << decimal(canvas.y(o.coords[3])) << "\" stroke=\"gray\" stroke-width=\"2\"/>\n";
        label(o.name, x0, y0 - 6);
    }
    for (auto const &o : witness.objects) {
        if (o.sort != Sort::Point) {
            continue;
        }
        Rational cx = canvas.x(o.coords[0]);
        Rational cy = canvas.y(o.coords[1]);
        out << "<circle cx=\"" << decimal(cx) << "\" cy=\"" << decimal(cy) << "\" r=\"4\" fill=\"black\"/>\n";
        label(o.name, cx + 6, cy - 6);
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace sasp
