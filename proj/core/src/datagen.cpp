#include "svdd/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "svdd/error.hpp"

namespace svdd {

namespace {

using Rng = std::mt19937_64;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool on_segment(Point2 a, Point2 b, Point2 p) {
    const double abx = b[0] - a[0];
    const double aby = b[1] - a[1];
    const double apx = p[0] - a[0];
    const double apy = p[1] - a[1];
    const double cross = abx * apy - aby * apx;
    const double scale = std::max(1.0, abx * abx + aby * aby);
    if (std::abs(cross) > 1e-12 * scale) {
        return false;
    }
    return p[0] >= std::min(a[0], b[0]) && p[0] <= std::max(a[0], b[0]) && p[1] >= std::min(a[1], b[1]) &&
           p[1] <= std::max(a[1], b[1]);
}

DataMatrix rejection_sample(const Polygon& poly, std::size_t count, Rng& rng) {
    const BoundingBox box = bounding_box(poly);
    std::uniform_real_distribution<double> ux(box.x_min, box.x_max);
    std::uniform_real_distribution<double> uy(box.y_min, box.y_max);
    std::vector<double> values;
    values.reserve(count * 2);
    std::size_t accepted = 0;
    while (accepted < count) {
        const Point2 p{ux(rng), uy(rng)};
        if (point_in_polygon(poly, p)) {
            values.push_back(p[0]);
            values.push_back(p[1]);
            ++accepted;
        }
    }
    return DataMatrix(count, 2, std::move(values));
}

DataMatrix banana(std::size_t count, Rng& rng, const ShapeParams& params) {
    const double r_in = params.banana_radius - 0.5 * params.banana_width;
    const double r_out = params.banana_radius + 0.5 * params.banana_width;
    if (!(r_in >= 0.0 && r_in < r_out) || !(params.banana_jitter >= 0.0)) {
        throw InputError("generate_shape: banana needs width > 0, radius >= width / 2 and jitter >= 0");
    }
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    std::uniform_real_distribution<double> r2(r_in * r_in, r_out * r_out);
    std::normal_distribution<double> jitter(0.0, params.banana_jitter > 0.0 ? params.banana_jitter : 1.0);
    std::vector<double> values;
    values.reserve(count * 2);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = angle(rng);
        const double r = std::sqrt(r2(rng));
        double dx = 0.0;
        double dy = 0.0;
        if (params.banana_jitter > 0.0) {
            dx = jitter(rng);
            dy = jitter(rng);
        }
        values.push_back(r * std::cos(t) + dx);
        values.push_back(r * std::sin(t) + dy);
    }
    return DataMatrix(count, 2, std::move(values));
}

DataMatrix two_donut(std::size_t count, Rng& rng, const ShapeParams& params) {
    if (!(params.donut_inner >= 0.0 && params.donut_inner < params.donut_outer) ||
        !(params.donut_offset > params.donut_outer)) {
        throw InputError("generate_shape: two_donut needs 0 <= inner < outer < offset");
    }
    std::bernoulli_distribution which(0.5);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::uniform_real_distribution<double> r2(params.donut_inner * params.donut_inner,
                                              params.donut_outer * params.donut_outer);
    std::vector<double> values;
    values.reserve(count * 2);
    for (std::size_t i = 0; i < count; ++i) {
        const double cx = which(rng) ? params.donut_offset : -params.donut_offset;
        const double t = angle(rng);
        const double r = std::sqrt(r2(rng));
        values.push_back(cx + r * std::cos(t));
        values.push_back(r * std::sin(t));
    }
    return DataMatrix(count, 2, std::move(values));
}

}  // namespace

Point2 GridSpec::cell_center(std::size_t ix, std::size_t iy) const noexcept {
    const double res = static_cast<double>(resolution);
    const double w = (bounds.x_max - bounds.x_min) / res;
    const double h = (bounds.y_max - bounds.y_min) / res;
    return {bounds.x_min + (static_cast<double>(ix) + 0.5) * w, bounds.y_min + (static_cast<double>(iy) + 0.5) * h};
}

DataMatrix GridSpec::points() const {
    std::vector<double> values;
    values.reserve(size() * 2);
    for (std::size_t iy = 0; iy < resolution; ++iy) {
        for (std::size_t ix = 0; ix < resolution; ++ix) {
            const Point2 c = cell_center(ix, iy);
            values.push_back(c[0]);
            values.push_back(c[1]);
        }
    }
    return DataMatrix(size(), 2, std::move(values));
}

Polygon generate_polygon(std::size_t k, double r_min, double r_max, std::uint64_t seed) {
    if (k < 3) {
        throw InputError("generate_polygon: need at least 3 vertices, got " + std::to_string(k));
    }
    if (!(r_min > 0.0) || !(r_min <= r_max) || !std::isfinite(r_max)) {
        throw InputError("generate_polygon: require 0 < r_min <= r_max");
    }
    Rng rng(seed);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::uniform_real_distribution<double> radius(r_min, r_max);

    std::vector<double> theta(k);
    while (true) {
        for (double& t : theta) {
            t = angle(rng);
        }
        std::sort(theta.begin(), theta.end());
        double max_gap = theta.front() + kTwoPi - theta.back();
        for (std::size_t i = 1; i < k; ++i) {
            max_gap = std::max(max_gap, theta[i] - theta[i - 1]);
        }
        if (max_gap < std::numbers::pi) {
            break;
        }
    }

    Polygon poly;
    poly.k = k;
    poly.r_min = r_min;
    poly.r_max = r_max;
    poly.seed = seed;
    poly.vertices.reserve(k);
    for (double t : theta) {
        const double r = radius(rng);
        poly.vertices.push_back({r * std::cos(t), r * std::sin(t)});
    }
    return poly;
}

Polygon polygon_from_vertices(std::vector<Point2> vertices) {
    if (vertices.size() < 3) {
        throw InputError("polygon_from_vertices: need at least 3 vertices");
    }
    Polygon poly;
    poly.k = vertices.size();
    double r_min = INFINITY;
    double r_max = 0.0;
    for (const auto& v : vertices) {
        const double r = std::hypot(v[0], v[1]);
        r_min = std::min(r_min, r);
        r_max = std::max(r_max, r);
    }
    poly.r_min = r_min;
    poly.r_max = r_max;
    poly.vertices = std::move(vertices);
    return poly;
}

BoundingBox bounding_box(const Polygon& poly) {
    BoundingBox box{INFINITY, -INFINITY, INFINITY, -INFINITY};
    for (const auto& v : poly.vertices) {
        box.x_min = std::min(box.x_min, v[0]);
        box.x_max = std::max(box.x_max, v[0]);
        box.y_min = std::min(box.y_min, v[1]);
        box.y_max = std::max(box.y_max, v[1]);
    }
    return box;
}

bool point_in_polygon(const Polygon& poly, Point2 p) {
    const auto& v = poly.vertices;
    const std::size_t k = v.size();
    bool inside = false;
    for (std::size_t i = 0, j = k - 1; i < k; j = i++) {
        const Point2 a = v[j];
        const Point2 b = v[i];
        if (on_segment(a, b, p)) {
            return true;
        }
        if ((a[1] > p[1]) != (b[1] > p[1])) {
            const double x_cross = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if (p[0] < x_cross) {
                inside = !inside;
            }
        }
    }
    return inside;
}

double polygon_area(const Polygon& poly) {
    const auto& v = poly.vertices;
    double twice = 0.0;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        twice += v[j][0] * v[i][1] - v[i][0] * v[j][1];
    }
    return 0.5 * twice;
}

DataMatrix sample_polygon_interior(const Polygon& poly, std::size_t count, std::uint64_t seed) {
    if (count == 0) {
        throw InputError("sample_polygon_interior: count must be at least 1");
    }
    if (polygon_area(poly) == 0.0) {
        throw InputError("sample_polygon_interior: polygon has zero area");
    }
    Rng rng(seed);
    return rejection_sample(poly, count, rng);
}

LabeledGrid label_grid(const Polygon& poly, std::size_t resolution) {
    if (resolution < 2) {
        throw InputError("label_grid: resolution must be at least 2");
    }
    LabeledGrid out;
    out.grid = GridSpec{bounding_box(poly), resolution};
    out.labels.reserve(out.grid.size());
    for (std::size_t iy = 0; iy < resolution; ++iy) {
        for (std::size_t ix = 0; ix < resolution; ++ix) {
            out.labels.push_back(point_in_polygon(poly, out.grid.cell_center(ix, iy)));
        }
    }
    return out;
}

ShapeKind parse_shape_kind(std::string_view name) {
    if (name == "banana") {
        return ShapeKind::banana;
    }
    if (name == "star") {
        return ShapeKind::star;
    }
    if (name == "two_donut" || name == "two-donut" || name == "twodonut") {
        return ShapeKind::two_donut;
    }
    throw InputError("unknown shape kind '" + std::string(name) + "' (expected banana, star or two_donut)");
}

std::string_view to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::banana:
            return "banana";
        case ShapeKind::star:
            return "star";
        case ShapeKind::two_donut:
            return "two_donut";
    }
    return "unknown";
}

Polygon star_polygon(const ShapeParams& params) {
    std::vector<Point2> v;
    const std::size_t spikes = std::max<std::size_t>(params.star_spikes, 3);
    for (std::size_t i = 0; i < 2 * spikes; ++i) {
        const double r = (i % 2 == 0) ? params.star_outer : params.star_inner;
        const double t =
            std::numbers::pi / 2.0 + std::numbers::pi * static_cast<double>(i) / static_cast<double>(spikes);
        v.push_back({r * std::cos(t), r * std::sin(t)});
    }
    return polygon_from_vertices(std::move(v));
}

DataMatrix generate_shape(ShapeKind kind, std::size_t count, std::uint64_t seed, const ShapeParams& params) {
    if (count == 0) {
        throw InputError("generate_shape: count must be at least 1");
    }
    Rng rng(seed);
    switch (kind) {
        case ShapeKind::banana:
            return banana(count, rng, params);
        case ShapeKind::star:
            return rejection_sample(star_polygon(params), count, rng);
        case ShapeKind::two_donut:
            return two_donut(count, rng, params);
    }
    throw InputError("generate_shape: unknown shape kind");
}

BoundingBox data_bounds(const DataMatrix& data, double margin) {
    if (data.cols() != 2 || data.empty()) {
        throw InputError("data_bounds: expected a nonempty 2-column matrix");
    }
    BoundingBox box{INFINITY, -INFINITY, INFINITY, -INFINITY};
    for (std::size_t i = 0; i < data.rows(); ++i) {
        box.x_min = std::min(box.x_min, data(i, 0));
        box.x_max = std::max(box.x_max, data(i, 0));
        box.y_min = std::min(box.y_min, data(i, 1));
        box.y_max = std::max(box.y_max, data(i, 1));
    }
    const double dx = (box.x_max - box.x_min) * margin;
    const double dy = (box.y_max - box.y_min) * margin;
    return {box.x_min - dx, box.x_max + dx, box.y_min - dy, box.y_max + dy};
}

}  // namespace svdd
