#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "svdd/data_matrix.hpp"

namespace svdd {

using Point2 = std::array<double, 2>;

/// Star-shaped polygon around the origin, vertices counterclockwise.
struct Polygon {
    std::vector<Point2> vertices;
    std::size_t k = 0;
    double r_min = 0.0;
    double r_max = 0.0;
    std::uint64_t seed = 0;
};

struct BoundingBox {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
};

/// A resolution x resolution lattice of cell centers over `bounds`. Cell (ix, iy) has flat index
/// iy * resolution + ix.
struct GridSpec {
    BoundingBox bounds;
    std::size_t resolution = 200;

    std::size_t size() const noexcept { return resolution * resolution; }
    Point2 cell_center(std::size_t ix, std::size_t iy) const noexcept;
    /// All cell centers as a (resolution^2) x 2 matrix in flat-index order.
    DataMatrix points() const;
};

struct LabeledGrid {
    GridSpec grid;
    /// true = inside, flat-index order.
    std::vector<bool> labels;
};

/// Random polygon with k vertices: angles are sorted i.i.d. U(0, 2pi) and radii i.i.d.
/// U(r_min, r_max). Angle sets leaving a gap of pi or more are redrawn, which keeps the origin
/// strictly inside and the polygon simple. Throws InputError when k < 3 or radii are invalid.
Polygon generate_polygon(std::size_t k, double r_min, double r_max, std::uint64_t seed);

/// Polygon from explicit vertices (counterclockwise), for fixtures.
Polygon polygon_from_vertices(std::vector<Point2> vertices);

BoundingBox bounding_box(const Polygon& poly);

/// Even-odd ray casting. Points on an edge or vertex count as inside.
bool point_in_polygon(const Polygon& poly, Point2 point);

/// Shoelace area (positive for counterclockwise vertices).
double polygon_area(const Polygon& poly);

/// `count` points uniform over the interior, by rejection from the bounding box.
DataMatrix sample_polygon_interior(const Polygon& poly, std::size_t count, std::uint64_t seed);

/// Cell centers over the polygon's bounding rectangle, each labeled by point_in_polygon.
/// Throws InputError when resolution < 2.
LabeledGrid label_grid(const Polygon& poly, std::size_t resolution = 200);

enum class ShapeKind { banana, star, two_donut };

/// Parse "banana" | "star" | "two_donut" (also "two-donut"). Throws InputError otherwise.
ShapeKind parse_shape_kind(std::string_view name);
std::string_view to_string(ShapeKind kind);

struct ShapeParams {
    // banana: uniform over the upper half-annulus of mid radius banana_radius and radial
    // thickness banana_width, plus isotropic Gaussian jitter.
    double banana_radius = 3.0;
    double banana_width = 1.0;
    double banana_jitter = 0.0;
    // star: uniform over a five-spike star polygon.
    double star_outer = 5.0;
    double star_inner = 2.0;
    std::size_t star_spikes = 5;
    // two_donut: two annuli centered at (-donut_offset, 0) and (+donut_offset, 0).
    double donut_inner = 1.0;
    double donut_outer = 2.0;
    double donut_offset = 2.5;
};

/// Seeded 2-D point cloud of the requested kind. Throws InputError when count == 0.
DataMatrix generate_shape(ShapeKind kind, std::size_t count, std::uint64_t seed, const ShapeParams& params = {});

/// The star outline used by generate_shape(ShapeKind::star, ...).
Polygon star_polygon(const ShapeParams& params = {});

/// Bounding box of the rows of a 2-column matrix, widened by `margin` times its extent on each side.
BoundingBox data_bounds(const DataMatrix& data, double margin = 0.1);

}  // namespace svdd
