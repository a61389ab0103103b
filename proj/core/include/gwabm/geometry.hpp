#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace gwabm {

/// Planar point in meters. City-scale extents make a local projection
/// accurate enough; there is no geodesy anywhere in this project.
struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Point2D a, Point2D b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

using Ring = std::vector<Point2D>;

/// Drops an exact closing vertex and consecutive duplicates. Returns the
/// open ring used everywhere internally.
Ring normalize_ring(const Ring& ring);

/// Unsigned polygon area (shoelace). Ring must be open.
double ring_area(std::span<const Point2D> ring);

/// Area-weighted polygon centroid; falls back to the vertex mean for
/// degenerate (zero-area) rings.
Point2D ring_centroid(std::span<const Point2D> ring);

/// True when no two non-adjacent edges intersect. O(n^2), rings are small.
bool ring_is_simple(std::span<const Point2D> ring);

/// Squared distance from p to segment ab.
double point_segment_dist2(Point2D p, Point2D a, Point2D b);

/// Boundary-inclusive containment test, ray casting with an explicit
/// on-edge check first.
bool point_in_ring(Point2D p, std::span<const Point2D> ring);

struct BoundingBox {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    bool contains(Point2D p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
};

BoundingBox ring_bounds(std::span<const Point2D> ring);

} // namespace gwabm
