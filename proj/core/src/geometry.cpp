#include "gwabm/geometry.hpp"

#include <algorithm>

namespace gwabm {

namespace {

constexpr double kOnEdgeDist2 = 1e-18; // ~1 nanometer

double cross(Point2D o, Point2D a, Point2D b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int orientation_sign(Point2D o, Point2D a, Point2D b) {
    double c = cross(o, a, b);
    if (c > 0) return 1;
    if (c < 0) return -1;
    return 0;
}

bool on_segment_collinear(Point2D p, Point2D a, Point2D b) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection, including endpoint touches and overlaps.
bool segments_intersect(Point2D p1, Point2D p2, Point2D q1, Point2D q2) {
    int o1 = orientation_sign(p1, p2, q1);
    int o2 = orientation_sign(p1, p2, q2);
    int o3 = orientation_sign(q1, q2, p1);
    int o4 = orientation_sign(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment_collinear(q1, p1, p2)) return true;
    if (o2 == 0 && on_segment_collinear(q2, p1, p2)) return true;
    if (o3 == 0 && on_segment_collinear(p1, q1, q2)) return true;
    if (o4 == 0 && on_segment_collinear(p2, q1, q2)) return true;
    return false;
}

} // namespace

Ring normalize_ring(const Ring& ring) {
    Ring out;
    out.reserve(ring.size());
    for (const Point2D& p : ring) {
        if (!out.empty() && out.back().x == p.x && out.back().y == p.y) continue;
        out.push_back(p);
    }
    if (out.size() >= 2 && out.front().x == out.back().x && out.front().y == out.back().y) {
        out.pop_back();
    }
    return out;
}

double ring_area(std::span<const Point2D> ring) {
    const std::size_t n = ring.size();
    if (n < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        twice += ring[j].x * ring[i].y - ring[i].x * ring[j].y;
    }
    return std::abs(twice) * 0.5;
}

Point2D ring_centroid(std::span<const Point2D> ring) {
    const std::size_t n = ring.size();
    if (n == 0) return {};
    double twice = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        double w = ring[j].x * ring[i].y - ring[i].x * ring[j].y;
        twice += w;
        cx += (ring[j].x + ring[i].x) * w;
        cy += (ring[j].y + ring[i].y) * w;
    }
    if (std::abs(twice) < 1e-12) {
        double sx = 0.0, sy = 0.0;
        for (const Point2D& p : ring) {
            sx += p.x;
            sy += p.y;
        }
        return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
    }
    double scale = 1.0 / (3.0 * twice);
    return {cx * scale, cy * scale};
}

bool ring_is_simple(std::span<const Point2D> ring) {
    const std::size_t n = ring.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        Point2D a1 = ring[i];
        Point2D a2 = ring[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip adjacent edges (they share a vertex by construction).
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            Point2D b1 = ring[j];
            Point2D b2 = ring[(j + 1) % n];
            if (segments_intersect(a1, a2, b1, b2)) return false;
        }
    }
    return true;
}

double point_segment_dist2(Point2D p, Point2D a, Point2D b) {
    double abx = b.x - a.x, aby = b.y - a.y;
    double apx = p.x - a.x, apy = p.y - a.y;
    double len2 = abx * abx + aby * aby;
    double t = len2 > 0 ? std::clamp((apx * abx + apy * aby) / len2, 0.0, 1.0) : 0.0;
    double dx = apx - t * abx, dy = apy - t * aby;
    return dx * dx + dy * dy;
}

bool point_in_ring(Point2D p, std::span<const Point2D> ring) {
    const std::size_t n = ring.size();
    if (n < 3) return false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if (point_segment_dist2(p, ring[j], ring[i]) <= kOnEdgeDist2) return true;
    }
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2D& a = ring[j];
        const Point2D& b = ring[i];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x_int = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x_int) inside = !inside;
        }
    }
    return inside;
}

BoundingBox ring_bounds(std::span<const Point2D> ring) {
    BoundingBox bb;
    if (ring.empty()) return bb;
    bb.min_x = bb.max_x = ring[0].x;
    bb.min_y = bb.max_y = ring[0].y;
    for (const Point2D& p : ring) {
        bb.min_x = std::min(bb.min_x, p.x);
        bb.max_x = std::max(bb.max_x, p.x);
        bb.min_y = std::min(bb.min_y, p.y);
        bb.max_y = std::max(bb.max_y, p.y);
    }
    return bb;
}

} // namespace gwabm
