#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace agrosim::planner {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double k, Point2 a) { return {k * a.x, k * a.y}; }
    friend bool operator==(const Point2&, const Point2&) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Rotation about the origin by `angle` radians (counterclockwise).
inline Point2 rotate(Point2 p, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

std::vector<Point2> rotate(std::span<const Point2> pts, double angle);

double signed_area(std::span<const Point2> poly);
bool is_simple(std::span<const Point2> poly);
/// Even-odd point-in-polygon test; points on the boundary may go either way.
bool contains(std::span<const Point2> poly, Point2 p);
/// Distance from `p` to the segment [a, b].
double segment_distance(Point2 p, Point2 a, Point2 b);
/// Distance from `p` to the nearest polygon edge.
double boundary_distance(std::span<const Point2> poly, Point2 p);

/// A user-selected field: simple, counterclockwise, positive area.
class FieldPolygon {
public:
    /// Validates the vertex ring; a clockwise ring is reversed into counterclockwise order.
    /// Throws DegeneratePolygon.
    explicit FieldPolygon(std::vector<Point2> vertices);

    const std::vector<Point2>& vertices() const { return vertices_; }
    double area() const { return signed_area(vertices_); }
    FieldPolygon rotated(double angle) const;

private:
    std::vector<Point2> vertices_;
};

} // namespace agrosim::planner
