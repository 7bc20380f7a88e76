#pragma once

#include "agrosim/planner/geometry.hpp"

#include <vector>

namespace agrosim::planner {

/// Waypoint polyline parameterized by arc length.
class Route {
public:
    Route() = default;
    /// Consecutive duplicate waypoints are dropped. Throws std::invalid_argument when empty.
    explicit Route(std::vector<Point2> waypoints);

    const std::vector<Point2>& waypoints() const { return points_; }
    double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
    bool empty() const { return points_.empty(); }

    /// Point at arc length `s`, clamped to [0, length].
    Point2 point_at(double s) const;
    /// Unit tangent of the segment containing arc length `s` ({1,0} for a single-point route).
    Point2 tangent_at(double s) const;

    /// Arc length of the point nearest to `p` among arc lengths in [s_from, s_to].
    double project(Point2 p, double s_from, double s_to) const;

private:
    std::size_t segment_at(double s) const;

    std::vector<Point2> points_;
    std::vector<double> cumulative_;
};

/// Point at arc length min(progress + lookahead, length).
Point2 lookahead_point(const Route& route, double progress, double lookahead);

} // namespace agrosim::planner
