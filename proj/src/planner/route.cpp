#include "agrosim/planner/route.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace agrosim::planner {

Route::Route(std::vector<Point2> waypoints) {
    if (waypoints.empty()) throw std::invalid_argument("route needs at least one waypoint");
    for (const auto& p : waypoints) {
        if (points_.empty() || distance(points_.back(), p) > 1e-12) points_.push_back(p);
    }
    cumulative_.reserve(points_.size());
    cumulative_.push_back(0.0);
    for (std::size_t i = 1; i < points_.size(); ++i) {
        cumulative_.push_back(cumulative_.back() + distance(points_[i - 1], points_[i]));
    }
}

std::size_t Route::segment_at(double s) const {
    // last segment whose start is <= s
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    std::size_t i = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    return std::min(i, points_.size() >= 2 ? points_.size() - 2 : 0);
}

Point2 Route::point_at(double s) const {
    if (points_.size() == 1) return points_.front();
    s = std::clamp(s, 0.0, length());
    const std::size_t i = segment_at(s);
    const double seg = cumulative_[i + 1] - cumulative_[i];
    const double u = seg > 0.0 ? (s - cumulative_[i]) / seg : 0.0;
    return points_[i] + u * (points_[i + 1] - points_[i]);
}

Point2 Route::tangent_at(double s) const {
    if (points_.size() < 2) return {1.0, 0.0};
    const std::size_t i = segment_at(std::clamp(s, 0.0, length()));
    const Point2 d = points_[i + 1] - points_[i];
    return (1.0 / norm(d)) * d;
}

double Route::project(Point2 p, double s_from, double s_to) const {
    s_from = std::clamp(s_from, 0.0, length());
    s_to = std::clamp(s_to, s_from, length());
    if (points_.size() == 1) return 0.0;

    double best_s = s_from;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = segment_at(s_from); i + 1 < points_.size() && cumulative_[i] <= s_to; ++i) {
        const double lo = std::max(s_from, cumulative_[i]);
        const double hi = std::min(s_to, cumulative_[i + 1]);
        if (hi < lo) continue;
        const Point2 a = points_[i];
        const Point2 ab = points_[i + 1] - a;
        const double seg = cumulative_[i + 1] - cumulative_[i];
        double u = dot(p - a, ab) / (seg * seg);
        const double s = std::clamp(cumulative_[i] + u * seg, lo, hi);
        const double d = distance(p, point_at(s));
        if (d < best_d) {
            best_d = d;
            best_s = s;
        }
    }
    return best_s;
}

Point2 lookahead_point(const Route& route, double progress, double lookahead) {
    return route.point_at(std::min(progress + lookahead, route.length()));
}

} // namespace agrosim::planner
