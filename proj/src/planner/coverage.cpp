#include "agrosim/planner/coverage.hpp"

#include "agrosim/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace agrosim::planner {

namespace {

struct RawSwath {
    double y;
    double x0;
    double x1;
    std::size_t line;
};

std::vector<double> crossings(const std::vector<Point2>& poly, double y) {
    std::vector<double> xs;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i];
        const Point2 b = poly[(i + 1) % n];
        if ((a.y > y) != (b.y > y)) xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

} // namespace

CoveragePlan plan_coverage(const FieldPolygon& poly, double width, double direction, std::optional<Point2> start_from) {
    if (!(width > 0.0) || !std::isfinite(width)) throw ValidationError("width", "must be positive");
    if (!std::isfinite(direction)) throw ValidationError("direction", "must be finite");

    const std::vector<Point2> local = rotate(poly.vertices(), -direction);
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -y_min;
    for (const auto& p : local) {
        y_min = std::min(y_min, p.y);
        y_max = std::max(y_max, p.y);
    }
    const double extent = y_max - y_min;
    if (!(extent > 0.0)) throw DegeneratePolygon("polygon has no extent across the driving direction");

    const auto lines = static_cast<std::size_t>(std::max(1.0, std::ceil(extent / width - 1e-9)));
    const double mid = 0.5 * (y_min + y_max);

    std::vector<RawSwath> raw;
    std::size_t used_lines = 0;
    for (std::size_t k = 0; k < lines; ++k) {
        const double y = mid + (static_cast<double>(k) - 0.5 * static_cast<double>(lines - 1)) * width;
        const auto xs = crossings(local, y);
        bool any = false;
        for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
            if (xs[i + 1] - xs[i] > 1e-9) {
                raw.push_back({y, xs[i], xs[i + 1], k});
                any = true;
            }
        }
        if (any) ++used_lines;
    }
    if (raw.empty()) throw DegeneratePolygon("no sweep line intersects the polygon");

    CoveragePlan plan;
    plan.implement_width = width;
    plan.direction = direction;
    plan.line_count = used_lines;

    auto world = [direction](double x, double y) { return rotate(Point2{x, y}, direction); };

    std::vector<bool> visited(raw.size(), false);
    Point2 cursor;
    int heading = 0; // +1 along local x, -1 against, 0 before the first swath
    if (start_from) {
        cursor = rotate(*start_from, -direction);
        plan.waypoints.push_back(*start_from);
    } else {
        // lowest line, leftmost segment, entered from its left end
        cursor = {raw.front().x0, raw.front().y};
    }

    for (std::size_t taken = 0; taken < raw.size(); ++taken) {
        std::size_t best = raw.size();
        bool enter_low = true;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (visited[i]) continue;
            // after the first swath only the end that reverses the heading is admissible
            const double d0 = heading <= 0 ? distance(cursor, {raw[i].x0, raw[i].y}) : best_d;
            const double d1 = heading >= 0 ? distance(cursor, {raw[i].x1, raw[i].y}) : best_d;
            const double d = std::min(d0, d1);
            if (d < best_d - 1e-12) {
                best_d = d;
                best = i;
                enter_low = d0 <= d1;
            }
        }
        visited[best] = true;
        const RawSwath& r = raw[best];
        const Point2 a{enter_low ? r.x0 : r.x1, r.y};
        const Point2 b{enter_low ? r.x1 : r.x0, r.y};
        heading = enter_low ? 1 : -1;
        Swath sw{world(a.x, a.y), world(b.x, b.y), r.line};
        plan.waypoints.push_back(sw.start);
        plan.waypoints.push_back(sw.end);
        plan.swaths.push_back(sw);
        cursor = b;
    }
    return plan;
}

CoverageGrid::CoverageGrid(const FieldPolygon& poly, double width, double edge_margin)
    : half_width_(0.5 * width), cell_(std::min(width / 10.0, 0.1)) {
    if (!(width > 0.0)) throw ValidationError("width", "must be positive");
    const auto& v = poly.vertices();
    double x_min = std::numeric_limits<double>::infinity(), y_min = x_min;
    double x_max = -x_min, y_max = -x_min;
    for (const auto& p : v) {
        x_min = std::min(x_min, p.x);
        y_min = std::min(y_min, p.y);
        x_max = std::max(x_max, p.x);
        y_max = std::max(y_max, p.y);
    }
    origin_ = {x_min, y_min};
    nx_ = static_cast<std::size_t>(std::ceil((x_max - x_min) / cell_));
    ny_ = static_cast<std::size_t>(std::ceil((y_max - y_min) / cell_));
    state_.assign(nx_ * ny_, -1);
    for (std::size_t j = 0; j < ny_; ++j) {
        for (std::size_t i = 0; i < nx_; ++i) {
            const Point2 c{origin_.x + (static_cast<double>(i) + 0.5) * cell_,
                           origin_.y + (static_cast<double>(j) + 0.5) * cell_};
            if (!contains(v, c)) continue;
            if (edge_margin > 0.0 && boundary_distance(v, c) <= edge_margin) continue;
            state_[j * nx_ + i] = 0;
            ++interior_;
        }
    }
}

void CoverageGrid::mark_segment(Point2 a, Point2 b) {
    if (nx_ == 0 || ny_ == 0) return;
    const double lo_x = std::min(a.x, b.x) - half_width_, hi_x = std::max(a.x, b.x) + half_width_;
    const double lo_y = std::min(a.y, b.y) - half_width_, hi_y = std::max(a.y, b.y) + half_width_;

    auto index_range = [this](double lo, double hi, double o, std::size_t n) {
        const double f0 = std::floor((lo - o) / cell_ - 0.5);
        const double f1 = std::ceil((hi - o) / cell_ - 0.5);
        const auto i0 = static_cast<long long>(std::max(0.0, f0));
        const auto i1 = static_cast<long long>(std::min(static_cast<double>(n) - 1.0, f1));
        return std::pair{i0, i1};
    };
    const auto [i0, i1] = index_range(lo_x, hi_x, origin_.x, nx_);
    const auto [j0, j1] = index_range(lo_y, hi_y, origin_.y, ny_);
    for (long long j = j0; j <= j1; ++j) {
        for (long long i = i0; i <= i1; ++i) {
            auto& st = state_[static_cast<std::size_t>(j) * nx_ + static_cast<std::size_t>(i)];
            if (st != 0) continue;
            const Point2 c{origin_.x + (static_cast<double>(i) + 0.5) * cell_,
                           origin_.y + (static_cast<double>(j) + 0.5) * cell_};
            if (segment_distance(c, a, b) <= half_width_) {
                st = 1;
                ++covered_;
            }
        }
    }
}

void CoverageGrid::mark_path(std::span<const Point2> path) {
    if (path.size() == 1) {
        mark_segment(path[0], path[0]);
        return;
    }
    for (std::size_t i = 1; i < path.size(); ++i) mark_segment(path[i - 1], path[i]);
}

double CoverageGrid::ratio() const {
    return interior_ == 0 ? 0.0 : static_cast<double>(covered_) / static_cast<double>(interior_);
}

double coverage_ratio(std::span<const Point2> path, const FieldPolygon& poly, double width) {
    CoverageGrid grid(poly, width);
    grid.mark_path(path);
    return grid.ratio();
}

} // namespace agrosim::planner
