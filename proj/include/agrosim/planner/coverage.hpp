#pragma once

#include "agrosim/planner/geometry.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace agrosim::planner {

/// One maximal in-polygon portion of a sweep line, oriented in traversal direction.
struct Swath {
    Point2 start;
    Point2 end;
    std::size_t line = 0; ///< sweep line index, 0 at the low side of the rotated field
};

struct CoveragePlan {
    std::vector<Swath> swaths;    ///< in traversal order
    std::vector<Point2> waypoints; ///< serpentine route, headland connections included
    double implement_width = 0.0;
    double direction = 0.0;       ///< driving direction of the swaths, rad
    std::size_t line_count = 0;   ///< sweep lines that produced at least one swath
};

/// Boustrophedon coverage plan over `poly`.
///
/// Sweep lines run along `direction`, spaced `width` apart and centered on the
/// field extent across the driving direction, so a field narrower than `width`
/// gets one centered swath. Each in-polygon portion of a line is a swath;
/// swaths are linked greedily by nearest entry endpoint into the waypoint
/// route, where after the first swath only the end that reverses the driving
/// direction counts, so consecutive swaths always alternate.
///
/// With `start_from`, linking begins at the swath endpoint nearest to that
/// point and the point itself becomes the first waypoint (replanning from the
/// current vehicle position).
CoveragePlan plan_coverage(const FieldPolygon& poly, double width, double direction,
                           std::optional<Point2> start_from = std::nullopt);

/// Rasterized coverage bookkeeping over a polygon interior.
///
/// Cells of size min(width/10, 0.1 m) whose centers lie inside the polygon form
/// the denominator; a cell is covered once its center comes within width/2 of
/// a marked path segment. Marking is monotone, so the ratio never decreases.
class CoverageGrid {
public:
    /// `edge_margin` > 0 additionally drops cells within that distance of the boundary.
    CoverageGrid(const FieldPolygon& poly, double width, double edge_margin = 0.0);

    void mark_segment(Point2 a, Point2 b);
    void mark_path(std::span<const Point2> path);

    double ratio() const;
    std::size_t interior_cells() const { return interior_; }
    std::size_t covered_cells() const { return covered_; }
    double cell_size() const { return cell_; }

private:
    double half_width_;
    double cell_;
    Point2 origin_;
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    std::vector<std::int8_t> state_; // -1 outside, 0 open, 1 covered
    std::size_t interior_ = 0;
    std::size_t covered_ = 0;
};

/// Fraction of the polygon interior swept by the implement along `path`.
/// A single-point path counts as a stationary implement.
double coverage_ratio(std::span<const Point2> path, const FieldPolygon& poly, double width);

} // namespace agrosim::planner
