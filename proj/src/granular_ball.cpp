#include "gbgm/granular_ball.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gbgm {

namespace {

void check_points(const std::vector<Point>& points) {
    if (points.empty()) {
        throw std::invalid_argument("empty ball");
    }
    const std::size_t dim = points.front().size();
    if (dim == 0) {
        throw std::invalid_argument("dimension mismatch");
    }
    for (const Point& p : points) {
        if (p.size() != dim) {
            throw std::invalid_argument("dimension mismatch");
        }
        for (double v : p) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("point coordinates must be finite");
            }
        }
    }
}

}  // namespace

Point ball_center(const std::vector<Point>& points) {
    check_points(points);
    const std::size_t dim = points.front().size();
    Point center(dim, 0.0);
    for (const Point& p : points) {
        for (std::size_t d = 0; d < dim; ++d) center[d] += p[d];
    }
    const double inv = 1.0 / static_cast<double>(points.size());
    for (double& c : center) c *= inv;
    return center;
}

double ball_radius(const std::vector<Point>& points, const Point& center) {
    check_points(points);
    if (center.size() != points.front().size()) {
        throw std::invalid_argument("dimension mismatch");
    }
    double sum = 0.0;
    for (const Point& p : points) {
        double sq = 0.0;
        for (std::size_t d = 0; d < center.size(); ++d) {
            const double diff = p[d] - center[d];
            sq += diff * diff;
        }
        sum += std::sqrt(sq);
    }
    return sum / static_cast<double>(points.size());
}

GranularBall::GranularBall(std::vector<Point> points) : points_(std::move(points)) {
    center_ = ball_center(points_);
    radius_ = ball_radius(points_, center_);
}

std::pair<GranularBall, GranularBall> split_ball(const GranularBall& ball) {
    const std::vector<Point>& pts = ball.points();
    if (pts.size() < 2) {
        throw std::invalid_argument("unsplittable ball");
    }
    const std::size_t dim = pts.front().size();
    const Point& center = ball.center();

    // Axis of maximum variance, ties to the lower index.
    std::size_t axis = 0;
    double best = -1.0;
    for (std::size_t d = 0; d < dim; ++d) {
        double var = 0.0;
        for (const Point& p : pts) {
            const double diff = p[d] - center[d];
            var += diff * diff;
        }
        if (var > best) {
            best = var;
            axis = d;
        }
    }
    if (best <= 0.0) {
        throw std::invalid_argument("unsplittable ball");
    }

    std::vector<double> coords(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) coords[i] = pts[i][axis];
    std::sort(coords.begin(), coords.end());
    const std::size_t mid = coords.size() / 2;
    double median = (coords.size() % 2 == 0)
                        ? 0.5 * (coords[mid - 1] + coords[mid])
                        : coords[mid];
    // Points equal to the median go low; if everything lies at or below it
    // (median == max), split strictly below instead so both children exist.
    bool strict = (median == coords.back());

    std::vector<Point> lower, upper;
    for (const Point& p : pts) {
        const bool low = strict ? (p[axis] < median) : (p[axis] <= median);
        (low ? lower : upper).push_back(p);
    }
    return {GranularBall(std::move(lower)), GranularBall(std::move(upper))};
}

std::vector<GranularBall> cover(std::vector<Point> points, SplitThreshold threshold) {
    if (!(threshold.max_radius > 0.0)) {
        throw std::invalid_argument("split threshold must be positive");
    }
    check_points(points);

    std::vector<GranularBall> done;
    std::vector<GranularBall> pending;
    pending.emplace_back(std::move(points));
    while (!pending.empty()) {
        GranularBall ball = std::move(pending.back());
        pending.pop_back();
        if (ball.size() == 1 || ball.radius() <= threshold.max_radius) {
            done.push_back(std::move(ball));
            continue;
        }
        auto [lower, upper] = split_ball(ball);
        pending.push_back(std::move(upper));
        pending.push_back(std::move(lower));
    }
    return done;
}

}  // namespace gbgm
