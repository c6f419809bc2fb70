#pragma once

#include <utility>
#include <vector>

namespace gbgm {

/// A data point: fixed-length vector of finite feature values, d >= 1.
using Point = std::vector<double>;

// Coordinatewise arithmetic mean. Throws std::invalid_argument("empty ball")
// on empty input and "dimension mismatch" on ragged dimensions.
Point ball_center(const std::vector<Point>& points);

// Mean Euclidean distance from the points to `center` (plain absolute value
// in one dimension). Zero iff all points coincide with the center.
double ball_radius(const std::vector<Point>& points, const Point& center);

/// Point set summarized by its mean center and mean-distance radius.
/// Center and radius are cached at construction and immutable afterwards.
class GranularBall {
public:
    explicit GranularBall(std::vector<Point> points);

    const std::vector<Point>& points() const { return points_; }
    const Point& center() const { return center_; }
    double radius() const { return radius_; }
    std::size_t size() const { return points_.size(); }

private:
    std::vector<Point> points_;
    Point center_;
    double radius_;
};

/// Pass condition for the recursive split: a ball is accepted once its
/// radius is at most max_radius.
struct SplitThreshold {
    double max_radius;  // > 0, validated by cover()
};

// Splits a ball in two at the median of the maximum-variance coordinate
// (ties to the lower-index coordinate; points equal to the median go to the
// lower child, unless that would leave the upper child empty, in which case
// the boundary moves below the median). Children partition the parent's
// points exactly and are both strictly smaller. Throws
// std::invalid_argument("unsplittable ball") when all points coincide.
std::pair<GranularBall, GranularBall> split_ball(const GranularBall& ball);

// Recursively splits until every ball has radius <= threshold.max_radius or
// is a single point. The concatenation of the result is a permutation of the
// input. Depth is bounded by the point count, so this always terminates.
std::vector<GranularBall> cover(std::vector<Point> points, SplitThreshold threshold);

}  // namespace gbgm
