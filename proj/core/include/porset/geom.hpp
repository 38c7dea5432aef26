#pragma once

#include <cmath>
#include <optional>

namespace porset {

/// Width of the floating-point ambiguity band used for open-set membership.
inline constexpr double kTau = 0x1p-40;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
    friend constexpr bool operator==(Point a, Point b) = default;
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::sqrt(dot(p, p)); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Unit vector. Construction validates |u| = 1 within 2^-40.
class Direction {
public:
    Direction() = default;
    Direction(double ux, double uy);

    /// Direction at angle 2*pi*turns. Multiples of a quarter turn are exact.
    static Direction from_turns(double turns);

    double ux() const { return ux_; }
    double uy() const { return uy_; }
    Point vec() const { return {ux_, uy_}; }
    /// Anticlockwise rotation by a right angle, (-uy, ux).
    Direction perp() const;

    friend bool operator==(const Direction&, const Direction&) = default;

private:
    double ux_ = 1.0;
    double uy_ = 0.0;
};

/// The line {t * direction + offset * direction.perp() : t real}.
struct Line {
    Direction direction;
    double offset = 0.0;

    Point at(double t) const;
    double parameter_of(Point p) const { return dot(p, direction.vec()); }
    /// Signed distance of p from the parallel line through the origin.
    double offset_of(Point p) const { return dot(p, direction.perp().vec()); }
};

struct Segment {
    Point a;
    Point b;

    bool degenerate() const { return a == b; }
    double length() const { return distance(a, b); }
};

/// Open parameter interval (lo, hi) along a line.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double t) const { return lo < t && t < hi; }
    double length() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Open Minkowski sum of a segment with the disk of the given radius.
struct Capsule {
    Segment axis;
    double radius = 0.0;
};

Point closest_point_on_segment(Point p, const Segment& s);
double dist_point_segment(Point p, const Segment& s);

/// Signed distance: negative inside, zero on the boundary, positive outside.
double dist_point_capsule(Point p, const Capsule& c);

/// Parameters t with dist(l(t), c.axis) < c.radius + inflate.
/// Tangent or missing lines give nullopt.
std::optional<Interval> line_capsule_interval(const Line& l, const Capsule& c, double inflate = 0.0);

}  // namespace porset
