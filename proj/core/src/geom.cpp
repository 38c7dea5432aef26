#include "porset/geom.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "porset/errors.hpp"

namespace porset {

Direction::Direction(double ux, double uy) : ux_(ux), uy_(uy) {
    if (!std::isfinite(ux) || !std::isfinite(uy) || std::abs(ux * ux + uy * uy - 1.0) > kTau) {
        throw PreconditionError("direction is not a unit vector: (" + std::to_string(ux) + ", " +
                                std::to_string(uy) + ")");
    }
}

Direction Direction::from_turns(double turns) {
    double f = turns - std::floor(turns);
    if (f >= 1.0) f = 0.0;
    // Quadrant split keeps quarter turns exact: f - q/4 is exact for f in [q/4, (q+1)/4).
    const int q = static_cast<int>(std::floor(4.0 * f));
    const double rem = f - 0.25 * q;
    double c = 1.0;
    double s = 0.0;
    if (rem != 0.0) {
        const double angle = 2.0 * std::numbers::pi * rem;
        c = std::cos(angle);
        s = std::sin(angle);
    }
    switch (q) {
        case 0: return {c, s};
        case 1: return {-s, c};
        case 2: return {-c, -s};
        default: return {s, -c};
    }
}

Direction Direction::perp() const {
    Direction d;
    d.ux_ = -uy_;
    d.uy_ = ux_;
    return d;
}

Point Line::at(double t) const {
    const Point u = direction.vec();
    const Point n = direction.perp().vec();
    return t * u + offset * n;
}

Point closest_point_on_segment(Point p, const Segment& s) {
    const Point ab = s.b - s.a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return s.a;
    const double t = std::clamp(dot(p - s.a, ab) / len2, 0.0, 1.0);
    if (t == 0.0) return s.a;
    if (t == 1.0) return s.b;
    // Axis-parallel segments keep p's coordinate along the axis exactly.
    if (ab.y == 0.0) return {std::clamp(p.x, std::min(s.a.x, s.b.x), std::max(s.a.x, s.b.x)), s.a.y};
    if (ab.x == 0.0) return {s.a.x, std::clamp(p.y, std::min(s.a.y, s.b.y), std::max(s.a.y, s.b.y))};
    return s.a + t * ab;
}

double dist_point_segment(Point p, const Segment& s) {
    return distance(p, closest_point_on_segment(p, s));
}

double dist_point_capsule(Point p, const Capsule& c) {
    return dist_point_segment(p, c.axis) - c.radius;
}

namespace {

// Open half-line constraint lo < alpha*t + beta < hi, intersected into [*tlo, *thi].
// Returns false when the constraint is unsatisfiable.
bool clip_linear(double alpha, double beta, double lo, double hi, double* tlo, double* thi) {
    if (alpha == 0.0) return lo < beta && beta < hi;
    double a = (lo - beta) / alpha;
    double b = (hi - beta) / alpha;
    if (a > b) std::swap(a, b);
    *tlo = std::max(*tlo, a);
    *thi = std::min(*thi, b);
    return *tlo < *thi;
}

std::optional<Interval> line_disk(const Line& l, Point center, double radius) {
    const double along = l.parameter_of(center);
    const double across = l.offset_of(center) - l.offset;
    const double h2 = radius * radius - across * across;
    if (!(h2 > 0.0)) return std::nullopt;
    const double half = std::sqrt(h2);
    if (!(along - half < along + half)) return std::nullopt;
    return Interval{along - half, along + half};
}

}  // namespace

std::optional<Interval> line_capsule_interval(const Line& l, const Capsule& c, double inflate) {
    const double radius = c.radius + inflate;
    if (!(radius > 0.0)) return std::nullopt;

    std::optional<Interval> out = line_disk(l, c.axis.a, radius);
    auto merge = [&out](std::optional<Interval> piece) {
        if (!piece) return;
        if (!out) {
            out = piece;
        } else {
            out->lo = std::min(out->lo, piece->lo);
            out->hi = std::max(out->hi, piece->hi);
        }
    };
    if (c.axis.degenerate()) return out;
    merge(line_disk(l, c.axis.b, radius));

    // Slab around the axis: 0 < (q - a).u < len and |(q - a) x u| < radius.
    const Point ab = c.axis.b - c.axis.a;
    const double len = norm(ab);
    const Point u = (1.0 / len) * ab;
    const Point base = l.at(0.0) - c.axis.a;
    const Point d = l.direction.vec();
    double tlo = -HUGE_VAL;
    double thi = HUGE_VAL;
    if (clip_linear(dot(d, u), dot(base, u), 0.0, len, &tlo, &thi) &&
        clip_linear(cross(d, u), cross(base, u), -radius, radius, &tlo, &thi)) {
        merge(Interval{tlo, thi});
    }
    return out;
}

}  // namespace porset
