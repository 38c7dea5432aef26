#include <cmath>
#include <random>

#include "porset/errors.hpp"
#include "porset/geom.hpp"

#include "gtest/gtest.h"

using namespace porset;

namespace {

// Minimum over dense axis samples, then a ternary refinement inside the
// winning bracket (the distance is convex along the axis).
double sampled_distance(Point p, const Segment& s, int samples) {
    auto at = [&](double t) { return s.a + t * (s.b - s.a); };
    int best = 0;
    double best_d = HUGE_VAL;
    for (int i = 0; i <= samples; ++i) {
        const double d = distance(p, at(static_cast<double>(i) / samples));
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    double lo = std::max(0, best - 1) / static_cast<double>(samples);
    double hi = std::min(samples, best + 1) / static_cast<double>(samples);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (distance(p, at(m1)) < distance(p, at(m2))) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    return std::min(best_d, distance(p, at(0.5 * (lo + hi))));
}

TEST(Geom, PointSegmentDistanceClosedForms) {
    const Segment s{{0, 0}, {1, 0}};
    EXPECT_EQ(dist_point_segment({0.5, 1}, s), 1.0);
    EXPECT_EQ(dist_point_segment({2, 0}, s), 1.0);
    EXPECT_EQ(dist_point_segment({-3, 4}, s), 5.0);
    EXPECT_EQ(dist_point_segment({0.25, 0}, s), 0.0);
}

TEST(Geom, DegenerateSegmentIsAPoint) {
    const Segment s{{1, 1}, {1, 1}};
    EXPECT_TRUE(s.degenerate());
    EXPECT_EQ(dist_point_segment({4, 5}, s), 5.0);
}

TEST(Geom, PointSegmentDistanceMatchesDenseSampling) {
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Point p{u(gen), u(gen)};
        const Segment s{{u(gen), u(gen)}, {u(gen), u(gen)}};
        EXPECT_NEAR(dist_point_segment(p, s), sampled_distance(p, s, 1000000), 1e-12) << "trial " << trial;
    }
}

TEST(Geom, CapsuleSignedDistance) {
    const Capsule c{{{0, 0}, {1, 0}}, 0.25};
    EXPECT_EQ(dist_point_capsule({0.5, 1}, c), 0.75);
    EXPECT_EQ(dist_point_capsule({0.5, 0}, c), -0.25);
    EXPECT_EQ(dist_point_capsule({2, 0}, c), 0.75);
    EXPECT_EQ(dist_point_capsule({0.5, 0.25}, c), 0.0);
}

TEST(Geom, DirectionValidation) {
    EXPECT_THROW(Direction(2.0, 0.0), PreconditionError);
    EXPECT_THROW(Direction(0.0, 0.0), PreconditionError);
    EXPECT_THROW(Direction(std::nan(""), 1.0), PreconditionError);
    const Direction d(0.6, 0.8);
    EXPECT_EQ(d.perp().vec(), (Point{-0.8, 0.6}));
}

TEST(Geom, QuarterTurnsAreExact) {
    EXPECT_EQ(Direction::from_turns(0.0).vec(), (Point{1, 0}));
    EXPECT_EQ(Direction::from_turns(0.25).vec(), (Point{0, 1}));
    EXPECT_EQ(Direction::from_turns(0.5).vec(), (Point{-1, 0}));
    EXPECT_EQ(Direction::from_turns(0.75).vec(), (Point{0, -1}));
}

TEST(Geom, LineCapsuleIntervalMissesDistantCapsule) {
    const Line l{Direction(1, 0), 0.0};
    EXPECT_FALSE(line_capsule_interval(l, {{{0, 1}, {2, 1}}, 0.5}).has_value());
}

TEST(Geom, LineCapsuleIntervalHalfChord) {
    const Line l{Direction(1, 0), 0.0};
    const Capsule c{{{0, 0.25}, {2, 0.25}}, 0.5};
    const auto iv = line_capsule_interval(l, c);
    ASSERT_TRUE(iv.has_value());
    const double half = std::sqrt(0.5 * 0.5 - 0.25 * 0.25);
    EXPECT_NEAR(iv->lo, -half, 1e-15);
    EXPECT_NEAR(iv->hi, 2.0 + half, 1e-15);

    // Cross-check by sampling the line: inside points have distance < radius.
    for (int i = -2000; i <= 6000; ++i) {
        const double t = i * 1e-3;
        const bool inside = dist_point_segment(l.at(t), c.axis) < c.radius;
        if (std::abs(t - iv->lo) > 1e-9 && std::abs(t - iv->hi) > 1e-9) {
            EXPECT_EQ(inside, iv->contains(t)) << "t=" << t;
        }
    }
}

TEST(Geom, LineCapsuleIntervalTangencyIsEmpty) {
    const Line l{Direction(1, 0), 0.0};
    EXPECT_FALSE(line_capsule_interval(l, {{{0, 0.5}, {2, 0.5}}, 0.5}).has_value());
}

TEST(Geom, InflationIsMonotone) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int hits = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const Line l{Direction::from_turns(0.5 * (u(gen) + 1.0)), u(gen)};
        const Capsule c{{{u(gen), u(gen)}, {u(gen), u(gen)}}, 0.5 * (u(gen) + 1.0)};
        const auto base = line_capsule_interval(l, c);
        const auto wide = line_capsule_interval(l, c, 0.125);
        if (!base) continue;
        ++hits;
        ASSERT_TRUE(wide.has_value());
        EXPECT_LE(wide->lo, base->lo);
        EXPECT_GE(wide->hi, base->hi);
    }
    EXPECT_GT(hits, 100);
}

TEST(Geom, IntervalAgreesWithPointDistanceOnRandomLines) {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const Line l{Direction::from_turns(0.5 * (u(gen) + 1.0)), 0.5 * u(gen)};
        const Capsule c{{{u(gen), u(gen)}, {u(gen), u(gen)}}, 0.3};
        const auto iv = line_capsule_interval(l, c);
        for (int i = 0; i < 50; ++i) {
            const double t = 3.0 * u(gen);
            const double d = dist_point_segment(l.at(t), c.axis) - c.radius;
            if (std::abs(d) < 1e-9) continue;
            EXPECT_EQ(d < 0.0, iv.has_value() && iv->contains(t)) << "trial " << trial << " t=" << t;
        }
    }
}

}  // namespace
