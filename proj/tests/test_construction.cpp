#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "porset/construction.hpp"
#include "porset/errors.hpp"
#include "porset/sampling.hpp"

#include "gtest/gtest.h"

using namespace porset;

namespace {

const DirectionSchedule kHorizontal;  // v1 = v2 = v3 = (1, 0)
const DirectionSchedule kGeneric({0.1, 0.37, 0.61, 0.83});

Window window(double half_width, double pad = kDefaultPad) { return Window{{0, 0}, half_width, pad}; }

const LevelSet& generic_depth3() {
    static const LevelSet ls = build_up_to(3, window(0x1p-8), kGeneric);
    return ls;
}

TEST(LineFamily, LevelOneCount) {
    const auto lines = line_family(1, Window{{0, 0}, 1.0 / 16, 1.0 / 32}, kHorizontal);
    ASSERT_EQ(lines.size(), 13U);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        EXPECT_EQ(lines[i].k, static_cast<std::int64_t>(i) - 6);
        EXPECT_EQ(lines[i].line.offset, lines[i].k / 64.0);
        EXPECT_EQ(lines[i].line.at(0.3).y, lines[i].k / 64.0);
    }
    EXPECT_EQ(lines[6].line.at(0.0), (Point{0, 0}));
}

TEST(LineFamily, LevelTwoCount) {
    const auto lines = line_family(2, Window{{0, 0}, 1.0 / 16, 1.0 / 32}, kHorizontal);
    EXPECT_EQ(lines.size(), 769U);
}

TEST(LineFamily, BudgetCap) {
    EXPECT_THROW(line_family(3, Window{{0, 0}, 1.0, 0.0}, kHorizontal, 1000), BudgetError);
}

TEST(Build, EmptyLevelSet) {
    const LevelSet ls = build_up_to(0, window(1.0 / 32), kHorizontal);
    EXPECT_EQ(ls.depth(), 0);
    EXPECT_EQ(ls.membership(0, {0, 0}), Membership::Out);
    EXPECT_EQ(ls.capsule_count(), 0U);
}

TEST(Build, LevelOneKeepsWholeLines) {
    const LevelSet ls = build_up_to(1, window(1.0 / 32), kHorizontal);
    const Box box = ls.level_box(1);
    const auto lines = line_family(1, box, kHorizontal);
    ASSERT_EQ(ls.level(1).size(), lines.size());
    for (const LevelCapsule& c : ls.level(1)) {
        EXPECT_EQ(c.capsule.radius, 0x1p-12);
        EXPECT_EQ(c.span.lo, box.xmin);
        EXPECT_EQ(c.span.hi, box.xmax);
    }
}

TEST(Build, DepthCap) {
    const LevelSet ls = build_up_to(1, window(1.0 / 32), kHorizontal, BuildLimits{1});
    EXPECT_THROW(build_level(ls, 2), DepthCapError);
    EXPECT_THROW(build_up_to(5, window(1.0 / 32), kHorizontal), DepthCapError);
    EXPECT_THROW(build_level(ls, 3), PreconditionError);
}

TEST(Build, SegmentCap) {
    BuildLimits limits;
    limits.segment_cap = 100;
    EXPECT_THROW(build_up_to(2, window(1.0 / 32), kGeneric, limits), BudgetError);
}

TEST(Build, PerpendicularGaps) {
    const DirectionSchedule cross({0.0, 0.25});
    const LevelSet ls = build_up_to(2, window(1.0 / 32), cross);
    const Box box = ls.level_box(2);
    const double half_gap = 0x1p-12 + 0x1p-12;
    std::size_t interior_ends = 0;
    for (const LevelCapsule& c : ls.level(2)) {
        EXPECT_EQ(c.capsule.axis.a.x, c.capsule.axis.b.x);
        for (double end : {c.span.lo, c.span.hi}) {
            if (end == box.ymin || end == box.ymax) continue;
            ++interior_ends;
            const double line = std::nearbyint(end * 64.0) / 64.0;
            EXPECT_EQ(std::abs(end - line), half_gap) << end;
        }
    }
    EXPECT_GT(interior_ends, 100U);
}

TEST(Queries, LevelOneClosedForms) {
    const LevelSet ls = build_up_to(1, window(1.0 / 32), kHorizontal);
    EXPECT_EQ(ls.dist_to_H(1, {0, 1.0 / 128}), 31.0 / 4096);
    EXPECT_EQ(ls.dist_to_H(1, {0.01, 0}), 0.0);
    EXPECT_EQ(ls.membership(1, {0, 0x1p-13}), Membership::In);
    EXPECT_EQ(ls.membership(1, {0, 1.0 / 128}), Membership::Out);
    EXPECT_EQ(ls.membership(1, {0, 0x1p-12}), Membership::Boundary);
    EXPECT_THROW(ls.membership(1, {1, 0}), WindowError);
    EXPECT_THROW(ls.membership(2, {0, 0}), PreconditionError);
}

TEST(Queries, BallInsideH) {
    const LevelSet ls = build_up_to(1, window(1.0 / 32), kHorizontal);
    EXPECT_EQ(ls.ball_inside_H(1, {0, 0}, 0x1p-12 - kTau), HoleCertificate::Capsule);
    EXPECT_EQ(ls.ball_inside_H(1, {0, 0}, 0x1p-12), HoleCertificate::None);
    EXPECT_EQ(ls.ball_inside_H(1, {0, 1.0 / 128}, 1e-9), HoleCertificate::None);
    EXPECT_EQ(ls.ball_inside_H(1, {0, 0x1p-13}, 0x1p-13), HoleCertificate::None);
}

TEST(Invariants, RadiiAreExact) {
    const LevelSet& ls = generic_depth3();
    for (int m = 1; m <= 3; ++m) {
        ASSERT_FALSE(ls.level(m).empty());
        for (const LevelCapsule& c : ls.level(m)) ASSERT_EQ(c.capsule.radius, std::ldexp(1.0, -6 * (m + 1)));
    }
}

TEST(Invariants, AxesLieOnFamilyLines) {
    const LevelSet& ls = generic_depth3();
    for (int m = 1; m <= 3; ++m) {
        const Point nv = kGeneric.direction_at(static_cast<std::uint64_t>(m)).perp().vec();
        const double s = level_spacing(m);
        for (const LevelCapsule& c : ls.level(m)) {
            for (Point e : {c.capsule.axis.a, c.capsule.axis.b}) {
                const double off = dot(e, nv);
                ASSERT_NEAR(off, static_cast<double>(c.k) * s, 1e-12);
            }
        }
    }
}

TEST(Invariants, ExclusionSeparation) {
    const LevelSet& ls = generic_depth3();
    for (int m = 2; m <= 3; ++m) {
        const auto caps = ls.level(m);
        const std::size_t stride = std::max<std::size_t>(1, caps.size() / 300);
        for (std::size_t i = 0; i < caps.size(); i += stride) {
            const Segment& axis = caps[i].capsule.axis;
            for (int j = 0; j < 100; ++j) {
                const Point p = axis.a + (j / 99.0) * (axis.b - axis.a);
                if (!ls.in_query_region(m - 1, p)) continue;
                ASSERT_GE(ls.signed_distance_in_margin(m - 1, p), level_spacing(m) - kTau);
            }
        }
    }
}

TEST(Invariants, Monotonicity) {
    const LevelSet& ls = generic_depth3();
    SampleStream rng(11);
    for (int i = 0; i < 2000; ++i) {
        const Point p = rng.in_box(ls.window().core());
        EXPECT_LE(ls.dist_to_H(3, p), ls.dist_to_H(2, p));
        EXPECT_LE(ls.dist_to_H(2, p), ls.dist_to_H(1, p));
    }
}

TEST(Invariants, IndexTransparency) {
    const LevelSet& ls = generic_depth3();
    SampleStream rng(12);
    for (int i = 0; i < 10000; ++i) {
        const Point p = rng.in_box(ls.window().core());
        const int n = 1 + i % 3;
        const NearestCapsule a = ls.nearest(n, p);
        const NearestCapsule b = ls.nearest_exhaustive(n, p);
        ASSERT_EQ(a.signed_distance, b.signed_distance) << p.x << "," << p.y;
        ASSERT_EQ(a.ref.level, b.ref.level);
        ASSERT_EQ(a.ref.index, b.ref.index);
    }
}

TEST(Invariants, Determinism) {
    const LevelSet a = build_up_to(2, window(1.0 / 32), kGeneric);
    const LevelSet b = build_up_to(2, window(1.0 / 32), kGeneric);
    for (int m = 1; m <= 2; ++m) {
        ASSERT_EQ(a.level(m).size(), b.level(m).size());
        for (std::size_t i = 0; i < a.level(m).size(); ++i) {
            const LevelCapsule& x = a.level(m)[i];
            const LevelCapsule& y = b.level(m)[i];
            ASSERT_EQ(x.k, y.k);
            ASSERT_EQ(x.span, y.span);
            ASSERT_EQ(x.capsule.axis.a, y.capsule.axis.a);
            ASSERT_EQ(x.capsule.axis.b, y.capsule.axis.b);
        }
    }
}

TEST(Invariants, QuarterTurnInvariance) {
    const LevelSet a = build_up_to(2, window(1.0 / 32), DirectionSchedule({0.1, 0.37}));
    const LevelSet b = build_up_to(2, window(1.0 / 32), DirectionSchedule({0.35, 0.62}));
    SampleStream rng(13);
    for (int i = 0; i < 2000; ++i) {
        const Point p = rng.in_box(a.window().core());
        const Point q{-p.y, p.x};
        EXPECT_NEAR(a.signed_distance(2, p), b.signed_distance(2, q), 1e-15);
    }
}

TEST(Invariants, ConcurrentQueriesMatchSequential) {
    const LevelSet& ls = generic_depth3();
    SampleStream rng(14);
    std::vector<Point> pts;
    for (int i = 0; i < 4000; ++i) pts.push_back(rng.in_box(ls.window().core()));
    std::vector<double> seq(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) seq[i] = ls.signed_distance(3, pts[i]);
    std::vector<double> par(pts.size());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < 4; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < pts.size(); i += 4) par[i] = ls.signed_distance(3, pts[i]);
        });
    }
    for (auto& th : pool) th.join();
    EXPECT_EQ(seq, par);
}

}  // namespace
