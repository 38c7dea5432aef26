#include <cmath>
#include <cstdint>
#include <vector>

#include "porset/directions.hpp"
#include "porset/errors.hpp"

#include "gtest/gtest.h"

using namespace porset;

namespace {

// Independent replay of the schedule: bit reversal for the angle, explicit
// walk over the diagonals for the block order.
double reference_vdc(std::uint64_t j) {
    double x = 0.0;
    double scale = 0.5;
    while (j != 0) {
        if ((j & 1U) != 0) x += scale;
        j >>= 1U;
        scale *= 0.5;
    }
    return x;
}

std::uint64_t reference_base_index(std::uint64_t n) {
    std::uint64_t seen = 0;
    for (std::uint64_t d = 1;; ++d) {
        for (std::uint64_t j = 0; j < d; ++j) {
            const std::uint64_t len = d - j;
            if (n <= seen + len) return j;
            seen += len;
        }
    }
}

TEST(Directions, FirstEntries) {
    const DirectionSchedule s;
    EXPECT_EQ(s.direction_at(1).vec(), (Point{1, 0}));
    EXPECT_EQ(s.direction_at(2).vec(), (Point{1, 0}));
    EXPECT_EQ(s.direction_at(3).vec(), (Point{1, 0}));
    EXPECT_EQ(s.direction_at(4).vec(), (Point{-1, 0}));
    EXPECT_EQ(s.base_index_at(4), 1U);
    EXPECT_THROW(s.turns_at(0), PreconditionError);
}

TEST(Directions, VanDerCorput) {
    EXPECT_EQ(van_der_corput(0), 0.0);
    EXPECT_EQ(van_der_corput(1), 0.5);
    EXPECT_EQ(van_der_corput(2), 0.25);
    EXPECT_EQ(van_der_corput(3), 0.75);
    EXPECT_EQ(van_der_corput(6), 0.375);
    for (std::uint64_t j = 0; j < 5000; ++j) EXPECT_EQ(van_der_corput(j), reference_vdc(j));
}

TEST(Directions, MatchesReEnumeration) {
    const DirectionSchedule s;
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        ASSERT_EQ(s.base_index_at(n), reference_base_index(n)) << "n=" << n;
    }
    const std::uint64_t far = 1000000;
    EXPECT_EQ(s.base_index_at(far), reference_base_index(far));
    EXPECT_EQ(s.turns_at(far), reference_vdc(reference_base_index(far)));
    EXPECT_EQ(s.direction_at(far), Direction::from_turns(reference_vdc(reference_base_index(far))));
}

TEST(Directions, RunLocationClosedForms) {
    EXPECT_EQ(DirectionSchedule::run_location(0, 1), 0U);
    EXPECT_EQ(DirectionSchedule::run_location(0, 2), 1U);
    EXPECT_EQ(DirectionSchedule::run_location(1, 1), 3U);
}

TEST(Directions, RunLocationAgreesWithPrefixScan) {
    const DirectionSchedule s;
    const double target = DirectionSchedule::base_turns(2);
    std::uint64_t scanned = 0;
    for (std::uint64_t n = 0; n < 200; ++n) {
        bool run = true;
        for (std::uint64_t i = 1; i <= 3; ++i) run = run && s.turns_at(n + i) == target;
        if (run) {
            scanned = n;
            break;
        }
    }
    EXPECT_EQ(DirectionSchedule::run_location(2, 3), scanned);
    EXPECT_EQ(scanned, 29U);
    EXPECT_TRUE(s.has_run(target, scanned, 3));
    EXPECT_EQ(s.find_run(target, 3, 0, 1000), scanned);
}

TEST(Directions, EveryBlockIsARun) {
    const DirectionSchedule s;
    for (std::uint64_t j = 0; j < 12; ++j) {
        for (std::uint64_t len = 1; len < 12; ++len) {
            const std::uint64_t n = DirectionSchedule::run_location(j, len);
            EXPECT_TRUE(s.has_run(DirectionSchedule::base_turns(j), n, len)) << j << "," << len;
        }
    }
}

TEST(Directions, PrefixOverridesHead) {
    const DirectionSchedule s({0.0, 0.25, 0.25});
    EXPECT_FALSE(s.checked());
    EXPECT_EQ(s.direction_at(2).vec(), (Point{0, 1}));
    EXPECT_FALSE(s.base_index_at(2).has_value());
    EXPECT_TRUE(s.has_run(0.25, 1, 2));
    EXPECT_EQ(s.turns_at(4), DirectionSchedule().turns_at(4));
    EXPECT_EQ(DirectionSchedule({1.25}).turns_at(1), 0.25);
    EXPECT_THROW(DirectionSchedule({std::nan("")}), PreconditionError);
}

}  // namespace
