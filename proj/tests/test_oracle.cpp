#include <cmath>
#include <sstream>
#include <vector>

#include "porset/construction.hpp"
#include "porset/errors.hpp"
#include "porset/oracle.hpp"
#include "porset/sampling.hpp"

#include "gtest/gtest.h"

using namespace porset;

namespace {

const DirectionSchedule kHorizontal;
const DirectionSchedule kGeneric({0.1, 0.37, 0.61});

TEST(Oracle, LevelOneClosedForms) {
    const BruteOracle oracle(kHorizontal);
    EXPECT_EQ(oracle.membership({0, 0x1p-13}, 1), Membership::In);
    EXPECT_EQ(oracle.membership({0, 1.0 / 128}, 1), Membership::Out);
    EXPECT_EQ(oracle.membership({0.3, 0}, 1), Membership::In);
    EXPECT_EQ(oracle.membership({0.3, 0}, 0), Membership::Out);
    EXPECT_THROW(oracle.membership({0, 0}, 4), PreconditionError);
}

TEST(Oracle, WorkBudget) {
    const BruteOracle oracle(kGeneric, true, 10);
    EXPECT_THROW(oracle.signed_distance({0.001, 0.002}, 2, 1.0), BudgetError);
}

TEST(Oracle, DistancesTrackTheEngine) {
    const LevelSet ls = build_up_to(2, Window{{0, 0}, 1.0 / 32, kDefaultPad}, kGeneric);
    const BruteOracle oracle(kGeneric);
    SampleStream rng(31);
    // Lattice sampling overestimates distances by at most a few sampling pitches.
    const double tol = 2.0 * BruteOracle::sample_pitch(1);
    const double cap = 0x1p-12;
    for (int i = 0; i < 500; ++i) {
        const Point p = rng.in_box(ls.window().core());
        EXPECT_NEAR(oracle.signed_distance(p, 2, cap), std::min(ls.signed_distance(2, p), cap), tol);
    }
}

TEST(Oracle, MemoDoesNotChangeAnswers) {
    const BruteOracle memo(kGeneric, true);
    const BruteOracle plain(kGeneric, false);
    SampleStream rng(32);
    const Box box{-1.0 / 32, 1.0 / 32, -1.0 / 32, 1.0 / 32};
    for (int i = 0; i < 1000; ++i) {
        const Point p = rng.in_box(box);
        const int n = 1 + i % 2;
        ASSERT_EQ(memo.signed_distance(p, n, 0x1p-12), plain.signed_distance(p, n, 0x1p-12));
    }
    EXPECT_GT(memo.memo_entries(), 0U);
    EXPECT_EQ(plain.memo_entries(), 0U);
}

TEST(Compare, LevelOneAgreesAtAnyResolution) {
    const LevelSet ls = build_up_to(1, Window{{0, 0}, 1.0 / 32, kDefaultPad}, kGeneric);
    for (int res : {1, 7, 64}) {
        const FieldComparison cmp = compare_fields(ls, res);
        EXPECT_TRUE(cmp.passed()) << res;
        EXPECT_EQ(cmp.compared + cmp.skipped, static_cast<std::size_t>(res * res));
    }
}

TEST(Compare, DepthTwoAgrees) {
    const LevelSet ls = build_up_to(2, Window{{0, 0}, 1.0 / 32, kDefaultPad}, kGeneric);
    const FieldComparison cmp = compare_fields(ls, 96);
    EXPECT_TRUE(cmp.passed());
    EXPECT_GT(cmp.compared, 8000U);
}

TEST(Compare, InsideCellsAreCompared) {
    const LevelSet ls = build_up_to(2, Window{{0, 0}, 1.0 / 32, kDefaultPad}, kGeneric);
    const BruteOracle oracle(kGeneric);
    const GridField e = engine_field(ls, 200);
    const GridField o = oracle_field(oracle, ls.window(), 2, 200);
    const double band = 2.0 * BruteOracle::sample_pitch(2);
    std::size_t inside = 0;
    for (std::size_t i = 0; i < e.membership.size(); ++i) {
        if (std::abs(e.signed_distance[i]) <= band) continue;
        EXPECT_EQ(e.membership[i], o.membership[i]) << i;
        if (e.membership[i] == Membership::In) ++inside;
    }
    EXPECT_GT(inside, 100U);
}

TEST(Compare, DepthThreeAgreesOnASmallWindow) {
    const LevelSet ls = build_up_to(3, Window{{0.0021, -0.0013}, 0x1p-11, 0.0}, kGeneric);
    const FieldComparison cmp = compare_fields(ls, 48);
    EXPECT_TRUE(cmp.passed());
    EXPECT_GT(cmp.compared, 1000U);
}

TEST(Compare, CorruptedRadiusIsCaught) {
    const Window w{{0, 0}, 1.0 / 32, kDefaultPad};
    const LevelSet good = build_up_to(2, w, kGeneric);
    std::vector<std::vector<LevelCapsule>> levels;
    for (int m = 1; m <= 2; ++m) levels.emplace_back(good.level(m).begin(), good.level(m).end());
    for (LevelCapsule& c : levels[0]) c.capsule.radius *= 4.0;
    const LevelSet bad = LevelSet::from_parts(w, kGeneric, good.limits(), std::move(levels));
    const FieldComparison cmp = compare_fields(bad, 64);
    EXPECT_FALSE(cmp.passed());
    std::ostringstream out;
    write_disagreements_csv(out, cmp);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), kDisagreementCsvHeader);
}

TEST(Compare, ThreadCountDoesNotMatter) {
    const LevelSet ls = build_up_to(2, Window{{0, 0}, 1.0 / 32, kDefaultPad}, kGeneric);
    const FieldComparison one = compare_fields(ls, 32, 1);
    const FieldComparison four = compare_fields(ls, 32, 4);
    EXPECT_EQ(one.compared, four.compared);
    EXPECT_EQ(one.disagreements.size(), four.disagreements.size());
}

TEST(Compare, DepthLimit) {
    const LevelSet ls = build_up_to(1, Window{{0, 0}, 1.0 / 32, kDefaultPad}, kGeneric);
    EXPECT_THROW(compare_fields(ls, 0), PreconditionError);
}

TEST(Fields, CellCentres) {
    const LevelSet ls = build_up_to(1, Window{{0, 0}, 1.0 / 32, kDefaultPad}, kHorizontal);
    const GridField f = engine_field(ls, 4);
    EXPECT_EQ(f.pitch, 1.0 / 64);
    EXPECT_EQ(f.cell_center(0, 0), (Point{-1.0 / 32 + 1.0 / 128, -1.0 / 32 + 1.0 / 128}));
    const BruteOracle oracle(kHorizontal);
    const GridField g = oracle_field(oracle, ls.window(), 1, 4);
    EXPECT_EQ(f.membership, g.membership);
}

}  // namespace
