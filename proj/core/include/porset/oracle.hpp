#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "porset/construction.hpp"
#include "porset/directions.hpp"

namespace porset {

/// Brute-force reading of the construction by dense sampling along lines.
///
/// C_m is approximated by lattice points i * 2^-6(m+2) on each line L_m^k;
/// a sample is kept when its recursively computed distance to H_{m-1} is at
/// least 2^-6m, and H_m is the union of radius 2^-6(m+1) balls around kept
/// samples. No capsule, segment or interval of the main engine is used.
///
/// Kept/removed decisions are memoized per (level, k, i). The memo may be
/// shared by concurrent queries; every writer stores the same value.
class BruteOracle {
public:
    static constexpr int kMaxLevel = 3;

    explicit BruteOracle(DirectionSchedule schedule, bool memoize = true,
                         std::size_t work_budget = std::size_t{1} << 26);
    ~BruteOracle();
    BruteOracle(const BruteOracle&) = delete;
    BruteOracle& operator=(const BruteOracle&) = delete;

    static double sample_pitch(int m) { return std::ldexp(1.0, -6 * (m + 2)); }

    /// Membership of p in the sampled H_n, n <= 3.
    Membership membership(Point p, int n) const;

    /// Approximate signed distance to H_n, clamped above at `cap`.
    double signed_distance(Point p, int n, double cap) const;

    /// Whether lattice sample i of L_m^k survives into C_m.
    bool kept(int m, std::int64_t k, std::int64_t i) const;

    std::size_t memo_entries() const;

private:
    struct Memo;

    double signed_distance_impl(Point p, int n, double cap, std::size_t& work) const;
    bool kept_impl(int m, std::int64_t k, std::int64_t i, std::size_t& work) const;

    DirectionSchedule schedule_;
    std::vector<Direction> directions_;  // directions_[m - 1]
    bool memoize_;
    std::size_t work_budget_;
    std::unique_ptr<Memo> memo_;
};

/// Per-cell samples of one engine over the window core. Cell (i, j) is
/// centred at core.min + (i + 1/2, j + 1/2) * pitch.
struct GridField {
    Window window;
    int resolution = 0;
    double pitch = 0.0;
    std::vector<Membership> membership;
    std::vector<double> signed_distance;

    Point cell_center(int i, int j) const;
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * resolution + i; }
};

GridField engine_field(const LevelSet& ls, int resolution);
GridField oracle_field(const BruteOracle& oracle, const Window& window, int n, int resolution);

struct Disagreement {
    int i = 0;
    int j = 0;
    Point point;
    Membership engine = Membership::Out;
    Membership oracle = Membership::Out;
    double engine_sd = 0.0;
    double oracle_sd = 0.0;
};

struct FieldComparison {
    int resolution = 0;
    double pitch = 0.0;
    double band = 0.0;  ///< cells with |engine signed distance| <= band are skipped
    std::size_t compared = 0;
    std::size_t skipped = 0;
    std::vector<Disagreement> disagreements;

    bool passed() const { return disagreements.empty(); }
};

/// Grid sweep of the capsule engine against the brute-force oracle built
/// from the same schedule. Requires ls.depth() <= 3.
///
/// The skipped band is twice the oracle sampling pitch of the deepest level,
/// 2 * 2^-6(depth+2). A band tied to the grid pitch would swallow every cell
/// at depth >= 2, where no point is farther than 2^-13 from the boundary.
FieldComparison compare_fields(const LevelSet& ls, int resolution, unsigned threads = 0);

inline constexpr const char* kDisagreementCsvHeader = "i,j,x,y,engine,oracle,engine_sd,oracle_sd";
void write_disagreements_csv(std::ostream& out, const FieldComparison& cmp);

}  // namespace porset
