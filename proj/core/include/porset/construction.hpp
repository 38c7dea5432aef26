#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "porset/directions.hpp"
#include "porset/geom.hpp"

namespace porset {

inline constexpr int kDefaultMaxDepth = 4;
inline constexpr double kDefaultPad = 0x1p-11;

/// Spacing 2^-6n between consecutive level-n lines; also the level-n exclusion radius.
inline double level_spacing(int n) { return std::ldexp(1.0, -6 * n); }
/// Radius 2^-6(n+1) of every level-n capsule.
inline double level_radius(int n) { return std::ldexp(1.0, -6 * (n + 1)); }

/// Closed axis-aligned box.
struct Box {
    double xmin = 0.0;
    double xmax = 0.0;
    double ymin = 0.0;
    double ymax = 0.0;

    bool contains(Point p) const { return xmin <= p.x && p.x <= xmax && ymin <= p.y && p.y <= ymax; }
    Box expanded(double margin) const { return {xmin - margin, xmax + margin, ymin - margin, ymax + margin}; }
};

/// Square study region. Queries are confined to the core; `pad` widens the
/// margin around the core where every level must still be exact. Each level
/// adds its own clip margin on top, so any pad >= 0 is usable.
struct Window {
    Point center;
    double half_width = 0.0;
    double pad = 0.0;

    Box core() const {
        return {center.x - half_width, center.x + half_width, center.y - half_width, center.y + half_width};
    }
    Box padded() const { return core().expanded(pad); }
    bool in_core(Point p) const { return core().contains(p); }

    /// Throws PreconditionError unless the window is usable.
    void validate() const;

    friend bool operator==(const Window&, const Window&) = default;
};

struct BuildLimits {
    int max_depth = kDefaultMaxDepth;
    std::size_t line_cap = std::size_t{1} << 20;
    std::size_t segment_cap = std::size_t{1} << 22;

    friend bool operator==(const BuildLimits&, const BuildLimits&) = default;
};

/// L_n^k: direction v_n, offset k * 2^-6n along v_n's perpendicular.
struct FamilyLine {
    std::int64_t k = 0;
    Line line;
};

/// Level-n lines meeting `box`, in increasing k.
std::vector<FamilyLine> line_family(int n, const Box& box, const DirectionSchedule& schedule,
                                    std::size_t line_cap = BuildLimits{}.line_cap);
std::vector<FamilyLine> line_family(int n, const Window& window, const DirectionSchedule& schedule,
                                    std::size_t line_cap = BuildLimits{}.line_cap);

/// One component of C_n inside the level box, inflated to its capsule.
struct LevelCapsule {
    Capsule capsule;
    std::int64_t k = 0;  ///< line index
    Interval span;       ///< axis parameter range [lo, hi] along the line
};

enum class Membership { In, Out, Boundary };

const char* to_string(Membership m);

/// How a hole (a ball inside the removed set) was certified.
enum class HoleCertificate {
    None,
    Capsule,       ///< contained in a single capsule: exact
    SampledCover,  ///< 256 boundary samples inside the union: heuristic
};

const char* to_string(HoleCertificate c);

/// Reference to a capsule by level (1-based) and position in that level.
struct CapsuleRef {
    int level = 0;
    std::size_t index = 0;
};

/// Result of a nearest-capsule query.
struct NearestCapsule {
    double signed_distance = HUGE_VAL;  ///< +inf when no capsule exists
    CapsuleRef ref;
    bool found = false;
};

/// The stack H_1 c ... c H_depth restricted to a window, stored as capsules.
///
/// Level m lines are clipped to core + extent(m), where the extents grow
/// towards coarse levels so that H_m is exact on core + query_margin(m) +
/// 2^(1-6m). Coarse levels are cheap, so the cost of a deep build is
/// dominated by the core size, not by the margins.
///
/// A LevelSet is immutable once built; all queries are const and safe to run
/// concurrently.
class LevelSet {
public:
    /// H_0 = empty set.
    static LevelSet empty(const Window& window, const DirectionSchedule& schedule, const BuildLimits& limits = {});

    /// Reassemble a level set from stored capsules (used by deserialization).
    /// Capsules are re-sorted into the canonical (k, lo) order.
    static LevelSet from_parts(const Window& window, const DirectionSchedule& schedule, const BuildLimits& limits,
                               std::vector<std::vector<LevelCapsule>> levels);

    int depth() const { return static_cast<int>(levels_.size()); }
    const Window& window() const { return window_; }
    const DirectionSchedule& schedule() const { return schedule_; }
    const BuildLimits& limits() const { return limits_; }

    /// Capsules of level m (1 <= m <= depth), sorted by (k, lo).
    std::span<const LevelCapsule> level(int m) const;
    const LevelCapsule& capsule(CapsuleRef ref) const { return level(ref.level)[ref.index]; }
    std::vector<Segment> segments(int m) const;
    std::size_t capsule_count() const;

    Direction level_direction(int m) const;
    /// Clip box of level m lines.
    Box level_box(int m) const;
    /// Margin beyond the core in which level-m queries stay exact.
    double query_margin(int m) const;
    bool in_query_region(int n, Point p) const;

    // Queries over H_n, n <= depth. These require p in the window core.
    double signed_distance(int n, Point p) const;
    double dist_to_H(int n, Point p) const;
    Membership membership(int n, Point p) const;

    // Same queries, valid anywhere in core + query_margin(n); used by the
    // constructive walks which step slightly outside the core.
    double signed_distance_in_margin(int n, Point p) const;
    Membership membership_in_margin(int n, Point p) const;
    NearestCapsule nearest(int n, Point p) const;

    /// Exhaustive scan over every capsule; no index, no region check.
    NearestCapsule nearest_exhaustive(int n, Point p) const;

    /// Capsules of levels <= n whose axis comes within `reach` + radius of p,
    /// in deterministic (level, k, lo) order.
    std::vector<CapsuleRef> capsules_near(int n, Point p, double reach) const;
    /// Capsules of levels <= n whose inflated axis may meet `box`.
    std::vector<CapsuleRef> capsules_in_box(int n, const Box& box) const;

    /// Whether the closed ball B(center, radius) lies in H_n.
    HoleCertificate ball_inside_H(int n, Point center, double radius) const;

private:
    struct LineBucket {
        std::int64_t k = 0;
        std::size_t begin = 0;
        std::size_t end = 0;
    };
    struct Level {
        int n = 0;
        Direction dir;
        std::vector<LevelCapsule> capsules;
        std::vector<LineBucket> buckets;
    };

    LevelSet(const Window& window, const DirectionSchedule& schedule, const BuildLimits& limits);
    void push_level(std::vector<LevelCapsule> capsules);
    void check_level(int n) const;
    void check_margin(int n, Point p) const;
    void nearest_in_level(const Level& level, Point p, NearestCapsule& best) const;
    void collect_in_level(const Level& level, double omin, double omax, double tmin, double tmax,
                          std::vector<CapsuleRef>& out) const;

    friend LevelSet build_level(const LevelSet& prev, int n);

    Window window_;
    DirectionSchedule schedule_;
    BuildLimits limits_;
    std::vector<double> extents_;  // extents_[m - 1], m = 1..max_depth
    std::vector<Level> levels_;
};

/// Adds level n = prev.depth() + 1.
LevelSet build_level(const LevelSet& prev, int n);

/// Iterates build_level from H_0 up to depth n_max.
LevelSet build_up_to(int n_max, const Window& window, const DirectionSchedule& schedule,
                     const BuildLimits& limits = {});

}  // namespace porset
