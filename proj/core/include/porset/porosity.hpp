#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "porset/construction.hpp"

namespace porset {

/// Which step of the boundary walk produced the point.
enum class BoundaryRoute {
    AlreadyOnBoundary,  ///< x itself lies within tau of the boundary of H_n
    OnLevelLine,        ///< nearest line point lies in C_n; step off its capsule
    NearPrevious,       ///< nearest line point is in the exclusion zone; project onto H_{n-1}
    InsidePrevious,     ///< nearest line point lies in H_{n-1}; bisect back towards x
};

const char* to_string(BoundaryRoute r);

struct BoundaryPoint {
    Point z;
    BoundaryRoute route = BoundaryRoute::AlreadyOnBoundary;
    Point line_point;     ///< nearest point of the level-n line family
    bool polished = false;  ///< the route's point needed a final projection
};

/// A point of the boundary of H_n within 2^-(6n-1) of x. Requires x not in H_n.
BoundaryPoint find_boundary_point(const LevelSet& ls, int n, Point x);

/// A centre y with |x - y| <= 2^-6(n+1) + tau whose ball of radius
/// 2^-6(n+1) - tau lies inside H_n. Requires x in the closure of H_n.
Point find_thick_center(const LevelSet& ls, int n, Point x);

struct Hole {
    Point center;
    double radius = 0.0;
    HoleCertificate certificate = HoleCertificate::None;
    Point boundary_point;
};

/// Boundary point followed by thick centre: a hole of radius 2^-6(n+1) - tau
/// within 2^-(6n-2) of x.
Hole find_hole(const LevelSet& ls, int n, Point x);

enum class HoleSource { None, Constructive, CapsuleSearch, LineSearch };

const char* to_string(HoleSource s);

/// One porosity measurement at one scale.
struct ScanRecord {
    Point point;
    double scale = 0.0;
    double best_hole_radius = 0.0;
    Point hole_center;
    double ratio = 0.0;
    HoleCertificate certificate = HoleCertificate::None;
    HoleSource source = HoleSource::None;
};

/// Largest scale r with B(x, 2r) inside the window core.
double max_scan_scale(const LevelSet& ls, Point x);

/// Isotropic lower-porosity scan at a point outside H_depth.
std::vector<ScanRecord> porosity_scan(const LevelSet& ls, Point x, std::span<const double> scales);

/// Directional scan: hole centres restricted to x + t v, |t| < r.
std::vector<ScanRecord> directional_scan(const LevelSet& ls, Point x, Direction v, std::span<const double> scales);

/// Radius 2^-(6s+5) of the closed ball around an A_s point.
inline double as_ball_radius(int s) { return std::ldexp(1.0, -(6 * s + 5)); }

/// x is outside H_depth and d(x, H_s) > 2^-(6s+5) + 2^-6(s+1), the
/// distance form of "the closed balls are disjoint".
bool is_in_A_s(const LevelSet& ls, Point x, int s);

enum class AsStatus { Found, DepthExhausted };

struct AsPoint {
    AsStatus status = AsStatus::DepthExhausted;
    Point z;
    int s = 0;
    int boundary_level = 0;  ///< level m with the boundary point on dH_m \ dH_{m-1}
    Point boundary_point;
    Point side_step;
};

/// Searches s = n, ..., depth-1 for z in A_s with |w - z| < 2^-6(n-1).
/// `target_depth` (when larger than ls.depth()) keeps z clear of capsules of
/// deeper builds that will later be checked around it.
AsPoint find_A_s_point(const LevelSet& ls, Point w, int n, int target_depth = 0);

enum class Decision { True, False, Undecided };

const char* to_string(Decision d);

/// Membership in G_{v,N} for v with angle `turns`. True needs a witness
/// N <= n <= depth-1; False is returned only for points inside H_depth.
Decision is_in_G(const LevelSet& ls, Point x, double turns, int run_length);
Decision is_in_G(const LevelSet& ls, Point x, std::uint64_t base_index, int run_length);

enum class ClaimStatus { Checked, Degenerate };

struct ClaimReport {
    ClaimStatus status = ClaimStatus::Checked;
    std::array<Point, 4> rectangle{};  ///< corners of R in the plane
    double s1 = 0.0;
    double s2 = 0.0;
    double half_height = 0.0;
    std::int64_t samples_tested = 0;
    std::int64_t columns_tested = 0;
    std::int64_t translation_violations = 0;
    std::int64_t separation_violations = 0;
    double min_separation = HUGE_VAL;  ///< +inf when no capsule reaches a free column
};

/// Checks translation invariance along v inside R and the separation of
/// H_m from R for m = n+1, ..., n+N, where v = v_{n+1} = ... = v_{n+N}.
ClaimReport claim_check(const LevelSet& ls, Point x, int n, int run_length, std::int64_t sample_count,
                        std::uint64_t seed);

}  // namespace porset
