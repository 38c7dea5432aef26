#include "porset/porosity.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "porset/errors.hpp"
#include "porset/sampling.hpp"

namespace porset {

namespace {

constexpr int kMaxBisections = 200;
// Scan centres stay strictly inside B(x, r).
constexpr double kInteriorShrink = 1.0 - 0x1p-30;

Point unit_or(Point v, Point fallback) {
    const double len = norm(v);
    return len > 0.0 ? (1.0 / len) * v : fallback;
}

std::string describe(Point p) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", p.x, p.y);
    return buf;
}

void require_level(const LevelSet& ls, int n) {
    if (n < 1 || n > ls.depth()) {
        throw PreconditionError("level " + std::to_string(n) + " outside 1.." + std::to_string(ls.depth()));
    }
}

void require_core(const LevelSet& ls, Point x) {
    if (!is_finite(x) || !ls.window().in_core(x)) throw WindowError("point " + describe(x) + " outside core window");
}

// Bisects between `inside` (sd <= 0) and `outside` (sd > tau) until the
// midpoint lies in the tau band of the boundary of H_n.
Point bisect_boundary(const LevelSet& ls, int n, Point inside, Point outside) {
    for (int i = 0; i < kMaxBisections; ++i) {
        const Point mid = 0.5 * (inside + outside);
        const double sd = ls.signed_distance_in_margin(n, mid);
        if (std::abs(sd) <= kTau) return mid;
        if (sd < 0.0) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    return 0.5 * (inside + outside);
}

// Nearest point of the closure of H_m to p, for p outside H_m.
Point project_onto(const LevelSet& ls, int m, Point p) {
    const NearestCapsule nc = ls.nearest(m, p);
    const Capsule& c = ls.capsule(nc.ref).capsule;
    const Point q = closest_point_on_segment(p, c.axis);
    return q + c.radius * unit_or(p - q, ls.level_direction(nc.ref.level).perp().vec());
}

// Nearest point on the level-n line family.
Point foot_on_family(const LevelSet& ls, int n, Point p) {
    const Point nv = ls.level_direction(n).perp().vec();
    const double spacing = level_spacing(n);
    const double o = dot(p, nv);
    const double k = std::nearbyint(o / spacing);
    return p - (o - k * spacing) * nv;
}

void require_scale_budget(const LevelSet& ls, Point x, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw BudgetError("scan scale must be positive");
    const double r0 = max_scan_scale(ls, x);
    if (r > r0) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "scale %.17g exceeds the r0 budget %.17g at this point", r, r0);
        throw BudgetError(buf);
    }
}

void require_outside(const LevelSet& ls, Point x) {
    require_core(ls, x);
    if (ls.membership(ls.depth(), x) != Membership::Out) {
        throw PreconditionError("point " + describe(x) + " is not outside H_" + std::to_string(ls.depth()));
    }
}

bool in_A_s_margin(const LevelSet& ls, Point x, int s) {
    if (!ls.in_query_region(ls.depth(), x)) return false;
    if (ls.membership_in_margin(ls.depth(), x) != Membership::Out) return false;
    return ls.signed_distance_in_margin(s, x) > as_ball_radius(s) + level_radius(s);
}

}  // namespace

const char* to_string(BoundaryRoute r) {
    switch (r) {
        case BoundaryRoute::AlreadyOnBoundary: return "on-boundary";
        case BoundaryRoute::OnLevelLine: return "on-level-line";
        case BoundaryRoute::NearPrevious: return "near-previous";
        case BoundaryRoute::InsidePrevious: return "inside-previous";
    }
    return "?";
}

const char* to_string(HoleSource s) {
    switch (s) {
        case HoleSource::None: return "none";
        case HoleSource::Constructive: return "constructive";
        case HoleSource::CapsuleSearch: return "capsule-search";
        case HoleSource::LineSearch: return "line-search";
    }
    return "?";
}

const char* to_string(Decision d) {
    switch (d) {
        case Decision::True: return "TRUE";
        case Decision::False: return "FALSE";
        case Decision::Undecided: return "UNDECIDED";
    }
    return "?";
}

BoundaryPoint find_boundary_point(const LevelSet& ls, int n, Point x) {
    require_level(ls, n);
    require_core(ls, x);
    const double reach = std::ldexp(1.0, -(6 * n - 1));
    const Box need = Box{x.x, x.x, x.y, x.y}.expanded(reach);
    const Box region = ls.window().core().expanded(ls.query_margin(n));
    if (need.xmin < region.xmin || need.xmax > region.xmax || need.ymin < region.ymin || need.ymax > region.ymax) {
        throw WindowError("padding insufficient for a level-" + std::to_string(n) + " walk from " + describe(x));
    }

    const double sd_x = ls.signed_distance_in_margin(n, x);
    if (sd_x < -kTau) throw PreconditionError("point " + describe(x) + " lies inside H_" + std::to_string(n));

    BoundaryPoint out;
    out.line_point = foot_on_family(ls, n, x);
    if (sd_x <= kTau) {
        out.z = x;
        return out;
    }

    const Point y = out.line_point;
    const double sd_prev = n == 1 ? HUGE_VAL : ls.signed_distance_in_margin(n - 1, y);
    if (sd_prev >= level_spacing(n)) {
        // y is in C_n: the capsule boundary straight towards x.
        out.route = BoundaryRoute::OnLevelLine;
        out.z = y + level_radius(n) * unit_or(x - y, ls.level_direction(n).perp().vec());
    } else if (sd_prev >= -kTau) {
        out.route = BoundaryRoute::NearPrevious;
        out.z = project_onto(ls, n - 1, y);
    } else {
        out.route = BoundaryRoute::InsidePrevious;
        out.z = bisect_boundary(ls, n, y, x);
    }

    const double sd_z = ls.signed_distance_in_margin(n, out.z);
    if (std::abs(sd_z) > kTau) {
        out.polished = true;
        out.z = sd_z > 0.0 ? project_onto(ls, n, out.z) : bisect_boundary(ls, n, out.z, x);
    }
    return out;
}

Point find_thick_center(const LevelSet& ls, int n, Point x) {
    require_level(ls, n);
    if (!ls.in_query_region(n, x)) throw WindowError("point " + describe(x) + " outside the level query region");
    const NearestCapsule nc = ls.nearest(n, x);
    if (!nc.found || nc.signed_distance > kTau) {
        throw PreconditionError("point " + describe(x) + " is not in the closure of H_" + std::to_string(n));
    }
    const Capsule& c = ls.capsule(nc.ref).capsule;
    const Point q = closest_point_on_segment(x, c.axis);
    const double d = distance(x, q);
    if (d < kTau) return x;
    // Half of tau keeps |x - y| <= r + tau after rounding the step.
    const double step = level_radius(n) + 0.5 * kTau;
    if (d <= step) return q;
    return x + (step / d) * (q - x);
}

Hole find_hole(const LevelSet& ls, int n, Point x) {
    const BoundaryPoint bp = find_boundary_point(ls, n, x);
    Hole hole;
    hole.boundary_point = bp.z;
    hole.center = find_thick_center(ls, n, bp.z);
    hole.radius = level_radius(n) - kTau;
    hole.certificate = ls.ball_inside_H(n, hole.center, hole.radius);
    return hole;
}

double max_scan_scale(const LevelSet& ls, Point x) {
    const Box core = ls.window().core();
    const double edge = std::min({x.x - core.xmin, core.xmax - x.x, x.y - core.ymin, core.ymax - x.y});
    return std::max(edge, 0.0) / 2.0;
}

std::vector<ScanRecord> porosity_scan(const LevelSet& ls, Point x, std::span<const double> scales) {
    require_outside(ls, x);
    for (double r : scales) require_scale_budget(ls, x, r);
    const int depth = ls.depth();

    std::vector<Hole> constructive;
    for (int n = 1; n <= depth; ++n) constructive.push_back(find_hole(ls, n, x));

    std::vector<ScanRecord> records;
    for (double r : scales) {
        ScanRecord rec;
        rec.point = x;
        rec.scale = r;
        rec.hole_center = x;

        for (const Hole& h : constructive) {
            if (h.certificate != HoleCertificate::None && distance(x, h.center) < r &&
                h.radius > rec.best_hole_radius) {
                rec.best_hole_radius = h.radius;
                rec.hole_center = h.center;
                rec.source = HoleSource::Constructive;
            }
        }

        // Best single-capsule hole with centre in B(x, r): the axis point
        // nearest x when it is inside the ball, else the ball point towards it.
        for (const CapsuleRef& ref : ls.capsules_near(depth, x, r)) {
            const Capsule& c = ls.capsule(ref).capsule;
            const Point q = closest_point_on_segment(x, c.axis);
            const double d = distance(x, q);
            Point center = q;
            double radius = c.radius - kTau;
            if (!(d < r)) {
                const double reach = r * kInteriorShrink;
                center = x + (reach / d) * (q - x);
                radius = c.radius - dist_point_segment(center, c.axis) - kTau;
            }
            if (radius > rec.best_hole_radius) {
                rec.best_hole_radius = radius;
                rec.hole_center = center;
                rec.source = HoleSource::CapsuleSearch;
            }
        }

        if (rec.best_hole_radius > 0.0) {
            rec.certificate = ls.ball_inside_H(depth, rec.hole_center, rec.best_hole_radius);
            if (rec.certificate == HoleCertificate::None) {
                rec.best_hole_radius = 0.0;
                rec.hole_center = x;
                rec.source = HoleSource::None;
            }
        }
        rec.ratio = rec.best_hole_radius / r;
        records.push_back(rec);
    }
    return records;
}

namespace {

// Parameter t in [-reach, reach] minimising the distance from x + t v to the
// axis, together with that distance. Exact: segment-to-segment distance.
std::pair<double, double> closest_along(Point x, Point v, double reach, const Segment& axis) {
    const Point e = axis.b - axis.a;
    const double denom = cross(v, e);
    if (denom != 0.0) {
        const Point w = axis.a - x;
        const double t = cross(w, e) / denom;
        const double s = cross(w, v) / denom;
        if (t >= -reach && t <= reach && s >= 0.0 && s <= 1.0) return {t, 0.0};
    }
    auto clamp_t = [&](double t) { return std::clamp(t, -reach, reach); };
    std::pair<double, double> best{0.0, HUGE_VAL};
    auto consider = [&](double t) {
        const double d = dist_point_segment(x + t * v, axis);
        if (d < best.second) best = {t, d};
    };
    consider(-reach);
    consider(reach);
    consider(clamp_t(dot(axis.a - x, v)));
    consider(clamp_t(dot(axis.b - x, v)));
    return best;
}

}  // namespace

std::vector<ScanRecord> directional_scan(const LevelSet& ls, Point x, Direction v, std::span<const double> scales) {
    require_outside(ls, x);
    for (double r : scales) require_scale_budget(ls, x, r);
    const int depth = ls.depth();
    const Line through{v, dot(x, v.perp().vec())};
    const double t_x = through.parameter_of(x);

    std::vector<ScanRecord> records;
    for (double r : scales) {
        ScanRecord rec;
        rec.point = x;
        rec.scale = r;
        rec.hole_center = x;
        const double reach = r * kInteriorShrink;
        for (const CapsuleRef& ref : ls.capsules_near(depth, x, r)) {
            const Capsule& c = ls.capsule(ref).capsule;
            // The trace of the capsule on the line bounds where a positive
            // radius is possible.
            const auto trace = line_capsule_interval(through, c);
            if (!trace || trace->hi - t_x <= -reach || trace->lo - t_x >= reach) continue;
            const auto [t, d] = closest_along(x, v.vec(), reach, c.axis);
            const double radius = c.radius - d - kTau;
            if (radius > rec.best_hole_radius) {
                rec.best_hole_radius = radius;
                rec.hole_center = x + t * v.vec();
                rec.source = HoleSource::LineSearch;
            }
        }
        if (rec.best_hole_radius > 0.0) {
            rec.certificate = ls.ball_inside_H(depth, rec.hole_center, rec.best_hole_radius);
            if (rec.certificate == HoleCertificate::None) {
                rec.best_hole_radius = 0.0;
                rec.hole_center = x;
                rec.source = HoleSource::None;
            }
        }
        rec.ratio = rec.best_hole_radius / r;
        records.push_back(rec);
    }
    return records;
}

bool is_in_A_s(const LevelSet& ls, Point x, int s) {
    require_level(ls, s);
    require_core(ls, x);
    if (ls.membership(ls.depth(), x) != Membership::Out) return false;
    return ls.dist_to_H(s, x) > as_ball_radius(s) + level_radius(s);
}

AsPoint find_A_s_point(const LevelSet& ls, Point w, int n, int target_depth) {
    if (n < 1) throw PreconditionError("find_A_s_point needs n >= 1");
    require_outside(ls, w);
    AsPoint out;
    if (n + 1 > ls.depth()) return out;

    const int deepest = std::max(ls.depth(), target_depth);
    const double hug = std::ldexp(1.0, -6 * (deepest + 2));
    const double limit = std::ldexp(1.0, -6 * (n - 1));

    const BoundaryPoint bp = find_boundary_point(ls, n, w);
    const Point x = bp.z;
    out.boundary_point = x;
    for (int m = 1; m <= n; ++m) {
        if (std::abs(ls.signed_distance_in_margin(m, x)) <= kTau) {
            out.boundary_level = m;
            break;
        }
    }

    // Outward normals of the capsules whose boundary passes through x, both
    // orientations, then a fixed ring of fallback directions.
    std::vector<Point> normals;
    for (const CapsuleRef& ref : ls.capsules_near(n, x, kTau)) {
        const Capsule& c = ls.capsule(ref).capsule;
        const Point q = closest_point_on_segment(x, c.axis);
        if (std::abs(distance(x, q) - c.radius) > kTau) continue;
        const Point u = unit_or(x - q, ls.level_direction(ref.level).perp().vec());
        normals.push_back(u);
        normals.push_back(-1.0 * u);
    }
    constexpr int kRing = 16;
    for (int i = 0; i < kRing; ++i) normals.push_back(Direction::from_turns(static_cast<double>(i) / kRing).vec());

    for (int s = n; s + 1 <= ls.depth(); ++s) {
        const double step = 3.0 * std::ldexp(1.0, -(6 * s + 4));
        const double clearance = std::ldexp(1.0, -(6 * s + 3));
        for (const Point& u : normals) {
            const Point y = x + step * u;
            if (!ls.in_query_region(s + 1, y)) continue;
            if (!(ls.signed_distance_in_margin(s, y) >= clearance)) continue;
            // Land just outside the level-(s+1) capsule through the line point nearest y.
            const Point q = foot_on_family(ls, s + 1, y);
            const Point dir = unit_or(y - q, ls.level_direction(s + 1).perp().vec());
            const Point z = q + (level_radius(s + 1) + hug) * dir;
            if (!ls.window().in_core(z) || !(distance(w, z) < limit)) continue;
            if (!ls.in_query_region(s + 1, z)) continue;
            if (std::abs(ls.signed_distance_in_margin(s + 1, z) - hug) > kTau) continue;
            if (!in_A_s_margin(ls, z, s) || !is_in_A_s(ls, z, s)) continue;
            out.status = AsStatus::Found;
            out.z = z;
            out.s = s;
            out.side_step = y;
            return out;
        }
    }
    return out;
}

Decision is_in_G(const LevelSet& ls, Point x, double turns, int run_length) {
    require_core(ls, x);
    if (run_length < 1) throw PreconditionError("run length must be >= 1");
    const Membership mem = ls.membership(ls.depth(), x);
    if (mem == Membership::In) return Decision::False;
    if (mem == Membership::Boundary || run_length > ls.depth() - 1) return Decision::Undecided;
    for (int n = run_length; n <= ls.depth() - 1; ++n) {
        if (ls.schedule().has_run(turns, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(run_length)) &&
            is_in_A_s(ls, x, n)) {
            return Decision::True;
        }
    }
    return Decision::Undecided;
}

Decision is_in_G(const LevelSet& ls, Point x, std::uint64_t base_index, int run_length) {
    return is_in_G(ls, x, DirectionSchedule::base_turns(base_index), run_length);
}

namespace {

// Length of [lo, hi] left uncovered by the sorted-open intervals in `cover`.
bool has_gap(std::vector<Interval> cover, double lo, double hi) {
    std::sort(cover.begin(), cover.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    double cursor = lo;
    for (const Interval& iv : cover) {
        // Points within tau of a capsule boundary count as covered.
        if (iv.lo - kTau > cursor + kTau) return true;
        cursor = std::max(cursor, iv.hi + kTau);
        if (cursor >= hi) return false;
    }
    return cursor + kTau < hi;
}

}  // namespace

ClaimReport claim_check(const LevelSet& ls, Point x, int n, int run_length, std::int64_t sample_count,
                        std::uint64_t seed) {
    if (n < 1 || run_length < 1 || n + run_length > ls.depth()) {
        throw PreconditionError("claim_check needs 1 <= n, 1 <= N and n + N <= depth");
    }
    if (sample_count < 1) throw PreconditionError("claim_check needs at least one sample");
    require_core(ls, x);
    const auto& sched = ls.schedule();
    const double turns = sched.turns_at(static_cast<std::uint64_t>(n + 1));
    if (!sched.has_run(turns, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(run_length))) {
        throw PreconditionError("schedule has no run of length " + std::to_string(run_length) + " after level " +
                                std::to_string(n));
    }

    // Frame with v as the second axis: a along e1 = -v_perp, b along e2 = v.
    const Direction v = sched.direction_at(static_cast<std::uint64_t>(n + 1));
    const Point e2 = v.vec();
    const Point e1 = -1.0 * v.perp().vec();
    auto world = [&](double a, double b) { return a * e1 + b * e2; };
    const double xa = dot(x, e1);
    const double xb = dot(x, e2);
    const double spacing = level_spacing(n + 1);

    ClaimReport rep;
    rep.half_height = spacing;
    const double j = xa / spacing;
    if (j == std::floor(j)) {
        rep.status = ClaimStatus::Degenerate;
        rep.rectangle = {x, x, x, x};
        return rep;
    }
    // Checked after degeneracy: a point on a level-(n+1) line can never be
    // in A_n, and the collapsed rectangle is the more useful report.
    if (!is_in_A_s(ls, x, n)) throw PreconditionError("point " + describe(x) + " is not in A_" + std::to_string(n));
    rep.s1 = std::floor(j) * spacing - xa;
    rep.s2 = std::ceil(j) * spacing - xa;
    const double a_lo = xa + rep.s1;
    const double a_hi = xa + rep.s2;
    const double bottom = xb - spacing;
    const double top = xb + spacing;
    rep.rectangle = {world(a_lo, bottom), world(a_hi, bottom), world(a_hi, top), world(a_lo, top)};

    SampleStream rng(seed);
    for (int m = n + 1; m <= n + run_length; ++m) {
        // Translation invariance along v inside R.
        for (std::int64_t i = 0; i < sample_count; ++i) {
            const double a = rng.uniform(a_lo, a_hi);
            const Membership m1 = ls.membership_in_margin(m, world(a, rng.uniform(bottom, top)));
            const Membership m2 = ls.membership_in_margin(m, world(a, rng.uniform(bottom, top)));
            if (m1 != m2 && m1 != Membership::Boundary && m2 != Membership::Boundary) ++rep.translation_violations;
            ++rep.samples_tested;
        }

        // Separation: capsule parts above or below R in a column that still
        // has free points inside R.
        const double bound = level_spacing(m) - level_radius(m);
        Box reach{HUGE_VAL, -HUGE_VAL, HUGE_VAL, -HUGE_VAL};
        for (const Point& c : rep.rectangle) {
            reach.xmin = std::min(reach.xmin, c.x);
            reach.xmax = std::max(reach.xmax, c.x);
            reach.ymin = std::min(reach.ymin, c.y);
            reach.ymax = std::max(reach.ymax, c.y);
        }
        const std::vector<CapsuleRef> candidates = ls.capsules_in_box(m, reach.expanded(bound));
        for (std::int64_t i = 0; i < sample_count; ++i) {
            const double a = rng.uniform(a_lo, a_hi);
            const Line column{v, -a};
            std::vector<Interval> inside_r;
            std::vector<double> outside_gaps;
            for (const CapsuleRef& ref : candidates) {
                const auto iv = line_capsule_interval(column, ls.capsule(ref).capsule);
                if (!iv) continue;
                if (iv->hi > bottom && iv->lo < top) inside_r.push_back(*iv);
                if (iv->hi > top) outside_gaps.push_back(std::max(iv->lo, top) - top);
                if (iv->lo < bottom) outside_gaps.push_back(bottom - std::min(iv->hi, bottom));
            }
            ++rep.columns_tested;
            if (outside_gaps.empty() || !has_gap(inside_r, bottom, top)) continue;
            for (double gap : outside_gaps) {
                rep.min_separation = std::min(rep.min_separation, gap);
                if (gap < bound - kTau) ++rep.separation_violations;
            }
        }
    }
    return rep;
}

}  // namespace porset
