#include "porset/construction.hpp"

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>

#include "porset/errors.hpp"

namespace porset {

namespace {

// Slack added to pruning bounds so the indexed nearest search never drops a
// capsule the exhaustive scan would have picked.
constexpr double kPruneSlack = 1e-13;
// Residual segments shorter than this after subtraction are dropped.
constexpr double kMinSegmentLength = 1e-15;
// Deepest level the representation supports before radii approach the
// resolution of doubles near unit-scale coordinates.
constexpr int kHardDepthLimit = 6;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool ref_less(const CapsuleRef& a, const CapsuleRef& b) {
    return a.level != b.level ? a.level < b.level : a.index < b.index;
}

void offer(NearestCapsule& best, double sd, CapsuleRef ref) {
    if (!best.found || sd < best.signed_distance || (sd == best.signed_distance && ref_less(ref, best.ref))) {
        best.signed_distance = sd;
        best.ref = ref;
        best.found = true;
    }
}

// Closed parameter range of `line` inside `box`.
std::optional<Interval> clip_to_box(const Line& line, const Box& box) {
    const Point origin = line.at(0.0);
    const Point u = line.direction.vec();
    double lo = -HUGE_VAL;
    double hi = HUGE_VAL;
    auto axis = [&](double start, double step, double bmin, double bmax) {
        if (step == 0.0) {
            if (start < bmin || start > bmax) {
                lo = HUGE_VAL;
                hi = -HUGE_VAL;
            }
            return;
        }
        double a = (bmin - start) / step;
        double b = (bmax - start) / step;
        if (a > b) std::swap(a, b);
        lo = std::max(lo, a);
        hi = std::min(hi, b);
    };
    axis(origin.x, u.x, box.xmin, box.xmax);
    axis(origin.y, u.y, box.ymin, box.ymax);
    if (!(lo <= hi)) return std::nullopt;
    return Interval{lo, hi};
}

std::pair<double, double> project_box(const Box& box, Point axis) {
    const Point corners[4] = {{box.xmin, box.ymin}, {box.xmin, box.ymax}, {box.xmax, box.ymin}, {box.xmax, box.ymax}};
    double lo = HUGE_VAL;
    double hi = -HUGE_VAL;
    for (Point c : corners) {
        const double v = dot(c, axis);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

}  // namespace

const char* to_string(Membership m) {
    switch (m) {
        case Membership::In: return "IN";
        case Membership::Out: return "OUT";
        case Membership::Boundary: return "BOUNDARY";
    }
    return "?";
}

const char* to_string(HoleCertificate c) {
    switch (c) {
        case HoleCertificate::None: return "none";
        case HoleCertificate::Capsule: return "capsule";
        case HoleCertificate::SampledCover: return "sampled";
    }
    return "?";
}

void Window::validate() const {
    if (!is_finite(center)) throw PreconditionError("window center must be finite");
    if (!(half_width > 0.0) || !std::isfinite(half_width)) throw PreconditionError("window half-width must be > 0");
    if (!(pad >= 0.0) || !std::isfinite(pad)) throw PreconditionError("window pad must be finite and >= 0");
}

std::vector<FamilyLine> line_family(int n, const Box& box, const DirectionSchedule& schedule, std::size_t line_cap) {
    if (n < 1) throw PreconditionError("line family level must be >= 1");
    const Direction dir = schedule.direction_at(static_cast<std::uint64_t>(n));
    const double spacing = level_spacing(n);
    const auto [omin, omax] = project_box(box, dir.perp().vec());
    const double kmin = std::ceil(omin / spacing);
    const double kmax = std::floor(omax / spacing);
    if (kmax < kmin) return {};
    const double count = kmax - kmin + 1.0;
    if (count > static_cast<double>(line_cap)) {
        throw BudgetError("level " + std::to_string(n) + " needs " + fmt_double(count) + " lines, cap is " +
                          std::to_string(line_cap));
    }
    std::vector<FamilyLine> lines;
    lines.reserve(static_cast<std::size_t>(count));
    for (auto k = static_cast<std::int64_t>(kmin); k <= static_cast<std::int64_t>(kmax); ++k) {
        lines.push_back({k, Line{dir, static_cast<double>(k) * spacing}});
    }
    return lines;
}

std::vector<FamilyLine> line_family(int n, const Window& window, const DirectionSchedule& schedule,
                                    std::size_t line_cap) {
    return line_family(n, window.padded(), schedule, line_cap);
}

LevelSet::LevelSet(const Window& window, const DirectionSchedule& schedule, const BuildLimits& limits)
    : window_(window), schedule_(schedule), limits_(limits) {
    if (limits.max_depth < 0 || limits.max_depth > kHardDepthLimit) {
        throw PreconditionError("max depth must lie in [0, " + std::to_string(kHardDepthLimit) + "]");
    }
    window.validate();
    const int levels = std::max(limits.max_depth, 1);
    extents_.assign(static_cast<std::size_t>(levels), 0.0);
    // extent(m) - radius(m) must cover the level-m query margin plus the
    // largest possible distance to H_m, and the exclusion reach of level m+1.
    double deeper = 0.0;
    for (int m = levels; m >= 1; --m) {
        const double s = level_spacing(m);
        double need = query_margin(m) + 2.0 * s;
        if (m < levels) need = std::max(need, deeper + level_spacing(m + 1));
        extents_[static_cast<std::size_t>(m - 1)] = need + level_radius(m) + s;
        deeper = extents_[static_cast<std::size_t>(m - 1)];
    }
}

LevelSet LevelSet::empty(const Window& window, const DirectionSchedule& schedule, const BuildLimits& limits) {
    return LevelSet(window, schedule, limits);
}

LevelSet LevelSet::from_parts(const Window& window, const DirectionSchedule& schedule, const BuildLimits& limits,
                              std::vector<std::vector<LevelCapsule>> levels) {
    LevelSet ls(window, schedule, limits);
    if (static_cast<int>(levels.size()) > std::max(limits.max_depth, 0)) {
        throw DepthCapError("depth cap exceeded: " + std::to_string(levels.size()) + " levels > " +
                            std::to_string(limits.max_depth));
    }
    for (auto& caps : levels) {
        std::stable_sort(caps.begin(), caps.end(), [](const LevelCapsule& a, const LevelCapsule& b) {
            return a.k != b.k ? a.k < b.k : a.span.lo < b.span.lo;
        });
        ls.push_level(std::move(caps));
    }
    return ls;
}

void LevelSet::push_level(std::vector<LevelCapsule> capsules) {
    Level level;
    level.n = depth() + 1;
    level.dir = schedule_.direction_at(static_cast<std::uint64_t>(level.n));
    for (std::size_t i = 0; i < capsules.size(); ++i) {
        if (level.buckets.empty() || level.buckets.back().k != capsules[i].k) {
            level.buckets.push_back({capsules[i].k, i, i});
        }
        level.buckets.back().end = i + 1;
    }
    level.capsules = std::move(capsules);
    levels_.push_back(std::move(level));
}

std::span<const LevelCapsule> LevelSet::level(int m) const {
    if (m < 1 || m > depth()) throw PreconditionError("level " + std::to_string(m) + " not built");
    return levels_[static_cast<std::size_t>(m - 1)].capsules;
}

std::vector<Segment> LevelSet::segments(int m) const {
    std::vector<Segment> out;
    for (const LevelCapsule& c : level(m)) out.push_back(c.capsule.axis);
    return out;
}

std::size_t LevelSet::capsule_count() const {
    std::size_t total = 0;
    for (const Level& l : levels_) total += l.capsules.size();
    return total;
}

Direction LevelSet::level_direction(int m) const { return schedule_.direction_at(static_cast<std::uint64_t>(m)); }

Box LevelSet::level_box(int m) const {
    if (m < 1 || m > static_cast<int>(extents_.size())) throw DepthCapError("level beyond depth cap");
    return window_.core().expanded(extents_[static_cast<std::size_t>(m - 1)]);
}

double LevelSet::query_margin(int m) const { return window_.pad + 4.0 * level_spacing(std::max(m, 1)); }

bool LevelSet::in_query_region(int n, Point p) const {
    if (!is_finite(p)) return false;
    if (n == 0) return true;
    return window_.core().expanded(query_margin(n)).contains(p);
}

void LevelSet::check_level(int n) const {
    if (n < 0 || n > depth()) {
        throw PreconditionError("level " + std::to_string(n) + " outside built depth " + std::to_string(depth()));
    }
}

void LevelSet::check_margin(int n, Point p) const {
    if (!in_query_region(n, p)) {
        throw WindowError("point (" + fmt_double(p.x) + ", " + fmt_double(p.y) + ") outside the exact region of level " +
                          std::to_string(n));
    }
}

void LevelSet::nearest_in_level(const Level& level, Point p, NearestCapsule& best) const {
    if (level.capsules.empty()) return;
    const double s = level_spacing(level.n);
    const double radius = level_radius(level.n);
    const double o = dot(p, level.dir.perp().vec());
    const double t = dot(p, level.dir.vec());
    const auto& buckets = level.buckets;
    const auto split = std::partition_point(buckets.begin(), buckets.end(), [&](const LineBucket& b) {
        return static_cast<double>(b.k) * s < o;
    });

    auto visit = [&](const LineBucket& b) {
        const double line_lb = std::abs(o - static_cast<double>(b.k) * s) - radius;
        if (best.found && line_lb > best.signed_distance + kPruneSlack) return false;
        const auto first = level.capsules.begin() + static_cast<std::ptrdiff_t>(b.begin);
        const auto last = level.capsules.begin() + static_cast<std::ptrdiff_t>(b.end);
        const auto mid = std::partition_point(first, last, [&](const LevelCapsule& c) { return c.span.hi < t; });
        auto eval = [&](std::vector<LevelCapsule>::const_iterator it) {
            const std::size_t idx = static_cast<std::size_t>(it - level.capsules.begin());
            offer(best, dist_point_capsule(p, it->capsule), {level.n, idx});
        };
        for (auto it = mid; it != last; ++it) {
            const double gap = it->span.lo - t;
            if (best.found && gap - radius > best.signed_distance + kPruneSlack) break;
            eval(it);
        }
        for (auto it = mid; it != first;) {
            --it;
            const double gap = t - it->span.hi;
            if (best.found && gap - radius > best.signed_distance + kPruneSlack) break;
            eval(it);
        }
        return true;
    };

    for (auto it = split; it != buckets.end(); ++it) {
        if (!visit(*it)) break;
    }
    for (auto it = split; it != buckets.begin();) {
        --it;
        if (!visit(*it)) break;
    }
}

NearestCapsule LevelSet::nearest(int n, Point p) const {
    check_level(n);
    check_margin(n, p);
    NearestCapsule best;
    for (int m = 1; m <= n; ++m) nearest_in_level(levels_[static_cast<std::size_t>(m - 1)], p, best);
    return best;
}

NearestCapsule LevelSet::nearest_exhaustive(int n, Point p) const {
    check_level(n);
    NearestCapsule best;
    for (int m = 1; m <= n; ++m) {
        const auto& caps = levels_[static_cast<std::size_t>(m - 1)].capsules;
        for (std::size_t i = 0; i < caps.size(); ++i) offer(best, dist_point_capsule(p, caps[i].capsule), {m, i});
    }
    return best;
}

double LevelSet::signed_distance_in_margin(int n, Point p) const { return nearest(n, p).signed_distance; }

namespace {
Membership classify(double sd) {
    if (sd < -kTau) return Membership::In;
    if (sd > kTau) return Membership::Out;
    return Membership::Boundary;
}
}  // namespace

Membership LevelSet::membership_in_margin(int n, Point p) const { return classify(signed_distance_in_margin(n, p)); }

double LevelSet::signed_distance(int n, Point p) const {
    check_level(n);
    if (!is_finite(p) || !window_.in_core(p)) {
        throw WindowError("query (" + fmt_double(p.x) + ", " + fmt_double(p.y) + ") outside core window");
    }
    return signed_distance_in_margin(n, p);
}

double LevelSet::dist_to_H(int n, Point p) const { return std::max(signed_distance(n, p), 0.0); }

Membership LevelSet::membership(int n, Point p) const { return classify(signed_distance(n, p)); }

void LevelSet::collect_in_level(const Level& level, double omin, double omax, double tmin, double tmax,
                                std::vector<CapsuleRef>& out) const {
    const double s = level_spacing(level.n);
    const auto kfirst = static_cast<std::int64_t>(std::floor(omin / s));
    const auto klast = static_cast<std::int64_t>(std::ceil(omax / s));
    auto it = std::lower_bound(level.buckets.begin(), level.buckets.end(), kfirst,
                               [](const LineBucket& b, std::int64_t k) { return b.k < k; });
    for (; it != level.buckets.end() && it->k <= klast; ++it) {
        const auto first = level.capsules.begin() + static_cast<std::ptrdiff_t>(it->begin);
        const auto last = level.capsules.begin() + static_cast<std::ptrdiff_t>(it->end);
        auto c = std::partition_point(first, last, [&](const LevelCapsule& cap) { return cap.span.hi < tmin; });
        for (; c != last && c->span.lo <= tmax; ++c) {
            out.push_back({level.n, static_cast<std::size_t>(c - level.capsules.begin())});
        }
    }
}

std::vector<CapsuleRef> LevelSet::capsules_near(int n, Point p, double reach) const {
    check_level(n);
    std::vector<CapsuleRef> out;
    for (int m = 1; m <= n; ++m) {
        const Level& level = levels_[static_cast<std::size_t>(m - 1)];
        const double r = reach + level_radius(m);
        const double o = dot(p, level.dir.perp().vec());
        const double t = dot(p, level.dir.vec());
        std::vector<CapsuleRef> candidates;
        collect_in_level(level, o - r - kPruneSlack, o + r + kPruneSlack, t - r - kPruneSlack, t + r + kPruneSlack,
                         candidates);
        for (const CapsuleRef& ref : candidates) {
            if (dist_point_segment(p, capsule(ref).capsule.axis) <= r) out.push_back(ref);
        }
    }
    return out;
}

std::vector<CapsuleRef> LevelSet::capsules_in_box(int n, const Box& box) const {
    check_level(n);
    std::vector<CapsuleRef> out;
    for (int m = 1; m <= n; ++m) {
        const Level& level = levels_[static_cast<std::size_t>(m - 1)];
        const double r = level_radius(m) + kPruneSlack;
        const auto [omin, omax] = project_box(box, level.dir.perp().vec());
        const auto [tmin, tmax] = project_box(box, level.dir.vec());
        collect_in_level(level, omin - r, omax + r, tmin - r, tmax + r, out);
    }
    return out;
}

HoleCertificate LevelSet::ball_inside_H(int n, Point center, double radius) const {
    check_level(n);
    check_margin(n, center);
    if (!(radius > 0.0)) throw PreconditionError("ball radius must be > 0");
    for (const CapsuleRef& ref : capsules_near(n, center, 0.0)) {
        const Capsule& c = capsule(ref).capsule;
        // Open semantics: a ball grazing the capsule boundary is not inside.
        if (dist_point_segment(center, c.axis) < c.radius - radius) return HoleCertificate::Capsule;
    }
    if (!(signed_distance_in_margin(n, center) < -kTau)) return HoleCertificate::None;
    constexpr int kSamples = 256;
    for (int i = 0; i < kSamples; ++i) {
        const Point q = center + radius * Direction::from_turns(static_cast<double>(i) / kSamples).vec();
        if (!in_query_region(n, q) || !(signed_distance_in_margin(n, q) < -kTau)) return HoleCertificate::None;
    }
    return HoleCertificate::SampledCover;
}

LevelSet build_level(const LevelSet& prev, int n) {
    if (n != prev.depth() + 1) {
        throw PreconditionError("build_level expects level " + std::to_string(prev.depth() + 1) + ", got " +
                                std::to_string(n));
    }
    if (n > prev.limits_.max_depth) {
        throw DepthCapError("depth cap exceeded: level " + std::to_string(n) + " > " +
                            std::to_string(prev.limits_.max_depth));
    }
    prev.window_.validate();

    const Box box = prev.level_box(n);
    const std::vector<FamilyLine> family = line_family(n, box, prev.schedule_, prev.limits_.line_cap);
    const double exclusion = level_spacing(n);
    const double spacing = level_spacing(n);
    const double radius = level_radius(n);

    std::vector<std::vector<Interval>> removed(family.size());
    if (!family.empty()) {
        const std::int64_t kmin = family.front().k;
        const std::int64_t kmax = family.back().k;
        const Point nv = family.front().line.direction.perp().vec();
        for (int m = 1; m < n; ++m) {
            const double reach = level_radius(m) + exclusion;
            const Box near = box.expanded(reach);
            for (const LevelCapsule& lc : prev.level(m)) {
                const Segment& axis = lc.capsule.axis;
                if (std::max(axis.a.x, axis.b.x) < near.xmin || std::min(axis.a.x, axis.b.x) > near.xmax ||
                    std::max(axis.a.y, axis.b.y) < near.ymin || std::min(axis.a.y, axis.b.y) > near.ymax) {
                    continue;
                }
                const double oa = dot(axis.a, nv);
                const double ob = dot(axis.b, nv);
                const auto k0 = std::max(kmin, static_cast<std::int64_t>(std::floor((std::min(oa, ob) - reach) / spacing)));
                const auto k1 = std::min(kmax, static_cast<std::int64_t>(std::ceil((std::max(oa, ob) + reach) / spacing)));
                for (std::int64_t k = k0; k <= k1; ++k) {
                    const std::size_t idx = static_cast<std::size_t>(k - kmin);
                    if (auto iv = line_capsule_interval(family[idx].line, lc.capsule, exclusion)) {
                        removed[idx].push_back(*iv);
                    }
                }
            }
        }
    }

    std::vector<LevelCapsule> capsules;
    auto emit = [&](const FamilyLine& fl, double lo, double hi) {
        if (!(hi - lo >= kMinSegmentLength)) return;
        if (capsules.size() >= prev.limits_.segment_cap) {
            throw BudgetError("level " + std::to_string(n) + " exceeds the segment cap of " +
                              std::to_string(prev.limits_.segment_cap));
        }
        capsules.push_back({Capsule{Segment{fl.line.at(lo), fl.line.at(hi)}, radius}, fl.k, Interval{lo, hi}});
    };
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto range = clip_to_box(family[i].line, box);
        if (!range) continue;
        auto& cuts = removed[i];
        std::sort(cuts.begin(), cuts.end(), [](const Interval& a, const Interval& b) {
            return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
        });
        double cursor = range->lo;
        for (const Interval& cut : cuts) {
            if (cut.hi <= cursor) continue;
            if (cut.lo >= range->hi) break;
            if (cut.lo > cursor) emit(family[i], cursor, cut.lo);
            cursor = std::max(cursor, cut.hi);
            if (cursor >= range->hi) break;
        }
        if (cursor < range->hi) emit(family[i], cursor, range->hi);
    }

    LevelSet next = prev;
    next.push_level(std::move(capsules));
    return next;
}

LevelSet build_up_to(int n_max, const Window& window, const DirectionSchedule& schedule, const BuildLimits& limits) {
    if (n_max < 0) throw PreconditionError("depth must be >= 0");
    if (n_max > limits.max_depth) {
        throw DepthCapError("depth cap exceeded: " + std::to_string(n_max) + " > " + std::to_string(limits.max_depth));
    }
    window.validate();
    LevelSet ls = LevelSet::empty(window, schedule, limits);
    for (int n = 1; n <= n_max; ++n) ls = build_level(ls, n);
    return ls;
}

}  // namespace porset
