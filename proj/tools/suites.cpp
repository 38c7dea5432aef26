#include <cmath>
#include <functional>
#include <ostream>

#include "cli.hpp"
#include "porset/errors.hpp"
#include "porset/oracle.hpp"
#include "porset/porosity.hpp"
#include "porset/report_io.hpp"
#include "porset/sampling.hpp"

namespace porset::cli {

namespace {

/// Per-suite row writer that keeps the pass/fail tally.
class Verdicts {
public:
    Verdicts(std::string suite, std::ostream& csv) : suite_(std::move(suite)), csv_(csv) {}

    void row(const std::string& name, int level, Point p, double value, double bound, const std::string& detail,
             bool pass) {
        csv_ << suite_ << ',' << name << ',' << level << ',' << csv_real(p.x) << ',' << csv_real(p.y) << ','
             << csv_real(value) << ',' << csv_real(bound) << ',' << detail << ',' << (pass ? 1 : 0) << '\n';
        ++result_.cases;
        if (!pass) ++result_.failures;
    }

    /// Runs one case, turning any library error into a failed row.
    void guarded(const std::string& name, int level, Point p, const std::function<void()>& body) {
        try {
            body();
        } catch (const Error& e) {
            row(name, level, p, 0.0, 0.0, std::string("error: ") + sanitize(e.what()), false);
        }
    }

    SuiteResult result() const { return result_; }

private:
    static std::string sanitize(std::string s) {
        for (char& c : s) {
            if (c == ',' || c == '\n') c = ';';
        }
        return s;
    }

    std::string suite_;
    std::ostream& csv_;
    SuiteResult result_;
};

Box shrunk(const Box& b, double by) { return {b.xmin + by, b.xmax - by, b.ymin + by, b.ymax - by}; }

/// Seeded point of the core outside H_n. Gives up after a bounded number of draws.
std::optional<Point> out_point(const LevelSet& ls, int n, SampleStream& rng, const Box& box) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const Point p = rng.in_box(box);
        if (ls.membership(n, p) == Membership::Out) return p;
    }
    return std::nullopt;
}

std::string case_name(const char* prefix, std::int64_t i) { return std::string(prefix) + std::to_string(i); }

std::uint64_t level_seed(std::uint64_t seed, int n) { return seed * 1000003ULL + static_cast<std::uint64_t>(n); }

SuiteResult suite_lemma42(const LevelSet& ls, const RunConfig& cfg, std::ostream& csv) {
    Verdicts v("lemma42", csv);
    for (int n = 1; n <= ls.depth(); ++n) {
        SampleStream rng(level_seed(cfg.seed, n));
        const double bound = std::ldexp(1.0, -(6 * n - 1));
        for (std::int64_t i = 0; i < cfg.samples; ++i) {
            const auto x = out_point(ls, n, rng, ls.window().core());
            if (!x) {
                v.row(case_name("sample", i), n, {}, 0.0, 0.0, "no point outside H_n found", false);
                break;
            }
            v.guarded(case_name("sample", i), n, *x, [&] {
                const BoundaryPoint bp = find_boundary_point(ls, n, *x);
                const double dist = distance(*x, bp.z);
                const double sd = ls.signed_distance_in_margin(n, bp.z);
                const bool pass = dist < bound && std::abs(sd) <= kTau;
                v.row(case_name("sample", i), n, *x, dist, bound, to_string(bp.route), pass);
            });
        }
    }
    return v.result();
}

SuiteResult suite_lemma43(const LevelSet& ls, const RunConfig& cfg, std::ostream& csv) {
    Verdicts v("lemma43", csv);
    for (int n = 1; n <= ls.depth(); ++n) {
        const double r = level_radius(n);
        std::int64_t wrong = 0;
        for (const LevelCapsule& c : ls.level(n)) wrong += c.capsule.radius != r ? 1 : 0;
        v.row("radii", n, {}, static_cast<double>(wrong), 0.0,
              std::to_string(ls.level(n).size()) + " capsules", wrong == 0);

        // Closure points: inside H_n as drawn, otherwise pulled onto the boundary.
        SampleStream rng(level_seed(cfg.seed, n));
        for (std::int64_t i = 0; i < cfg.samples; ++i) {
            const Point p = rng.in_box(ls.window().core());
            v.guarded(case_name("closure", i), n, p, [&] {
                const Point x = ls.membership(n, p) == Membership::Out ? find_boundary_point(ls, n, p).z : p;
                const Point y = find_thick_center(ls, n, x);
                const double dist = distance(x, y);
                const bool inside = ls.ball_inside_H(n, y, r - kTau) != HoleCertificate::None;
                v.row(case_name("closure", i), n, x, dist, r + kTau, inside ? "ball inside" : "ball not inside",
                      inside && dist <= r + kTau);
            });
        }
    }
    return v.result();
}

SuiteResult suite_thm44(const LevelSet& ls, const RunConfig& cfg, std::ostream& csv) {
    Verdicts v("thm44", csv);
    SampleStream rng(cfg.seed);
    const int depth = ls.depth();
    for (std::int64_t i = 0; i < cfg.samples; ++i) {
        const auto x = out_point(ls, depth, rng, ls.window().core());
        if (!x) {
            v.row(case_name("sample", i), depth, {}, 0.0, 0.0, "no point outside H_depth found", false);
            break;
        }
        for (int n = 1; n <= depth; ++n) {
            v.guarded(case_name("sample", i), n, *x, [&] {
                const Hole h = find_hole(ls, n, *x);
                const double dist = distance(*x, h.center);
                const double bound = std::ldexp(1.0, -(6 * n - 2));
                const bool pass = h.radius >= level_radius(n) - kTau && dist < bound &&
                                  h.certificate != HoleCertificate::None &&
                                  ls.ball_inside_H(n, h.center, h.radius) != HoleCertificate::None;
                v.row(case_name("sample", i), n, *x, dist, bound, to_string(h.certificate), pass);
            });
        }
    }
    return v.result();
}

SuiteResult suite_separation(const LevelSet& ls, const RunConfig& cfg, std::ostream& csv) {
    Verdicts v("separation", csv);
    for (int m = 1; m <= ls.depth(); ++m) {
        const auto caps = ls.level(m);
        const Point nv = ls.level_direction(m).perp().vec();
        const double s = level_spacing(m);
        double worst_axis = 0.0;
        for (const LevelCapsule& c : caps) {
            for (Point e : {c.capsule.axis.a, c.capsule.axis.b}) {
                worst_axis = std::max(worst_axis, std::abs(dot(e, nv) - static_cast<double>(c.k) * s));
            }
        }
        const double axis_tol = 1e-12;
        v.row("axis", m, {}, worst_axis, axis_tol, std::to_string(caps.size()) + " capsules", worst_axis <= axis_tol);
        if (m < 2 || caps.empty()) continue;

        // Axis points of level m keep distance 2^-6m from H_{m-1}.
        SampleStream rng(level_seed(cfg.seed, m));
        for (std::int64_t i = 0; i < cfg.samples; ++i) {
            const LevelCapsule& c = caps[static_cast<std::size_t>(rng.unit() * static_cast<double>(caps.size()))];
            const Segment& axis = c.capsule.axis;
            const Point p = axis.a + rng.unit() * (axis.b - axis.a);
            if (!ls.in_query_region(m - 1, p)) continue;
            v.guarded(case_name("exclusion", i), m, p, [&] {
                const double d = ls.signed_distance_in_margin(m - 1, p);
                v.row(case_name("exclusion", i), m, p, d, s - kTau, "line " + std::to_string(c.k), d >= s - kTau);
            });
        }
    }
    return v.result();
}

SuiteResult suite_claim(const LevelSet& ls, const RunConfig& cfg, std::ostream& csv) {
    Verdicts v("claim", csv);
    const int n = 1;
    if (ls.depth() < n + 1) {
        v.row("setup", n, {}, 0.0, 0.0, "depth below 2: no run to check", true);
        return v.result();
    }
    const auto& sched = ls.schedule();
    const double turns = sched.turns_at(n + 1);
    int run = 1;
    while (n + run + 1 <= ls.depth() && sched.has_run(turns, n, static_cast<std::uint64_t>(run + 1))) ++run;

    const Box box = shrunk(ls.window().core(), ls.window().half_width / 2);
    const std::int64_t points = std::min<std::int64_t>(cfg.samples, 20);
    SampleStream rng(cfg.seed);
    for (std::int64_t i = 0; i < points; ++i) {
        const auto w = out_point(ls, ls.depth(), rng, box);
        if (!w) {
            v.row(case_name("point", i), n, {}, 0.0, 0.0, "no point outside H_depth found", false);
            break;
        }
        v.guarded(case_name("point", i), n, *w, [&] {
            const AsPoint as = find_A_s_point(ls, *w, n);
            if (as.status != AsStatus::Found || as.s != n) {
                v.row(case_name("point", i), n, *w, 0.0, 0.0, "no A_1 point near w; skipped", true);
                return;
            }
            const ClaimReport rep = claim_check(ls, as.z, n, run, cfg.samples, cfg.seed + static_cast<std::uint64_t>(i));
            const std::int64_t bad = rep.translation_violations + rep.separation_violations;
            const std::string detail = std::string(rep.status == ClaimStatus::Degenerate ? "DEGENERATE" : "CHECKED") +
                                       " N=" + std::to_string(run) + " samples=" +
                                       std::to_string(rep.samples_tested);
            v.row(case_name("point", i), n, as.z, static_cast<double>(bad), 0.0, detail, bad == 0);
        });
    }
    return v.result();
}

SuiteResult suite_oracle(const LevelSet& ls, const RunConfig& cfg, std::ostream& csv) {
    if (ls.depth() > BruteOracle::kMaxLevel) throw PreconditionError("oracle suite supports depth <= 3");
    Verdicts v("oracle", csv);
    const FieldComparison cmp = compare_fields(ls, cfg.resolution);
    std::int64_t i = 0;
    for (const Disagreement& d : cmp.disagreements) {
        v.row(case_name("cell", i++), ls.depth(), d.point, d.engine_sd, d.oracle_sd,
              std::string(to_string(d.engine)) + " vs " + to_string(d.oracle), false);
    }
    v.row("summary", ls.depth(), {}, static_cast<double>(cmp.disagreements.size()), 0.0,
          std::to_string(cmp.compared) + " compared " + std::to_string(cmp.skipped) + " in band", cmp.passed());
    return v.result();
}

using SuiteFn = SuiteResult (*)(const LevelSet&, const RunConfig&, std::ostream&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
    static const std::vector<std::pair<std::string, SuiteFn>> table = {
        {"lemma42", suite_lemma42}, {"lemma43", suite_lemma43}, {"thm44", suite_thm44},
        {"separation", suite_separation}, {"claim", suite_claim}, {"oracle", suite_oracle},
    };
    return table;
}

}  // namespace

bool known_suite(const std::string& name) {
    if (name == "all") return true;
    for (const auto& entry : suites()) {
        if (entry.first == name) return true;
    }
    return false;
}

SuiteResult run_suite(const std::string& suite, const LevelSet& ls, const RunConfig& cfg, std::ostream& csv) {
    SuiteResult total;
    for (const auto& [name, fn] : suites()) {
        if (suite != "all" && suite != name) continue;
        if (suite == "all" && name == "oracle" && ls.depth() > BruteOracle::kMaxLevel) continue;
        const SuiteResult r = fn(ls, cfg, csv);
        total.cases += r.cases;
        total.failures += r.failures;
    }
    return total;
}

}  // namespace porset::cli
