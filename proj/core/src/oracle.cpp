#include "porset/oracle.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <thread>
#include <unordered_map>

#include "porset/errors.hpp"
#include "porset/report_io.hpp"

namespace porset {

namespace {

double spacing_of(int m) { return std::ldexp(1.0, -6 * m); }
double radius_of(int m) { return std::ldexp(1.0, -6 * (m + 1)); }

struct SampleKey {
    std::int64_t k;
    std::int64_t i;
    bool operator==(const SampleKey&) const = default;
};

struct SampleKeyHash {
    std::size_t operator()(const SampleKey& key) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(key.k) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::uint64_t>(key.i) + 0x632BE59BD9B4E019ULL + (h << 6U) + (h >> 2U);
        return static_cast<std::size_t>(h);
    }
};

Membership classify(double sd) {
    if (sd < -kTau) return Membership::In;
    if (sd > kTau) return Membership::Out;
    return Membership::Boundary;
}

}  // namespace

struct BruteOracle::Memo {
    struct Table {
        mutable std::shared_mutex mutex;
        std::unordered_map<SampleKey, bool, SampleKeyHash> values;
    };
    std::array<Table, kMaxLevel + 1> levels;
};

BruteOracle::BruteOracle(DirectionSchedule schedule, bool memoize, std::size_t work_budget)
    : schedule_(std::move(schedule)), memoize_(memoize), work_budget_(work_budget), memo_(std::make_unique<Memo>()) {
    for (int m = 1; m <= kMaxLevel; ++m) directions_.push_back(schedule_.direction_at(static_cast<std::uint64_t>(m)));
}

BruteOracle::~BruteOracle() = default;

std::size_t BruteOracle::memo_entries() const {
    std::size_t total = 0;
    for (const auto& table : memo_->levels) {
        std::shared_lock lock(table.mutex);
        total += table.values.size();
    }
    return total;
}

double BruteOracle::signed_distance_impl(Point p, int n, double cap, std::size_t& work) const {
    double best = cap;
    for (int m = 1; m <= n; ++m) {
        const Point u = directions_[static_cast<std::size_t>(m - 1)].vec();
        const Point nv = directions_[static_cast<std::size_t>(m - 1)].perp().vec();
        const double s = spacing_of(m);
        const double r = radius_of(m);
        const double pitch = sample_pitch(m);
        const double o = dot(p, nv);
        const double t = dot(p, u);
        const double search = best + r;
        const auto k0 = static_cast<std::int64_t>(std::ceil((o - search) / s));
        const auto k1 = static_cast<std::int64_t>(std::floor((o + search) / s));
        for (std::int64_t k = k0; k <= k1; ++k) {
            const double line_offset = static_cast<double>(k) * s;
            const double off = std::abs(o - line_offset);
            if (off - r >= best) continue;
            const auto i0 = static_cast<std::int64_t>(std::nearbyint(t / pitch));
            auto visit = [&](std::int64_t i) {
                const double ti = static_cast<double>(i) * pitch;
                if (std::max(std::abs(ti - t), off) - r >= best) return false;
                if (++work > work_budget_) throw BudgetError("oracle work budget exceeded");
                const Point sample = ti * u + line_offset * nv;
                const double d = distance(p, sample) - r;
                if (d < best && kept_impl(m, k, i, work)) best = d;
                return true;
            };
            for (std::int64_t i = i0; visit(i); ++i) {
            }
            for (std::int64_t i = i0 - 1; visit(i); --i) {
            }
        }
    }
    return best;
}

bool BruteOracle::kept_impl(int m, std::int64_t k, std::int64_t i, std::size_t& work) const {
    if (m <= 1) return true;
    auto& table = memo_->levels[static_cast<std::size_t>(m)];
    const SampleKey key{k, i};
    if (memoize_) {
        std::shared_lock lock(table.mutex);
        if (auto it = table.values.find(key); it != table.values.end()) return it->second;
    }
    const Direction& dir = directions_[static_cast<std::size_t>(m - 1)];
    const Point sample =
        (static_cast<double>(i) * sample_pitch(m)) * dir.vec() + (static_cast<double>(k) * spacing_of(m)) * dir.perp().vec();
    const double threshold = spacing_of(m);
    const bool result = signed_distance_impl(sample, m - 1, threshold, work) >= threshold;
    if (memoize_) {
        std::unique_lock lock(table.mutex);
        table.values[key] = result;
    }
    return result;
}

bool BruteOracle::kept(int m, std::int64_t k, std::int64_t i) const {
    if (m < 1 || m > kMaxLevel) throw PreconditionError("oracle level outside 1..3");
    std::size_t work = 0;
    return kept_impl(m, k, i, work);
}

double BruteOracle::signed_distance(Point p, int n, double cap) const {
    if (n < 0 || n > kMaxLevel) throw PreconditionError("oracle supports levels 0..3");
    if (!is_finite(p)) throw PreconditionError("oracle query must be finite");
    std::size_t work = 0;
    return signed_distance_impl(p, n, cap, work);
}

Membership BruteOracle::membership(Point p, int n) const {
    return classify(signed_distance(p, n, radius_of(std::max(n, 1))));
}

Point GridField::cell_center(int i, int j) const {
    const Box core = window.core();
    return {core.xmin + (i + 0.5) * pitch, core.ymin + (j + 0.5) * pitch};
}

namespace {

GridField blank_field(const Window& window, int resolution) {
    if (resolution < 1) throw PreconditionError("grid resolution must be >= 1");
    GridField f;
    f.window = window;
    f.resolution = resolution;
    f.pitch = 2.0 * window.half_width / resolution;
    const auto cells = static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
    f.membership.assign(cells, Membership::Out);
    f.signed_distance.assign(cells, 0.0);
    return f;
}

template <typename Fn>
void parallel_rows(int rows, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(rows));
    if (threads <= 1) {
        for (int j = 0; j < rows; ++j) fn(j);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (int j = static_cast<int>(t); j < rows; j += static_cast<int>(threads)) fn(j);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

GridField engine_field(const LevelSet& ls, int resolution) {
    GridField f = blank_field(ls.window(), resolution);
    parallel_rows(resolution, 0, [&](int j) {
        for (int i = 0; i < resolution; ++i) {
            const double sd = ls.signed_distance(ls.depth(), f.cell_center(i, j));
            f.signed_distance[f.index(i, j)] = sd;
            f.membership[f.index(i, j)] = classify(sd);
        }
    });
    return f;
}

GridField oracle_field(const BruteOracle& oracle, const Window& window, int n, int resolution) {
    GridField f = blank_field(window, resolution);
    parallel_rows(resolution, 0, [&](int j) {
        for (int i = 0; i < resolution; ++i) {
            const double sd = oracle.signed_distance(f.cell_center(i, j), n, radius_of(std::max(n, 1)));
            f.signed_distance[f.index(i, j)] = sd;
            f.membership[f.index(i, j)] = classify(sd);
        }
    });
    return f;
}

FieldComparison compare_fields(const LevelSet& ls, int resolution, unsigned threads) {
    if (ls.depth() > BruteOracle::kMaxLevel) throw PreconditionError("oracle comparison supports depth <= 3");
    const int n = ls.depth();
    const BruteOracle oracle(ls.schedule());
    GridField grid = blank_field(ls.window(), resolution);

    FieldComparison cmp;
    cmp.resolution = resolution;
    cmp.pitch = grid.pitch;
    cmp.band = 2.0 * BruteOracle::sample_pitch(std::max(n, 1));

    std::vector<std::vector<Disagreement>> per_row(static_cast<std::size_t>(resolution));
    std::vector<std::size_t> compared(static_cast<std::size_t>(resolution), 0);
    parallel_rows(resolution, threads, [&](int j) {
        for (int i = 0; i < resolution; ++i) {
            const Point p = grid.cell_center(i, j);
            const double esd = ls.signed_distance(n, p);
            if (std::abs(esd) <= cmp.band) continue;
            ++compared[static_cast<std::size_t>(j)];
            const double osd = oracle.signed_distance(p, n, radius_of(std::max(n, 1)));
            const Membership em = classify(esd);
            const Membership om = classify(osd);
            if (em != om) per_row[static_cast<std::size_t>(j)].push_back({i, j, p, em, om, esd, osd});
        }
    });
    for (int j = 0; j < resolution; ++j) {
        cmp.compared += compared[static_cast<std::size_t>(j)];
        for (const auto& d : per_row[static_cast<std::size_t>(j)]) cmp.disagreements.push_back(d);
    }
    cmp.skipped = static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution) - cmp.compared;
    return cmp;
}

void write_disagreements_csv(std::ostream& out, const FieldComparison& cmp) {
    out << kDisagreementCsvHeader << '\n';
    for (const Disagreement& d : cmp.disagreements) {
        out << d.i << ',' << d.j << ',' << csv_real(d.point.x) << ',' << csv_real(d.point.y) << ','
            << to_string(d.engine) << ',' << to_string(d.oracle) << ',' << csv_real(d.engine_sd) << ','
            << csv_real(d.oracle_sd) << '\n';
    }
}

}  // namespace porset
