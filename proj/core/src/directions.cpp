#include "porset/directions.hpp"

#include <cmath>

#include "porset/errors.hpp"

namespace porset {

namespace {

// Offset of the first block on diagonal d (blocks with j + L = d).
std::uint64_t diagonal_start(std::uint64_t d) { return (d - 1) * d * (d + 1) / 6; }

std::uint64_t base_index_of_position(std::uint64_t pos) {
    std::uint64_t d = 1;
    while (diagonal_start(d + 1) <= pos) ++d;
    std::uint64_t offset = pos - diagonal_start(d);
    for (std::uint64_t j = 0;; ++j) {
        const std::uint64_t len = d - j;
        if (offset < len) return j;
        offset -= len;
    }
}

}  // namespace

double van_der_corput(std::uint64_t j) {
    double result = 0.0;
    double scale = 0.5;
    while (j != 0) {
        if (j & 1U) result += scale;
        scale *= 0.5;
        j >>= 1U;
    }
    return result;
}

DirectionSchedule::DirectionSchedule(std::vector<double> prefix_turns) : prefix_(std::move(prefix_turns)) {
    for (double& t : prefix_) {
        if (!std::isfinite(t)) throw PreconditionError("schedule prefix angle must be finite");
        t -= std::floor(t);
        if (t >= 1.0) t = 0.0;
    }
}

double DirectionSchedule::base_turns(std::uint64_t j) { return van_der_corput(j); }

std::optional<std::uint64_t> DirectionSchedule::base_index_at(std::uint64_t n) const {
    if (n == 0) throw PreconditionError("direction index starts at 1");
    if (n <= prefix_.size()) return std::nullopt;
    return base_index_of_position(n - 1);
}

double DirectionSchedule::turns_at(std::uint64_t n) const {
    if (n == 0) throw PreconditionError("direction index starts at 1");
    if (n <= prefix_.size()) return prefix_[n - 1];
    return base_turns(base_index_of_position(n - 1));
}

Direction DirectionSchedule::direction_at(std::uint64_t n) const { return Direction::from_turns(turns_at(n)); }

std::uint64_t DirectionSchedule::run_location(std::uint64_t j, std::uint64_t length) {
    if (length == 0) throw PreconditionError("run length must be at least 1");
    // Block (j, L) sits on diagonal j + L, after blocks (0, d), ..., (j-1, d-j+1).
    const std::uint64_t d = j + length;
    return diagonal_start(d) + j * d - (j == 0 ? 0 : j * (j - 1) / 2);
}

bool DirectionSchedule::has_run(double turns, std::uint64_t n, std::uint64_t length) const {
    for (std::uint64_t i = 1; i <= length; ++i) {
        if (turns_at(n + i) != turns) return false;
    }
    return true;
}

std::optional<std::uint64_t> DirectionSchedule::find_run(double turns, std::uint64_t length, std::uint64_t from,
                                                         std::uint64_t limit) const {
    for (std::uint64_t n = from; n < limit; ++n) {
        if (has_run(turns, n, length)) return n;
    }
    return std::nullopt;
}

}  // namespace porset
