#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "porset/geom.hpp"

namespace porset {

/// The direction sequence v_1, v_2, ... used by the construction.
///
/// Base directions are d_j = angle 2*pi*vdc2(j), where vdc2 is the base-2
/// van der Corput sequence, so {d_j} is dense in the circle. The sequence is
/// the concatenation of blocks (j, L), each contributing L copies of d_j,
/// taken in diagonal order (0,1),(0,2),(1,1),(0,3),(1,2),(2,1),... so every
/// base direction recurs in arbitrarily long runs.
///
/// An optional explicit prefix (in turns) overrides v_1..v_K. Such schedules
/// are "unchecked": density and run guarantees only hold for the tail.
///
/// Directions are compared through their angle in turns, which is an exact
/// double for both the van der Corput values and prefix entries.
class DirectionSchedule {
public:
    static constexpr const char* kAngleRule = "vdc2";
    static constexpr const char* kBlockOrder = "cantor-diagonal";

    DirectionSchedule() = default;
    explicit DirectionSchedule(std::vector<double> prefix_turns);

    /// Angle of v_n in turns, in [0, 1). Requires n >= 1.
    double turns_at(std::uint64_t n) const;
    Direction direction_at(std::uint64_t n) const;
    /// Index j with v_n = d_j, or nullopt when v_n comes from the prefix.
    std::optional<std::uint64_t> base_index_at(std::uint64_t n) const;

    /// Offset n of block (j, L): v_{n+1} = ... = v_{n+L} = d_j.
    /// Only meaningful for checked schedules.
    static std::uint64_t run_location(std::uint64_t j, std::uint64_t length);

    /// True when v_{n+1} = ... = v_{n+length} all have angle `turns`.
    bool has_run(double turns, std::uint64_t n, std::uint64_t length) const;

    /// Smallest n >= from (and n < limit) with has_run(turns, n, length).
    std::optional<std::uint64_t> find_run(double turns, std::uint64_t length, std::uint64_t from,
                                          std::uint64_t limit) const;

    static double base_turns(std::uint64_t j);
    static Direction base_direction(std::uint64_t j) { return Direction::from_turns(base_turns(j)); }

    bool checked() const { return prefix_.empty(); }
    const std::vector<double>& prefix() const { return prefix_; }

    friend bool operator==(const DirectionSchedule&, const DirectionSchedule&) = default;

private:
    std::vector<double> prefix_;
};

/// Base-2 van der Corput radical inverse of j.
double van_der_corput(std::uint64_t j);

}  // namespace porset
