#pragma once

#include "nld/rational.hpp"
#include "nld/scenario.hpp"

#include <span>
#include <vector>

namespace nld {

/// A point in one of the behavior spaces. Entries are indexed by tuple_index (correlator
/// spaces) or by x_index * 2^n + outcome_bits (probability space; bit k set means party k
/// returned -1).
class Behavior {
public:
    Behavior(Scenario scenario, Space space, std::vector<Rational> entries);

    static Behavior zero(const Scenario& s, Space space);

    const Scenario& scenario() const noexcept { return scenario_; }
    Space space() const noexcept { return space_; }
    std::span<const Rational> entries() const noexcept { return entries_; }
    std::size_t dimension() const noexcept { return entries_.size(); }

    /// Correlator of a setting tuple (entries may be 0 = trivial). In probability space a
    /// tuple with trivial entries is resolved with `convention`.
    Rational correlator(const SettingTuple& t,
                        MarginalConvention convention = MarginalConvention::UniformAverage) const;

    const Rational& probability(std::uint32_t outcome_bits, const SettingTuple& x) const;

    /// alpha * a + (1 - alpha) * b
    static Behavior mix(const Rational& alpha, const Behavior& a, const Behavior& b);

    friend bool operator==(const Behavior&, const Behavior&) = default;

private:
    Rational full_correlator_from_probabilities(const SettingTuple& x, std::uint32_t mask) const;

    Scenario scenario_;
    Space space_;
    std::vector<Rational> entries_;
};

}  // namespace nld
