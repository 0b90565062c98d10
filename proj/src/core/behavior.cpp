#include "nld/behavior.hpp"

#include "nld/errors.hpp"

#include <bit>

namespace nld {

Behavior::Behavior(Scenario scenario, Space space, std::vector<Rational> entries)
    : scenario_(scenario), space_(space), entries_(std::move(entries)) {
    if (entries_.size() != space_dimension(scenario_, space_))
        throw DimensionMismatch("behavior has " + std::to_string(entries_.size()) +
                                " entries, space needs " +
                                std::to_string(space_dimension(scenario_, space_)));
    if (space_ == Space::Probability) {
        const std::size_t outcomes = ipow(2, scenario_.parties);
        for (std::size_t x = 0; x < entries_.size() / outcomes; ++x) {
            Rational sum = 0;
            for (std::size_t a = 0; a < outcomes; ++a) {
                const auto& p = entries_[x * outcomes + a];
                if (p < 0) throw InvalidArgument("negative probability");
                sum += p;
            }
            if (sum != 1) throw InvalidArgument("probabilities not normalized");
        }
    } else {
        for (const auto& e : entries_)
            if (e < -1 || e > 1) throw InvalidArgument("correlator outside [-1, 1]");
    }
}

Behavior Behavior::zero(const Scenario& s, Space space) {
    if (space == Space::Probability) {
        const std::size_t outcomes = ipow(2, s.parties);
        return Behavior(s, space,
                        std::vector<Rational>(space_dimension(s, space), Rational(1, outcomes)));
    }
    return Behavior(s, space, std::vector<Rational>(space_dimension(s, space)));
}

const Rational& Behavior::probability(std::uint32_t outcome_bits, const SettingTuple& x) const {
    if (space_ != Space::Probability) throw InvalidArgument("not a probability behavior");
    const std::size_t outcomes = ipow(2, scenario_.parties);
    return entries_.at(tuple_index(scenario_, Space::FullCorrelation, x) * outcomes + outcome_bits);
}

Rational Behavior::full_correlator_from_probabilities(const SettingTuple& x,
                                                      std::uint32_t mask) const {
    const std::size_t outcomes = ipow(2, scenario_.parties);
    const std::size_t base = tuple_index(scenario_, Space::FullCorrelation, x) * outcomes;
    Rational sum = 0;
    for (std::uint32_t a = 0; a < outcomes; ++a) {
        const bool negative = (std::popcount(a & mask) & 1) != 0;
        if (negative)
            sum -= entries_[base + a];
        else
            sum += entries_[base + a];
    }
    return sum;
}

Rational Behavior::correlator(const SettingTuple& t, MarginalConvention convention) const {
    if (t.size() != static_cast<std::size_t>(scenario_.parties))
        throw DimensionMismatch("setting tuple has wrong length");
    bool trivial = false;
    for (int x : t) trivial = trivial || x == 0;
    switch (space_) {
        case Space::FullCorrelation:
            if (trivial) throw DimensionMismatch("full-correlation behavior has no marginals");
            return entries_[tuple_index(scenario_, space_, t)];
        case Space::WithMarginals:
            return entries_[tuple_index(scenario_, space_, t)];
        case Space::Probability: break;
    }
    std::uint32_t mask = 0;
    for (int k = 0; k < scenario_.parties; ++k)
        if (t[k] != 0) mask |= 1u << k;
    if (!trivial) return full_correlator_from_probabilities(t, mask);
    if (convention == MarginalConvention::TrivialSetting)
        throw InvalidArgument("probability behaviors have no trivial setting");
    if (convention == MarginalConvention::PartnerSettingOne) {
        SettingTuple x = t;
        for (auto& v : x)
            if (v == 0) v = 1;
        return full_correlator_from_probabilities(x, mask);
    }
    // uniform average over all completions of the trivial entries
    std::vector<int> free;
    for (int k = 0; k < scenario_.parties; ++k)
        if (t[k] == 0) free.push_back(k);
    const std::size_t completions = ipow(static_cast<std::size_t>(scenario_.settings),
                                         static_cast<int>(free.size()));
    Rational sum = 0;
    SettingTuple x = t;
    for (std::size_t c = 0; c < completions; ++c) {
        std::size_t r = c;
        for (int k : free) {
            x[k] = 1 + static_cast<int>(r % static_cast<std::size_t>(scenario_.settings));
            r /= static_cast<std::size_t>(scenario_.settings);
        }
        sum += full_correlator_from_probabilities(x, mask);
    }
    return sum / completions;
}

Behavior Behavior::mix(const Rational& alpha, const Behavior& a, const Behavior& b) {
    if (a.scenario_ != b.scenario_ || a.space_ != b.space_)
        throw DimensionMismatch("mixing behaviors of different spaces");
    std::vector<Rational> e(a.entries_.size());
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = alpha * a.entries_[i] + (1 - alpha) * b.entries_[i];
    return Behavior(a.scenario_, a.space_, std::move(e));
}

}  // namespace nld
