#include "nld/scenario.hpp"

#include "nld/errors.hpp"

#include <algorithm>
#include <functional>

namespace nld {

Scenario::Scenario(int n, int m) : parties(n), settings(m) {
    if (n < 2) throw InvalidArgument("scenario needs at least 2 parties");
    if (m < 2) throw InvalidArgument("scenario needs at least 2 settings per party");
}

std::string_view to_string(Space s) {
    switch (s) {
        case Space::FullCorrelation: return "full";
        case Space::WithMarginals: return "marginals";
        case Space::Probability: return "probability";
    }
    return "?";
}

Space parse_space(std::string_view s) {
    if (s == "full") return Space::FullCorrelation;
    if (s == "marginals") return Space::WithMarginals;
    if (s == "probability") return Space::Probability;
    throw ParseError("unknown space '" + std::string(s) + "'");
}

std::string_view to_string(MarginalConvention c) {
    switch (c) {
        case MarginalConvention::UniformAverage: return "uniform-average";
        case MarginalConvention::PartnerSettingOne: return "partner-setting-one";
        case MarginalConvention::TrivialSetting: return "trivial-setting";
    }
    return "?";
}

MarginalConvention parse_convention(std::string_view s) {
    if (s == "uniform-average") return MarginalConvention::UniformAverage;
    if (s == "partner-setting-one") return MarginalConvention::PartnerSettingOne;
    if (s == "trivial-setting") return MarginalConvention::TrivialSetting;
    throw ParseError("unknown marginal convention '" + std::string(s) + "'");
}

std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::size_t space_dimension(const Scenario& s, Space space) {
    const auto m = static_cast<std::size_t>(s.settings);
    switch (space) {
        case Space::FullCorrelation: return ipow(m, s.parties);
        case Space::WithMarginals: return ipow(m + 1, s.parties) - 1;
        case Space::Probability: return ipow(m, s.parties) * ipow(2, s.parties);
    }
    return 0;
}

std::size_t tuple_index(const Scenario& s, Space space, const SettingTuple& t) {
    if (t.size() != static_cast<std::size_t>(s.parties))
        throw DimensionMismatch("setting tuple has wrong length");
    std::size_t idx = 0;
    std::size_t stride = 1;
    if (space == Space::WithMarginals) {
        for (int k = 0; k < s.parties; ++k) {
            if (t[k] < 0 || t[k] > s.settings) throw InvalidArgument("setting out of range");
            idx += static_cast<std::size_t>(t[k]) * stride;
            stride *= static_cast<std::size_t>(s.settings + 1);
        }
        if (idx == 0) throw InvalidArgument("all-trivial tuple has no correlator");
        return idx - 1;
    }
    for (int k = 0; k < s.parties; ++k) {
        if (t[k] < 1 || t[k] > s.settings) throw InvalidArgument("setting out of range");
        idx += static_cast<std::size_t>(t[k] - 1) * stride;
        stride *= static_cast<std::size_t>(s.settings);
    }
    return idx;
}

SettingTuple tuple_at(const Scenario& s, Space space, std::size_t index) {
    SettingTuple t(static_cast<std::size_t>(s.parties));
    if (space == Space::WithMarginals) {
        ++index;
        for (int k = 0; k < s.parties; ++k) {
            t[k] = static_cast<int>(index % static_cast<std::size_t>(s.settings + 1));
            index /= static_cast<std::size_t>(s.settings + 1);
        }
        return t;
    }
    for (int k = 0; k < s.parties; ++k) {
        t[k] = 1 + static_cast<int>(index % static_cast<std::size_t>(s.settings));
        index /= static_cast<std::size_t>(s.settings);
    }
    return t;
}

SettingCounts counts_of(const Scenario& s, const SettingTuple& t) {
    SettingCounts c(static_cast<std::size_t>(s.settings + 1), 0);
    for (int x : t) ++c.at(static_cast<std::size_t>(x));
    return c;
}

std::size_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

std::size_t multinomial(const SettingCounts& counts) {
    std::size_t r = 1;
    int total = 0;
    for (int c : counts) {
        total += c;
        r *= binomial(total, c);
    }
    return r;
}

MultisetIndex::MultisetIndex(const Scenario& s, Space space) : scenario_(s), space_(space) {
    if (space == Space::Probability)
        throw InvalidArgument("multiset classes are defined on correlator spaces");
    const int lo = space == Space::WithMarginals ? 0 : 1;
    SettingTuple cur;
    std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(cur.size()) == s.parties) {
            if (std::any_of(cur.begin(), cur.end(), [](int x) { return x != 0; })) {
                classes_.push_back(counts_of(s, cur));
            }
            return;
        }
        for (int x = from; x <= s.settings; ++x) {
            cur.push_back(x);
            rec(x);
            cur.pop_back();
        }
    };
    rec(lo);
    for (std::size_t i = 0; i < classes_.size(); ++i) lookup_.emplace(classes_[i], i);
    const std::size_t dim = space_dimension(s, space);
    tuple_classes_.resize(dim);
    for (std::size_t i = 0; i < dim; ++i)
        tuple_classes_[i] = static_cast<std::uint32_t>(find(counts_of(s, tuple_at(s, space, i))));
}

SettingTuple MultisetIndex::settings_list(std::size_t i) const {
    SettingTuple out;
    const auto& c = classes_.at(i);
    for (std::size_t x = 0; x < c.size(); ++x)
        for (int r = 0; r < c[x]; ++r) out.push_back(static_cast<int>(x));
    return out;
}

std::size_t MultisetIndex::find(const SettingCounts& counts) const {
    auto it = lookup_.find(counts);
    if (it == lookup_.end()) throw InvalidArgument("setting multiset not part of this space");
    return it->second;
}

std::size_t MultisetIndex::class_of_tuple(const SettingTuple& t) const {
    return find(counts_of(scenario_, t));
}

std::size_t MultisetIndex::class_size(std::size_t i) const { return multinomial(classes_.at(i)); }

}  // namespace nld
