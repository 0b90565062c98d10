#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace nld {

/// n parties, m dichotomic settings per party. Setting 0 denotes the trivial
/// measurement that deterministically yields +1.
struct Scenario {
    int parties = 0;
    int settings = 0;

    Scenario() = default;
    Scenario(int n, int m);

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class Space : std::uint8_t {
    FullCorrelation,  ///< correlators over {1..m}^n
    WithMarginals,    ///< correlators over {0..m}^n without the all-trivial tuple
    Probability,      ///< p(a|x), a in {+1,-1}^n, x in {1..m}^n
};

std::string_view to_string(Space s);
Space parse_space(std::string_view s);

/// How a marginal correlator is read off a deterministic strategy of a signaling cell.
enum class MarginalConvention : std::uint8_t {
    UniformAverage,     ///< average over the unspecified partner settings
    PartnerSettingOne,  ///< partners are taken to use setting 1
    TrivialSetting,     ///< setting 0 is an ordinary input of the cell strategy
};

std::string_view to_string(MarginalConvention c);
MarginalConvention parse_convention(std::string_view s);

using SettingTuple = std::vector<int>;

std::size_t ipow(std::size_t base, int exp);

/// Number of correlator (or probability) entries of a behavior in `space`.
std::size_t space_dimension(const Scenario& s, Space space);

/// Index of a setting tuple within the correlator spaces.
std::size_t tuple_index(const Scenario& s, Space space, const SettingTuple& t);
SettingTuple tuple_at(const Scenario& s, Space space, std::size_t index);

/// A multiset of settings, stored as counts[k] = number of parties using setting k.
using SettingCounts = std::vector<int>;

SettingCounts counts_of(const Scenario& s, const SettingTuple& t);

/// Enumerates the party-symmetric classes (setting multisets) of a correlator space
/// in a fixed order: nondecreasing setting lists, lexicographically. For two settings
/// without marginals the class with l parties on setting 2 has index l.
class MultisetIndex {
public:
    MultisetIndex(const Scenario& s, Space space);

    const Scenario& scenario() const noexcept { return scenario_; }
    Space space() const noexcept { return space_; }
    std::size_t size() const noexcept { return classes_.size(); }

    const SettingCounts& counts(std::size_t i) const { return classes_[i]; }
    /// Nondecreasing setting list of class i.
    SettingTuple settings_list(std::size_t i) const;
    std::size_t find(const SettingCounts& counts) const;
    std::size_t class_of_tuple(const SettingTuple& t) const;
    /// Number of distinct party orderings: n! / prod(counts!).
    std::size_t class_size(std::size_t i) const;
    /// True when no party uses the trivial setting.
    bool is_full_body(std::size_t i) const { return classes_[i][0] == 0; }

    /// class index for every tuple of the space, in tuple_index order
    const std::vector<std::uint32_t>& tuple_classes() const noexcept { return tuple_classes_; }

private:
    Scenario scenario_;
    Space space_;
    std::vector<SettingCounts> classes_;
    std::map<SettingCounts, std::size_t> lookup_;
    std::vector<std::uint32_t> tuple_classes_;
};

std::size_t binomial(int n, int k);
std::size_t multinomial(const SettingCounts& counts);

}  // namespace nld
