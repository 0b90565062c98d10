#pragma once

#include "nld/behavior.hpp"
#include "nld/inequality.hpp"
#include "nld/models.hpp"
#include "nld/quantum.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nld {

/// Where a target-scenario setting takes its value from.
struct SettingSource {
    enum class Kind : std::uint8_t { Keep, Trivial, Copy };
    Kind kind = Kind::Keep;
    int setting = 0;    ///< source setting of a copy
    bool flip = false;  ///< copy with relabeled outcomes

    friend bool operator==(const SettingSource&, const SettingSource&) = default;
};

/// Maps every setting of the target scenario that does not exist in the base scenario
/// (added settings, and all settings of added parties) to a trivial +1 measurement or a
/// copy of a base setting of the same party.
struct ExtensionRule {
    Scenario base;
    Scenario target;
    std::vector<std::vector<SettingSource>> sources;  ///< [party][setting - 1] of the target

    /// Every party's added settings trivial.
    static ExtensionRule trivial(const Scenario& base, const Scenario& target);
    /// Added setting base.settings + i + 1 copies `from[i]` at every party.
    static ExtensionRule copy(const Scenario& base, const Scenario& target, const std::vector<int>& from);

    /// Throws InvalidArgument for unmapped added settings or references to settings the
    /// base scenario does not have.
    void validate() const;
    /// Base tuple and sign that a target tuple reduces to.
    std::pair<SettingTuple, int> substitute(const SettingTuple& target_tuple) const;
    /// Same mapping at every party (needed to keep symmetric inequalities symmetric).
    bool party_uniform() const;
    /// "A3=1,B3=1,C3=1" style.
    std::string to_string() const;
};

/// Parses "A3=1,B3=1,C3=1", "A3=A1,B3=-B1" ("-" relabels the outcomes) or "C=1" (every
/// setting of an added party C trivial).
ExtensionRule parse_extension_rule(std::string_view text, const Scenario& base, const Scenario& target);

/// The behavior of the target scenario that the rule induces.
Behavior extend_behavior(const Behavior& b1, const ExtensionRule& rule);

/// Observables for the added settings: identity when trivial, +-source when copied.
QuantumConfig extend_config(const QuantumConfig& c1, const ExtensionRule& rule);

/// Vertices of the model on which the inequality holds with equality. Throws
/// InvalidArgument if a vertex violates it or none saturates it.
std::vector<Behavior> saturating_behaviors(const SymmetricInequality& ineq, const HybridModel& model);

/// Substitutes the rule into a target inequality and collects terms. Throws
/// InvalidArgument if the result is not party symmetric. Marginal-free results come back
/// in FullCorrelation space.
SymmetricInequality reduce_inequality(const SymmetricInequality& b2, const ExtensionRule& rule);

struct GeneralizationProblem {
    SymmetricInequality base;
    Scenario target;
    ExtensionRule rule;
    std::shared_ptr<const HybridModel> model;  ///< target model, WithMarginals
    std::vector<Rational> direction;           ///< one entry per LP coordinate
    bool symmetric = true;
};

struct GeneralizationResult {
    /// constant + sum coeff * correlator >= 0 over every tuple of the target space, with
    /// integer coprime entries.
    Rational constant;
    std::vector<Rational> tuple_coefficients;
    /// Present when the coefficients are party symmetric (always for the symmetric LP).
    std::optional<SymmetricInequality> inequality;
    Rational objective;  ///< <r, y> with y the LP variable in "y . beta <= 1" form
    int rounds = 0;
    std::size_t columns = 0;
};

/// max <r, y> subject to y . beta2 = 1 for every extended saturating behavior and
/// y . beta <= 1 for every model vertex, solved through its dual with model vertices
/// added as columns while they are violated. Coordinates are the symmetric classes of
/// the target space, or all of its tuples.
class GeneralizationLp {
public:
    GeneralizationLp(const SymmetricInequality& base, const ExtensionRule& rule,
                     std::shared_ptr<const HybridModel> model, bool symmetric = true);

    std::size_t dimension() const noexcept { return dim_; }
    const std::vector<Behavior>& extended_saturating() const noexcept { return extended_; }
    std::size_t distinct_points() const noexcept { return points_.size() / std::max<std::size_t>(dim_, 1); }

    /// Throws LpError when no generalization exists under the rule.
    GeneralizationResult solve(const std::vector<Rational>& direction) const;

private:
    std::vector<Rational> coordinates(const Behavior& b) const;

    ExtensionRule rule_;
    std::shared_ptr<const HybridModel> model_;
    bool symmetric_;
    std::unique_ptr<MultisetIndex> index_;
    std::size_t dim_ = 0;
    std::vector<Behavior> extended_;
    std::vector<std::vector<Rational>> equalities_;  // distinct coordinates of extended_
    std::vector<std::int64_t> points_;               // distinct vertex coordinates, row-major
    std::int64_t denominator_ = 1;
};

GeneralizationResult generalization_lp(const GeneralizationProblem& problem);

/// Integer direction uniform in [-10, 10]^dim.
std::vector<Rational> random_direction(std::size_t dim, std::uint64_t seed);

/// Convention under which generalization inequalities are checked and the LP target
/// model is built (see README).
inline constexpr MarginalConvention kGeneralizationConvention = MarginalConvention::TrivialSetting;

}  // namespace nld
