#pragma once

#include "nld/behavior.hpp"
#include "nld/rational.hpp"
#include "nld/scenario.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nld {

/// Party-permutation-symmetric Bell inequality
///
///     constant + sum_mu coeff[mu] * (mu) >= 0,
///
/// where (mu) is the sum of the correlators of all distinct party orderings of the
/// setting multiset mu. The constant carries the classical bound of the model the
/// inequality was derived for; the Bell expression proper is -sum_mu coeff[mu] * (mu).
class SymmetricInequality {
public:
    SymmetricInequality(Scenario scenario, Space space, Rational constant,
                        std::vector<Rational> coeffs);

    /// Full-body inequality for two settings from its constant and c_l, l = #parties on setting 2.
    static SymmetricInequality two_setting(int parties, Rational constant,
                                           const std::vector<Rational>& by_l);

    const Scenario& scenario() const noexcept { return scenario_; }
    Space space() const noexcept { return space_; }
    const Rational& constant() const noexcept { return constant_; }
    const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
    const MultisetIndex& index() const noexcept { return *index_; }

    Rational coefficient(const SettingCounts& counts) const;
    bool is_full_body() const;

    /// Rescaled by a positive factor to coprime integers (constant included).
    SymmetricInequality normalized() const;
    SymmetricInequality with_constant(Rational c) const;
    /// Same inequality in another correlator space (marginal coefficients must vanish
    /// when converting to FullCorrelation).
    SymmetricInequality in_space(Space space) const;

    /// Coefficients of the Bell expression -sum c (mu), i.e. the negated coefficients.
    std::vector<Rational> expression() const;

    /// Plain-text rendering, e.g. "+16 - (1112) -2 (1122) +3 (1222) +4 (2222)".
    std::string to_text() const;

    friend bool operator==(const SymmetricInequality& a, const SymmetricInequality& b) {
        return a.scenario_ == b.scenario_ && a.space_ == b.space_ && a.constant_ == b.constant_ &&
               a.coeffs_ == b.coeffs_;
    }

private:
    Scenario scenario_;
    Space space_;
    Rational constant_;
    std::vector<Rational> coeffs_;
    std::shared_ptr<const MultisetIndex> index_;
};

/// Parses the plain-text form. Accepts "c0 +- k (digits) ... [>= 0]" and
/// "k (digits) ... <= B" (converted to B - ... >= 0). Setting count defaults to the
/// largest digit (at least 2).
SymmetricInequality parse_inequality(std::string_view text, std::optional<int> settings = {});

/// Coefficient of every setting tuple of the inequality's space (tuple_index order).
std::vector<Rational> expand_symmetric(const SymmetricInequality& ineq);

/// constant + sum over tuples of coefficient * correlator.
Rational evaluate(const SymmetricInequality& ineq, const Behavior& b,
                  MarginalConvention convention = MarginalConvention::UniformAverage);

/// Text label of a multiset: ascending digits, or descending when trivial settings occur.
std::string multiset_label(const SettingTuple& ascending);

}  // namespace nld
