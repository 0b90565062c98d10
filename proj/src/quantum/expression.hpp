#pragma once

#include "nld/inequality.hpp"

#include <vector>

namespace nld::detail {

/// Nonzero terms of a Bell expression: setting tuples (0 = trivial) and the coefficient of
/// the corresponding correlator in -sum c (mu).
struct ExpressionTerms {
    int parties = 0;
    int settings = 0;
    std::vector<std::vector<int>> tuples;
    std::vector<double> coeffs;
};

ExpressionTerms expression_terms(const SymmetricInequality& ineq);

}  // namespace nld::detail
