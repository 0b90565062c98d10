#pragma once

#include "nld/inequality.hpp"

#include <vector>

namespace nld {

/// Relabelings used to identify equivalent symmetric inequalities.
///  - setting_permutations: one permutation of the settings 1..m applied to every party
///    (for m = 2 the global swap 1 <-> 2)
///  - outcome_flips: for each setting, relabel its outcomes at every party
///  - negation: flip all outcomes of a single party; maps a full-body symmetric inequality
///    to its negated expression with the same bound. Ignored for inequalities with marginals.
struct SymmetryGroup {
    bool setting_permutations = true;
    bool outcome_flips = true;
    bool negation = true;

    static SymmetryGroup trivial() { return {false, false, false}; }
};

/// One group element: settings relabeled by `permutation` (index 0 fixed), outcomes of
/// setting s flipped if bit s of `flip_mask` is set, optional negation.
struct Relabeling {
    std::vector<int> permutation;
    unsigned flip_mask = 0;
    bool negate = false;
};

std::vector<Relabeling> group_elements(const SymmetryGroup& g, const Scenario& s, bool full_body);

SymmetricInequality apply(const Relabeling& r, const SymmetricInequality& ineq);

/// Lexicographically smallest normalized member of the orbit (coefficients compared in
/// multiset order; the constant is invariant).
SymmetricInequality canonicalize(const SymmetricInequality& ineq,
                                 const SymmetryGroup& g = SymmetryGroup{});

}  // namespace nld
