#include "nld/symmetry.hpp"

#include <algorithm>
#include <numeric>

namespace nld {

std::vector<Relabeling> group_elements(const SymmetryGroup& g, const Scenario& s, bool full_body) {
    std::vector<std::vector<int>> perms;
    std::vector<int> p(static_cast<std::size_t>(s.settings + 1));
    std::iota(p.begin(), p.end(), 0);
    if (g.setting_permutations) {
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin() + 1, p.end()));
    } else {
        perms.push_back(p);
    }
    const unsigned flips = g.outcome_flips ? (1u << s.settings) : 1u;
    const int negations = (g.negation && full_body) ? 2 : 1;
    std::vector<Relabeling> out;
    for (const auto& perm : perms)
        for (unsigned f = 0; f < flips; ++f)
            for (int neg = 0; neg < negations; ++neg)
                out.push_back({perm, f << 1, neg == 1});
    return out;
}

SymmetricInequality apply(const Relabeling& r, const SymmetricInequality& ineq) {
    const auto& idx = ineq.index();
    std::vector<Rational> c(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (ineq.coeffs()[i] == 0) continue;
        const auto& counts = idx.counts(i);
        SettingCounts moved(counts.size(), 0);
        int sign = r.negate ? -1 : 1;
        for (std::size_t x = 0; x < counts.size(); ++x) {
            moved[static_cast<std::size_t>(r.permutation[x])] += counts[x];
            if (((r.flip_mask >> x) & 1u) && (counts[x] & 1)) sign = -sign;
        }
        c[idx.find(moved)] = ineq.coeffs()[i] * sign;
    }
    return SymmetricInequality(ineq.scenario(), ineq.space(), ineq.constant(), std::move(c));
}

SymmetricInequality canonicalize(const SymmetricInequality& ineq, const SymmetryGroup& g) {
    const SymmetricInequality base = ineq.normalized();
    std::optional<SymmetricInequality> best;
    for (const auto& r : group_elements(g, base.scenario(), base.is_full_body())) {
        auto cand = apply(r, base);
        if (!best || std::lexicographical_compare(cand.coeffs().begin(), cand.coeffs().end(),
                                                  best->coeffs().begin(), best->coeffs().end()))
            best = std::move(cand);
    }
    return *best;
}

}  // namespace nld
