#include "nld/errors.hpp"
#include "nld/lp.hpp"

#include <map>

namespace nld {

namespace {

// A multiset of (outcome, setting) pairs: counts[2 * (x - 1) + a], a = 1 meaning outcome -1.
using PairCounts = std::vector<int>;

void enumerate_counts(std::size_t slots, int total, PairCounts& cur, std::size_t pos,
                      std::vector<PairCounts>& out) {
    if (pos + 1 == slots) {
        cur[pos] = total;
        out.push_back(cur);
        return;
    }
    for (int k = total; k >= 0; --k) {
        cur[pos] = k;
        enumerate_counts(slots, total - k, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

std::vector<PairCounts> all_counts(std::size_t slots, int total) {
    std::vector<PairCounts> out;
    PairCounts cur(slots, 0);
    if (slots == 0) return out;
    enumerate_counts(slots, total, cur, 0, out);
    return out;
}

// Number of outcome assignments for a fixed setting tuple, and their correlator sign,
// summed into (pair multiset -> weight). `measured[x]` parties on setting x enter the
// product, `ignored[x]` parties only fix the setting.
void correlator_terms(int m, const std::vector<int>& measured, const std::vector<int>& ignored,
                      const Rational& scale, std::map<PairCounts, Rational>& acc) {
    std::vector<int> minus_measured(m, 0), minus_ignored(m, 0);
    // odometer over the minus-counts of every group
    for (;;) {
        PairCounts key(2 * m, 0);
        Rational w = scale;
        int sign = 1;
        for (int x = 0; x < m; ++x) {
            const int km = minus_measured[x], ki = minus_ignored[x];
            w *= static_cast<long>(binomial(measured[x], km) * binomial(ignored[x], ki));
            if (km % 2) sign = -sign;
            key[2 * x + 1] = km + ki;
            key[2 * x] = measured[x] + ignored[x] - km - ki;
        }
        acc[key] += sign * w;
        int x = 0;
        for (; x < m; ++x) {
            if (minus_measured[x] < measured[x]) {
                ++minus_measured[x];
                break;
            }
            minus_measured[x] = 0;
            if (minus_ignored[x] < ignored[x]) {
                ++minus_ignored[x];
                break;
            }
            minus_ignored[x] = 0;
        }
        if (x == m) return;
    }
}

}  // namespace

Rational nosignaling_bound(const SymmetricInequality& ineq) {
    const int n = ineq.scenario().parties, m = ineq.scenario().settings;
    if (ineq.space() == Space::Probability) throw InvalidArgument("nosignaling_bound: correlator inequality expected");
    const auto vars = all_counts(2 * static_cast<std::size_t>(m), n);
    std::map<PairCounts, std::size_t> var_index;
    for (std::size_t i = 0; i < vars.size(); ++i) var_index[vars[i]] = i;

    LinearProgram lp(vars.size());
    // normalization, one row per setting multiset
    for (const auto& settings : all_counts(static_cast<std::size_t>(m), n)) {
        std::map<PairCounts, Rational> acc;
        correlator_terms(m, std::vector<int>(m, 0), settings, Rational(1), acc);
        std::vector<Rational> row(vars.size());
        for (const auto& [key, w] : acc) row[var_index.at(key)] = w;
        lp.add_row(std::move(row), Relation::Equal, 1);
    }
    // no-signaling: the marginal of the remaining n-1 parties does not depend on the setting
    // of the party that is summed over
    for (const auto& rest : all_counts(2 * static_cast<std::size_t>(m), n - 1)) {
        auto marginal = [&](int x, std::vector<Rational>& row, int sign) {
            for (int a = 0; a < 2; ++a) {
                auto key = rest;
                ++key[2 * (x - 1) + a];
                row[var_index.at(key)] += sign;
            }
        };
        for (int x = 2; x <= m; ++x) {
            std::vector<Rational> row(vars.size());
            marginal(x, row, 1);
            marginal(1, row, -1);
            lp.add_row(std::move(row), Relation::Equal, 0);
        }
    }
    const auto& idx = ineq.index();
    std::map<PairCounts, Rational> acc;
    for (std::size_t mu = 0; mu < idx.size(); ++mu) {
        const Rational& c = ineq.coeffs()[mu];
        if (c == 0) continue;
        const auto& counts = idx.counts(mu);
        std::vector<int> measured(m, 0), ignored(m, 0);
        ignored[0] = counts[0];
        for (int x = 1; x <= m; ++x) measured[x - 1] = counts[x];
        correlator_terms(m, measured, ignored, -c * static_cast<long>(idx.class_size(mu)), acc);
    }
    for (const auto& [key, w] : acc) lp.objective[var_index.at(key)] += w;

    const auto res = simplex_max(lp);
    if (res.status != LpStatus::Optimal) throw LpError("no-signaling LP did not reach an optimum");
    return res.optimum;
}

LinearProgram nosignaling_lp(const SymmetricInequality& ineq) {
    const Scenario& s = ineq.scenario();
    const int n = s.parties, m = s.settings;
    const std::size_t nx = ipow(static_cast<std::size_t>(m), n), na = std::size_t{1} << n;
    if (nx * na > (std::size_t{1} << 16)) throw CapExceeded("probability-space LP too large");
    LinearProgram lp(nx * na);
    const Scenario full = s;
    for (std::size_t x = 0; x < nx; ++x) {
        std::vector<Rational> row(nx * na);
        for (std::size_t a = 0; a < na; ++a) row[x * na + a] = 1;
        lp.add_row(std::move(row), Relation::Equal, 1);
    }
    for (int k = 0; k < n; ++k) {
        const std::size_t stride = ipow(static_cast<std::size_t>(m), k);
        for (std::size_t x = 0; x < nx; ++x) {
            if ((x / stride) % m == 0) continue;
            const std::size_t x1 = x - ((x / stride) % m) * stride;
            for (std::size_t a = 0; a < na; ++a) {
                if (a >> k & 1) continue;
                std::vector<Rational> row(nx * na);
                for (std::size_t b : {a, a | (std::size_t{1} << k)}) {
                    row[x * na + b] += 1;
                    row[x1 * na + b] -= 1;
                }
                lp.add_row(std::move(row), Relation::Equal, 0);
            }
        }
    }
    const auto coeffs = expand_symmetric(ineq);
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
        if (coeffs[t] == 0) continue;
        auto tuple = tuple_at(s, ineq.space(), t);
        std::size_t mask = 0;
        for (int k = 0; k < n; ++k) {
            if (tuple[k] == 0)
                tuple[k] = 1;
            else
                mask |= std::size_t{1} << k;
        }
        const std::size_t x = tuple_index(full, Space::FullCorrelation, tuple);
        for (std::size_t a = 0; a < na; ++a) {
            const bool odd = __builtin_popcountll(a & mask) & 1;
            lp.objective[x * na + a] += odd ? coeffs[t] : -coeffs[t];
        }
    }
    return lp;
}

Rational nosignaling_bound_full(const SymmetricInequality& ineq) {
    const auto res = simplex_max(nosignaling_lp(ineq));
    if (res.status != LpStatus::Optimal) throw LpError("no-signaling LP did not reach an optimum");
    return res.optimum;
}

Rational hypercube_bound(const SymmetricInequality& ineq) {
    if (!ineq.is_full_body()) throw InvalidArgument("hypercube_bound needs a full-body inequality");
    Rational s = 0;
    const auto& idx = ineq.index();
    for (std::size_t mu = 0; mu < idx.size(); ++mu)
        s += abs(ineq.coeffs()[mu]) * static_cast<long>(idx.class_size(mu));
    return s;
}

}  // namespace nld
