#include "nld/errors.hpp"
#include "nld/family.hpp"
#include "nld/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace nld {

namespace {

std::int64_t sign_of_l(int l) { return ((1 + (l + 1) / 2) % 2 == 0) ? 1 : -1; }

std::int64_t choose(int n, int k) { return static_cast<std::int64_t>(binomial(n, k)); }

std::int64_t pow2(int e) { return e >= 0 ? std::int64_t{1} << e : 0; }

}  // namespace

SymmetricInequality FamilyInequality::inequality() const {
    std::vector<Rational> c(coeffs.size());
    for (std::size_t l = 0; l < coeffs.size(); ++l) c[l] = -coeffs[l];
    return SymmetricInequality::two_setting(parties, bound, c);
}

FamilyInequality family_inequality(int n) {
    if (n < 3) throw InvalidArgument("family_inequality: n must be at least 3");
    if (n > 40) throw CapExceeded("family_inequality: n too large");
    FamilyInequality f;
    f.parties = n;
    f.coeffs.assign(n + 1, 0);
    for (int l = 1; l <= n; ++l) f.coeffs[l] = sign_of_l(l) * l;
    f.bound = n * pow2(n - 2);
    return f;
}

std::optional<Relabeling> relabeling_to(const SymmetricInequality& from, const SymmetricInequality& display,
                                        const SymmetryGroup& group) {
    const auto target = display.normalized();
    for (const auto& r : group_elements(group, from.scenario(), from.is_full_body()))
        if (apply(r, from).normalized() == target) return r;
    return std::nullopt;
}

std::int64_t gamma_bound(int k, int m) {
    if (k < 1 || m < 1) throw InvalidArgument("gamma_bound: block sizes must be positive");
    if (k + m > 30) throw CapExceeded("gamma_bound: k + m > 30");
    const int small = std::min(k, m), large = std::max(k, m);
    // A_j(g) = sum_i c_{i+j} g_i C(small,i) C(large,j); the best h gives sum_j |A_j|
    std::vector<std::vector<std::int64_t>> w(small + 1, std::vector<std::int64_t>(large + 1));
    for (int i = 0; i <= small; ++i)
        for (int j = 0; j <= large; ++j) w[i][j] = sign_of_l(i + j) * (i + j) * choose(small, i) * choose(large, j);
    std::int64_t best = INT64_MIN;
    // g_0 = +1 suffices: flipping every g and every h leaves the value unchanged
    const std::uint64_t patterns = std::uint64_t{1} << small;
    std::vector<std::int64_t> a(large + 1);
    for (std::uint64_t g = 0; g < patterns; ++g) {
        std::fill(a.begin(), a.end(), 0);
        for (int i = 0; i <= small; ++i) {
            const bool neg = i > 0 && (g >> (i - 1) & 1);
            for (int j = 0; j <= large; ++j) a[j] += neg ? -w[i][j] : w[i][j];
        }
        std::int64_t v = 0;
        for (auto x : a) v += std::llabs(x);
        best = std::max(best, v);
    }
    return best;
}

std::int64_t gamma_bound_exhaustive(int k, int m) {
    if (k < 1 || m < 1) throw InvalidArgument("gamma_bound: block sizes must be positive");
    if (k + m > 20) throw CapExceeded("gamma_bound_exhaustive: k + m > 20");
    std::int64_t best = INT64_MIN;
    for (std::uint64_t g = 0; g < (std::uint64_t{1} << (k + 1)); ++g)
        for (std::uint64_t h = 0; h < (std::uint64_t{1} << (m + 1)); ++h) {
            std::int64_t v = 0;
            for (int i = 0; i <= k; ++i)
                for (int j = 0; j <= m; ++j) {
                    const std::int64_t s = ((g >> i & 1) ^ (h >> j & 1)) ? -1 : 1;
                    v += s * sign_of_l(i + j) * (i + j) * choose(k, i) * choose(m, j);
                }
            best = std::max(best, v);
        }
    return best;
}

std::vector<std::vector<std::int64_t>> proof_matrix(int k, int m) {
    std::vector<std::vector<std::int64_t>> M(k + 1, std::vector<std::int64_t>(m + 1));
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= m; ++j)
            M[i][j] = (((i + 1) * (j + 1)) % 2 ? -1 : 1) * (i + j) * choose(k, i) * choose(m, j);
    return M;
}

std::int64_t achievability_check(int k, int m) {
    if (k < 1 || m < 1) throw InvalidArgument("achievability_check: block sizes must be positive");
    std::int64_t s = 0;
    for (const auto& row : proof_matrix(k, m))
        for (auto x : row) s += x;
    return s;
}

ProofCheck m2_proof_check(int k) {
    if (k < 1) throw InvalidArgument("m2_proof_check: k must be positive");
    if (k > 40) throw CapExceeded("m2_proof_check: k too large");
    const auto M = proof_matrix(k, 2);
    ProofCheck pc;
    pc.row_identity = true;
    std::int64_t col0 = 0, col2 = 0;
    for (const auto& row : M) {
        pc.row_identity = pc.row_identity && row[1] == std::llabs(row[0]) + std::llabs(row[2]);
        col0 += row[0];
        col2 += row[2];
        pc.total += row[0] + row[1] + row[2];
    }
    pc.columns_vanish = col0 == 0 && col2 == 0;
    pc.best_flip = INT64_MIN;
    // column pattern with column 0 unflipped (global flip), every row pattern
    for (unsigned cols = 0; cols < 4; ++cols) {
        const std::int64_t cs[3] = {1, (cols & 1) ? -1 : 1, (cols & 2) ? -1 : 1};
        for (std::uint64_t rows = 0; rows < (std::uint64_t{1} << (k + 1)); ++rows) {
            std::int64_t v = 0;
            for (int i = 0; i <= k; ++i) {
                const std::int64_t rs = (rows >> i & 1) ? -1 : 1;
                v += rs * (cs[0] * M[i][0] + cs[1] * M[i][1] + cs[2] * M[i][2]);
            }
            pc.best_flip = std::max(pc.best_flip, v);
        }
    }
    pc.no_flip_exceeds = pc.best_flip <= pc.total;
    return pc;
}

FamilyQuantum family_quantum(int n, int cap) {
    if (n > cap) throw CapExceeded("family_quantum: n above the dense-matrix cap");
    const auto f = family_inequality(n);
    FamilyQuantum out;
    out.config = QuantumConfig::uniform(n, {pauli::x(), pauli::z()});
    Eigen::SelfAdjointEigenSolver<CMatrix> es(bell_operator(f.inequality(), out.config));
    const Eigen::Index last = es.eigenvalues().size() - 1;
    out.value = es.eigenvalues()(last);
    out.state = es.eigenvectors().col(last);
    out.config.state = out.state;
    return out;
}

namespace {

// Pauli strings of rho_n: symbol per party (0 = 1, 1 = X, 2 = Y, 3 = Z) and weight.
std::vector<std::pair<std::vector<int>, double>> optimal_state_strings(int n) {
    std::vector<std::pair<std::vector<int>, double>> out;
    std::vector<int> s(n);
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        const int ones = std::popcount(bits);
        if (ones % 2 == 0) {
            for (int k = 0; k < n; ++k) s[k] = (bits >> k & 1) ? 2 : 0;
            out.emplace_back(s, 1.0);
        }
        for (int k = 0; k < n; ++k) s[k] = (bits >> k & 1) ? 3 : 1;
        out.emplace_back(s, static_cast<double>(sign_of_l(ones)) / std::numbers::sqrt2);
    }
    return out;
}

}  // namespace

CMatrix optimal_state(int n) {
    if (n < 3 || n > 8) throw InvalidArgument("optimal_state: 3 <= n <= 8");
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix rho = CMatrix::Zero(dim, dim);
    using namespace std::complex_literals;
    for (const auto& [s, c] : optimal_state_strings(n)) {
        // every Pauli string has one nonzero entry per row
        for (Eigen::Index r = 0; r < dim; ++r) {
            Eigen::Index col = r;
            std::complex<double> v = c / static_cast<double>(dim);
            for (int k = 0; k < n; ++k) {
                const bool bit = r >> k & 1;
                switch (s[k]) {
                    case 1: col ^= Eigen::Index{1} << k; break;
                    case 2:
                        col ^= Eigen::Index{1} << k;
                        v *= bit ? 1i : -1i;
                        break;
                    case 3:
                        if (bit) v = -v;
                        break;
                    default: break;
                }
            }
            rho(r, col) += v;
        }
    }
    return rho;
}

StateReport check_optimal_state(int n) {
    const CMatrix rho = optimal_state(n);
    StateReport r;
    // only the identity string carries a trace
    double identity_weight = 0;
    for (const auto& [str, c] : optimal_state_strings(n))
        if (std::all_of(str.begin(), str.end(), [](int x) { return x == 0; })) identity_weight += c;
    r.identity_coefficient_one = identity_weight == 1.0;
    r.trace = rho.trace().real();
    r.hermiticity = (rho - rho.adjoint()).norm();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.purity = (rho * rho).trace().real();
    const auto f = family_inequality(n);
    const CMatrix b = bell_operator(f.inequality(), QuantumConfig::uniform(n, {pauli::x(), pauli::z()}));
    r.bell_value = (rho * b).trace().real();
    Eigen::SelfAdjointEigenSolver<CMatrix> eb(b);
    const double top = eb.eigenvalues().maxCoeff();
    CMatrix p = CMatrix::Zero(b.rows(), b.cols());
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        if (eb.eigenvalues()(i) > top - 1e-9) {
            p += eb.eigenvectors().col(i) * eb.eigenvectors().col(i).adjoint();
            ++r.top_space_dimension;
        }
    r.top_space_weight = (p * rho).trace().real();
    return r;
}

}  // namespace nld
