#pragma once

#include "nld/inequality.hpp"
#include "nld/quantum.hpp"
#include "nld/symmetry.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace nld {

/// F_n:  sum_{l=1}^n c_l (1..1 2..2 with l twos) <= n 2^(n-2),  c_l = (-1)^(1+ceil(l/2)) l.
struct FamilyInequality {
    int parties = 0;
    std::vector<std::int64_t> coeffs;  ///< c_0 .. c_n, c_0 = 0
    std::int64_t bound = 0;

    /// The same inequality as bound - sum c_l (l) >= 0.
    SymmetricInequality inequality() const;
};

FamilyInequality family_inequality(int n);

/// Group element mapping F_n onto `display` (e.g. another printed form of the same
/// inequality), if one exists.
std::optional<Relabeling> relabeling_to(const SymmetricInequality& from, const SymmetricInequality& display,
                                        const SymmetryGroup& group = {});

/// Maximum of sum_{i,j} c_{i+j} g_i h_j C(k,i) C(m,j) over g in {+-1}^(k+1), h in {+-1}^(m+1):
/// F_n on behaviors that are local between a block of k and a block of m parties. The
/// larger block's signs are optimized in closed form (sum of absolute values), the smaller
/// block's enumerated. Throws CapExceeded for k + m > 30.
std::int64_t gamma_bound(int k, int m);
/// Same maximum by enumerating every assignment of both blocks (k + m <= 20).
std::int64_t gamma_bound_exhaustive(int k, int m);

/// sum_{i,j} (-1)^((i+1)(j+1)) (i+j) C(k,i) C(m,j): F_n at g_i = (-1)^floor(i/2), h_j = (-1)^floor(j/2).
std::int64_t achievability_check(int k, int m);

/// M_ij = (-1)^((i+1)(j+1)) (i+j) C(k,i) C(m,j), i = 0..k, j = 0..m.
std::vector<std::vector<std::int64_t>> proof_matrix(int k, int m);

struct ProofCheck {
    bool row_identity = false;      ///< M_i1 = |M_i0| + |M_i2| for every row
    bool columns_vanish = false;    ///< columns 0 and 2 each sum to zero
    bool no_flip_exceeds = false;   ///< no row/column sign pattern beats sum M_ij
    std::int64_t total = 0;         ///< sum M_ij
    std::int64_t best_flip = 0;     ///< best value over all flip patterns
    bool ok() const { return row_identity && columns_vanish && no_flip_exceeds; }
};

/// The m = 2 argument: structure of M plus an exhaustive search over row subsets and
/// column subsets (up to the global flip).
ProofCheck m2_proof_check(int k);

struct FamilyQuantum {
    double value = 0;
    CVector state;
    QuantumConfig config;
};

/// Top eigenvalue and eigenvector of the F_n Bell operator with setting 1 = sigma_x and
/// setting 2 = sigma_z at every party. Throws CapExceeded for n > cap.
FamilyQuantum family_quantum(int n, int cap = 8);

/// rho_n = sum_i (1^(n-2i) Y^(2i)) + (1/sqrt2) sum_{b=0}^n (-1)^(1+ceil(b/2)) (X^(n-b) Z^b)
/// with 1, X, Y, Z = identity/2, sigma/2 and (...) the sum over distinct party orderings.
CMatrix optimal_state(int n);

struct StateReport {
    bool identity_coefficient_one = false;  ///< the only string with a trace has weight 1
    double trace = 0;
    double hermiticity = 0;  ///< ||rho - rho^dagger||
    double min_eigenvalue = 0;
    double purity = 0;
    double bell_value = 0;         ///< tr(rho B_n), sigma_x / sigma_z settings
    double top_space_weight = 0;   ///< tr(P rho), P the top eigenspace projector of B_n
    int top_space_dimension = 0;
};

StateReport check_optimal_state(int n);

}  // namespace nld
