#pragma once

#include "nld/inequality.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace nld {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Qubit = Eigen::Matrix2cd;

/// Qubit k is bit k of the amplitude index; |0> is the +1 eigenvector of sigma_z.
namespace pauli {
Qubit identity();
Qubit x();
Qubit y();
Qubit z();
}  // namespace pauli

/// Per-party +-1 observables (one per nontrivial setting) and, when known, a pure state.
struct QuantumConfig {
    int parties = 0;
    int settings = 0;
    std::vector<std::vector<Qubit>> observables;  ///< [party][setting - 1]
    CVector state;                                ///< empty when the state is mixed/fixed

    static QuantumConfig uniform(int parties, const std::vector<Qubit>& per_setting);
    /// Throws InvalidArgument unless every observable is Hermitian with O^2 = I (to tol)
    /// and a present state has unit norm.
    void validate(double tol = 1e-10) const;
};

/// Weight (1-p) on |GHZ_n> and p on the maximally mixed state.
struct NoisyGHZ {
    int parties = 0;
    double p = 0;

    static CVector ghz(int parties);
    CMatrix density() const;
};

/// A fixed state for the seesaw: sum_i w_i |psi_i><psi_i| + white * I / 2^n, or a noisy GHZ
/// state handled in closed form.
class FixedState {
public:
    static FixedState noisy_ghz(int parties, double p);
    /// Spectral decomposition of a density operator (checked: Hermitian, PSD, trace 1).
    static FixedState density(const CMatrix& rho);
    static FixedState pure(const CVector& psi);

    int parties() const noexcept { return parties_; }
    bool is_ghz() const noexcept { return ghz_; }
    double ghz_weight() const noexcept { return ghz_weight_; }
    double white() const noexcept { return white_; }
    const std::vector<std::pair<double, CVector>>& components() const noexcept { return parts_; }

private:
    int parties_ = 0;
    bool ghz_ = false;
    double ghz_weight_ = 0;
    double white_ = 0;
    std::vector<std::pair<double, CVector>> parts_;
};

/// B = sum over tuples of e_t * tensor_k O^(k)_{t_k} with e the Bell-expression coefficients
/// (the negated inequality coefficients), so <B> is the expression without the constant.
CMatrix bell_operator(const SymmetricInequality& ineq, const QuantumConfig& config);

/// <B> on the fixed state.
double expectation(const SymmetricInequality& ineq, const QuantumConfig& config, const FixedState& state);

struct SeesawOptions {
    int restarts = 20;
    int sweep_cap = 500;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    int jobs = 1;
};

struct SeesawResult {
    double value = 0;  ///< expression value without constant
    QuantumConfig config;
    std::uint64_t seed = 0;  ///< seed of the winning restart
    int sweeps = 0;
    bool converged = false;
    bool monotone = true;  ///< no update decreased the value (beyond 1e-9 relative)
};

/// Lower bound on the quantum maximum of the expression. Free state: every sweep sets the
/// state to the top eigenvector of the current Bell operator.
SeesawResult seesaw_max(const SymmetricInequality& ineq, const std::optional<FixedState>& state,
                        const SeesawOptions& options = {});
/// One seesaw run from the given starting observables (the state part of `start` is ignored
/// for a fixed state).
SeesawResult seesaw_from(const SymmetricInequality& ineq, const std::optional<FixedState>& state,
                         QuantumConfig start, const SeesawOptions& options = {});

/// Random observables: sign spectra of random Hermitian matrices.
QuantumConfig random_config(int parties, int settings, std::uint64_t seed);

/// Best violation -(c0 + sum c (mu)) found on the noisy GHZ state with noise p.
double violation_at(const SymmetricInequality& ineq, double p, const SeesawOptions& options = {});

struct RobustnessOptions {
    int grid = 21;
    double threshold = 1e-6;
    double width = 1e-4;
    int max_rounds = 12;
    SeesawOptions seesaw;
};

struct CriticalInterval {
    bool empty = false;
    double p0 = 0;  ///< largest sampled noise with violation above the threshold
    double p1 = 1;  ///< smallest sampled noise without violation
    std::vector<std::pair<double, double>> samples;  ///< (p, violation), in evaluation order
    int reruns = 0;  ///< points re-evaluated because the samples were not convex
};

/// Grid scan of the violation in p on noisy GHZ states, refined inside [p0, p1] until the
/// width drops below the tolerance. Optimal observables of earlier points are reused as
/// extra starting points at later ones.
CriticalInterval critical_interval(const SymmetricInequality& ineq, const RobustnessOptions& options = {});

/// Pauli decomposition {I, X, Y, Z} (real coefficients) of a Hermitian qubit operator.
std::array<double, 4> pauli_coefficients(const Qubit& o);

/// {"settings": [[{"I","X","Y","Z"} per setting] per party], "state": [[re, im], ...]}
nlohmann::json to_json(const QuantumConfig& config);

}  // namespace nld
