#include "expression.hpp"

#include "nld/errors.hpp"
#include "nld/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace nld {

namespace detail {

ExpressionTerms expression_terms(const SymmetricInequality& ineq) {
    if (ineq.space() == Space::Probability) throw InvalidArgument("quantum: correlator inequality expected");
    const auto coeffs = expand_symmetric(ineq);
    ExpressionTerms e;
    e.parties = ineq.scenario().parties;
    e.settings = ineq.scenario().settings;
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
        if (coeffs[t] == 0) continue;
        e.tuples.push_back(tuple_at(ineq.scenario(), ineq.space(), t));
        e.coeffs.push_back(-coeffs[t].convert_to<double>());
    }
    return e;
}

}  // namespace detail

namespace pauli {
using namespace std::complex_literals;
Qubit identity() { return Qubit::Identity(); }
Qubit x() {
    Qubit m;
    m << 0, 1, 1, 0;
    return m;
}
Qubit y() {
    Qubit m;
    m << 0, -1i, 1i, 0;
    return m;
}
Qubit z() {
    Qubit m;
    m << 1, 0, 0, -1;
    return m;
}
}  // namespace pauli

QuantumConfig QuantumConfig::uniform(int parties, const std::vector<Qubit>& per_setting) {
    QuantumConfig c;
    c.parties = parties;
    c.settings = static_cast<int>(per_setting.size());
    c.observables.assign(parties, per_setting);
    return c;
}

void QuantumConfig::validate(double tol) const {
    if (static_cast<int>(observables.size()) != parties) throw InvalidArgument("observables: wrong party count");
    for (const auto& party : observables) {
        if (static_cast<int>(party.size()) != settings) throw InvalidArgument("observables: wrong setting count");
        for (const auto& o : party) {
            if ((o - o.adjoint()).norm() > tol) throw InvalidArgument("observable is not Hermitian");
            if ((o * o - Qubit::Identity()).norm() > tol) throw InvalidArgument("observable does not square to I");
        }
    }
    if (state.size() != 0) {
        if (state.size() != (Eigen::Index{1} << parties)) throw DimensionMismatch("state has wrong dimension");
        if (std::abs(state.norm() - 1) > tol) throw InvalidArgument("state is not normalized");
    }
}

CVector NoisyGHZ::ghz(int parties) {
    CVector v = CVector::Zero(Eigen::Index{1} << parties);
    v(0) = v(v.size() - 1) = 1 / std::sqrt(2.0);
    return v;
}

CMatrix NoisyGHZ::density() const {
    if (p < 0 || p > 1) throw InvalidArgument("noise weight outside [0, 1]");
    const CVector g = ghz(parties);
    const auto dim = g.size();
    return (1 - p) * g * g.adjoint() + (p / static_cast<double>(dim)) * CMatrix::Identity(dim, dim);
}

FixedState FixedState::noisy_ghz(int parties, double p) {
    if (p < 0 || p > 1) throw InvalidArgument("noise weight outside [0, 1]");
    FixedState s;
    s.parties_ = parties;
    s.ghz_ = true;
    s.ghz_weight_ = 1 - p;
    s.white_ = p;
    return s;
}

FixedState FixedState::pure(const CVector& psi) {
    FixedState s;
    int n = 0;
    while ((Eigen::Index{1} << n) < psi.size()) ++n;
    if ((Eigen::Index{1} << n) != psi.size()) throw DimensionMismatch("state dimension is not a power of two");
    s.parties_ = n;
    s.parts_.emplace_back(1.0, psi.normalized());
    return s;
}

FixedState FixedState::density(const CMatrix& rho) {
    if (rho.rows() != rho.cols()) throw DimensionMismatch("density operator is not square");
    if ((rho - rho.adjoint()).norm() > 1e-10) throw InvalidArgument("density operator is not Hermitian");
    if (std::abs(rho.trace().real() - 1) > 1e-10) throw InvalidArgument("density operator trace is not 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-10) throw InvalidArgument("density operator is not positive");
    FixedState s = pure(CVector::Unit(rho.rows(), 0));
    s.parts_.clear();
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        if (es.eigenvalues()(i) > 1e-14) s.parts_.emplace_back(es.eigenvalues()(i), es.eigenvectors().col(i));
    return s;
}

CMatrix bell_operator(const SymmetricInequality& ineq, const QuantumConfig& config) {
    const auto e = detail::expression_terms(ineq);
    if (config.parties != e.parties || config.settings < e.settings)
        throw DimensionMismatch("configuration does not match the inequality's scenario");
    const int n = e.parties;
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix b = CMatrix::Zero(dim, dim);
    // each new party becomes the most significant bit: O_k (x) acc
    auto op = [&](int k, int x) -> Qubit { return x == 0 ? Qubit::Identity() : config.observables[k][x - 1]; };
    for (std::size_t t = 0; t < e.tuples.size(); ++t) {
        CMatrix acc = CMatrix::Constant(1, 1, e.coeffs[t]);
        for (int k = 0; k < n; ++k) {
            const Qubit o = op(k, e.tuples[t][k]);
            CMatrix next(acc.rows() * 2, acc.cols() * 2);
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c)
                    next.block(a * acc.rows(), c * acc.cols(), acc.rows(), acc.cols()) = acc * o(a, c);
            acc.swap(next);
        }
        b += acc;
    }
    return b;
}

std::array<double, 4> pauli_coefficients(const Qubit& o) {
    return {(o * pauli::identity()).trace().real() / 2, (o * pauli::x()).trace().real() / 2,
            (o * pauli::y()).trace().real() / 2, (o * pauli::z()).trace().real() / 2};
}

nlohmann::json to_json(const QuantumConfig& config) {
    nlohmann::json settings = nlohmann::json::array();
    for (const auto& party : config.observables) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& o : party) {
            const auto c = pauli_coefficients(o);
            row.push_back({{"I", c[0]}, {"X", c[1]}, {"Y", c[2]}, {"Z", c[3]}});
        }
        settings.push_back(row);
    }
    nlohmann::json state = nlohmann::json::array();
    for (Eigen::Index i = 0; i < config.state.size(); ++i)
        state.push_back({config.state(i).real(), config.state(i).imag()});
    return {{"parties", config.parties}, {"settings", settings}, {"state", state}};
}

}  // namespace nld
