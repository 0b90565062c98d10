#include <doctest.h>

#include "nld/errors.hpp"
#include "nld/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace nld;

namespace {

const double sqrt2 = std::numbers::sqrt2;

double top_eigenvalue(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    return es.eigenvalues().maxCoeff();
}

Qubit in_plane(double phi) { return std::cos(phi) * pauli::x() + std::sin(phi) * pauli::y(); }

// tensor product with party 0 as the least significant bit, written independently of
// bell_operator
CMatrix kron_all(const std::vector<Qubit>& ops) {
    CMatrix acc = CMatrix::Identity(1, 1);
    for (const auto& o : ops) {
        CMatrix next = CMatrix::Zero(acc.rows() * 2, acc.cols() * 2);
        for (Eigen::Index i = 0; i < acc.rows(); ++i)
            for (Eigen::Index j = 0; j < acc.cols(); ++j)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) next(a * acc.rows() + i, b * acc.cols() + j) = o(a, b) * acc(i, j);
        acc = next;
    }
    return acc;
}

const auto svetlichny = SymmetricInequality::two_setting(3, 4, {1, -1, -1, 1});
const auto chsh = SymmetricInequality::two_setting(2, 2, {-1, -1, 1});
const auto mermin4 = parse_inequality("+4 - (1111) - (1112) + (1122) + (1222) - (2222)");
const auto f4 = parse_inequality("+16 - (1112) -2 (1122) +3 (1222) +4 (2222)");

}  // namespace

TEST_CASE("bell_operator") {
    const auto cfg = QuantumConfig::uniform(3, {pauli::x(), pauli::y()});
    cfg.validate();
    const CMatrix b = bell_operator(svetlichny, cfg);
    CHECK((b - b.adjoint()).norm() < 1e-12);
    // against a direct tensor sum
    CMatrix direct = CMatrix::Zero(8, 8);
    const double c[4] = {-1, 1, 1, -1};
    for (int t = 0; t < 8; ++t) {
        std::vector<Qubit> ops;
        int l = 0;
        for (int k = 0; k < 3; ++k) {
            const bool two = t >> k & 1;
            ops.push_back(two ? pauli::y() : pauli::x());
            l += two;
        }
        direct += c[l] * kron_all(ops);
    }
    CHECK((b - direct).norm() < 1e-12);
    const auto zero = SymmetricInequality::two_setting(3, 0, {0, 0, 0, 0});
    CHECK(bell_operator(zero, cfg).norm() == 0);
    CHECK_THROWS_AS(bell_operator(svetlichny, QuantumConfig::uniform(2, {pauli::x(), pauli::y()})), DimensionMismatch);

    SUBCASE("Svetlichny reaches 4 sqrt 2 for suitable in-plane settings") {
        // oracle: scan equal in-plane settings for all parties
        double best = 0;
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j) {
                const auto c2 = QuantumConfig::uniform(3, {in_plane(i * std::numbers::pi / 32),
                                                           in_plane(j * std::numbers::pi / 32)});
                best = std::max(best, top_eigenvalue(bell_operator(svetlichny, c2)));
            }
        CHECK(best == doctest::Approx(4 * sqrt2).epsilon(1e-9));
    }
    SUBCASE("F_n with sigma_x / sigma_z") {
        for (int n = 3; n <= 6; ++n) {
            std::vector<Rational> c(n + 1);
            for (int l = 1; l <= n; ++l) c[l] = -(((l + 1) / 2) % 2 == 1 ? -1 : 1) * l;
            // c_l of the ">= 0" form is minus the "<= bound" coefficient (-1)^(1+ceil(l/2)) l
            for (int l = 1; l <= n; ++l) c[l] = -(((1 + (l + 1) / 2) % 2 == 0) ? 1 : -1) * l;
            const auto fam = SymmetricInequality::two_setting(n, n * (1 << (n - 2)), c);
            const auto xz = QuantumConfig::uniform(n, {pauli::x(), pauli::z()});
            CHECK(top_eigenvalue(bell_operator(fam, xz)) == doctest::Approx(sqrt2 * n * (1 << (n - 2))).epsilon(1e-12));
        }
    }
}

TEST_CASE("expectation engines agree") {
    const auto marg = SymmetricInequality(Scenario(3, 2), Space::WithMarginals, 3,
                                          {1, -2, 1, 1, 0, -1, 2, 1, -1});
    for (const auto* ineq : {&svetlichny, &marg}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto cfg = random_config(3, 2, seed);
            cfg.validate();
            const CMatrix b = bell_operator(*ineq, cfg);
            for (double p : {0.0, 0.3, 1.0}) {
                const NoisyGHZ rho{3, p};
                const double dense = (rho.density() * b).trace().real();
                CHECK(expectation(*ineq, cfg, FixedState::noisy_ghz(3, p)) == doctest::Approx(dense).epsilon(1e-12));
                CHECK(expectation(*ineq, cfg, FixedState::density(rho.density())) ==
                      doctest::Approx(dense).epsilon(1e-10));
            }
            // linear in p for fixed observables
            const double g = expectation(*ineq, cfg, FixedState::noisy_ghz(3, 0));
            const double w = expectation(*ineq, cfg, FixedState::noisy_ghz(3, 1));
            CHECK(expectation(*ineq, cfg, FixedState::noisy_ghz(3, 0.4)) == doctest::Approx(0.6 * g + 0.4 * w));
            if (ineq->is_full_body()) CHECK(std::abs(w) < 1e-12);
            CVector psi = CVector::Random(8).normalized();
            CHECK(expectation(*ineq, cfg, FixedState::pure(psi)) ==
                  doctest::Approx((psi.adjoint() * b * psi)(0).real()).epsilon(1e-12));
        }
    }
}

TEST_CASE("seesaw_max") {
    SeesawOptions opt;
    opt.restarts = 10;
    const auto r2 = seesaw_max(chsh, std::nullopt, opt);
    CHECK(r2.value == doctest::Approx(2 * sqrt2).epsilon(1e-9));
    CHECK(r2.monotone);
    const auto r3 = seesaw_max(svetlichny, std::nullopt, opt);
    CHECK(std::abs(r3.value - 4 * sqrt2) < 1e-6);
    CHECK(r3.monotone);
    CHECK(r3.converged);
    r3.config.validate();
    // the returned state and observables reproduce the value
    CHECK(expectation(svetlichny, r3.config, FixedState::pure(r3.config.state)) == doctest::Approx(r3.value));

    const auto rm = seesaw_max(mermin4, FixedState::noisy_ghz(4, 0), opt);
    CHECK(rm.value == doctest::Approx(8 * sqrt2).epsilon(1e-8));
    CHECK(rm.monotone);
    const auto rf = seesaw_max(f4, std::nullopt, opt);
    CHECK(rf.value == doctest::Approx(16 * sqrt2).epsilon(1e-8));

    SUBCASE("reproducible from the seed") {
        const auto again = seesaw_max(svetlichny, std::nullopt, opt);
        CHECK(again.seed == r3.seed);
        CHECK(again.value == r3.value);
        SeesawOptions par = opt;
        par.jobs = 4;
        CHECK(seesaw_max(svetlichny, std::nullopt, par).value == r3.value);
    }
}

TEST_CASE("violation_at and critical_interval") {
    SeesawOptions opt;
    opt.restarts = 8;
    CHECK(violation_at(svetlichny, 0, opt) == doctest::Approx(4 * sqrt2 - 4).epsilon(1e-9));
    CHECK(violation_at(svetlichny, 1, opt) == doctest::Approx(-4));
    CHECK(std::abs(violation_at(f4, 1 - 1 / sqrt2, opt)) < 1e-3);

    RobustnessOptions ro;
    ro.seesaw = opt;
    const auto mi = critical_interval(mermin4, ro);
    REQUIRE_FALSE(mi.empty);
    const double exact = 1 - 4 / (8 * sqrt2);
    CHECK(mi.p0 <= exact);
    CHECK(mi.p1 >= exact);
    CHECK(mi.p1 - mi.p0 < 1e-4);
    CHECK(mi.reruns == 0);

    const auto positivity = parse_inequality("+1 + (111)");
    CHECK(critical_interval(positivity, ro).empty);
}

TEST_CASE("pauli decomposition and JSON") {
    const Qubit o = (pauli::x() + pauli::z()) / sqrt2;
    const auto c = pauli_coefficients(o);
    CHECK(c[0] == doctest::Approx(0));
    CHECK(c[1] == doctest::Approx(1 / sqrt2));
    CHECK(c[3] == doctest::Approx(1 / sqrt2));
    auto cfg = QuantumConfig::uniform(2, {o, pauli::y()});
    cfg.state = NoisyGHZ::ghz(2);
    const auto j = to_json(cfg);
    CHECK(j["settings"][1][1]["Y"].get<double>() == doctest::Approx(1));
    CHECK(j["state"].size() == 4);
    QuantumConfig bad = QuantumConfig::uniform(1, {2 * pauli::x()});
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}
