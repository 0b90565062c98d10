#include <doctest.h>

#include "nld/errors.hpp"
#include "nld/family.hpp"
#include "nld/models.hpp"

#include <cmath>
#include <numbers>

using namespace nld;

TEST_CASE("family_inequality") {
    const auto f3 = family_inequality(3);
    CHECK(f3.coeffs == std::vector<std::int64_t>{0, 1, 2, -3});
    CHECK(f3.bound == 6);
    // direct formula (-1)^(1 + ceil(l/2)) l
    for (int n = 3; n <= 12; ++n) {
        const auto f = family_inequality(n);
        for (int l = 1; l <= n; ++l) {
            const int ceil_half = (l + 1) / 2;
            CHECK(f.coeffs[l] == static_cast<std::int64_t>(std::pow(-1.0, 1 + ceil_half)) * l);
        }
        CHECK(f.bound == n * (std::int64_t{1} << (n - 2)));
    }
    const auto f4 = family_inequality(4).inequality();
    CHECK(f4 == parse_inequality("+16 - (1112) -2 (1122) +3 (1222) +4 (2222)"));
    CHECK(f4 == parse_inequality("(1112) + 2 (1122) - 3 (1222) - 4 (2222) <= 16"));
    const auto newine5 = parse_inequality("+40 + (11112) +2 (11122) -3 (11222) -4 (12222) +5 (22222)");
    const auto f5 = family_inequality(5).inequality();
    CHECK(f5.constant() == 40);
    const auto r5 = relabeling_to(f5, newine5);
    REQUIRE(r5.has_value());
    CHECK(r5->negate);
    CHECK(relabeling_to(f4, f4).has_value());
    CHECK_THROWS_AS(family_inequality(2), InvalidArgument);
}

TEST_CASE("gamma_bound") {
    CHECK(gamma_bound(2, 2) == 16);
    CHECK(gamma_bound(3, 2) == 40);
    for (int n = 3; n <= 12; ++n)
        for (int k = 1; k < n; ++k) {
            const int m = n - k;
            const std::int64_t b = gamma_bound(k, m);
            CHECK(b == gamma_bound(m, k));
            if (n <= 10) CHECK(b == gamma_bound_exhaustive(k, m));
            if (k >= 2 && m >= 2) {
                CHECK(b == n * (std::int64_t{1} << (n - 2)));
                CHECK(achievability_check(k, m) == b);
            } else {
                CHECK(b > n * (std::int64_t{1} << (n - 2)));
            }
        }
    // the closed form n 2^(n-2) needs both blocks of size >= 2; with a single party the
    // double sum is n 2^(n-1) - 2 sum_{i,j even} (i+j) C(k,i) C(m,j)
    CHECK(achievability_check(1, 1) == 4);
    CHECK(achievability_check(1, 2) == 8);
    CHECK(achievability_check(1, 3) == 4 * 8 - 2 * 6);
    CHECK_THROWS_AS(gamma_bound(20, 11), CapExceeded);
}

TEST_CASE("gamma reduction agrees with the hybrid-model bound") {
    for (int n = 3; n <= 6; ++n) {
        const auto f = family_inequality(n).inequality();
        for (int k = n - 1; k >= (n + 1) / 2; --k) {
            const CardinalityTuple h{k, n - k};
            CHECK(classical_bound_direct(f, h) == gamma_bound(k, n - k));
            if (n <= 4) CHECK(classical_bound(f, extremal_behaviors(Scenario(n, 2), h, Space::FullCorrelation)) ==
                              gamma_bound(k, n - k));
        }
    }
}

TEST_CASE("m2_proof_check") {
    const auto M = proof_matrix(2, 2);
    CHECK(M == std::vector<std::vector<std::int64_t>>{{0, 2, -2}, {2, 8, 6}, {-2, 6, -4}});
    int term = 0;
    for (const auto& row : M)
        for (auto x : row) term += static_cast<int>(x);
    CHECK(term == 16);
    // k = 1 is the (2,1) model, where the bound fails: column 0 does not vanish
    const auto one = m2_proof_check(1);
    CHECK(one.row_identity);
    CHECK_FALSE(one.columns_vanish);
    CHECK(one.best_flip > 6);
    CHECK(gamma_bound(1, 2) == one.best_flip);
    for (int k = 2; k <= 12; ++k) {
        const auto pc = m2_proof_check(k);
        CHECK(pc.ok());
        CHECK(pc.total == (k + 2) * (std::int64_t{1} << k));
        CHECK(pc.best_flip == pc.total);
    }
}

TEST_CASE("family_quantum") {
    for (int n = 3; n <= 8; ++n) {
        const auto fq = family_quantum(n);
        CHECK(std::abs(fq.value - std::numbers::sqrt2 * n * (1 << (n - 2))) < 1e-8);
    }
    CHECK_THROWS_AS(family_quantum(9), CapExceeded);
    SeesawOptions opt;
    opt.restarts = 6;
    for (int n = 3; n <= 4; ++n)
        CHECK(seesaw_max(family_inequality(n).inequality(), std::nullopt, opt).value ==
              doctest::Approx(family_quantum(n).value).epsilon(1e-8));
}

TEST_CASE("optimal_state") {
    for (int n = 3; n <= 8; ++n) {
        const auto r = check_optimal_state(n);
        CAPTURE(n);
        CHECK(r.identity_coefficient_one);
        CHECK(std::abs(r.trace - 1) < 1e-12);
        CHECK(r.hermiticity < 1e-12);
        CHECK(r.min_eigenvalue > -1e-10);
        CHECK(std::abs(r.purity - 1) < 1e-10);
        CHECK(std::abs(r.bell_value - std::numbers::sqrt2 * n * (1 << (n - 2))) < 1e-8);
        CHECK(std::abs(r.top_space_weight - 1) < 1e-8);
    }
    CHECK_THROWS_AS(optimal_state(9), InvalidArgument);
}
