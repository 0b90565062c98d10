#include <doctest.h>

#include "nld/errors.hpp"
#include "nld/lp.hpp"

#include <random>
#include <sstream>

using namespace nld;

namespace {

LinearProgram lp_from(std::vector<Rational> obj, std::vector<LpRow> rows) {
    LinearProgram lp(obj.size());
    lp.objective = std::move(obj);
    lp.rows = std::move(rows);
    return lp;
}

// Oracle for two-variable LPs with x >= 0: the optimum sits on an intersection of two
// constraint lines (axes included).
std::optional<Rational> brute_force_2d(const LinearProgram& lp) {
    std::vector<std::array<Rational, 3>> lines;  // a x + b y = c
    for (const auto& r : lp.rows) lines.push_back({r.coeffs[0], r.coeffs[1], r.rhs});
    lines.push_back({1, 0, 0});
    lines.push_back({0, 1, 0});
    std::optional<Rational> best;
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            const auto& p = lines[i];
            const auto& q = lines[j];
            const Rational det = p[0] * q[1] - p[1] * q[0];
            if (det == 0) continue;
            const Rational x = (p[2] * q[1] - p[1] * q[2]) / det;
            const Rational y = (p[0] * q[2] - p[2] * q[0]) / det;
            bool ok = x >= 0 && y >= 0;
            for (const auto& r : lp.rows) {
                const Rational v = r.coeffs[0] * x + r.coeffs[1] * y;
                ok = ok && (r.relation == Relation::LessEqual ? v <= r.rhs
                            : r.relation == Relation::GreaterEqual ? v >= r.rhs
                                                                   : v == r.rhs);
            }
            if (!ok) continue;
            const Rational val = lp.objective[0] * x + lp.objective[1] * y;
            if (!best || val > *best) best = val;
        }
    return best;
}

}  // namespace

TEST_CASE("simplex_max small programs") {
    auto a = lp_from({1}, {{{1}, Relation::LessEqual, 3}});
    auto ra = simplex_max(a);
    CHECK(ra.status == LpStatus::Optimal);
    CHECK(ra.optimum == 3);
    CHECK(verify_certificate(a, ra));

    auto b = lp_from({1, 1}, {{{1, 1}, Relation::LessEqual, 1}});
    auto rb = simplex_max(b);
    CHECK(rb.optimum == 1);
    CHECK(verify_certificate(b, rb));

    auto infeasible = lp_from({1, 0}, {{{1, 1}, Relation::LessEqual, 1}, {{1, 0}, Relation::GreaterEqual, 2}});
    CHECK(simplex_max(infeasible).status == LpStatus::Infeasible);
    auto unbounded = lp_from({1, -1}, {{{1, -1}, Relation::GreaterEqual, -1}});
    CHECK(simplex_max(unbounded).status == LpStatus::Unbounded);

    SUBCASE("free variables, bounds and redundant equalities") {
        LinearProgram lp(3);
        lp.objective = {-1, 2, 1};
        lp.lower[0].reset();
        lp.lower[1] = Rational(-2);
        lp.upper[1] = Rational(5, 2);
        lp.upper[2] = Rational(1);
        lp.add_row({1, 1, 0}, Relation::Equal, 1);
        lp.add_row({2, 2, 0}, Relation::Equal, 2);
        lp.add_row({1, 0, 1}, Relation::GreaterEqual, Rational(-7, 3));
        const auto r = simplex_max(lp);
        REQUIRE(r.status == LpStatus::Optimal);
        // x1 = 5/2, x0 = -3/2, x2 = 1
        CHECK(r.optimum == Rational(3, 2) + 5 + 1);
        CHECK(verify_certificate(lp, r));
    }
    SUBCASE("degenerate program that cycles under the textbook rule") {
        auto beale = lp_from({Rational(3, 4), -150, Rational(1, 50), -6},
                             {{{Rational(1, 4), -60, Rational(-1, 25), 9}, Relation::LessEqual, 0},
                              {{Rational(1, 2), -90, Rational(-1, 50), 3}, Relation::LessEqual, 0},
                              {{0, 0, 1, 0}, Relation::LessEqual, 1}});
        const auto r = simplex_max(beale);
        CHECK(r.status == LpStatus::Optimal);
        CHECK(r.optimum == Rational(1, 20));
        CHECK(verify_certificate(beale, r));
    }
}

TEST_CASE("simplex_max agrees with vertex enumeration on random 2D programs") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coef(-6, 6), rel(0, 4);
    int optimal = 0;
    for (int trial = 0; trial < 300; ++trial) {
        LinearProgram lp(2);
        lp.objective = {coef(rng), coef(rng)};
        lp.add_row({1, 1}, Relation::LessEqual, 20);  // keeps the region bounded
        for (int k = 0; k < 4; ++k) {
            const int r = rel(rng);
            lp.add_row({coef(rng), coef(rng)},
                       r == 0 ? Relation::Equal : r == 1 ? Relation::GreaterEqual : Relation::LessEqual, coef(rng));
        }
        const auto res = simplex_max(lp);
        const auto oracle = brute_force_2d(lp);
        if (!oracle) {
            CHECK(res.status == LpStatus::Infeasible);
            continue;
        }
        REQUIRE(res.status == LpStatus::Optimal);
        CHECK(res.optimum == *oracle);
        CHECK(verify_certificate(lp, res));
        ++optimal;
    }
    CHECK(optimal > 25);
}

TEST_CASE("ColumnLp matches simplex_max as columns are added") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> coef(-4, 4);
    int optimal = 0, infeasible = 0, unbounded = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t rows = 2 + trial % 3, cols = 8;
        std::vector<Rational> b(rows);
        for (auto& v : b) v = coef(rng);
        std::vector<std::vector<Rational>> a(cols, std::vector<Rational>(rows));
        std::vector<Rational> c(cols);
        for (std::size_t j = 0; j < cols; ++j) {
            for (auto& v : a[j]) v = coef(rng);
            c[j] = coef(rng);
        }
        // a duplicated row makes the system rank deficient in some trials
        if (trial % 5 == 0) {
            b[1] = b[0];
            for (auto& col : a) col[1] = col[0];
        }
        ColumnLp inc(b);
        for (std::size_t added = 0; added < cols; added += 3) {
            for (std::size_t j = added; j < std::min(cols, added + 3); ++j) inc.add_column(a[j], c[j]);
            const std::size_t have = std::min(cols, added + 3);
            LinearProgram lp(have);
            for (std::size_t j = 0; j < have; ++j) lp.objective[j] = c[j];
            for (std::size_t i = 0; i < rows; ++i) {
                std::vector<Rational> row(have);
                for (std::size_t j = 0; j < have; ++j) row[j] = a[j][i];
                lp.add_row(std::move(row), Relation::Equal, b[i]);
            }
            const auto ref = simplex_max(lp);
            const auto st = inc.solve();
            REQUIRE(st == ref.status);
            if (st == LpStatus::Infeasible) {
                ++infeasible;
                break;
            }
            if (st == LpStatus::Unbounded) {
                ++unbounded;
                break;
            }
            ++optimal;
            CHECK(inc.objective() == ref.optimum);
            const auto x = inc.x();
            const auto y = inc.duals();
            Rational obj = 0, dual = 0;
            for (std::size_t i = 0; i < rows; ++i) {
                Rational ax = 0;
                for (std::size_t j = 0; j < have; ++j) ax += a[j][i] * x[j];
                CHECK(ax == b[i]);
                dual += y[i] * b[i];
            }
            for (std::size_t j = 0; j < have; ++j) {
                CHECK(x[j] >= 0);
                obj += c[j] * x[j];
                Rational ya = 0;
                for (std::size_t i = 0; i < rows; ++i) ya += y[i] * a[j][i];
                CHECK(c[j] - ya <= 0);
            }
            CHECK(obj == ref.optimum);
            CHECK(dual == ref.optimum);
        }
    }
    CHECK(optimal > 25);
    CHECK(infeasible > 0);
    CHECK(unbounded > 0);
}

TEST_CASE("LP text format") {
    LinearProgram lp(2);
    lp.objective = {Rational(1, 2), -3};
    lp.lower[0].reset();
    lp.upper[1] = Rational(4);
    lp.add_row({1, -1}, Relation::GreaterEqual, Rational(-5, 7));
    lp.add_row({0, 2}, Relation::Equal, 1);
    std::stringstream ss;
    write_lp(ss, lp);
    const auto back = read_lp(ss);
    CHECK(back.objective == lp.objective);
    CHECK(back.lower == lp.lower);
    CHECK(back.upper == lp.upper);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0].relation == Relation::GreaterEqual);
    CHECK(back.rows[0].rhs == Rational(-5, 7));
    std::stringstream bad("lp 2 1\nmax 1 1\nrow 1 1 << 2\nend\n");
    CHECK_THROWS_AS(read_lp(bad), ParseError);
}

TEST_CASE("no-signaling bounds") {
    const auto svet = SymmetricInequality::two_setting(3, 4, {1, -1, -1, 1});
    CHECK(hypercube_bound(svet) == 8);
    CHECK(nosignaling_bound(svet) == 8);
    const auto lp = nosignaling_lp(svet);
    const auto res = simplex_max(lp);
    CHECK(res.optimum == 8);
    CHECK(verify_certificate(lp, res));

    const auto f4 = parse_inequality("+16 - (1112) -2 (1122) +3 (1222) +4 (2222)");
    CHECK(hypercube_bound(f4) == 32);
    CHECK(nosignaling_bound(f4) == 32);
    const auto g = parse_inequality("+4 - (1112) + (1222)");
    CHECK(hypercube_bound(g) == 8);
    CHECK(nosignaling_bound(g) == 8);
    CHECK(nosignaling_bound_full(g) == 8);

    SUBCASE("chsh with marginals") {
        // 2 + <A1> + <B1> - <A1B1> - <A1B2> - <A2B1> + <A2B2> ... reaches 4 only with PR-type boxes
        const auto chsh = SymmetricInequality::two_setting(2, 2, {-1, -1, 1});
        CHECK(nosignaling_bound(chsh) == 4);
        const SymmetricInequality marg(Scenario(2, 2), Space::WithMarginals, 0, {-1, 0, 1, 0, 0});
        CHECK(nosignaling_bound(marg) == nosignaling_bound_full(marg));
    }
}

TEST_CASE("symmetric and full no-signaling LPs agree") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> coef(-4, 4);
    for (const auto& [n, m, space] : std::vector<std::tuple<int, int, Space>>{
             {3, 2, Space::FullCorrelation}, {2, 3, Space::WithMarginals}, {3, 2, Space::WithMarginals},
             {2, 2, Space::WithMarginals}}) {
        const MultisetIndex idx(Scenario(n, m), space);
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<Rational> c(idx.size());
            for (auto& x : c) x = coef(rng);
            const SymmetricInequality ineq(Scenario(n, m), space, 0, c);
            const Rational sym = nosignaling_bound(ineq);
            CHECK(sym == nosignaling_bound_full(ineq));
            if (ineq.is_full_body()) CHECK(sym == hypercube_bound(ineq));
        }
    }
}
