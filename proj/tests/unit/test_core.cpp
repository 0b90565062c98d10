#include <doctest.h>

#include "nld/behavior.hpp"
#include "nld/errors.hpp"
#include "nld/inequality.hpp"
#include "nld/json_io.hpp"
#include "nld/symmetry.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace nld;

namespace {

SymmetricInequality svetlichny() {
    return SymmetricInequality::two_setting(3, 4, {1, -1, -1, 1});
}

// Behavior on {1,2}^n from a callback per tuple.
template <class F>
Behavior full_behavior(const Scenario& s, F&& f) {
    std::vector<Rational> e(space_dimension(s, Space::FullCorrelation));
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = f(tuple_at(s, Space::FullCorrelation, i));
    return Behavior(s, Space::FullCorrelation, std::move(e));
}

int twos(const SettingTuple& t) { return static_cast<int>(std::count(t.begin(), t.end(), 2)); }

}  // namespace

TEST_CASE("rational parsing and primitive scaling") {
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational("-3/6") == Rational(-1, 2));
    CHECK(parse_rational("+7/1") == 7);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
    std::vector<Rational> v{Rational(1, 2), Rational(-3, 4), 0};
    auto ints = to_primitive_integers(v);
    CHECK(ints == std::vector<Integer>{2, -3, 0});
}

TEST_CASE("exact rank") {
    CHECK(exact_rank({{1, 2}, {2, 4}}) == 1);
    CHECK(exact_rank({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}) == 2);
    CHECK(exact_rank({{0, 0}, {0, 0}}) == 0);
    CHECK(exact_rank({{2, 1, 1}, {1, 3, 2}, {1, 0, 0}}) == 3);
}

TEST_CASE("scenario tuple indexing round trips") {
    for (int n = 2; n <= 4; ++n)
        for (int m = 2; m <= 3; ++m) {
            Scenario s(n, m);
            for (Space sp : {Space::FullCorrelation, Space::WithMarginals}) {
                const auto dim = space_dimension(s, sp);
                for (std::size_t i = 0; i < dim; ++i) CHECK(tuple_index(s, sp, tuple_at(s, sp, i)) == i);
            }
            CHECK(space_dimension(s, Space::FullCorrelation) == ipow(m, n));
            CHECK(space_dimension(s, Space::WithMarginals) == ipow(m + 1, n) - 1);
        }
    CHECK_THROWS_AS(Scenario(1, 2), InvalidArgument);
    CHECK_THROWS_AS(Scenario(3, 1), InvalidArgument);
}

TEST_CASE("expand_symmetric term counts") {
    SUBCASE("reference examples") {
        Scenario s(4, 2);
        MultisetIndex idx(s, Space::FullCorrelation);
        auto count_terms = [&](std::size_t cls) {
            std::vector<Rational> c(idx.size());
            c[cls] = 1;
            auto full = expand_symmetric(SymmetricInequality(s, Space::FullCorrelation, 0, c));
            return std::count(full.begin(), full.end(), Rational(1));
        };
        CHECK(count_terms(idx.find({0, 2, 2})) == 6);
        CHECK(count_terms(idx.find({0, 3, 1})) == 4);
        // the four tuples of (1112) are the placements of the single 2
        std::vector<Rational> c(idx.size());
        c[idx.find({0, 3, 1})] = 1;
        auto full = expand_symmetric(SymmetricInequality(s, Space::FullCorrelation, 0, c));
        std::set<SettingTuple> got;
        for (std::size_t i = 0; i < full.size(); ++i)
            if (full[i] == 1) got.insert(tuple_at(s, Space::FullCorrelation, i));
        CHECK(got == std::set<SettingTuple>{{1, 1, 1, 2}, {1, 1, 2, 1}, {1, 2, 1, 1}, {2, 1, 1, 1}});
        Scenario s3(3, 2);
        MultisetIndex idx3(s3, Space::FullCorrelation);
        std::vector<Rational> c3(idx3.size());
        c3[0] = 5;
        auto f3 = expand_symmetric(SymmetricInequality(s3, Space::FullCorrelation, 0, c3));
        CHECK(std::count(f3.begin(), f3.end(), Rational(5)) == 1);
    }
    SUBCASE("multinomial for n <= 6, m <= 3") {
        for (int n = 2; n <= 6; ++n)
            for (int m = 2; m <= 3; ++m)
                for (Space sp : {Space::FullCorrelation, Space::WithMarginals}) {
                    Scenario s(n, m);
                    MultisetIndex idx(s, sp);
                    std::map<std::size_t, std::size_t> seen;
                    for (auto cls : idx.tuple_classes()) ++seen[cls];
                    std::size_t total = 0;
                    for (std::size_t i = 0; i < idx.size(); ++i) {
                        const auto& counts = idx.counts(i);
                        std::size_t fact = 1, num = 1;
                        for (int k = 2; k <= n; ++k) num *= static_cast<std::size_t>(k);
                        for (int c : counts)
                            for (int k = 2; k <= c; ++k) fact *= static_cast<std::size_t>(k);
                        CHECK(seen[i] == num / fact);
                        CHECK(idx.class_size(i) == num / fact);
                        total += seen[i];
                    }
                    CHECK(total == space_dimension(s, sp));
                }
    }
}

TEST_CASE("evaluate: Svetlichny") {
    const auto svet = svetlichny();
    Scenario s(3, 2);
    CHECK(evaluate(svet, full_behavior(s, [](const SettingTuple&) { return Rational(1); })) == 0);
    auto vertex = full_behavior(s, [](const SettingTuple& t) {
        const int l = twos(t);
        return Rational(l == 0 || l == 3 ? -1 : 1);
    });
    CHECK(evaluate(svet, vertex) == -4);
    CHECK(evaluate(svet, Behavior::zero(s, Space::FullCorrelation)) == 4);

    // oracle: minimum over all 2^8 hypercube vertices
    Rational best = 100;
    for (unsigned bits = 0; bits < 256; ++bits) {
        auto b = full_behavior(s, [&](const SettingTuple& t) {
            return Rational((bits >> tuple_index(s, Space::FullCorrelation, t)) & 1 ? -1 : 1);
        });
        best = std::min(best, evaluate(svet, b));
    }
    CHECK(best == -4);
}

TEST_CASE("evaluate is linear in the behavior") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(-6, 6);
    Scenario s(3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        auto rnd = [&] {
            std::vector<Rational> e(space_dimension(s, Space::WithMarginals));
            for (auto& x : e) x = Rational(num(rng), 6);
            return Behavior(s, Space::WithMarginals, e);
        };
        MultisetIndex idx(s, Space::WithMarginals);
        std::vector<Rational> c(idx.size());
        for (auto& x : c) x = num(rng);
        SymmetricInequality ineq(s, Space::WithMarginals, num(rng), c);
        const auto b1 = rnd(), b2 = rnd();
        const Rational alpha(trial, 19);
        CHECK(evaluate(ineq, Behavior::mix(alpha, b1, b2)) ==
              alpha * evaluate(ineq, b1) + (1 - alpha) * evaluate(ineq, b2));
    }
}

TEST_CASE("probability-space correlators") {
    Scenario s(2, 2);
    // PR box: a*b = -1 iff x = y = 2
    std::vector<Rational> p(space_dimension(s, Space::Probability));
    for (std::size_t xi = 0; xi < 4; ++xi) {
        const auto x = tuple_at(s, Space::FullCorrelation, xi);
        const bool anti = x[0] == 2 && x[1] == 2;
        for (std::uint32_t a = 0; a < 4; ++a) {
            const bool differ = ((a ^ (a >> 1)) & 1) != 0;
            p[xi * 4 + a] = differ == anti ? Rational(1, 2) : Rational(0);
        }
    }
    Behavior pr(s, Space::Probability, p);
    CHECK(pr.correlator({1, 1}) == 1);
    CHECK(pr.correlator({2, 2}) == -1);
    CHECK(pr.correlator({1, 0}, MarginalConvention::UniformAverage) == 0);
    CHECK(pr.correlator({0, 2}, MarginalConvention::PartnerSettingOne) == 0);
    CHECK_THROWS_AS(pr.correlator({1, 0}, MarginalConvention::TrivialSetting), InvalidArgument);
    CHECK_THROWS_AS(Behavior(s, Space::FullCorrelation, {2, 0, 0, 0}), InvalidArgument);
    CHECK_THROWS_AS(Behavior(s, Space::FullCorrelation, {0, 0, 0}), DimensionMismatch);
}

TEST_CASE("text form round trip") {
    auto f4 = parse_inequality("+16 - (1112) -2 (1122) +3 (1222) +4 (2222) >= 0");
    CHECK(f4.constant() == 16);
    CHECK(f4.coeffs() == std::vector<Rational>{0, -1, -2, 3, 4});
    CHECK(f4.to_text() == "+16 - (1112) -2 (1122) +3 (1222) +4 (2222)");
    CHECK(parse_inequality(f4.to_text()) == f4);

    auto f1 = parse_inequality(
        "(100) - (111) + (211) + (221) - (222) + 2 (300) - (310) + (330) + (331) <= 13");
    CHECK(f1.space() == Space::WithMarginals);
    CHECK(f1.scenario() == Scenario(3, 3));
    CHECK(f1.constant() == 13);
    CHECK(f1.coefficient({2, 1, 0, 0}) == -1);
    CHECK(f1.coefficient({0, 0, 0, 3}) == 0);
    CHECK(parse_inequality(f1.to_text(), 3) == f1);
    CHECK_THROWS_AS(parse_inequality("4 + (11) - (111)"), ParseError);
    CHECK_THROWS_AS(parse_inequality("4"), ParseError);
}

TEST_CASE("json round trip") {
    auto f1 = parse_inequality(
        "(100) - (111) + (211) + (221) - (222) + 2 (300) - (310) + (330) + (331) <= 13");
    InequalityRecord rec{f1, {Rational(13), Rational(27), 14.5}, "(2,1)"};
    auto back = record_from_json(nlohmann::json::parse(to_json(rec).dump()));
    CHECK(back.inequality == f1);
    CHECK(*back.bounds.classical == 13);
    CHECK(*back.bounds.nosignaling == 27);
    CHECK(back.model == "(2,1)");
    CHECK_THROWS_AS(inequality_from_json(nlohmann::json::parse(R"({"n":3})")), ParseError);
}

TEST_CASE("canonicalize") {
    const SymmetryGroup g;
    const auto svet = svetlichny();
    const auto c = canonicalize(svet, g);
    CHECK(canonicalize(c, g) == c);

    SUBCASE("orbit invariance") {
        for (const auto& r : group_elements(g, svet.scenario(), true))
            CHECK(canonicalize(apply(r, svet), g) == c);
        auto x = parse_inequality("+8 + (1111) - (1112) - (1122) + (1222) + (2222)");
        for (const auto& r : group_elements(g, x.scenario(), true))
            CHECK(canonicalize(apply(r, x), g) == canonicalize(x, g));
    }
    SUBCASE("setting-swapped Svetlichny twin") {
        // 1 <-> 2 everywhere: (111) <-> (222), (112) <-> (122)
        auto twin = SymmetricInequality::two_setting(3, 4, {1, -1, -1, 1});
        twin = SymmetricInequality::two_setting(3, 4, {twin.coeffs()[3], twin.coeffs()[2],
                                                       twin.coeffs()[1], twin.coeffs()[0]});
        CHECK(canonicalize(twin, g) == c);
        auto other = SymmetricInequality::two_setting(3, 4, {1, 1, -1, -1});
        CHECK(canonicalize(other, g) == c);  // outcome flip of setting 1
        CHECK(canonicalize(other, SymmetryGroup::trivial()) != c);
    }
    SUBCASE("F4 and F5 display forms") {
        // F_n coefficients from the family formula, "<= n 2^(n-2)" form
        auto family = [](int n) {
            std::vector<Rational> by_l(n + 1);
            for (int l = 1; l <= n; ++l) {
                const int e = 1 + (l + 1) / 2;
                by_l[l] = (e % 2 == 0 ? 1 : -1) * l;
            }
            for (auto& x : by_l) x = -x;
            return SymmetricInequality::two_setting(n, n << (n - 2), by_l);
        };
        auto newine4 = parse_inequality("+16 - (1112) -2 (1122) +3 (1222) +4 (2222) >= 0");
        CHECK(canonicalize(family(4), g) == canonicalize(newine4, g));
        auto newine5 =
            parse_inequality("+40 + (11112) +2 (11122) -3 (11222) -4 (12222) +5 (22222) >= 0");
        CHECK(family(5) != newine5);
        CHECK(canonicalize(family(5), g) == canonicalize(newine5, g));
    }
    SUBCASE("non-equivalent inequalities stay apart") {
        auto mermin = parse_inequality("+4 - (1111) - (1112) + (1122) + (1222) - (2222)");
        auto newine4 = parse_inequality("+16 - (1112) -2 (1122) +3 (1222) +4 (2222)");
        CHECK(canonicalize(mermin, g) != canonicalize(newine4, g));
    }
}

TEST_CASE("Svetlichny is the sum of two CHSH expressions on the AB|C grouping") {
    const Scenario s(3, 2);
    const auto coeff = expand_symmetric(svetlichny());
    // [ab c] -> [X c] with X = 2(a-1) + b
    std::map<std::pair<int, int>, Rational> grouped;
    for (std::size_t i = 0; i < coeff.size(); ++i) {
        const auto t = tuple_at(s, Space::FullCorrelation, i);
        grouped[{2 * (t[0] - 1) + t[1], t[2]}] += coeff[i];
    }
    // 2 - [12] - [21] - [22] + [11] >= 0 and 2 - [31] + [42] - [41] - [32] >= 0
    std::map<std::pair<int, int>, Rational> chsh{{{1, 2}, -1}, {{2, 1}, -1}, {{2, 2}, -1},
                                                 {{1, 1}, 1},  {{3, 1}, -1}, {{4, 2}, 1},
                                                 {{4, 1}, -1}, {{3, 2}, -1}};
    CHECK(grouped == chsh);
    CHECK(svetlichny().constant() == 2 + 2);
}
