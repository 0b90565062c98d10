#include <doctest.h>

#include "nld/errors.hpp"
#include "nld/models.hpp"

#include <algorithm>
#include <set>
#include <sstream>

using namespace nld;

namespace {

// Brute-force oracle: every party outputs an arbitrary function of its cell's settings.
// Returns the set of distinct correlator vectors over the requested space; for marginal
// spaces a trivial setting is an ordinary input and the party's outcome is dropped.
std::set<std::vector<int>> brute_force(const Scenario& s, const Partition& p, Space space) {
    const bool marginals = space == Space::WithMarginals;
    const int base = marginals ? s.settings + 1 : s.settings;
    std::vector<int> cell_of(static_cast<std::size_t>(s.parties));
    for (std::size_t c = 0; c < p.cells.size(); ++c)
        for (int k : p.cells[c]) cell_of[k] = static_cast<int>(c);
    std::vector<std::size_t> inputs(s.parties), offset(s.parties);
    std::size_t bits = 0;
    for (int k = 0; k < s.parties; ++k) {
        inputs[k] = ipow(static_cast<std::size_t>(base), static_cast<int>(p.cells[cell_of[k]].size()));
        offset[k] = bits;
        bits += inputs[k];
    }
    REQUIRE(bits < 26);
    std::set<std::vector<int>> out;
    const std::size_t dim = space_dimension(s, space);
    for (std::uint64_t f = 0; f < (std::uint64_t{1} << bits); ++f) {
        std::vector<int> v(dim);
        for (std::size_t t = 0; t < dim; ++t) {
            const auto x = tuple_at(s, space, t);
            int prod = 1;
            for (int k = 0; k < s.parties; ++k) {
                if (x[k] == 0) continue;
                std::size_t l = 0, mul = 1;
                for (int j : p.cells[cell_of[k]]) {
                    l += static_cast<std::size_t>(marginals ? x[j] : x[j] - 1) * mul;
                    mul *= static_cast<std::size_t>(base);
                }
                if ((f >> (offset[k] + l)) & 1u) prod = -prod;
            }
            v[t] = prod;
        }
        out.insert(v);
    }
    return out;
}

std::set<std::vector<int>> as_set(const HybridModel& m) {
    std::set<std::vector<int>> out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto r = m.row(i);
        out.insert(std::vector<int>(r.begin(), r.end()));
    }
    return out;
}

std::size_t partition_count_oracle(int n, const CardinalityTuple& h) {
    // label each party with a cell id, keep canonical labelings (restricted growth strings)
    std::size_t count = 0;
    std::vector<int> label(static_cast<std::size_t>(n));
    const std::size_t k = h.size();
    std::size_t total = ipow(k, n);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t r = code;
        for (auto& l : label) {
            l = static_cast<int>(r % k);
            r /= k;
        }
        int next = 0;
        bool canonical = true;
        for (int l : label) {
            if (l > next) canonical = false;
            if (l == next) ++next;
        }
        if (!canonical || next != static_cast<int>(k)) continue;
        std::vector<int> sizes(k, 0);
        for (int l : label) ++sizes[l];
        std::sort(sizes.rbegin(), sizes.rend());
        if (sizes == h) ++count;
    }
    return count;
}

SymmetricInequality svetlichny() { return SymmetricInequality::two_setting(3, 4, {1, -1, -1, 1}); }

SymmetricInequality family(int n) {
    std::vector<Rational> by_l(n + 1);
    for (int l = 1; l <= n; ++l) by_l[l] = -(((1 + (l + 1) / 2) % 2 == 0) ? l : -l);
    return SymmetricInequality::two_setting(n, n << (n - 2), by_l);
}

}  // namespace

TEST_CASE("cardinality tuples") {
    CHECK(parse_cardinality_tuple("2,2,1") == CardinalityTuple{2, 2, 1});
    CHECK(parse_cardinality_tuple("(1,3)") == CardinalityTuple{3, 1});
    CHECK(to_string(CardinalityTuple{4, 1}) == "(4,1)");
    CHECK_THROWS_AS(parse_cardinality_tuple("2;2"), ParseError);
    CHECK_THROWS_AS(validate_cardinality_tuple(4, {2, 1}), InvalidArgument);
    CHECK(cardinality_tuples(4).size() == 5);
    CHECK(cardinality_tuples(5).size() == 7);
    CHECK(cardinality_tuples(4).front() == CardinalityTuple{4});
}

TEST_CASE("partitions_of_type") {
    CHECK(partitions_of_type(3, {2, 1}).size() == 3);
    CHECK(partitions_of_type(4, {2, 2}).size() == 3);
    CHECK(partitions_of_type(5, {2, 2, 1}).size() == 15);
    for (int n = 2; n <= 7; ++n)
        for (const auto& h : cardinality_tuples(n)) {
            const auto parts = partitions_of_type(n, h);
            CHECK(parts.size() == partition_count_oracle(n, h));
            std::set<std::set<std::set<int>>> distinct;
            for (const auto& p : parts) {
                std::set<std::set<int>> cells;
                for (std::size_t c = 0; c < p.cells.size(); ++c) {
                    CHECK(static_cast<int>(p.cells[c].size()) == h[c]);
                    cells.insert(std::set<int>(p.cells[c].begin(), p.cells[c].end()));
                }
                distinct.insert(cells);
            }
            CHECK(distinct.size() == parts.size());
        }
}

TEST_CASE("extremal behaviors: counts and brute-force oracle") {
    const Scenario s3(3, 2), s4(4, 2);
    CHECK(extremal_behaviors(s3, {1, 1, 1}, Space::FullCorrelation).size() == 16);
    CHECK(extremal_behaviors(s4, {1, 1, 1, 1}, Space::FullCorrelation).size() == 32);
    for (const auto& p : partitions_of_type(3, {2, 1})) CHECK(brute_force(s3, p, Space::FullCorrelation).size() == 32);

    for (const auto& [s, h] : std::vector<std::pair<Scenario, CardinalityTuple>>{
             {s3, {2, 1}}, {s3, {1, 1, 1}}, {s4, {2, 2}}, {s4, {2, 1, 1}}, {Scenario(3, 3), {2, 1}}}) {
        std::set<std::vector<int>> oracle;
        for (const auto& p : partitions_of_type(s.parties, h)) {
            auto part = brute_force(s, p, Space::FullCorrelation);
            oracle.insert(part.begin(), part.end());
        }
        CHECK(as_set(extremal_behaviors(s, h, Space::FullCorrelation)) == oracle);
    }
    SUBCASE("marginals with the trivial setting as a cell input") {
        for (const auto& h : {CardinalityTuple{2, 1}, CardinalityTuple{1, 1, 1}}) {
            std::set<std::vector<int>> oracle;
            for (const auto& p : partitions_of_type(3, h)) {
                auto part = brute_force(s3, p, Space::WithMarginals);
                oracle.insert(part.begin(), part.end());
            }
            CHECK(as_set(extremal_behaviors(s3, h, Space::WithMarginals)) == oracle);
        }
    }
}

TEST_CASE("marginal conventions") {
    const Scenario s(3, 2);
    const auto trivial = extremal_behaviors(s, {2, 1}, Space::WithMarginals);
    ModelOptions one;
    one.convention = MarginalConvention::PartnerSettingOne;
    const auto partner = extremal_behaviors(s, {2, 1}, Space::WithMarginals, one);
    const auto t = as_set(trivial);
    for (const auto& v : as_set(partner)) CHECK(t.count(v) == 1);
    ModelOptions avg;
    avg.convention = MarginalConvention::UniformAverage;
    const auto uniform = extremal_behaviors(s, {2, 1}, Space::WithMarginals, avg);
    CHECK(uniform.denominator() == 2);
    // averaged tables lie in the convex hull of the trivial-setting ones
    MultisetIndex idx(s, Space::WithMarginals);
    for (std::size_t cls = 0; cls < idx.size(); ++cls)
        for (int sign : {-1, 1}) {
            std::vector<Rational> c(idx.size());
            c[cls] = sign;
            c[(cls * 7 + 3) % idx.size()] += 2 * sign;
            SymmetricInequality ineq(s, Space::WithMarginals, 0, c);
            CHECK(classical_bound(ineq, uniform) <= classical_bound(ineq, trivial));
            CHECK(classical_bound(ineq, partner) <= classical_bound(ineq, trivial));
        }
    // single-party cells agree in every convention
    CHECK(as_set(extremal_behaviors(s, {1, 1, 1}, Space::WithMarginals, avg)) ==
          as_set(extremal_behaviors(s, {1, 1, 1}, Space::WithMarginals)));
}

TEST_CASE("probability-space vertices") {
    const Scenario s(2, 2);
    const auto local = extremal_behaviors(s, {1, 1}, Space::Probability);
    CHECK(local.size() == 16);
    CHECK(extremal_behaviors(s, {2}, Space::Probability).size() == 256);
    // their full correlators are exactly the local correlation vertices
    std::set<std::vector<int>> corr;
    for (std::size_t i = 0; i < local.size(); ++i) {
        const auto b = local.behavior(i);
        std::vector<int> v;
        for (std::size_t t = 0; t < 4; ++t)
            v.push_back(b.correlator(tuple_at(s, Space::FullCorrelation, t)).convert_to<int>());
        corr.insert(v);
    }
    CHECK(corr == as_set(extremal_behaviors(s, {1, 1}, Space::FullCorrelation)));
}

TEST_CASE("classical bounds") {
    const Scenario s3(3, 2), s4(4, 2);
    const auto svet = svetlichny();
    CHECK(classical_bound(svet, extremal_behaviors(s3, {2, 1}, Space::FullCorrelation)) == 4);
    CHECK(classical_bound(svet, extremal_behaviors(s3, {1, 1, 1}, Space::FullCorrelation)) == 4);
    CHECK(classical_bound(family(4), extremal_behaviors(s4, {2, 2}, Space::FullCorrelation)) == 16);
    CHECK(classical_bound(svet, extremal_behaviors(s3, {3}, Space::FullCorrelation)) == 8);
    CHECK_THROWS_AS(classical_bound(svet, HybridModel(s3, {3}, Space::FullCorrelation,
                                                      MarginalConvention::TrivialSetting,
                                                      std::vector<std::uint64_t>{})),
                    InvalidArgument);

    SUBCASE("monotone along coarsening, vertex inclusion, single cell is the hypercube") {
        std::vector<SymmetricInequality> probes{
            family(4), parse_inequality("+4 - (1111) - (1112) + (1122) + (1222) - (2222)"),
            parse_inequality("+8 + (1111) - (1112) - (1122) + (1222) + (2222)"),
            parse_inequality("3 + (1111) - 2 (1112) + (1222) - (2222)")};
        std::map<CardinalityTuple, HybridModel> models;
        for (const auto& h : cardinality_tuples(4))
            models.emplace(h, extremal_behaviors(s4, h, Space::FullCorrelation));
        const auto& local = models.at({1, 1, 1, 1});
        for (const auto& [h, m] : models) {
            const auto vs = as_set(m);
            for (const auto& v : as_set(local)) CHECK(vs.count(v) == 1);
        }
        for (const auto& ineq : probes) {
            auto b = [&](CardinalityTuple h) { return classical_bound(ineq, models.at(h)); };
            CHECK(b({1, 1, 1, 1}) <= b({2, 1, 1}));
            CHECK(b({2, 1, 1}) <= b({2, 2}));
            CHECK(b({2, 1, 1}) <= b({3, 1}));
            CHECK(b({2, 2}) <= b({4}));
            CHECK(b({3, 1}) <= b({4}));
            Rational l1 = 0;
            for (std::size_t l = 0; l <= 4; ++l) l1 += abs(ineq.coeffs()[l]) * binomial(4, static_cast<int>(l));
            CHECK(b({4}) == l1);
            for (const auto& h : cardinality_tuples(4)) CHECK(classical_bound_direct(ineq, h) == b(h));
        }
    }
    SUBCASE("direct bound on marginal spaces") {
        const Scenario s(3, 3);
        const auto model = extremal_behaviors(s, {2, 1}, Space::WithMarginals);
        CHECK(model.size() > 0);
        auto f1 = parse_inequality("(100) - (111) + (211) + (221) - (222) + 2 (300) - (310) + (330) + (331) <= 13");
        CHECK(classical_bound(f1, model) == 13);
        CHECK(classical_bound_direct(f1, {2, 1}) == 13);
    }
}

TEST_CASE("caps") {
    ModelOptions small;
    small.cap = 100;
    CHECK_THROWS_AS(extremal_behaviors(Scenario(4, 2), {3, 1}, Space::FullCorrelation, small), CapExceeded);
    CHECK(strategies_per_partition(Scenario(5, 2), {4, 1}, Space::FullCorrelation,
                                   MarginalConvention::TrivialSetting) == (std::uint64_t{1} << 17));
}

TEST_CASE("binary and json export") {
    const auto m = extremal_behaviors(Scenario(3, 2), {2, 1}, Space::FullCorrelation);
    std::stringstream ss;
    write_binary(ss, m);
    const auto back = read_binary(ss);
    CHECK(as_set(back) == as_set(m));
    CHECK(back.h() == m.h());
    ModelOptions avg;
    avg.convention = MarginalConvention::UniformAverage;
    const auto d = extremal_behaviors(Scenario(3, 2), {2, 1}, Space::WithMarginals, avg);
    std::stringstream sd;
    write_binary(sd, d);
    const auto dback = read_binary(sd);
    CHECK(dback.denominator() == d.denominator());
    CHECK(as_set(dback) == as_set(d));
    std::stringstream bad("NOPE");
    CHECK_THROWS_AS(read_binary(bad), ParseError);
    const auto j = to_json(m);
    CHECK(j["vertices"].size() == m.size());
    CHECK(j["h"] == nlohmann::json::array({2, 1}));
}
