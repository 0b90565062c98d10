#include <doctest.h>

#include "nld/cpt.hpp"
#include "nld/errors.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace nld;

namespace {

// Oracle: every facet of a full-dimensional cone is spanned by d-1 independent rays, so
// try all (d-1)-subsets, take the one-dimensional orthogonal complement and keep the
// valid orientations.
std::set<std::vector<Integer>> brute_force_facets(const Cone& cone) {
    const std::size_t d = cone.dim, n = cone.rays.size();
    std::set<std::vector<Integer>> out;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(d - 1), true);
    do {
        std::vector<std::vector<Rational>> m;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) m.emplace_back(cone.rays[i].begin(), cone.rays[i].end());
        // reduce to find the null vector
        std::vector<std::size_t> piv;
        std::size_t row = 0;
        for (std::size_t c = 0; c < d && row < m.size(); ++c) {
            std::size_t p = row;
            while (p < m.size() && m[p][c] == 0) ++p;
            if (p == m.size()) continue;
            std::swap(m[p], m[row]);
            const Rational inv = 1 / m[row][c];
            for (auto& x : m[row]) x *= inv;
            for (std::size_t r = 0; r < m.size(); ++r)
                if (r != row && m[r][c] != 0) {
                    const Rational f = m[r][c];
                    for (std::size_t k = 0; k < d; ++k) m[r][k] -= f * m[row][k];
                }
            piv.push_back(c);
            ++row;
        }
        if (piv.size() != d - 1) continue;
        std::size_t free = 0;
        while (std::find(piv.begin(), piv.end(), free) != piv.end()) ++free;
        std::vector<Rational> v(d);
        v[free] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m[i][free];
        auto normal = to_primitive_integers(v);
        for (int sign : {1, -1}) {
            bool valid = true;
            for (const auto& r : cone.rays) {
                Integer s = 0;
                for (std::size_t k = 0; k < d; ++k) s += sign * normal[k] * r[k];
                valid = valid && s >= 0;
            }
            if (valid) {
                auto oriented = normal;
                for (auto& x : oriented) x *= sign;
                out.insert(oriented);
            }
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return out;
}

std::set<std::vector<Integer>> normals(const std::vector<FacetCandidate>& f) {
    std::set<std::vector<Integer>> out;
    for (const auto& c : f) out.insert(c.normal);
    return out;
}

bool contains(const std::vector<CatalogEntry>& cat, const SymmetricInequality& ineq) {
    const auto c = canonicalize(ineq);
    return std::any_of(cat.begin(), cat.end(), [&](const CatalogEntry& e) { return e.inequality == c; });
}

}  // namespace

TEST_CASE("project_symmetric") {
    const Scenario s(4, 2);
    const auto model = extremal_behaviors(s, {1, 1, 1, 1}, Space::FullCorrelation);
    const auto cone = project_symmetric(model);
    CHECK(cone.dim == 6);
    CHECK(cone.rays.size() < 32);
    const std::vector<Integer> all_plus{1, 1, 4, 6, 4, 1};
    CHECK(std::find(cone.rays.begin(), cone.rays.end(), all_plus) != cone.rays.end());

    SUBCASE("party permutations of a vertex project to the same point") {
        const auto m3 = extremal_behaviors(Scenario(3, 2), {2, 1}, Space::FullCorrelation);
        const MultisetIndex idx(Scenario(3, 2), Space::FullCorrelation);
        const auto proj = symmetric_projection(m3, idx);
        std::set<std::vector<int>> vertices;
        for (std::size_t i = 0; i < m3.size(); ++i) {
            auto r = m3.row(i);
            vertices.insert(std::vector<int>(r.begin(), r.end()));
        }
        std::vector<int> perm{0, 1, 2};
        for (std::size_t i = 0; i < m3.size(); i += 7) {
            const auto r = m3.row(i);
            do {
                std::vector<int> moved(r.size());
                std::vector<std::int64_t> sums(idx.size(), 0);
                for (std::size_t t = 0; t < r.size(); ++t) {
                    const auto x = tuple_at(idx.scenario(), Space::FullCorrelation, t);
                    SettingTuple y(3);
                    for (int k = 0; k < 3; ++k) y[perm[k]] = x[k];
                    moved[tuple_index(idx.scenario(), Space::FullCorrelation, y)] = r[t];
                    sums[idx.class_of_tuple(x)] += r[t];
                }
                CHECK(vertices.count(moved) == 1);  // the model is party symmetric
                for (std::size_t c = 0; c < idx.size(); ++c) CHECK(proj[i * idx.size() + c] == sums[c]);
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    }
}

TEST_CASE("dd_facets on small cones") {
    Cone quadrant{2, {{1, 0}, {0, 1}}};
    CHECK(normals(dd_facets(quadrant)) == std::set<std::vector<Integer>>{{1, 0}, {0, 1}});
    Cone simplicial{3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    CHECK(dd_facets(simplicial).size() == 3);
    Cone flat{3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}};
    try {
        dd_facets(flat);
        FAIL("expected NotFullDimensional");
    } catch (const NotFullDimensional& e) {
        CHECK(e.rank() == 2);
        CHECK(e.dim() == 3);
    }
    // square pyramid: the apex cone over a square has 4 facets and a degenerate vertex
    Cone pyramid{3, {{1, 1, 1}, {1, -1, 1}, {1, -1, -1}, {1, 1, -1}}};
    CHECK(normals(dd_facets(pyramid)) == brute_force_facets(pyramid));
}

TEST_CASE("dd_facets matches exhaustive facet search on projected models") {
    for (const auto& [n, h] : std::vector<std::pair<int, CardinalityTuple>>{
             {3, {1, 1, 1}}, {3, {2, 1}}, {4, {1, 1, 1, 1}}, {4, {2, 2}}, {4, {2, 1, 1}}}) {
        const auto cone = project_symmetric(extremal_behaviors(Scenario(n, 2), h, Space::FullCorrelation));
        const auto facets = dd_facets(cone);
        CHECK(normals(facets) == brute_force_facets(cone));
        for (const auto& f : facets) {
            std::vector<std::vector<Integer>> sat;
            for (std::size_t i = 0; i < cone.rays.size(); ++i) {
                Integer s = 0;
                for (std::size_t k = 0; k < cone.dim; ++k) s += f.normal[k] * cone.rays[i][k];
                CHECK(s >= 0);
                if (s == 0) sat.push_back(cone.rays[i]);
            }
            CHECK(sat.size() == f.saturating.size());
            CHECK(exact_rank(sat) == cone.dim - 1);
        }
    }
    // the 3-party fully local catalog holds the Mermin facet
    const auto cat = enumerate_facets(Scenario(3, 2), {1, 1, 1});
    CHECK(contains(cat, SymmetricInequality::two_setting(3, 2, {0, -1, 0, 1})));
}

TEST_CASE("insertion order does not change the facets") {
    auto cone = project_symmetric(extremal_behaviors(Scenario(4, 2), {3, 1}, Space::FullCorrelation));
    const auto reference = normals(dd_facets(cone));
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(cone.rays.begin(), cone.rays.end(), rng);
        CHECK(normals(dd_facets(cone, DdOptions{false})) == reference);
        CHECK(normals(dd_facets(cone)) == reference);
    }
}

TEST_CASE("lift_check") {
    const Scenario s(3, 2);
    const auto local = extremal_behaviors(s, {1, 1, 1}, Space::FullCorrelation);
    const Cone full = full_cone(local);
    SUBCASE("hypercube facet 1 + corr >= 0 is a facet of the local cone") {
        std::vector<Integer> n(full.dim, 0);
        n[0] = 1;
        n[1 + 3] = 1;
        const auto cert = lift_check(n, full);
        CHECK(cert.facet);
        CHECK(cert.rank == 8);
        CHECK(cert.needed == 8);
    }
    SUBCASE("facets of the full cone lift; sums of two facets do not") {
        const auto facets = dd_facets(full);
        REQUIRE(facets.size() >= 2);
        CHECK(lift_check(facets[0].normal, full).facet);
        CHECK(lift_check(facets[1].normal, full).facet);
        std::vector<Integer> sum(full.dim);
        for (std::size_t k = 0; k < full.dim; ++k) sum[k] = facets[0].normal[k] + facets[1].normal[k];
        const auto cert = lift_check(sum, full);
        CHECK_FALSE(cert.facet);
        CHECK(cert.rank < cert.needed);
    }
    SUBCASE("symmetric and generic paths agree") {
        const auto svet = SymmetricInequality::two_setting(3, 4, {1, -1, -1, 1});
        const auto hybrid = extremal_behaviors(s, {2, 1}, Space::FullCorrelation);
        const auto a = lift_check(svet, hybrid);
        std::vector<Integer> n{4};
        for (const auto& c : expand_symmetric(svet)) n.push_back(numerator_of(c));
        const auto b = lift_check(n, full_cone(hybrid));
        CHECK(a.facet == b.facet);
        CHECK(a.rank == b.rank);
        CHECK(a.saturating == b.saturating);
        CHECK(a.facet);
    }
    CHECK_THROWS_AS(lift_check(SymmetricInequality::two_setting(3, 1, {1, -1, -1, 1}), local), InvalidArgument);
}

TEST_CASE("four-party catalogs") {
    const Scenario s(4, 2);
    std::map<CardinalityTuple, std::vector<CatalogEntry>> cats;
    for (const auto& h : cardinality_tuples(4)) {
        if (h.size() == 1) continue;
        const auto model = extremal_behaviors(s, h, Space::FullCorrelation);
        cats[h] = enumerate_facets(model);
        for (const auto& e : cats[h]) {
            CHECK(e.projected_rank == e.projected_dim - 1);
            CHECK(e.inequality.constant() == classical_bound(e.inequality, model));
            CHECK_FALSE(is_trivial_facet(e.inequality));
            const auto values = vertex_values(e.inequality, model);
            CHECK(*std::min_element(values.begin(), values.end()) == 0);
            CHECK(e.lift.has_value());
        }
    }
    CHECK(cats[{1, 1, 1, 1}].size() == 5);
    CHECK(cats[{2, 1, 1}].size() == 9);  // see README, known deviations
    CHECK(cats[{2, 2}].size() == 7);
    CHECK(cats[{3, 1}].size() == 6);
    CHECK(contains(cats[{1, 1, 1, 1}], parse_inequality("+4 - (1111) - (1112) + (1122) + (1222) - (2222)")));
    CHECK(contains(cats[{2, 1, 1}], parse_inequality("+4 - (1112) + (1222)")));
    CHECK(contains(cats[{2, 2}], parse_inequality("+16 - (1112) -2 (1122) +3 (1222) +4 (2222)")));
    CHECK(contains(cats[{3, 1}], parse_inequality("+8 + (1111) - (1112) - (1122) + (1222) + (2222)")));
    // filtering by the lift certificate leaves fewer (2,2) classes than the projection finds
    FacetOptions lifted;
    lifted.require_lift = true;
    CHECK(enumerate_facets(s, {2, 2}, lifted).size() < 7);
}

TEST_CASE("matrix text format") {
    const auto cone = project_symmetric(extremal_behaviors(Scenario(3, 2), {2, 1}, Space::FullCorrelation));
    std::stringstream ss;
    write_matrix(ss, cone.rays, "V-representation", "rays of the (2,1) projection\nn=3");
    const auto back = read_matrix(ss);
    CHECK(back.representation == "V-representation");
    CHECK(back.rows == cone.rays);
    std::stringstream bad("H-representation\nbegin\n 1 2 integer\n 1\n");
    CHECK_THROWS_AS(read_matrix(bad), ParseError);
    std::stringstream h("* c\nH-representation\nbegin\n 1 3 rational\n 4 -1/1 2\nend\n");
    CHECK(read_matrix(h).rows.front() == std::vector<Integer>{4, -1, 2});
}
