#include "nld/cpt.hpp"
#include "nld/errors.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace nld {

namespace {

using Vec = std::vector<Integer>;

Integer dot(const Vec& a, const Vec& b) {
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void make_primitive(Vec& v) { reduce_by_gcd(v); }

class Bits {
public:
    explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
    void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1u; }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
        return c;
    }
    Bits operator&(const Bits& o) const {
        Bits r;
        r.w_.resize(w_.size());
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
        return r;
    }
    std::size_t and_count(const Bits& o) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < w_.size(); ++i) c += static_cast<std::size_t>(std::popcount(w_[i] & o.w_[i]));
        return c;
    }
    bool subset_of(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

private:
    std::vector<std::uint64_t> w_;
};

struct PolarRay {
    Vec v;
    Bits zeros;
};

// Columns of the inverse of a nonsingular square matrix, scaled to primitive integers.
std::vector<Vec> inverse_columns(const std::vector<Vec>& a) {
    const std::size_t d = a.size();
    std::vector<std::vector<Rational>> m(d, std::vector<Rational>(2 * d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) m[i][j] = Rational(a[i][j]);
        m[i][d + i] = 1;
    }
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t piv = c;
        while (piv < d && m[piv][c] == 0) ++piv;
        if (piv == d) throw Error("initial ray basis is singular");
        std::swap(m[piv], m[c]);
        const Rational inv = 1 / m[c][c];
        for (auto& x : m[c]) x *= inv;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == c || m[r][c] == 0) continue;
            const Rational f = m[r][c];
            for (std::size_t k = 0; k < 2 * d; ++k) m[r][k] -= f * m[c][k];
        }
    }
    std::vector<Vec> cols(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<Rational> col(d);
        for (std::size_t i = 0; i < d; ++i) col[i] = m[i][d + j];
        cols[j] = to_primitive_integers(col);
    }
    return cols;
}

}  // namespace

std::vector<FacetCandidate> dd_facets(const Cone& cone, const DdOptions& options) {
    const std::size_t d = cone.dim;
    const std::size_t n = cone.rays.size();
    for (const auto& r : cone.rays)
        if (r.size() != d) throw DimensionMismatch("ray length differs from cone dimension");
    const std::size_t rank = exact_rank(cone.rays);
    if (rank != d) throw NotFullDimensional(rank, d);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (options.lexicographic)
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return cone.rays[a] < cone.rays[b]; });

    // initial simplicial cone from the first d independent rays in insertion order
    std::vector<std::size_t> basis;
    std::vector<Vec> basis_rows;
    std::vector<bool> used(n, false);
    for (std::size_t idx : order) {
        if (basis.size() == d) break;
        basis_rows.push_back(cone.rays[idx]);
        if (exact_rank(basis_rows) == basis_rows.size()) {
            basis.push_back(idx);
            used[idx] = true;
        } else {
            basis_rows.pop_back();
        }
    }
    std::vector<PolarRay> rays;
    const auto cols = inverse_columns(basis_rows);
    for (std::size_t j = 0; j < d; ++j) {
        PolarRay pr{cols[j], Bits(n)};
        for (std::size_t i = 0; i < d; ++i)
            if (i != j) pr.zeros.set(basis[i]);
        rays.push_back(std::move(pr));
    }

    for (std::size_t idx : order) {
        if (used[idx]) continue;
        const Vec& r = cone.rays[idx];
        std::vector<Integer> val(rays.size());
        std::vector<std::size_t> pos, neg, zero;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            val[i] = dot(rays[i].v, r);
            if (val[i] > 0)
                pos.push_back(i);
            else if (val[i] < 0)
                neg.push_back(i);
            else
                zero.push_back(i);
        }
        if (neg.empty()) {
            for (std::size_t i : zero) rays[i].zeros.set(idx);
            continue;
        }
        std::vector<PolarRay> next;
        next.reserve(pos.size() + zero.size());
        for (std::size_t i : pos) next.push_back(rays[i]);
        for (std::size_t i : zero) {
            next.push_back(rays[i]);
            next.back().zeros.set(idx);
        }
        for (std::size_t p : pos) {
            for (std::size_t q : neg) {
                if (rays[p].zeros.and_count(rays[q].zeros) + 2 < d) continue;
                const Bits common = rays[p].zeros & rays[q].zeros;
                bool adjacent = true;
                for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
                    if (k == p || k == q) continue;
                    if (common.subset_of(rays[k].zeros)) adjacent = false;
                }
                if (!adjacent) continue;
                PolarRay w{Vec(d), common};
                for (std::size_t c = 0; c < d; ++c) w.v[c] = val[p] * rays[q].v[c] - val[q] * rays[p].v[c];
                make_primitive(w.v);
                w.zeros.set(idx);
                next.push_back(std::move(w));
            }
        }
        rays = std::move(next);
    }

    std::vector<FacetCandidate> out;
    out.reserve(rays.size());
    for (auto& pr : rays) {
        FacetCandidate f{std::move(pr.v), {}};
        for (std::size_t i = 0; i < n; ++i)
            if (pr.zeros.test(i)) f.saturating.push_back(i);
        out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(),
              [](const FacetCandidate& a, const FacetCandidate& b) { return a.normal < b.normal; });
    return out;
}

}  // namespace nld
