#include "nld/errors.hpp"
#include "nld/generalize.hpp"
#include "nld/lp.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace nld {

namespace {

// Rows of a row-major matrix with duplicates removed.
std::vector<std::int64_t> distinct_rows(std::vector<std::int64_t> flat, std::size_t dim) {
    const std::size_t rows = dim == 0 ? 0 : flat.size() / dim;
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), 0);
    auto row_less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(flat.begin() + a * dim, flat.begin() + (a + 1) * dim,
                                            flat.begin() + b * dim, flat.begin() + (b + 1) * dim);
    };
    std::sort(order.begin(), order.end(), row_less);
    std::vector<std::int64_t> out;
    out.reserve(flat.size());
    for (std::size_t i = 0; i < rows; ++i) {
        if (i > 0 && !row_less(order[i - 1], order[i])) continue;
        out.insert(out.end(), flat.begin() + order[i] * dim, flat.begin() + (order[i] + 1) * dim);
    }
    return out;
}

constexpr std::size_t kMaxColumnsPerRound = 32;
constexpr std::size_t kFullSpaceCap = std::size_t{1} << 24;

}  // namespace

GeneralizationLp::GeneralizationLp(const SymmetricInequality& base, const ExtensionRule& rule,
                                   std::shared_ptr<const HybridModel> model, bool symmetric)
    : rule_(rule), model_(std::move(model)), symmetric_(symmetric) {
    rule_.validate();
    if (!model_) throw InvalidArgument("generalization LP: no target model");
    if (!(model_->scenario() == rule_.target) || model_->space() != Space::WithMarginals)
        throw InvalidArgument("generalization LP: target model must be the rule's target scenario with marginals");
    if (!(base.scenario() == rule_.base)) throw DimensionMismatch("generalization LP: base inequality scenario mismatch");
    if (symmetric_ && !rule_.party_uniform())
        throw InvalidArgument("generalization LP: the symmetric LP needs the same rule at every party");

    denominator_ = model_->denominator();
    if (symmetric_) {
        index_ = std::make_unique<MultisetIndex>(rule_.target, Space::WithMarginals);
        dim_ = index_->size();
        points_ = distinct_rows(symmetric_projection(*model_, *index_), dim_);
    } else {
        dim_ = model_->dimension();
        if (model_->size() * dim_ > kFullSpaceCap) throw CapExceeded("generalization LP: full-space vertex table too large");
        std::vector<std::int64_t> flat;
        flat.reserve(model_->size() * dim_);
        for (std::size_t i = 0; i < model_->size(); ++i) {
            const auto r = model_->row(i);
            flat.insert(flat.end(), r.begin(), r.end());
        }
        points_ = distinct_rows(std::move(flat), dim_);
    }

    ModelOptions opts;
    opts.convention = model_->convention();
    const auto base_model = extremal_behaviors(rule_.base, model_->h(), Space::WithMarginals, opts);
    for (const auto& b : saturating_behaviors(base, base_model)) extended_.push_back(extend_behavior(b, rule_));
    for (const auto& b : extended_) {
        auto c = coordinates(b);
        if (std::find(equalities_.begin(), equalities_.end(), c) == equalities_.end())
            equalities_.push_back(std::move(c));
    }
}

std::vector<Rational> GeneralizationLp::coordinates(const Behavior& b) const {
    const auto e = b.entries();
    if (!symmetric_) return {e.begin(), e.end()};
    std::vector<Rational> c(dim_);
    const auto& classes = index_->tuple_classes();
    for (std::size_t t = 0; t < e.size(); ++t) c[classes[t]] += e[t];
    return c;
}

GeneralizationResult GeneralizationLp::solve(const std::vector<Rational>& direction) const {
    if (direction.size() != dim_) throw DimensionMismatch("generalization LP: direction has wrong length");
    // dual: min sum u_i + sum w_v + M |box|  s.t.  sum u_i e_i + sum w_v v + box = r,  w >= 0
    ColumnLp lp(direction);
    for (const auto& e : equalities_) {
        std::vector<Rational> neg(e.size());
        for (std::size_t k = 0; k < e.size(); ++k) neg[k] = -e[k];
        lp.add_column(e, -1);
        lp.add_column(neg, 1);
    }
    const Rational big = Rational(1 << 20);
    std::vector<std::size_t> box;
    for (std::size_t k = 0; k < dim_; ++k)
        for (int s : {1, -1}) {
            std::vector<Rational> a(dim_);
            a[k] = s;
            box.push_back(lp.add_column(a, -big));
        }

    const std::size_t count = points_.size() / std::max<std::size_t>(dim_, 1);
    std::vector<bool> added(count, false);
    GeneralizationResult res;
    std::vector<Rational> y(dim_);
    for (;;) {
        ++res.rounds;
        if (lp.solve() != LpStatus::Optimal) throw LpError("no generalization exists under the rule");
        const auto duals = lp.duals();
        for (std::size_t k = 0; k < dim_; ++k) y[k] = -duals[k];

        // pricing: model points with y . p > 1, screened in floating point, confirmed exactly
        std::vector<double> yd(dim_);
        for (std::size_t k = 0; k < dim_; ++k) yd[k] = y[k].convert_to<double>() / static_cast<double>(denominator_);
        std::vector<std::pair<double, std::size_t>> cand;
        for (std::size_t i = 0; i < count; ++i) {
            if (added[i]) continue;
            const std::int64_t* p = &points_[i * dim_];
            double v = 0;
            for (std::size_t k = 0; k < dim_; ++k) v += static_cast<double>(p[k]) * yd[k];
            if (v > 1 - 1e-7) cand.emplace_back(v, i);
        }
        std::sort(cand.begin(), cand.end(), std::greater<>());
        Integer q = 1;
        for (const auto& v : y) q = lcm(q, denominator_of(v));
        std::vector<Integer> yz(dim_);
        for (std::size_t k = 0; k < dim_; ++k) yz[k] = numerator_of(y[k]) * (q / denominator_of(y[k]));
        const Integer limit = q * denominator_;
        std::size_t fresh = 0;
        for (const auto& [v, i] : cand) {
            const std::int64_t* p = &points_[i * dim_];
            Integer dot = 0;
            for (std::size_t k = 0; k < dim_; ++k)
                if (p[k] != 0) dot += yz[k] * p[k];
            if (dot <= limit) continue;
            std::vector<Rational> a(dim_);
            for (std::size_t k = 0; k < dim_; ++k) a[k] = Rational(p[k], denominator_);
            lp.add_column(a, -1);
            added[i] = true;
            if (++fresh == kMaxColumnsPerRound) break;
        }
        if (fresh == 0) break;
    }
    const auto x = lp.x();
    for (std::size_t j : box)
        if (x[j] != 0) throw LpError("generalization LP: optimum outside the coefficient box");

    res.columns = lp.columns();
    res.objective = 0;
    for (std::size_t k = 0; k < dim_; ++k) res.objective += direction[k] * y[k];

    // 1 - y . beta >= 0
    std::vector<Rational> all(dim_ + 1);
    all[0] = 1;
    for (std::size_t k = 0; k < dim_; ++k) all[k + 1] = -y[k];
    const auto ints = to_primitive_integers(all);
    res.constant = Rational(ints[0]);
    if (symmetric_) {
        std::vector<Rational> c(dim_);
        for (std::size_t k = 0; k < dim_; ++k) c[k] = Rational(ints[k + 1]);
        SymmetricInequality ineq(rule_.target, Space::WithMarginals, res.constant, std::move(c));
        res.tuple_coefficients = expand_symmetric(ineq);
        res.inequality = std::move(ineq);
    } else {
        res.tuple_coefficients.resize(dim_);
        for (std::size_t k = 0; k < dim_; ++k) res.tuple_coefficients[k] = Rational(ints[k + 1]);
        const MultisetIndex index(rule_.target, Space::WithMarginals);
        std::vector<std::optional<Rational>> by_class(index.size());
        bool symmetric = true;
        for (std::size_t t = 0; t < dim_ && symmetric; ++t) {
            auto& c = by_class[index.tuple_classes()[t]];
            if (!c)
                c = res.tuple_coefficients[t];
            else
                symmetric = *c == res.tuple_coefficients[t];
        }
        if (symmetric) {
            std::vector<Rational> c(index.size());
            for (std::size_t mu = 0; mu < index.size(); ++mu) c[mu] = *by_class[mu];
            res.inequality = SymmetricInequality(rule_.target, Space::WithMarginals, res.constant, std::move(c));
        }
    }

    // independent post-check on the model's vertex list
    if (res.inequality) {
        for (const auto& v : vertex_values(*res.inequality, *model_))
            if (v < 0) throw LpError("generalization LP: result violated by a model vertex");
    } else {
        for (std::size_t i = 0; i < model_->size(); ++i) {
            const auto r = model_->row(i);
            Integer v = numerator_of(res.constant) * model_->denominator();
            for (std::size_t t = 0; t < r.size(); ++t)
                if (r[t] != 0) v += numerator_of(res.tuple_coefficients[t]) * r[t];
            if (v < 0) throw LpError("generalization LP: result violated by a model vertex");
        }
    }
    return res;
}

GeneralizationResult generalization_lp(const GeneralizationProblem& p) {
    if (!(p.rule.target == p.target)) throw InvalidArgument("generalization LP: rule and target scenario differ");
    if (p.target.settings <= p.base.scenario().settings)
        throw InvalidArgument("generalization LP: target scenario must have more settings");
    const GeneralizationLp lp(p.base, p.rule, p.model, p.symmetric);
    return lp.solve(p.direction);
}

std::vector<Rational> random_direction(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(-10, 10);
    std::vector<Rational> r(dim);
    for (auto& v : r) v = d(rng);
    return r;
}

}  // namespace nld
