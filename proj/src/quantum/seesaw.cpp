#include "expression.hpp"

#include "nld/errors.hpp"
#include "nld/kernels.hpp"
#include "nld/parallel.hpp"
#include "nld/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace nld {

namespace {

using detail::ExpressionTerms;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

const Qubit& op(const QuantumConfig& c, int k, int x) {
    static const Qubit id = Qubit::Identity();
    return x == 0 ? id : c.observables[k][x - 1];
}

// Observable with spectrum {+1, -1} maximizing tr(O H), H the Hermitian part of m: the
// sign of the traceless part. A vanishing traceless part resolves to sigma_z.
Qubit sign_of(const Qubit& m) {
    const Qubit h = (m + m.adjoint()) / 2.0;
    const double hz = (h(0, 0).real() - h(1, 1).real()) / 2;
    const double hx = h(0, 1).real(), hy = -h(0, 1).imag();
    const double r = std::sqrt(hx * hx + hy * hy + hz * hz);
    if (r < 1e-12) return pauli::z();
    return (hx * pauli::x() + hy * pauli::y() + hz * pauli::z()) / r;
}

// Adds the white-noise part white * tr(B)/2^n, whose dependence on party k's observable
// for setting x is tr(O) / 2 times the product of the other parties' tr(O)/2.
void add_white(const ExpressionTerms& e, const QuantumConfig& c, int k, double white,
               std::vector<Qubit>& m) {
    if (white == 0) return;
    for (std::size_t t = 0; t < e.tuples.size(); ++t) {
        double prod = e.coeffs[t] * white / 2;
        for (int j = 0; j < e.parties && prod != 0; ++j)
            if (j != k) prod *= op(c, j, e.tuples[t][j]).trace().real() / 2;
        m[e.tuples[t][k]] += prod * Qubit::Identity();
    }
}

// Effective operators M_x (x = 0..m) of party k: the value equals sum_x Re tr(O_x M_x).
class Engine {
public:
    Engine(const ExpressionTerms& e, const std::optional<FixedState>& state) : e_(e), state_(state) {}

    std::vector<Qubit> effective(const QuantumConfig& c, int k) const {
        std::vector<Qubit> m(e_.settings + 1, Qubit::Zero());
        if (!state_) {
            pure_part(c, k, 1.0, c.state, m);
        } else if (state_->is_ghz()) {
            ghz_part(c, k, state_->ghz_weight(), m);
            add_white(e_, c, k, state_->white(), m);
        } else {
            for (const auto& [w, psi] : state_->components()) pure_part(c, k, w, psi, m);
            add_white(e_, c, k, state_->white(), m);
        }
        return m;
    }

    double value(const QuantumConfig& c) const { return contract(c, 0, effective(c, 0)); }

    static double contract(const QuantumConfig& c, int k, const std::vector<Qubit>& m) {
        double v = m[0].trace().real();
        for (std::size_t x = 1; x < m.size(); ++x) v += (c.observables[k][x - 1] * m[x]).trace().real();
        return v;
    }

private:
    // <GHZ| O_1 (x) ... (x) O_n |GHZ> = (prod O00 + prod O11 + prod O01 + prod O10) / 2
    void ghz_part(const QuantumConfig& c, int k, double w, std::vector<Qubit>& m) const {
        if (w == 0) return;
        using cplx = std::complex<double>;
        for (std::size_t t = 0; t < e_.tuples.size(); ++t) {
            cplx p00 = 1, p11 = 1, p01 = 1, p10 = 1;
            for (int j = 0; j < e_.parties; ++j) {
                if (j == k) continue;
                const Qubit& o = op(c, j, e_.tuples[t][j]);
                p00 *= o(0, 0);
                p11 *= o(1, 1);
                p01 *= o(0, 1);
                p10 *= o(1, 0);
            }
            const double s = e_.coeffs[t] * w / 2;
            Qubit& mx = m[e_.tuples[t][k]];
            mx(0, 0) += s * p00;
            mx(1, 1) += s * p11;
            mx(1, 0) += s * p01;
            mx(0, 1) += s * p10;
        }
    }

    void pure_part(const QuantumConfig& c, int k, double w, const CVector& psi, std::vector<Qubit>& m) const {
        using cplx = std::complex<double>;
        const std::size_t dim = static_cast<std::size_t>(psi.size());
        std::vector<std::vector<cplx>> chi(e_.settings + 1, std::vector<cplx>(dim));
        std::vector<cplx> phi(dim);
        for (std::size_t t = 0; t < e_.tuples.size(); ++t) {
            std::copy(psi.data(), psi.data() + dim, phi.begin());
            for (int j = 0; j < e_.parties; ++j) {
                const int x = e_.tuples[t][j];
                if (j == k || x == 0) continue;
                const Qubit& o = c.observables[j][x - 1];
                kernels::apply_qubit(phi, j, {o(0, 0), o(0, 1), o(1, 0), o(1, 1)});
            }
            kernels::axpy(e_.coeffs[t], phi, chi[e_.tuples[t][k]]);
        }
        const std::span<const cplx> ps(psi.data(), dim);
        for (int x = 0; x <= e_.settings; ++x) {
            const auto r = kernels::qubit_partial_trace(chi[x], ps, k);
            Qubit q;
            q << r[0], r[1], r[2], r[3];
            m[x] += w * q;
        }
    }

    const ExpressionTerms& e_;
    const std::optional<FixedState>& state_;
};

CVector top_eigenvector(const CMatrix& b, double* value) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(b);
    const Eigen::Index last = b.rows() - 1;
    *value = es.eigenvalues()(last);
    return es.eigenvectors().col(last);
}

double eps_for(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

}  // namespace

double expectation(const SymmetricInequality& ineq, const QuantumConfig& config, const FixedState& state) {
    const auto e = detail::expression_terms(ineq);
    const std::optional<FixedState> s = state;
    return Engine(e, s).value(config);
}

QuantumConfig random_config(int parties, int settings, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    QuantumConfig c;
    c.parties = parties;
    c.settings = settings;
    c.observables.resize(parties);
    for (auto& party : c.observables)
        for (int x = 0; x < settings; ++x) {
            const double a = g(rng), b = g(rng), d = g(rng);
            party.push_back(sign_of(a * pauli::x() + b * pauli::y() + d * pauli::z()));
        }
    return c;
}

SeesawResult seesaw_from(const SymmetricInequality& ineq, const std::optional<FixedState>& state,
                         QuantumConfig cfg, const SeesawOptions& options) {
    const auto e = detail::expression_terms(ineq);
    if (cfg.parties != e.parties || cfg.settings != e.settings)
        throw DimensionMismatch("seesaw: configuration does not match the inequality");
    if (state && state->parties() != e.parties) throw DimensionMismatch("seesaw: state has wrong party count");
    const Engine engine(e, state);
    SeesawResult res;
    double value = 0;
    if (!state) {
        if (cfg.state.size() == 0) cfg.state = top_eigenvector(bell_operator(ineq, cfg), &value);
        value = engine.value(cfg);
    } else {
        cfg.state.resize(0);
        value = engine.value(cfg);
    }
    for (int sweep = 1; sweep <= options.sweep_cap; ++sweep) {
        const double before = value;
        for (int k = 0; k < e.parties; ++k) {
            const auto m = engine.effective(cfg, k);
            for (int x = 1; x <= e.settings; ++x) cfg.observables[k][x - 1] = sign_of(m[x]);
            const double next = Engine::contract(cfg, k, m);
            if (next < value - eps_for(value)) res.monotone = false;
            value = next;
        }
        if (!state) {
            double top = 0;
            cfg.state = top_eigenvector(bell_operator(ineq, cfg), &top);
            if (top < value - eps_for(value)) res.monotone = false;
            value = top;
        }
        res.sweeps = sweep;
        if (std::abs(value - before) < options.tol) {
            res.converged = true;
            break;
        }
    }
    res.value = value;
    res.config = std::move(cfg);
    return res;
}

SeesawResult seesaw_max(const SymmetricInequality& ineq, const std::optional<FixedState>& state,
                        const SeesawOptions& options) {
    if (options.restarts < 1) throw InvalidArgument("seesaw: restarts must be positive");
    const int n = ineq.scenario().parties, m = ineq.scenario().settings;
    std::vector<SeesawResult> runs(options.restarts);
    parallel_for(runs.size(), options.jobs, [&](std::size_t r) {
        const std::uint64_t seed = splitmix64(options.seed + r);
        runs[r] = seesaw_from(ineq, state, random_config(n, m, seed), options);
        runs[r].seed = seed;
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r].value > runs[best].value) best = r;
    return runs[best];
}

double violation_at(const SymmetricInequality& ineq, double p, const SeesawOptions& options) {
    const auto s = FixedState::noisy_ghz(ineq.scenario().parties, p);
    return seesaw_max(ineq, s, options).value - ineq.constant().convert_to<double>();
}

namespace {

// Observables found so far, with their values on the pure GHZ state (g) and on the
// maximally mixed state (w): on rho(p) they give (1-p) g + p w.
struct Pool {
    struct Entry {
        QuantumConfig config;
        double g, w;
    };
    std::vector<Entry> entries;

    double best(double p) const {
        double v = -INFINITY;
        for (const auto& e : entries) v = std::max(v, (1 - p) * e.g + p * e.w);
        return v;
    }
    std::vector<QuantumConfig> top(double p, std::size_t count) const {
        std::vector<const Entry*> order;
        for (const auto& e : entries) order.push_back(&e);
        std::stable_sort(order.begin(), order.end(), [&](const Entry* a, const Entry* b) {
            return (1 - p) * a->g + p * a->w > (1 - p) * b->g + p * b->w;
        });
        std::vector<QuantumConfig> out;
        for (std::size_t i = 0; i < order.size() && i < count; ++i) out.push_back(order[i]->config);
        return out;
    }
    void add(const SymmetricInequality& ineq, const QuantumConfig& c) {
        const int n = c.parties;
        const double g = expectation(ineq, c, FixedState::noisy_ghz(n, 0));
        const double w = expectation(ineq, c, FixedState::noisy_ghz(n, 1));
        for (const auto& e : entries)
            if (std::abs(e.g - g) < 1e-12 && std::abs(e.w - w) < 1e-12) return;
        entries.push_back({c, g, w});
    }
};

}  // namespace

CriticalInterval critical_interval(const SymmetricInequality& ineq, const RobustnessOptions& options) {
    if (options.grid < 3) throw InvalidArgument("critical_interval: grid must have at least 3 points");
    const int n = ineq.scenario().parties, m = ineq.scenario().settings;
    const double c0 = ineq.constant().convert_to<double>();
    CriticalInterval out;
    Pool pool;
    std::uint64_t evaluation = 0;

    auto evaluate = [&](double p, int restarts) {
        const auto state = FixedState::noisy_ghz(n, p);
        std::vector<QuantumConfig> starts = pool.top(p, 3);
        const std::uint64_t base = splitmix64(options.seesaw.seed ^ (++evaluation << 32));
        for (int r = 0; r < restarts; ++r) starts.push_back(random_config(n, m, splitmix64(base + r)));
        std::vector<SeesawResult> runs(starts.size());
        parallel_for(starts.size(), options.seesaw.jobs,
                     [&](std::size_t i) { runs[i] = seesaw_from(ineq, state, starts[i], options.seesaw); });
        double best = pool.best(p);
        for (const auto& r : runs) {
            best = std::max(best, r.value);
            pool.add(ineq, r.config);
        }
        const double v = best - c0;
        out.samples.emplace_back(p, v);
        return v;
    };

    double lo = 0, hi = 1;
    std::optional<double> v_hi;
    const double v0 = evaluate(0, options.seesaw.restarts);
    if (v0 <= options.threshold) {
        out.empty = true;
        out.p0 = out.p1 = 0;
        return out;
    }
    double v_lo = v0;
    for (int round = 0; round < options.max_rounds && hi - lo >= options.width; ++round) {
        const int g = options.grid;
        std::vector<double> ps(g), vs(g);
        std::vector<bool> known(g, false);
        for (int i = 0; i < g; ++i) ps[i] = lo + (hi - lo) * i / (g - 1);
        ps[g - 1] = hi;
        vs[0] = v_lo;
        known[0] = true;
        if (v_hi) {
            vs[g - 1] = *v_hi;
            known[g - 1] = true;
        }
        int first_off = -1;
        auto scan = [&](int from) {
            for (int i = from; i < g; ++i) {
                if (!known[i]) {
                    vs[i] = evaluate(ps[i], options.seesaw.restarts);
                    known[i] = true;
                }
                if (vs[i] <= options.threshold) return i;
            }
            return -1;
        };
        first_off = scan(1);
        // convexity filter: a sample above the chord of its neighbours means a neighbour
        // was underestimated
        for (bool again = true; again;) {
            again = false;
            for (int i = 1; i + 1 < g; ++i) {
                if (!known[i - 1] || !known[i] || !known[i + 1]) continue;
                if (vs[i] <= (vs[i - 1] + vs[i + 1]) / 2 + 1e-7) continue;
                for (int j : {i - 1, i + 1}) {
                    const double v = evaluate(ps[j], 2 * options.seesaw.restarts);
                    ++out.reruns;
                    if (v > vs[j] + 1e-9) {
                        vs[j] = v;
                        again = true;
                    }
                }
                if (out.reruns > 4 * g) again = false;
                if (again) break;
            }
            if (again && first_off >= 0 && vs[first_off] > options.threshold) first_off = scan(first_off);
        }
        if (first_off < 0) {
            // violated on the whole grid up to p = 1
            out.p0 = out.p1 = hi;
            return out;
        }
        lo = ps[first_off - 1];
        v_lo = vs[first_off - 1];
        hi = ps[first_off];
        v_hi = vs[first_off];
    }
    out.p0 = lo;
    out.p1 = hi;
    return out;
}

}  // namespace nld
