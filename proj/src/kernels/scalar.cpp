#include "nld/kernels.hpp"

#include <bit>

namespace nld::kernels::scalar {

namespace {

// Explicit real arithmetic so that the vector variant can reproduce it bit for bit.
inline cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace

void class_popcounts(std::span<const std::uint64_t> words, std::span<const std::uint64_t> masks,
                     std::span<std::uint32_t> out) {
    const std::size_t k = masks.size();
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = 0; j < k; ++j)
            out[i * k + j] = static_cast<std::uint32_t>(std::popcount(words[i] & masks[j]));
}

void apply_qubit(std::span<cplx> state, int qubit, const Mat2& u) {
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t base = 0; base < state.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cplx a = state[i];
            const cplx b = state[i + stride];
            const cplx na = mul(u[0], a) + mul(u[1], b);
            const cplx nb = mul(u[2], a) + mul(u[3], b);
            state[i] = na;
            state[i + stride] = nb;
        }
    }
}

Mat2 qubit_partial_trace(std::span<const cplx> chi, std::span<const cplx> psi, int qubit) {
    const std::size_t stride = std::size_t{1} << qubit;
    Mat2 m{};
    for (std::size_t base = 0; base < chi.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cplx c0 = chi[i], c1 = chi[i + stride];
            const cplx p0 = std::conj(psi[i]), p1 = std::conj(psi[i + stride]);
            m[0] += mul(c0, p0);
            m[1] += mul(c0, p1);
            m[2] += mul(c1, p0);
            m[3] += mul(c1, p1);
        }
    }
    return m;
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += mul(alpha, x[i]);
}

}  // namespace nld::kernels::scalar
