#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner kernels with a scalar reference implementation and an AVX2
// variant. The variant is picked once at runtime from the CPU feature flags; the
// NLD_FORCE_SCALAR environment variable pins the scalar path.

namespace nld::kernels {

using cplx = std::complex<double>;
/// Row-major 2x2 complex matrix {u00, u01, u10, u11}.
using Mat2 = std::array<cplx, 4>;

enum class Isa : std::uint8_t { Scalar, Avx2 };

std::string_view to_string(Isa isa);
bool available(Isa isa);

struct Table {
    /// out[i * masks.size() + j] = popcount(words[i] & masks[j])
    void (*class_popcounts)(std::span<const std::uint64_t> words,
                            std::span<const std::uint64_t> masks, std::span<std::uint32_t> out);
    /// Applies u to the given qubit (bit `qubit` of the amplitude index).
    void (*apply_qubit)(std::span<cplx> state, int qubit, const Mat2& u);
    /// m[a][b] = sum_r chi[a, r] * conj(psi[b, r]), where a, b index the given qubit.
    Mat2 (*qubit_partial_trace)(std::span<const cplx> chi, std::span<const cplx> psi, int qubit);
    /// y += alpha * x
    void (*axpy)(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
};

const Table& table(Isa isa);
/// Table selected for this process.
const Table& active();
Isa active_isa();

inline void class_popcounts(std::span<const std::uint64_t> words,
                            std::span<const std::uint64_t> masks, std::span<std::uint32_t> out) {
    active().class_popcounts(words, masks, out);
}
inline void apply_qubit(std::span<cplx> state, int qubit, const Mat2& u) {
    active().apply_qubit(state, qubit, u);
}
inline Mat2 qubit_partial_trace(std::span<const cplx> chi, std::span<const cplx> psi, int qubit) {
    return active().qubit_partial_trace(chi, psi, qubit);
}
inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    active().axpy(alpha, x, y);
}

namespace scalar {
void class_popcounts(std::span<const std::uint64_t>, std::span<const std::uint64_t>,
                     std::span<std::uint32_t>);
void apply_qubit(std::span<cplx>, int, const Mat2&);
Mat2 qubit_partial_trace(std::span<const cplx>, std::span<const cplx>, int);
void axpy(cplx, std::span<const cplx>, std::span<cplx>);
}  // namespace scalar

#if defined(NLD_HAVE_AVX2)
namespace avx2 {
void class_popcounts(std::span<const std::uint64_t>, std::span<const std::uint64_t>,
                     std::span<std::uint32_t>);
void apply_qubit(std::span<cplx>, int, const Mat2&);
Mat2 qubit_partial_trace(std::span<const cplx>, std::span<const cplx>, int);
void axpy(cplx, std::span<const cplx>, std::span<cplx>);
}  // namespace avx2
#endif

}  // namespace nld::kernels
