// Compiled with -mavx2 -mpopcnt; only called after a runtime CPU check.
#include "nld/kernels.hpp"

#include <immintrin.h>

namespace nld::kernels::avx2 {

namespace {

inline __m256i popcount_epi64(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1, 2,
                                         1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low = _mm256_set1_epi8(0x0f);
    const __m256i lo = _mm256_and_si256(v, low);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
    const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

// Two complex products packed as [re0, im0, re1, im1]; matches the scalar formula.
inline __m256d cmul(__m256d x, __m256d y) {
    const __m256d yr = _mm256_movedup_pd(y);
    const __m256d yi = _mm256_permute_pd(y, 0xF);
    const __m256d xs = _mm256_permute_pd(x, 0x5);
    return _mm256_addsub_pd(_mm256_mul_pd(x, yr), _mm256_mul_pd(xs, yi));
}

inline __m256d broadcast(cplx z) { return _mm256_setr_pd(z.real(), z.imag(), z.real(), z.imag()); }

inline __m256d load(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d conj(__m256d v) { return _mm256_xor_pd(v, _mm256_setr_pd(0.0, -0.0, 0.0, -0.0)); }

inline cplx hsum(__m256d v) {
    alignas(32) double t[4];
    _mm256_store_pd(t, v);
    return {t[0] + t[2], t[1] + t[3]};
}

}  // namespace

void class_popcounts(std::span<const std::uint64_t> words, std::span<const std::uint64_t> masks,
                     std::span<std::uint32_t> out) {
    const std::size_t k = masks.size();
    std::size_t i = 0;
    alignas(32) std::uint64_t lanes[4];
    for (; i + 4 <= words.size(); i += 4) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words.data() + i));
        for (std::size_t j = 0; j < k; ++j) {
            const __m256i m = _mm256_set1_epi64x(static_cast<long long>(masks[j]));
            _mm256_store_si256(reinterpret_cast<__m256i*>(lanes),
                               popcount_epi64(_mm256_and_si256(v, m)));
            for (std::size_t l = 0; l < 4; ++l)
                out[(i + l) * k + j] = static_cast<std::uint32_t>(lanes[l]);
        }
    }
    for (; i < words.size(); ++i)
        for (std::size_t j = 0; j < k; ++j)
            out[i * k + j] = static_cast<std::uint32_t>(_mm_popcnt_u64(words[i] & masks[j]));
}

void apply_qubit(std::span<cplx> state, int qubit, const Mat2& u) {
    const std::size_t stride = std::size_t{1} << qubit;
    cplx* s = state.data();
    if (stride == 1) {
        // adjacent pairs: one register holds [a, b]
        const __m256d col0 = _mm256_setr_pd(u[0].real(), u[0].imag(), u[2].real(), u[2].imag());
        const __m256d col1 = _mm256_setr_pd(u[1].real(), u[1].imag(), u[3].real(), u[3].imag());
        for (std::size_t i = 0; i < state.size(); i += 2) {
            const __m256d v = load(s + i);
            const __m256d a = _mm256_permute2f128_pd(v, v, 0x00);
            const __m256d b = _mm256_permute2f128_pd(v, v, 0x11);
            store(s + i, _mm256_add_pd(cmul(col0, a), cmul(col1, b)));
        }
        return;
    }
    const __m256d u00 = broadcast(u[0]), u01 = broadcast(u[1]);
    const __m256d u10 = broadcast(u[2]), u11 = broadcast(u[3]);
    for (std::size_t base = 0; base < state.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; i += 2) {
            const __m256d a = load(s + i);
            const __m256d b = load(s + i + stride);
            store(s + i, _mm256_add_pd(cmul(u00, a), cmul(u01, b)));
            store(s + i + stride, _mm256_add_pd(cmul(u10, a), cmul(u11, b)));
        }
    }
}

Mat2 qubit_partial_trace(std::span<const cplx> chi, std::span<const cplx> psi, int qubit) {
    const std::size_t stride = std::size_t{1} << qubit;
    if (stride == 1 || chi.size() < 4) return scalar::qubit_partial_trace(chi, psi, qubit);
    __m256d m00 = _mm256_setzero_pd(), m01 = _mm256_setzero_pd();
    __m256d m10 = _mm256_setzero_pd(), m11 = _mm256_setzero_pd();
    const cplx* c = chi.data();
    const cplx* p = psi.data();
    for (std::size_t base = 0; base < chi.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; i += 2) {
            const __m256d c0 = load(c + i), c1 = load(c + i + stride);
            const __m256d p0 = conj(load(p + i)), p1 = conj(load(p + i + stride));
            m00 = _mm256_add_pd(m00, cmul(c0, p0));
            m01 = _mm256_add_pd(m01, cmul(c0, p1));
            m10 = _mm256_add_pd(m10, cmul(c1, p0));
            m11 = _mm256_add_pd(m11, cmul(c1, p1));
        }
    }
    return {hsum(m00), hsum(m01), hsum(m10), hsum(m11)};
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    const __m256d a = broadcast(alpha);
    std::size_t i = 0;
    for (; i + 2 <= x.size(); i += 2) store(y.data() + i, _mm256_add_pd(load(y.data() + i), cmul(a, load(x.data() + i))));
    if (i < x.size()) scalar::axpy(alpha, x.subspan(i), y.subspan(i));
}

}  // namespace nld::kernels::avx2
