#include "nld/kernels.hpp"

#include <cstdlib>

namespace nld::kernels {

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool available(Isa isa) {
    if (isa == Isa::Scalar) return true;
#if defined(NLD_HAVE_AVX2)
    static const bool has = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
    }();
    return has;
#else
    return false;
#endif
}

const Table& table(Isa isa) {
    static const Table scalar_table{&scalar::class_popcounts, &scalar::apply_qubit,
                                    &scalar::qubit_partial_trace, &scalar::axpy};
#if defined(NLD_HAVE_AVX2)
    static const Table avx2_table{&avx2::class_popcounts, &avx2::apply_qubit,
                                  &avx2::qubit_partial_trace, &avx2::axpy};
    if (isa == Isa::Avx2 && available(Isa::Avx2)) return avx2_table;
#endif
    (void)isa;
    return scalar_table;
}

Isa active_isa() {
    static const Isa isa = [] {
        const char* force = std::getenv("NLD_FORCE_SCALAR");
        if (force != nullptr && *force != '\0' && *force != '0') return Isa::Scalar;
        return available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
    }();
    return isa;
}

const Table& active() { return table(active_isa()); }

}  // namespace nld::kernels
