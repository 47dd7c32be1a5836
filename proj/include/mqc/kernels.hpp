#pragma once

#include <complex>
#include <cstddef>

// Inner loops of the state-vector simulator. A scalar reference
// implementation always exists; an AVX2 variant is selected at runtime on
// CPUs that support it. The two are equivalence-tested against each other.
namespace mqc::kernels {

using cplx = std::complex<double>;

struct Ops {
    const char* name;
    // Apply a 2x2 matrix m (row-major) to the qubit whose basis-index bit is
    // `mask` (a power of two). `dim` is the amplitude count.
    void (*apply_1q)(cplx* amp, std::size_t dim, std::size_t mask, const cplx* m);
    // Apply a 4x4 matrix m (row-major) to the qubit pair with bit masks
    // (mask_a, mask_b); mask_a indexes the high bit of the 2-bit row index.
    void (*apply_2q)(cplx* amp, std::size_t dim, std::size_t mask_a, std::size_t mask_b,
                     const cplx* m);
    double (*norm_sq)(const cplx* amp, std::size_t dim);
    void (*scale)(cplx* amp, std::size_t dim, double factor);
};

const Ops& scalar_ops();

/// AVX2 implementation, or nullptr when the CPU lacks AVX2/FMA.
const Ops* avx2_ops();

/// The implementation in use. Auto-detected on first call; the environment
/// variable MQC_KERNELS=scalar|avx2 overrides detection.
const Ops& active();

/// Force a specific implementation (nullptr restores auto-detection).
void set_active(const Ops* ops);

}  // namespace mqc::kernels
