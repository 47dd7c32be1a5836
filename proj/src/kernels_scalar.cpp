#include "mqc/kernels.hpp"

namespace mqc::kernels {
namespace {

void apply_1q_scalar(cplx* amp, std::size_t dim, std::size_t mask, const cplx* m) {
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) continue;
        const cplx a = amp[i];
        const cplx b = amp[i | mask];
        amp[i] = m[0] * a + m[1] * b;
        amp[i | mask] = m[2] * a + m[3] * b;
    }
}

void apply_2q_scalar(cplx* amp, std::size_t dim, std::size_t mask_a, std::size_t mask_b,
                     const cplx* m) {
    const std::size_t both = mask_a | mask_b;
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & both) continue;
        const std::size_t i0 = i;
        const std::size_t i1 = i | mask_b;
        const std::size_t i2 = i | mask_a;
        const std::size_t i3 = i | both;
        const cplx v0 = amp[i0], v1 = amp[i1], v2 = amp[i2], v3 = amp[i3];
        amp[i0] = m[0] * v0 + m[1] * v1 + m[2] * v2 + m[3] * v3;
        amp[i1] = m[4] * v0 + m[5] * v1 + m[6] * v2 + m[7] * v3;
        amp[i2] = m[8] * v0 + m[9] * v1 + m[10] * v2 + m[11] * v3;
        amp[i3] = m[12] * v0 + m[13] * v1 + m[14] * v2 + m[15] * v3;
    }
}

double norm_sq_scalar(const cplx* amp, std::size_t dim) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += std::norm(amp[i]);
    return s;
}

void scale_scalar(cplx* amp, std::size_t dim, double factor) {
    for (std::size_t i = 0; i < dim; ++i) amp[i] *= factor;
}

const Ops kScalar = {"scalar", apply_1q_scalar, apply_2q_scalar, norm_sq_scalar, scale_scalar};

}  // namespace

const Ops& scalar_ops() { return kScalar; }

}  // namespace mqc::kernels
