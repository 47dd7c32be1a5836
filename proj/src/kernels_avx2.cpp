// AVX2 variants of the amplitude kernels. Compiled with -mavx2 -mfma; the
// dispatcher only hands these out when the CPU reports both features.
#include "mqc/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace mqc::kernels {
namespace {

// Two complex doubles per __m256d lane: [re0, im0, re1, im1].
inline __m256d cmul(__m256d v, __m256d cr, __m256d ci) {
    const __m256d t = _mm256_mul_pd(v, cr);
    const __m256d sw = _mm256_permute_pd(v, 0x5);  // [im0, re0, im1, re1]
    return _mm256_addsub_pd(t, _mm256_mul_pd(sw, ci));
}

struct Coef {
    __m256d re, im;
    explicit Coef(cplx c) : re(_mm256_set1_pd(c.real())), im(_mm256_set1_pd(c.imag())) {}
};

void apply_1q_avx2(cplx* amp, std::size_t dim, std::size_t mask, const cplx* m) {
    if (mask < 2) {  // target is the lowest bit; pairs are interleaved
        for (std::size_t i = 0; i < dim; i += 2) {
            const cplx a = amp[i], b = amp[i + 1];
            amp[i] = m[0] * a + m[1] * b;
            amp[i + 1] = m[2] * a + m[3] * b;
        }
        return;
    }
    const Coef m00(m[0]), m01(m[1]), m10(m[2]), m11(m[3]);
    double* p = reinterpret_cast<double*>(amp);
    for (std::size_t base = 0; base < dim; base += mask << 1) {
        for (std::size_t off = 0; off < mask; off += 2) {
            double* p0 = p + 2 * (base + off);
            double* p1 = p + 2 * (base + off + mask);
            const __m256d a = _mm256_loadu_pd(p0);
            const __m256d b = _mm256_loadu_pd(p1);
            _mm256_storeu_pd(p0, _mm256_add_pd(cmul(a, m00.re, m00.im), cmul(b, m01.re, m01.im)));
            _mm256_storeu_pd(p1, _mm256_add_pd(cmul(a, m10.re, m10.im), cmul(b, m11.re, m11.im)));
        }
    }
}

void apply_2q_avx2(cplx* amp, std::size_t dim, std::size_t mask_a, std::size_t mask_b,
                   const cplx* m) {
    const std::size_t both = mask_a | mask_b;
    if (both & 1) {  // a target sits on the lowest bit; no contiguous pairs
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & both) continue;
            const cplx v0 = amp[i], v1 = amp[i | mask_b], v2 = amp[i | mask_a], v3 = amp[i | both];
            amp[i] = m[0] * v0 + m[1] * v1 + m[2] * v2 + m[3] * v3;
            amp[i | mask_b] = m[4] * v0 + m[5] * v1 + m[6] * v2 + m[7] * v3;
            amp[i | mask_a] = m[8] * v0 + m[9] * v1 + m[10] * v2 + m[11] * v3;
            amp[i | both] = m[12] * v0 + m[13] * v1 + m[14] * v2 + m[15] * v3;
        }
        return;
    }
    Coef c[16] = {Coef(m[0]),  Coef(m[1]),  Coef(m[2]),  Coef(m[3]),
                  Coef(m[4]),  Coef(m[5]),  Coef(m[6]),  Coef(m[7]),
                  Coef(m[8]),  Coef(m[9]),  Coef(m[10]), Coef(m[11]),
                  Coef(m[12]), Coef(m[13]), Coef(m[14]), Coef(m[15])};
    double* p = reinterpret_cast<double*>(amp);
    for (std::size_t i = 0; i < dim; i += 2) {
        if (i & both) continue;
        double* p0 = p + 2 * i;
        double* p1 = p + 2 * (i | mask_b);
        double* p2 = p + 2 * (i | mask_a);
        double* p3 = p + 2 * (i | both);
        const __m256d v0 = _mm256_loadu_pd(p0);
        const __m256d v1 = _mm256_loadu_pd(p1);
        const __m256d v2 = _mm256_loadu_pd(p2);
        const __m256d v3 = _mm256_loadu_pd(p3);
        for (int r = 0; r < 4; ++r) {
            __m256d acc = cmul(v0, c[4 * r + 0].re, c[4 * r + 0].im);
            acc = _mm256_add_pd(acc, cmul(v1, c[4 * r + 1].re, c[4 * r + 1].im));
            acc = _mm256_add_pd(acc, cmul(v2, c[4 * r + 2].re, c[4 * r + 2].im));
            acc = _mm256_add_pd(acc, cmul(v3, c[4 * r + 3].re, c[4 * r + 3].im));
            double* dst = r == 0 ? p0 : r == 1 ? p1 : r == 2 ? p2 : p3;
            _mm256_storeu_pd(dst, acc);
        }
    }
}

double norm_sq_avx2(const cplx* amp, std::size_t dim) {
    const double* p = reinterpret_cast<const double*>(amp);
    const std::size_t n = 2 * dim;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) s += p[i] * p[i];
    return s;
}

void scale_avx2(cplx* amp, std::size_t dim, double factor) {
    double* p = reinterpret_cast<double*>(amp);
    const std::size_t n = 2 * dim;
    const __m256d f = _mm256_set1_pd(factor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(p + i, _mm256_mul_pd(_mm256_loadu_pd(p + i), f));
    for (; i < n; ++i) p[i] *= factor;
}

const Ops kAvx2 = {"avx2", apply_1q_avx2, apply_2q_avx2, norm_sq_avx2, scale_avx2};

}  // namespace

const Ops* avx2_ops() {
    static const bool supported =
        __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &kAvx2 : nullptr;
}

}  // namespace mqc::kernels

#else

namespace mqc::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace mqc::kernels

#endif
