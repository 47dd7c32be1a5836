#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mqc/kernels.hpp"
#include "mqc/linalg.hpp"

using namespace mqc;
using kernels::Ops;

namespace {

std::vector<cplx> random_amps(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> v(dim);
    for (auto& a : v) a = cplx{g(rng), g(rng)};
    return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Reference: embed the small matrix into the full 2^n operator and multiply.
std::vector<cplx> dense_apply(const std::vector<cplx>& amp, const CMat& gate,
                              const std::vector<int>& bit_positions, int n) {
    const std::size_t dim = amp.size();
    std::vector<cplx> out(dim);
    const int k = static_cast<int>(bit_positions.size());
    for (std::size_t row = 0; row < dim; ++row) {
        for (std::size_t col = 0; col < dim; ++col) {
            // rows/cols must agree outside the target bits
            std::size_t strip_r = row, strip_c = col;
            int gr = 0, gc = 0;
            for (int b = 0; b < k; ++b) {
                const std::size_t m = std::size_t{1} << bit_positions[b];
                gr = (gr << 1) | ((row & m) ? 1 : 0);
                gc = (gc << 1) | ((col & m) ? 1 : 0);
                strip_r &= ~m;
                strip_c &= ~m;
            }
            if (strip_r != strip_c) continue;
            out[row] += gate(gr, gc) * amp[col];
        }
    }
    (void)n;
    return out;
}

}  // namespace

TEST_CASE("scalar apply_1q matches dense embedding") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int n = 1; n <= 5; ++n) {
        const std::size_t dim = std::size_t{1} << n;
        for (int bit = 0; bit < n; ++bit) {
            auto amp = random_amps(dim, rng);
            CMat m(2, 2);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) m(r, c) = cplx{g(rng), g(rng)};
            auto expect = dense_apply(amp, m, {bit}, n);
            auto got = amp;
            kernels::scalar_ops().apply_1q(got.data(), dim, std::size_t{1} << bit, m.data());
            CHECK(max_diff(got, expect) < 1e-12);
        }
    }
}

TEST_CASE("scalar apply_2q matches dense embedding") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int n = 2; n <= 5; ++n) {
        const std::size_t dim = std::size_t{1} << n;
        for (int ba = 0; ba < n; ++ba) {
            for (int bb = 0; bb < n; ++bb) {
                if (ba == bb) continue;
                auto amp = random_amps(dim, rng);
                CMat m(4, 4);
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c) m(r, c) = cplx{g(rng), g(rng)};
                auto expect = dense_apply(amp, m, {ba, bb}, n);
                auto got = amp;
                kernels::scalar_ops().apply_2q(got.data(), dim, std::size_t{1} << ba,
                                               std::size_t{1} << bb, m.data());
                CHECK(max_diff(got, expect) < 1e-12);
            }
        }
    }
}

TEST_CASE("avx2 kernels agree with scalar") {
    const Ops* v = kernels::avx2_ops();
    if (!v) {
        MESSAGE("AVX2 not available; skipping");
        return;
    }
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int n = 1; n <= 8; ++n) {
        const std::size_t dim = std::size_t{1} << n;
        // apply_1q on every bit
        for (int bit = 0; bit < n; ++bit) {
            auto amp = random_amps(dim, rng);
            cplx m[4];
            for (auto& c : m) c = cplx{g(rng), g(rng)};
            auto a = amp, b = amp;
            kernels::scalar_ops().apply_1q(a.data(), dim, std::size_t{1} << bit, m);
            v->apply_1q(b.data(), dim, std::size_t{1} << bit, m);
            CHECK(max_diff(a, b) < 1e-12);
        }
        // apply_2q on every ordered bit pair
        for (int ba = 0; ba < n; ++ba) {
            for (int bb = 0; bb < n; ++bb) {
                if (ba == bb) continue;
                auto amp = random_amps(dim, rng);
                cplx m[16];
                for (auto& c : m) c = cplx{g(rng), g(rng)};
                auto a = amp, b = amp;
                kernels::scalar_ops().apply_2q(a.data(), dim, std::size_t{1} << ba,
                                               std::size_t{1} << bb, m);
                v->apply_2q(b.data(), dim, std::size_t{1} << ba, std::size_t{1} << bb, m);
                CHECK(max_diff(a, b) < 1e-12);
            }
        }
        // norm_sq and scale
        auto amp = random_amps(dim, rng);
        CHECK(std::abs(kernels::scalar_ops().norm_sq(amp.data(), dim) -
                       v->norm_sq(amp.data(), dim)) < 1e-10);
        auto a = amp, b = amp;
        kernels::scalar_ops().scale(a.data(), dim, 0.37);
        v->scale(b.data(), dim, 0.37);
        CHECK(max_diff(a, b) == 0.0);
    }
}

TEST_CASE("active() honors set_active override") {
    kernels::set_active(&kernels::scalar_ops());
    CHECK(std::string(kernels::active().name) == "scalar");
    kernels::set_active(nullptr);
}
