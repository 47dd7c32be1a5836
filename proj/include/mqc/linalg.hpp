#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace mqc {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double theta) {
    double t = std::fmod(theta, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    return t;
}

/// Small dense complex matrix. Only used for gates, observables and
/// projectors (2x2 and 4x4), plus test oracles that build full operators.
class CMat {
public:
    CMat() : rows_(0), cols_(0) {}
    CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}
    CMat(int rows, int cols, std::initializer_list<cplx> vals) : CMat(rows, cols) {
        if (vals.size() != a_.size()) throw std::invalid_argument("CMat: initializer size mismatch");
        std::size_t i = 0;
        for (const cplx& v : vals) a_[i++] = v;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    cplx& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    const cplx& operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    const cplx* data() const { return a_.data(); }

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    CMat adjoint() const {
        CMat m(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
        return m;
    }

    friend CMat operator*(const CMat& a, const CMat& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("CMat: dimension mismatch in product");
        CMat m(a.rows_, b.cols_);
        for (int r = 0; r < a.rows_; ++r)
            for (int k = 0; k < a.cols_; ++k) {
                const cplx ark = a(r, k);
                if (ark == cplx{}) continue;
                for (int c = 0; c < b.cols_; ++c) m(r, c) += ark * b(k, c);
            }
        return m;
    }

    friend CMat operator+(const CMat& a, const CMat& b) {
        CMat m(a.rows_, a.cols_);
        for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = a.a_[i] + b.a_[i];
        return m;
    }

    friend CMat operator-(const CMat& a, const CMat& b) {
        CMat m(a.rows_, a.cols_);
        for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = a.a_[i] - b.a_[i];
        return m;
    }

    friend CMat operator*(cplx s, const CMat& a) {
        CMat m(a.rows_, a.cols_);
        for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = s * a.a_[i];
        return m;
    }

private:
    int rows_, cols_;
    std::vector<cplx> a_;
};

inline CMat kron(const CMat& a, const CMat& b) {
    CMat m(a.rows() * b.rows(), a.cols() * b.cols());
    for (int ra = 0; ra < a.rows(); ++ra)
        for (int ca = 0; ca < a.cols(); ++ca)
            for (int rb = 0; rb < b.rows(); ++rb)
                for (int cb = 0; cb < b.cols(); ++cb)
                    m(ra * b.rows() + rb, ca * b.cols() + cb) = a(ra, ca) * b(rb, cb);
    return m;
}

inline double max_abs_diff(const CMat& a, const CMat& b) {
    double d = 0.0;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) d = std::max(d, std::abs(a(r, c) - b(r, c)));
    return d;
}

inline bool approx_equal(const CMat& a, const CMat& b, double tol) {
    return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= tol;
}

inline bool is_unitary(const CMat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return approx_equal(m.adjoint() * m, CMat::identity(m.rows()), tol);
}

}  // namespace mqc
