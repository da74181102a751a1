// Complex/Hermitian linear algebra kernels: cyclic Jacobi eigendecomposition,
// generalized eigenpairs through the symmetric-definite reduction, PSD tests
// and the complex-to-real embedding used by the SDP core.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace afsec {

using cdouble = std::complex<double>;
using cvector = std::vector<cdouble>;

inline double abs2(cdouble z) {
    return z.real() * z.real() + z.imag() * z.imag();
}

// v†w
inline cdouble inner(const cvector& v, const cvector& w) {
    if (v.size() != w.size()) {
        throw std::invalid_argument("inner: size mismatch");
    }
    cdouble acc{};
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += std::conj(v[i]) * w[i];
    }
    return acc;
}

inline double norm_squared(const cvector& v) {
    double acc = 0.0;
    for (const auto& z : v) acc += abs2(z);
    return acc;
}

inline double norm(const cvector& v) { return std::sqrt(norm_squared(v)); }

class SingularPencilError : public std::runtime_error {
public:
    explicit SingularPencilError(const std::string& what)
        : std::runtime_error(what) {}
};

// Dense Hermitian matrix. Construction symmetrizes to (A + A†)/2 and keeps
// the diagonal exactly real, so A == A† holds by storage.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(std::size_t n) : n_(n), a_(n * n) {}

    static HermitianMatrix from_entries(std::size_t n, const cvector& entries) {
        if (entries.size() != n * n) {
            throw std::invalid_argument("from_entries: need n*n entries");
        }
        HermitianMatrix h(n);
        for (std::size_t i = 0; i < n; ++i) {
            h.a_[i * n + i] = cdouble{entries[i * n + i].real(), 0.0};
            for (std::size_t j = i + 1; j < n; ++j) {
                const cdouble z =
                    0.5 * (entries[i * n + j] + std::conj(entries[j * n + i]));
                h.a_[i * n + j] = z;
                h.a_[j * n + i] = std::conj(z);
            }
        }
        return h;
    }

    static HermitianMatrix identity(std::size_t n) {
        HermitianMatrix h(n);
        for (std::size_t i = 0; i < n; ++i) h.a_[i * n + i] = 1.0;
        return h;
    }

    static HermitianMatrix diagonal(const std::vector<double>& d) {
        HermitianMatrix h(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) h.a_[i * d.size() + i] = d[i];
        return h;
    }

    // vv†
    static HermitianMatrix outer(const cvector& v) {
        HermitianMatrix h(v.size());
        const std::size_t n = v.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                h.a_[i * n + j] = v[i] * std::conj(v[j]);
            }
            h.a_[i * n + i] = cdouble{h.a_[i * n + i].real(), 0.0};
        }
        return h;
    }

    std::size_t dim() const { return n_; }

    cdouble operator()(std::size_t i, std::size_t j) const {
        return a_[i * n_ + j];
    }

    // writes (i,j) and its mirror; the diagonal keeps only the real part
    void set(std::size_t i, std::size_t j, cdouble z) {
        if (i == j) {
            a_[i * n_ + i] = cdouble{z.real(), 0.0};
        } else {
            a_[i * n_ + j] = z;
            a_[j * n_ + i] = std::conj(z);
        }
    }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < n_; ++i) t += a_[i * n_ + i].real();
        return t;
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (const auto& z : a_) acc += abs2(z);
        return std::sqrt(acc);
    }

    // A•B = Tr(A†B), real for a Hermitian pair
    double frobenius_inner(const HermitianMatrix& b) const {
        if (b.n_ != n_) throw std::invalid_argument("frobenius_inner: dim mismatch");
        double acc = 0.0;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            acc += a_[i].real() * b.a_[i].real() + a_[i].imag() * b.a_[i].imag();
        }
        return acc;
    }

    cvector apply(const cvector& x) const {
        if (x.size() != n_) throw std::invalid_argument("apply: dim mismatch");
        cvector y(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            cdouble acc{};
            for (std::size_t j = 0; j < n_; ++j) acc += a_[i * n_ + j] * x[j];
            y[i] = acc;
        }
        return y;
    }

    // x†Ax (real part; exact for Hermitian A)
    double quad_form(const cvector& x) const {
        if (x.size() != n_) throw std::invalid_argument("quad_form: dim mismatch");
        double acc = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            acc += a_[i * n_ + i].real() * abs2(x[i]);
            for (std::size_t j = i + 1; j < n_; ++j) {
                acc += 2.0 * (std::conj(x[i]) * a_[i * n_ + j] * x[j]).real();
            }
        }
        return acc;
    }

    bool all_finite() const {
        for (const auto& z : a_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
        return true;
    }

    HermitianMatrix& operator+=(const HermitianMatrix& o) {
        if (o.n_ != n_) throw std::invalid_argument("operator+=: dim mismatch");
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    HermitianMatrix& operator-=(const HermitianMatrix& o) {
        if (o.n_ != n_) throw std::invalid_argument("operator-=: dim mismatch");
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    HermitianMatrix& operator*=(double s) {
        for (auto& z : a_) z *= s;
        return *this;
    }

    friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) {
        a += b;
        return a;
    }
    friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) {
        a -= b;
        return a;
    }
    friend HermitianMatrix operator*(double s, HermitianMatrix a) {
        a *= s;
        return a;
    }

private:
    std::size_t n_ = 0;
    cvector a_;  // row-major
};

// Dense real symmetric matrix (storage mirrors on set).
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    std::size_t dim() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double x) {
        a_[i * n_ + j] = x;
        a_[j * n_ + i] = x;
    }
    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < n_; ++i) t += a_[i * n_ + i];
        return t;
    }
    double frobenius_norm() const {
        double acc = 0.0;
        for (double x : a_) acc += x * x;
        return std::sqrt(acc);
    }

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

namespace detail {

inline double conj_val(double x) { return x; }
inline cdouble conj_val(const cdouble& z) { return std::conj(z); }
inline double abs_sq(double x) { return x * x; }
inline double abs_sq(const cdouble& z) { return abs2(z); }
inline double real_part(double x) { return x; }
inline double real_part(const cdouble& z) { return z.real(); }

template <class Scalar>
double off_diagonal_norm(std::size_t n, const std::vector<Scalar>& a) {
    double acc = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) acc += abs_sq(a[p * n + q]);
    }
    return std::sqrt(2.0 * acc);
}

// Cyclic Jacobi diagonalization of a Hermitian (Scalar = cdouble) or real
// symmetric (Scalar = double) matrix. `a` is overwritten with the diagonal
// form, `v` receives the accumulated unitary (columns are eigenvectors).
// Returns true once the off-diagonal norm drops below tol * ||A||_F.
template <class Scalar>
bool jacobi_cyclic(std::size_t n, std::vector<Scalar>& a, std::vector<Scalar>& v,
                   double tol, int max_sweeps) {
    v.assign(n * n, Scalar{});
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = Scalar{1.0};
    double fro = 0.0;
    for (const auto& z : a) fro += abs_sq(z);
    fro = std::sqrt(fro);
    if (fro == 0.0) return true;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(n, a) <= tol * fro) return true;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Scalar apq = a[p * n + q];
                const double apq2 = abs_sq(apq);
                if (apq2 == 0.0) continue;
                const double alpha = real_part(a[p * n + p]);
                const double beta = real_part(a[q * n + q]);
                const double absa = std::sqrt(apq2);
                if (absa <= 1e-18 * (std::abs(alpha) + std::abs(beta))) {
                    a[p * n + q] = Scalar{};
                    a[q * n + p] = Scalar{};
                    continue;
                }
                const Scalar phase = apq / absa;
                const double tau = (beta - alpha) / (2.0 * absa);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Scalar sph = s * conj_val(phase);
                const Scalar cph = c * conj_val(phase);

                for (std::size_t j = 0; j < n; ++j) {
                    if (j == p || j == q) continue;
                    const Scalar ajp = a[j * n + p];
                    const Scalar ajq = a[j * n + q];
                    a[j * n + p] = c * ajp - sph * ajq;
                    a[j * n + q] = s * ajp + cph * ajq;
                    a[p * n + j] = conj_val(a[j * n + p]);
                    a[q * n + j] = conj_val(a[j * n + q]);
                }
                a[p * n + p] = Scalar{alpha - t * absa};
                a[q * n + q] = Scalar{beta + t * absa};
                a[p * n + q] = Scalar{};
                a[q * n + p] = Scalar{};

                for (std::size_t j = 0; j < n; ++j) {
                    const Scalar vjp = v[j * n + p];
                    const Scalar vjq = v[j * n + q];
                    v[j * n + p] = c * vjp - sph * vjq;
                    v[j * n + q] = s * vjp + cph * vjq;
                }
            }
        }
    }
    return off_diagonal_norm(n, a) <= tol * fro;
}

// descending eigenvalue order; ties keep first occurrence
inline std::vector<std::size_t> descending_order(const std::vector<double>& w) {
    std::vector<std::size_t> idx(w.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&w](std::size_t a, std::size_t b) { return w[a] > w[b]; });
    return idx;
}

// global phase fixed so the largest-magnitude entry is real positive
inline void fix_phase(cvector& v) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double m = abs2(v[i]);
        if (m > best) {
            best = m;
            arg = i;
        }
    }
    if (best == 0.0) return;
    const cdouble ph = v[arg] / std::sqrt(best);
    for (auto& z : v) z *= std::conj(ph);
    v[arg] = cdouble{std::abs(v[arg]), 0.0};
}

inline void fix_sign(std::vector<double>& v) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double m = std::abs(v[i]);
        if (m > best) {
            best = m;
            arg = i;
        }
    }
    if (best > 0.0 && v[arg] < 0.0) {
        for (auto& x : v) x = -x;
    }
}

}  // namespace detail

struct EigenDecomposition {
    std::vector<double> eigenvalues;    // descending
    std::vector<cvector> eigenvectors;  // unit norm, phase-fixed
};

struct SymmetricEigenDecomposition {
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenvectors;
};

inline EigenDecomposition hermitian_eig(const HermitianMatrix& A,
                                        double tol = 1e-12,
                                        int max_sweeps = 100) {
    if (!A.all_finite()) {
        throw std::invalid_argument("hermitian_eig: non-finite entries");
    }
    const std::size_t n = A.dim();
    cvector a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = A(i, j);
    }
    cvector v;
    if (!detail::jacobi_cyclic(n, a, v, tol, max_sweeps)) {
        throw std::runtime_error("hermitian_eig: Jacobi sweeps did not converge");
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = a[i * n + i].real();
    const auto order = detail::descending_order(w);

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = w[order[k]];
        cvector col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = v[i * n + order[k]];
        detail::fix_phase(col);
        out.eigenvectors[k] = std::move(col);
    }
    return out;
}

inline SymmetricEigenDecomposition symmetric_eig(const SymmetricMatrix& A,
                                                 double tol = 1e-12,
                                                 int max_sweeps = 100) {
    const std::size_t n = A.dim();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double x = A(i, j);
            if (!std::isfinite(x)) {
                throw std::invalid_argument("symmetric_eig: non-finite entries");
            }
            a[i * n + j] = x;
        }
    }
    std::vector<double> v;
    if (!detail::jacobi_cyclic(n, a, v, tol, max_sweeps)) {
        throw std::runtime_error("symmetric_eig: Jacobi sweeps did not converge");
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = a[i * n + i];
    const auto order = detail::descending_order(w);

    SymmetricEigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = w[order[k]];
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = v[i * n + order[k]];
        detail::fix_sign(col);
        out.eigenvectors[k] = std::move(col);
    }
    return out;
}

inline std::pair<double, cvector> principal_component(const HermitianMatrix& A) {
    auto eig = hermitian_eig(A);
    if (eig.eigenvalues.empty()) {
        throw std::invalid_argument("principal_component: empty matrix");
    }
    return {eig.eigenvalues.front(), eig.eigenvectors.front()};
}

inline bool is_psd(const HermitianMatrix& A, double tol = 1e-9) {
    if (A.dim() == 0) return true;
    const auto eig = hermitian_eig(A);
    return eig.eigenvalues.back() >= -tol * std::max(1.0, A.frobenius_norm());
}

// [[Re A, -Im A], [Im A, Re A]] — spectrum of A with doubled multiplicity
inline SymmetricMatrix complex_to_real(const HermitianMatrix& A) {
    const std::size_t n = A.dim();
    SymmetricMatrix s(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const cdouble z = A(i, j);
            s.set(i, j, z.real());
            s.set(n + i, n + j, z.real());
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double im = A(i, j).imag();
            // lower-left block is +Im A; set() mirrors into the upper right
            s.set(n + i, j, im);
        }
    }
    return s;
}

namespace detail {

// lower-triangular L with A = LL†; throws if A is not positive definite
inline cvector cholesky(const HermitianMatrix& A) {
    const std::size_t n = A.dim();
    cvector L(n * n, cdouble{});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            cdouble acc = A(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                acc -= L[i * n + k] * std::conj(L[j * n + k]);
            }
            if (i == j) {
                const double d = acc.real();
                if (!(d > 0.0) || !std::isfinite(d)) {
                    throw std::invalid_argument("cholesky: matrix is not positive definite");
                }
                L[i * n + i] = std::sqrt(d);
            } else {
                L[i * n + j] = acc / L[j * n + j].real();
            }
        }
    }
    return L;
}

// X = L⁻¹ B for lower-triangular L (B dense n×n, column-wise forward solves)
inline cvector forward_solve(std::size_t n, const cvector& L, const cvector& B) {
    cvector X(n * n);
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            cdouble acc = B[i * n + col];
            for (std::size_t k = 0; k < i; ++k) acc -= L[i * n + k] * X[k * n + col];
            X[i * n + col] = acc / L[i * n + i].real();
        }
    }
    return X;
}

// solves L† x = b (back substitution)
inline cvector adjoint_solve(std::size_t n, const cvector& L, const cvector& b) {
    cvector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        cdouble acc = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) {
            acc -= std::conj(L[k * n + ii]) * x[k];
        }
        x[ii] = acc / L[ii * n + ii].real();
    }
    return x;
}

inline cvector adjoint_dense(std::size_t n, const cvector& M) {
    cvector out(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out[i * n + j] = std::conj(M[j * n + i]);
    }
    return out;
}

}  // namespace detail

struct GeneralizedEigenPair {
    double lambda = 0.0;
    cvector eigenvector;
};

// Smallest eigenvalue of the pencil A v = λ B v over directions with
// v†Bv > 0, for A positive definite and B Hermitian invertible. Reduction:
// with A = LL† and S = L⁻¹BL⁻†, the pencil eigenvalues are 1/μ over the
// spectrum μ of S, so the answer is 1/μ_max when μ_max > 0. Returns nullopt
// when no direction with v†Bv > 0 exists.
inline std::optional<GeneralizedEigenPair> min_generalized_eig(
    const HermitianMatrix& A, const HermitianMatrix& B,
    double singular_tol = 1e-12) {
    const std::size_t n = A.dim();
    if (B.dim() != n) throw std::invalid_argument("min_generalized_eig: dim mismatch");
    if (n == 0) throw std::invalid_argument("min_generalized_eig: empty pencil");

    const cvector L = detail::cholesky(A);
    cvector Bd(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) Bd[i * n + j] = B(i, j);
    }
    const cvector W = detail::forward_solve(n, L, Bd);
    const cvector S_raw =
        detail::adjoint_dense(n, detail::forward_solve(n, L, detail::adjoint_dense(n, W)));
    const auto S = HermitianMatrix::from_entries(n, S_raw);
    const auto eig = hermitian_eig(S);

    double mu_abs_max = 0.0;
    double mu_abs_min = std::numeric_limits<double>::infinity();
    for (double mu : eig.eigenvalues) {
        mu_abs_max = std::max(mu_abs_max, std::abs(mu));
        mu_abs_min = std::min(mu_abs_min, std::abs(mu));
    }
    if (mu_abs_max == 0.0 || mu_abs_min <= singular_tol * mu_abs_max) {
        throw SingularPencilError("min_generalized_eig: B is singular within tolerance");
    }
    const double mu_max = eig.eigenvalues.front();
    if (mu_max <= 0.0) return std::nullopt;

    GeneralizedEigenPair out;
    out.lambda = 1.0 / mu_max;
    out.eigenvector = detail::adjoint_solve(n, L, eig.eigenvectors.front());
    const double nv = norm(out.eigenvector);
    if (nv > 0.0) {
        for (auto& z : out.eigenvector) z /= nv;
    }
    detail::fix_phase(out.eigenvector);
    return out;
}

}  // namespace afsec
