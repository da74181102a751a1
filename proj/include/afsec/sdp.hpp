// Standard-form semidefinite programming over Hermitian matrices with
// Frobenius-product constraints, plus rank-one extraction.
//
// The complex problem is mapped to the real symmetric embedding
// Y = [[Re X, -Im X], [Im X, Re X]] (A•X = ½ R(A)•Y), augmented with the
// embedding-symmetry equalities, and solved by ADMM operator splitting:
// an affine least-squares step with nonnegative slacks on one side and a
// projection onto the PSD cone on the other. The iteration is a plain
// deterministic loop, so a problem solved twice gives bit-identical output.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "afsec/numerics.hpp"

namespace afsec {

enum class Relation { LessEq, GreaterEq, Equal };
enum class Sense { Minimize, Maximize };
enum class SolveStatus { Optimal, Infeasible, MaxIterations };

struct SDPConstraint {
    HermitianMatrix lhs;  // A_j
    Relation rel = Relation::LessEq;
    double rhs = 0.0;     // b_j
};

struct SDPProblem {
    Sense sense = Sense::Minimize;
    HermitianMatrix objective;  // C
    std::vector<SDPConstraint> constraints;

    std::size_t dim() const { return objective.dim(); }

    void validate() const {
        if (dim() == 0) throw std::invalid_argument("SDPProblem: empty variable");
        if (!objective.all_finite()) {
            throw std::invalid_argument("SDPProblem: non-finite objective");
        }
        for (const auto& c : constraints) {
            if (c.lhs.dim() != dim()) {
                throw std::invalid_argument("SDPProblem: constraint dimension mismatch");
            }
            if (!c.lhs.all_finite() || !std::isfinite(c.rhs)) {
                throw std::invalid_argument("SDPProblem: non-finite constraint data");
            }
        }
    }
};

struct SolverSettings {
    double eps_feas = 1e-7;
    double eps_abs = 1e-9;
    std::size_t max_iterations = 50000;
    double rho = 1.0;  // initial penalty; adapted by residual balancing
};

struct SDPSolution {
    HermitianMatrix X;
    double objective_value = 0.0;
    SolveStatus status = SolveStatus::MaxIterations;
    double primal_residual = 0.0;   // max scaled violation over the constraints
    double eigenvalue_floor = 0.0;  // lambda_min(X)
    std::size_t iterations = 0;
};

struct ConstraintResidual {
    double slack = 0.0;      // A_j•X - b_j
    double violation = 0.0;  // 0 when the relation holds
};

struct ResidualReport {
    std::vector<ConstraintResidual> constraints;
    double lambda_min = 0.0;
    double max_scaled_violation = 0.0;  // max_j violation_j / max(1, |b_j|)
};

struct Rank1Extraction {
    cvector factor;    // sqrt(lambda_max) * principal eigenvector
    double gap = 0.0;  // 1 - lambda_max / sum_j lambda_j, in [0, 1]
};

inline ResidualReport residual_report(const SDPProblem& problem,
                                      const HermitianMatrix& X) {
    ResidualReport rep;
    rep.constraints.reserve(problem.constraints.size());
    for (const auto& c : problem.constraints) {
        ConstraintResidual r;
        r.slack = c.lhs.frobenius_inner(X) - c.rhs;
        switch (c.rel) {
            case Relation::LessEq: r.violation = std::max(r.slack, 0.0); break;
            case Relation::GreaterEq: r.violation = std::max(-r.slack, 0.0); break;
            case Relation::Equal: r.violation = std::abs(r.slack); break;
        }
        rep.max_scaled_violation = std::max(
            rep.max_scaled_violation, r.violation / std::max(1.0, std::abs(c.rhs)));
        rep.constraints.push_back(r);
    }
    if (X.dim() > 0) {
        rep.lambda_min = hermitian_eig(X).eigenvalues.back();
    }
    return rep;
}

inline Rank1Extraction extract_rank1(const HermitianMatrix& X) {
    const auto eig = hermitian_eig(X);
    double positive_mass = 0.0;
    for (double w : eig.eigenvalues) positive_mass += std::max(w, 0.0);
    Rank1Extraction out;
    if (positive_mass <= 1e-14 * std::max(1.0, X.frobenius_norm())) {
        out.factor.assign(X.dim(), cdouble{});  // zero-solution signal
        out.gap = 0.0;
        return out;
    }
    const double head = std::max(eig.eigenvalues.front(), 0.0);
    out.factor = eig.eigenvectors.front();
    const double scale = std::sqrt(head);
    for (auto& z : out.factor) z *= scale;
    out.gap = std::clamp(1.0 - head / positive_mass, 0.0, 1.0);
    return out;
}

namespace detail {

constexpr double kSqrt2 = 1.4142135623730951;

// svec layout for a symmetric n×n matrix: row-major upper triangle with
// off-diagonal weight sqrt(2), so dot(svec(A), svec(B)) = A•B.
struct SvecLayout {
    std::size_t n = 0;
    std::size_t size() const { return n * (n + 1) / 2; }
    std::size_t index(std::size_t i, std::size_t j) const {
        // requires i <= j
        return i * n - i * (i - 1) / 2 + (j - i);
    }
};

inline std::vector<double> svec_of(const SvecLayout& lay, const SymmetricMatrix& S) {
    std::vector<double> v(lay.size());
    std::size_t idx = 0;
    for (std::size_t i = 0; i < lay.n; ++i) {
        v[idx++] = S(i, i);
        for (std::size_t j = i + 1; j < lay.n; ++j) v[idx++] = kSqrt2 * S(i, j);
    }
    return v;
}

inline SymmetricMatrix unsvec(const SvecLayout& lay, const std::vector<double>& v) {
    SymmetricMatrix S(lay.n);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < lay.n; ++i) {
        S.set(i, i, v[idx++]);
        for (std::size_t j = i + 1; j < lay.n; ++j) S.set(i, j, v[idx++] / kSqrt2);
    }
    return S;
}

// svec(½ R(A)) — on embedded points dot(embed_svec(A), svec(Y)) = A•X
inline std::vector<double> embed_svec(const SvecLayout& lay, const HermitianMatrix& A) {
    const std::size_t n = A.dim();
    SymmetricMatrix R(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const cdouble z = A(i, j);
            R.set(i, j, 0.5 * z.real());
            R.set(n + i, n + j, 0.5 * z.real());
            R.set(n + i, j, 0.5 * z.imag());
        }
    }
    return svec_of(lay, R);
}

// X = (Y11 + Y22)/2 + i (Y21 - Y12)/2
inline HermitianMatrix complex_from_embedding(std::size_t n, const SymmetricMatrix& Y) {
    cvector entries(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double re = 0.5 * (Y(i, j) + Y(n + i, n + j));
            const double im = 0.5 * (Y(n + i, j) - Y(i, n + j));
            entries[i * n + j] = cdouble{re, im};
        }
    }
    return HermitianMatrix::from_entries(n, entries);
}

// dense SPD Cholesky (row-major m×m), lower factor in place of the input
inline std::vector<double> cholesky_real(std::size_t m, std::vector<double> a) {
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = a[i * m + j];
            for (std::size_t k = 0; k < j; ++k) acc -= a[i * m + k] * a[j * m + k];
            if (i == j) {
                if (!(acc > 0.0)) {
                    throw std::runtime_error("sdp: Gram matrix not positive definite");
                }
                a[i * m + i] = std::sqrt(acc);
            } else {
                a[i * m + j] = acc / a[j * m + j];
            }
        }
        for (std::size_t j = i + 1; j < m; ++j) a[i * m + j] = 0.0;
    }
    return a;
}

inline void spd_solve(std::size_t m, const std::vector<double>& L,
                      std::vector<double>& b) {
    for (std::size_t i = 0; i < m; ++i) {
        double acc = b[i];
        for (std::size_t k = 0; k < i; ++k) acc -= L[i * m + k] * b[k];
        b[i] = acc / L[i * m + i];
    }
    for (std::size_t ii = m; ii-- > 0;) {
        double acc = b[ii];
        for (std::size_t k = ii + 1; k < m; ++k) acc -= L[k * m + ii] * b[k];
        b[ii] = acc / L[ii * m + ii];
    }
}

struct EmbeddedProblem {
    SvecLayout lay;
    std::size_t m = 0;                 // total rows (original + symmetry)
    std::size_t n_original = 0;        // leading rows mirror problem.constraints
    std::vector<double> G;             // m×d, rows normalized
    std::vector<double> h;             // m
    std::vector<unsigned char> is_ineq;  // slack >= 0 rows (already in <= form)
    std::vector<double> c;             // internal minimization objective (svec)
};

// Diagonal congruence X = T X' T balancing the data: Ruiz-style passes drive
// the largest scaled entry of every coordinate row toward a common level
// across all matrices, taming problems where one constraint concentrates
// huge weight on a few coordinates (small thresholds do exactly that). The
// congruence preserves the PSD cone, which a plain per-column scaling of the
// embedded problem would not.
inline std::vector<double> equilibration_scaling(const SDPProblem& problem) {
    const std::size_t n = problem.dim();
    std::vector<double> t(n, 1.0);
    std::vector<const HermitianMatrix*> mats;
    mats.push_back(&problem.objective);
    for (const auto& c : problem.constraints) mats.push_back(&c.lhs);

    std::vector<double> rowmax(n);
    for (int pass = 0; pass < 8; ++pass) {
        std::fill(rowmax.begin(), rowmax.end(), 0.0);
        for (const HermitianMatrix* M : mats) {
            for (std::size_t i = 0; i < n; ++i) {
                double r = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    r = std::max(r, t[i] * t[j] * std::abs((*M)(i, j)));
                }
                rowmax[i] = std::max(rowmax[i], r);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (rowmax[i] > 0.0) {
                t[i] = std::clamp(t[i] / std::sqrt(rowmax[i]), 1e-8, 1e8);
            }
        }
    }
    return t;
}

inline HermitianMatrix congruence_scale(const HermitianMatrix& M,
                                        const std::vector<double>& t) {
    HermitianMatrix out(M.dim());
    for (std::size_t i = 0; i < M.dim(); ++i) {
        for (std::size_t j = i; j < M.dim(); ++j) out.set(i, j, t[i] * t[j] * M(i, j));
    }
    return out;
}

inline EmbeddedProblem embed_problem(const SDPProblem& problem) {
    const std::size_t n = problem.dim();
    EmbeddedProblem ep;
    ep.lay.n = 2 * n;
    const std::size_t d = ep.lay.size();

    ep.c = embed_svec(ep.lay, problem.objective);
    if (problem.sense == Sense::Maximize) {
        for (auto& x : ep.c) x = -x;
    }
    double cn = 0.0;
    for (double x : ep.c) cn += x * x;
    cn = std::sqrt(cn);
    if (cn > 0.0) {
        for (auto& x : ep.c) x /= cn;
    }

    std::vector<std::vector<double>> rows;
    for (const auto& con : problem.constraints) {
        std::vector<double> g = embed_svec(ep.lay, con.lhs);
        double b = con.rhs;
        if (con.rel == Relation::GreaterEq) {
            for (auto& x : g) x = -x;
            b = -b;
        }
        double gn = 0.0;
        for (double x : g) gn += x * x;
        gn = std::sqrt(gn);
        const double sc = gn > 0.0 ? 1.0 / gn : 1.0;
        for (auto& x : g) x *= sc;
        rows.push_back(std::move(g));
        ep.h.push_back(b * sc);
        ep.is_ineq.push_back(con.rel == Relation::Equal ? 0 : 1);
    }
    ep.n_original = rows.size();

    // embedding-symmetry equalities: Y11 = Y22, diag(Y21) = 0 and Y21 skew
    auto push_sym = [&](std::vector<double> g) {
        double gn = 0.0;
        for (double x : g) gn += x * x;
        gn = std::sqrt(gn);
        for (auto& x : g) x /= gn;
        rows.push_back(std::move(g));
        ep.h.push_back(0.0);
        ep.is_ineq.push_back(0);
    };
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p; q < n; ++q) {
            std::vector<double> g(d, 0.0);
            g[ep.lay.index(p, q)] = 1.0;
            g[ep.lay.index(n + p, n + q)] = -1.0;
            push_sym(std::move(g));
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        std::vector<double> g(d, 0.0);
        g[ep.lay.index(p, n + p)] = 1.0;
        push_sym(std::move(g));
    }
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            std::vector<double> g(d, 0.0);
            g[ep.lay.index(p, n + q)] = 1.0;
            g[ep.lay.index(q, n + p)] = 1.0;
            push_sym(std::move(g));
        }
    }

    ep.m = rows.size();
    ep.G.assign(ep.m * d, 0.0);
    for (std::size_t r = 0; r < ep.m; ++r) {
        std::copy(rows[r].begin(), rows[r].end(), ep.G.begin() + r * d);
    }
    return ep;
}

}  // namespace detail

inline SDPSolution solve_sdp(const SDPProblem& problem,
                             const SolverSettings& settings = {}) {
    problem.validate();
    if (!(settings.eps_feas > 0.0) || !(settings.eps_abs > 0.0) ||
        settings.max_iterations == 0 || !(settings.rho > 0.0)) {
        throw std::invalid_argument("SolverSettings: all parameters must be positive");
    }

    const std::size_t n = problem.dim();
    const std::vector<double> tscale = detail::equilibration_scaling(problem);
    SDPProblem scaled;
    scaled.sense = problem.sense;
    scaled.objective = detail::congruence_scale(problem.objective, tscale);
    scaled.constraints.reserve(problem.constraints.size());
    for (const auto& con : problem.constraints) {
        scaled.constraints.push_back(
            {detail::congruence_scale(con.lhs, tscale), con.rel, con.rhs});
    }
    const auto ep = detail::embed_problem(scaled);
    const std::size_t d = ep.lay.size();
    const std::size_t m = ep.m;

    // Gram = G G^T + I, factored once
    std::vector<double> gram(m * m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t t = r; t < m; ++t) {
            double acc = 0.0;
            const double* gr = ep.G.data() + r * d;
            const double* gt = ep.G.data() + t * d;
            for (std::size_t k = 0; k < d; ++k) acc += gr[k] * gt[k];
            gram[r * m + t] = acc;
            gram[t * m + r] = acc;
        }
        gram[r * m + r] += 1.0;
    }
    const std::vector<double> gramL = detail::cholesky_real(m, std::move(gram));

    std::vector<double> x(d, 0.0), s(m, 0.0), z(d, 0.0), w(m, 0.0);
    std::vector<double> u(d, 0.0), v(m, 0.0);
    std::vector<double> x0(d), s0(m), mu(m), z_prev(d), w_prev(m);

    double rho = settings.rho;
    const double alpha = 1.6;  // over-relaxation
    const double sqrt_dm = std::sqrt(static_cast<double>(d + m));

    double res_best = std::numeric_limits<double>::infinity();
    std::size_t stall_count = 0;
    // internal tolerances, tightened whenever the scaled test fires but the
    // original-units feasibility contract is still missed
    double eps_feas_int = settings.eps_feas;
    double eps_abs_int = settings.eps_abs;

    SDPSolution sol;
    sol.status = SolveStatus::MaxIterations;

    auto finish = [&](SolveStatus status, std::size_t iters) {
        const SymmetricMatrix Y = detail::unsvec(ep.lay, z);
        // undo the equilibration congruence before reporting
        sol.X = detail::congruence_scale(detail::complex_from_embedding(n, Y), tscale);
        sol.objective_value = problem.objective.frobenius_inner(sol.X);
        const auto rep = residual_report(problem, sol.X);
        sol.primal_residual = rep.max_scaled_violation;
        sol.eigenvalue_floor = rep.lambda_min;
        sol.status = status;
        sol.iterations = iters;
    };

    std::size_t it = 0;
    for (it = 1; it <= settings.max_iterations; ++it) {
        // affine step: project (z - u - c/rho, w - v) onto {Gx + s = h}
        for (std::size_t k = 0; k < d; ++k) x0[k] = z[k] - u[k] - ep.c[k] / rho;
        for (std::size_t r = 0; r < m; ++r) s0[r] = w[r] - v[r];
        for (std::size_t r = 0; r < m; ++r) {
            double acc = s0[r] - ep.h[r];
            const double* gr = ep.G.data() + r * d;
            for (std::size_t k = 0; k < d; ++k) acc += gr[k] * x0[k];
            mu[r] = acc;
        }
        detail::spd_solve(m, gramL, mu);
        for (std::size_t k = 0; k < d; ++k) {
            double acc = x0[k];
            for (std::size_t r = 0; r < m; ++r) acc -= ep.G[r * d + k] * mu[r];
            x[k] = acc;
        }
        for (std::size_t r = 0; r < m; ++r) s[r] = s0[r] - mu[r];

        z_prev = z;
        w_prev = w;

        // cone step on the over-relaxed point
        for (std::size_t k = 0; k < d; ++k) {
            x0[k] = alpha * x[k] + (1.0 - alpha) * z_prev[k] + u[k];
        }
        const SymmetricMatrix Yhat = detail::unsvec(ep.lay, x0);
        const auto eig = symmetric_eig(Yhat);
        SymmetricMatrix Yproj(ep.lay.n);
        for (std::size_t j = 0; j < eig.eigenvalues.size(); ++j) {
            const double lam = eig.eigenvalues[j];
            if (lam <= 0.0) break;  // eigenvalues descending
            const auto& vec = eig.eigenvectors[j];
            for (std::size_t a = 0; a < ep.lay.n; ++a) {
                for (std::size_t b = a; b < ep.lay.n; ++b) {
                    Yproj.set(a, b, Yproj(a, b) + lam * vec[a] * vec[b]);
                }
            }
        }
        z = detail::svec_of(ep.lay, Yproj);

        for (std::size_t r = 0; r < m; ++r) {
            const double sr = alpha * s[r] + (1.0 - alpha) * w_prev[r] + v[r];
            w[r] = ep.is_ineq[r] ? std::max(sr, 0.0) : 0.0;
        }

        // scaled dual update
        for (std::size_t k = 0; k < d; ++k) {
            u[k] += alpha * x[k] + (1.0 - alpha) * z_prev[k] - z[k];
        }
        for (std::size_t r = 0; r < m; ++r) {
            v[r] += alpha * s[r] + (1.0 - alpha) * w_prev[r] - w[r];
        }

        double rp2 = 0.0, rd2 = 0.0, nx2 = 0.0, nz2 = 0.0, nu2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double diff = x[k] - z[k];
            const double dz = z[k] - z_prev[k];
            rp2 += diff * diff;
            rd2 += dz * dz;
            nx2 += x[k] * x[k];
            nz2 += z[k] * z[k];
            nu2 += u[k] * u[k];
        }
        for (std::size_t r = 0; r < m; ++r) {
            const double diff = s[r] - w[r];
            const double dw = w[r] - w_prev[r];
            rp2 += diff * diff;
            rd2 += dw * dw;
            nx2 += s[r] * s[r];
            nz2 += w[r] * w[r];
            nu2 += v[r] * v[r];
        }
        const double r_pri = std::sqrt(rp2);
        const double r_dua = rho * std::sqrt(rd2);
        const double eps_pri =
            sqrt_dm * eps_abs_int + eps_feas_int * std::sqrt(std::max(nx2, nz2));
        const double eps_dua =
            sqrt_dm * eps_abs_int + eps_feas_int * rho * std::sqrt(nu2);

        if (r_pri <= eps_pri && r_dua <= eps_dua) {
            finish(SolveStatus::Optimal, it);
            if (sol.primal_residual <= settings.eps_feas) return sol;
            eps_feas_int *= 0.2;
            eps_abs_int *= 0.2;
        }

        // stall detection: the primal residual of an infeasible problem
        // converges to a positive gap instead of decaying
        if (r_pri < 0.9 * res_best) {
            res_best = r_pri;
            stall_count = 0;
        } else {
            ++stall_count;
        }
        if (stall_count >= 5000 && res_best > 1e3 * eps_pri) {
            finish(SolveStatus::Infeasible, it);
            return sol;
        }

        if (it % 50 == 0) {
            if (r_pri > 10.0 * r_dua && rho < 1e6) {
                rho *= 2.0;
                for (auto& y : u) y *= 0.5;
                for (auto& y : v) y *= 0.5;
            } else if (r_dua > 10.0 * r_pri && rho > 1e-6) {
                rho *= 0.5;
                for (auto& y : u) y *= 2.0;
                for (auto& y : v) y *= 2.0;
            }
        }
    }

    finish(SolveStatus::MaxIterations, std::min(it, settings.max_iterations));
    return sol;
}

}  // namespace afsec
