// SPDX-License-Identifier: Apache-2.0
#include "spwt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "spwt/rng.hpp"

namespace spwt {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGoldenRatio = 0.6180339887498949;

double lambda_max(const MatrixXcd& c) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(c, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double lambda_min(const MatrixXcd& c) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(c, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// tr(A R), real for Hermitian arguments.
double trace_product(const MatrixXcd& a, const MatrixXcd& r) {
    return a.cwiseProduct(r.transpose()).sum().real();
}

double quadratic_form(const MatrixXcd& a, const VectorXcd& u) {
    return std::real(u.dot(a * u));
}

void check_hermitian(const MatrixXcd& x, const char* what) {
    const double scale = x.cwiseAbs().maxCoeff() + 1e-300;
    if ((x - x.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument(std::string(what) + " must be Hermitian");
}

// Euclidean projection of y onto the probability simplex.
VectorXd project_simplex(const VectorXd& y) {
    const int n = static_cast<int>(y.size());
    std::vector<double> u(y.data(), y.data() + n);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double shift = u.front() - 1.0;
    for (int i = 0; i < n; ++i) {
        cumulative += u[i];
        const double candidate = (cumulative - 1.0) / (i + 1);
        if (u[i] - candidate > 0.0) shift = candidate;
    }
    return (y.array() - shift).max(0.0);
}

// ---------------------------------------------------------------------------
// Feasibility certificate: min over the simplex of lambda_max(sum_m l_m C_m).
// ---------------------------------------------------------------------------

struct Certificate {
    double value = kInf;
    VectorXd lambda;
};

VectorXd two_point_lambda(double x) {
    VectorXd l(2);
    l << x, 1.0 - x;
    return l;
}

// f(lambda) is convex on the simplex (pointwise max of linear functions), so
// for M = 2 a golden-section line search is exact; for larger M a projected
// subgradient descent is used. The search stops as soon as any value drops
// below `early_stop` (an infeasibility witness suffices for the bisection).
Certificate min_lambda_max(const std::vector<MatrixXcd>& c, double lambda_tol,
                           int subgradient_iters, double early_stop) {
    const int m = static_cast<int>(c.size());
    if (m == 1) return {lambda_max(c[0]), VectorXd::Ones(1)};

    if (m == 2) {
        Certificate best;
        auto eval = [&](double x) {
            const double fx = lambda_max(x * c[0] + (1.0 - x) * c[1]);
            if (fx < best.value) best = {fx, two_point_lambda(x)};
            return fx;
        };
        eval(0.0);
        eval(1.0);
        if (best.value < early_stop) return best;
        double a = 0.0, b = 1.0;
        double x1 = b - kGoldenRatio * (b - a);
        double x2 = a + kGoldenRatio * (b - a);
        double f1 = eval(x1);
        double f2 = eval(x2);
        while (b - a > lambda_tol && best.value >= early_stop) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kGoldenRatio * (b - a);
                f1 = eval(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kGoldenRatio * (b - a);
                f2 = eval(x2);
            }
        }
        return best;
    }

    const int n = static_cast<int>(c[0].rows());
    double gradient_bound = 0.0;
    for (const MatrixXcd& ci : c) gradient_bound = std::max(gradient_bound, ci.norm());
    gradient_bound = std::max(gradient_bound, 1e-300);

    Certificate best;
    VectorXd lam = VectorXd::Constant(m, 1.0 / m);
    MatrixXcd agg(n, n);
    for (int k = 0; k < subgradient_iters; ++k) {
        agg.setZero();
        for (int j = 0; j < m; ++j) agg += lam(j) * c[j];
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(agg);
        const double fx = es.eigenvalues()(n - 1);
        if (fx < best.value) {
            best = {fx, lam};
            if (fx < early_stop) return best;
        }
        const VectorXcd u = es.eigenvectors().col(n - 1);
        VectorXd g(m);
        for (int j = 0; j < m; ++j) g(j) = quadratic_form(c[j], u);
        const double step = std::sqrt(2.0) / (gradient_bound * std::sqrt(k + 1.0));
        lam = project_simplex(lam - step * g);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Equalizing mixture over a candidate vertex set:
// maximize over beta in the simplex of min_m (Q beta)_m, Q of size M x K.
// Exact for M <= 2 (vertex or two-vertex equalization), projected
// supergradient otherwise.
// ---------------------------------------------------------------------------

VectorXd maxmin_mixture(const MatrixXd& q) {
    const int m = static_cast<int>(q.rows());
    const int k = static_cast<int>(q.cols());
    double best = -kInf;
    VectorXd beta = VectorXd::Zero(k);
    for (int i = 0; i < k; ++i) {
        const double val = q.col(i).minCoeff();
        if (val > best) {
            best = val;
            beta.setZero();
            beta(i) = 1.0;
        }
    }
    if (m == 1) return beta;

    if (m == 2) {
        for (int i = 0; i < k; ++i) {
            const double di = q(0, i) - q(1, i);
            for (int j = i + 1; j < k; ++j) {
                const double dj = q(0, j) - q(1, j);
                if (di * dj >= 0.0) continue;
                const double share = dj / (dj - di);  // weight on candidate i
                const double val = share * q(0, i) + (1.0 - share) * q(0, j);
                if (val > best) {
                    best = val;
                    beta.setZero();
                    beta(i) = share;
                    beta(j) = 1.0 - share;
                }
            }
        }
        return beta;
    }

    VectorXd btry = VectorXd::Constant(k, 1.0 / k);
    const double scale = q.cwiseAbs().maxCoeff() + 1e-300;
    for (int it = 0; it < 2000; ++it) {
        const VectorXd vals = q * btry;
        int mstar = 0;
        const double val = vals.minCoeff(&mstar);
        if (val > best) {
            best = val;
            beta = btry;
        }
        const double step = 0.5 / (scale * std::sqrt(it + 1.0));
        btry = project_simplex(btry + step * q.row(mstar).transpose());
    }
    return beta;
}

// Rebuilds the maximizing R from the top eigenspace of the certificate matrix
// at the feasible end of the bracket. When the top eigenvalue is clustered
// (ratios tie at the optimum) a mixture over the cluster is equalized so the
// returned R actually attains the level.
MatrixXcd certificate_to_matrix(const MaxMinRatioProblem& pb, double t_feasible,
                                double bracket_width, double denominator_norm,
                                const Certificate& cert) {
    const int n = pb.dim();
    const int m = pb.n_ratios();
    std::vector<MatrixXcd> shifted(m);
    MatrixXcd agg = MatrixXcd::Zero(n, n);
    for (int j = 0; j < m; ++j) {
        shifted[j] = pb.numerators[j] - t_feasible * pb.denominators[j];
        agg += cert.lambda(j) * shifted[j];
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(agg);
    const VectorXd evals = es.eigenvalues();
    const double top = evals(n - 1);
    const double cnorm = std::max(std::abs(top), std::abs(evals(0)));
    const double cluster_tol =
        std::max({1e-7 * cnorm, 4.0 * bracket_width * denominator_norm, 1e-12});

    int first = n - 1;
    while (first > 0 && evals(first - 1) >= top - cluster_tol) --first;
    const int q = n - first;
    if (q == 1) {
        const VectorXcd u = es.eigenvectors().col(n - 1);
        return u * u.adjoint();
    }

    const MatrixXcd basis = es.eigenvectors().rightCols(q);
    std::vector<VectorXcd> candidates;
    candidates.reserve(static_cast<std::size_t>(q + m));
    for (int i = 0; i < q; ++i) candidates.push_back(basis.col(i));
    for (int j = 0; j < m; ++j) {
        // best vector for ratio j inside the cluster subspace
        const MatrixXcd reduced = basis.adjoint() * shifted[j] * basis;
        Eigen::SelfAdjointEigenSolver<MatrixXcd> er(reduced);
        candidates.push_back((basis * er.eigenvectors().col(q - 1)).normalized());
    }

    const int k = static_cast<int>(candidates.size());
    MatrixXd qmat(m, k);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < k; ++i) qmat(j, i) = quadratic_form(shifted[j], candidates[i]);

    const VectorXd beta = maxmin_mixture(qmat);
    MatrixXcd r = MatrixXcd::Zero(n, n);
    for (int i = 0; i < k; ++i)
        if (beta(i) > 0.0) r += beta(i) * candidates[i] * candidates[i].adjoint();
    r = 0.5 * (r + r.adjoint()).eval();
    r /= r.trace().real();
    return r;
}

// ---------------------------------------------------------------------------
// Fully-corrective Frank-Wolfe maximization of
//   Phi(R) = sum_m lambda_m ln tr(R A_m) - tr(R Dbar),   R in the spectrahedron,
// with Dbar = sum_m cprime_m B_m. The iterate is kept as a mixture of unit
// vertices; only the quadratic forms of each vertex against A_m and B_m are
// needed, so the vertex set can be reused across lambda and cbar changes.
// ---------------------------------------------------------------------------

struct VertexPool {
    std::vector<VectorXcd> verts;
    std::vector<VectorXd> a_forms;  // per vertex, length M
    std::vector<VectorXd> b_forms;  // per vertex, length M
    VectorXd beta;

    int size() const { return static_cast<int>(verts.size()); }

    void add(const MaxMinRatioProblem& pb, const VectorXcd& u, double weight) {
        const int m = pb.n_ratios();
        VectorXd a(m), b(m);
        for (int j = 0; j < m; ++j) {
            a(j) = std::max(quadratic_form(pb.numerators[j], u), 0.0);
            b(j) = quadratic_form(pb.denominators[j], u);
        }
        verts.push_back(u);
        a_forms.push_back(a);
        b_forms.push_back(b);
        VectorXd grown(size());
        grown.head(size() - 1) = beta * (1.0 - weight);
        grown(size() - 1) = weight;
        beta = grown;
    }

    void prune(double floor_weight, int max_size) {
        std::vector<int> keep;
        for (int i = 0; i < size(); ++i)
            if (beta(i) > floor_weight) keep.push_back(i);
        if (keep.empty()) keep.push_back(static_cast<int>(size() - 1));
        if (static_cast<int>(keep.size()) > max_size) {
            std::sort(keep.begin(), keep.end(),
                      [this](int a, int b) { return beta(a) > beta(b); });
            keep.resize(max_size);
            std::sort(keep.begin(), keep.end());
        }
        if (static_cast<int>(keep.size()) == size()) return;
        VertexPool next;
        next.beta = VectorXd(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) {
            next.verts.push_back(std::move(verts[keep[i]]));
            next.a_forms.push_back(std::move(a_forms[keep[i]]));
            next.b_forms.push_back(std::move(b_forms[keep[i]]));
            next.beta(i) = beta(keep[i]);
        }
        next.beta /= next.beta.sum();
        *this = std::move(next);
    }

    MatrixXd a_matrix() const {  // M x K
        MatrixXd a(a_forms.front().size(), size());
        for (int i = 0; i < size(); ++i) a.col(i) = a_forms[i];
        return a;
    }
    MatrixXd b_matrix() const {
        MatrixXd b(b_forms.front().size(), size());
        for (int i = 0; i < size(); ++i) b.col(i) = b_forms[i];
        return b;
    }

    MatrixXcd assemble(int n) const {
        MatrixXcd r = MatrixXcd::Zero(n, n);
        for (int i = 0; i < size(); ++i)
            if (beta(i) > 0.0) r += beta(i) * verts[i] * verts[i].adjoint();
        r = 0.5 * (r + r.adjoint()).eval();
        const double tr = r.trace().real();
        if (tr > 0.0) r /= tr;
        return r;
    }
};

double master_objective(const MatrixXd& amat, const MatrixXd& bmat, const VectorXd& lam,
                        const VectorXd& cprime, const VectorXd& beta) {
    const VectorXd tau = amat * beta;
    double psi = -cprime.dot(bmat * beta);
    for (int j = 0; j < lam.size(); ++j) {
        if (lam(j) <= 0.0) continue;
        if (tau(j) <= 0.0) return -kInf;
        psi += lam(j) * std::log(tau(j));
    }
    return psi;
}

// Monotone projected gradient ascent over the vertex weights.
void solve_master(const MatrixXd& amat, const MatrixXd& bmat, const VectorXd& lam,
                  const VectorXd& cprime, VectorXd& beta) {
    double psi = master_objective(amat, bmat, lam, cprime, beta);
    if (!std::isfinite(psi)) {
        beta = VectorXd::Constant(beta.size(), 1.0 / static_cast<double>(beta.size()));
        psi = master_objective(amat, bmat, lam, cprime, beta);
    }
    double step = 1.0;
    int stalled = 0;
    for (int it = 0; it < 400 && stalled < 3; ++it) {
        const VectorXd tau = amat * beta;
        VectorXd weights(lam.size());
        for (int j = 0; j < lam.size(); ++j)
            weights(j) = lam(j) > 0.0 ? lam(j) / std::max(tau(j), 1e-300) : 0.0;
        const VectorXd grad = amat.transpose() * weights - bmat.transpose() * cprime;

        bool improved = false;
        for (int half = 0; half < 40; ++half) {
            const VectorXd trial = project_simplex(beta + step * grad);
            const double trial_psi = master_objective(amat, bmat, lam, cprime, trial);
            if (trial_psi > psi) {
                if ((trial - beta).lpNorm<Eigen::Infinity>() < 1e-16 ||
                    trial_psi - psi < 1e-15 * (1.0 + std::abs(psi)))
                    ++stalled;
                else
                    stalled = 0;
                beta = trial;
                psi = trial_psi;
                step *= 1.6;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
}

// Exact 1-D line search for the vanilla Frank-Wolfe step toward a new vertex.
double fw_line_search(const VectorXd& tau, const VectorXd& a_new, const VectorXd& lam,
                      double d_current, double d_new) {
    auto derivative = [&](double g) {
        double d = d_current - d_new;  // -d/dgamma of the linear part
        for (int j = 0; j < lam.size(); ++j) {
            if (lam(j) <= 0.0) continue;
            const double mix = (1.0 - g) * tau(j) + g * a_new(j);
            d += lam(j) * (a_new(j) - tau(j)) / std::max(mix, 1e-300);
        }
        return d;
    };
    if (derivative(0.0) <= 0.0) return 0.0;
    if (derivative(1.0 - 1e-12) >= 0.0) return 1.0 - 1e-12;
    double lo = 0.0, hi = 1.0 - 1e-12;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (derivative(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct InnerSolution {
    double phi = -kInf;
    VectorXd tau;   // tr(R A_m)
    VectorXd zeta;  // tr(R B_m)
};

InnerSolution maximize_weighted_surrogate(const MaxMinRatioProblem& pb, const VectorXd& lam,
                                          const VectorXd& cbar, VertexPool& pool,
                                          double gap_tol_rel, int max_iters) {
    const int n = pb.dim();
    const int m = pb.n_ratios();
    const VectorXd cprime = (lam.array() * cbar.array()).matrix();

    if (pool.size() == 0) {
        MatrixXcd weighted = MatrixXcd::Zero(n, n);
        for (int j = 0; j < m; ++j) weighted += std::max(lam(j), 1.0 / m) * pb.numerators[j];
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(weighted);
        pool.add(pb, es.eigenvectors().col(n - 1), 1.0);
    }
    // every weighted ln term needs some vertex with a positive quadratic form
    for (int j = 0; j < m; ++j) {
        if (lam(j) <= 0.0) continue;
        double best = 0.0;
        for (int i = 0; i < pool.size(); ++i) best = std::max(best, pool.a_forms[i](j));
        if (best <= 1e-14 * (pb.numerators[j].norm() + 1e-300)) {
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(pb.numerators[j]);
            pool.add(pb, es.eigenvectors().col(n - 1), 0.5);
        }
    }

    MatrixXcd dbar = MatrixXcd::Zero(n, n);
    for (int j = 0; j < m; ++j)
        if (cprime(j) != 0.0) dbar += cprime(j) * pb.denominators[j];

    InnerSolution out;
    for (int it = 0; it < max_iters; ++it) {
        MatrixXd amat = pool.a_matrix();
        MatrixXd bmat = pool.b_matrix();
        solve_master(amat, bmat, lam, cprime, pool.beta);

        const VectorXd tau = amat * pool.beta;
        const double d_current = cprime.dot(bmat * pool.beta);
        double phi = -d_current;
        for (int j = 0; j < m; ++j)
            if (lam(j) > 0.0) phi += lam(j) * std::log(std::max(tau(j), 1e-300));
        out.phi = phi;
        out.tau = tau;
        out.zeta = bmat * pool.beta;

        MatrixXcd grad = -dbar;
        for (int j = 0; j < m; ++j)
            if (lam(j) > 0.0) grad += (lam(j) / std::max(tau(j), 1e-300)) * pb.numerators[j];
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(grad);
        const double nu = es.eigenvalues()(n - 1);
        const double gap = nu - lam.sum() + d_current;
        if (gap <= gap_tol_rel * (1.0 + std::abs(phi))) break;

        const VectorXcd u = es.eigenvectors().col(n - 1);
        VectorXd a_new(m);
        for (int j = 0; j < m; ++j)
            a_new(j) = std::max(quadratic_form(pb.numerators[j], u), 0.0);
        double d_new = 0.0;
        for (int j = 0; j < m; ++j)
            if (cprime(j) != 0.0) d_new += cprime(j) * quadratic_form(pb.denominators[j], u);
        const double gamma = fw_line_search(tau, a_new, lam, d_current, d_new);
        pool.add(pb, u, std::max(gamma, 1e-12));
        pool.prune(1e-14, 48);
    }
    return out;
}

struct SurrogateSolution {
    MatrixXcd r;
    VectorXd tau;
    VectorXd zeta;
};

// One SCA subproblem: maximize min_m [ln tr(R A_m) - cbar_m tr(R B_m) + k_m]
// with k_m = 1 + ln(cbar_m), via its simplex dual.
SurrogateSolution solve_surrogate(const MaxMinRatioProblem& pb, const VectorXd& cbar,
                                  VertexPool& pool) {
    const int m = pb.n_ratios();
    const int n = pb.dim();
    VectorXd offsets(m);
    for (int j = 0; j < m; ++j) offsets(j) = 1.0 + std::log(cbar(j));

    const double gap_tol = 1e-11;
    const int fw_iters = 300;

    auto surrogate_values = [&](const InnerSolution& inner) {
        VectorXd g(m);
        for (int j = 0; j < m; ++j)
            g(j) = std::log(std::max(inner.tau(j), 1e-300)) - cbar(j) * inner.zeta(j) + offsets(j);
        return g;
    };

    if (m == 1) {
        maximize_weighted_surrogate(pb, VectorXd::Ones(1), cbar, pool, gap_tol, fw_iters);
        SurrogateSolution s;
        s.r = pool.assemble(n);
        s.tau = pool.a_matrix() * pool.beta;
        s.zeta = pool.b_matrix() * pool.beta;
        return s;
    }

    if (m == 2) {
        auto dual_value = [&](double x) {
            const VectorXd lam = two_point_lambda(x);
            const InnerSolution inner =
                maximize_weighted_surrogate(pb, lam, cbar, pool, gap_tol, fw_iters);
            return inner.phi + lam.dot(offsets);
        };
        double a = 0.0, b = 1.0;
        double x1 = b - kGoldenRatio * (b - a);
        double x2 = a + kGoldenRatio * (b - a);
        double f1 = dual_value(x1);
        double f2 = dual_value(x2);
        const double f_lo = dual_value(0.0);
        const double f_hi = dual_value(1.0);
        while (b - a > 1e-8) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kGoldenRatio * (b - a);
                f1 = dual_value(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kGoldenRatio * (b - a);
                f2 = dual_value(x2);
            }
        }
        double x_star = 0.5 * (a + b);
        double best = std::min(f1, f2);
        if (f_lo < best) {
            best = f_lo;
            x_star = 0.0;
        }
        if (f_hi < best) {
            best = f_hi;
            x_star = 1.0;
        }
        // pull boundary optima a hair inside so the inactive log term keeps
        // the returned iterate usable by the true objective
        x_star = std::clamp(x_star, 1e-7, 1.0 - 1e-7);
        const VectorXd lam = two_point_lambda(x_star);
        const InnerSolution inner =
            maximize_weighted_surrogate(pb, lam, cbar, pool, gap_tol, fw_iters);
        SurrogateSolution s;
        s.r = pool.assemble(n);
        s.tau = inner.tau;
        s.zeta = inner.zeta;
        return s;
    }

    // M > 2: projected subgradient on the dual weights, warm-started pool.
    VectorXd lam = VectorXd::Constant(m, 1.0 / m);
    VectorXd best_lam = lam;
    double best_val = kInf;
    for (int k = 0; k < 120; ++k) {
        const InnerSolution inner =
            maximize_weighted_surrogate(pb, lam, cbar, pool, gap_tol, fw_iters);
        const VectorXd g = surrogate_values(inner);
        const double val = inner.phi + lam.dot(offsets);
        if (val < best_val) {
            best_val = val;
            best_lam = lam;
        }
        const double scale = g.cwiseAbs().maxCoeff() + 1e-300;
        lam = project_simplex(lam - (0.5 / (scale * std::sqrt(k + 1.0))) * g);
        for (int j = 0; j < m; ++j) lam(j) = std::max(lam(j), 1e-9);
        lam /= lam.sum();
    }
    const InnerSolution inner =
        maximize_weighted_surrogate(pb, best_lam, cbar, pool, gap_tol, fw_iters);
    SurrogateSolution s;
    s.r = pool.assemble(n);
    s.tau = inner.tau;
    s.zeta = inner.zeta;
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------

void MaxMinRatioProblem::validate() const {
    if (numerators.empty()) throw std::invalid_argument("problem needs at least one ratio");
    if (numerators.size() != denominators.size())
        throw std::invalid_argument("numerator/denominator count mismatch");
    const int n = dim();
    for (const MatrixXcd& a : numerators) {
        if (a.rows() != n || a.cols() != n)
            throw std::invalid_argument("numerator matrices must be square and same-sized");
        check_hermitian(a, "numerator");
    }
    for (const MatrixXcd& b : denominators) {
        if (b.rows() != n || b.cols() != n)
            throw std::invalid_argument("denominator matrices must be square and same-sized");
        check_hermitian(b, "denominator");
        if (lambda_min(b) <= 0.0)
            throw std::invalid_argument("denominator matrix is not positive definite");
    }
}

double MaxMinRatioProblem::min_ratio(const MatrixXcd& R) const {
    double best = kInf;
    for (std::size_t j = 0; j < numerators.size(); ++j) {
        const double num = trace_product(numerators[j], R);
        const double den = trace_product(denominators[j], R);
        best = std::min(best, num / den);
    }
    return best;
}

double MaxMinRatioProblem::min_ratio(const VectorXcd& u) const {
    double best = kInf;
    for (std::size_t j = 0; j < numerators.size(); ++j) {
        const double num = quadratic_form(numerators[j], u);
        const double den = quadratic_form(denominators[j], u);
        best = std::min(best, num / den);
    }
    return best;
}

void SolverSettings::validate() const {
    if (!(bisection_tol > 0.0)) throw std::invalid_argument("bisection_tol must be > 0");
    if (!(sca_tol > 0.0)) throw std::invalid_argument("sca_tol must be > 0");
    if (max_outer_iters < 1) throw std::invalid_argument("max_outer_iters must be >= 1");
    if (randomization_count < 1) throw std::invalid_argument("randomization_count must be >= 1");
}

RelaxedSolution solve_maxmin_ratio(const MaxMinRatioProblem& problem,
                                   const SolverSettings& settings) {
    problem.validate();
    settings.validate();
    const int n = problem.dim();
    const int m = problem.n_ratios();

    double t_hi = kInf;
    double denominator_norm = 0.0;
    for (int j = 0; j < m; ++j) {
        const double amax = std::max(lambda_max(problem.numerators[j]), 0.0);
        const double bmin = lambda_min(problem.denominators[j]);
        t_hi = std::min(t_hi, amax / bmin);
        denominator_norm = std::max(denominator_norm, lambda_max(problem.denominators[j]));
    }

    RelaxedSolution sol;
    if (t_hi <= 0.0) {  // some numerator is identically zero
        sol.R = MatrixXcd::Identity(n, n) / static_cast<double>(n);
        sol.value = 0.0;
        sol.report.relaxed_value = 0.0;
        return sol;
    }

    auto shifted = [&](double t) {
        std::vector<MatrixXcd> c(m);
        for (int j = 0; j < m; ++j) c[j] = problem.numerators[j] - t * problem.denominators[j];
        return c;
    };

    double t_lo = 0.0;  // always feasible: the numerators are PSD
    int iters = 0;
    while ((t_hi - t_lo) > settings.bisection_tol * t_hi && iters < settings.max_outer_iters) {
        const double t = 0.5 * (t_lo + t_hi);
        const Certificate cert = min_lambda_max(shifted(t), 1e-8, 500, 0.0);
        (cert.value >= 0.0 ? t_lo : t_hi) = t;
        ++iters;
        sol.report.objective_trace.push_back(t_lo);
    }
    sol.report.iterations = iters;
    sol.report.converged = (t_hi - t_lo) <= settings.bisection_tol * t_hi;

    const Certificate cert = min_lambda_max(shifted(t_lo), 1e-8, 500, -kInf);
    sol.R = certificate_to_matrix(problem, t_lo, t_hi - t_lo, denominator_norm, cert);
    sol.value = problem.min_ratio(sol.R);
    sol.report.relaxed_value = sol.value;
    sol.report.achieved_min_ratio = sol.value;
    return sol;
}

RelaxedSolution sca_solve(const MaxMinRatioProblem& problem, const SolverSettings& settings,
                          std::uint64_t seed) {
    problem.validate();
    settings.validate();
    const int n = problem.dim();
    const int m = problem.n_ratios();

    MatrixXcd R = MatrixXcd::Identity(n, n) / static_cast<double>(n);
    if (settings.sca_random_init) {
        auto engine = make_engine(mix_seed(seed, 0x5caf00dULL));
        std::normal_distribution<double> gauss(0.0, 1.0);
        MatrixXcd g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = std::complex<double>(gauss(engine), gauss(engine));
        R = g * g.adjoint();
        R /= R.trace().real();
    }

    RelaxedSolution sol;
    sol.report.converged = false;
    double objective = problem.min_ratio(R);
    sol.report.objective_trace.push_back(objective);

    VertexPool pool;
    VectorXd cbar(m);
    for (int outer = 1; outer <= settings.max_outer_iters; ++outer) {
        for (int j = 0; j < m; ++j) cbar(j) = 1.0 / trace_product(problem.denominators[j], R);
        const SurrogateSolution next = solve_surrogate(problem, cbar, pool);
        const double objective_next = problem.min_ratio(next.r);
        sol.report.iterations = outer;
        if (objective_next < objective - 1e-12 * (1.0 + std::abs(objective))) {
            // inner inexactness produced a worse point; keep the current iterate
            break;
        }
        R = next.r;
        sol.report.objective_trace.push_back(objective_next);
        const bool settled =
            std::abs(objective_next - objective) <= settings.sca_tol * std::max(1.0, objective_next);
        objective = objective_next;
        if (settled) {
            sol.report.converged = true;
            break;
        }
    }

    sol.R = R;
    sol.value = objective;
    sol.report.relaxed_value = objective;
    sol.report.achieved_min_ratio = objective;
    return sol;
}

Eigen::VectorXcd rank_one_extract(const MatrixXcd& R, const MaxMinRatioProblem& problem,
                                  const SolverSettings& settings, std::uint64_t seed) {
    settings.validate();
    const int n = static_cast<int>(R.rows());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (R + R.adjoint()));
    const VectorXd evals = es.eigenvalues();
    const double top = evals(n - 1);
    if (top <= 0.0) throw std::invalid_argument("rank_one_extract needs a nonzero PSD matrix");
    if (n == 1 || evals(n - 2) / top < 1e-6) return es.eigenvectors().col(n - 1);

    MatrixXcd sqrt_r = es.eigenvectors() *
                       evals.cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                       es.eigenvectors().adjoint();
    auto engine = make_engine(mix_seed(seed, 0x4a2d0177ULL));
    std::normal_distribution<double> gauss(0.0, 1.0);

    VectorXcd best;
    double best_value = -kInf;
    VectorXcd g(n);
    for (int l = 0; l < settings.randomization_count; ++l) {
        for (int i = 0; i < n; ++i) {
            const double re = gauss(engine);
            const double im = gauss(engine);
            g(i) = std::complex<double>(re, im) * (1.0 / std::sqrt(2.0));
        }
        VectorXcd u = sqrt_r * g;
        const double norm = u.norm();
        if (norm < 1e-150) continue;
        u /= norm;
        const double value = problem.min_ratio(u);
        if (value > best_value) {  // strict: the lowest index wins ties
            best_value = value;
            best = std::move(u);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------

MaxMinRatioProblem slnr_problem(const ScenarioConfig& cfg,
                                const std::vector<CovarianceMatrix>& desired,
                                const CovarianceMatrix& wiretap) {
    cfg.validate();
    if (desired.empty()) throw std::invalid_argument("slnr_problem needs at least one user");
    const double s = cfg.alpha1 * cfg.total_power;
    const int n = cfg.n_antennas;
    MaxMinRatioProblem pb;
    const MatrixXcd shared = s * wiretap.entries + cfg.noise_power * MatrixXcd::Identity(n, n);
    for (const CovarianceMatrix& d : desired) {
        pb.numerators.push_back(s * d.entries);
        pb.denominators.push_back(shared);
    }
    return pb;
}

MaxMinRatioProblem anlnr_problem(const ScenarioConfig& cfg,
                                 const std::vector<CovarianceMatrix>& desired,
                                 const CovarianceMatrix& wiretap) {
    cfg.validate();
    if (desired.empty()) throw std::invalid_argument("anlnr_problem needs at least one user");
    const double s = cfg.alpha2 * cfg.total_power;
    const int n = cfg.n_antennas;
    MaxMinRatioProblem pb;
    const MatrixXcd shared = s * wiretap.entries;
    for (const CovarianceMatrix& d : desired) {
        pb.numerators.push_back(shared);
        pb.denominators.push_back(s * d.entries +
                                  cfg.noise_power * MatrixXcd::Identity(n, n));
    }
    return pb;
}

void SchemeSpec::validate() const {
    if (kind != Scheme::Point) return;
    if (n_points == 4) return;
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_points))));
    if (n_points < 4 || side * side != n_points)
        throw std::invalid_argument("point scheme needs 4 or a perfect-square point count");
}

const char* scheme_name(Scheme kind) {
    switch (kind) {
        case Scheme::Regional: return "regional";
        case Scheme::Point: return "point";
        case Scheme::NonRobust: return "nonrobust";
    }
    return "unknown";
}

DesignCovariances build_design_covariances(const ScenarioConfig& cfg,
                                           const SubcarrierAllocation& alloc,
                                           const SchemeSpec& scheme,
                                           const std::vector<GroundPosition>& estimates,
                                           double dtheta_max, double dr_max,
                                           const RegionRect& window,
                                           const QuadratureSettings& quad) {
    scheme.validate();
    if (estimates.empty()) throw std::invalid_argument("design needs at least one user estimate");
    for (const GroundPosition& est : estimates) {
        validate_position(est);
        if (!window.contains(est))
            throw std::invalid_argument("user estimate lies outside the observation window");
    }

    DesignCovariances covs;
    if (scheme.kind == Scheme::Regional) {
        std::vector<RegionRect> regions;
        regions.reserve(estimates.size());
        for (const GroundPosition& est : estimates)
            regions.push_back(desired_region(est, dtheta_max, dr_max, window));
        for (const RegionRect& region : regions)
            covs.desired.push_back(regional_covariance(cfg, alloc, region, quad.desired));
        covs.wiretap = wiretap_covariance(cfg, alloc, window, regions, quad.window);
        return covs;
    }

    // point and non-robust schemes share the sidelobe eavesdrop construction
    SamplePointSet eaves;
    for (const GroundPosition& est : estimates) {
        const SamplePointSet s = sample_points_sidelobe(cfg, est, window);
        eaves.points.insert(eaves.points.end(), s.points.begin(), s.points.end());
    }
    for (const GroundPosition& est : estimates) {
        SamplePointSet samples;
        if (scheme.kind == Scheme::NonRobust) {
            samples.points = {{est, PointRole::DesiredSample}};
        } else if (scheme.n_points == 4) {
            samples = sample_points_desired(est, dtheta_max, dr_max, window);
        } else {
            const int side = static_cast<int>(std::lround(std::sqrt(scheme.n_points)));
            samples = sample_points_desired_grid(est, dtheta_max, dr_max, side, window);
        }
        covs.desired.push_back(point_covariance(cfg, alloc, samples));
    }
    covs.wiretap = point_covariance(cfg, alloc, eaves);
    return covs;
}

BeamformerPair design_beamformers(const ScenarioConfig& cfg, const SchemeSpec& scheme,
                                  const std::vector<GroundPosition>& estimates,
                                  const SubcarrierAllocation& alloc,
                                  double dtheta_max, double dr_max,
                                  const RegionRect& window, const QuadratureSettings& quad,
                                  const SolverSettings& settings, std::uint64_t seed) {
    const DesignCovariances covs = build_design_covariances(cfg, alloc, scheme, estimates,
                                                            dtheta_max, dr_max, window, quad);
    auto solve = [&](const MaxMinRatioProblem& pb, std::uint64_t tag) {
        return settings.use_sca_engine ? sca_solve(pb, settings, mix_seed(seed, tag))
                                       : solve_maxmin_ratio(pb, settings);
    };

    BeamformerPair pair;
    const MaxMinRatioProblem pv = slnr_problem(cfg, covs.desired, covs.wiretap);
    RelaxedSolution sv = solve(pv, 0xbf01ULL);
    pair.v = rank_one_extract(sv.R, pv, settings, mix_seed(seed, 0xbf02ULL));
    pair.v_report = sv.report;
    pair.v_report.relaxed_value = sv.value;
    pair.v_report.achieved_min_ratio = pv.min_ratio(pair.v);
    pair.v_report.relaxation_gap =
        sv.value > 0.0 ? (sv.value - pair.v_report.achieved_min_ratio) / sv.value : 0.0;

    const MaxMinRatioProblem pw = anlnr_problem(cfg, covs.desired, covs.wiretap);
    RelaxedSolution sw = solve(pw, 0xaf01ULL);
    pair.w = rank_one_extract(sw.R, pw, settings, mix_seed(seed, 0xaf02ULL));
    pair.w_report = sw.report;
    pair.w_report.relaxed_value = sw.value;
    pair.w_report.achieved_min_ratio = pw.min_ratio(pair.w);
    pair.w_report.relaxation_gap =
        sw.value > 0.0 ? (sw.value - pair.w_report.achieved_min_ratio) / sw.value : 0.0;
    return pair;
}

}  // namespace spwt
