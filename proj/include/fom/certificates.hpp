#ifndef FOM_CERTIFICATES_HPP
#define FOM_CERTIFICATES_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fom/domain.hpp"
#include "fom/methods.hpp"
#include "fom/sparse.hpp"
#include "fom/trace.hpp"
#include "fom/vec.hpp"

namespace fom {

/// Computable duality-gap certificate
/// Delta(lambda, x; N) = max_u (1/S) sum lambda_k <grad f(x_k), x_k - u>
/// over the domain. With exact gradients it upper-bounds the f-gap of the
/// lambda-averaged point.
struct Certificate {
    double gap_value = 0.0;
    std::vector<double> weights;
    Vector witness;  // the maximizing u
};

inline Certificate duality_gap(const RunTrace& trace, const Domain& domain) {
    if (trace.gradients.empty() || trace.iterates.empty())
        throw std::invalid_argument("duality_gap: trace must store iterates and gradients");
    if (trace.gradients.size() != trace.iterates.size() ||
        trace.lambdas.size() != trace.iterates.size())
        throw std::invalid_argument("duality_gap: trace storage misaligned");
    std::size_t n = trace.iterates.front().size();
    Vector g_avg = zeros(n);
    double inner = 0.0, S = 0.0;
    for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
        double lam = trace.lambdas[k];
        S += lam;
        axpy(lam, trace.gradients[k], g_avg);
        inner += lam * dot(trace.gradients[k], trace.iterates[k]);
    }
    if (S <= 0) throw std::invalid_argument("duality_gap: S_N must be positive");
    g_avg = scale(1.0 / S, g_avg);
    inner /= S;
    Certificate cert;
    cert.witness = linear_minimizer(domain, g_avg);  // rejects unbounded domains
    cert.gap_value = inner - dot(g_avg, cert.witness);
    cert.weights = trace.lambdas;
    return cert;
}

/// The lambda-weighted average sum lambda_k x_k / S_N recomputed from stored
/// iterates.
inline Vector averaged_point(const RunTrace& trace) {
    if (trace.iterates.empty())
        throw std::invalid_argument("averaged_point: trace must store iterates");
    Vector avg = zeros(trace.iterates.front().size());
    double S = 0.0;
    for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
        S += trace.lambdas[k];
        axpy(trace.lambdas[k], trace.iterates[k], avg);
    }
    if (S <= 0) throw std::invalid_argument("averaged_point: S_N must be positive");
    return scale(1.0 / S, avg);
}

struct DualLeastNormResult {
    Vector x;                      // primal reconstruction A^T (weighted dual average)
    std::vector<double> residuals;  // ||A x_k - b||_2 per iteration
    std::size_t iterations = 0;
};

/// Least-norm solve of a consistent system A x = b through its dual
/// max_y <b, y> - 0.5 ||A^T y||^2, run with the fast gradient scheme; the
/// primal iterate is the weight-averaged A^T y over the query points and its
/// residual contracts at the fast rate. Residual stagnation over a trailing
/// window signals an inconsistent system.
inline DualLeastNormResult dual_least_norm(const SparseMatrix& A, const Vector& b,
                                           std::size_t budget, double target_residual = 0.0,
                                           std::size_t stall_window = 50) {
    if (b.size() != A.n_rows()) throw std::invalid_argument("dual_least_norm: size mismatch");
    std::size_t m = A.n_rows();

    // L of the dual = sigma_max(A A^T), estimated by power iteration.
    RngState rng(17);
    Vector v = sample_unit_sphere(m, rng);
    double lam = 1.0;
    for (int it = 0; it < 200; ++it) {
        Vector w = A.multiply(A.multiply_transpose(v));
        double nw = norm(w, 2);
        if (nw == 0) break;
        lam = nw;
        v = scale(1.0 / nw, w);
    }
    double L = std::max(lam * 1.01, 1e-12);

    DualLeastNormResult out;
    out.residuals.reserve(budget);
    Vector y = zeros(m), z = zeros(m), lam_avg_primal = zeros(A.n_cols());
    Vector g_sum = zeros(m);
    double Aw = 0.0;
    double best_window = kInf, prev_window = kInf;
    std::size_t window_count = 0;
    for (std::size_t k = 1; k <= budget; ++k) {
        double a = (1.0 + std::sqrt(1.0 + 4.0 * L * Aw)) / (2.0 * L);
        double A_next = Aw + a;
        double tau = a / A_next;
        Vector q = Aw > 0 ? add(scale(1.0 - tau, y), scale(tau, z)) : z;
        // gradient of the negated dual at q: A A^T q - b
        Vector xq = A.multiply_transpose(q);
        Vector g = A.multiply(xq);
        axpy(-1.0, b, g);
        axpy(a, g, g_sum);
        z = scale(-1.0, g_sum);  // Euclidean mirror step from 0 with psi-coefficient 1
        y = add(scale(1.0 - tau, y), scale(tau, z));
        axpy(a, xq, lam_avg_primal);
        Aw = A_next;

        Vector x_now = scale(1.0 / Aw, lam_avg_primal);
        Vector res = A.multiply(x_now);
        axpy(-1.0, b, res);
        double r = norm(res, 2);
        out.residuals.push_back(r);
        out.x = std::move(x_now);
        out.iterations = k;
        if (target_residual > 0 && r <= target_residual) break;

        best_window = std::min(best_window, r);
        if (++window_count == stall_window) {
            if (best_window >= prev_window)
                throw std::runtime_error(
                    "dual_least_norm: residual stalled (system likely inconsistent)");
            prev_window = best_window;
            best_window = kInf;
            window_count = 0;
        }
    }
    return out;
}

}  // namespace fom

#endif  // FOM_CERTIFICATES_HPP
