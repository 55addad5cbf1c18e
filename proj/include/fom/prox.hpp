#ifndef FOM_PROX_HPP
#define FOM_PROX_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "fom/domain.hpp"
#include "fom/rng.hpp"
#include "fom/vec.hpp"

namespace fom {

enum class ProxKind { EuclideanHalfSq, NegEntropy, QNormHalfSq };

/// A norm plus a distance-generating function d on the domain. `alpha` is the
/// strong-convexity constant of d in the `norm_q` norm; `omega` the prox
/// distortion factor (>= 1, meaningful on bounded domains only).
struct ProxSetup {
    double norm_q = 2.0;
    ProxKind kind = ProxKind::EuclideanHalfSq;
    double qnorm_a = 2.0;  // exponent a of d(x) = ||x||_a^2 / (2(a-1))
    Domain domain = Free{};
    double alpha = 1.0;
    double omega = 1.0;
};

inline ProxSetup euclidean_setup(Domain d) {
    return ProxSetup{2.0, ProxKind::EuclideanHalfSq, 2.0, std::move(d), 1.0, 1.0};
}

/// KL prox on Simplex(r): d(x) = r ln n + sum x_i ln(x_i / r), 1-norm geometry,
/// alpha = 1/r by Pinsker.
inline ProxSetup entropy_setup(double r = 1.0) {
    return ProxSetup{1.0, ProxKind::NegEntropy, 2.0, Simplex{r}, 1.0 / r, 1.0};
}

/// q-norm prox choice for balls: for moderate dual exponents use
/// d = ||x||_q^2/(2(q-1)); once q' exceeds ~2 ln n switch the exponent to
/// a = 2 ln n / (2 ln n - 1).
inline ProxSetup qnorm_setup(double q, std::size_t n, double R) {
    if (q <= 1.0 || q > 2.0)
        throw std::invalid_argument("qnorm_setup: exponent must lie in (1, 2]");
    double qp = dual_exponent(q);
    double ln_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
    double a = q;
    if (qp >= 2.0 * ln_n) a = 2.0 * ln_n / (2.0 * ln_n - 1.0);
    ProxSetup s;
    s.norm_q = a;
    s.kind = ProxKind::QNormHalfSq;
    s.qnorm_a = a;
    s.domain = BallQ{a, R};
    s.alpha = 1.0;  // d is 1-strongly convex in the a-norm
    return s;
}

namespace detail {

constexpr double kEntropyFloor = 1e-300;

inline double entropy_d(const Vector& x, double r) {
    double s = r * std::log(static_cast<double>(x.size()));
    for (double v : x)
        if (v > 0.0) s += v * std::log(v / r);
    return s;
}

inline double qnorm_d(const Vector& x, double a) {
    double nx = norm(x, a);
    return nx * nx / (2.0 * (a - 1.0));
}

inline Vector qnorm_grad(const Vector& x, double a) {
    double nx = norm(x, a);
    Vector g(x.size(), 0.0);
    if (nx == 0.0) return g;
    double f = std::pow(nx, 2.0 - a) / (a - 1.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = f * std::pow(std::abs(x[i]), a - 1.0) * (x[i] >= 0 ? 1.0 : -1.0);
    return g;
}

// Inverse of qnorm_grad: gradient of the conjugate (a-1)/2 ||s||_{a'}^2.
inline Vector qnorm_grad_inv(const Vector& s, double a) {
    double ap = a / (a - 1.0);
    double ns = norm(s, ap);
    Vector x(s.size(), 0.0);
    if (ns == 0.0) return x;
    double f = (a - 1.0) * std::pow(ns, 2.0 - ap);
    for (std::size_t i = 0; i < s.size(); ++i)
        x[i] = f * std::pow(std::abs(s[i]), ap - 1.0) * (s[i] >= 0 ? 1.0 : -1.0);
    return x;
}

}  // namespace detail

/// Bregman divergence V(x, y) = d(x) - d(y) - <grad d(y), x - y>.
inline double bregman(const ProxSetup& setup, const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw std::invalid_argument("bregman: dimension mismatch");
    switch (setup.kind) {
        case ProxKind::EuclideanHalfSq: {
            Vector d = sub(x, y);
            return 0.5 * dot(d, d);
        }
        case ProxKind::NegEntropy: {
            // generalized KL, exact expansion of the definition
            double v = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (y[i] <= 0.0) {
                    if (x[i] > 0.0)
                        throw std::invalid_argument(
                            "bregman: NegEntropy needs y in the relative interior");
                    continue;
                }
                if (x[i] > 0.0) v += x[i] * std::log(x[i] / y[i]);
                v += y[i] - x[i];
            }
            return std::max(v, 0.0);
        }
        case ProxKind::QNormHalfSq: {
            double a = setup.qnorm_a;
            double v = detail::qnorm_d(x, a) - detail::qnorm_d(y, a) -
                       dot(detail::qnorm_grad(y, a), sub(x, y));
            return std::max(v, 0.0);
        }
    }
    throw std::logic_error("bregman: unreachable");
}

/// Prox-mapping: argmin over z in the domain of { <g, z> + (1/h) V(z, x) }.
/// Supported (prox, domain) pairs are closed-form; anything else is rejected.
inline Vector mirror_step(const ProxSetup& setup, const Vector& x, const Vector& g, double h) {
    if (h <= 0) throw std::invalid_argument("mirror_step: step must be positive");
    if (x.size() != g.size()) throw std::invalid_argument("mirror_step: dimension mismatch");
    switch (setup.kind) {
        case ProxKind::EuclideanHalfSq: {
            Vector z = x;
            axpy(-h, g, z);
            return std::visit(
                [&](const auto& dom) -> Vector {
                    using T = std::decay_t<decltype(dom)>;
                    if constexpr (std::is_same_v<T, Free>) return z;
                    else if constexpr (std::is_same_v<T, Ball2>) return project_ball2(z, dom.R);
                    else if constexpr (std::is_same_v<T, Simplex>) return project_simplex(z, dom.r);
                    else if constexpr (std::is_same_v<T, Box>) return project_box(z, dom);
                    else if constexpr (std::is_same_v<T, AffineSum>)
                        return project_affine_sum(z, dom.value);
                    else if constexpr (std::is_same_v<T, BallQ>) {
                        if (dom.q == 2.0) return project_ball2(z, dom.R);
                        throw std::invalid_argument(
                            "mirror_step: Euclidean prox on BallQ(q != 2) unsupported");
                    } else {
                        throw std::invalid_argument("mirror_step: unsupported domain");
                    }
                },
                setup.domain);
        }
        case ProxKind::NegEntropy: {
            const auto* sx = std::get_if<Simplex>(&setup.domain);
            if (!sx)
                throw std::invalid_argument("mirror_step: NegEntropy requires a Simplex domain");
            // multiplicative-weights closed form, max-subtracted for overflow
            double m = -kInf;
            for (double v : g) m = std::max(m, -h * v);
            Vector z(x.size());
            double total = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                double xi = std::max(x[i], detail::kEntropyFloor * sx->r);
                z[i] = xi * std::exp(-h * g[i] - m);
                total += z[i];
            }
            double f = sx->r / total;
            for (double& v : z) v *= f;
            return z;
        }
        case ProxKind::QNormHalfSq: {
            Vector s = detail::qnorm_grad(x, setup.qnorm_a);
            axpy(-h, g, s);
            Vector z = detail::qnorm_grad_inv(s, setup.qnorm_a);
            return std::visit(
                [&](const auto& dom) -> Vector {
                    using T = std::decay_t<decltype(dom)>;
                    if constexpr (std::is_same_v<T, Free>) return z;
                    else if constexpr (std::is_same_v<T, BallQ>) {
                        if (dom.q != setup.qnorm_a)
                            throw std::invalid_argument(
                                "mirror_step: QNormHalfSq ball exponent must match a");
                        double nz = norm(z, dom.q);
                        if (nz <= dom.R) return z;
                        return scale(dom.R / nz, z);  // radial scaling is exact here
                    } else {
                        throw std::invalid_argument(
                            "mirror_step: QNormHalfSq supports Free and matched BallQ only");
                    }
                },
                setup.domain);
        }
    }
    throw std::logic_error("mirror_step: unreachable");
}

/// d evaluated at x for this setup.
inline double prox_function(const ProxSetup& setup, const Vector& x) {
    switch (setup.kind) {
        case ProxKind::EuclideanHalfSq: return 0.5 * dot(x, x);
        case ProxKind::NegEntropy: {
            const auto* sx = std::get_if<Simplex>(&setup.domain);
            return detail::entropy_d(x, sx ? sx->r : 1.0);
        }
        case ProxKind::QNormHalfSq: return detail::qnorm_d(x, setup.qnorm_a);
    }
    throw std::logic_error("prox_function: unreachable");
}

/// Minimizer of d over the domain (the canonical start point x0).
inline Vector prox_center(const ProxSetup& setup, std::size_t n) {
    switch (setup.kind) {
        case ProxKind::NegEntropy: {
            const auto* sx = std::get_if<Simplex>(&setup.domain);
            if (!sx) throw std::invalid_argument("prox_center: NegEntropy requires Simplex");
            return Vector(n, sx->r / static_cast<double>(n));
        }
        case ProxKind::EuclideanHalfSq:
            return std::visit(
                [&](const auto& dom) -> Vector {
                    using T = std::decay_t<decltype(dom)>;
                    if constexpr (std::is_same_v<T, Simplex>)
                        return Vector(n, dom.r / static_cast<double>(n));
                    else if constexpr (std::is_same_v<T, Box>)
                        return project_box(zeros(n), dom);
                    else
                        return zeros(n);
                },
                setup.domain);
        case ProxKind::QNormHalfSq: return zeros(n);
    }
    throw std::logic_error("prox_center: unreachable");
}

/// Squared prox radius R^2 = max_{x in Q} d(x) / alpha entering the iteration
/// bounds (Euclidean case: squared radius of the domain).
inline double prox_squared_radius(const ProxSetup& setup, std::size_t n) {
    double ln_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
    if (setup.kind == ProxKind::NegEntropy) {
        const auto* sx = std::get_if<Simplex>(&setup.domain);
        double r = sx ? sx->r : 1.0;
        return (r * ln_n) / setup.alpha;  // = r^2 ln n
    }
    return std::visit(
        [&](const auto& dom) -> double {
            using T = std::decay_t<decltype(dom)>;
            if constexpr (std::is_same_v<T, Ball2>) return 0.5 * dom.R * dom.R / setup.alpha;
            else if constexpr (std::is_same_v<T, BallQ>)
                return prox_function(setup, Vector(1, dom.R)) / setup.alpha;
            else if constexpr (std::is_same_v<T, Simplex>) return dom.r * dom.r / setup.alpha;
            else if constexpr (std::is_same_v<T, Box>) {
                Vector far(dom.lo.size());
                for (std::size_t i = 0; i < far.size(); ++i)
                    far[i] = std::max(std::abs(dom.lo[i]), std::abs(dom.hi[i]));
                return prox_function(setup, far) / setup.alpha;
            } else {
                throw std::invalid_argument("prox_squared_radius: unbounded domain");
            }
        },
        setup.domain);
}

/// Sampled estimate of the distortion factor
/// omega = sup_x 2 V(x, x0) / (alpha ||x - x0||_q^2); bounded domains only.
inline double estimate_omega(const ProxSetup& setup, std::size_t n, std::size_t samples,
                             RngState& rng) {
    Vector x0 = prox_center(setup, n);
    double w = 1.0;
    for (std::size_t k = 0; k < samples; ++k) {
        Vector x(n);
        std::visit(
            [&](const auto& dom) {
                using T = std::decay_t<decltype(dom)>;
                if constexpr (std::is_same_v<T, Simplex>) {
                    double s = 0;
                    for (auto& v : x) s += (v = -std::log(rng.uniform_pos()));
                    for (auto& v : x) v *= dom.r / s;
                } else if constexpr (std::is_same_v<T, Ball2>) {
                    x = scale(dom.R, sample_unit_ball(n, rng));
                } else if constexpr (std::is_same_v<T, BallQ>) {
                    x = scale(dom.R, sample_unit_ball(n, rng));
                    double nx = norm(x, dom.q);
                    if (nx > dom.R) x = scale(dom.R / nx, x);
                } else if constexpr (std::is_same_v<T, Box>) {
                    for (std::size_t i = 0; i < n; ++i)
                        x[i] = dom.lo[i] + rng.uniform() * (dom.hi[i] - dom.lo[i]);
                } else {
                    throw std::invalid_argument("estimate_omega: bounded domains only");
                }
            },
            setup.domain);
        double dist = norm(sub(x, x0), setup.norm_q);
        if (dist < 1e-12) continue;
        w = std::max(w, 2.0 * bregman(setup, x, x0) / (setup.alpha * dist * dist));
    }
    return w;
}

/// Two-nonzero descent step of the 1-norm gradient method on the hyperplane
/// <h, e> = 0: argmin { <g, h> + (L/2) ||h||_1^2 }. Mass +t goes to the
/// smallest gradient coordinate, -t to the largest; t = (g_max - g_min)/(4L).
struct TwoCoordStep {
    std::size_t lo = 0;  // receives +t
    std::size_t hi = 0;  // receives -t
    double t = 0.0;
};

inline TwoCoordStep steepest_two_coordinate_core(double g_lo, std::size_t i_lo, double g_hi,
                                                 std::size_t i_hi, double L) {
    if (L <= 0) throw std::invalid_argument("steepest_two_coordinate_step: L must be positive");
    double d = g_lo - g_hi;
    if (d >= 0.0) return {i_lo, i_hi, 0.0};  // constant gradient: no descent direction
    return {i_lo, i_hi, -d / (4.0 * L)};
}

inline TwoCoordStep steepest_two_coordinate_ij(const Vector& g, double L) {
    if (g.size() < 2)
        throw std::invalid_argument("steepest_two_coordinate_step: need dim >= 2");
    std::size_t i = argmin(g), j = argmax(g);
    return steepest_two_coordinate_core(g[i], i, g[j], j, L);
}

inline Vector steepest_two_coordinate_step(const Vector& g, double L) {
    TwoCoordStep s = steepest_two_coordinate_ij(g, L);
    Vector h(g.size(), 0.0);
    if (s.t > 0.0) {
        h[s.lo] = s.t;
        h[s.hi] = -s.t;
    }
    return h;
}

}  // namespace fom

#endif  // FOM_PROX_HPP
