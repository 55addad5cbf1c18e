#ifndef FOM_ZEROTH_ORDER_HPP
#define FOM_ZEROTH_ORDER_HPP

#include <cmath>
#include <stdexcept>

#include "fom/oracle.hpp"
#include "fom/rng.hpp"
#include "fom/vec.hpp"

namespace fom {

/// Smoothing radii of the derivative-free estimators: tau for the two-point
/// difference, gamma for the outer ball smoothing of the double-smoothed
/// variant. Recipes: tau = eps/(2M) for nonsmooth f, tau ~ sqrt(delta/L) for
/// smooth f; gamma <= eps/(2M).
struct SmoothingParams {
    double tau = 1e-4;
    double gamma = 0.0;

    void validate() const {
        if (tau <= 0) throw std::invalid_argument("SmoothingParams: tau must be positive");
        if (gamma < 0) throw std::invalid_argument("SmoothingParams: gamma must be nonnegative");
    }
};

/// Finite differences below this scale drown in rounding noise.
inline double tau_floor(const Vector& x) { return 0x1.0p-26 * (1.0 + norm(x, 2)); }

/// Two-point randomized difference: (n/tau) (f(x + tau s) - f(x)) s with s
/// uniform on the sphere and the same xi realization at both points. Costs
/// exactly two value queries.
inline Vector two_point_grad(const ValueOracle& oracle, const Vector& x,
                             const SmoothingParams& params, RngState& rng) {
    params.validate();
    std::size_t n = x.size();
    double tau = std::max(params.tau, tau_floor(x));
    Vector s = sample_unit_sphere(n, rng);
    RngState xi = rng.split();
    Vector xp = x;
    axpy(tau, s, xp);
    double v_plus = oracle(xp, xi);
    double v_base = oracle(x, xi);
    if (!std::isfinite(v_plus) || !std::isfinite(v_base))
        throw std::domain_error("two_point_grad: oracle returned non-finite value");
    double c = static_cast<double>(n) / tau * (v_plus - v_base);
    return scale(c, s);
}

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Monte-Carlo estimate of the ball-smoothed value
/// f_tau(x) = E[f(x + tau s~, xi)], s~ uniform in the unit ball.
inline McEstimate smoothed_value(const ValueOracle& oracle, const Vector& x, double tau,
                                 std::size_t mc_samples, RngState& rng) {
    if (tau <= 0) throw std::invalid_argument("smoothed_value: tau must be positive");
    if (mc_samples == 0) throw std::invalid_argument("smoothed_value: need samples");
    std::size_t n = x.size();
    double mean = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < mc_samples; ++k) {
        Vector u = sample_unit_ball(n, rng);
        Vector xp = x;
        axpy(tau, u, xp);
        double v = oracle(xp, rng.split());
        double d = v - mean;
        mean += d / static_cast<double>(k + 1);
        m2 += d * (v - mean);
    }
    McEstimate e;
    e.value = mean;
    e.samples = mc_samples;
    if (mc_samples > 1)
        e.std_error = std::sqrt(m2 / static_cast<double>(mc_samples - 1) /
                                static_cast<double>(mc_samples));
    return e;
}

/// Double smoothing: an outer ball perturbation gamma s~ shared by both
/// queries, then the two-point difference at radius tau. With gamma = 0 this
/// coincides draw-for-draw with two_point_grad.
inline Vector double_smooth_grad(const ValueOracle& oracle, const Vector& x,
                                 const SmoothingParams& params, RngState& rng) {
    params.validate();
    if (params.gamma == 0.0) return two_point_grad(oracle, x, params, rng);
    std::size_t n = x.size();
    Vector base = x;
    Vector s1 = sample_unit_ball(n, rng);
    axpy(params.gamma, s1, base);
    double tau = std::max(params.tau, tau_floor(base));
    Vector s2 = sample_unit_sphere(n, rng);
    RngState xi = rng.split();
    Vector xp = base;
    axpy(tau, s2, xp);
    double v_plus = oracle(xp, xi);
    double v_base = oracle(base, xi);
    double c = static_cast<double>(n) / tau * (v_plus - v_base);
    return scale(c, s2);
}

}  // namespace fom

#endif  // FOM_ZEROTH_ORDER_HPP
