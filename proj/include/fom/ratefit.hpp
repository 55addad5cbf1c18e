#ifndef FOM_RATEFIT_HPP
#define FOM_RATEFIT_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fom/oracle.hpp"
#include "fom/trace.hpp"

namespace fom {

/// Least-squares fit of log(gap) against log(k) over an iteration window.
struct RateFit {
    std::size_t k_lo = 0, k_hi = 0;
    double slope = 0.0;
    double intercept = 0.0;  // in ln units
    double r2 = 0.0;
    std::size_t points = 0;
};

inline RateFit fit_rate(const std::vector<std::pair<double, double>>& k_gap) {
    if (k_gap.size() < 10)
        throw std::invalid_argument("fit_rate: need at least 10 points in the window");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [k, gap] : k_gap) {
        if (!(gap > 0)) throw std::invalid_argument("fit_rate: non-positive gap in window");
        double x = std::log(k), y = std::log(gap);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double n = static_cast<double>(k_gap.size());
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("fit_rate: degenerate window");
    RateFit f;
    f.points = k_gap.size();
    f.k_lo = static_cast<std::size_t>(k_gap.front().first);
    f.k_hi = static_cast<std::size_t>(k_gap.back().first);
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (const auto& [k, gap] : k_gap) {
        double e = std::log(gap) - (f.intercept + f.slope * std::log(k));
        ss_res += e * e;
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

/// Fit over the trace's last decade [N/10, N] (or an explicit window) using
/// gap = f_value - f_star.
inline RateFit fit_rate(const RunTrace& trace, double f_star, std::size_t k_lo = 0,
                        std::size_t k_hi = 0) {
    if (trace.records.empty()) throw std::invalid_argument("fit_rate: empty trace");
    std::size_t n = trace.records.back().k;
    if (k_hi == 0) k_hi = n;
    if (k_lo == 0) k_lo = std::max<std::size_t>(1, k_hi / 10);
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : trace.records) {
        if (r.k < k_lo || r.k > k_hi || r.k == 0) continue;
        double gap = r.f_value - f_star;
        if (gap > 0) pts.emplace_back(static_cast<double>(r.k), gap);
    }
    return fit_rate(pts);
}

/// Budget formulas of the rate displays with all hidden constants set to 1.
/// Acceptance checks scaling ratios only, never these absolute numbers.
enum class PlanMethod {
    MirrorDescent,         // M^2 R^2 / eps^2
    SgdStronglyConvex,     // M^2 / (mu eps)
    Intermediate,          // max{ (L R^2/eps)^{1/(p+1)}, D R^2 / eps^2 }
    IntermediateStrongly,  // max{ (L/mu)^{1/(p+1)} ln(L R^2/eps), D/(mu eps) }
    ZerothOrderNonsmooth,  // n * M^2 R^2 / eps^2
    ZerothOrderSmooth,     // n * (L R^2 / eps)^{1/(p+1)}
    Universal              // ((2^{(3+5nu)/2} L_nu R^{1+nu})/eps)^{2/(1+3nu)}
};

inline double plan(PlanMethod method, const OracleSpec& spec, double eps, double r_squared,
                   double p = 1.0, std::size_t n = 0) {
    if (eps <= 0) throw std::invalid_argument("plan: eps must be positive");
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("plan: missing constant ") + what);
    };
    double R2 = r_squared;
    switch (method) {
        case PlanMethod::MirrorDescent:
            need(spec.M > 0, "M");
            return spec.M * spec.M * R2 / (eps * eps);
        case PlanMethod::SgdStronglyConvex:
            need(spec.M > 0, "M");
            need(spec.mu > 0, "mu");
            return spec.M * spec.M / (spec.mu * eps);
        case PlanMethod::Intermediate: {
            need(spec.L > 0, "L");
            double smooth = std::pow(spec.L * R2 / eps, 1.0 / (p + 1.0));
            double stoch = spec.D > 0 ? spec.D * R2 / (eps * eps) : 0.0;
            return std::max(smooth, stoch);
        }
        case PlanMethod::IntermediateStrongly: {
            need(spec.L > 0, "L");
            need(spec.mu > 0, "mu");
            double smooth = std::pow(spec.L / spec.mu, 1.0 / (p + 1.0)) *
                            std::max(1.0, std::log(spec.L * R2 / eps));
            double stoch = spec.D > 0 ? spec.D / (spec.mu * eps) : 0.0;
            return std::max(smooth, stoch);
        }
        case PlanMethod::ZerothOrderNonsmooth:
            need(spec.M > 0, "M");
            need(n > 0, "n");
            return static_cast<double>(n) * spec.M * spec.M * R2 / (eps * eps);
        case PlanMethod::ZerothOrderSmooth:
            need(spec.L > 0, "L");
            need(n > 0, "n");
            return static_cast<double>(n) * std::pow(spec.L * R2 / eps, 1.0 / (p + 1.0));
        case PlanMethod::Universal: {
            need(spec.holder.has_value(), "holder (L_nu, nu)");
            auto [L_nu, nu] = *spec.holder;
            double R = std::sqrt(R2);
            double top = std::pow(2.0, (3.0 + 5.0 * nu) / 2.0) * L_nu * std::pow(R, 1.0 + nu);
            return std::pow(top / eps, 2.0 / (1.0 + 3.0 * nu));
        }
    }
    throw std::logic_error("plan: unreachable");
}

}  // namespace fom

#endif  // FOM_RATEFIT_HPP
