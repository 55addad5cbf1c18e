#ifndef FOM_ORACLE_HPP
#define FOM_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>

#include "fom/domain.hpp"
#include "fom/rng.hpp"
#include "fom/vec.hpp"

namespace fom {

/// One oracle answer: value F(x, xi), (sub)gradient G(x, xi), and the number
/// of underlying queries it cost.
struct OracleReply {
    double value = 0.0;
    Vector grad;
    std::uint64_t queries_used = 1;
};

/// The constants an oracle certifies about itself, measured in `norm_q`:
/// model bias delta, smoothness L, strong convexity mu, subgradient bound M,
/// gradient variance bound D, and optionally a Hoelder pair (L_nu, nu).
struct OracleSpec {
    double delta = 0.0;
    double L = 0.0;
    double mu = 0.0;
    double M = 0.0;
    double D = 0.0;
    std::optional<std::pair<double, double>> holder;  // (L_nu, nu), nu in [0,1]
    double norm_q = 2.0;

    void validate() const {
        if (delta < 0 || L < 0 || mu < 0 || M < 0 || D < 0)
            throw std::invalid_argument("OracleSpec: constants must be nonnegative");
        if (mu > 0 && L > 0 && mu > L + 1e-12)
            throw std::invalid_argument("OracleSpec: mu must not exceed L");
        if (holder && (holder->second < 0 || holder->second > 1))
            throw std::invalid_argument("OracleSpec: nu must lie in [0,1]");
    }
};

/// A benchmark problem: exact value/gradient, the feasible domain, certified
/// constants, and (when available) ground truth for gap measurement. An
/// optional sampler supplies unbiased stochastic subgradients.
struct Problem {
    std::size_t dim = 0;
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> grad;
    Domain domain = Free{};
    OracleSpec spec{};
    std::optional<double> f_star{};
    std::optional<Vector> x_star{};
    std::function<OracleReply(const Vector&, RngState&)> sampler{};
};

/// Gradient oracle: pure function of (x, rng state).
using GradOracle = std::function<OracleReply(const Vector&, RngState&)>;

/// Value-only oracle. The state is taken by value so two queries with the
/// same state share the realization of xi (the two-point estimator needs it).
using ValueOracle = std::function<double(const Vector&, RngState)>;

inline OracleReply eval_exact(const Problem& p, const Vector& x) {
    OracleReply r;
    r.value = p.value(x);
    r.grad = p.grad(x);
    r.queries_used = 1;
    if (!std::isfinite(r.value) || !is_finite(r.grad))
        throw std::domain_error("eval_exact: non-finite reply (x outside the extended domain?)");
    return r;
}

inline OracleReply eval_stochastic(const Problem& p, const Vector& x, RngState& rng) {
    if (p.sampler) return p.sampler(x, rng);
    return eval_exact(p, x);  // deterministic problems degrade to the exact oracle
}

inline GradOracle exact_oracle(const Problem& p) {
    return [&p](const Vector& x, RngState&) { return eval_exact(p, x); };
}

inline GradOracle stochastic_oracle(const Problem& p) {
    return [&p](const Vector& x, RngState& rng) { return eval_stochastic(p, x, rng); };
}

/// Gradient clipping: rescale to q-norm M when above it; value passes through.
inline OracleReply clip(OracleReply reply, double M, double q = 2.0) {
    if (M <= 0) throw std::invalid_argument("clip: M must be positive");
    double n = norm(reply.grad, q);
    if (n > M) reply.grad = scale(M / n, reply.grad);
    return reply;
}

/// Mini-batch wrapper: arithmetic mean of m independent replies; the work
/// counter adds up.
inline GradOracle minibatch(GradOracle oracle, std::size_t m) {
    if (m == 0) throw std::invalid_argument("minibatch: m must be >= 1");
    if (m == 1) return oracle;
    return [oracle = std::move(oracle), m](const Vector& x, RngState& rng) {
        OracleReply acc = oracle(x, rng);
        for (std::size_t k = 1; k < m; ++k) {
            OracleReply r = oracle(x, rng);
            acc.value += r.value;
            axpy(1.0, r.grad, acc.grad);
            acc.queries_used += r.queries_used;
        }
        acc.value /= static_cast<double>(m);
        acc.grad = scale(1.0 / static_cast<double>(m), acc.grad);
        return acc;
    };
}

enum class BiasMode {
    AwayFromOptimum,  // unit direction x - x* (needs x_star); worst for momentum
    FixedDirection,   // one random unit vector drawn from the seed
    FreshRandom       // independent unit vector per call (variance, not bias)
};

/// Instrumented Assumption-1 bias of magnitude delta over a region of size R:
/// G(x) = grad f(x) + (delta/R) u(x), F(x) = f(x) - delta. The pair is a
/// (2 delta, L, 0)-oracle on any set of diameter R.
inline GradOracle biased_oracle(const Problem& p, double delta, double R,
                                BiasMode mode = BiasMode::AwayFromOptimum,
                                std::uint64_t seed = 0) {
    if (delta < 0 || R <= 0) throw std::invalid_argument("biased_oracle: need delta >= 0, R > 0");
    if (mode == BiasMode::AwayFromOptimum && !p.x_star)
        throw std::invalid_argument("biased_oracle: AwayFromOptimum needs x_star");
    Vector fixed;
    if (mode == BiasMode::FixedDirection) {
        RngState r(seed ^ 0xB1A5ULL);
        fixed = sample_unit_sphere(p.dim, r);
    }
    double amp = delta / R;
    return [&p, delta, amp, mode, fixed](const Vector& x, RngState& rng) {
        OracleReply r = eval_exact(p, x);
        r.value -= delta;
        Vector u;
        switch (mode) {
            case BiasMode::AwayFromOptimum: {
                u = sub(x, *p.x_star);
                double nu = norm(u, 2);
                u = nu > 1e-15 ? scale(1.0 / nu, u) : unit(x.size(), 0);
                break;
            }
            case BiasMode::FixedDirection: u = fixed; break;
            case BiasMode::FreshRandom: u = sample_unit_sphere(x.size(), rng); break;
        }
        axpy(amp, u, r.grad);
        return r;
    };
}

/// Random coordinate estimator: g = n (df/dx_i) e_i with i uniform, so
/// E[g] equals the gradient and E||g||_2^2 = n ||grad f||_2^2 (condition (6)
/// with C_n = n, Delta = 0).
inline OracleReply coordinate_estimator(const Problem& p, const Vector& x, RngState& rng) {
    std::size_t n = x.size();
    OracleReply exact = eval_exact(p, x);
    std::size_t i = static_cast<std::size_t>(rng.next_u64() % n);
    OracleReply r;
    r.value = exact.value;
    r.grad = zeros(n);
    r.grad[i] = static_cast<double>(n) * exact.grad[i];
    r.queries_used = 1;
    return r;
}

/// Embedding of a Hoelder-gradient problem into the smooth inexact-oracle
/// class: the effective Lipschitz constant admitting bias delta.
/// nu = 1 returns L_nu itself; nu = 0 gives M^2 / (2 delta).
inline double holder_to_smooth(double L_nu, double nu, double delta) {
    if (delta <= 0) throw std::invalid_argument("holder_to_smooth: delta must be positive");
    if (nu < 0 || nu > 1) throw std::invalid_argument("holder_to_smooth: nu must lie in [0,1]");
    if (nu == 1.0) return L_nu;
    double base = L_nu * (1.0 - nu) / (2.0 * delta * (1.0 + nu));
    return L_nu * std::pow(base, (1.0 - nu) / (1.0 + nu));
}

/// Additive value noise of Assumption-2 shape: a state-free part bounded by
/// delta/2 plus a fixed Lipschitz random field in x. The field is a finite
/// Fourier sum, so its amplitude (delta/2) and Lipschitz constant are
/// certified analytically, not sampled.
class NoiseModel {
  public:
    NoiseModel() = default;  // zero noise

    NoiseModel(double delta, double R, std::uint64_t seed, std::size_t n_terms = 4)
        : delta_(delta), R_(R) {
        if (delta < 0 || R <= 0) throw std::invalid_argument("NoiseModel: need delta >= 0, R > 0");
        RngState rng(seed);
        waves_.resize(n_terms);
        for (auto& w : waves_) {
            w.phase = rng.uniform() * 6.283185307179586;
            w.freq.clear();
        }
        dim_hint_ = 0;
        seed_ = seed;
    }

    double delta() const { return delta_; }
    /// Certified Lipschitz constant of the spatial part (= delta * R, i.e.
    /// scaled so that spatial(x) / (R delta) is 1-Lipschitz).
    double spatial_lipschitz() const { return delta_ * R_; }

    /// Spatial part: |spatial| <= delta/2, Lipschitz constant delta * R.
    double spatial(const Vector& x) const {
        if (delta_ == 0.0 || waves_.empty()) return 0.0;
        ensure_dim(x.size());
        double s = 0.0;
        for (const auto& w : waves_) s += std::sin(dot(w.freq, x) + w.phase);
        return 0.5 * delta_ * s / static_cast<double>(waves_.size());
    }

    /// State-free part: uniform in [-delta/2, delta/2] as a function of xi.
    double state_free(RngState& xi) const {
        if (delta_ == 0.0) return 0.0;
        return 0.5 * delta_ * (2.0 * xi.uniform() - 1.0);
    }

    double total(const Vector& x, RngState& xi) const { return spatial(x) + state_free(xi); }

    std::uint64_t seed() const { return seed_; }

  private:
    struct Wave {
        Vector freq;
        double phase = 0.0;
    };

    // Frequencies are drawn lazily once the dimension is known and then kept
    // fixed; each ||freq||_2 = 2R so the field's Lipschitz constant is
    // (delta/2) * 2R = delta * R exactly.
    void ensure_dim(std::size_t n) const {
        if (dim_hint_ == n) return;
        RngState rng(seed_ ^ 0xF00DF00DULL);
        for (auto& w : waves_) {
            w.freq = sample_unit_sphere(n, rng);
            for (double& v : w.freq) v *= 2.0 * R_;
        }
        dim_hint_ = n;
    }

    double delta_ = 0.0;
    double R_ = 1.0;
    std::uint64_t seed_ = 0;
    mutable std::vector<Wave> waves_;
    mutable std::size_t dim_hint_ = 0;
};

/// Wraps a problem's values as a delta-oracle: f(x, xi) + spatial(x) +
/// state_free(xi). The returned oracle is pure in (x, state).
inline ValueOracle inject_noise(const Problem& p, NoiseModel model) {
    return [value = p.value, model = std::move(model)](const Vector& x, RngState xi) {
        double base = value(x);  // deterministic objective; xi feeds the noise only
        RngState noise_state = xi.split();
        return base + model.spatial(x) + model.state_free(noise_state);
    };
}

inline ValueOracle inject_noise(ValueOracle base, NoiseModel model) {
    return [base = std::move(base), model = std::move(model)](const Vector& x, RngState xi) {
        RngState noise_state = xi.split();
        double v = base(x, xi);
        return v + model.spatial(x) + model.state_free(noise_state);
    };
}

}  // namespace fom

#endif  // FOM_ORACLE_HPP
