#ifndef FOM_METHODS_HPP
#define FOM_METHODS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "fom/oracle.hpp"
#include "fom/prox.hpp"
#include "fom/trace.hpp"

namespace fom {

/// Knobs shared by the method family. `p` interpolates between the
/// bias-robust dual scheme (p = 0) and the fast scheme (p = 1); the iteration
/// term decays like N^-(p+1) while oracle bias accumulates like N^p.
struct MethodParams {
    double p = 1.0;
    std::size_t budget = 1000;
    double target_eps = 0.0;  // 0 disables epsilon-based stopping
    OracleSpec spec{};
    std::uint64_t seed = 0;
    std::optional<Vector> x0{};
    std::optional<double> r_squared{};  // V(x*, x0) estimate; prox radius if absent
    bool keep_iterates = false;
    bool keep_gradients = false;
    std::size_t record_every = 1;
    double rate_constant = 1.0;  // observed contraction constant Upsilon, >= 1
};

namespace detail {

inline Vector start_point(const Problem& problem, const ProxSetup& prox,
                          const MethodParams& params) {
    if (params.x0) {
        if (params.x0->size() != problem.dim)
            throw std::invalid_argument("method: x0 dimension mismatch");
        return *params.x0;
    }
    return prox_center(prox, problem.dim);
}

struct Recorder {
    RunTrace& trace;
    const Problem& problem;
    const MethodParams& params;

    void operator()(std::size_t k, const Vector& output_candidate, const Vector& query_point,
                    const Vector& grad, double lambda, std::uint64_t cumulative_queries,
                    double grad_norm_dual) {
        trace.sum_lambda += lambda;
        if (trace.averaged.empty()) trace.averaged = zeros(query_point.size());
        axpy(lambda, query_point, trace.averaged);  // un-normalized until finish()
        if (params.keep_iterates || params.keep_gradients) trace.lambdas.push_back(lambda);
        if (params.keep_iterates) trace.iterates.push_back(query_point);
        if (params.keep_gradients) trace.gradients.push_back(grad);
        if (k % params.record_every == 0 || k == params.budget) {
            TraceRecord r;
            r.k = k;
            r.f_value = problem.value(output_candidate);
            r.grad_norm = grad_norm_dual;
            r.lambda = lambda;
            r.oracle_queries = cumulative_queries;
            trace.records.push_back(r);
        }
        trace.total_queries = cumulative_queries;
        trace.last = output_candidate;
    }

    void finish() {
        if (trace.sum_lambda > 0) trace.averaged = scale(1.0 / trace.sum_lambda, trace.averaged);
    }
};

constexpr double kBacktrackCap = 1.152921504606847e18;  // 2^60

}  // namespace detail

/// Mirror descent with gradient-normalized steps h_k = sqrt(2 alpha D^2 / N)
/// / ||g_k||_* and lambda_k = h_k weighted averaging. Optimal O(MR/sqrt(N))
/// for nonsmooth stochastic problems.
inline RunTrace mirror_descent(const Problem& problem, const ProxSetup& prox,
                               const MethodParams& params, const GradOracle& oracle) {
    RunTrace trace;
    trace.method = "mirror_descent";
    trace.seed = params.seed;
    detail::Recorder rec{trace, problem, params};
    RngState rng(params.seed);

    Vector x = detail::start_point(problem, prox, params);
    std::size_t n = x.size();
    double qd = dual_exponent(prox.norm_q);
    double d_max = params.r_squared ? *params.r_squared * prox.alpha
                                    : prox_squared_radius(prox, n) * prox.alpha;
    double c = std::sqrt(2.0 * prox.alpha * d_max / static_cast<double>(params.budget));

    Vector avg = x;
    std::uint64_t queries = 0;
    for (std::size_t k = 1; k <= params.budget; ++k) {
        OracleReply reply = oracle(x, rng);
        queries += reply.queries_used;
        double gn = norm(reply.grad, qd);
        double h = gn > 0 ? c / gn : c;
        Vector x_next = mirror_step(prox, x, reply.grad, h);
        rec(k, avg, x, reply.grad, h, queries, gn);
        // running lambda-weighted average (recompute from the recorder sums)
        avg = scale(1.0 / trace.sum_lambda, trace.averaged);
        x = std::move(x_next);
    }
    rec.finish();
    return trace;
}

/// Projected stochastic gradient for mu-strongly convex objectives:
/// h_k = 2 / (mu (k+1)), weights lambda_k = k. Euclidean geometry only; the
/// non-Euclidean strongly convex case goes through restarts instead.
inline RunTrace sgd_strongly_convex(const Problem& problem, const MethodParams& params,
                                    const GradOracle& oracle) {
    double mu = params.spec.mu;
    if (mu <= 0) throw std::invalid_argument("sgd_strongly_convex: spec.mu must be positive");
    ProxSetup prox = euclidean_setup(problem.domain);
    RunTrace trace;
    trace.method = "sgd_strongly_convex";
    trace.seed = params.seed;
    detail::Recorder rec{trace, problem, params};
    RngState rng(params.seed);

    Vector x = detail::start_point(problem, prox, params);
    Vector avg = x;
    std::uint64_t queries = 0;
    for (std::size_t k = 1; k <= params.budget; ++k) {
        OracleReply reply = oracle(x, rng);
        queries += reply.queries_used;
        double h = 2.0 / (mu * static_cast<double>(k + 1));
        Vector x_next = mirror_step(prox, x, reply.grad, h);
        rec(k, avg, x, reply.grad, static_cast<double>(k), queries, norm(reply.grad, 2));
        avg = scale(1.0 / trace.sum_lambda, trace.averaged);
        x = std::move(x_next);
    }
    rec.finish();
    return trace;
}

namespace detail {

struct LState {
    double L = 1.0;
    double L_floor = 1.0;
    bool adaptive = false;
};

inline LState init_L(const MethodParams& params) {
    LState s;
    if (params.spec.L > 0) {
        s.L = params.spec.L;
        s.adaptive = false;
    } else {
        s.L = 1.0;
        s.adaptive = true;
    }
    s.L_floor = s.L / 64.0;  // initial guess / 2^6
    return s;
}

inline void grow_L(LState& s, const char* who) {
    s.L *= 2.0;
    if (s.L > kBacktrackCap)
        throw std::runtime_error(std::string(who) + ": backtracking exceeded 2^60 * L0");
}

inline void relax_L(LState& s) {
    if (s.adaptive) s.L = std::max(s.L / 2.0, s.L_floor);
}

// Upper-model check of Assumption 1 at the pair (from -> to), L in norm_q.
inline bool model_holds(const Problem& problem, const ProxSetup& prox, const Vector& from,
                        double f_from, const Vector& g_from, const Vector& to, double L,
                        double delta) {
    Vector d = sub(to, from);
    double dn = norm(d, prox.norm_q);
    double lhs = problem.value(to);
    double rhs = f_from + dot(g_from, d) + 0.5 * L * dn * dn + delta;
    double slack = 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0);
    return lhs <= rhs + slack;
}

}  // namespace detail

/// Primal gradient method: relaxational prox steps x_{k+1} = T_L(x_k).
/// Bias-robust (the model is applied once per step); rate O(L R^2 / N + delta).
/// With spec.L = 0 the constant is found by doubling/halving backtracking.
inline RunTrace pgm(const Problem& problem, const ProxSetup& prox, const MethodParams& params,
                    const GradOracle& oracle) {
    RunTrace trace;
    trace.method = "pgm";
    trace.seed = params.seed;
    detail::Recorder rec{trace, problem, params};
    RngState rng(params.seed);

    Vector x = detail::start_point(problem, prox, params);
    detail::LState ls = detail::init_L(params);
    std::uint64_t queries = 0;
    for (std::size_t k = 1; k <= params.budget; ++k) {
        OracleReply reply = oracle(x, rng);
        queries += reply.queries_used;
        Vector x_next;
        for (;;) {
            x_next = mirror_step(prox, x, reply.grad, prox.alpha / ls.L);
            if (!ls.adaptive ||
                detail::model_holds(problem, prox, x, reply.value, reply.grad, x_next, ls.L,
                                    params.spec.delta))
                break;
            detail::grow_L(ls, "pgm");
        }
        detail::relax_L(ls);
        rec(k, x_next, x, reply.grad, 1.0, queries, norm(reply.grad, dual_exponent(prox.norm_q)));
        x = std::move(x_next);
        if (params.target_eps > 0 && problem.f_star &&
            problem.value(x) - *problem.f_star <= params.target_eps)
            break;
    }
    rec.finish();
    return trace;
}

/// Dual gradient method: full dual averaging of the gradients anchored at x0,
/// reporting the gradient-mapped points w_k = T_L(z_k). Bias enters once per
/// step, so the O(L R^2 / N) rate degrades only by +delta.
inline RunTrace dgm(const Problem& problem, const ProxSetup& prox, const MethodParams& params,
                    const GradOracle& oracle) {
    RunTrace trace;
    trace.method = "dgm";
    trace.seed = params.seed;
    detail::Recorder rec{trace, problem, params};
    RngState rng(params.seed);

    Vector x0 = detail::start_point(problem, prox, params);
    Vector z = x0;
    double L = params.spec.L > 0 ? params.spec.L : 1.0;
    Vector g_sum = zeros(x0.size());
    std::uint64_t queries = 0;
    for (std::size_t k = 1; k <= params.budget; ++k) {
        OracleReply reply = oracle(z, rng);
        queries += reply.queries_used;
        Vector w = mirror_step(prox, z, reply.grad, prox.alpha / L);
        rec(k, w, z, reply.grad, 1.0, queries, norm(reply.grad, dual_exponent(prox.norm_q)));
        axpy(1.0, reply.grad, g_sum);
        z = mirror_step(prox, x0, g_sum, prox.alpha / L);
    }
    rec.finish();
    return trace;
}

namespace detail {

/// Two-sequence estimate-sequence scheme (method of similar triangles) with
/// weight growth a_k ~ k^p. p = 1 with the saturating weight choice is the
/// fast gradient method; smaller p trades rate for bias robustness.
inline RunTrace accelerated_family(const Problem& problem, const ProxSetup& prox,
                                   const MethodParams& params, const GradOracle& oracle,
                                   double p, bool saturate_weights, const char* name) {
    RunTrace trace;
    trace.method = name;
    trace.seed = params.seed;
    Recorder rec{trace, problem, params};
    RngState rng(params.seed);

    Vector x0 = start_point(problem, prox, params);
    Vector x = x0, z = x0;
    Vector g_sum = zeros(x0.size());
    LState ls = init_L(params);
    double A = 0.0;
    std::uint64_t queries = 0;

    for (std::size_t k = 1; k <= params.budget; ++k) {
        for (;;) {  // backtracking loop over L
            double L = ls.L;
            double a;
            if (saturate_weights) {
                // largest a with a^2 L = A + a
                a = (1.0 + std::sqrt(1.0 + 4.0 * L * A)) / (2.0 * L);
            } else {
                a = std::pow(static_cast<double>(k + 1), p) / (4.0 * L);
                double a_max = (1.0 + std::sqrt(1.0 + 4.0 * L * A)) / (2.0 * L);
                a = std::min(a, a_max);  // keep a^2 L <= A + a
            }
            double A_next = A + a;
            Vector y = A > 0 ? add(scale(A / A_next, x), scale(a / A_next, z)) : z;
            OracleReply reply = oracle(y, rng);
            Vector g_try = g_sum;
            axpy(a, reply.grad, g_try);
            Vector z_next = mirror_step(prox, x0, g_try, prox.alpha);
            Vector x_next = add(scale(A / A_next, x), scale(a / A_next, z_next));
            bool ok = !ls.adaptive || model_holds(problem, prox, y, reply.value, reply.grad,
                                                  x_next, ls.L, params.spec.delta);
            if (ok) {
                queries += reply.queries_used;
                rec(k, x_next, y, reply.grad, a, queries,
                    norm(reply.grad, dual_exponent(prox.norm_q)));
                x = std::move(x_next);
                z = std::move(z_next);
                g_sum = std::move(g_try);
                A = A_next;
                relax_L(ls);
                break;
            }
            grow_L(ls, name);
        }
    }
    rec.finish();
    return trace;
}

}  // namespace detail

/// Fast gradient method: maximal acceleration, O(L R^2 / N^2) but bias grows
/// as N delta.
inline RunTrace fgm(const Problem& problem, const ProxSetup& prox, const MethodParams& params,
                    const GradOracle& oracle) {
    return detail::accelerated_family(problem, prox, params, oracle, 1.0, true, "fgm");
}

/// The p-interpolated family: p = 0 dispatches to the dual gradient method,
/// p = 1 to the fast method; in between the weights grow like k^p, giving the
/// N^-(p+1) iteration term and N^p delta bias accumulation.
inline RunTrace intermediate_gradient(const Problem& problem, const ProxSetup& prox,
                                      const MethodParams& params, const GradOracle& oracle) {
    double p = params.p;
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("intermediate_gradient: p must lie in [0,1]");
    if (p == 0.0) return dgm(problem, prox, params, oracle);
    if (p == 1.0) return fgm(problem, prox, params, oracle);
    return detail::accelerated_family(problem, prox, params, oracle, p, false,
                                      "intermediate_gradient");
}

/// Universal fast gradient method: no smoothness constants supplied; the local
/// constant is backtracked against a model inequality with inexactness budget
/// eps tau / 2, which makes the method optimal across Hoelder classes.
/// Stops once the certified bound (prox diameter) / A_k drops below eps/2.
inline RunTrace universal_method(const Problem& problem, const ProxSetup& prox, double eps,
                                 MethodParams params = {}) {
    if (eps <= 0) throw std::invalid_argument("universal_method: eps must be positive");
    RunTrace trace;
    trace.method = "universal";
    trace.seed = params.seed;
    detail::Recorder rec{trace, problem, params};

    Vector x0 = detail::start_point(problem, prox, params);
    std::size_t n = x0.size();
    double r2 = prox_squared_radius(prox, n);  // bounds V(u, x0)/alpha over the domain
    bool domain_bounded = !std::holds_alternative<Free>(prox.domain) &&
                          !std::holds_alternative<AffineSum>(prox.domain);
    Vector y = x0, z = x0;
    Vector g_sum = zeros(n);
    double model_const = 0.0;  // sum a_i (f(x_i) - <g_i, x_i>) for the gap certificate
    double A = 0.0;
    double L = 1.0;
    std::uint64_t queries = 0;
    std::size_t max_rounds = params.budget > 0 ? params.budget : 100000;

    for (std::size_t k = 1; k <= max_rounds; ++k) {
        Vector y_next, z_next, g_try;
        double A_next;
        for (;;) {
            double a = (1.0 + std::sqrt(1.0 + 4.0 * L * A)) / (2.0 * L);
            A_next = A + a;
            double tau = a / A_next;
            Vector x_try = A > 0 ? add(scale(1.0 - tau, y), scale(tau, z)) : z;
            OracleReply reply = eval_exact(problem, x_try);
            ++queries;
            g_try = g_sum;
            axpy(a, reply.grad, g_try);
            z_next = mirror_step(prox, x0, g_try, prox.alpha);
            y_next = add(scale(1.0 - tau, y), scale(tau, z_next));
            ++queries;  // f(y_next) below is a real oracle call of the method
            Vector d = sub(y_next, x_try);
            double dn = norm(d, prox.norm_q);
            double rhs = reply.value + dot(reply.grad, d) + 0.5 * L * dn * dn + 0.5 * eps * tau;
            if (problem.value(y_next) <= rhs + 1e-14 * (std::abs(rhs) + 1.0)) {
                model_const += a * (reply.value - dot(reply.grad, x_try));
                rec(k, y_next, x_try, reply.grad, a, queries,
                    norm(reply.grad, dual_exponent(prox.norm_q)));
                break;
            }
            L *= 2.0;
            if (L > detail::kBacktrackCap)
                throw std::runtime_error("universal_method: backtracking diverged");
        }
        y = std::move(y_next);
        z = std::move(z_next);
        g_sum = std::move(g_try);
        A = A_next;
        L = std::max(L / 2.0, 1e-12);
        if (r2 / A <= 0.5 * eps) break;  // certified: f(y) - f* <= V(x*,x0)/(alpha A) + eps/2
        if (domain_bounded) {
            // computable duality gap: the averaged linear model minorizes f
            double model_min = (model_const + dot(g_sum, linear_minimizer(prox.domain, g_sum))) / A;
            if (problem.value(y) - model_min <= eps) break;
        }
    }
    rec.finish();
    return trace;
}

/// Restart wrapper for mu-strongly convex problems around the fast method:
/// each stage shrinks the certified distance bound by half, giving
/// O(sqrt(L/mu) ln(L R^2 / eps)) total oracle calls.
inline RunTrace restart_strongly_convex(const Problem& problem, const ProxSetup& prox,
                                        double mu, double target_eps, MethodParams params,
                                        const GradOracle& oracle) {
    if (mu <= 0) throw std::invalid_argument("restart_strongly_convex: mu must be positive");
    if (target_eps <= 0)
        throw std::invalid_argument("restart_strongly_convex: target_eps must be positive");
    double L = params.spec.L;
    if (L <= 0) throw std::invalid_argument("restart_strongly_convex: spec.L required");

    RunTrace trace;
    trace.method = "restart_fgm";
    trace.seed = params.seed;

    Vector x = detail::start_point(problem, prox, params);
    double R2 = params.r_squared ? *params.r_squared : 2.0 * prox_squared_radius(prox, x.size());
    // Stage budget: 2 L R^2 / (N+1)^2 <= mu R^2 / 4  =>  N = ceil(sqrt(8 L / mu)).
    std::size_t stage_budget =
        static_cast<std::size_t>(std::ceil(std::sqrt(8.0 * L / (mu * prox.alpha))));
    std::uint64_t queries = 0;
    std::size_t k_out = 0;
    double gap_bound = 0.5 * L * R2;  // smoothness: f(x0) - f* <= L R0^2 / 2
    std::size_t stage = 0;
    for (; gap_bound > target_eps && stage < 400; ++stage) {
        MethodParams sp = params;
        sp.budget = stage_budget;
        sp.x0 = x;
        sp.seed = params.seed + stage + 1;
        sp.record_every = 1;
        RunTrace st = fgm(problem, prox, sp, oracle);
        queries += st.total_queries;
        double new_bound = 2.0 * L * R2 / ((stage_budget + 1.0) * (stage_budget + 1.0));
        if (problem.f_star) {
            double actual = problem.value(st.last) - *problem.f_star;
            if (actual > gap_bound * (1.0 + 1e-9) && actual > target_eps)
                throw std::runtime_error(
                    "restart_strongly_convex: stage failed to contract the gap");
        }
        gap_bound = std::min(gap_bound, new_bound);
        R2 = 2.0 * gap_bound / mu;  // strong convexity converts the gap into a distance bound
        x = st.last;
        ++k_out;
        TraceRecord r;
        r.k = k_out;
        r.f_value = problem.value(x);
        r.lambda = 1.0;
        r.oracle_queries = queries;
        trace.records.push_back(r);
    }
    trace.last = x;
    trace.averaged = x;
    trace.sum_lambda = 1.0;
    trace.total_queries = queries;
    trace.budget_exhausted = gap_bound > target_eps;
    return trace;
}

/// Quadratic regularization: eps/R^2-strongly-convex perturbation around x0.
/// The objective moves by at most eps/2 when R is a valid distance bound; the
/// spec's mu and L both grow by exactly eps/R^2.
inline Problem regularize(const Problem& problem, double eps, double R, Vector center) {
    if (eps < 0 || R <= 0) throw std::invalid_argument("regularize: need eps >= 0, R > 0");
    double mu_add = eps / (R * R);
    Problem out = problem;
    out.f_star.reset();
    out.x_star.reset();
    auto base_value = problem.value;
    auto base_grad = problem.grad;
    out.value = [base_value, mu_add, center](const Vector& x) {
        Vector d = sub(x, center);
        return base_value(x) + 0.5 * mu_add * dot(d, d);
    };
    out.grad = [base_grad, mu_add, center](const Vector& x) {
        Vector g = base_grad(x);
        axpy(mu_add, sub(x, center), g);
        return g;
    };
    out.spec.mu += mu_add;
    out.spec.L += mu_add;
    out.sampler = {};  // the perturbed sampler would no longer be unbiased for f
    return out;
}

/// Runs `make_run(R)` for R = 1, 2, 4, ... until `accept` certifies the
/// output; total work is a geometric sum, so at most a constant factor above
/// the work at the true R.
inline RunTrace doubling_R(const std::function<RunTrace(double)>& make_run,
                           const std::function<bool(const RunTrace&)>& accept,
                           double r_cap = 1 << 20) {
    std::uint64_t queries = 0;
    for (double R = 1.0; R <= r_cap; R *= 2.0) {
        RunTrace t = make_run(R);
        queries += t.total_queries;
        if (accept(t)) {
            t.total_queries = queries;
            return t;
        }
    }
    throw std::runtime_error("doubling_R: R cap exhausted without verifier acceptance");
}

/// Strongly convex gradient-norm stopping rule:
/// f(x) - f* <= ||grad f(x)||_*^2 / (2 mu) <= eps. Sound whenever mu is not
/// overstated; needs an interior optimum.
inline bool stop_by_grad_norm(double grad_dual_norm, double mu, double eps) {
    if (mu <= 0) throw std::invalid_argument("stop_by_grad_norm: mu must be positive");
    return grad_dual_norm * grad_dual_norm / (2.0 * mu) <= eps;
}

inline bool stop_by_grad_norm(const RunTrace& trace, double mu, double eps) {
    if (trace.records.empty()) return false;
    return stop_by_grad_norm(trace.records.back().grad_norm, mu, eps);
}

}  // namespace fom

#endif  // FOM_METHODS_HPP
