#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fom/oracle.hpp"
#include "fom/problems.hpp"

using namespace fom;

namespace {

Problem half_sq_norm(std::size_t n) {
    Problem p;
    p.dim = n;
    p.value = [](const Vector& x) { return 0.5 * dot(x, x); };
    p.grad = [](const Vector& x) { return x; };
    p.spec.L = 1.0;
    p.spec.mu = 1.0;
    p.f_star = 0.0;
    p.x_star = zeros(n);
    return p;
}

}  // namespace

TEST_CASE("exact oracle") {
    Problem p = half_sq_norm(2);
    OracleReply r = eval_exact(p, {1, 2});
    CHECK(r.value == Catch::Approx(2.5));
    CHECK(r.grad[0] == Catch::Approx(1.0));
    CHECK(r.grad[1] == Catch::Approx(2.0));
    CHECK(r.queries_used == 1);

    Vector c{3, -1};
    Problem lin;
    lin.dim = 2;
    lin.value = [c](const Vector& x) { return dot(c, x); };
    lin.grad = [c](const Vector&) { return c; };
    for (double t : {-2.0, 0.0, 5.0}) {
        OracleReply rl = eval_exact(lin, {t, t});
        CHECK(rl.grad == c);
    }
}

TEST_CASE("finite differences validate the quadratic pagerank gradient") {
    RngState rng(17);
    SparseMatrix P = generate_sparse_stochastic(3, 2, rng);
    PageRankInstance inst{P, 1.0};
    Vector x{0.7, 0.5, -0.2};
    Vector g = pagerank_quadratic_grad(inst, x);
    double h = 1e-6;
    for (std::size_t i = 0; i < 3; ++i) {
        Vector xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        double fd =
            (pagerank_quadratic_value(inst, xp) - pagerank_quadratic_value(inst, xm)) / (2 * h);
        CHECK(g[i] == Catch::Approx(fd).margin(1e-5));
    }
}

TEST_CASE("stochastic oracle degrades to exact for deterministic problems") {
    Problem p = half_sq_norm(3);
    RngState rng(5);
    OracleReply r = eval_stochastic(p, {1, 1, 1}, rng);
    CHECK(r.value == Catch::Approx(1.5));
    CHECK(r.grad == Vector{1, 1, 1});
}

TEST_CASE("finite sum sampler is unbiased") {
    // least-squares components, expectation enumerable at m = 4
    std::vector<Component> comps;
    std::vector<Vector> as = {{1, 0}, {0, 1}, {1, 1}, {2, -1}};
    Vector bs{1, -1, 0, 2};
    for (int k = 0; k < 4; ++k) {
        Vector a = as[k];
        double b = bs[k];
        comps.push_back({[a, b](const Vector& x) {
                             double r = dot(a, x) - b;
                             return 0.5 * r * r;
                         },
                         [a, b](const Vector& x) { return scale(dot(a, x) - b, a); }});
    }
    Problem p = finite_sum_problem(std::move(comps), 2);
    Vector x{0.3, -0.7};
    Vector full = p.grad(x);

    // enumeration over the uniform index: mean of component gradients
    RngState rng(9);
    Vector mean = zeros(2);
    const int N = 200000;
    for (int k = 0; k < N; ++k) axpy(1.0 / N, eval_stochastic(p, x, rng).grad, mean);
    CHECK(mean[0] == Catch::Approx(full[0]).margin(0.02));
    CHECK(mean[1] == Catch::Approx(full[1]).margin(0.02));

    // m = 1: stochastic == exact
    Problem one = finite_sum_problem({{p.value, p.grad}}, 2);
    RngState r1(3);
    CHECK(eval_stochastic(one, x, r1).value == Catch::Approx(p.value(x)));

    CHECK_THROWS_AS(finite_sum_problem({}, 2), std::invalid_argument);
}

TEST_CASE("example 1 column sampler expectation by enumeration") {
    RngState rng(23);
    SparseMatrix P = generate_sparse_stochastic(5, 3, rng);
    PageRankInstance inst{P, 1.0};
    Vector x{0.1, 0.2, 0.3, 0.25, 0.15};
    // E_{i~x}[column i of A] = A x, enumerated exactly over the 5 outcomes
    Vector expect = zeros(5);
    for (std::size_t i = 0; i < 5; ++i) {
        Vector col(5, 0.0);
        for (const auto& e : inst.P.row(i)) col[e.idx] += e.value;
        col[i] -= 1.0;
        axpy(x[i], col, expect);
    }
    Vector ax = inst.apply_A(x);
    for (std::size_t j = 0; j < 5; ++j) CHECK(expect[j] == Catch::Approx(ax[j]).margin(1e-12));
}

TEST_CASE("clipping") {
    OracleReply r;
    r.value = 1.0;
    r.grad = {1, 1};
    OracleReply same = clip(r, 5.0, 2.0);
    CHECK(same.grad == r.grad);

    r.grad = {3, 4};
    OracleReply boundary = clip(r, 5.0, 2.0);
    CHECK(boundary.grad == Vector{3, 4});

    r.grad = {6, 8};
    OracleReply scaled = clip(r, 5.0, 2.0);
    CHECK(scaled.grad[0] == Catch::Approx(3.0));
    CHECK(scaled.grad[1] == Catch::Approx(4.0));
    CHECK(norm(scaled.grad, 2) == Catch::Approx(5.0));
    CHECK(scaled.value == 1.0);
}

TEST_CASE("clipping bias decreases in M for a light-tailed oracle") {
    Problem p = half_sq_norm(2);
    Vector x{1.0, 0.5};
    Vector g_true = p.grad(x);
    GradOracle noisy = [&p](const Vector& xx, RngState& rng) {
        OracleReply r = eval_exact(p, xx);
        for (auto& v : r.grad) v += 0.8 * rng.normal();
        return r;
    };
    double prev_bias = kInf;
    for (double M : {0.5, 1.0, 1.8, 3.0, 6.0}) {
        RngState rng(77);
        Vector mean = zeros(2);
        const int N = 120000;
        for (int k = 0; k < N; ++k) axpy(1.0 / N, clip(noisy(x, rng), M, 2.0).grad, mean);
        double bias = norm(sub(mean, g_true), 2);
        CHECK(bias <= prev_bias + 0.01);  // monotone modulo MC jitter
        prev_bias = bias;
    }
}

TEST_CASE("minibatch averages and accounts work") {
    Problem p = half_sq_norm(2);
    GradOracle base = [&p](const Vector& x, RngState& rng) {
        OracleReply r = eval_exact(p, x);
        r.grad[0] += rng.normal();
        r.grad[1] += rng.normal();
        return r;
    };
    // variance D ~ 2 per reply; batched variance ~ D/m
    Vector x{0.2, -0.1};
    for (std::size_t m : {4u, 16u}) {
        GradOracle batched = minibatch(base, m);
        RngState rng(m);
        double var = 0;
        const int N = 10000;
        Vector g_true = p.grad(x);
        for (int k = 0; k < N; ++k) {
            OracleReply r = batched(x, rng);
            CHECK(r.queries_used == m);
            Vector d = sub(r.grad, g_true);
            var += dot(d, d);
        }
        var /= N;
        CHECK(var == Catch::Approx(2.0 / m).epsilon(0.10));
    }
    // m = 1 identity, deterministic oracle unchanged for any m
    GradOracle same = minibatch(exact_oracle(p), 1);
    RngState rng(1);
    CHECK(same(x, rng).value == Catch::Approx(p.value(x)));
    GradOracle det = minibatch(exact_oracle(p), 7);
    OracleReply rd = det(x, rng);
    CHECK(rd.value == Catch::Approx(p.value(x)));
    CHECK(rd.grad == p.grad(x));
    CHECK(rd.queries_used == 7);
}

TEST_CASE("coordinate estimator moments by enumeration") {
    Problem p = make_diag_quadratic({1.0, 2.0, 3.0}, {0, 0, 0});
    Vector x{1.0, -1.0, 0.5};
    Vector g = p.grad(x);
    // enumerate the three outcomes: mean = grad, E||g||^2 = 3 ||grad||^2
    Vector mean = zeros(3);
    double second = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        Vector gi = zeros(3);
        gi[i] = 3.0 * g[i];
        axpy(1.0 / 3.0, gi, mean);
        second += dot(gi, gi) / 3.0;
    }
    for (int i = 0; i < 3; ++i) CHECK(mean[i] == Catch::Approx(g[i]));
    CHECK(second == Catch::Approx(3.0 * dot(g, g)));

    // n = 1 reduces to the exact gradient
    Problem p1 = make_diag_quadratic({2.0}, {0.5});
    RngState rng(4);
    OracleReply r = coordinate_estimator(p1, {2.0}, rng);
    CHECK(r.grad[0] == Catch::Approx(p1.grad({2.0})[0]));

    // the sampled estimator agrees with the enumerated distribution
    RngState rs(8);
    Vector smean = zeros(3);
    const int N = 60000;
    for (int k = 0; k < N; ++k) axpy(1.0 / N, coordinate_estimator(p, x, rs).grad, smean);
    for (int i = 0; i < 3; ++i) CHECK(smean[i] == Catch::Approx(g[i]).margin(0.05));
}

TEST_CASE("holder embedding") {
    CHECK(holder_to_smooth(3.5, 1.0, 0.01) == Catch::Approx(3.5));
    CHECK(holder_to_smooth(2.0, 0.0, 0.1) == Catch::Approx(2.0 * 2.0 / (2.0 * 0.1)));
    // nu = 0.5: independent re-evaluation of the closed formula in long double
    long double L_nu = 1.0L, nu = 0.5L, delta = 1.0L;
    long double base = L_nu * (1.0L - nu) / (2.0L * delta * (1.0L + nu));
    long double expect = L_nu * powl(base, (1.0L - nu) / (1.0L + nu));
    CHECK(holder_to_smooth(1.0, 0.5, 1.0) == Catch::Approx(static_cast<double>(expect)));
    // monotone decreasing in delta for nu < 1
    double prev = kInf;
    for (double d : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
        double L = holder_to_smooth(2.0, 0.3, d);
        CHECK(L < prev);
        prev = L;
    }
    CHECK_THROWS_AS(holder_to_smooth(1.0, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("noise model invariants") {
    Problem p = half_sq_norm(3);
    double delta = 0.01, R = 2.0;
    NoiseModel model(delta, R, 99);
    ValueOracle vo = inject_noise(p, model);

    // sup |delta(x, xi)| <= delta over many probes
    RngState rng(1);
    double worst = 0;
    for (int k = 0; k < 100000; ++k) {
        Vector x = scale(R, sample_unit_ball(3, rng));
        RngState xi = rng.split();
        worst = std::max(worst, std::abs(vo(x, xi) - p.value(x)));
    }
    CHECK(worst <= delta + 1e-12);
    CHECK(worst > 0.0);

    // shared xi gives identical noise at the same point
    RngState xi(12345);
    Vector x{0.5, 0.1, -0.2};
    CHECK(vo(x, xi) == vo(x, xi));

    // zero-amplitude model: exact values
    ValueOracle clean = inject_noise(p, NoiseModel{});
    RngState xi2(6);
    CHECK(clean(x, xi2) == Catch::Approx(p.value(x)));

    // certified Lipschitz constant of the spatial field: sampled ratio below it
    RngState rr(3);
    for (int k = 0; k < 20000; ++k) {
        Vector a = scale(R, sample_unit_ball(3, rr));
        Vector b = scale(R, sample_unit_ball(3, rr));
        double num = std::abs(model.spatial(a) - model.spatial(b));
        double den = norm(sub(a, b), 2);
        if (den > 1e-9) CHECK(num / den <= model.spatial_lipschitz() + 1e-9);
    }
}

TEST_CASE("delta-L-mu sandwich holds for certified oracles") {
    // exact oracle on a quadratic: (0, L, mu) sandwich
    Problem p = make_diag_quadratic(log_spaced_spectrum(4, 0.5, 2.0), zeros(4));
    RngState rng(31);
    for (int t = 0; t < 1000; ++t) {
        Vector x = sample_unit_ball(4, rng), y = sample_unit_ball(4, rng);
        OracleReply r = eval_exact(p, x);
        double lhs = p.value(y) - r.value - dot(r.grad, sub(y, x));
        double d2 = dot(sub(y, x), sub(y, x));
        CHECK(lhs >= 0.5 * p.spec.mu * d2 - 1e-12);
        CHECK(lhs <= 0.5 * p.spec.L * d2 + 1e-12);
    }
    // biased oracle: (2 delta, L, 0) sandwich on a region of diameter R
    double delta = 1e-3, R = 2.0;
    GradOracle biased = biased_oracle(p, delta, R, BiasMode::FixedDirection, 5);
    for (int t = 0; t < 1000; ++t) {
        Vector x = sample_unit_ball(4, rng), y = sample_unit_ball(4, rng);
        OracleReply r = biased(x, rng);
        double lhs = p.value(y) - r.value - dot(r.grad, sub(y, x));
        double d2 = dot(sub(y, x), sub(y, x));
        CHECK(lhs >= -1e-12);
        CHECK(lhs <= 0.5 * p.spec.L * d2 + 2 * delta + 1e-12);
    }
}

TEST_CASE("work accounting composes exactly") {
    Problem p = half_sq_norm(2);
    GradOracle inner = [&p](const Vector& x, RngState&) {
        OracleReply r = eval_exact(p, x);
        r.queries_used = 3;  // pretend each reply costs 3 probes
        return r;
    };
    GradOracle batched = minibatch(minibatch(inner, 4), 2);
    RngState rng(0);
    OracleReply r = batched({1, 1}, rng);
    CHECK(r.queries_used == 3 * 4 * 2);
}
