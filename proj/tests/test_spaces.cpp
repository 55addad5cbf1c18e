#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fom/domain.hpp"
#include "fom/prox.hpp"
#include "fom/rng.hpp"
#include "fom/vec.hpp"

using namespace fom;

namespace {

// Two-stage refining grid search for argmin of `model` over the feasible set
// at n = 2; position accuracy ~ span * 3^-(levels+...) per stage.
template <typename Model, typename Feasible>
Vector brute_force_2d(Model model, Feasible feasible, Vector center, double span, int levels = 6) {
    Vector best = center;
    double best_v = kInf;
    for (int level = 0; level < levels; ++level) {
        Vector local_best = best;
        double local_v = best_v;
        const int grid = 40;
        for (int i = -grid; i <= grid; ++i)
            for (int j = -grid; j <= grid; ++j) {
                Vector z{best[0] + span * i / grid, best[1] + span * j / grid};
                if (!feasible(z)) continue;
                double v = model(z);
                if (v < local_v) {
                    local_v = v;
                    local_best = z;
                }
            }
        best = local_best;
        best_v = local_v;
        span /= grid * 0.5;
    }
    return best;
}

}  // namespace

TEST_CASE("lq norms") {
    CHECK(norm(Vector{3, 4}, 2) == Catch::Approx(5.0));
    CHECK(norm(Vector{1, -1, 0}, 1) == Catch::Approx(2.0));
    CHECK(norm(Vector{1, -2, 0.5}, kInf) == Catch::Approx(2.0));
    // independent power-sum evaluation in extended precision
    long double ps = powl(1.0L, 3) + powl(2.0L, 3) + powl(0.5L, 3);
    double expected = static_cast<double>(powl(ps, 1.0L / 3.0L));
    CHECK(norm(Vector{1, -2, 0.5}, 3) == Catch::Approx(expected).epsilon(1e-14));
    CHECK_THROWS_AS(norm(Vector{1}, 0.5), std::invalid_argument);
}

TEST_CASE("dual exponent") {
    CHECK(dual_exponent(2) == Catch::Approx(2.0));
    CHECK(std::isinf(dual_exponent(1)));
    CHECK(dual_exponent(kInf) == Catch::Approx(1.0));
    CHECK(dual_exponent(3) == Catch::Approx(1.5));
    for (double q : {1.1, 1.7, 2.5, 8.0}) {
        double qp = dual_exponent(q);
        CHECK(1.0 / q + 1.0 / qp == Catch::Approx(1.0));
    }
}

TEST_CASE("bregman divergence closed forms") {
    ProxSetup euc = euclidean_setup(Free{});
    CHECK(bregman(euc, {1, 0}, {0, 0}) == Catch::Approx(0.5));
    CHECK(bregman(euc, {1, 2, 3}, {1, 2, 3}) == 0.0);

    ProxSetup ent = entropy_setup(1.0);
    Vector x{0.2, 0.3, 0.5}, y{0.5, 0.25, 0.25};
    double kl = 0;
    for (int i = 0; i < 3; ++i) kl += x[i] * std::log(x[i] / y[i]);
    CHECK(bregman(ent, x, y) == Catch::Approx(kl).margin(1e-14));
    CHECK(bregman(ent, x, x) == Catch::Approx(0.0).margin(1e-15));
    // definition expansion: d(x) - d(y) - <grad d(y), x - y>
    double lhs = prox_function(ent, x) - prox_function(ent, y);
    for (int i = 0; i < 3; ++i) lhs -= (std::log(y[i]) + 1.0) * (x[i] - y[i]);
    CHECK(bregman(ent, x, y) == Catch::Approx(lhs).margin(1e-12));
    CHECK_THROWS(bregman(ent, Vector{0.5, 0.5}, Vector{1.0, 0.0}));
}

TEST_CASE("bregman nonnegativity over random pairs") {
    RngState rng(11);
    ProxSetup ent = entropy_setup(1.0);
    ProxSetup euc = euclidean_setup(Ball2{2.0});
    ProxSetup qn = qnorm_setup(1.5, 10, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        // simplex pair
        Vector x(5), y(5);
        double sx = 0, sy = 0;
        for (int i = 0; i < 5; ++i) {
            x[i] = -std::log(rng.uniform_pos());
            y[i] = -std::log(rng.uniform_pos());
            sx += x[i];
            sy += y[i];
        }
        for (int i = 0; i < 5; ++i) {
            x[i] /= sx;
            y[i] /= sy;
        }
        double v = bregman(ent, x, y);
        CHECK(v >= 0.0);
        // Pinsker: V(x,y) >= 0.5 ||x-y||_1^2
        CHECK(v >= 0.5 * norm(sub(x, y), 1) * norm(sub(x, y), 1) - 1e-12);

        Vector a = scale(2.0, sample_unit_ball(4, rng));
        Vector b = scale(2.0, sample_unit_ball(4, rng));
        CHECK(bregman(euc, a, b) >= 0.0);
        CHECK(bregman(qn, sample_unit_ball(4, rng), add(sample_unit_ball(4, rng), Vector{0.01, 0, 0, 0})) >= -1e-15);
    }
}

TEST_CASE("prox diameter scaling on simplex") {
    // R^2 = diam(d)/alpha = r^2 ln n for the KL prox on Simplex(r)
    std::size_t n = 16;
    double base = prox_squared_radius(entropy_setup(1.0), n);
    CHECK(base == Catch::Approx(std::log(16.0)));
    for (double r : {2.0, 5.0}) {
        double v = prox_squared_radius(entropy_setup(r), n);
        CHECK(v == Catch::Approx(r * r * base));
    }
}

TEST_CASE("mirror step fixed points and invariances") {
    ProxSetup ent = entropy_setup(1.0);
    Vector x{0.2, 0.3, 0.5};
    Vector z = mirror_step(ent, x, zeros(3), 0.7);
    for (int i = 0; i < 3; ++i) CHECK(z[i] == Catch::Approx(x[i]));

    // constant gradient: multiplicative weights shift-invariance
    Vector zc = mirror_step(ent, x, Vector{3.3, 3.3, 3.3}, 0.7);
    for (int i = 0; i < 3; ++i) CHECK(zc[i] == Catch::Approx(x[i]));

    ProxSetup euc = euclidean_setup(Ball2{1.0});
    Vector ze = mirror_step(euc, Vector{0.1, 0.2}, zeros(2), 1.0);
    CHECK(ze[0] == Catch::Approx(0.1));

    CHECK_THROWS_AS(mirror_step(euclidean_setup(BallQ{3.0, 1.0}), Vector{0, 0}, Vector{1, 1}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(mirror_step(ProxSetup{1.0, ProxKind::NegEntropy, 2.0, Ball2{1.0}, 1.0, 1.0},
                                Vector{0.5, 0.5}, Vector{1, 0}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("mirror step matches brute force at n = 2") {
    RngState rng(5);
    SECTION("euclidean on ball") {
        ProxSetup setup = euclidean_setup(Ball2{1.0});
        Vector x{0.3, -0.4}, g{1.1, -0.6};
        double h = 0.8;
        auto model = [&](const Vector& z) { return dot(g, z) + bregman(setup, z, x) / h; };
        auto feas = [](const Vector& z) { return norm(z, 2) <= 1.0; };
        Vector got = mirror_step(setup, x, g, h);
        Vector ref = brute_force_2d(model, feas, Vector{0, 0}, 1.0);
        CHECK(model(got) <= model(ref) + 1e-6);
        CHECK(norm(sub(got, ref), 2) < 1e-4);
    }
    SECTION("euclidean on simplex") {
        ProxSetup setup = euclidean_setup(Simplex{1.0});
        Vector x{0.6, 0.4}, g{-2.0, 1.0};
        double h = 0.35;
        auto model = [&](const Vector& z) { return dot(g, z) + bregman(setup, z, x) / h; };
        auto feas = [](const Vector& z) {
            return z[0] >= 0 && z[1] >= 0 && std::abs(z[0] + z[1] - 1.0) < 1e-9;
        };
        // parametrize the simplex edge by the first coordinate
        Vector got = mirror_step(setup, x, g, h);
        double best_v = kInf, best_t = 0;
        for (int i = 0; i <= 2000000; ++i) {
            double t = i / 2000000.0;
            Vector z{t, 1 - t};
            double v = model(z);
            if (v < best_v) {
                best_v = v;
                best_t = t;
            }
        }
        CHECK(model(got) <= best_v + 1e-6);
        CHECK(std::abs(got[0] - best_t) < 1e-5);
        (void)feas;
    }
    SECTION("entropy on simplex") {
        ProxSetup setup = entropy_setup(1.0);
        Vector x{0.6, 0.4}, g{0.9, -1.3};
        double h = 0.5;
        auto model = [&](const Vector& z) { return dot(g, z) + bregman(setup, z, x) / h; };
        Vector got = mirror_step(setup, x, g, h);
        double best_v = kInf, best_t = 0;
        for (int i = 1; i < 2000000; ++i) {
            double t = i / 2000000.0;
            double v = model(Vector{t, 1 - t});
            if (v < best_v) {
                best_v = v;
                best_t = t;
            }
        }
        CHECK(model(got) <= best_v + 1e-6);
        CHECK(std::abs(got[0] - best_t) < 1e-5);
    }
    SECTION("qnorm on its ball") {
        ProxSetup setup = qnorm_setup(1.5, 2, 1.0);
        Vector x{0.2, 0.1}, g{-1.0, 0.4};
        double h = 0.6;
        auto model = [&](const Vector& z) { return dot(g, z) + bregman(setup, z, x) / h; };
        auto feas = [&](const Vector& z) { return norm(z, setup.qnorm_a) <= 1.0 + 1e-12; };
        Vector got = mirror_step(setup, x, g, h);
        Vector ref = brute_force_2d(model, feas, Vector{0, 0}, 1.0);
        CHECK(model(got) <= model(ref) + 1e-6);
    }
}

TEST_CASE("mirror step optimality against random feasible points") {
    RngState rng(23);
    ProxSetup ent = entropy_setup(1.0);
    std::size_t n = 6;
    Vector x(n, 1.0 / n);
    Vector g(n);
    for (auto& v : g) v = rng.normal();
    double h = 0.4;
    Vector z = mirror_step(ent, x, g, h);
    double vz = dot(g, z) + bregman(ent, z, x) / h;
    for (int t = 0; t < 1000; ++t) {
        Vector u(n);
        double s = 0;
        for (auto& v : u) s += (v = -std::log(rng.uniform_pos()));
        for (auto& v : u) v /= s;
        CHECK(vz <= dot(g, u) + bregman(ent, u, x) / h + 1e-12);
    }
}

TEST_CASE("simplex projection") {
    Vector a = project_simplex({0.5, 0.5}, 1.0);
    CHECK(a[0] == Catch::Approx(0.5));
    Vector b = project_simplex({2.0, 0.0}, 1.0);
    CHECK(b[0] == Catch::Approx(1.0));
    CHECK(b[1] == Catch::Approx(0.0).margin(1e-15));
    Vector c = project_simplex({0.3, 0.3, 0.3}, 1.0);
    for (int i = 0; i < 3; ++i) CHECK(c[i] == Catch::Approx(0.3 + 1.0 / 30.0));
    // KKT check against refined brute force on the segment
    Vector d = project_simplex({0.9, -0.2}, 1.0);
    double best_v = kInf, best_t = 0;
    for (int i = 0; i <= 1000000; ++i) {
        double t = i / 1000000.0;
        double v = (t - 0.9) * (t - 0.9) + (1 - t + 0.2) * (1 - t + 0.2);
        if (v < best_v) {
            best_v = v;
            best_t = t;
        }
    }
    CHECK(std::abs(d[0] - best_t) < 1e-5);
    RngState rng(3);
    for (int t = 0; t < 200; ++t) {
        Vector x(7);
        for (auto& v : x) v = 3.0 * rng.normal();
        Vector p = project_simplex(x, 2.0);
        double s = 0;
        for (double v : p) {
            CHECK(v >= 0.0);
            s += v;
        }
        CHECK(s == Catch::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("steepest two-coordinate step") {
    // constant gradient: no direction
    Vector h0 = steepest_two_coordinate_step(Vector{2, 2, 2}, 1.0);
    CHECK(norm(h0, 1) == 0.0);

    // paper's characterization at g = (1, 0, -1), L = 1
    Vector g{1, 0, -1};
    Vector h = steepest_two_coordinate_step(g, 1.0);
    CHECK(h[2] > 0);       // +t at argmin g
    CHECK(h[0] == -h[2]);  // -t at argmax g
    CHECK(h[1] == 0.0);
    // 1-D golden-section on the restricted direction e_2 - e_0
    auto obj1d = [&](double t) { return t * (g[2] - g[0]) + 0.5 * (2 * t) * (2 * t); };
    double lo = 0, hi = 2;
    double phi = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200; ++it) {
        double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
        (obj1d(m1) < obj1d(m2) ? hi : lo) = (obj1d(m1) < obj1d(m2) ? m2 : m1);
    }
    CHECK(h[2] == Catch::Approx((lo + hi) / 2).margin(1e-6));

    // exhaustive 2-sparse sum-zero minimization for all n <= 8 instances
    RngState rng(9);
    for (std::size_t n = 2; n <= 8; ++n) {
        for (int trial = 0; trial < 50; ++trial) {
            Vector gg(n);
            for (auto& v : gg) v = rng.normal();
            double L = 0.5 + rng.uniform();
            Vector step = steepest_two_coordinate_step(gg, L);
            double got = dot(gg, step) + 0.5 * L * norm(step, 1) * norm(step, 1);
            CHECK(got <= 1e-12);  // at least as good as h = 0
            double best = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    // minimize t(g_i - g_j) + 2 L t^2 over t >= 0
                    double d = gg[i] - gg[j];
                    if (d >= 0) continue;
                    double t = -d / (4 * L);
                    best = std::min(best, t * d + 2 * L * t * t);
                }
            CHECK(got == Catch::Approx(best).margin(1e-12));
        }
    }
}

TEST_CASE("sphere sampling") {
    RngState rng(42);
    std::size_t n = 5;
    Vector mean = zeros(n);
    Vector diag = zeros(n);
    const int N = 100000;
    for (int k = 0; k < N; ++k) {
        Vector s = sample_unit_sphere(n, rng);
        CHECK(std::abs(norm(s, 2) - 1.0) < 1e-12);
        axpy(1.0, s, mean);
        for (std::size_t i = 0; i < n; ++i) diag[i] += s[i] * s[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(mean[i] / N) < 4.0 / std::sqrt(static_cast<double>(N)));
        // Var(s_i^2) < E[s_i^4] ~ 3/n^2: generous 6-sigma band around 1/n
        CHECK(diag[i] / N == Catch::Approx(1.0 / n).margin(6.0 * std::sqrt(3.0) / (n * std::sqrt(static_cast<double>(N)))));
    }
    // determinism given equal states
    RngState a(7), b(7);
    Vector s1 = sample_unit_sphere(8, a), s2 = sample_unit_sphere(8, b);
    CHECK(s1 == s2);
}

TEST_CASE("ball sampling") {
    RngState rng(4242);
    std::size_t n = 4;
    const int N = 100000;
    double m2 = 0;
    for (int k = 0; k < N; ++k) {
        Vector s = sample_unit_ball(n, rng);
        double r = norm(s, 2);
        CHECK(r <= 1.0 + 1e-12);
        m2 += r * r;
    }
    // E ||s||^2 = n/(n+2); Var(r^2) = n/(n+4) - (n/(n+2))^2
    double expect = static_cast<double>(n) / (n + 2);
    double var = static_cast<double>(n) / (n + 4) - expect * expect;
    CHECK(m2 / N == Catch::Approx(expect).margin(5.0 * std::sqrt(var / N)));

    RngState rng1(11);
    double mean1 = 0;
    for (int k = 0; k < N; ++k) mean1 += sample_unit_ball(1, rng1)[0];
    CHECK(std::abs(mean1 / N) < 4.0 / std::sqrt(3.0 * N));  // Var = 1/3 for U[-1,1]
}

TEST_CASE("categorical sampling") {
    RngState rng(1);
    Vector e1{1.0, 0.0, 0.0};
    for (int k = 0; k < 100; ++k) CHECK(sample_categorical(e1, rng) == 0);

    Vector uniform(4, 0.25);
    std::vector<int> counts(4, 0);
    const int N = 100000;
    for (int k = 0; k < N; ++k) counts[sample_categorical(uniform, rng)]++;
    double chi2 = 0;
    for (int i = 0; i < 4; ++i) {
        double exp = N / 4.0;
        chi2 += (counts[i] - exp) * (counts[i] - exp) / exp;
    }
    CHECK(chi2 < 16.27);  // chi-square(3) at the 0.1% level

    Vector skew{0.9, 0.1};
    int hit = 0;
    for (int k = 0; k < N; ++k)
        if (sample_categorical(skew, rng) == 0) ++hit;
    CHECK(static_cast<double>(hit) / N == Catch::Approx(0.9).margin(0.01));

    CHECK_THROWS_AS(sample_categorical(Vector{0.5, -0.5}, rng), std::invalid_argument);
}

TEST_CASE("omega distortion estimate stays above one") {
    RngState rng(77);
    ProxSetup ent = entropy_setup(1.0);
    double w = estimate_omega(ent, 6, 2000, rng);
    CHECK(w >= 1.0);
    CHECK_THROWS_AS(estimate_omega(euclidean_setup(Free{}), 3, 10, rng), std::invalid_argument);
}
