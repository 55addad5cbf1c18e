#ifndef FOM_PROBLEMS_HPP
#define FOM_PROBLEMS_HPP

#include <cmath>
#include <memory>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fom/methods.hpp"
#include "fom/oracle.hpp"
#include "fom/prox.hpp"
#include "fom/sparse.hpp"
#include "fom/trace.hpp"

namespace fom {

// ---------------------------------------------------------------------------
// synthetic battery
// ---------------------------------------------------------------------------

inline Vector log_spaced_spectrum(std::size_t n, double lam_min, double lam_max) {
    Vector s(n);
    if (n == 1) {
        s[0] = lam_max;
        return s;
    }
    double lo = std::log(lam_min), hi = std::log(lam_max);
    for (std::size_t i = 0; i < n; ++i)
        s[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return s;
}

/// Diagonal quadratic 0.5 sum lam_i (x_i - c_i)^2 with known optimum.
inline Problem make_diag_quadratic(Vector lambdas, Vector center, Domain domain = Free{}) {
    if (lambdas.size() != center.size())
        throw std::invalid_argument("make_diag_quadratic: size mismatch");
    Problem p;
    p.dim = lambdas.size();
    p.domain = std::move(domain);
    double L = 0, mu = kInf;
    for (double l : lambdas) {
        L = std::max(L, l);
        mu = std::min(mu, l);
    }
    p.spec.L = L;
    p.spec.mu = mu;
    p.value = [lambdas, center](const Vector& x) {
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double d = x[i] - center[i];
            s += 0.5 * lambdas[i] * d * d;
        }
        return s;
    };
    p.grad = [lambdas, center](const Vector& x) {
        Vector g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = lambdas[i] * (x[i] - center[i]);
        return g;
    };
    p.f_star = 0.0;
    p.x_star = center;
    return p;
}

inline Problem make_linear_on_simplex(Vector c, double r = 1.0) {
    Problem p;
    p.dim = c.size();
    p.domain = Simplex{r};
    std::size_t j = argmin(c);
    p.f_star = c[j] * r;
    p.x_star = unit(c.size(), j, r);
    p.spec.M = norm(c, kInf);
    p.value = [c](const Vector& x) { return dot(c, x); };
    p.grad = [c](const Vector&) { return c; };
    return p;
}

struct Component {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> grad;
};

/// Finite sum f = (1/m) sum f_k with a uniform-sampling stochastic oracle
/// (unbiased by construction).
inline Problem finite_sum_problem(std::vector<Component> comps, std::size_t dim,
                                  Domain domain = Free{}) {
    if (comps.empty()) throw std::invalid_argument("finite_sum_problem: empty component list");
    auto shared = std::make_shared<std::vector<Component>>(std::move(comps));
    Problem p;
    p.dim = dim;
    p.domain = std::move(domain);
    double inv_m = 1.0 / static_cast<double>(shared->size());
    p.value = [shared, inv_m](const Vector& x) {
        double s = 0;
        for (const auto& c : *shared) s += c.value(x);
        return s * inv_m;
    };
    p.grad = [shared, inv_m, dim](const Vector& x) {
        Vector g = zeros(dim);
        for (const auto& c : *shared) axpy(1.0, c.grad(x), g);
        return scale(inv_m, g);
    };
    p.sampler = [shared](const Vector& x, RngState& rng) {
        std::size_t k = static_cast<std::size_t>(rng.next_u64() % shared->size());
        OracleReply r;
        r.value = (*shared)[k].value(x);
        r.grad = (*shared)[k].grad(x);
        r.queries_used = 1;
        return r;
    };
    return p;
}

// ---------------------------------------------------------------------------
// PageRank instances
// ---------------------------------------------------------------------------

/// Row-stochastic P with the implicit A = P^T - I; gamma weights the
/// negative-part penalty of the quadratic formulation.
struct PageRankInstance {
    SparseMatrix P;
    double gamma = 1.0;

    std::size_t n() const { return P.n_rows(); }

    Vector apply_A(const Vector& x) const {  // (P^T - I) x
        Vector y = P.multiply_transpose(x);
        axpy(-1.0, x, y);
        return y;
    }
    Vector apply_At(const Vector& v) const {  // (P - I) v
        Vector y = P.multiply(v);
        axpy(-1.0, v, y);
        return y;
    }

    /// Smoothness constant of the quadratic objective in the 1-norm:
    /// max_i ||A^{(i)}||_2^2 + gamma (paper's bound: <= 3 at gamma = 1 for
    /// stochastic P).
    double lipschitz_1norm() const {
        double best = 0.0;
        for (std::size_t i = 0; i < n(); ++i) {
            double s = 0.0;
            bool diag_seen = false;
            for (const auto& e : P.row(i)) {
                double v = e.value - (e.idx == i ? 1.0 : 0.0);
                if (e.idx == i) diag_seen = true;
                s += v * v;
            }
            if (!diag_seen) s += 1.0;
            best = std::max(best, s);
        }
        return best + gamma;
    }
};

inline PageRankInstance two_cycle_instance(double gamma = 1.0) {
    SparseMatrix P(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
    return PageRankInstance{std::move(P), gamma};
}

/// f(x) = 0.5 ||A x||_2^2 + (gamma/2) sum (-x_k)_+^2. The penalty is C^1 with
/// derivative 0 at x_k = 0.
inline double pagerank_quadratic_value(const PageRankInstance& inst, const Vector& x) {
    Vector ax = inst.apply_A(x);
    double s = 0.5 * dot(ax, ax);
    for (double v : x)
        if (v < 0) s += 0.5 * inst.gamma * v * v;
    return s;
}

inline Vector pagerank_quadratic_grad(const PageRankInstance& inst, const Vector& x) {
    Vector ax = inst.apply_A(x);
    Vector g = inst.apply_At(ax);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < 0) g[i] += inst.gamma * x[i];
    return g;
}

inline Problem make_pagerank_quadratic_problem(const PageRankInstance& inst) {
    Problem p;
    p.dim = inst.n();
    p.domain = AffineSum{1.0};
    p.spec.L = inst.lipschitz_1norm();
    p.spec.norm_q = 1.0;
    p.f_star = 0.0;  // the PageRank vector zeroes both terms
    p.value = [&inst](const Vector& x) { return pagerank_quadratic_value(inst, x); };
    p.grad = [&inst](const Vector& x) { return pagerank_quadratic_grad(inst, x); };
    return p;
}

/// Sparse row-stochastic generator: a cycle backbone keeps the chain
/// irreducible, random extra edges fill rows up to s nonzeros subject to the
/// per-column cap. Deterministic per seed.
inline SparseMatrix generate_sparse_stochastic(std::size_t n, std::size_t s, RngState& rng) {
    if (s < 2 || s > n) throw std::invalid_argument("generate_sparse_stochastic: need 2 <= s <= n");
    std::vector<std::set<std::size_t>> row_cols(n);
    std::vector<std::size_t> col_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        row_cols[i].insert((i + 1) % n);
        col_count[(i + 1) % n]++;
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t attempts = 8 * s;
        while (row_cols[i].size() < s && attempts-- > 0) {
            std::size_t j = static_cast<std::size_t>(rng.next_u64() % n);
            if (col_count[j] >= s || row_cols[i].count(j)) continue;
            row_cols[i].insert(j);
            col_count[j]++;
        }
    }
    std::vector<std::tuple<std::size_t, std::size_t, double>> triples;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> w;
        w.reserve(row_cols[i].size());
        double total = 0;
        for (std::size_t k = 0; k < row_cols[i].size(); ++k) {
            double v = 0.5 + rng.uniform();
            w.push_back(v);
            total += v;
        }
        std::size_t k = 0;
        for (std::size_t j : row_cols[i]) triples.emplace_back(i, j, w[k++] / total);
    }
    return SparseMatrix(n, n, std::move(triples));
}

// ---------------------------------------------------------------------------
// randomized saddle solver (Example 1)
// ---------------------------------------------------------------------------

struct SaddleResult {
    Vector x, y;
    double gap = 0.0;
    std::size_t iterations = 0;
    std::uint64_t queries = 0;
    bool reached = false;
};

/// Exact bilinear gap max_i (A x)_i - min_j (A^T y)_j of a candidate pair on
/// the two simplices.
inline double pagerank_bilinear_gap(const PageRankInstance& inst, const Vector& x,
                                    const Vector& y) {
    Vector ax = inst.apply_A(x);
    Vector aty = inst.apply_At(y);
    return ax[argmax(ax)] - aty[argmin(aty)];
}

/// Randomized mirror descent on both simplices with KL prox; the stochastic
/// gradients are single sampled columns/rows of A, so one iteration costs
/// O(s + n) instead of a full matrix product.
inline SaddleResult pagerank_saddle_solver(const PageRankInstance& inst, double eps,
                                           std::size_t budget, RngState& rng,
                                           std::size_t check_every = 0) {
    std::size_t n = inst.n();
    if (check_every == 0) check_every = std::max<std::size_t>(100, n / 2);
    Vector x(n, 1.0 / static_cast<double>(n)), y = x;
    Vector x_avg = zeros(n), y_avg = zeros(n);
    double h = std::sqrt(2.0 * std::log(static_cast<double>(n)) /
                         static_cast<double>(std::max<std::size_t>(budget, 2)));
    ProxSetup kl = entropy_setup(1.0);
    SaddleResult out;
    Vector gx(n), gy(n);
    for (std::size_t k = 1; k <= budget; ++k) {
        // x-gradient A^T e_j = (column j of P) - e_j, j ~ y
        std::size_t j = sample_categorical(y, rng);
        std::fill(gx.begin(), gx.end(), 0.0);
        for (const auto& e : inst.P.col(j)) gx[e.idx] += e.value;
        gx[j] -= 1.0;
        // y-gradient A e_i = (row i of P) - e_i, i ~ x
        std::size_t i = sample_categorical(x, rng);
        std::fill(gy.begin(), gy.end(), 0.0);
        for (const auto& e : inst.P.row(i)) gy[e.idx] += e.value;
        gy[i] -= 1.0;

        x = mirror_step(kl, x, gx, h);
        y = mirror_step(kl, y, scale(-1.0, gy), h);
        axpy(1.0, x, x_avg);
        axpy(1.0, y, y_avg);
        out.queries += 2;
        out.iterations = k;
        if (k % check_every == 0 || k == budget) {
            Vector xa = scale(1.0 / static_cast<double>(k), x_avg);
            Vector ya = scale(1.0 / static_cast<double>(k), y_avg);
            double gap = pagerank_bilinear_gap(inst, xa, ya);
            if (gap <= eps) {
                out.x = std::move(xa);
                out.y = std::move(ya);
                out.gap = gap;
                out.reached = true;
                return out;
            }
            if (k == budget) {
                out.x = std::move(xa);
                out.y = std::move(ya);
                out.gap = gap;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// indexed heaps + sparse two-coordinate solver (Example 2)
// ---------------------------------------------------------------------------

/// Min and max indexed heaps over the gradient coordinates with position
/// handles, so argmin/argmax stay exact under O(log n) key updates. Ties
/// resolve to the smallest index.
class DualHeap {
  public:
    explicit DualHeap(const Vector& keys) : keys_(keys) {
        std::size_t n = keys.size();
        min_heap_.resize(n);
        max_heap_.resize(n);
        min_pos_.resize(n);
        max_pos_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            min_heap_[i] = i;
            max_heap_[i] = i;
            min_pos_[i] = i;
            max_pos_[i] = i;
        }
        for (std::size_t i = n; i-- > 0;) {
            sift_down(true, i);
            sift_down(false, i);
        }
    }

    std::size_t argmin() const { return min_heap_.front(); }
    std::size_t argmax() const { return max_heap_.front(); }
    double key(std::size_t i) const { return keys_[i]; }

    void update(std::size_t i, double new_key) {
        keys_[i] = new_key;
        sift_up(true, min_pos_[i]);
        sift_down(true, min_pos_[i]);
        sift_up(false, max_pos_[i]);
        sift_down(false, max_pos_[i]);
    }

    void add(std::size_t i, double delta_key) { update(i, keys_[i] + delta_key); }

  private:
    // total order: by key, then by index (keeps argmin/argmax deterministic)
    bool before(bool is_min, std::size_t a, std::size_t b) const {
        if (keys_[a] != keys_[b]) return is_min ? keys_[a] < keys_[b] : keys_[a] > keys_[b];
        return a < b;
    }
    std::vector<std::size_t>& heap(bool is_min) { return is_min ? min_heap_ : max_heap_; }
    std::vector<std::size_t>& pos(bool is_min) { return is_min ? min_pos_ : max_pos_; }

    void sift_up(bool is_min, std::size_t p) {
        auto& h = heap(is_min);
        auto& ps = pos(is_min);
        while (p > 0) {
            std::size_t parent = (p - 1) / 2;
            if (!before(is_min, h[p], h[parent])) break;
            std::swap(h[p], h[parent]);
            ps[h[p]] = p;
            ps[h[parent]] = parent;
            p = parent;
        }
    }
    void sift_down(bool is_min, std::size_t p) {
        auto& h = heap(is_min);
        auto& ps = pos(is_min);
        std::size_t n = h.size();
        for (;;) {
            std::size_t l = 2 * p + 1, r = 2 * p + 2, best = p;
            if (l < n && before(is_min, h[l], h[best])) best = l;
            if (r < n && before(is_min, h[r], h[best])) best = r;
            if (best == p) return;
            std::swap(h[p], h[best]);
            ps[h[p]] = p;
            ps[h[best]] = best;
            p = best;
        }
    }

    Vector keys_;
    std::vector<std::size_t> min_heap_, max_heap_;
    std::vector<std::size_t> min_pos_, max_pos_;
};

/// Sparse two-coordinate gradient method for the quadratic PageRank
/// objective: every step moves mass between the current argmin and argmax of
/// the maintained gradient, the gradient and value are updated incrementally
/// through the touched columns (O(s^2) work), and the dual heap keeps the
/// extremes exact. Stops at f <= eps^2.
inline RunTrace pagerank_sparse_solver(const PageRankInstance& inst, double eps,
                                       std::size_t budget, std::size_t record_every = 1,
                                       std::size_t resync_every = 10000) {
    std::size_t n = inst.n();
    if (n < 2) throw std::invalid_argument("pagerank_sparse_solver: need n >= 2");
    double L = inst.lipschitz_1norm();
    double gamma = inst.gamma;

    RunTrace trace;
    trace.method = "pagerank_sparse";

    Vector x(n, 1.0 / static_cast<double>(n));
    Vector ax = inst.apply_A(x);
    Vector g = pagerank_quadratic_grad(inst, x);
    double sumsq = dot(ax, ax);
    double penalty = 0.0;  // uniform start is positive
    DualHeap heap(g);

    auto record = [&](std::size_t k, double f_now) {
        TraceRecord r;
        r.k = k;
        r.f_value = f_now;
        r.grad_norm = 0.0;
        r.lambda = 1.0;
        r.oracle_queries = trace.total_queries;
        trace.records.push_back(r);
    };

    auto pen = [gamma](double v) { return v < 0 ? 0.5 * gamma * v * v : 0.0; };
    auto pen_d = [gamma](double v) { return v < 0 ? gamma * v : 0.0; };

    // sparse accumulator of (index, delta) pairs; sizes stay O(s)
    std::vector<std::pair<std::size_t, double>> d_ax, d_g;
    auto accumulate = [](std::vector<std::pair<std::size_t, double>>& acc, std::size_t i,
                         double v) {
        for (auto& [idx, val] : acc)
            if (idx == i) {
                val += v;
                return;
            }
        acc.emplace_back(i, v);
    };

    double f = 0.5 * sumsq + penalty;
    double target = eps * eps;
    std::size_t k = 0;
    record(0, f);
    while (f > target && k < budget) {
        ++k;
        std::size_t lo = heap.argmin(), hi = heap.argmax();
        TwoCoordStep st = steepest_two_coordinate_core(g[lo], lo, g[hi], hi, L);
        if (st.t <= 0.0) break;  // constant gradient: stationary on the hyperplane
        double t = st.t;

        penalty -= pen(x[lo]) + pen(x[hi]);
        double pd_lo_old = pen_d(x[lo]), pd_hi_old = pen_d(x[hi]);
        x[lo] += t;
        x[hi] -= t;
        penalty += pen(x[lo]) + pen(x[hi]);

        // Delta(Ax) = t (column lo of A) - t (column hi of A);
        // column i of A is (row i of P) - e_i.
        d_ax.clear();
        for (const auto& e : inst.P.row(lo)) accumulate(d_ax, e.idx, t * e.value);
        accumulate(d_ax, lo, -t);
        for (const auto& e : inst.P.row(hi)) accumulate(d_ax, e.idx, -t * e.value);
        accumulate(d_ax, hi, t);

        // gradient change: A^T Delta(Ax); A^T e_r = (column r of P) - e_r
        d_g.clear();
        std::uint64_t touches = 0;
        for (const auto& [r, dv] : d_ax) {
            if (dv == 0.0) continue;
            double old = ax[r];
            ax[r] = old + dv;
            sumsq += ax[r] * ax[r] - old * old;
            ++touches;
            for (const auto& e : inst.P.col(r)) {
                accumulate(d_g, e.idx, dv * e.value);
                ++touches;
            }
            accumulate(d_g, r, -dv);
        }
        accumulate(d_g, lo, pen_d(x[lo]) - pd_lo_old);
        accumulate(d_g, hi, pen_d(x[hi]) - pd_hi_old);
        for (const auto& [c, dv] : d_g) {
            if (dv == 0.0) continue;
            g[c] += dv;
            heap.update(c, g[c]);
            ++touches;
        }
        trace.coordinate_touches += touches;

        ++trace.total_queries;
        f = 0.5 * sumsq + penalty;
        if (k % resync_every == 0) {  // guard against float drift on long runs
            ax = inst.apply_A(x);
            sumsq = dot(ax, ax);
            g = pagerank_quadratic_grad(inst, x);
            heap = DualHeap(g);
            penalty = 0.0;
            for (double v : x) penalty += pen(v);
            f = 0.5 * sumsq + penalty;
        }
        if (k % record_every == 0) record(k, f);
    }
    trace.last = x;
    trace.averaged = x;
    trace.sum_lambda = 1.0;
    trace.budget_exhausted = f > target;
    if (trace.records.empty() || trace.records.back().k != k) record(k, f);
    return trace;
}

}  // namespace fom

#endif  // FOM_PROBLEMS_HPP
