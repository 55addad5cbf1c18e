#ifndef FOM_DOMAIN_HPP
#define FOM_DOMAIN_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <variant>

#include "fom/vec.hpp"

namespace fom {

struct Simplex {
    double r = 1.0;  // { x >= 0, sum x = r }
};
struct Ball2 {
    double R = 1.0;  // { ||x||_2 <= R }
};
struct BallQ {
    double q = 2.0;  // { ||x||_q <= R }, q >= 1
    double R = 1.0;
};
struct Box {
    Vector lo, hi;  // componentwise lo <= x <= hi
};
struct AffineSum {
    double value = 1.0;  // hyperplane <x, e> = value
};
struct Free {};

using Domain = std::variant<Simplex, Ball2, BallQ, Box, AffineSum, Free>;

inline void validate(const Domain& d) {
    if (auto* s = std::get_if<Simplex>(&d)) {
        if (s->r <= 0) throw std::invalid_argument("Simplex: radius must be positive");
    } else if (auto* b = std::get_if<Ball2>(&d)) {
        if (b->R <= 0) throw std::invalid_argument("Ball2: radius must be positive");
    } else if (auto* bq = std::get_if<BallQ>(&d)) {
        if (bq->R <= 0 || bq->q < 1) throw std::invalid_argument("BallQ: need R > 0, q >= 1");
    } else if (auto* box = std::get_if<Box>(&d)) {
        if (box->lo.size() != box->hi.size()) throw std::invalid_argument("Box: lo/hi size mismatch");
        for (std::size_t i = 0; i < box->lo.size(); ++i)
            if (box->lo[i] > box->hi[i]) throw std::invalid_argument("Box: lo > hi");
    }
}

inline bool contains(const Domain& d, const Vector& x, double tol = 1e-9) {
    return std::visit(
        [&](const auto& dom) -> bool {
            using T = std::decay_t<decltype(dom)>;
            if constexpr (std::is_same_v<T, Simplex>) {
                double s = 0;
                for (double v : x) {
                    if (v < -tol) return false;
                    s += v;
                }
                return std::abs(s - dom.r) <= tol * std::max(1.0, dom.r);
            } else if constexpr (std::is_same_v<T, Ball2>) {
                return norm(x, 2) <= dom.R + tol;
            } else if constexpr (std::is_same_v<T, BallQ>) {
                return norm(x, dom.q) <= dom.R + tol;
            } else if constexpr (std::is_same_v<T, Box>) {
                for (std::size_t i = 0; i < x.size(); ++i)
                    if (x[i] < dom.lo[i] - tol || x[i] > dom.hi[i] + tol) return false;
                return true;
            } else if constexpr (std::is_same_v<T, AffineSum>) {
                return std::abs(sum(x) - dom.value) <= tol * std::max(1.0, std::abs(dom.value));
            } else {
                return true;  // Free
            }
        },
        d);
}

/// Exact Euclidean projection onto Simplex(r), sort-based, O(n log n).
inline Vector project_simplex(const Vector& x, double r = 1.0) {
    if (r <= 0) throw std::invalid_argument("project_simplex: r must be positive");
    Vector u = x;
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, theta = 0.0;
    std::size_t rho = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        double t = (css - r) / static_cast<double>(i + 1);
        if (u[i] - t > 0) {
            rho = i + 1;
            theta = t;
        }
    }
    Vector out(x.size());
    (void)rho;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::max(x[i] - theta, 0.0);
    return out;
}

inline Vector project_ball2(const Vector& x, double R) {
    double n2 = norm(x, 2);
    if (n2 <= R) return x;
    return scale(R / n2, x);
}

inline Vector project_box(const Vector& x, const Box& b) {
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], b.lo[i], b.hi[i]);
    return out;
}

/// Projection onto the hyperplane <x, e> = value.
inline Vector project_affine_sum(const Vector& x, double value) {
    double shift = (sum(x) - value) / static_cast<double>(x.size());
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - shift;
    return out;
}

/// argmin over the domain of <c, x> (the support problem). Closed-form for
/// bounded domains; Free/AffineSum are unbounded and rejected.
inline Vector linear_minimizer(const Domain& d, const Vector& c) {
    return std::visit(
        [&](const auto& dom) -> Vector {
            using T = std::decay_t<decltype(dom)>;
            if constexpr (std::is_same_v<T, Simplex>) {
                return unit(c.size(), argmin(c), dom.r);
            } else if constexpr (std::is_same_v<T, Ball2>) {
                double n2 = norm(c, 2);
                if (n2 == 0.0) return zeros(c.size());
                return scale(-dom.R / n2, c);
            } else if constexpr (std::is_same_v<T, BallQ>) {
                double qp = dual_exponent(dom.q);
                if (std::isinf(qp)) {  // q = 1: mass on the largest |c_i|
                    Vector a(c.size());
                    for (std::size_t i = 0; i < c.size(); ++i) a[i] = std::abs(c[i]);
                    std::size_t j = argmax(a);
                    return unit(c.size(), j, c[j] > 0 ? -dom.R : dom.R);
                }
                if (dom.q == kInf || std::isinf(dom.q)) {
                    Vector out(c.size());
                    for (std::size_t i = 0; i < c.size(); ++i)
                        out[i] = c[i] >= 0 ? -dom.R : dom.R;
                    return out;
                }
                double nc = norm(c, qp);
                if (nc == 0.0) return zeros(c.size());
                Vector out(c.size());
                for (std::size_t i = 0; i < c.size(); ++i) {
                    double m = std::pow(std::abs(c[i]) / nc, qp / dom.q);
                    out[i] = (c[i] >= 0 ? -dom.R : dom.R) * m;
                }
                return out;
            } else if constexpr (std::is_same_v<T, Box>) {
                Vector out(c.size());
                for (std::size_t i = 0; i < c.size(); ++i)
                    out[i] = c[i] >= 0 ? dom.lo[i] : dom.hi[i];
                return out;
            } else {
                throw std::invalid_argument(
                    "linear_minimizer: unbounded domain has no support point");
            }
        },
        d);
}

inline std::string domain_name(const Domain& d) {
    return std::visit(
        [](const auto& dom) -> std::string {
            using T = std::decay_t<decltype(dom)>;
            if constexpr (std::is_same_v<T, Simplex>) return "Simplex";
            else if constexpr (std::is_same_v<T, Ball2>) return "Ball2";
            else if constexpr (std::is_same_v<T, BallQ>) return "BallQ";
            else if constexpr (std::is_same_v<T, Box>) return "Box";
            else if constexpr (std::is_same_v<T, AffineSum>) return "AffineSum";
            else return "Free";
        },
        d);
}

}  // namespace fom

#endif  // FOM_DOMAIN_HPP
