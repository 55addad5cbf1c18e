#ifndef FOM_VEC_HPP
#define FOM_VEC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fom {

using Vector = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_finite(const Vector& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline Vector add(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vector sub(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sub: dimension mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vector scale(double c, const Vector& a) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

// y += c*x
inline void axpy(double c, const Vector& x, Vector& y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline Vector zeros(std::size_t n) { return Vector(n, 0.0); }

inline Vector ones(std::size_t n) { return Vector(n, 1.0); }

inline Vector unit(std::size_t n, std::size_t i, double v = 1.0) {
    Vector r(n, 0.0);
    r.at(i) = v;
    return r;
}

/// l_q norm, q in [1, inf]. q = inf returns the max absolute entry.
inline double norm(const Vector& x, double q = 2.0) {
    if (q < 1.0) throw std::invalid_argument("norm: q must be >= 1");
    if (std::isinf(q)) {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        return m;
    }
    if (q == 1.0) {
        double s = 0.0;
        for (double v : x) s += std::abs(v);
        return s;
    }
    if (q == 2.0) return std::sqrt(dot(x, x));
    // general q: factor out the max entry to avoid overflow
    double m = norm(x, kInf);
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double v : x) s += std::pow(std::abs(v) / m, q);
    return m * std::pow(s, 1.0 / q);
}

/// Conjugate exponent q' with 1/q + 1/q' = 1; maps 1 <-> inf.
inline double dual_exponent(double q) {
    if (q < 1.0) throw std::invalid_argument("dual_exponent: q must be >= 1");
    if (q == 1.0) return kInf;
    if (std::isinf(q)) return 1.0;
    return q / (q - 1.0);
}

inline std::size_t argmax(const Vector& x) {
    if (x.empty()) throw std::invalid_argument("argmax: empty vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] > x[best]) best = i;  // ties keep the smallest index
    return best;
}

inline std::size_t argmin(const Vector& x) {
    if (x.empty()) throw std::invalid_argument("argmin: empty vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] < x[best]) best = i;
    return best;
}

inline double sum(const Vector& x) { return std::accumulate(x.begin(), x.end(), 0.0); }

}  // namespace fom

#endif  // FOM_VEC_HPP
