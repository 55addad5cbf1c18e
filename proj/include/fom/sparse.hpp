#ifndef FOM_SPARSE_HPP
#define FOM_SPARSE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "fom/vec.hpp"

namespace fom {

struct SparseEntry {
    std::size_t idx = 0;  // column index in a row list, row index in a column list
    double value = 0.0;
};

/// Sparse matrix stored twice: row-major and column-major adjacency, both
/// sorted. The dual index is the preprocessing Examples 1-2 rely on; per-row /
/// per-column nonzero counts and the max-magnitude entry are kept as stats.
class SparseMatrix {
  public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t n_rows, std::size_t n_cols,
                 std::vector<std::tuple<std::size_t, std::size_t, double>> triples)
        : n_rows_(n_rows), n_cols_(n_cols), rows_(n_rows), cols_(n_cols) {
        for (const auto& [i, j, v] : triples) {
            if (i >= n_rows || j >= n_cols)
                throw std::invalid_argument("SparseMatrix: index out of bounds");
            if (v == 0.0) continue;
            rows_[i].push_back({j, v});
            cols_[j].push_back({i, v});
        }
        auto by_idx = [](const SparseEntry& a, const SparseEntry& b) { return a.idx < b.idx; };
        for (auto& r : rows_) {
            std::sort(r.begin(), r.end(), by_idx);
            for (std::size_t k = 1; k < r.size(); ++k)
                if (r[k].idx == r[k - 1].idx)
                    throw std::invalid_argument("SparseMatrix: duplicate entry");
        }
        for (auto& c : cols_) std::sort(c.begin(), c.end(), by_idx);
        for (const auto& r : rows_) s_max_row_ = std::max(s_max_row_, r.size());
        for (const auto& c : cols_) s_max_col_ = std::max(s_max_col_, c.size());
        for (const auto& r : rows_)
            for (const auto& e : r) lambda_max_ = std::max(lambda_max_, std::abs(e.value));
    }

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return n_cols_; }
    std::size_t nnz() const {
        std::size_t s = 0;
        for (const auto& r : rows_) s += r.size();
        return s;
    }
    std::size_t s_max_row() const { return s_max_row_; }
    std::size_t s_max_col() const { return s_max_col_; }
    /// Largest |entry| (the paper's element bound Lambda).
    double lambda_max() const { return lambda_max_; }

    const std::vector<SparseEntry>& row(std::size_t i) const { return rows_.at(i); }
    const std::vector<SparseEntry>& col(std::size_t j) const { return cols_.at(j); }

    double at(std::size_t i, std::size_t j) const {
        for (const auto& e : rows_.at(i))
            if (e.idx == j) return e.value;
        return 0.0;
    }

    Vector multiply(const Vector& x) const {  // A x
        if (x.size() != n_cols_) throw std::invalid_argument("multiply: dimension mismatch");
        Vector y(n_rows_, 0.0);
        for (std::size_t i = 0; i < n_rows_; ++i)
            for (const auto& e : rows_[i]) y[i] += e.value * x[e.idx];
        return y;
    }

    Vector multiply_transpose(const Vector& y) const {  // A^T y
        if (y.size() != n_rows_)
            throw std::invalid_argument("multiply_transpose: dimension mismatch");
        Vector x(n_cols_, 0.0);
        for (std::size_t j = 0; j < n_cols_; ++j)
            for (const auto& e : cols_[j]) x[j] += e.value * y[e.idx];
        return x;
    }

    /// Both adjacency views must contain identical (i, j, v) triples.
    bool views_consistent() const {
        std::size_t nr = 0, nc = 0;
        for (const auto& r : rows_) nr += r.size();
        for (const auto& c : cols_) nc += c.size();
        if (nr != nc) return false;
        for (std::size_t i = 0; i < n_rows_; ++i)
            for (const auto& e : rows_[i]) {
                const auto& c = cols_[e.idx];
                auto it = std::lower_bound(
                    c.begin(), c.end(), i,
                    [](const SparseEntry& a, std::size_t r) { return a.idx < r; });
                if (it == c.end() || it->idx != i || it->value != e.value) return false;
            }
        return true;
    }

    bool rows_stochastic(double tol = 1e-9) const {
        for (std::size_t i = 0; i < n_rows_; ++i) {
            double s = 0;
            for (const auto& e : rows_[i]) {
                if (e.value < -tol) return false;
                s += e.value;
            }
            if (std::abs(s - 1.0) > tol) return false;
        }
        return true;
    }

  private:
    std::size_t n_rows_ = 0, n_cols_ = 0;
    std::vector<std::vector<SparseEntry>> rows_, cols_;
    std::size_t s_max_row_ = 0, s_max_col_ = 0;
    double lambda_max_ = 0.0;
};

/// MatrixMarket coordinate reader: "%%MatrixMarket matrix coordinate real
/// general" header, size line, then 1-based "i j value" triples.
inline SparseMatrix read_matrix_market(std::istream& in, bool require_stochastic = false) {
    std::string line;
    bool saw_header = false;
    std::size_t n_rows = 0, n_cols = 0, n_entries = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '%') {
            if (line.rfind("%%MatrixMarket", 0) == 0) saw_header = true;
            continue;
        }
        std::istringstream ss(line);
        if (!(ss >> n_rows >> n_cols >> n_entries))
            throw std::runtime_error("MatrixMarket: bad size line");
        break;
    }
    if (!saw_header) throw std::runtime_error("MatrixMarket: missing header line");
    std::vector<std::tuple<std::size_t, std::size_t, double>> triples;
    triples.reserve(n_entries);
    std::size_t i, j;
    double v;
    while (triples.size() < n_entries && (in >> i >> j >> v)) {
        if (i < 1 || j < 1 || i > n_rows || j > n_cols)
            throw std::runtime_error("MatrixMarket: entry index out of range");
        triples.emplace_back(i - 1, j - 1, v);
    }
    if (triples.size() != n_entries) throw std::runtime_error("MatrixMarket: truncated file");
    SparseMatrix m(n_rows, n_cols, std::move(triples));
    if (require_stochastic && !m.rows_stochastic())
        throw std::runtime_error("MatrixMarket: matrix flagged stochastic but row sums != 1");
    return m;
}

inline SparseMatrix load_matrix_market(const std::string& path, bool require_stochastic = false) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_matrix_market(in, require_stochastic);
}

inline void write_matrix_market(std::ostream& out, const SparseMatrix& m,
                                const std::string& comment = "") {
    out << "%%MatrixMarket matrix coordinate real general\n";
    if (!comment.empty()) out << "% " << comment << "\n";
    out << m.n_rows() << " " << m.n_cols() << " " << m.nnz() << "\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < m.n_rows(); ++i)
        for (const auto& e : m.row(i)) out << i + 1 << " " << e.idx + 1 << " " << e.value << "\n";
}

inline void save_matrix_market(const std::string& path, const SparseMatrix& m,
                               const std::string& comment = "") {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_matrix_market(out, m, comment);
}

}  // namespace fom

#endif  // FOM_SPARSE_HPP
