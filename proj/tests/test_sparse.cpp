#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "fom/problems.hpp"
#include "fom/rng.hpp"
#include "fom/sparse.hpp"

using namespace fom;

TEST_CASE("sparse matrix construction and stats") {
    SparseMatrix m(3, 3, {{0, 1, 2.0}, {1, 0, -0.5}, {1, 2, 1.0}, {2, 2, 3.0}});
    CHECK(m.nnz() == 4);
    CHECK(m.s_max_row() == 2);
    CHECK(m.s_max_col() == 2);
    CHECK(m.lambda_max() == Catch::Approx(3.0));
    CHECK(m.at(0, 1) == 2.0);
    CHECK(m.at(0, 0) == 0.0);
    CHECK(m.views_consistent());
    CHECK_THROWS_AS(SparseMatrix(2, 2, {{0, 5, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(SparseMatrix(2, 2, {{0, 1, 1.0}, {0, 1, 2.0}}), std::invalid_argument);
}

TEST_CASE("matvec both ways") {
    SparseMatrix m(2, 3, {{0, 0, 1.0}, {0, 2, 2.0}, {1, 1, -1.0}});
    Vector x{1, 2, 3};
    Vector y = m.multiply(x);
    CHECK(y[0] == Catch::Approx(7.0));
    CHECK(y[1] == Catch::Approx(-2.0));
    Vector v{2, 5};
    Vector xt = m.multiply_transpose(v);
    CHECK(xt[0] == Catch::Approx(2.0));
    CHECK(xt[1] == Catch::Approx(-5.0));
    CHECK(xt[2] == Catch::Approx(4.0));
}

TEST_CASE("matrix market round trip") {
    RngState rng(31);
    SparseMatrix m = generate_sparse_stochastic(20, 4, rng);
    std::ostringstream out;
    write_matrix_market(out, m, "generator: n=20 s=4 seed=31");
    std::istringstream in(out.str());
    SparseMatrix m2 = read_matrix_market(in, /*require_stochastic=*/true);
    CHECK(m2.n_rows() == 20);
    CHECK(m2.nnz() == m.nnz());
    for (std::size_t i = 0; i < 20; ++i)
        for (const auto& e : m.row(i)) CHECK(m2.at(i, e.idx) == e.value);
}

TEST_CASE("matrix market rejects malformed input") {
    std::istringstream no_header("2 2 1\n1 1 1.0\n");
    CHECK_THROWS_AS(read_matrix_market(no_header), std::runtime_error);
    std::istringstream truncated("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n");
    CHECK_THROWS_AS(read_matrix_market(truncated), std::runtime_error);
    std::istringstream oob("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
    CHECK_THROWS_AS(read_matrix_market(oob), std::runtime_error);
    std::istringstream ns("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 0.4\n2 2 1.0\n");
    CHECK_THROWS_AS(read_matrix_market(ns, true), std::runtime_error);
}

TEST_CASE("sparse stochastic generator invariants") {
    RngState rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        SparseMatrix m = generate_sparse_stochastic(100, 5, rng);
        CHECK(m.rows_stochastic(1e-12));
        CHECK(m.s_max_row() <= 5);
        CHECK(m.s_max_col() <= 5);
        CHECK(m.views_consistent());
    }
    RngState r2(7);
    SparseMatrix tiny = generate_sparse_stochastic(2, 2, r2);
    CHECK(tiny.rows_stochastic());
    CHECK_THROWS_AS(generate_sparse_stochastic(5, 1, r2), std::invalid_argument);
    CHECK_THROWS_AS(generate_sparse_stochastic(5, 6, r2), std::invalid_argument);
    // determinism per seed
    RngState a(55), b(55);
    std::ostringstream sa, sb;
    write_matrix_market(sa, generate_sparse_stochastic(50, 4, a));
    write_matrix_market(sb, generate_sparse_stochastic(50, 4, b));
    CHECK(sa.str() == sb.str());
}

TEST_CASE("column nonzero caps hold at scale") {
    RngState rng(2024);
    for (int seed_trial = 0; seed_trial < 10; ++seed_trial) {
        SparseMatrix m = generate_sparse_stochastic(1000, 5, rng);
        std::vector<std::size_t> col_counts(1000, 0);
        for (std::size_t i = 0; i < 1000; ++i)
            for (const auto& e : m.row(i)) col_counts[e.idx]++;
        for (std::size_t j = 0; j < 1000; ++j) CHECK(col_counts[j] <= 5);
    }
}
