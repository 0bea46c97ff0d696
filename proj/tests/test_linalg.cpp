#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracrom/csr.hpp"
#include "fracrom/dense.hpp"
#include "fracrom/rng.hpp"
#include "fracrom/sparse_cholesky.hpp"

using namespace fracrom;

namespace {

CsrMatrix tridiag(Index n, double off, double diag) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    t.push_back({i, i, diag});
    if (i + 1 < n) {
      t.push_back({i, i + 1, off});
      t.push_back({i + 1, i, off});
    }
  }
  return CsrMatrix::from_triplets(n, n, t);
}

DenseMatrix random_dense(Index rows, Index cols, std::uint64_t seed) {
  GaussianStream g(seed);
  DenseMatrix A(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) A(r, c) = g.next();
  return A;
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("from_triplets sorts, merges duplicates, keeps explicit zeros") {
    // (0,1) appears twice and sums; (1,0) sums to an explicit zero.
    const CsrMatrix A = CsrMatrix::from_triplets(
        2, 3, {{1, 2, 5.0}, {0, 1, 2.0}, {0, 1, 3.0}, {1, 0, 1.0}, {1, 0, -1.0}});
    A.check_valid();
    CHECK(A.nrows == 2);
    CHECK(A.ncols == 3);
    CHECK(A.nnz() == 3);
    const DenseMatrix D = A.to_dense();
    CHECK(D(0, 1) == 5.0);
    CHECK(D(1, 2) == 5.0);
    CHECK(D(1, 0) == 0.0);
    // column indices strictly increasing within each row
    for (Index r = 0; r < A.nrows; ++r)
      for (Index k = A.row_ptr[r] + 1; k < A.row_ptr[r + 1]; ++k)
        CHECK(A.col_idx[k - 1] < A.col_idx[k]);
  }

  TEST_CASE("spmv matches the dense product") {
    const DenseMatrix D = random_dense(7, 5, 11);
    const CsrMatrix A = CsrMatrix::from_dense(D);
    GaussianStream g(12);
    Vec64 x(5);
    for (Index i = 0; i < 5; ++i) x(i) = g.next();
    const Vec64 y = spmv(A, x);
    CHECK((y - D * x).norm() <= 1e-14 * (D * x).norm());
    CHECK((A * x - y).norm() == 0.0);  // operator* is the same kernel
  }

  TEST_CASE("sparse_add_scaled merges patterns") {
    const CsrMatrix A = CsrMatrix::from_triplets(3, 3, {{0, 0, 1.0}, {1, 2, 2.0}});
    const CsrMatrix B = CsrMatrix::from_triplets(3, 3, {{0, 0, 4.0}, {2, 1, 3.0}});
    const CsrMatrix C = sparse_add_scaled(A, B, 2.0, -1.0);
    C.check_valid();
    const DenseMatrix D = C.to_dense();
    CHECK(D(0, 0) == -2.0);
    CHECK(D(1, 2) == 4.0);
    CHECK(D(2, 1) == -3.0);
    CHECK(CsrMatrix::identity(4).to_dense().isApprox(DenseMatrix::Identity(4, 4)));
  }

  TEST_CASE("matrix market round trip is exact") {
    const CsrMatrix A = CsrMatrix::from_dense(random_dense(6, 4, 3));
    const std::string path = "/tmp/fracrom_test_mm.mtx";
    write_matrix_market(path, A);
    const CsrMatrix B = read_matrix_market(path);
    REQUIRE(B.nrows == A.nrows);
    REQUIRE(B.ncols == A.ncols);
    REQUIRE(B.nnz() == A.nnz());
    for (Index k = 0; k < A.nnz(); ++k) CHECK(B.values[k] == A.values[k]);
  }

  TEST_CASE("thin QR of a single 3-4-5 column") {
    DenseMatrix A(2, 1);
    A << 3.0, 4.0;
    const ThinQr qr = thin_qr(A);
    CHECK(std::abs(std::abs(qr.R(0, 0)) - 5.0) <= 1e-14);
    CHECK(std::abs(std::abs(qr.Q(0, 0)) - 0.6) <= 1e-14);
    CHECK(std::abs(std::abs(qr.Q(1, 0)) - 0.8) <= 1e-14);
    CHECK((qr.Q * qr.R - A).norm() <= 1e-14);
  }

  TEST_CASE("thin QR flags rank deficiency through R's diagonal") {
    DenseMatrix A(4, 2);
    const DenseMatrix v = random_dense(4, 1, 5);
    A.col(0) = v;
    A.col(1) = 2.0 * v;
    const ThinQr qr = thin_qr(A);
    CHECK(std::abs(qr.R(1, 1)) <= 1e-13 * std::abs(qr.R(0, 0)));
    CHECK((qr.Q.transpose() * qr.Q - DenseMatrix::Identity(2, 2)).norm() <= 1e-13);
    CHECK((qr.Q * qr.R - A).norm() <= 1e-13 * A.norm());
  }

  TEST_CASE("thin SVD reconstructs and orders singular values") {
    const DenseMatrix A = random_dense(8, 5, 17);
    const ThinSvd svd = thin_svd(A);
    REQUIRE(svd.sigma.size() == 5);
    for (Index i = 1; i < 5; ++i) CHECK(svd.sigma(i) <= svd.sigma(i - 1));
    CHECK(svd.sigma(4) >= 0.0);
    const DenseMatrix R = svd.U * svd.sigma.asDiagonal() * svd.Vt;
    CHECK((R - A).norm() <= 1e-12 * A.norm());
    CHECK((svd.U.transpose() * svd.U - DenseMatrix::Identity(5, 5)).norm() <= 1e-13);
  }

  TEST_CASE("generalized eigensolve: Dirichlet path graph vs 2 - 2 cos(k pi / 5)") {
    const DenseMatrix K = tridiag(4, -1.0, 2.0).to_dense();
    const DenseMatrix M = DenseMatrix::Identity(4, 4);
    const GeneralizedEig eig = sym_generalized_eig(K, M);
    const double pi = std::numbers::pi;
    for (Index k = 1; k <= 4; ++k) {
      const double expect = 2.0 - 2.0 * std::cos(k * pi / 5.0);
      CHECK(std::abs(eig.lambda(k - 1) - expect) <= 1e-13);
    }
    CHECK((eig.U.transpose() * eig.U - DenseMatrix::Identity(4, 4)).norm() <= 1e-13);
  }

  TEST_CASE("generalized eigensolve satisfies K x = lambda M x for dense M") {
    const Index n = 12;
    DenseMatrix B = random_dense(n, n, 21);
    const DenseMatrix K = 0.5 * (B + B.transpose());
    B = random_dense(n, n, 22);
    const DenseMatrix M =
        B * B.transpose() + static_cast<double>(n) * DenseMatrix::Identity(n, n);
    const GeneralizedEig eig = sym_generalized_eig(K, M);
    // eigenvectors of the pencil are X = L^{-T} U
    const DenseMatrix X =
        eig.L.transpose().triangularView<Eigen::Upper>().solve(eig.U);
    const DenseMatrix resid = K * X - M * X * eig.lambda.asDiagonal();
    CHECK(resid.norm() <= 1e-11 * (K.norm() + M.norm()));
    for (Index i = 1; i < n; ++i) CHECK(eig.lambda(i) >= eig.lambda(i - 1));
    // X is M-orthonormal
    CHECK((X.transpose() * M * X - DenseMatrix::Identity(n, n)).norm() <= 1e-11);
  }

  TEST_CASE("generalized eigensolve rejects bad pencils") {
    DenseMatrix K(2, 2), M(2, 2);
    K << 1, 2, 3, 4;  // not symmetric
    M << 1, 0, 0, 1;
    CHECK_THROWS_AS(sym_generalized_eig(K, M), NumericError);
    K << 1, 0, 0, 1;
    M << 1, 0, 0, -1;  // not SPD
    CHECK_THROWS_AS(sym_generalized_eig(K, M), NumericError);
  }

  TEST_CASE("pinv_solve: least squares and minimum norm") {
    DenseMatrix B(3, 2);
    B << 1, 0, 0, 1, 1, 1;
    DenseMatrix C(3, 1);
    C << 1, 2, 2;
    const DenseMatrix X = pinv_solve(B, C);
    // compare with the normal equations
    const DenseMatrix Xn =
        (B.transpose() * B).ldlt().solve(B.transpose() * C);
    CHECK((X - Xn).norm() <= 1e-12);

    // underdetermined: minimum-norm solution of x0 + x1 = 2 is (1, 1)
    DenseMatrix Bu(1, 2), Cu(1, 1);
    Bu << 1, 1;
    Cu << 2;
    const DenseMatrix Xu = pinv_solve(Bu, Cu);
    CHECK(std::abs(Xu(0, 0) - 1.0) <= 1e-13);
    CHECK(std::abs(Xu(1, 0) - 1.0) <= 1e-13);
  }

  TEST_CASE("dense Cholesky factors and objects to indefinite input") {
    DenseMatrix M(3, 3);
    M << 4, 2, 0, 2, 5, 1, 0, 1, 6;
    const DenseMatrix L = dense_cholesky_lower(M, "test matrix");
    CHECK((L * L.transpose() - M).norm() <= 1e-13 * M.norm());
    DenseMatrix bad = M;
    bad(2, 2) = -6.0;
    CHECK_THROWS_AS(dense_cholesky_lower(bad, "test matrix"), NumericError);
  }

  TEST_CASE("require_symmetric names the offender") {
    DenseMatrix A(2, 2);
    A << 1, 2, 2, 1;
    CHECK(require_symmetric(A, "ok") == 2.0);
    A(1, 0) = 2.5;
    CHECK_THROWS_WITH_AS(require_symmetric(A, "lopsided"),
                         doctest::Contains("lopsided"), NumericError);
  }

  TEST_CASE("sparse Cholesky solves the 4-node path graph exactly") {
    const CsrMatrix A = tridiag(4, -1.0, 2.0);
    const SparseCholesky F(A);
    Vec64 b = Vec64::Zero(4);
    b(0) = 1.0;
    const Vec64 x = F.solve(b);
    const double expect[4] = {0.8, 0.6, 0.4, 0.2};
    for (Index i = 0; i < 4; ++i) CHECK(std::abs(x(i) - expect[i]) <= 1e-14);
    // hot-path variant agrees bitwise
    Vec64 x2(4);
    F.solve_into(b.data(), x2.data());
    CHECK((x - x2).norm() == 0.0);
  }

  TEST_CASE("sparse Cholesky factor reproduces the covariance") {
    // columns C e_i of the factor satisfy C C^T = A (permutation included)
    const CsrMatrix A = tridiag(6, -1.0, 3.0);
    const SparseCholesky F(A);
    DenseMatrix C(6, 6);
    for (Index i = 0; i < 6; ++i) {
      Vec64 e = Vec64::Zero(6);
      e(i) = 1.0;
      C.col(i) = F.apply_factor(e);
    }
    CHECK((C * C.transpose() - A.to_dense()).norm() <= 1e-12);
  }

  TEST_CASE("sparse Cholesky rejects indefinite and asymmetric matrices") {
    CHECK_THROWS_AS(sparse_cholesky(tridiag(4, -1.0, 0.5)), NumericError);
    const CsrMatrix A =
        CsrMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 1, 2.0}});
    CHECK_THROWS_AS(sparse_cholesky(A), NumericError);
  }
}
