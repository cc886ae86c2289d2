#include "qms/smith.hpp"

#include "qms/error.hpp"

namespace qms {

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix I(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

IntMatrix multiply(const IntMatrix& A, const IntMatrix& B) {
  if (A.empty()) return {};
  const std::size_t m = A.size(), k = B.size(), n = B.empty() ? 0 : B[0].size();
  IntMatrix C(m, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (A[i][l] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) C[i][j] += A[i][l] * B[l][j];
    }
  return C;
}

namespace {

Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

SmithForm smith_normal_form(IntMatrix A) {
  const std::size_t m = A.size();
  const std::size_t n = m ? A[0].size() : 0;
  SmithForm S;
  S.U = identity_matrix(m);
  S.V = identity_matrix(n);
  S.V_inverse = identity_matrix(n);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(A[i], A[j]);
    std::swap(S.U[i], S.U[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& row : A) std::swap(row[i], row[j]);
    for (auto& row : S.V) std::swap(row[i], row[j]);
    std::swap(S.V_inverse[i], S.V_inverse[j]);
  };
  // row_i -= q * row_j
  auto row_op = [&](std::size_t i, std::size_t j, const Int& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < n; ++c) A[i][c] -= q * A[j][c];
    for (std::size_t c = 0; c < m; ++c) S.U[i][c] -= q * S.U[j][c];
  };
  // col_i -= q * col_j; the inverse adds q * (row i) to row j of V^-1
  auto col_op = [&](std::size_t i, std::size_t j, const Int& q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < m; ++r) A[r][i] -= q * A[r][j];
    for (std::size_t r = 0; r < n; ++r) S.V[r][i] -= q * S.V[r][j];
    for (std::size_t c = 0; c < n; ++c) S.V_inverse[j][c] += q * S.V_inverse[i][c];
  };

  const std::size_t r = std::min(m, n);
  for (std::size_t t = 0; t < r; ++t) {
    for (;;) {
      // smallest nonzero entry of the remaining block
      std::size_t bi = m, bj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (A[i][j] != 0 && (bi == m || abs(A[i][j]) < abs(A[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi == m) goto done;
      if (bi != t) swap_rows(bi, t);
      if (bj != t) swap_cols(bj, t);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        row_op(i, t, fdiv(A[i][t], A[t][t]));
        if (A[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        col_op(j, t, fdiv(A[t][j], A[t][t]));
        if (A[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility of the rest by the pivot
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (A[i][j] % A[t][t] != 0) {
            row_op(t, i, Int(-1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (A[t][t] < 0) {
      for (auto& x : A[t]) x = -x;
      for (auto& x : S.U[t]) x = -x;
    }
    S.diagonal.push_back(A[t][t]);
  }
done:
  return S;
}

HermiteLattice::HermiteLattice(std::size_t n, const Int& modulus) : n_(n), H_(n, std::vector<Int>(n, 0)) {
  if (modulus <= 0) throw Error(ErrorKind::InvalidArgument, "lattice modulus must be positive");
  for (std::size_t i = 0; i < n; ++i) H_[i][i] = modulus;
}

void HermiteLattice::insert(std::vector<Int> v) {
  for (std::size_t i = 0; i < n_; ++i) {
    if (v[i] == 0) continue;
    Int g, a, b;
    mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), H_[i][i].get_mpz_t(), v[i].get_mpz_t());
    const Int hi = H_[i][i] / g, vi = v[i] / g;
    std::vector<Int> row(n_), rest(n_);
    for (std::size_t c = i; c < n_; ++c) {
      row[c] = a * H_[i][c] + b * v[c];
      rest[c] = vi * H_[i][c] - hi * v[c];
    }
    H_[i] = row;
    v = rest;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t c = i + 1; c < n_; ++c) {
      Int q = fdiv(H_[i][c], H_[c][c]);
      if (q == 0) continue;
      for (std::size_t cc = c; cc < n_; ++cc) H_[i][cc] -= q * H_[c][cc];
    }
  }
}

Int HermiteLattice::determinant() const {
  Int d = 1;
  for (std::size_t i = 0; i < n_; ++i) d *= H_[i][i];
  return d;
}

bool HermiteLattice::contains(std::vector<Int> v) const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (v[i] % H_[i][i] != 0) return false;
    Int q = v[i] / H_[i][i];
    for (std::size_t c = i; c < n_; ++c) v[c] -= q * H_[i][c];
  }
  return true;
}

}  // namespace qms
