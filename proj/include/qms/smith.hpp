#pragma once

#include <vector>

#include "qms/arith.hpp"

namespace qms {

using IntMatrix = std::vector<std::vector<Int>>;

IntMatrix identity_matrix(std::size_t n);
IntMatrix multiply(const IntMatrix& A, const IntMatrix& B);

// U * A * V = diag(d_1, ..., d_r, 0, ...) with d_i | d_{i+1}, d_i > 0; U, V unimodular.
struct SmithForm {
  std::vector<Int> diagonal;
  IntMatrix U, V, V_inverse;
};
SmithForm smith_normal_form(IntMatrix A);

// Upper-triangular basis of a full-rank sublattice of Z^n, maintained under insertion.
class HermiteLattice {
 public:
  // Starts from modulus * Z^n, which must be contained in the final lattice.
  HermiteLattice(std::size_t n, const Int& modulus);
  void insert(std::vector<Int> v);
  Int determinant() const;
  const IntMatrix& rows() const { return H_; }
  bool contains(std::vector<Int> v) const;

 private:
  std::size_t n_;
  IntMatrix H_;
};

}  // namespace qms
