#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <vector>

#include "qms/counting.hpp"
#include "qms/finite_field.hpp"

namespace qms {

// 2x2 matrices over F_{l^2}: (a b; c d).
struct Mat2 {
  GaloisField::Elem a, b, c, d;
};

// Invertible matrices (alpha, beta; 0, alpha^l) over F_{l^2}.
class QuatOrderModEll {
 public:
  explicit QuatOrderModEll(std::uint64_t ell);

  std::uint64_t ell() const { return ell_; }
  const GaloisField& field() const { return F_; }
  const std::vector<Mat2>& elements() const { return elements_; }
  std::uint64_t order() const { return elements_.size(); }

  Mat2 mul(const Mat2& x, const Mat2& y) const;
  Mat2 identity() const;
  bool equal(const Mat2& x, const Mat2& y) const;
  bool has_shape(const Mat2& m) const;
  std::optional<Mat2> inverse(const Mat2& m) const;
  std::uint64_t element_order(const Mat2& m) const;
  // Closure, identity and inverses checked over the whole element list.
  bool verify_group_axioms() const;

 private:
  std::uint64_t ell_;
  GaloisField F_;
  std::vector<Mat2> elements_;
};

QuatOrderModEll build_quat_order_group(std::uint64_t ell);

struct SesReport {
  std::uint64_t ell = 0;
  std::uint64_t group_order = 0;
  std::uint64_t kernel_order = 0;
  bool kernel_abelian = false;
  std::uint64_t kernel_exponent = 0;
  bool kernel_isomorphic_to_additive = false;
  std::uint64_t quotient_order = 0;
  bool quotient_cyclic = false;
  bool reduction_is_homomorphism = false;
  bool exact() const;
  nlohmann::json to_json() const;
};

SesReport verify_ses(std::uint64_t ell);

struct LocalModelReport {
  std::uint64_t ell = 0;
  int precision = 0;
  std::int64_t u = 0;
  bool i_squared_is_u = false;
  bool j_squared_is_ell = false;
  bool ij_anticommute = false;
  bool ideal_square_is_ell = false;
  bool valuation_ok = false;
  bool norm_multiplicative = false;
  bool all() const;
  nlohmann::json to_json() const;
};

// Maximal order of the ramified quaternion algebra over Z_l, truncated mod l^k.
LocalModelReport verify_local_model(std::uint64_t ell, int k);

struct TraceSample {
  std::uint64_t trace = 0;
  std::optional<std::uint64_t> det;
};

struct CartanResult {
  bool consistent = true;
  std::vector<std::size_t> flagged;
};

CartanResult nonsplit_cartan_check(const std::vector<TraceSample>& samples, std::uint64_t ell);

struct CycleTypeSample {
  PrimeIdeal prime;
  std::vector<int> degrees;  // sorted ascending
};

CycleTypeSample sextic_cycle_type(const GenusTwoCurve& C, const PrimeIdeal& P);
// Orders of elements of A4 acting on the six roots give these factorization patterns.
bool cycle_type_in_a4(const std::vector<int>& degrees);

struct ParityProbe {
  std::vector<int> parities;
  bool all_odd = true;
};

ParityProbe trace_parity_probe(const TraceTable& T, const std::vector<PrimeIdeal>& S);

}  // namespace qms
