#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "qms/quadfield.hpp"
#include "qms/smith.hpp"

namespace qms {

struct Modulus {
  const QuadField* K = nullptr;
  std::vector<std::pair<PrimeIdeal, int>> factors;

  Modulus(const QuadField& field, std::vector<std::pair<PrimeIdeal, int>> f);
  // "p2^3,p13.1,p19.1" or generator literals "2^3,(4+w),(...)"; "1" is the trivial modulus.
  static Modulus parse(const QuadField& K, const std::string& text);

  QuadElement generator() const;
  Int norm() const;
  bool coprime_to(const PrimeIdeal& P) const;
  std::string to_string() const;
};

// Cl(O_K, m) = (O/m)^x / image of the roots of unity.
class RayClassGroup {
 public:
  static RayClassGroup compute(const Modulus& m, std::uint64_t budget = 1000000);

  const Modulus& modulus() const { return m_; }
  // Elementary divisors d_1 | d_2 | ..., all > 1.
  const std::vector<Int>& invariants() const { return invariants_; }
  Int order() const;
  std::uint64_t residue_unit_count() const { return unit_count_; }
  std::uint64_t unit_image_order() const { return unit_image_; }
  // Residues generating each cyclic component.
  const std::vector<QuadElement>& generators() const { return component_gens_; }

  // Exponent vector modulo the elementary divisors.
  std::vector<Int> dlog(const QuadElement& x) const;
  std::vector<Int> dlog(const PrimeIdeal& P) const;

  nlohmann::json to_json() const;

 private:
  explicit RayClassGroup(Modulus m) : m_(std::move(m)) {}

  std::int64_t residue_index(const QuadElement& x) const;
  bool index_is_unit(std::int64_t idx) const;

  Modulus m_;
  std::int64_t A_ = 1, B_ = 0, C_ = 1;  // (g) = Z (A, 0) + Z (B, C) in the basis {1, w}
  std::vector<std::vector<std::int32_t>> table_;  // exponents on the chosen residue generators
  std::vector<std::uint8_t> unit_;
  IntMatrix V_;
  std::vector<std::size_t> components_;  // columns of V with nontrivial divisor
  std::vector<Int> invariants_;
  std::vector<QuadElement> component_gens_;
  std::uint64_t unit_count_ = 0;
  std::uint64_t unit_image_ = 1;
};

// Order-n character (n prime) given by coefficients on the components with n | d_i.
struct Character {
  int n = 2;
  std::vector<int> coeffs;

  int eval(const RayClassGroup& G, const QuadElement& x) const;
  int eval(const RayClassGroup& G, const PrimeIdeal& P) const;
  bool is_trivial() const;
  Character scaled(int k) const;
  Character plus(const Character& o) const;
  std::string to_string() const;
  bool operator==(const Character& o) const = default;
};

std::vector<Character> character_basis(const RayClassGroup& G, int n);
// Every character of order dividing n, as combinations of the basis.
std::vector<Character> all_characters(const RayClassGroup& G, int n);

struct SpanningResult {
  bool spans = false;
  int rank = 0;
  std::vector<std::vector<int>> matrix;
};

SpanningResult spanning_check(const RayClassGroup& G, const std::vector<Character>& basis,
                              const std::vector<PrimeIdeal>& S);

struct CoverResult {
  bool covers = false;
  std::map<std::vector<int>, PrimeIdeal> certificate;
  std::vector<std::vector<int>> uncovered;
};

CoverResult deciding_cover_check(const RayClassGroup& G, const std::vector<Character>& basis,
                                 const std::vector<PrimeIdeal>& T);

struct DecidingSet {
  std::vector<PrimeIdeal> primes;
  std::map<std::vector<int>, PrimeIdeal> certificate;
};

// Greedy over the stream; budget bounds the number of primes examined.
DecidingSet find_deciding_set(const RayClassGroup& G, const std::vector<Character>& basis,
                              const std::vector<PrimeIdeal>& stream, std::size_t budget);

std::vector<int> evaluation_vector(const RayClassGroup& G, const std::vector<Character>& basis, const PrimeIdeal& P);

}  // namespace qms
