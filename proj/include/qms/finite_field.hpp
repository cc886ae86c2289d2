#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qms/quadfield.hpp"

namespace qms {

// F_{p^k} for k <= 4 as F_p[t]/(modulus). Elements are coefficient arrays,
// low degree first; index() packs them base p for table lookups.
class GaloisField {
 public:
  using Elem = std::array<std::uint32_t, 4>;

  GaloisField(std::uint64_t p, std::vector<std::uint32_t> modulus);

  static GaloisField prime(std::uint64_t p);
  // t^2 - r for the least non-residue r (p odd), t^2 + t + 1 for p = 2.
  static GaloisField quadratic(std::uint64_t p);
  // Lexicographically first irreducible monic quartic.
  static GaloisField quartic(std::uint64_t p);
  static GaloisField of_degree(std::uint64_t p, int k);

  std::uint64_t characteristic() const { return p_; }
  int degree() const { return k_; }
  std::uint64_t size() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Elem zero() const { return Elem{}; }
  Elem one() const { return from_u64(1); }
  Elem from_u64(std::uint64_t v) const {
    Elem e{};
    e[0] = static_cast<std::uint32_t>(v % p_);
    return e;
  }
  Elem from_i64(std::int64_t v) const;
  Elem generator_t() const;

  Elem add(const Elem& x, const Elem& y) const {
    Elem r{};
    for (int i = 0; i < k_; ++i) {
      std::uint64_t s = std::uint64_t{x[i]} + y[i];
      r[i] = static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
    }
    return r;
  }
  Elem sub(const Elem& x, const Elem& y) const {
    Elem r{};
    for (int i = 0; i < k_; ++i) {
      std::uint64_t s = std::uint64_t{x[i]} + p_ - y[i];
      r[i] = static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
    }
    return r;
  }
  Elem neg(const Elem& x) const { return sub(zero(), x); }
  Elem mul(const Elem& x, const Elem& y) const;
  Elem scale(const Elem& x, std::uint64_t c) const;
  Elem pow(Elem x, std::uint64_t e) const;
  Elem inv(const Elem& x) const;

  bool is_zero(const Elem& x) const {
    for (int i = 0; i < k_; ++i)
      if (x[i] != 0) return false;
    return true;
  }
  bool equal(const Elem& x, const Elem& y) const {
    for (int i = 0; i < k_; ++i)
      if (x[i] != y[i]) return false;
    return true;
  }

  std::uint64_t index(const Elem& x) const {
    std::uint64_t idx = 0;
    for (int i = k_ - 1; i >= 0; --i) idx = idx * p_ + x[i];
    return idx;
  }
  Elem element(std::uint64_t idx) const {
    Elem e{};
    for (int i = 0; i < k_; ++i) {
      e[i] = static_cast<std::uint32_t>(idx % p_);
      idx /= p_;
    }
    return e;
  }

  // Quadratic character with chi(0) = 0.
  int chi(const Elem& x) const;
  // squares[index(x)] == 1 iff x is a nonzero square.
  std::vector<std::uint8_t> square_table() const;

 private:
  std::uint64_t p_;
  int k_;
  std::uint64_t q_;
  std::vector<std::uint32_t> modulus_;  // monic, size k + 1
};

// Polynomials over a GaloisField, low degree first, trimmed.
namespace poly {

using Poly = std::vector<GaloisField::Elem>;

int degree(const GaloisField& F, const Poly& f);
void trim(const GaloisField& F, Poly& f);
Poly sub(const GaloisField& F, const Poly& f, const Poly& g);
Poly mul(const GaloisField& F, const Poly& f, const Poly& g);
std::pair<Poly, Poly> divrem(const GaloisField& F, const Poly& f, const Poly& g);
Poly mod(const GaloisField& F, const Poly& f, const Poly& g);
Poly gcd(const GaloisField& F, Poly f, Poly g);
Poly derivative(const GaloisField& F, const Poly& f);
Poly powmod(const GaloisField& F, Poly base, std::uint64_t e, const Poly& m);
GaloisField::Elem eval(const GaloisField& F, const Poly& f, const GaloisField::Elem& x);
bool is_squarefree(const GaloisField& F, const Poly& f);
// Degrees of the irreducible factors of a squarefree f (distinct-degree factorization).
std::vector<int> factor_degrees(const GaloisField& F, Poly f);

}  // namespace poly

// Reduction O_K -> O_K / P, optionally followed by the embedding into the
// degree-m extension of the residue field.
class ResidueField {
 public:
  static ResidueField of(const PrimeIdeal& P) { return extension(P, 1); }
  static ResidueField extension(const PrimeIdeal& P, int m);

  const GaloisField& field() const { return F_; }
  const PrimeIdeal& prime() const { return P_; }
  const GaloisField::Elem& omega() const { return omega_; }
  std::uint64_t size() const { return F_.size(); }

  GaloisField::Elem reduce(const QuadElement& x) const;
  // Throws DenominatorNotInvertible when P divides the denominator.
  GaloisField::Elem reduce(const QuadFraction& x) const;

 private:
  ResidueField(PrimeIdeal P, GaloisField F, GaloisField::Elem omega)
      : P_(std::move(P)), F_(std::move(F)), omega_(omega) {}

  PrimeIdeal P_;
  GaloisField F_;
  GaloisField::Elem omega_;
};

}  // namespace qms
