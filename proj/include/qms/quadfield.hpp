#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qms/arith.hpp"

namespace qms {

class QuadElement;
class QuadFraction;
struct PrimeIdeal;

// K = Q(sqrt(-d)) for one of the class-number-one fields carried by the
// Bianchi newform tables. Integral basis {1, w} with w^2 = t*w - n, where
// w = sqrt(-d) (t = 0, n = d) or w = (1 + sqrt(-d))/2 (t = 1, n = (1 + d)/4).
class QuadField {
 public:
  static const QuadField& get(int d);
  static const QuadField& from_label(std::string_view label);
  static const std::array<int, 5>& supported();

  int d() const { return d_; }
  int disc() const { return disc_; }
  bool half_omega() const { return t_ == 1; }
  long omega_trace() const { return t_; }
  long omega_norm() const { return n_; }
  const std::string& label() const { return label_; }
  std::string omega_description() const;

  // Roots of unity of O_K, generator first.
  std::vector<QuadElement> units() const;

  std::vector<PrimeIdeal> split_prime(std::uint64_t p) const;
  // All primes of norm <= bound ordered by (norm, index).
  std::vector<PrimeIdeal> primes_up_to_norm(std::uint64_t bound) const;
  // Prime generated by gen; throws InvalidArgument if (gen) is not prime.
  PrimeIdeal prime_from_generator(const QuadElement& gen) const;
  // p_{p,index} under the residue-root labelling (index 0 for non-split p).
  PrimeIdeal prime_by_label(std::uint64_t p, int index) const;
  PrimeIdeal conjugate(const PrimeIdeal& P) const;

  // Roots of the minimal polynomial of w modulo p, in [0, p).
  std::vector<std::uint64_t> omega_roots_mod(std::uint64_t p) const;

  bool operator==(const QuadField& other) const { return d_ == other.d_; }

 private:
  explicit QuadField(int d);

  int d_;
  int disc_;
  long t_;
  long n_;
  std::string label_;
};

class QuadElement {
 public:
  explicit QuadElement(const QuadField& K, Int a = 0, Int b = 0) : K_(&K), a_(std::move(a)), b_(std::move(b)) {}

  static QuadElement parse(const QuadField& K, std::string_view text);
  static QuadElement omega(const QuadField& K) { return QuadElement(K, 0, 1); }
  // sqrt(-d) written in the integral basis.
  static QuadElement sqrt_minus_d(const QuadField& K);

  const QuadField& field() const { return *K_; }
  const Int& a() const { return a_; }
  const Int& b() const { return b_; }

  QuadElement operator+(const QuadElement& o) const;
  QuadElement operator-(const QuadElement& o) const;
  QuadElement operator-() const;
  QuadElement operator*(const QuadElement& o) const;
  QuadElement operator*(const Int& k) const { return QuadElement(*K_, a_ * k, b_ * k); }
  QuadElement& operator+=(const QuadElement& o) { return *this = *this + o; }
  QuadElement& operator-=(const QuadElement& o) { return *this = *this - o; }
  QuadElement& operator*=(const QuadElement& o) { return *this = *this * o; }
  bool operator==(const QuadElement& o) const { return K_ == o.K_ && a_ == o.a_ && b_ == o.b_; }
  bool operator!=(const QuadElement& o) const { return !(*this == o); }

  QuadElement conj() const;
  Int norm() const;
  Int trace() const;
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_unit() const { return norm() == 1; }
  QuadElement pow(unsigned e) const;

  bool divides(const QuadElement& y) const;
  // y / *this, which must be exact.
  QuadElement exact_div(const QuadElement& y) const;
  // Euclidean division y = q * (*this) + r with N(r) < N(*this).
  std::pair<QuadElement, QuadElement> divmod(const QuadElement& y) const;

  // Unit multiple minimizing (|b|, b < 0, |a|, a < 0).
  QuadElement normalized() const;

  std::string to_string() const;

 private:
  const QuadField* K_;
  Int a_;
  Int b_;
};

QuadElement gcd(QuadElement x, QuadElement y);

// (a + b w) / den with den > 0 and gcd(a, b, den) = 1.
class QuadFraction {
 public:
  explicit QuadFraction(const QuadField& K, Int a = 0, Int b = 0, Int den = 1);
  QuadFraction(const QuadElement& x) : QuadFraction(x.field(), x.a(), x.b(), 1) {}  // NOLINT

  static QuadFraction parse(const QuadField& K, std::string_view text);

  const QuadField& field() const { return *K_; }
  const Int& a() const { return a_; }
  const Int& b() const { return b_; }
  const Int& den() const { return den_; }
  QuadElement numerator() const { return QuadElement(*K_, a_, b_); }
  bool is_integral() const { return den_ == 1; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  QuadFraction operator+(const QuadFraction& o) const;
  QuadFraction operator-(const QuadFraction& o) const;
  QuadFraction operator-() const;
  QuadFraction operator*(const QuadFraction& o) const;
  QuadFraction operator/(const QuadFraction& o) const;
  QuadFraction operator*(const Rat& k) const;
  QuadFraction& operator+=(const QuadFraction& o) { return *this = *this + o; }
  QuadFraction& operator-=(const QuadFraction& o) { return *this = *this - o; }
  QuadFraction& operator*=(const QuadFraction& o) { return *this = *this * o; }
  bool operator==(const QuadFraction& o) const {
    return K_ == o.K_ && a_ == o.a_ && b_ == o.b_ && den_ == o.den_;
  }
  bool operator!=(const QuadFraction& o) const { return !(*this == o); }

  QuadFraction conj() const;
  Rat norm() const;
  QuadFraction inverse() const;
  QuadFraction pow(unsigned e) const;
  bool is_rational() const { return b_ == 0; }

  std::string to_string() const;

 private:
  void reduce();

  const QuadField* K_;
  Int a_;
  Int b_;
  Int den_;
};

// A prime of O_K stored by its canonical generator. index is 1 or 2 for the
// two primes above a split p (index 1 is the prime where w reduces to the
// root r minimizing (-r mod p)) and 0 otherwise.
struct PrimeIdeal {
  const QuadField* K = nullptr;
  std::uint64_t p = 0;
  int f = 1;
  int e = 1;
  int index = 0;
  QuadElement gen;
  // Image of w in the residue field when f = 1.
  std::uint64_t omega_root = 0;

  PrimeIdeal(const QuadField& field, std::uint64_t p_, int f_, int e_, int index_, QuadElement g,
             std::uint64_t root)
      : K(&field), p(p_), f(f_), e(e_), index(index_), gen(std::move(g)), omega_root(root) {}

  std::uint64_t norm() const { return f == 2 ? p * p : p; }
  bool split() const { return index != 0; }
  bool ramified() const { return e == 2; }
  bool inert() const { return f == 2; }
  // "p13.1", "p5" style label.
  std::string label() const;

  bool contains(const QuadElement& x) const;
  int valuation(const QuadElement& x) const;
  int valuation(const QuadFraction& x) const;

  bool operator==(const PrimeIdeal& o) const { return K == o.K && gen == o.gen; }
  bool operator!=(const PrimeIdeal& o) const { return !(*this == o); }
  bool operator<(const PrimeIdeal& o) const {
    if (norm() != o.norm()) return norm() < o.norm();
    if (p != o.p) return p < o.p;
    return index < o.index;
  }
};

}  // namespace qms
