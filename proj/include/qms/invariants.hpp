#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qms/curve.hpp"

namespace qms {

// u + v*s in K[s]/(s^2 - c). c is shared by all operands.
class QuadExt {
 public:
  QuadExt(QuadFraction u, QuadFraction v, QuadFraction c) : u_(std::move(u)), v_(std::move(v)), c_(std::move(c)) {}
  static QuadExt scalar(const QuadFraction& u, const QuadFraction& c) {
    return QuadExt(u, QuadFraction(u.field(), 0), c);
  }

  const QuadFraction& u() const { return u_; }
  const QuadFraction& v() const { return v_; }
  const QuadFraction& c() const { return c_; }

  QuadExt operator+(const QuadExt& o) const { return QuadExt(u_ + o.u_, v_ + o.v_, c_); }
  QuadExt operator-(const QuadExt& o) const { return QuadExt(u_ - o.u_, v_ - o.v_, c_); }
  QuadExt operator*(const QuadExt& o) const {
    return QuadExt(u_ * o.u_ + v_ * o.v_ * c_, u_ * o.v_ + v_ * o.u_, c_);
  }
  QuadExt operator*(const Rat& k) const { return QuadExt(u_ * k, v_ * k, c_); }
  bool is_zero() const { return u_.is_zero() && v_.is_zero(); }
  bool in_base() const { return v_.is_zero(); }
  std::string to_string() const;

 private:
  QuadFraction u_, v_, c_;
};

struct IgusaClebsch {
  QuadFraction I2, I4, I6, I10;

  // Weight-0 ratios. With I2 != 0: (I2^5/I10, I2^3 I4/I10, I2^2 I6/I10);
  // otherwise (I4^5/I10^2, I4 I6/I10, I6^5/I10^3) with I2 = 0 recorded in the tag.
  struct Absolute {
    std::string kind;
    std::array<QuadFraction, 3> values;
  };
  Absolute absolute() const;

  // Equality as points of weighted projective space P(2,4,6,10).
  bool same_point(const IgusaClebsch& o) const;
};

// Classical Igusa-Clebsch invariants of a binary sextic given by c_0..c_6,
// normalized so that I10 is the discriminant.
template <class T>
std::array<T, 4> igusa_clebsch_generic(const std::vector<T>& ascending, const T& zero);

IgusaClebsch igusa_clebsch(const GenusTwoCurve& C);
IgusaClebsch igusa_clebsch(const std::vector<QuadFraction>& ascending);

}  // namespace qms
