#include "qms/shimura.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "qms/error.hpp"

namespace qms {

namespace {

QuadFraction from_rationals(const QuadField& K, const Rat& x, const Rat& y) {
  Int den = lcm(x.get_den(), y.get_den());
  return QuadFraction(K, x.get_num() * (den / x.get_den()), y.get_num() * (den / y.get_den()), den);
}

std::optional<Rat> rational_sqrt(const Rat& x) {
  if (x < 0) return std::nullopt;
  if (!arith::is_square(x.get_num()) || !arith::is_square(x.get_den())) return std::nullopt;
  Int n = sqrt(x.get_num()), d = sqrt(x.get_den());
  Rat r(n, d);
  r.canonicalize();
  return r;
}

Int imax(const Int& a, const Int& b) { return a < b ? b : a; }

Int height(const QuadElement& x) { return imax(abs(x.a()), abs(x.b())); }

// Unit u with u * x == x.normalized().
QuadElement normalizing_unit(const QuadElement& x) {
  const QuadElement target = x.normalized();
  for (const auto& u : x.field().units()) {
    if (u * x == target) return u;
  }
  return QuadElement(x.field(), 1);
}

// Every O_K element with coefficient height <= H, ordered by height then lexicographically.
std::vector<QuadElement> elements_up_to_height(const QuadField& K, int H) {
  std::vector<QuadElement> out;
  for (int h = 0; h <= H; ++h) {
    for (int a = -h; a <= h; ++a) {
      for (int b = -h; b <= h; ++b) {
        if (std::max(std::abs(a), std::abs(b)) != h) continue;
        out.emplace_back(K, a, b);
      }
    }
  }
  return out;
}

QuadElement bilinear(const ConicPoint& P, const std::array<QuadElement, 3>& V) {
  const auto& B = P.coords;
  return B[0] * V[0] + B[1] * V[1] * Int(conic_weight(P.D)) + B[2] * V[2];
}

QuadElement quadratic(int D, const std::array<QuadElement, 3>& V) {
  return V[0] * V[0] + V[1] * V[1] * Int(conic_weight(D)) + V[2] * V[2];
}

}  // namespace

int conic_weight(int D) {
  if (D == 6) return 3;
  if (D == 10) return 2;
  throw Error(ErrorKind::InvalidArgument, "quaternion discriminant must be 6 or 10");
}

bool conic_contains(const ConicPoint& P) {
  if (P.coords[0].is_zero() && P.coords[1].is_zero() && P.coords[2].is_zero()) return false;
  return quadratic(P.D, P.coords).is_zero();
}

ConicPoint ConicPoint::canonical() const {
  QuadElement g = gcd(gcd(coords[0], coords[1]), coords[2]);
  if (g.is_zero()) return *this;
  ConicPoint r = *this;
  for (auto& c : r.coords) c = g.exact_div(c);
  for (const auto& c : r.coords) {
    if (c.is_zero()) continue;
    QuadElement u = normalizing_unit(c);
    for (auto& x : r.coords) x = x * u;
    break;
  }
  return r;
}

std::string ConicPoint::to_string() const {
  return "(" + coords[0].to_string() + " : " + coords[1].to_string() + " : " + coords[2].to_string() + ")";
}

std::optional<ConicPoint> find_base_point(const QuadField& K, int D, int search_bound) {
  const int k = conic_weight(D);
  const auto elems = elements_up_to_height(K, search_bound);
  std::optional<ConicPoint> best;
  Int best_h;
  for (const auto& X : elems) {
    for (const auto& Y : elems) {
      if (X.is_zero() && Y.is_zero()) continue;
      Int h = imax(height(X), height(Y));
      if (best && h >= best_h) continue;
      QuadElement rhs = -(X * X + Y * Y * Int(k));
      auto z = sqrt_in_field(QuadFraction(rhs));
      if (!z || !z->is_integral()) continue;
      ConicPoint P{D, {X, Y, z->numerator()}};
      Int hz = imax(h, height(P.coords[2]));
      if (best && hz >= best_h) continue;
      best = P.canonical();
      best_h = hz;
    }
  }
  return best;
}

void for_each_conic_point(const ConicPoint& base, int height_bound,
                          const std::function<void(const ConicPoint&)>& emit) {
  if (!conic_contains(base)) throw Error(ErrorKind::BasePointInvalid, "base point is not on the conic");
  const QuadField& K = base.field();
  // Directions in the coordinate plane x_i = 0 where base_i != 0.
  int skip = 0;
  while (base.coords[skip].is_zero()) ++skip;
  int i1 = (skip + 1) % 3, i2 = (skip + 2) % 3;
  if (i1 > i2) std::swap(i1, i2);

  std::set<std::string> seen;
  const auto elems = elements_up_to_height(K, height_bound);
  for (const auto& u : elems) {
    for (const auto& v : elems) {
      if (u.is_zero() && v.is_zero()) continue;
      std::array<QuadElement, 3> V{QuadElement(K), QuadElement(K), QuadElement(K)};
      V[i1] = u;
      V[i2] = v;
      QuadElement q = quadratic(base.D, V);
      QuadElement b2 = bilinear(base, V) * Int(2);
      ConicPoint P{base.D, {base.coords[0] * q - V[0] * b2, base.coords[1] * q - V[1] * b2,
                            base.coords[2] * q - V[2] * b2}};
      if (P.coords[0].is_zero() && P.coords[1].is_zero() && P.coords[2].is_zero()) continue;
      P = P.canonical();
      if (seen.insert(P.to_string()).second) emit(P);
    }
  }
}

std::vector<ConicPoint> parametrize_conic(int D, const QuadField& K, const ConicPoint& base, int height) {
  if (base.D != D || !(base.field() == K)) throw Error(ErrorKind::BasePointInvalid, "base point from another conic");
  std::vector<ConicPoint> out;
  for_each_conic_point(base, height, [&](const ConicPoint& P) { out.push_back(P); });
  return out;
}

JInvariant j_from_point(const ConicPoint& P) {
  if (P.D != 6) throw Error(ErrorKind::InvalidArgument, "j is defined on X_6");
  if (!conic_contains(P)) throw Error(ErrorKind::BasePointInvalid, "point is not on X_6");
  if (P.coords[0].is_zero()) throw Error(ErrorKind::DegeneratePoint, "X coordinate vanishes");
  QuadFraction r = QuadFraction(P.coords[1] * Int(4)) / QuadFraction(P.coords[0] * Int(3));
  return JInvariant{r * r};
}

FamilyCurve baba_granath_curve(const JInvariant& J) {
  const QuadField& K = J.j.field();
  const QuadFraction& j = J.j;
  if (j.is_zero()) throw Error(ErrorKind::DegenerateJ, "j = 0");
  QuadFraction t = (j * Rat(27) + QuadFraction(K, 16)) * Rat(-2);
  if (t.is_zero()) throw Error(ErrorKind::DegenerateJ, "j = -16/27");
  QuadFraction c = j * Rat(-6);
  auto E = [&](const QuadFraction& u, const QuadFraction& v) { return QuadExt(u, v, c); };
  QuadFraction zero(K, 0), one(K, 1);
  QuadFraction t2 = t * t, t3 = t2 * t;
  std::vector<QuadExt> a{
      E(t3 * Rat(-4), t3 * Rat(-3)),  // -t^3 (4 + 3s)
      E(t3 * Rat(6), zero),
      E(t2 * Rat(84), t2 * Rat(-27)),  // 3t^2 (28 - 9s)
      E(t2 * Rat(-4), zero),
      E(t * Rat(84), t * Rat(27)),  // 3t (28 + 9s)
      E(t * Rat(6), zero),
      E(one * Rat(-4), one * Rat(3)),
  };
  return FamilyCurve{j, t, a};
}

IgusaClebsch family_invariants(const JInvariant& J) {
  FamilyCurve F = baba_granath_curve(J);
  const QuadField& K = J.j.field();
  QuadExt zero = QuadExt::scalar(QuadFraction(K, 0), F.coeffs.front().c());
  auto r = igusa_clebsch_generic(F.coeffs, zero);
  for (const auto& x : r) {
    if (!x.in_base()) throw Error(ErrorKind::Inconsistent, "family invariant left the base field");
  }
  return IgusaClebsch{r[0].u(), r[1].u(), r[2].u(), r[3].u()};
}

IgusaClebsch family_invariants_closed_form(const QuadFraction& j) {
  const QuadField& K = j.field();
  QuadFraction T = j * Rat(27) + QuadFraction(K, 16);
  QuadFraction T3 = T.pow(3);
  QuadFraction one(K, 1);
  return IgusaClebsch{
      (j + one) * T3 * Rat(Int("1327104")),
      j * T3 * T3 * Rat(Int("110075314176")),
      j * (j * Rat(5) + QuadFraction(K, 4)) * T3 * T3 * T3 * Rat(Int("12173449145352192")),
      j.pow(3) * T3.pow(5) * Rat(Int("2067895430987964852731904")),
  };
}

QuadFraction family_model_discriminant(const JInvariant& J) {
  FamilyCurve F = baba_granath_curve(J);
  return family_invariants_closed_form(J.j).I10 / F.t.pow(15);
}

int hilbert_symbol(const Rat& a_in, const Rat& b_in, std::uint64_t place) {
  if (a_in == 0 || b_in == 0) throw Error(ErrorKind::InvalidArgument, "Hilbert symbol of zero");
  // Same square classes as a and b.
  Int a = a_in.get_num() * a_in.get_den();
  Int b = b_in.get_num() * b_in.get_den();
  if (place == 0) return (a < 0 && b < 0) ? -1 : 1;
  const Int p(static_cast<unsigned long>(place));
  int alpha = arith::valuation(a, p), beta = arith::valuation(b, p);
  Int u = a, v = b;
  for (int i = 0; i < alpha; ++i) u /= p;
  for (int i = 0; i < beta; ++i) v /= p;
  if (place == 2) {
    auto eps = [](const Int& x) { return static_cast<int>(arith::mod_u64((x - 1) / 2, 2)); };
    auto omega = [](const Int& x) { return static_cast<int>(arith::mod_u64((x * x - 1) / 8, 2)); };
    int e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
    return e % 2 == 0 ? 1 : -1;
  }
  int s = 1;
  if ((alpha * beta) % 2 == 1 && place % 4 == 3) s = -s;
  if (beta % 2 == 1) s *= arith::legendre(u, place);
  if (alpha % 2 == 1) s *= arith::legendre(v, place);
  return s;
}

Ramification quaternion_ramification(const Rat& a, const Rat& b) {
  Ramification r;
  std::set<Int> cands{Int(2)};
  for (const Int* x : {&a.get_num(), &a.get_den(), &b.get_num(), &b.get_den()}) {
    if (abs(*x) <= 1) continue;
    for (const auto& [p, e] : arith::factor(*x)) cands.insert(p);
  }
  for (const auto& p : cands) {
    std::uint64_t pp = p.get_ui();
    if (hilbert_symbol(a, b, pp) == -1) r.finite.insert(pp);
  }
  r.real = hilbert_symbol(a, b, 0) == -1;
  return r;
}

std::pair<Rat, Rat> quaternion_algebra(int D) {
  if (D == 6) return {Rat(-6), Rat(2)};
  if (D == 10) return {Rat(-2), Rat(5)};
  throw Error(ErrorKind::InvalidArgument, "quaternion discriminant must be 6 or 10");
}

namespace {

// x is a square in Q_p iff (x, y)_p = 1 for every square class y.
bool is_local_square(const Rat& x, std::uint64_t p) {
  std::vector<long> reps;
  if (p == 2) {
    reps = {-1, 5, -5, 2, -2, 10, -10};
  } else {
    long u = static_cast<long>(arith::least_nonresidue(p));
    long pl = static_cast<long>(p);
    reps = {u, pl, u * pl};
  }
  for (long y : reps) {
    if (hilbert_symbol(x, Rat(y), p) == -1) return false;
  }
  return true;
}

}  // namespace

bool field_splits_algebra(const QuadField& K, const Rat& a, const Rat& b) {
  // K is complex, so the real place never obstructs.
  for (std::uint64_t p : quaternion_ramification(a, b).finite) {
    if (is_local_square(Rat(-K.d()), p)) return false;
  }
  return true;
}

bool splits_quaternion(const QuadField& K, int D) {
  auto [a, b] = quaternion_algebra(D);
  return field_splits_algebra(K, a, b);
}

bool splits_quaternion_by_splitting(const QuadField& K, int D) {
  const std::uint64_t q = D == 6 ? 3 : 5;
  for (std::uint64_t p : {std::uint64_t{2}, q}) {
    if (K.split_prime(p).size() == 2) return false;
  }
  return true;
}

bool conic_has_points(const QuadField& K, int D) {
  return field_splits_algebra(K, Rat(-1), Rat(-conic_weight(D)));
}

std::optional<QuadFraction> sqrt_in_field(const QuadFraction& z) {
  const QuadField& K = z.field();
  if (z.is_zero()) return z;
  // z = A + B sqrt(-d)
  Rat A(z.a(), z.den()), B(z.b(), z.den());
  if (K.half_omega()) {
    A += Rat(z.b(), 2 * z.den());
    B = Rat(z.b(), 2 * z.den());
  }
  A.canonicalize();
  B.canonicalize();
  auto M = rational_sqrt(A * A + Rat(K.d()) * B * B);
  if (!M) return std::nullopt;
  Rat x, y;
  if (auto xs = rational_sqrt((A + *M) / 2); xs && *xs != 0) {
    x = *xs;
    y = B / (2 * x);
  } else {
    auto ys = rational_sqrt((*M - A) / (2 * K.d()));
    if (!ys) return std::nullopt;
    x = 0;
    y = *ys;
  }
  // x + y sqrt(-d) in the basis {1, w}
  QuadFraction s = K.half_omega() ? from_rationals(K, x - y, 2 * y) : from_rationals(K, x, y);
  if (s * s != z) return std::nullopt;
  return s;
}

std::optional<JInvariant> find_j_from_invariants(const IgusaClebsch& ic) {
  const QuadField& K = ic.I2.field();
  std::vector<QuadFraction> cands;
  if (!ic.I6.is_zero()) {
    QuadFraction r = ic.I2 * ic.I4 / ic.I6;
    QuadFraction den = r * Rat(5) - QuadFraction(K, 12);
    if (!den.is_zero()) cands.push_back((QuadFraction(K, 12) - r * Rat(4)) / den);
  }
  if (!ic.I2.is_zero()) {
    // 16 rho (j + 1)^2 = j with rho = I4 / I2^2
    QuadFraction rho = ic.I4 / (ic.I2 * ic.I2);
    if (!rho.is_zero()) {
      QuadFraction a = rho * Rat(16), b = rho * Rat(32) - QuadFraction(K, 1);
      auto sq = sqrt_in_field(QuadFraction(K, 1) - rho * Rat(64));
      if (sq) {
        cands.push_back((-b + *sq) / (a * Rat(2)));
        cands.push_back((-b - *sq) / (a * Rat(2)));
      }
    }
  }
  cands.emplace_back(K, -1);
  cands.push_back(QuadFraction(K, -4) * Rat(1, 5));
  const QuadFraction bad = QuadFraction(K, -16) * Rat(1, 27);
  for (const auto& j : cands) {
    if (j.is_zero() || j == bad) continue;
    if (family_invariants_closed_form(j).same_point(ic)) return JInvariant{j};
  }
  return std::nullopt;
}

JInvariant find_j_from_curve(const GenusTwoCurve& C) {
  auto j = find_j_from_invariants(igusa_clebsch(C));
  if (!j) throw Error(ErrorKind::NotInFamily, "curve is not geometrically a member of the D = 6 family over K");
  return *j;
}

ReductionOutlook potential_reduction(const JInvariant& j, const PrimeIdeal& P) {
  if (j.j.is_zero()) throw Error(ErrorKind::DegenerateJ, "j = 0");
  if (P.p == 2 || P.p == 3) return ReductionOutlook::Undetermined;
  return P.valuation(j.j) == 0 ? ReductionOutlook::PotentiallyGood : ReductionOutlook::Bad;
}

std::string to_string(ReductionOutlook r) {
  switch (r) {
    case ReductionOutlook::PotentiallyGood: return "potentially-good";
    case ReductionOutlook::Bad: return "bad";
    case ReductionOutlook::Undetermined: return "undetermined";
  }
  return "undetermined";
}

}  // namespace qms
