#include "qms/finite_field.hpp"

#include "qms/error.hpp"

namespace qms {

GaloisField::GaloisField(std::uint64_t p, std::vector<std::uint32_t> modulus)
    : p_(p), k_(static_cast<int>(modulus.size()) - 1), q_(1), modulus_(std::move(modulus)) {
  if (k_ < 1 || k_ > 4) throw Error(ErrorKind::InvalidArgument, "extension degree must be 1..4");
  if (modulus_.back() != 1) throw Error(ErrorKind::InvalidArgument, "modulus must be monic");
  if (p >= (1ULL << 31)) throw Error(ErrorKind::InvalidArgument, "characteristic too large");
  for (int i = 0; i < k_; ++i) q_ *= p_;
}

GaloisField GaloisField::prime(std::uint64_t p) { return GaloisField(p, {0, 1}); }

GaloisField GaloisField::quadratic(std::uint64_t p) {
  if (p == 2) return GaloisField(2, {1, 1, 1});
  std::uint64_t r = arith::least_nonresidue(p);
  return GaloisField(p, {static_cast<std::uint32_t>(p - r), 0, 1});
}

GaloisField GaloisField::quartic(std::uint64_t p) {
  GaloisField Fp = prime(p);
  const poly::Poly x{Fp.zero(), Fp.one()};
  for (std::uint64_t idx = 0;; ++idx) {
    std::uint64_t v = idx;
    poly::Poly m(5);
    for (int i = 0; i < 4; ++i) {
      m[i] = Fp.from_u64(v % p);
      v /= p;
    }
    m[4] = Fp.one();
    if (Fp.is_zero(m[0])) continue;
    poly::Poly h = x;
    bool irreducible = true;
    for (int i = 1; i <= 2 && irreducible; ++i) {
      h = poly::powmod(Fp, h, p, m);
      poly::Poly g = poly::gcd(Fp, poly::sub(Fp, h, x), m);
      if (poly::degree(Fp, g) > 0) irreducible = false;
    }
    if (irreducible) {
      std::vector<std::uint32_t> coeffs;
      for (const auto& c : m) coeffs.push_back(c[0]);
      return GaloisField(p, coeffs);
    }
  }
}

GaloisField GaloisField::of_degree(std::uint64_t p, int k) {
  switch (k) {
    case 1: return prime(p);
    case 2: return quadratic(p);
    case 4: return quartic(p);
    default: throw Error(ErrorKind::InvalidArgument, "unsupported extension degree " + std::to_string(k));
  }
}

GaloisField::Elem GaloisField::from_i64(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += static_cast<std::int64_t>(p_);
  return from_u64(static_cast<std::uint64_t>(r));
}

GaloisField::Elem GaloisField::generator_t() const {
  Elem e{};
  if (k_ == 1) {
    e[0] = static_cast<std::uint32_t>((p_ - modulus_[0]) % p_);
  } else {
    e[1] = 1;
  }
  return e;
}

GaloisField::Elem GaloisField::mul(const Elem& x, const Elem& y) const {
  if (k_ == 1) {
    Elem r{};
    r[0] = static_cast<std::uint32_t>((std::uint64_t{x[0]} * y[0]) % p_);
    return r;
  }
  std::uint64_t t[7] = {0, 0, 0, 0, 0, 0, 0};
  for (int i = 0; i < k_; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < k_; ++j) t[i + j] = (t[i + j] + std::uint64_t{x[i]} * y[j]) % p_;
  }
  for (int d = 2 * k_ - 2; d >= k_; --d) {
    std::uint64_t c = t[d];
    if (c == 0) continue;
    t[d] = 0;
    for (int i = 0; i < k_; ++i) t[d - k_ + i] = (t[d - k_ + i] + c * (p_ - modulus_[i])) % p_;
  }
  Elem r{};
  for (int i = 0; i < k_; ++i) r[i] = static_cast<std::uint32_t>(t[i]);
  return r;
}

GaloisField::Elem GaloisField::scale(const Elem& x, std::uint64_t c) const {
  Elem r{};
  c %= p_;
  for (int i = 0; i < k_; ++i) r[i] = static_cast<std::uint32_t>((std::uint64_t{x[i]} * c) % p_);
  return r;
}

GaloisField::Elem GaloisField::pow(Elem x, std::uint64_t e) const {
  Elem r = one();
  while (e) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

GaloisField::Elem GaloisField::inv(const Elem& x) const {
  if (is_zero(x)) throw Error(ErrorKind::DenominatorNotInvertible, "inverse of zero in finite field");
  return pow(x, q_ - 2);
}

int GaloisField::chi(const Elem& x) const {
  if (is_zero(x)) return 0;
  if (p_ == 2) return 1;
  Elem r = pow(x, (q_ - 1) / 2);
  return equal(r, one()) ? 1 : -1;
}

std::vector<std::uint8_t> GaloisField::square_table() const {
  std::vector<std::uint8_t> squares(q_, 0);
  for (std::uint64_t i = 1; i < q_; ++i) {
    Elem x = element(i);
    squares[index(mul(x, x))] = 1;
  }
  return squares;
}

// ---------------------------------------------------------------------------

namespace poly {

void trim(const GaloisField& F, Poly& f) {
  while (!f.empty() && F.is_zero(f.back())) f.pop_back();
}

int degree(const GaloisField& F, const Poly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (!F.is_zero(f[i])) return i;
  return -1;
}

Poly sub(const GaloisField& F, const Poly& f, const Poly& g) {
  Poly r(std::max(f.size(), g.size()), F.zero());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  for (std::size_t i = 0; i < g.size(); ++i) r[i] = F.sub(r[i], g[i]);
  trim(F, r);
  return r;
}

Poly mul(const GaloisField& F, const Poly& f, const Poly& g) {
  if (f.empty() || g.empty()) return {};
  Poly r(f.size() + g.size() - 1, F.zero());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(f[i], g[j]));
  trim(F, r);
  return r;
}

std::pair<Poly, Poly> divrem(const GaloisField& F, const Poly& f, const Poly& g) {
  const int dg = degree(F, g);
  if (dg < 0) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
  Poly r = f;
  trim(F, r);
  const int df = degree(F, r);
  if (df < dg) return {{}, r};
  Poly q(df - dg + 1, F.zero());
  const auto lead_inv = F.inv(g[dg]);
  for (int d = df; d >= dg; --d) {
    if (F.is_zero(r[d])) continue;
    auto c = F.mul(r[d], lead_inv);
    q[d - dg] = c;
    for (int i = 0; i <= dg; ++i) r[d - dg + i] = F.sub(r[d - dg + i], F.mul(c, g[i]));
  }
  trim(F, q);
  trim(F, r);
  return {q, r};
}

Poly mod(const GaloisField& F, const Poly& f, const Poly& g) { return divrem(F, f, g).second; }

Poly gcd(const GaloisField& F, Poly f, Poly g) {
  trim(F, f);
  trim(F, g);
  while (!g.empty()) {
    Poly r = mod(F, f, g);
    f = std::move(g);
    g = std::move(r);
  }
  if (!f.empty()) {
    auto inv = F.inv(f.back());
    for (auto& c : f) c = F.mul(c, inv);
  }
  return f;
}

Poly derivative(const GaloisField& F, const Poly& f) {
  Poly r;
  for (std::size_t i = 1; i < f.size(); ++i) r.push_back(F.scale(f[i], i));
  trim(F, r);
  return r;
}

Poly powmod(const GaloisField& F, Poly base, std::uint64_t e, const Poly& m) {
  Poly r{F.one()};
  base = mod(F, base, m);
  while (e) {
    if (e & 1) r = mod(F, mul(F, r, base), m);
    base = mod(F, mul(F, base, base), m);
    e >>= 1;
  }
  return r;
}

GaloisField::Elem eval(const GaloisField& F, const Poly& f, const GaloisField::Elem& x) {
  GaloisField::Elem v = F.zero();
  for (auto it = f.rbegin(); it != f.rend(); ++it) v = F.add(F.mul(v, x), *it);
  return v;
}

bool is_squarefree(const GaloisField& F, const Poly& f) {
  Poly d = derivative(F, f);
  if (d.empty()) return degree(F, f) <= 0;
  return degree(F, gcd(F, f, d)) == 0;
}

std::vector<int> factor_degrees(const GaloisField& F, Poly f) {
  trim(F, f);
  std::vector<int> degrees;
  const Poly x{F.zero(), F.one()};
  Poly h = x;
  for (int i = 1; 2 * i <= degree(F, f); ++i) {
    h = powmod(F, h, F.size(), f);
    Poly g = gcd(F, sub(F, h, x), f);
    const int dg = degree(F, g);
    if (dg > 0) {
      for (int k = 0; k < dg / i; ++k) degrees.push_back(i);
      f = divrem(F, f, g).first;
      h = mod(F, h, f);
    }
  }
  if (degree(F, f) > 0) degrees.push_back(degree(F, f));
  return degrees;
}

}  // namespace poly

// ---------------------------------------------------------------------------

ResidueField ResidueField::extension(const PrimeIdeal& P, int m) {
  const int k = P.f * m;
  GaloisField F = GaloisField::of_degree(P.p, k);
  const QuadField& K = *P.K;
  if (P.f == 1) return ResidueField(P, F, F.from_u64(P.omega_root));
  const long t = K.omega_trace();
  const long n = K.omega_norm();
  if (k == 2) {
    GaloisField::Elem w{};
    if (P.p == 2) {
      w[1] = 1;  // w^2 + w + 1 = 0 for the inert prime above 2
    } else {
      // w = (t + c*T)/2 with T^2 = r and c^2 = (t^2 - 4n)/r
      std::uint64_t p = P.p;
      std::uint64_t r = (p - F.modulus()[0]) % p;
      std::uint64_t D = arith::mod_u64(Int(t * t - 4 * n), p);
      std::uint64_t c = arith::sqrt_mod(arith::mul_mod(D, arith::inv_mod(r, p), p), p);
      std::uint64_t half = arith::inv_mod(2, p);
      w[0] = static_cast<std::uint32_t>(arith::mul_mod(static_cast<std::uint64_t>(t), half, p));
      w[1] = static_cast<std::uint32_t>(arith::mul_mod(c, half, p));
    }
    return ResidueField(P, F, w);
  }
  // Either root of the minimal polynomial of w gives the same counts, since the
  // two are exchanged by Frobenius.
  const auto tt = F.from_i64(t);
  const auto nn = F.from_i64(n);
  for (std::uint64_t i = 0; i < F.size(); ++i) {
    auto x = F.element(i);
    auto v = F.add(F.sub(F.mul(x, x), F.mul(tt, x)), nn);
    if (F.is_zero(v)) return ResidueField(P, F, x);
  }
  throw Error(ErrorKind::InvalidArgument, "no root of the minimal polynomial of w");
}

GaloisField::Elem ResidueField::reduce(const QuadElement& x) const {
  const std::uint64_t p = F_.characteristic();
  auto a = F_.from_u64(arith::mod_u64(x.a(), p));
  auto b = F_.from_u64(arith::mod_u64(x.b(), p));
  return F_.add(a, F_.mul(b, omega_));
}

GaloisField::Elem ResidueField::reduce(const QuadFraction& x) const {
  const std::uint64_t p = F_.characteristic();
  const std::uint64_t den = arith::mod_u64(x.den(), p);
  if (den == 0) {
    throw Error(ErrorKind::DenominatorNotInvertible, "denominator " + x.den().get_str() + " lies in " + P_.label());
  }
  return F_.scale(reduce(x.numerator()), arith::inv_mod(den, p));
}

}  // namespace qms
