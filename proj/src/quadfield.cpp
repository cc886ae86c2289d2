#include "qms/quadfield.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "qms/error.hpp"

namespace qms {

namespace {

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Nearest integer to a / b (b > 0).
Int round_div(const Int& a, const Int& b) { return floor_div(2 * a + b, 2 * b); }

}  // namespace

// ---------------------------------------------------------------------------
// QuadField

QuadField::QuadField(int d) : d_(d) {
  if (d % 4 == 3) {
    disc_ = -d;
    t_ = 1;
    n_ = (1 + d) / 4;
  } else {
    disc_ = -4 * d;
    t_ = 0;
    n_ = d;
  }
  label_ = "2.0." + std::to_string(-disc_) + ".1";
}

const std::array<int, 5>& QuadField::supported() {
  static const std::array<int, 5> ds{1, 2, 3, 7, 11};
  return ds;
}

const QuadField& QuadField::get(int d) {
  static const QuadField fields[] = {QuadField(1), QuadField(2), QuadField(3), QuadField(7), QuadField(11)};
  for (const auto& K : fields) {
    if (K.d_ == d) return K;
  }
  throw Error(ErrorKind::UnknownField, "Q(sqrt(-" + std::to_string(d) + ")) is not a supported field");
}

const QuadField& QuadField::from_label(std::string_view label) {
  for (int d : supported()) {
    if (get(d).label() == label) return get(d);
  }
  throw Error(ErrorKind::UnknownField, "unknown field label '" + std::string(label) + "'");
}

std::string QuadField::omega_description() const {
  if (t_ == 1) return "w = (1+sqrt(-" + std::to_string(d_) + "))/2";
  if (d_ == 1) return "w = i";
  return "w = sqrt(-" + std::to_string(d_) + ")";
}

std::vector<QuadElement> QuadField::units() const {
  std::vector<QuadElement> out;
  if (d_ == 3) {
    QuadElement w = QuadElement::omega(*this);
    QuadElement x = w;
    for (int k = 0; k < 6; ++k) {
      out.push_back(x);
      x = x * w;
    }
  } else if (d_ == 1) {
    QuadElement i = QuadElement::omega(*this);
    QuadElement x = i;
    for (int k = 0; k < 4; ++k) {
      out.push_back(x);
      x = x * i;
    }
  } else {
    out.emplace_back(*this, -1, 0);
    out.emplace_back(*this, 1, 0);
  }
  return out;
}

std::vector<std::uint64_t> QuadField::omega_roots_mod(std::uint64_t p) const {
  std::vector<std::uint64_t> roots;
  if (p < 50) {
    for (std::uint64_t r = 0; r < p; ++r) {
      std::uint64_t v = (r * r + p * p - (static_cast<std::uint64_t>(t_) * r) % p + static_cast<std::uint64_t>(n_) % p) % p;
      if (v == 0) roots.push_back(r);
    }
    return roots;
  }
  // x^2 - t x + n has discriminant t^2 - 4n, which is disc when t = 1 and disc when t = 0.
  const std::uint64_t two_inv = arith::inv_mod(2, p);
  Int D = Int(static_cast<long>(t_ * t_ - 4 * n_));
  std::uint64_t Dm = arith::mod_u64(D, p);
  if (Dm == 0) {
    roots.push_back(arith::mul_mod(static_cast<std::uint64_t>(t_), two_inv, p));
    return roots;
  }
  if (arith::legendre(D, p) != 1) return roots;
  std::uint64_t s = arith::sqrt_mod(Dm, p);
  std::uint64_t r1 = arith::mul_mod((static_cast<std::uint64_t>(t_) + s) % p, two_inv, p);
  std::uint64_t r2 = arith::mul_mod((static_cast<std::uint64_t>(t_) + p - s) % p, two_inv, p);
  roots.push_back(std::min(r1, r2));
  roots.push_back(std::max(r1, r2));
  return roots;
}

namespace {

// Some element of norm p, found by solving a^2 + t a b + n b^2 = p for b ascending.
std::optional<QuadElement> element_of_norm(const QuadField& K, std::uint64_t p) {
  const long t = K.omega_trace();
  const long n = K.omega_norm();
  const Int P = static_cast<unsigned long>(p);
  for (long b = 0;; ++b) {
    Int B = b;
    Int disc = Int(t * t) * B * B - 4 * (Int(n) * B * B - P);
    if (disc < 0) break;
    if (!arith::is_square(disc)) continue;
    Int s = sqrt(disc);
    Int num = -Int(t) * B + s;
    if (mpz_even_p(num.get_mpz_t())) return QuadElement(K, num / 2, B);
    num = -Int(t) * B - s;
    if (mpz_even_p(num.get_mpz_t())) return QuadElement(K, num / 2, B);
  }
  return std::nullopt;
}

std::uint64_t root_of_generator(const QuadElement& g, std::uint64_t p) {
  // a + b r = 0 mod p
  std::uint64_t a = arith::mod_u64(g.a(), p);
  std::uint64_t b = arith::mod_u64(g.b(), p);
  std::uint64_t binv = arith::inv_mod(b, p);
  return arith::mul_mod((p - a) % p, binv, p);
}

}  // namespace

std::vector<PrimeIdeal> QuadField::split_prime(std::uint64_t p) const {
  if (p < 2 || !arith::is_prime(p)) throw Error(ErrorKind::InvalidArgument, std::to_string(p) + " is not prime");
  const int kr = arith::kronecker(disc_, p);
  std::vector<PrimeIdeal> out;
  if (kr == 0) {
    auto g = element_of_norm(*this, p);
    if (!g) throw Error(ErrorKind::InvalidArgument, "no generator found for ramified prime");
    out.emplace_back(*this, p, 1, 2, 0, g->normalized(), omega_roots_mod(p).front());
  } else if (kr == -1) {
    out.emplace_back(*this, p, 2, 1, 0, QuadElement(*this, static_cast<unsigned long>(p), 0), 0);
  } else {
    auto g = element_of_norm(*this, p);
    if (!g) throw Error(ErrorKind::InvalidArgument, "no generator found for split prime");
    QuadElement g1 = g->normalized();
    QuadElement g2 = g->conj().normalized();
    std::uint64_t r1 = root_of_generator(g1, p);
    std::uint64_t r2 = root_of_generator(g2, p);
    if ((p - r1) % p > (p - r2) % p) {
      std::swap(g1, g2);
      std::swap(r1, r2);
    }
    out.emplace_back(*this, p, 1, 1, 1, g1, r1);
    out.emplace_back(*this, p, 1, 1, 2, g2, r2);
  }
  return out;
}

std::vector<PrimeIdeal> QuadField::primes_up_to_norm(std::uint64_t bound) const {
  std::vector<PrimeIdeal> out;
  for (std::uint64_t p : arith::primes_up_to(bound)) {
    for (auto& P : split_prime(p)) {
      if (P.norm() <= bound) out.push_back(std::move(P));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

PrimeIdeal QuadField::prime_from_generator(const QuadElement& gen) const {
  if (!(gen.field() == *this)) throw Error(ErrorKind::FieldMismatch, "generator from another field");
  Int N = gen.norm();
  if (N > 1 && arith::fits_i64(N) && arith::is_prime(N.get_ui())) {
    for (auto& P : split_prime(N.get_ui())) {
      if (P.contains(gen)) return P;
    }
  }
  if (N > 1 && arith::is_square(N)) {
    Int p = sqrt(N);
    if (arith::fits_i64(p) && arith::is_prime(p.get_ui())) {
      auto primes = split_prime(p.get_ui());
      if (primes.size() == 1 && primes.front().inert()) return primes.front();
    }
  }
  throw Error(ErrorKind::InvalidArgument, "(" + gen.to_string() + ") is not a prime ideal");
}

PrimeIdeal QuadField::prime_by_label(std::uint64_t p, int index) const {
  for (auto& P : split_prime(p)) {
    if (P.index == index) return P;
  }
  throw Error(ErrorKind::InvalidArgument, "no prime p" + std::to_string(p) + "." + std::to_string(index));
}

PrimeIdeal QuadField::conjugate(const PrimeIdeal& P) const {
  if (!P.split()) return P;
  return prime_by_label(P.p, 3 - P.index);
}

// ---------------------------------------------------------------------------
// QuadElement

QuadElement QuadElement::sqrt_minus_d(const QuadField& K) {
  if (K.half_omega()) return QuadElement(K, -1, 2);
  return QuadElement(K, 0, 1);
}

QuadElement QuadElement::operator+(const QuadElement& o) const { return QuadElement(*K_, a_ + o.a_, b_ + o.b_); }
QuadElement QuadElement::operator-(const QuadElement& o) const { return QuadElement(*K_, a_ - o.a_, b_ - o.b_); }
QuadElement QuadElement::operator-() const { return QuadElement(*K_, -a_, -b_); }

QuadElement QuadElement::operator*(const QuadElement& o) const {
  Int bd = b_ * o.b_;
  return QuadElement(*K_, a_ * o.a_ - K_->omega_norm() * bd, a_ * o.b_ + b_ * o.a_ + K_->omega_trace() * bd);
}

QuadElement QuadElement::conj() const { return QuadElement(*K_, a_ + K_->omega_trace() * b_, -b_); }

Int QuadElement::norm() const { return a_ * a_ + K_->omega_trace() * a_ * b_ + K_->omega_norm() * b_ * b_; }

Int QuadElement::trace() const { return 2 * a_ + K_->omega_trace() * b_; }

QuadElement QuadElement::pow(unsigned e) const {
  QuadElement r(*K_, 1, 0), base = *this;
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

bool QuadElement::divides(const QuadElement& y) const {
  if (is_zero()) return y.is_zero();
  QuadElement t = y * conj();
  Int N = norm();
  return mpz_divisible_p(t.a_.get_mpz_t(), N.get_mpz_t()) && mpz_divisible_p(t.b_.get_mpz_t(), N.get_mpz_t());
}

QuadElement QuadElement::exact_div(const QuadElement& y) const {
  if (is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
  QuadElement t = y * conj();
  Int N = norm();
  if (!mpz_divisible_p(t.a_.get_mpz_t(), N.get_mpz_t()) || !mpz_divisible_p(t.b_.get_mpz_t(), N.get_mpz_t())) {
    throw Error(ErrorKind::InvalidArgument, to_string() + " does not divide " + y.to_string());
  }
  return QuadElement(*K_, t.a_ / N, t.b_ / N);
}

std::pair<QuadElement, QuadElement> QuadElement::divmod(const QuadElement& y) const {
  if (is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
  QuadElement t = y * conj();
  Int N = norm();
  QuadElement q0(*K_, round_div(t.a_, N), round_div(t.b_, N));
  QuadElement best_q = q0;
  QuadElement best_r = y - q0 * *this;
  Int best_n = best_r.norm();
  for (int da = -1; da <= 1; ++da) {
    for (int db = -1; db <= 1; ++db) {
      QuadElement q(*K_, q0.a_ + da, q0.b_ + db);
      QuadElement r = y - q * *this;
      Int rn = r.norm();
      if (rn < best_n) {
        best_n = rn;
        best_q = q;
        best_r = r;
      }
    }
  }
  return {best_q, best_r};
}

QuadElement QuadElement::normalized() const {
  auto key = [](const QuadElement& x) {
    return std::make_tuple(Int(abs(x.b_)), x.b_ < 0, Int(abs(x.a_)), x.a_ < 0);
  };
  QuadElement best = *this;
  for (const auto& u : K_->units()) {
    QuadElement c = u * *this;
    if (key(c) < key(best)) best = c;
  }
  return best;
}

std::string QuadElement::to_string() const {
  if (b_ == 0) return a_.get_str();
  std::string bw;
  if (b_ == 1) bw = "w";
  else if (b_ == -1) bw = "-w";
  else bw = b_.get_str() + "*w";
  if (a_ == 0) return bw;
  if (b_ > 0) return a_.get_str() + "+" + bw;
  return a_.get_str() + bw;
}

QuadElement gcd(QuadElement x, QuadElement y) {
  while (!y.is_zero()) {
    auto [q, r] = y.divmod(x);
    (void)q;
    x = std::move(y);
    y = std::move(r);
  }
  return x.is_zero() ? x : x.normalized();
}

// ---------------------------------------------------------------------------
// Literal parsing: sums of terms c or c*w with integer or a/b coefficients,
// optionally wrapped as (expr)/den.

namespace {

struct Parser {
  std::string_view s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::InvalidArgument, "bad element literal '" + std::string(s) + "': " + why);
  }
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool peek_digit() {
    skip();
    return pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]));
  }
  Int integer() {
    skip();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected digits");
    return Int(std::string(s.substr(start, pos - start)));
  }
  // [coef][*]w | coef
  std::pair<Rat, Rat> term() {
    Rat coef = 1;
    bool has_coef = false;
    if (peek_digit()) {
      Int num = integer();
      Int den = 1;
      if (eat('/')) den = integer();
      if (den == 0) fail("zero denominator");
      coef = Rat(num, den);
      coef.canonicalize();
      has_coef = true;
    }
    skip();
    if (has_coef) {
      std::size_t save = pos;
      if (eat('*')) {
        if (eat('w')) return {0, coef};
        pos = save;
        return {coef, 0};
      }
      if (eat('w')) return {0, coef};
      return {coef, 0};
    }
    if (eat('w')) return {0, coef};
    fail("expected a term");
  }
  std::pair<Rat, Rat> sum() {
    Rat a = 0, b = 0;
    bool first = true;
    for (;;) {
      skip();
      int sign = 1;
      if (eat('-')) sign = -1;
      else if (!first && !eat('+')) break;
      else if (first) eat('+');
      std::pair<Rat, Rat> t;
      if (eat('(')) {
        t = sum();
        if (!eat(')')) fail("expected )");
        if (eat('/')) {
          Int den = integer();
          if (den == 0) fail("zero denominator");
          t.first /= den;
          t.second /= den;
        }
        if (eat('*')) {
          auto u = term();
          if (u.second != 0) fail("nonlinear term");
          t.first *= u.first;
          t.second *= u.first;
        }
      } else {
        t = term();
        if (eat('*')) {
          if (!eat('(')) fail("expected (");
          auto inner = sum();
          if (!eat(')')) fail("expected )");
          if (t.second != 0) fail("nonlinear term");
          t = {t.first * inner.first, t.first * inner.second};
        }
      }
      a += sign * t.first;
      b += sign * t.second;
      first = false;
      skip();
      if (pos >= s.size()) break;
    }
    return {a, b};
  }
};

}  // namespace

QuadFraction QuadFraction::parse(const QuadField& K, std::string_view text) {
  Parser p{text};
  auto [a, b] = p.sum();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing characters");
  Int den = lcm(Int(a.get_den()), Int(b.get_den()));
  Int na = a.get_num() * (den / a.get_den());
  Int nb = b.get_num() * (den / b.get_den());
  return QuadFraction(K, na, nb, den);
}

QuadElement QuadElement::parse(const QuadField& K, std::string_view text) {
  QuadFraction x = QuadFraction::parse(K, text);
  if (!x.is_integral()) throw Error(ErrorKind::InvalidArgument, "expected an integral element: " + std::string(text));
  return x.numerator();
}

// ---------------------------------------------------------------------------
// QuadFraction

QuadFraction::QuadFraction(const QuadField& K, Int a, Int b, Int den)
    : K_(&K), a_(std::move(a)), b_(std::move(b)), den_(std::move(den)) {
  if (den_ == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  reduce();
}

void QuadFraction::reduce() {
  if (den_ < 0) {
    den_ = -den_;
    a_ = -a_;
    b_ = -b_;
  }
  Int g = gcd(gcd(a_, b_), den_);
  if (g > 1) {
    a_ /= g;
    b_ /= g;
    den_ /= g;
  }
}

QuadFraction QuadFraction::operator+(const QuadFraction& o) const {
  return QuadFraction(*K_, a_ * o.den_ + o.a_ * den_, b_ * o.den_ + o.b_ * den_, den_ * o.den_);
}

QuadFraction QuadFraction::operator-(const QuadFraction& o) const {
  return QuadFraction(*K_, a_ * o.den_ - o.a_ * den_, b_ * o.den_ - o.b_ * den_, den_ * o.den_);
}

QuadFraction QuadFraction::operator-() const { return QuadFraction(*K_, -a_, -b_, den_); }

QuadFraction QuadFraction::operator*(const QuadFraction& o) const {
  QuadElement n = numerator() * o.numerator();
  return QuadFraction(*K_, n.a(), n.b(), den_ * o.den_);
}

QuadFraction QuadFraction::operator*(const Rat& k) const {
  return QuadFraction(*K_, a_ * k.get_num(), b_ * k.get_num(), den_ * k.get_den());
}

QuadFraction QuadFraction::inverse() const {
  if (is_zero() && b_ == 0) throw Error(ErrorKind::InvalidArgument, "inverse of zero");
  QuadElement n = numerator();
  QuadElement c = n.conj() * den_;
  return QuadFraction(*K_, c.a(), c.b(), n.norm());
}

QuadFraction QuadFraction::operator/(const QuadFraction& o) const { return *this * o.inverse(); }

QuadFraction QuadFraction::conj() const {
  QuadElement c = numerator().conj();
  return QuadFraction(*K_, c.a(), c.b(), den_);
}

Rat QuadFraction::norm() const {
  Rat r(numerator().norm(), den_ * den_);
  r.canonicalize();
  return r;
}

QuadFraction QuadFraction::pow(unsigned e) const {
  QuadFraction r(*K_, 1, 0, 1), base = *this;
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

std::string QuadFraction::to_string() const {
  if (den_ == 1) return numerator().to_string();
  if (b_ == 0) return a_.get_str() + "/" + den_.get_str();
  return "(" + numerator().to_string() + ")/" + den_.get_str();
}

// ---------------------------------------------------------------------------
// PrimeIdeal

std::string PrimeIdeal::label() const {
  std::string s = "p" + std::to_string(p);
  if (index != 0) s += "." + std::to_string(index);
  return s;
}

bool PrimeIdeal::contains(const QuadElement& x) const {
  if (f == 2) {
    Int P = static_cast<unsigned long>(p);
    return mpz_divisible_p(x.a().get_mpz_t(), P.get_mpz_t()) && mpz_divisible_p(x.b().get_mpz_t(), P.get_mpz_t());
  }
  std::uint64_t a = arith::mod_u64(x.a(), p);
  std::uint64_t b = arith::mod_u64(x.b(), p);
  return (a + arith::mul_mod(b, omega_root, p)) % p == 0;
}

int PrimeIdeal::valuation(const QuadElement& x) const {
  if (x.is_zero()) throw Error(ErrorKind::InvalidArgument, "valuation of zero");
  int v = 0;
  QuadElement y = x;
  while (contains(y)) {
    y = gen.exact_div(y);
    ++v;
  }
  return v;
}

int PrimeIdeal::valuation(const QuadFraction& x) const {
  int v = valuation(x.numerator());
  if (x.den() != 1) v -= e * arith::valuation(x.den(), Int(static_cast<unsigned long>(p)));
  return v;
}

}  // namespace qms
