#include "qms/arith.hpp"

#include <gmp.h>

#include <stdexcept>

#include "qms/error.hpp"

namespace qms {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DenominatorNotInvertible: return "DenominatorNotInvertible";
    case ErrorKind::BasePointInvalid: return "BasePointInvalid";
    case ErrorKind::DegeneratePoint: return "DegeneratePoint";
    case ErrorKind::DegenerateJ: return "DegenerateJ";
    case ErrorKind::SingularCurve: return "SingularCurve";
    case ErrorKind::NotInFamily: return "NotInFamily";
    case ErrorKind::BadReduction: return "BadReduction";
    case ErrorKind::NotQMShape: return "NotQMShape";
    case ErrorKind::NoSplitPrimes: return "NoSplitPrimes";
    case ErrorKind::MissingPrime: return "MissingPrime";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::PrimeDividesModulus: return "PrimeDividesModulus";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::ProbeFailure: return "ProbeFailure";
    case ErrorKind::TraceMismatch: return "TraceMismatch";
    case ErrorKind::MissingEigenvalue: return "MissingEigenvalue";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::UnknownField: return "UnknownField";
    case ErrorKind::DuplicatePrime: return "DuplicatePrime";
    case ErrorKind::HeckeBoundViolation: return "HeckeBoundViolation";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::NetworkError: return "NetworkError";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::ConversionError: return "ConversionError";
    case ErrorKind::FieldDoesNotSplit: return "FieldDoesNotSplit";
    case ErrorKind::FixtureMissing: return "FixtureMissing";
  }
  return "Unknown";
}

bool is_verification_failure(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotInFamily:
    case ErrorKind::NotQMShape:
    case ErrorKind::ProbeFailure:
    case ErrorKind::TraceMismatch:
    case ErrorKind::Inconsistent:
    case ErrorKind::FieldDoesNotSplit:
      return true;
    default:
      return false;
  }
}

namespace arith {

bool fits_i64(const Int& x) { return mpz_fits_slong_p(x.get_mpz_t()) != 0; }

std::int64_t to_i64(const Int& x) {
  if (!fits_i64(x)) throw Error(ErrorKind::InvalidArgument, "integer out of 64-bit range: " + x.get_str());
  return x.get_si();
}

std::uint64_t mod_u64(const Int& x, std::uint64_t m) {
  return mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(m));
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw Error(ErrorKind::DenominatorNotInvertible, "not invertible modulo " + std::to_string(m));
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound < 2) return out;
  std::vector<bool> sieve(bound + 1, true);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (std::uint64_t k = i * i; k <= bound; k += i) sieve[k] = false;
  }
  return out;
}

int legendre(const Int& a, std::uint64_t p) {
  Int pp = static_cast<unsigned long>(p);
  return mpz_legendre(a.get_mpz_t(), pp.get_mpz_t());
}

int kronecker(std::int64_t disc, std::uint64_t p) {
  Int a = static_cast<long>(disc);
  Int pp = static_cast<unsigned long>(p);
  return mpz_kronecker(a.get_mpz_t(), pp.get_mpz_t());
}

std::uint64_t least_nonresidue(std::uint64_t p) {
  for (std::uint64_t r = 2; r < p; ++r) {
    if (pow_mod(r, (p - 1) / 2, p) == p - 1) return r;
  }
  throw Error(ErrorKind::InvalidArgument, "no non-residue modulo " + std::to_string(p));
}

std::uint64_t sqrt_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (pow_mod(a, (p - 1) / 2, p) != 1) throw Error(ErrorKind::InvalidArgument, "non-residue has no square root");
  // Tonelli-Shanks
  std::uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  std::uint64_t z = least_nonresidue(p);
  std::uint64_t m = static_cast<std::uint64_t>(s);
  std::uint64_t c = pow_mod(z, q, p);
  std::uint64_t t = pow_mod(a, q, p);
  std::uint64_t r = pow_mod(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mul_mod(tt, tt, p);
      ++i;
    }
    std::uint64_t b = c;
    for (std::uint64_t k = 0; k + i + 1 < m; ++k) b = mul_mod(b, b, p);
    m = i;
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    r = mul_mod(r, b, p);
  }
  return std::min(r, p - r);
}

int valuation(Int n, const Int& p) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "valuation of zero");
  int v = 0;
  while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    n /= p;
    ++v;
  }
  return v;
}

bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

namespace {

Int pollard_brent(const Int& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, q = 1, g = 1, ys;
    unsigned long r = 1;
    const unsigned long m = 64;
    auto f = [&](const Int& v) { return Int((v * v + c) % n); };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          Int diff = abs(x - y);
          q = (q * diff) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        Int diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(const Int& n, std::map<Int, int>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
    out[n] += 1;
    return;
  }
  Int d = pollard_brent(n);
  factor_into(d, out);
  factor_into(Int(n / d), out);
}

}  // namespace

std::map<Int, int> factor(const Int& n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "cannot factor zero");
  std::map<Int, int> out;
  Int m = abs(n);
  for (unsigned long p = 2; p < 10000 && m > 1; ++p) {
    if (p > 2 && p % 2 == 0) continue;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      m /= p;
      out[Int(p)] += 1;
    }
  }
  factor_into(m, out);
  return out;
}

}  // namespace arith
}  // namespace qms
