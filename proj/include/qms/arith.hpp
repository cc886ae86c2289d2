#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <vector>

namespace qms {

using Int = mpz_class;
using Rat = mpq_class;

// Rational integer helpers shared by every module.
namespace arith {

std::int64_t to_i64(const Int& x);
bool fits_i64(const Int& x);

std::uint64_t mod_u64(const Int& x, std::uint64_t m);
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

// Legendre symbol (a|p) for odd prime p.
int legendre(const Int& a, std::uint64_t p);
// Kronecker symbol (disc|p) for a fundamental discriminant.
int kronecker(std::int64_t disc, std::uint64_t p);

// Least quadratic non-residue modulo an odd prime.
std::uint64_t least_nonresidue(std::uint64_t p);
// Square root modulo an odd prime; a must be a residue.
std::uint64_t sqrt_mod(std::uint64_t a, std::uint64_t p);

int valuation(Int n, const Int& p);
bool is_square(const Int& n);

// Complete factorization of |n| (n != 0) by trial division and Pollard-Brent.
std::map<Int, int> factor(const Int& n);

}  // namespace arith
}  // namespace qms
