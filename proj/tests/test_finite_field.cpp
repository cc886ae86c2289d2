#include <doctest.h>

#include <set>

#include "qms/finite_field.hpp"
#include "support.hpp"

using namespace qms;

TEST_CASE("field axioms on small fields") {
  for (auto [p, k] : std::vector<std::pair<std::uint64_t, int>>{{2, 1}, {2, 2}, {3, 2}, {5, 2}, {3, 4}, {7, 1}}) {
    GaloisField F = GaloisField::of_degree(p, k);
    CHECK(F.size() == static_cast<std::uint64_t>(std::pow(p, k)));
    std::set<std::uint64_t> seen;
    int squares = 0;
    for (std::uint64_t i = 1; i < F.size(); ++i) {
      auto x = F.element(i);
      CHECK(F.equal(F.mul(x, F.inv(x)), F.one()));
      CHECK(F.equal(F.pow(x, F.size() - 1), F.one()));
      squares += F.chi(x) == 1;
      seen.insert(F.index(F.mul(x, x)));
    }
    // squares of the nonzero elements
    CHECK(seen.size() == (p == 2 ? F.size() - 1 : (F.size() - 1) / 2));
    CHECK(static_cast<std::size_t>(squares) == seen.size());
  }
}

TEST_CASE("distinct degree factorization") {
  GaloisField F = GaloisField::prime(7);
  // (x - 1)(x^2 + 1)(x^3 + x + 1)? x^2+1 is irreducible mod 7; x^3 - 2 is irreducible mod 7
  using poly::Poly;
  auto c = [&](long v) { return F.from_i64(v); };
  Poly a{c(-1), c(1)}, b{c(1), c(0), c(1)}, e{c(-2), c(0), c(0), c(1)};
  Poly f = poly::mul(F, poly::mul(F, a, b), e);
  CHECK(poly::is_squarefree(F, f));
  CHECK(poly::factor_degrees(F, f) == std::vector<int>{1, 2, 3});
  CHECK_FALSE(poly::is_squarefree(F, poly::mul(F, a, a)));
}

TEST_CASE("residue fields") {
  const QuadField& K = QuadField::get(3);
  for (const auto& P : K.primes_up_to_norm(200)) {
    ResidueField R = ResidueField::of(P);
    CHECK(R.size() == P.norm());
    CHECK(R.field().is_zero(R.reduce(P.gen)));
    // reduction is a ring map
    for (int it = 0; it < 20; ++it) {
      QuadElement x = test::rand_element(K, 1000), y = test::rand_element(K, 1000);
      CHECK(R.field().equal(R.reduce(x * y), R.field().mul(R.reduce(x), R.reduce(y))));
      CHECK(R.field().equal(R.reduce(x + y), R.field().add(R.reduce(x), R.reduce(y))));
    }
    ResidueField R2 = ResidueField::extension(P, 2);
    CHECK(R2.size() == P.norm() * P.norm());
  }
}
