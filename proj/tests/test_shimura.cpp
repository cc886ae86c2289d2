#include <doctest.h>

#include <set>

#include "qms/error.hpp"
#include "qms/shimura.hpp"
#include "support.hpp"

using namespace qms;
using namespace qms::test;

namespace {

// Brute-force Hilbert symbol: a primitive solution of z^2 = a x^2 + b y^2 modulo p^3 (2^5 for p = 2).
int hilbert_bruteforce(long a, long b, long p) {
  auto strip = [&](long v) {
    while (v % (p * p) == 0) v /= p * p;
    return v;
  };
  a = strip(a);
  b = strip(b);
  const long m = p == 2 ? 32 : p * p * p;
  std::vector<char> square(m, 0);
  for (long z = 0; z < m; ++z) square[z * z % m] = 1;
  for (long x = 0; x < m; ++x)
    for (long y = 0; y < m; ++y) {
      if (x % p == 0 && y % p == 0) continue;
      long v = ((a * x % m) * x + (b * y % m) * y) % m;
      if (square[(v + m) % m]) return 1;
    }
  return -1;
}

}  // namespace

TEST_CASE("Hilbert symbols against brute force") {
  for (long p : {2, 3, 5, 7}) {
    for (long a : {-1, 2, 3, -3, 5, 6, -6, 7, 10, -2})
      for (long b : {-1, 2, 3, 5, -5, 7, 14})
        CHECK_MESSAGE(hilbert_symbol(Rat(a), Rat(b), p) == hilbert_bruteforce(a, b, p), a, " ", b, " at ", p);
  }
  CHECK(hilbert_symbol(Rat(-1), Rat(-1), 0) == -1);
  CHECK(hilbert_symbol(Rat(-1), Rat(3), 0) == 1);
  CHECK(hilbert_symbol(Rat(1, 4), Rat(-7), 7) == 1);
}

TEST_CASE("Hilbert reciprocity") {
  for (int it = 0; it < 100; ++it) {
    long a = rand_int(-500, 500), b = rand_int(-500, 500);
    if (a == 0 || b == 0) continue;
    std::set<std::uint64_t> places{2};
    for (long v : {a, b})
      for (const auto& [p, e] : arith::factor(Int(v))) places.insert(p.get_ui());
    int prod = hilbert_symbol(Rat(a), Rat(b), 0);
    for (auto p : places) prod *= hilbert_symbol(Rat(a), Rat(b), p);
    CHECK(prod == 1);
  }
}

TEST_CASE("quaternion algebras of discriminant 6 and 10") {
  auto [a6, b6] = quaternion_algebra(6);
  auto r6 = quaternion_ramification(a6, b6);
  CHECK(r6.finite == std::set<std::uint64_t>{2, 3});
  CHECK_FALSE(r6.real);
  auto [a10, b10] = quaternion_algebra(10);
  auto r10 = quaternion_ramification(a10, b10);
  CHECK(r10.finite == std::set<std::uint64_t>{2, 5});
  CHECK_FALSE(r10.real);
}

TEST_CASE("splitting of B_6 over the five fields") {
  for (int d : QuadField::supported()) {
    const QuadField& K = QuadField::get(d);
    // oracle: neither 2 nor 3 splits
    bool want = omega_root_count(K, 2) != 2 && omega_root_count(K, 3) != 2;
    CHECK(splits_quaternion(K, 6) == want);
    CHECK(splits_quaternion_by_splitting(K, 6) == want);
    // the conic is the algebra (-1, -3), ramified at 3 and infinity only
    const bool conic = omega_root_count(K, 3) != 2;
    CHECK(conic_has_points(K, 6) == conic);
    CHECK(find_base_point(K, 6).has_value() == conic);
  }
  CHECK(splits_quaternion(QuadField::get(1), 6));
  CHECK(splits_quaternion(QuadField::get(3), 6));
  CHECK_FALSE(splits_quaternion(QuadField::get(7), 6));
}

TEST_CASE("conic sweep produces points and consistent j") {
  for (int d : {1, 3}) {
    const QuadField& K = QuadField::get(d);
    auto base = find_base_point(K, 6);
    REQUIRE(base);
    CHECK(conic_contains(*base));
    auto pts = parametrize_conic(6, K, *base, 3);
    CHECK(pts.size() > 20);
    std::set<std::string> seen;
    for (const auto& P : pts) {
      CHECK(conic_contains(P));
      CHECK(seen.insert(P.to_string()).second);
      if (P.coords[0].is_zero()) continue;
      // P_j = (4 : 3 sqrt(j) : sqrt(-27j - 16)) up to scaling
      JInvariant J = j_from_point(P);
      QuadFraction X(P.coords[0]), Y(P.coords[1]), Z(P.coords[2]);
      CHECK((Y / X).pow(2) * Rat(16) == J.j * Rat(9));
      CHECK((Z / X).pow(2) * Rat(16) == J.j * Rat(-27) - QuadFraction(K, 16));
    }
    // deterministic order
    CHECK(parametrize_conic(6, K, *base, 3).front() == pts.front());
  }
  // Q(sqrt(-7)) has points on X_6 although it does not split B_6
  const QuadField& K7 = QuadField::get(7);
  CHECK(conic_contains(ConicPoint{6, {QuadElement::sqrt_minus_d(K7) * Int(-2), QuadElement(K7, 3), QuadElement(K7, 1)}}));
  CHECK_FALSE(find_base_point(QuadField::get(2), 6));
}

TEST_CASE("family invariants: closed form against transvectants") {
  const QuadField& K = QuadField::get(3);
  for (const char* js : {"5", "-2+3*w", "1/7*(4-w)", "13"}) {
    JInvariant J{QuadFraction::parse(K, js)};
    IgusaClebsch a = family_invariants(J), b = family_invariants_closed_form(J.j);
    CHECK(a.I2 == b.I2);
    CHECK(a.I4 == b.I4);
    CHECK(a.I6 == b.I6);
    CHECK(a.I10 == b.I10);
    auto found = find_j_from_invariants(b);
    REQUIRE(found);
    CHECK(found->j == J.j);
  }
  CHECK_THROWS_AS(baba_granath_curve(JInvariant{QuadFraction(K, 0)}), Error);
  CHECK_THROWS_AS(baba_granath_curve(JInvariant{QuadFraction(K, -16, 0, 27)}), Error);
}

TEST_CASE("twisted model discriminant is a constant times j^3") {
  const QuadField& K = QuadField::get(1);
  QuadFraction base = family_model_discriminant(JInvariant{QuadFraction(K, 1)});
  for (const char* js : {"3", "2+w", "-5/11"}) {
    QuadFraction j = QuadFraction::parse(K, js);
    CHECK(family_model_discriminant(JInvariant{j}) == base * j.pow(3));
  }
}

TEST_CASE("matching reference curves to the family") {
  for (int i : {1, 4}) {
    GenusTwoCurve C = curve(i);
    JInvariant J = find_j_from_curve(C);
    CHECK(igusa_clebsch(C).same_point(family_invariants_closed_form(J.j)));
  }
  for (int i : {2, 3}) {
    try {
      find_j_from_curve(curve(i));
      FAIL("expected NotInFamily");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotInFamily);
    }
  }
}

TEST_CASE("potential reduction follows the valuation of j") {
  const QuadField& K = QuadField::get(3);
  auto P = K.prime_by_label(7, 1);
  CHECK(potential_reduction(JInvariant{QuadFraction(P.gen) * Rat(5)}, P) == ReductionOutlook::Bad);
  CHECK(potential_reduction(JInvariant{QuadFraction(K, 5)}, P) == ReductionOutlook::PotentiallyGood);
  CHECK(potential_reduction(JInvariant{QuadFraction(K, 5)}, K.prime_by_label(2, 0)) == ReductionOutlook::Undetermined);
}
