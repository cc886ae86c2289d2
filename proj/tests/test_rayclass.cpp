#include <doctest.h>

#include "qms/error.hpp"
#include "qms/rayclass.hpp"
#include "support.hpp"

using namespace qms;
using namespace qms::test;

namespace {

const QuadField& K3() { return QuadField::get(3); }

Modulus reference_modulus() { return Modulus::parse(K3(), "p2^3,p13.1,p19.1"); }

// |(O/m)^x| = prod N(P)^(e-1) (N(P) - 1)
std::uint64_t phi(const Modulus& m) {
  std::uint64_t r = 1;
  for (const auto& [P, e] : m.factors) {
    std::uint64_t q = P.norm();
    for (int i = 1; i < e; ++i) r *= q;
    r *= q - 1;
  }
  return r;
}

std::vector<PrimeIdeal> span_set() {
  const QuadField& K = K3();
  return {K.prime_by_label(7, 1), K.prime_by_label(7, 2), K.prime_by_label(13, 2), K.prime_by_label(19, 2),
          K.prime_by_label(5, 0)};
}

}  // namespace

TEST_CASE("modulus parsing") {
  Modulus a = reference_modulus();
  Modulus b = Modulus::parse(K3(), "2^3, (3+w), (-5+2*w)");
  CHECK(a.generator() == b.generator());
  CHECK(a.norm() == 64 * 13 * 19);
  CHECK(a.to_string() == "p2^3,p13.1,p19.1");
  CHECK(Modulus::parse(K3(), "1").factors.empty());
  CHECK(Modulus::parse(K3(), "p2^3*p13.1*(-5+2*w)").generator() == a.generator());
  CHECK_THROWS_AS(Modulus::parse(K3(), "p2^3x"), Error);
  CHECK_THROWS_AS(Modulus::parse(K3(), "p2^3,,p13.1"), Error);
  CHECK_THROWS_AS(Modulus::parse(K3(), "p4"), Error);
  CHECK_THROWS_AS(Modulus::parse(K3(), "(6)"), Error);
  CHECK(a.coprime_to(K3().prime_by_label(13, 2)));
  CHECK_FALSE(a.coprime_to(K3().prime_by_label(13, 1)));
}

TEST_CASE("ray class group for the residual modulus") {
  RayClassGroup G = RayClassGroup::compute(reference_modulus());
  CHECK(G.invariants() == std::vector<Int>{2, 2, 12, 36});
  CHECK(G.residue_unit_count() == 10368);
  CHECK(G.residue_unit_count() == phi(reference_modulus()));
  CHECK(G.unit_image_order() == 6);
  CHECK(G.order() == 1728);
}

TEST_CASE("group orders match the unit count formula") {
  for (auto [d, text] : std::vector<std::pair<int, std::string>>{
           {3, "p2"}, {3, "p3^3"}, {3, "p7.1,p7.2"}, {1, "p2^5"}, {1, "p5.1^2,p3"}, {7, "p2.1^3,p11.2"}, {2, "p3.1,p2^2"}}) {
    const QuadField& K = QuadField::get(d);
    Modulus m = Modulus::parse(K, text);
    RayClassGroup G = RayClassGroup::compute(m);
    CHECK(G.residue_unit_count() == phi(m));
    CHECK(G.order() * Int(static_cast<unsigned long>(G.unit_image_order())) == Int(static_cast<unsigned long>(phi(m))));
    for (std::size_t i = 0; i + 1 < G.invariants().size(); ++i) CHECK(G.invariants()[i + 1] % G.invariants()[i] == 0);
  }
  CHECK_THROWS_AS(RayClassGroup::compute(reference_modulus(), 1000), Error);
}

TEST_CASE("discrete log is a homomorphism and kills units") {
  RayClassGroup G = RayClassGroup::compute(reference_modulus());
  const auto& inv = G.invariants();
  auto reduce = [&](std::vector<Int> v) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = ((v[i] % inv[i]) + inv[i]) % inv[i];
    return v;
  };
  int tested = 0;
  while (tested < 100) {
    QuadElement x = rand_element(K3(), 400), y = rand_element(K3(), 400);
    bool ok = true;
    for (const auto& [P, e] : G.modulus().factors) ok = ok && !P.contains(x) && !P.contains(y);
    if (!ok) continue;
    auto lx = G.dlog(x), ly = G.dlog(y), lxy = G.dlog(x * y);
    std::vector<Int> sum(lx.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = lx[i] + ly[i];
    CHECK(reduce(sum) == reduce(lxy));
    for (const auto& u : K3().units()) CHECK(reduce(G.dlog(u * x)) == reduce(lx));
    ++tested;
  }
  for (std::size_t i = 0; i < G.generators().size(); ++i) {
    auto v = G.dlog(G.generators()[i]);
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(v[k] == (k == i ? 1 : 0));
  }
  CHECK_THROWS_AS(G.dlog(K3().prime_by_label(19, 1)), Error);
}

TEST_CASE("characters are well defined on ideals") {
  RayClassGroup G = RayClassGroup::compute(reference_modulus());
  for (int n : {2, 3}) {
    auto basis = character_basis(G, n);
    CHECK(basis.size() == (n == 2 ? 4u : 2u));
    for (const auto& chi : all_characters(G, n))
      for (const auto& P : K3().primes_up_to_norm(300)) {
        if (!G.modulus().coprime_to(P)) continue;
        int v = chi.eval(G, P);
        for (const auto& u : K3().units()) CHECK(chi.eval(G, u * P.gen) == v);
      }
    CHECK(all_characters(G, n).size() == static_cast<std::size_t>(std::pow(n, basis.size())));
  }
}

TEST_CASE("spanning set for the quadratic characters") {
  RayClassGroup G = RayClassGroup::compute(reference_modulus());
  auto basis = character_basis(G, 2);
  auto r = spanning_check(G, basis, span_set());
  CHECK(r.spans);
  CHECK(r.rank == 4);
  auto partial = span_set();
  partial.pop_back();
  partial.pop_back();
  CHECK_FALSE(spanning_check(G, basis, partial).spans);
  CHECK_FALSE(spanning_check(G, basis, {}).spans);
}

TEST_CASE("deciding sets") {
  RayClassGroup G = RayClassGroup::compute(reference_modulus());
  auto basis = character_basis(G, 2);
  auto stream = K3().primes_up_to_norm(2000);
  DecidingSet D = find_deciding_set(G, basis, stream, stream.size());
  CHECK(D.primes.size() == 15);
  CHECK(deciding_cover_check(G, basis, D.primes).covers);
  CHECK_FALSE(deciding_cover_check(G, basis, span_set()).covers);
  CHECK_THROWS_AS(find_deciding_set(G, basis, stream, 3), Error);
}
