#include <doctest.h>

#include <map>

#include "qms/error.hpp"
#include "qms/livne.hpp"
#include "support.hpp"

using namespace qms;
using namespace qms::test;

namespace {

const QuadField& K3() { return QuadField::get(3); }

TraceSource from_map(std::map<std::string, std::int64_t> m) {
  return [m](const PrimeIdeal& P) -> std::optional<std::int64_t> {
    auto it = m.find(P.label());
    if (it == m.end()) return std::nullopt;
    return it->second;
  };
}

std::vector<PrimeIdeal> span_set() {
  const QuadField& K = K3();
  return {K.prime_by_label(7, 1), K.prime_by_label(7, 2), K.prime_by_label(13, 2), K.prime_by_label(19, 2),
          K.prime_by_label(5, 0)};
}

}  // namespace

TEST_CASE("default twist primes") {
  auto tp = default_twist_prime(K3());
  REQUIRE(tp);
  CHECK(tp->label() == "p5");
  CHECK(tp->inert());
  CHECK_FALSE(default_twist_prime(QuadField::get(1)));
}

TEST_CASE("trace comparison") {
  const QuadField& K = K3();
  auto primes = K.primes_up_to_norm(50);
  std::map<std::string, std::int64_t> a, b;
  for (const auto& P : primes) a[P.label()] = b[P.label()] = static_cast<std::int64_t>(P.norm() % 5) - 2;
  LivneConfig cfg;
  cfg.bound = 50;
  cfg.min_bound = 50;
  cfg.twist_prime = K.prime_by_label(5, 0);
  auto rep = livne_compare(from_map(a), from_map(b), primes, cfg);
  CHECK(rep.verified);
  CHECK(rep.log.size() == primes.size());
  REQUIRE(rep.twist);
  CHECK(rep.twist->prime.label() == "p5");
  CHECK(livne_compare(from_map(b), from_map(a), primes, cfg).log.size() == rep.log.size());

  auto expect_kind = [&](const TraceSource& x, const TraceSource& y, const LivneConfig& c, ErrorKind kind) {
    try {
      livne_compare(x, y, primes, c);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == kind);
    }
  };
  auto c = b;
  c["p43.2"] += 2;
  expect_kind(from_map(a), from_map(c), cfg, ErrorKind::TraceMismatch);
  expect_kind(from_map(c), from_map(a), cfg, ErrorKind::TraceMismatch);
  auto missing = b;
  missing.erase("p31.1");
  expect_kind(from_map(a), from_map(missing), cfg, ErrorKind::MissingEigenvalue);
  LivneConfig low = cfg;
  low.min_bound = 2917;
  expect_kind(from_map(a), from_map(b), low, ErrorKind::InvalidArgument);
  LivneConfig no_twist = cfg;
  no_twist.twist_prime.reset();
  expect_kind(from_map(a), from_map(b), no_twist, ErrorKind::InvalidArgument);
  // a discrepancy at the twist prime alone is still caught
  auto d = b;
  d["p5"] = -d["p5"] + 1;
  expect_kind(from_map(a), from_map(d), cfg, ErrorKind::TraceMismatch);
}

TEST_CASE("livne_verify checks bounds and fields") {
  TraceTable T = trace_table(curve(2), 60, 0);
  LivneConfig cfg;
  cfg.bound = 60;
  cfg.min_bound = 60;
  auto rep = livne_verify(T, form(2), cfg);
  CHECK(rep.verified);
  cfg.bound = 100;
  cfg.min_bound = 100;
  CHECK_THROWS_AS(livne_verify(T, form(2), cfg), Error);
  cfg.bound = 60;
  cfg.min_bound = 60;
  CHECK_THROWS_AS(livne_verify(T, form(1), cfg), Error);
  // wrong newform over the same field
  try {
    livne_verify(T, form(3), cfg);
    FAIL("expected TraceMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TraceMismatch);
  }
}

TEST_CASE("residual cubic character for C2") {
  RayClassGroup G = RayClassGroup::compute(Modulus::parse(K3(), "p2^3,p13.1,p19.1"));
  TraceTable T = trace_table(curve(2), 1000, 0);
  std::vector<PrimeIdeal> probes;
  for (const auto& r : T.records)
    if (G.modulus().coprime_to(r.prime)) probes.push_back(r.prime);
  Character psi = identify_cubic_character(G, parity_oracle(trace_source(T)), probes);
  const PrimeIdeal sep = K3().prime_by_label(37, 1);
  CHECK(psi.eval(G, sep) == 0);
  auto chi1 = complete_cubic_basis(G, psi, sep);
  REQUIRE(chi1);
  CHECK(chi1->eval(G, sep) != 0);
  // psi predicts every parity up to 1000
  for (const auto& P : probes) CHECK((psi.eval(G, P) == 0) == (T.find(P)->a % 2 == 0));

  NewformRecord f = form(2);
  auto v = residual_isomorphism_check(trace_source(T), trace_source(f), G, span_set(), sep, probes);
  CHECK(v.isomorphic);
  CHECK(v.spanning.spans);
  CHECK(v.curve_parities == std::vector<int>{1, 1, 1, 1, 1});
  CHECK(v.curve_parity_at_separator == 0);

  // a separator where psi does not vanish fails
  CHECK_THROWS_AS(residual_isomorphism_check(trace_source(T), trace_source(f), G, span_set(), K3().prime_by_label(7, 1), probes),
                  Error);
}

TEST_CASE("inconsistent splitting data") {
  RayClassGroup G = RayClassGroup::compute(Modulus::parse(K3(), "p2^3,p13.1,p19.1"));
  std::vector<PrimeIdeal> probes;
  for (const auto& P : K3().primes_up_to_norm(400))
    if (G.modulus().coprime_to(P)) probes.push_back(P);
  // everything trivial except one prime cannot come from a cubic character
  SplittingOracle odd_one = [&](const PrimeIdeal& P) {
    return P == probes[3] ? Splitting::OrderThree : Splitting::Trivial;
  };
  CHECK_THROWS_AS(identify_cubic_character(G, odd_one, probes), Error);
}
