#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "qms/curve.hpp"
#include "qms/finite_field.hpp"

namespace qms {

struct EulerRecord {
  PrimeIdeal prime;
  std::uint64_t q = 0;
  std::uint64_t n1 = 0;
  std::optional<std::uint64_t> n2;
  std::int64_t a = 0;
  bool good = true;
  // 1 + c1 t + c2 t^2 + q c1 t^3 + q^2 t^4 when n2 is known.
  std::vector<Int> lpoly;
};

struct BadPrime {
  PrimeIdeal prime;
  std::string reason;
};

struct TraceTable {
  std::string curve_id;
  std::uint64_t bound = 0;
  std::uint64_t square_check_bound = 0;
  std::vector<EulerRecord> records;
  std::vector<BadPrime> bad;

  const EulerRecord* find(const PrimeIdeal& P) const;
  nlohmann::json to_json() const;
};

// Reason the integral model cannot be counted at P, if any.
std::optional<std::string> counting_obstruction(const GenusTwoCurve& C, const PrimeIdeal& P);

// #C(F) on the smooth model: sum over x of 1 + chi(f(x)) plus the points at infinity.
std::uint64_t count_points(const GenusTwoCurve& C, const ResidueField& F);
// Plain double loop over (x, y); quadratic in q, for testing.
std::uint64_t count_points_reference(const GenusTwoCurve& C, const ResidueField& F);

EulerRecord euler_record(const GenusTwoCurve& C, const PrimeIdeal& P, bool with_square_check);

// jobs = 0 uses the OpenMP default.
TraceTable trace_table(const GenusTwoCurve& C, std::uint64_t bound, std::uint64_t square_check_bound, int jobs = 0);

std::vector<PrimeIdeal> bad_prime_support(const GenusTwoCurve& C);

struct GenuinenessVerdict {
  bool genuine = false;
  std::optional<PrimeIdeal> witness;
  std::optional<PrimeIdeal> witness_conjugate;
  std::int64_t a = 0;
  std::int64_t a_conjugate = 0;
  nlohmann::json to_json() const;
};

GenuinenessVerdict genuineness_test(const TraceTable& T);

nlohmann::json prime_to_json(const PrimeIdeal& P);

}  // namespace qms
