#pragma once

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qms/counting.hpp"
#include "qms/newform.hpp"
#include "qms/rayclass.hpp"

namespace qms {

// a_P lookup; nullopt when the source has no value at P.
using TraceSource = std::function<std::optional<std::int64_t>(const PrimeIdeal&)>;

TraceSource trace_source(const TraceTable& T);
TraceSource trace_source(const NewformRecord& form);

enum class Splitting { Trivial, OrderThree };
using SplittingOracle = std::function<Splitting(const PrimeIdeal&)>;

// Even trace <=> trivial residual Frobenius (image C_3 in GL_2(F_2)).
SplittingOracle parity_oracle(const TraceSource& traces);

Character identify_cubic_character(const RayClassGroup& G, const SplittingOracle& oracle,
                                   const std::vector<PrimeIdeal>& probes);

// A cubic character independent of psi that is nonzero at P.
std::optional<Character> complete_cubic_basis(const RayClassGroup& G, const Character& psi, const PrimeIdeal& P);

struct ResidualVerdict {
  bool isomorphic = false;
  Character psi;
  Character chi1;
  SpanningResult spanning;
  std::vector<int> curve_parities;
  std::vector<int> form_parities;
  int curve_parity_at_separator = 0;
  int form_parity_at_separator = 0;
  nlohmann::json to_json(const RayClassGroup& G, const std::vector<PrimeIdeal>& S, const PrimeIdeal& sep) const;
};

// Throws ProbeFailure naming every failed condition.
ResidualVerdict residual_isomorphism_check(const TraceSource& curve, const TraceSource& form, const RayClassGroup& G,
                                           const std::vector<PrimeIdeal>& S_span, const PrimeIdeal& separator,
                                           const std::vector<PrimeIdeal>& probes);

struct LivneConfig {
  std::uint64_t bound = 3000;
  // The bound must reach the largest deciding-set norm being replaced.
  std::uint64_t min_bound = 2917;
  std::optional<PrimeIdeal> twist_prime;
};

struct LivneComparison {
  PrimeIdeal prime;
  std::int64_t a_first;
  std::int64_t a_second;
};

struct LivneReport {
  bool verified = false;
  std::vector<LivneComparison> log;
  std::optional<LivneComparison> twist;
  std::string verdict;
  nlohmann::json to_json() const;
};

// Inert prime over 5 for Q(sqrt(-3)); other fields need an explicit choice.
std::optional<PrimeIdeal> default_twist_prime(const QuadField& K);

// Compares a_P at every listed prime; symmetric in the two sources.
LivneReport livne_compare(const TraceSource& first, const TraceSource& second, const std::vector<PrimeIdeal>& primes,
                          const LivneConfig& config);
LivneReport livne_verify(const TraceTable& curve_traces, const NewformRecord& form, const LivneConfig& config);

}  // namespace qms
