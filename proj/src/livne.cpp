#include "qms/livne.hpp"

#include <set>

#include "qms/error.hpp"

namespace qms {

TraceSource trace_source(const TraceTable& T) {
  return [&T](const PrimeIdeal& P) -> std::optional<std::int64_t> {
    if (const EulerRecord* r = T.find(P)) return r->a;
    return std::nullopt;
  };
}

TraceSource trace_source(const NewformRecord& form) {
  return [&form](const PrimeIdeal& P) { return eigenvalue(form, P); };
}

SplittingOracle parity_oracle(const TraceSource& traces) {
  return [traces](const PrimeIdeal& P) {
    auto a = traces(P);
    if (!a) throw Error(ErrorKind::MissingPrime, "no trace at " + P.label());
    return (*a % 2 == 0) ? Splitting::Trivial : Splitting::OrderThree;
  };
}

Character identify_cubic_character(const RayClassGroup& G, const SplittingOracle& oracle,
                                   const std::vector<PrimeIdeal>& probes) {
  std::vector<std::pair<std::vector<int>, bool>> obs;
  const auto basis = character_basis(G, 3);
  for (const auto& P : probes) {
    if (!G.modulus().coprime_to(P)) continue;
    obs.emplace_back(evaluation_vector(G, basis, P), oracle(P) == Splitting::Trivial);
  }
  std::vector<Character> matches;
  for (const auto& ch : all_characters(G, 3)) {
    if (ch.is_trivial()) continue;
    std::vector<int> c;
    for (const auto& b : basis) {
      for (std::size_t i = 0; i < b.coeffs.size(); ++i)
        if (b.coeffs[i]) c.push_back(ch.coeffs[i]);
    }
    bool ok = true;
    for (const auto& [v, trivial] : obs) {
      int s = 0;
      for (std::size_t i = 0; i < v.size(); ++i) s += c[i] * v[i];
      if ((s % 3 == 0) != trivial) {
        ok = false;
        break;
      }
    }
    if (ok) matches.push_back(ch);
  }
  if (matches.empty()) throw Error(ErrorKind::Inconsistent, "no cubic character matches the splitting data");
  if (matches.size() > 2) throw Error(ErrorKind::Inconsistent, "probe set does not separate the cubic characters");
  // psi and psi^-1 describe the same field; report the one with leading coefficient 1
  for (const auto& m : matches) {
    for (int c : m.coeffs) {
      if (c == 0) continue;
      if (c == 1) return m;
      break;
    }
  }
  return matches.front();
}

std::optional<Character> complete_cubic_basis(const RayClassGroup& G, const Character& psi, const PrimeIdeal& P) {
  for (const auto& ch : all_characters(G, 3)) {
    if (ch.is_trivial()) continue;
    if (ch == psi || ch == psi.scaled(2)) continue;
    if (ch.eval(G, P) != 0) return ch;
  }
  return std::nullopt;
}

nlohmann::json ResidualVerdict::to_json(const RayClassGroup& G, const std::vector<PrimeIdeal>& S,
                                        const PrimeIdeal& sep) const {
  nlohmann::json span = nlohmann::json::array();
  for (std::size_t i = 0; i < S.size(); ++i) span.push_back({{"prime", S[i].label()}, {"chi", spanning.matrix[i]}});
  return {{"verdict", isomorphic ? "isomorphic-C3" : "probe-failure"},
          {"ray_class_group", G.to_json()},
          {"spanning_set", span},
          {"spanning_rank", spanning.rank},
          {"curve_parities", curve_parities},
          {"form_parities", form_parities},
          {"separator", sep.label()},
          {"psi", psi.to_string()},
          {"psi_at_separator", psi.eval(G, sep)},
          {"chi1", chi1.to_string()},
          {"chi1_at_separator", chi1.eval(G, sep)},
          {"curve_parity_at_separator", curve_parity_at_separator},
          {"form_parity_at_separator", form_parity_at_separator}};
}

ResidualVerdict residual_isomorphism_check(const TraceSource& curve, const TraceSource& form, const RayClassGroup& G,
                                           const std::vector<PrimeIdeal>& S_span, const PrimeIdeal& separator,
                                           const std::vector<PrimeIdeal>& probes) {
  ResidualVerdict v;
  std::vector<std::string> failures;
  auto parity = [](std::optional<std::int64_t> a) { return a ? static_cast<int>(((*a % 2) + 2) % 2) : -1; };

  v.spanning = spanning_check(G, character_basis(G, 2), S_span);
  if (!v.spanning.spans) failures.push_back("quadratic characters at S do not span");
  for (const auto& P : S_span) {
    v.curve_parities.push_back(parity(curve(P)));
    v.form_parities.push_back(parity(form(P)));
    if (v.curve_parities.back() != 1) failures.push_back("curve trace at " + P.label() + " is not odd");
    if (v.form_parities.back() != 1) failures.push_back("form trace at " + P.label() + " is not odd");
  }
  try {
    v.psi = identify_cubic_character(G, parity_oracle(curve), probes);
    if (v.psi.eval(G, separator) != 0) failures.push_back("psi_A is nonzero at " + separator.label());
    if (auto chi = complete_cubic_basis(G, v.psi, separator))
      v.chi1 = *chi;
    else
      failures.push_back("no cubic character independent of psi_A is nonzero at " + separator.label());
  } catch (const Error& e) {
    failures.push_back(std::string("cubic character identification: ") + e.what());
  }
  v.curve_parity_at_separator = parity(curve(separator));
  v.form_parity_at_separator = parity(form(separator));
  if (v.curve_parity_at_separator != 0) failures.push_back("curve trace at " + separator.label() + " is not even");
  if (v.form_parity_at_separator != 0) failures.push_back("form trace at " + separator.label() + " is not even");

  if (!failures.empty()) {
    std::string msg;
    for (const auto& f : failures) msg += (msg.empty() ? "" : "; ") + f;
    throw Error(ErrorKind::ProbeFailure, msg);
  }
  v.isomorphic = true;
  return v;
}

std::optional<PrimeIdeal> default_twist_prime(const QuadField& K) {
  if (K.d() == 3) return K.split_prime(5).front();
  return std::nullopt;
}

nlohmann::json LivneReport::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& c : log) entries.push_back({{"prime", c.prime.label()}, {"a", c.a_first}, {"a_form", c.a_second}});
  nlohmann::json j{{"verdict", verdict}, {"verified", verified}, {"compared", log.size()}, {"log", entries}};
  if (twist) j["twist"] = {{"prime", twist->prime.label()}, {"a", twist->a_first}, {"a_form", twist->a_second}};
  return j;
}

LivneReport livne_compare(const TraceSource& first, const TraceSource& second, const std::vector<PrimeIdeal>& primes,
                          const LivneConfig& config) {
  if (config.bound == 0 || config.bound < config.min_bound)
    throw Error(ErrorKind::InvalidArgument, "bound " + std::to_string(config.bound) +
                                                " does not reach the largest deciding norm " +
                                                std::to_string(config.min_bound));
  if (!config.twist_prime) throw Error(ErrorKind::InvalidArgument, "a twist-elimination prime is required");
  LivneReport rep;
  for (const auto& P : primes) {
    if (P.norm() > config.bound) continue;
    auto a = first(P), b = second(P);
    if (!a || !b)
      throw Error(ErrorKind::MissingEigenvalue, "no value at " + P.label() + (a ? " in the second source" : " in the first source"));
    if (*a != *b)
      throw Error(ErrorKind::TraceMismatch,
                  P.label() + ": " + std::to_string(*a) + " vs " + std::to_string(*b));
    rep.log.push_back({P, *a, *b});
  }
  const PrimeIdeal& tp = *config.twist_prime;
  auto a = first(tp), b = second(tp);
  if (!a || !b) throw Error(ErrorKind::MissingEigenvalue, "no value at twist prime " + tp.label());
  if (*a != *b)
    throw Error(ErrorKind::TraceMismatch, "twist prime " + tp.label() + ": " + std::to_string(*a) + " vs " + std::to_string(*b));
  rep.twist = LivneComparison{tp, *a, *b};
  rep.verified = true;
  rep.verdict = "verified-up-to-semisimplification";
  return rep;
}

LivneReport livne_verify(const TraceTable& curve_traces, const NewformRecord& form, const LivneConfig& config) {
  if (!curve_traces.records.empty() && !(*curve_traces.records.front().prime.K == *form.field))
    throw Error(ErrorKind::FieldMismatch, "curve and form live over different fields");
  LivneConfig cfg = config;
  if (!cfg.twist_prime) cfg.twist_prime = default_twist_prime(*form.field);
  if (curve_traces.bound < cfg.bound)
    throw Error(ErrorKind::InvalidArgument, "trace table only reaches norm " + std::to_string(curve_traces.bound));
  std::vector<PrimeIdeal> primes;
  for (const auto& r : curve_traces.records) primes.push_back(r.prime);
  return livne_compare(trace_source(curve_traces), trace_source(form), primes, cfg);
}

}  // namespace qms
