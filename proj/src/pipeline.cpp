#include "qms/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "qms/galois.hpp"
#include "qms/rayclass.hpp"

namespace qms {

void RunConfig::validate() const {
  if (trace_bound < 1 || square_bound < 1 || height < 1)
    throw Error(ErrorKind::InvalidArgument, "bounds must be positive");
  if (jobs < 0) throw Error(ErrorKind::InvalidArgument, "jobs must be at least 1");
}

void ResultsStore::append(nlohmann::json record) const {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::ostringstream ts;
  ts << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
  record["timestamp"] = ts.str();
  if (auto dir = std::filesystem::path(path_).parent_path(); !dir.empty()) std::filesystem::create_directories(dir);
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write results store " + path_);
  out << record.dump() << "\n";
}

std::vector<nlohmann::json> ResultsStore::read_all() const {
  std::vector<nlohmann::json> out;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<PrimeIdeal> primes_of_j(const JInvariant& J) {
  const QuadField& K = J.j.field();
  std::set<std::uint64_t> ps;
  Int num_norm = J.j.numerator().norm();
  Int den_abs = J.j.den();
  for (const Int* x : std::initializer_list<const Int*>{&num_norm, &den_abs}) {
    if (*x <= 1) continue;
    for (const auto& [p, e] : arith::factor(*x)) ps.insert(p.get_ui());
  }
  std::vector<PrimeIdeal> out;
  for (std::uint64_t p : ps) {
    if (p == 2 || p == 3) continue;
    for (const auto& P : K.split_prime(p))
      if (potential_reduction(J, P) == ReductionOutlook::Bad) out.push_back(P);
  }
  return out;
}

nlohmann::json SearchCandidate::to_json() const {
  nlohmann::json bad = nlohmann::json::array();
  for (const auto& P : bad_primes) bad.push_back(P.label());
  auto abs = invariants.absolute();
  return {{"point", point.to_string()},
          {"j", j.j.to_string()},
          {"bad_primes", bad},
          {"igusa_clebsch",
           {invariants.I2.to_string(), invariants.I4.to_string(), invariants.I6.to_string(), invariants.I10.to_string()}},
          {"absolute", {{"kind", abs.kind}, {"values", {abs.values[0].to_string(), abs.values[1].to_string(), abs.values[2].to_string()}}}}};
}

std::vector<SearchCandidate> cmd_search(const QuadField& K, int height, const std::set<std::uint64_t>& allowed,
                                        const std::function<void(const SearchCandidate&)>& emit) {
  if (!splits_quaternion(K, 6))
    throw Error(ErrorKind::FieldDoesNotSplit, K.label() + " does not split the discriminant 6 quaternion algebra");
  auto base = find_base_point(K, 6);
  if (!base) throw Error(ErrorKind::FieldDoesNotSplit, "no base point on X_6 over " + K.label());
  std::vector<SearchCandidate> out;
  std::set<std::string> seen;
  const QuadFraction degenerate = QuadFraction(K, -16) * Rat(1, 27);
  for_each_conic_point(*base, height, [&](const ConicPoint& P) {
    if (P.coords[0].is_zero()) return;
    JInvariant j = j_from_point(P);
    if (j.j.is_zero() || j.j == degenerate) return;
    if (!seen.insert(j.j.to_string()).second) return;
    auto bad = primes_of_j(j);
    for (const auto& Q : bad)
      if (!allowed.count(Q.p)) return;
    SearchCandidate c{P, j, bad, family_invariants_closed_form(j.j)};
    if (emit) emit(c);
    out.push_back(std::move(c));
  });
  return out;
}

// ---------------------------------------------------------------------------

Modulus residual_modulus(const NewformRecord& form) {
  const QuadField& K = *form.field;
  std::vector<std::pair<PrimeIdeal, int>> f;
  for (const auto& P : K.split_prime(2)) f.emplace_back(P, 2 * P.e + 1);
  for (const auto& [P, e] : form.level) {
    if (P.p == 2) continue;
    f.emplace_back(P, P.p == 3 ? (3 * P.e) / 2 + 1 : 1);
  }
  return Modulus(K, std::move(f));
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : stages) {
    nlohmann::json j{{"stage", s.stage}, {"passed", s.passed}, {"evidence", s.evidence}};
    if (s.error) j["error"] = std::string(to_string(*s.error));
    st.push_back(j);
  }
  return {{"stages", st}, {"exit_code", exit_code}, {"verified", exit_code == 0}};
}

namespace {

constexpr std::uint64_t kProbeBound = 1000;

int exit_code_for(ErrorKind k) { return is_verification_failure(k) ? 1 : 2; }

std::vector<PrimeIdeal> good_primes_coprime(const TraceTable& T, const Modulus& m, std::uint64_t bound) {
  std::vector<PrimeIdeal> out;
  for (const auto& r : T.records)
    if (r.q <= bound && m.coprime_to(r.prime)) out.push_back(r.prime);
  return out;
}

// Greedy spanning set among primes with odd curve trace.
std::vector<PrimeIdeal> auto_span(const RayClassGroup& G, const TraceTable& T, const std::vector<PrimeIdeal>& primes) {
  const auto basis = character_basis(G, 2);
  std::vector<PrimeIdeal> S;
  int rank = 0;
  for (const auto& P : primes) {
    if (rank == static_cast<int>(basis.size())) break;
    const EulerRecord* r = T.find(P);
    if (!r || r->a % 2 == 0) continue;
    S.push_back(P);
    int nr = spanning_check(G, basis, S).rank;
    if (nr > rank)
      rank = nr;
    else
      S.pop_back();
  }
  return S;
}

}  // namespace

VerifyReport cmd_verify(const RunConfig& config, const GenusTwoCurve& C, const NewformRecord& form,
                        const ResidualSetup& setup) {
  config.validate();
  VerifyReport rep;
  if (!(C.field() == *form.field)) {
    rep.stages.push_back({"input", false, {{"message", "curve and form are over different fields"}}, ErrorKind::FieldMismatch});
    rep.exit_code = 2;
    return rep;
  }
  auto fail = [&](const std::string& stage, const Error& e, nlohmann::json evidence = {}) {
    evidence["message"] = e.what();
    rep.stages.push_back({stage, false, evidence, e.kind()});
    rep.exit_code = exit_code_for(e.kind());
    return rep;
  };

  // 1. traces
  TraceTable T;
  try {
    // the residual stage probes up to norm 1000 whatever the comparison bound
    T = trace_table(C, std::max<std::uint64_t>(config.trace_bound, kProbeBound),
                    std::min(config.square_bound, config.trace_bound), config.jobs);
    nlohmann::json ev{{"bound", T.bound}, {"good_primes", T.records.size()}, {"bad_primes", T.bad.size()}};
    for (const auto& b : T.bad) {
      if (b.reason.rfind("NotQMShape", 0) == 0)
        return fail("trace-table", Error(ErrorKind::NotQMShape, b.prime.label() + ": " + b.reason), ev);
    }
    rep.stages.push_back({"trace-table", true, ev, std::nullopt});
  } catch (const Error& e) {
    return fail("trace-table", e);
  }

  // 2. genuineness
  try {
    auto g = genuineness_test(T);
    if (!g.genuine)
      return fail("genuineness", Error(ErrorKind::Inconsistent, "no conjugate pair separates the traces"), g.to_json());
    rep.stages.push_back({"genuineness", true, g.to_json(), std::nullopt});
  } catch (const Error& e) {
    return fail("genuineness", e);
  }

  // 3. residual representation
  try {
    Modulus m = setup.modulus ? *setup.modulus : residual_modulus(form);
    RayClassGroup G = RayClassGroup::compute(m);
    auto candidates = good_primes_coprime(T, m, kProbeBound);
    // S and the separator need traces on both sides.
    std::vector<PrimeIdeal> both;
    for (const auto& P : candidates)
      if (eigenvalue(form, P)) both.push_back(P);
    std::vector<PrimeIdeal> S = setup.span;
    if (S.empty()) {
      S = auto_span(G, T, both);
      if (!spanning_check(G, character_basis(G, 2), S).spans)
        throw Error(ErrorKind::MissingEigenvalue, "newform eigenvalues do not reach a spanning set for " + m.to_string());
    }
    std::optional<PrimeIdeal> sep = setup.separator;
    if (!sep) {
      Character psi = identify_cubic_character(G, parity_oracle(trace_source(T)), candidates);
      for (const auto& P : both) {
        if (psi.eval(G, P) == 0 && complete_cubic_basis(G, psi, P)) {
          sep = P;
          break;
        }
      }
      if (!sep) throw Error(ErrorKind::MissingEigenvalue, "newform eigenvalues do not reach a separating prime");
    }
    auto v = residual_isomorphism_check(trace_source(T), trace_source(form), G, S, *sep, candidates);
    rep.stages.push_back({"residual", true, v.to_json(G, S, *sep), std::nullopt});
  } catch (const Error& e) {
    return fail("residual", e);
  }

  // 4. trace comparison
  try {
    LivneConfig lc;
    lc.bound = config.trace_bound;
    lc.min_bound = std::min<std::uint64_t>(lc.min_bound, config.trace_bound);
    if (config.twist_prime) {
      Modulus tp = Modulus::parse(C.field(), *config.twist_prime);
      if (tp.factors.size() != 1 || tp.factors[0].second != 1)
        throw Error(ErrorKind::InvalidArgument, "twist prime must be a single prime");
      lc.twist_prime = tp.factors[0].first;
    }
    if (!lc.twist_prime && !default_twist_prime(C.field()))
      throw Error(ErrorKind::InvalidArgument, C.field().label() + " needs an explicit twist prime");
    auto lr = livne_verify(T, form, lc);
    nlohmann::json ev = lr.to_json();
    rep.stages.push_back({"livne", true, ev, std::nullopt});
  } catch (const Error& e) {
    return fail("livne", e);
  }
  rep.exit_code = 0;
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<ReferenceCase> reference_cases(const std::string& dir) {
  auto path = [&](const std::string& rel) { return (std::filesystem::path(dir) / rel).string(); };
  return {
      {"C1", path("curves/C1.json"), path("newforms/2.0.4.1-34225.3-a.json"), {"p5.1", "p37.2"}, "p3", {}, std::nullopt},
      {"C2",
       path("curves/C2.json"),
       path("newforms/2.0.3.1-61009.1-a.json"),
       {"p13.1", "p19.1"},
       std::nullopt,
       {"p7.1", "p7.2", "p13.2", "p19.2", "p5"},
       "p37.1"},
      {"C3", path("curves/C3.json"), path("newforms/2.0.3.1-67081.3-a.json"), {"p7.1", "p37.2"}, std::nullopt, {}, std::nullopt},
      {"C4", path("curves/C4.json"), path("newforms/2.0.3.1-123201.1-b.json"), {"p3", "p13.1"}, std::nullopt, {}, std::nullopt},
  };
}

namespace {

PrimeIdeal prime_from_label(const QuadField& K, const std::string& label) {
  Modulus m = Modulus::parse(K, label);
  if (m.factors.size() != 1) throw Error(ErrorKind::InvalidArgument, "bad prime label " + label);
  return m.factors[0].first;
}

}  // namespace

SuiteResult cmd_reference_suite(const RunConfig& config, const std::vector<ReferenceCase>& cases) {
  SuiteResult res;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& pc : cases) {
    ++res.total;
    nlohmann::json row{{"curve", pc.name}};
    if (!std::filesystem::exists(pc.curve_file)) throw Error(ErrorKind::FixtureMissing, pc.curve_file);
    if (!std::filesystem::exists(pc.newform_file)) throw Error(ErrorKind::FixtureMissing, pc.newform_file);
    GenusTwoCurve C = GenusTwoCurve::load(pc.curve_file);
    NewformRecord form = parse_newform_file(pc.newform_file);
    row["newform"] = form.label;

    // stated conductor support inside the discriminant support and equal to the level support
    auto support = bad_prime_support(C);
    bool contained = true;
    std::set<std::string> level;
    for (const auto& [P, e] : form.level) level.insert(P.label());
    for (const auto& lab : pc.conductor_support) {
      PrimeIdeal P = prime_from_label(C.field(), lab);
      if (std::find(support.begin(), support.end(), P) == support.end()) contained = false;
    }
    std::set<std::string> stated(pc.conductor_support.begin(), pc.conductor_support.end());
    row["conductor_support"] = {{"passed", contained && stated == level}, {"stated", pc.conductor_support}};

    RunConfig cfg = config;
    if (pc.twist_prime) cfg.twist_prime = pc.twist_prime;
    ResidualSetup setup;
    for (const auto& lab : pc.span) setup.span.push_back(prime_from_label(C.field(), lab));
    if (pc.separator) setup.separator = prime_from_label(C.field(), *pc.separator);
    VerifyReport vr = cmd_verify(cfg, C, form, setup);
    for (const auto& s : vr.stages) {
      nlohmann::json cell{{"passed", s.passed}};
      if (s.error) cell["error"] = s.evidence.value("message", "");
      if (s.stage == "genuineness" && s.passed) cell["witness"] = s.evidence;
      if (s.stage == "livne" && s.passed) cell["compared"] = s.evidence["compared"];
      row[s.stage] = cell;
    }
    const bool support_ok = row["conductor_support"]["passed"].get<bool>();
    const bool ok = vr.exit_code == 0 && support_ok;
    row["verified"] = ok;
    if (!support_ok || vr.exit_code == 1)
      res.exit_code = 1;
    else if (vr.exit_code != 0 && res.exit_code == 0)
      res.exit_code = 2;
    if (ok) ++res.verified;
    rows.push_back(row);
  }
  res.summary = {{"cases", rows},
                 {"verified", res.verified},
                 {"total", res.total},
                 {"trace_bound", config.trace_bound},
                 {"square_check_bound", config.square_bound}};
  return res;
}

}  // namespace qms
