#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "qms/counting.hpp"
#include "qms/galois.hpp"
#include "qms/invariants.hpp"
#include "qms/livne.hpp"
#include "qms/newform.hpp"
#include "qms/pipeline.hpp"
#include "qms/rayclass.hpp"
#include "qms/shimura.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using nlohmann::json;
using namespace qms;

namespace {

struct Globals {
  std::string field = "2.0.3.1";
  std::string out;
  int jobs = 0;
  bool offline = false;
  std::string format = "json";
};

void emit(const Globals& g, const json& doc) {
  std::string text = doc.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + g.out);
  f << text;
}

std::set<std::uint64_t> parse_rational_primes(const std::string& text) {
  std::set<std::uint64_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::uint64_t p = std::stoull(tok);
    if (!arith::is_prime(p)) throw Error(ErrorKind::InvalidArgument, tok + " is not prime");
    out.insert(p);
  }
  return out;
}

PrimeIdeal single_prime(const QuadField& K, const std::string& text) {
  Modulus m = Modulus::parse(K, text);
  if (m.factors.size() != 1 || m.factors[0].second != 1)
    throw Error(ErrorKind::InvalidArgument, "expected a single prime, got " + text);
  return m.factors[0].first;
}

std::vector<PrimeIdeal> prime_list(const QuadField& K, const std::string& text) {
  std::vector<PrimeIdeal> out;
  if (text.empty()) return out;
  for (const auto& [P, e] : Modulus::parse(K, text).factors) out.push_back(P);
  return out;
}

json support_json(const std::vector<PrimeIdeal>& ps) {
  json a = json::array();
  for (const auto& P : ps) a.push_back(P.label());
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modularity checks for QM abelian surfaces over imaginary quadratic fields"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--field", g.field, "Field label, e.g. 2.0.3.1")->capture_default_str();
  app.add_option("--out", g.out, "Write output to this file");
  app.add_option("--jobs", g.jobs, "Worker threads (0: OpenMP default)");
  app.add_flag("--offline", g.offline, "Never touch the network");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json"}));
  app.fallthrough();

  std::function<void()> action;

  // conic
  auto* conic = app.add_subcommand("conic", "Points on the Shimura conics");
  conic->require_subcommand(1);
  int disc = 6, height = 3;
  auto* conic_points = conic->add_subcommand("points", "Sweep X_D(K) up to a height bound");
  conic_points->add_option("--disc", disc)->check(CLI::IsMember({6, 10}));
  conic_points->add_option("--height", height)->check(CLI::PositiveNumber);
  conic_points->callback([&] {
    action = [&] {
      const QuadField& K = QuadField::from_label(g.field);
      json doc{{"field", K.label()}, {"disc", disc}, {"height", height}};
      auto base = find_base_point(K, disc);
      if (!base) {
        doc["has_points"] = conic_has_points(K, disc);
        doc["points"] = json::array();
        if (!doc["has_points"].get<bool>())
          throw Error(ErrorKind::FieldDoesNotSplit, "X_" + std::to_string(disc) + " has no points over " + K.label());
      } else {
        json pts = json::array();
        for (const auto& P : parametrize_conic(disc, K, *base, height)) {
          json row{{"point", P.to_string()}};
          if (disc == 6 && !P.coords[0].is_zero()) row["j"] = j_from_point(P).j.to_string();
          pts.push_back(row);
        }
        doc["base_point"] = base->to_string();
        doc["points"] = pts;
      }
      emit(g, doc);
    };
  });

  // family
  auto* family = app.add_subcommand("family", "The QM family of genus two curves");
  family->require_subcommand(1);
  std::string j_text, curve_file, newform_file;
  auto* family_curve = family->add_subcommand("curve", "Curve of the family at j");
  family_curve->add_option("--j", j_text)->required();
  family_curve->callback([&] {
    action = [&] {
      const QuadField& K = QuadField::from_label(g.field);
      JInvariant J{QuadFraction::parse(K, j_text)};
      FamilyCurve F = baba_granath_curve(J);
      IgusaClebsch ic = family_invariants_closed_form(J.j);
      json coeffs = json::array();
      for (auto it = F.coeffs.rbegin(); it != F.coeffs.rend(); ++it) coeffs.push_back(it->to_string());
      emit(g, {{"field", K.label()},
               {"j", J.j.to_string()},
               {"t", F.t.to_string()},
               {"s_squared", (QuadFraction(K, -6) * J.j).to_string()},
               {"coeffs_descending", coeffs},
               {"igusa_clebsch", {ic.I2.to_string(), ic.I4.to_string(), ic.I6.to_string(), ic.I10.to_string()}},
               {"twisted_model_discriminant", family_model_discriminant(J).to_string()}});
    };
  });
  auto* family_match = family->add_subcommand("match", "Recover j from a curve in the family");
  family_match->add_option("--curve", curve_file)->required();
  family_match->callback([&] {
    action = [&] {
      GenusTwoCurve C = GenusTwoCurve::load(curve_file);
      IgusaClebsch ic = igusa_clebsch(C);
      JInvariant J = find_j_from_curve(C);
      json out{{"curve", C.name()}, {"field", C.field().label()}, {"j", J.j.to_string()},
               {"igusa_clebsch", {ic.I2.to_string(), ic.I4.to_string(), ic.I6.to_string(), ic.I10.to_string()}}};
      json outlook = json::object();
      for (const auto& P : bad_prime_support(C)) outlook[P.label()] = to_string(potential_reduction(J, P));
      out["potential_reduction"] = outlook;
      emit(g, out);
    };
  });

  // analyze
  std::uint64_t max_norm = 3000, square_norm = 500;
  auto* analyze = app.add_subcommand("analyze", "Euler factor table of a curve");
  analyze->add_option("--curve", curve_file)->required();
  analyze->add_option("--max-norm", max_norm)->check(CLI::PositiveNumber);
  analyze->add_option("--square-check-norm", square_norm)->check(CLI::PositiveNumber);
  analyze->callback([&] {
    action = [&] {
      GenusTwoCurve C = GenusTwoCurve::load(curve_file);
      TraceTable T = trace_table(C, max_norm, square_norm, g.jobs);
      emit(g, T.to_json());
      for (const auto& b : T.bad)
        if (b.reason.rfind("NotQMShape", 0) == 0) throw Error(ErrorKind::NotQMShape, b.prime.label());
    };
  });

  // genuine
  auto* genuine = app.add_subcommand("genuine", "Witness that the traces do not come from a base change");
  genuine->add_option("--curve", curve_file)->required();
  genuine->add_option("--max-norm", max_norm)->check(CLI::PositiveNumber);
  genuine->callback([&] {
    action = [&] {
      GenusTwoCurve C = GenusTwoCurve::load(curve_file);
      TraceTable T = trace_table(C, std::min<std::uint64_t>(max_norm, 1000), 0, g.jobs);
      auto v = genuineness_test(T);
      emit(g, v.to_json());
      if (!v.genuine) throw Error(ErrorKind::Inconsistent, "no genuineness witness below the bound");
    };
  });

  // cycle-types
  auto* cycles = app.add_subcommand("cycle-types", "Factorization patterns of the sextic");
  cycles->add_option("--curve", curve_file)->required();
  cycles->add_option("--max-norm", max_norm)->check(CLI::PositiveNumber);
  cycles->callback([&] {
    action = [&] {
      GenusTwoCurve C = GenusTwoCurve::load(curve_file);
      std::map<std::string, int> hist;
      int sampled = 0;
      bool all_a4 = true;
      for (const auto& P : C.field().primes_up_to_norm(max_norm)) {
        if (counting_obstruction(C, P)) continue;
        auto s = sextic_cycle_type(C, P);
        std::string key;
        for (int d : s.degrees) key += (key.empty() ? "" : ",") + std::to_string(d);
        ++hist[key];
        ++sampled;
        all_a4 = all_a4 && cycle_type_in_a4(s.degrees);
      }
      emit(g, {{"curve", C.name()}, {"max_norm", max_norm}, {"sampled", sampled}, {"histogram", hist},
               {"all_in_a4", all_a4}});
    };
  });

  // group-theory
  std::uint64_t ell = 2;
  int precision = 3;
  auto* group = app.add_subcommand("group-theory", "Unit group of the maximal order modulo l");
  group->add_option("--ell", ell)->check(CLI::IsMember({2, 3, 5, 7}));
  group->add_option("--precision", precision)->check(CLI::Range(1, 8));
  group->callback([&] {
    action = [&] {
      auto ses = verify_ses(ell);
      auto local = verify_local_model(ell, precision);
      emit(g, {{"ses", ses.to_json()}, {"local_model", local.to_json()}});
      if (!ses.exact() || !local.all()) throw Error(ErrorKind::Inconsistent, "group-theoretic check failed");
    };
  });

  // rcg
  std::string modulus_text;
  auto* rcg = app.add_subcommand("rcg", "Ray class group structure");
  rcg->add_option("--modulus", modulus_text)->required();
  rcg->callback([&] {
    action = [&] {
      const QuadField& K = QuadField::from_label(g.field);
      emit(g, RayClassGroup::compute(Modulus::parse(K, modulus_text)).to_json());
    };
  });

  // newform
  auto* newform = app.add_subcommand("newform", "Bianchi newform records");
  newform->require_subcommand(1);
  std::string label, cache_dir = "cache";
  auto* nf_show = newform->add_subcommand("show", "Validate and print a newform file");
  nf_show->add_option("--file", newform_file)->required();
  nf_show->callback([&] { action = [&] { emit(g, parse_newform_file(newform_file).to_json()); }; });
  auto* nf_fetch = newform->add_subcommand("fetch", "Fetch a newform from LMFDB into the cache");
  nf_fetch->add_option("--label", label)->required();
  nf_fetch->add_option("--cache", cache_dir);
  nf_fetch->add_flag("--offline", g.offline);
  nf_fetch->callback([&] {
    action = [&] {
      FetchOptions opts;
      opts.endpoint = default_lmfdb_endpoint();
      opts.cache_dir = cache_dir;
      opts.offline = g.offline;
      NewformRecord f = fetch_lmfdb(label, opts);
      emit(g, {{"label", f.label}, {"cache", newform_cache_path(cache_dir, label)}, {"eigenvalues", f.eigenvalues.size()}});
    };
  });

  // livne
  auto* livne = app.add_subcommand("livne", "Trace comparison");
  livne->require_subcommand(1);
  std::string twist_text;
  auto* livne_v = livne->add_subcommand("verify", "Compare curve and newform traces at every good prime");
  livne_v->add_option("--curve", curve_file)->required();
  livne_v->add_option("--newform", newform_file)->required();
  livne_v->add_option("--max-norm", max_norm)->check(CLI::PositiveNumber);
  livne_v->add_option("--twist-prime", twist_text);
  livne_v->callback([&] {
    action = [&] {
      GenusTwoCurve C = GenusTwoCurve::load(curve_file);
      NewformRecord f = parse_newform_file(newform_file);
      if (!(C.field() == *f.field)) throw Error(ErrorKind::FieldMismatch, "curve and newform fields differ");
      LivneConfig cfg;
      cfg.bound = max_norm;
      cfg.min_bound = std::min(cfg.min_bound, max_norm);
      if (!twist_text.empty()) cfg.twist_prime = single_prime(C.field(), twist_text);
      TraceTable T = trace_table(C, max_norm, 0, g.jobs);
      try {
        emit(g, livne_verify(T, f, cfg).to_json());
      } catch (const Error& e) {
        emit(g, {{"verified", false}, {"error", std::string(to_string(e.kind()))}, {"message", e.what()}});
        throw;
      }
    };
  });

  // verify
  RunConfig rc;
  std::string span_text, separator_text, results_path;
  auto* verify = app.add_subcommand("verify", "Full modularity pipeline for one curve and newform");
  verify->add_option("--curve", curve_file)->required();
  verify->add_option("--newform", newform_file)->required();
  verify->add_option("--max-norm", rc.trace_bound)->check(CLI::PositiveNumber);
  verify->add_option("--square-check-norm", rc.square_bound)->check(CLI::PositiveNumber);
  verify->add_option("--twist-prime", twist_text);
  verify->add_option("--modulus", modulus_text, "Ray class modulus for the residual check");
  verify->add_option("--span", span_text, "Primes whose quadratic characters span, e.g. p7.1,p7.2");
  verify->add_option("--separator", separator_text);
  verify->add_option("--results", results_path, "Append a record to this JSON-lines store");
  verify->callback([&] {
    action = [&] {
      GenusTwoCurve C = GenusTwoCurve::load(curve_file);
      NewformRecord f = parse_newform_file(newform_file);
      rc.jobs = g.jobs;
      rc.offline = g.offline;
      if (!twist_text.empty()) rc.twist_prime = twist_text;
      ResidualSetup setup;
      if (!modulus_text.empty()) setup.modulus = Modulus::parse(C.field(), modulus_text);
      setup.span = prime_list(C.field(), span_text);
      if (!separator_text.empty()) setup.separator = single_prime(C.field(), separator_text);
      VerifyReport rep = cmd_verify(rc, C, f, setup);
      json doc = rep.to_json();
      doc["curve"] = C.name();
      doc["newform"] = f.label;
      emit(g, doc);
      if (!results_path.empty()) {
        json rec{{"curve_hash", C.hash()}, {"field", C.field().label()}, {"newform", f.label},
                 {"disc_support", support_json(bad_prime_support(C))}};
        try {
          rec["j"] = find_j_from_curve(C).j.to_string();
        } catch (const Error&) {
          rec["j"] = nullptr;
        }
        for (const auto& s : rep.stages)
          if (s.stage == "genuineness") rec["genuineness"] = s.passed;
        rec["verified"] = rep.exit_code == 0;
        ResultsStore(results_path).append(rec);
      }
      if (rep.exit_code != 0) std::exit(rep.exit_code);
    };
  });

  // reference curves
  std::string fixtures = "tests/fixtures";
  RunConfig suite_rc;
  auto* suite = app.add_subcommand("paper-suite", "Run the pipeline on the four reference curves");
  suite->add_option("--fixtures", fixtures)->capture_default_str();
  suite->add_option("--max-norm", suite_rc.trace_bound)->check(CLI::PositiveNumber);
  suite->add_option("--square-check-norm", suite_rc.square_bound)->check(CLI::PositiveNumber);
  suite->callback([&] {
    action = [&] {
      suite_rc.jobs = g.jobs;
      suite_rc.offline = g.offline;
      auto res = cmd_reference_suite(suite_rc, reference_cases(fixtures));
      emit(g, res.summary);
      if (res.exit_code != 0) std::exit(res.exit_code);
    };
  });

  // search
  std::string allowed_text;
  auto* search = app.add_subcommand("search", "Family members with restricted bad reduction");
  search->add_option("--height", height)->check(CLI::PositiveNumber);
  search->add_option("--allowed", allowed_text, "Rational primes allowed below bad primes, e.g. 5,37");
  search->callback([&] {
    action = [&] {
      const QuadField& K = QuadField::from_label(g.field);
      auto allowed = parse_rational_primes(allowed_text);
      json rows = json::array();
      for (const auto& c : cmd_search(K, height, allowed)) rows.push_back(c.to_json());
      emit(g, {{"field", K.label()}, {"height", height}, {"allowed", allowed}, {"candidates", rows}});
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

#ifdef _OPENMP
  if (g.jobs > 0) omp_set_num_threads(g.jobs);
#endif
  if (g.jobs < 0) {
    std::cerr << "InvalidArgument: --jobs must be positive\n";
    return 2;
  }
  try {
    if (action) action();
    return 0;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return is_verification_failure(e.kind()) ? 1 : 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "SchemaError: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
