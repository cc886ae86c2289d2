#include "qms/newform.hpp"

#include <httplib.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "qms/curve.hpp"
#include "qms/error.hpp"

namespace qms {

namespace {

PrimeIdeal prime_from_pair(const QuadField& K, const nlohmann::json& a, const nlohmann::json& b) {
  QuadElement g(K, int_from_json(a), int_from_json(b));
  try {
    return K.prime_from_generator(g);
  } catch (const Error&) {
    throw Error(ErrorKind::SchemaError, "(" + g.to_string() + ") is not a prime of " + K.label());
  }
}

std::string field_of_label(const std::string& label) {
  auto dash = label.find('-');
  if (dash == std::string::npos) throw Error(ErrorKind::InvalidArgument, "newform label lacks a field part: " + label);
  return label.substr(0, dash);
}

}  // namespace

bool NewformRecord::divides_level(const PrimeIdeal& P) const {
  for (const auto& [Q, e] : level)
    if (Q == P) return true;
  return false;
}

NewformRecord parse_newform(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "newform document must be an object");
    for (const char* key : {"label", "field", "level_norm", "level", "ap"})
      if (!doc.contains(key)) throw Error(ErrorKind::SchemaError, std::string("missing key '") + key + "'");
    NewformRecord r;
    r.label = doc.at("label").get<std::string>();
    r.field = &QuadField::from_label(doc.at("field").get<std::string>());
    const QuadField& K = *r.field;
    r.level_norm = int_from_json(doc.at("level_norm"));

    Int product = 1;
    for (const auto& entry : doc.at("level")) {
      if (!entry.is_array() || entry.size() != 3) throw Error(ErrorKind::SchemaError, "level entry must be [a, b, e]");
      PrimeIdeal P = prime_from_pair(K, entry[0], entry[1]);
      int e = entry[2].get<int>();
      if (e < 1) throw Error(ErrorKind::SchemaError, "level exponent must be positive");
      for (const auto& [Q, f] : r.level)
        if (Q == P) throw Error(ErrorKind::DuplicatePrime, "level lists " + P.label() + " twice");
      r.level.emplace_back(P, e);
      for (int i = 0; i < e; ++i) product *= static_cast<unsigned long>(P.norm());
    }
    if (product != r.level_norm)
      throw Error(ErrorKind::SchemaError, "level factorization has norm " + product.get_str() + ", expected " +
                                              r.level_norm.get_str());

    std::set<std::string> seen;
    for (const auto& entry : doc.at("ap")) {
      if (!entry.is_array() || entry.size() != 3) throw Error(ErrorKind::SchemaError, "ap entry must be [a, b, value]");
      PrimeIdeal P = prime_from_pair(K, entry[0], entry[1]);
      if (!seen.insert(P.label()).second) throw Error(ErrorKind::DuplicatePrime, "eigenvalue for " + P.label() + " given twice");
      std::int64_t a = entry[2].get<std::int64_t>();
      if (!r.divides_level(P) && static_cast<double>(a) * static_cast<double>(a) > 4.0 * static_cast<double>(P.norm()))
        throw Error(ErrorKind::HeckeBoundViolation,
                    P.label() + ": |" + std::to_string(a) + "| exceeds 2 sqrt(" + std::to_string(P.norm()) + ")");
      r.eigenvalues.emplace_back(P, a);
    }
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    if (doc.contains("genuine") && !doc["genuine"].is_null()) r.genuine = doc["genuine"].get<bool>();
    if (doc.contains("base_change") && !doc["base_change"].is_null()) r.base_change = doc["base_change"].get<bool>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("newform document: ") + e.what());
  }
}

NewformRecord parse_newform_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("malformed JSON: ") + e.what());
  }
  return parse_newform(doc);
}

NewformRecord parse_newform_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FixtureMissing, "cannot open newform file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_newform_text(ss.str());
}

nlohmann::json NewformRecord::to_json() const {
  nlohmann::json lv = nlohmann::json::array(), ap = nlohmann::json::array();
  for (const auto& [P, e] : level) lv.push_back({int_to_json(P.gen.a()), int_to_json(P.gen.b()), e});
  for (const auto& [P, a] : eigenvalues) ap.push_back({int_to_json(P.gen.a()), int_to_json(P.gen.b()), a});
  nlohmann::json doc{{"label", label}, {"field", field->label()}, {"level_norm", int_to_json(level_norm)},
                     {"level", lv},    {"ap", ap}};
  if (genuine) doc["genuine"] = *genuine;
  if (base_change) doc["base_change"] = *base_change;
  return doc;
}

std::optional<std::int64_t> eigenvalue(const NewformRecord& form, const PrimeIdeal& P) {
  if (!(*P.K == *form.field)) throw Error(ErrorKind::FieldMismatch, "prime and form live over different fields");
  auto it = std::lower_bound(form.eigenvalues.begin(), form.eigenvalues.end(), P,
                             [](const auto& entry, const PrimeIdeal& Q) { return entry.first < Q; });
  if (it != form.eigenvalues.end() && it->first == P) return it->second;
  return std::nullopt;
}

std::string default_lmfdb_endpoint() {
  if (const char* env = std::getenv("QMS_LMFDB_ENDPOINT"); env && *env) return env;
  return "https://www.lmfdb.org/api/bmf_forms/";
}

std::string newform_cache_path(const std::string& cache_dir, const std::string& label) {
  return (std::filesystem::path(cache_dir) / field_of_label(label) / (label + ".json")).string();
}

namespace {

// Valuation of the ideal Z N + Z (c + d w) at P.
int ideal_valuation(const PrimeIdeal& P, const Int& N, const QuadElement& second) {
  int v = P.valuation(QuadElement(*P.K, N));
  if (!second.is_zero()) v = std::min(v, P.valuation(second));
  return v;
}

std::vector<std::int64_t> parse_int_list(const nlohmann::json& v) {
  if (v.is_string()) return parse_int_list(nlohmann::json::parse(v.get<std::string>()));
  std::vector<std::int64_t> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw Error(ErrorKind::ConversionError, "non-integer entry in list");
    out.push_back(x.get<std::int64_t>());
  }
  return out;
}

}  // namespace

NewformRecord convert_lmfdb(const nlohmann::json& doc) {
  try {
    NewformRecord r;
    r.label = doc.at("label").get<std::string>();
    r.field = &QuadField::from_label(doc.at("field_label").get<std::string>());
    const QuadField& K = *r.field;
    r.level_norm = Int(doc.at("level_norm").get<long>());

    // level_ideal is the HNF [N, c, d] of Z N + Z (c + d w)
    auto hnf = parse_int_list(doc.at("level_ideal"));
    if (hnf.size() != 3) throw Error(ErrorKind::ConversionError, "level_ideal must have three entries");
    const Int N(static_cast<long>(hnf[0]));
    const QuadElement second(K, Int(static_cast<long>(hnf[1])), Int(static_cast<long>(hnf[2])));
    for (const auto& [p, e] : arith::factor(r.level_norm)) {
      for (const auto& P : K.split_prime(p.get_ui())) {
        int v = ideal_valuation(P, N, second);
        if (v > 0) r.level.emplace_back(P, v);
      }
    }

    const auto& eigs = doc.at("hecke_eigs");
    std::uint64_t bound = 1000;
    auto primes = K.primes_up_to_norm(bound);
    while (primes.size() < eigs.size() && bound < (1u << 24)) primes = K.primes_up_to_norm(bound *= 4);
    if (eigs.size() > primes.size()) throw Error(ErrorKind::ConversionError, "more eigenvalues than enumerated primes");
    for (std::size_t i = 0; i < eigs.size(); ++i) {
      if (!eigs[i].is_number_integer()) continue;
      r.eigenvalues.emplace_back(primes[i], eigs[i].get<std::int64_t>());
    }
    if (doc.contains("is_base_change") && doc["is_base_change"].is_string())
      r.base_change = doc["is_base_change"].get<std::string>().rfind("yes", 0) == 0;
    if (r.base_change) r.genuine = !*r.base_change;
    // round trip through the validating parser
    return parse_newform(r.to_json());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConversionError, std::string("unexpected LMFDB document: ") + e.what());
  }
}

NewformRecord fetch_lmfdb(const std::string& label, const FetchOptions& opts) {
  static std::mutex cache_writer;
  const std::string path = newform_cache_path(opts.cache_dir, label);
  if (std::filesystem::exists(path)) return parse_newform_file(path);
  if (opts.offline) throw Error(ErrorKind::NotFound, label + " is not cached and offline mode is on");

  std::string endpoint = opts.endpoint.empty() ? default_lmfdb_endpoint() : opts.endpoint;
  // split scheme://host[:port] from the path
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorKind::NetworkError, "endpoint must include a scheme");
  auto path_start = endpoint.find('/', scheme_end + 3);
  std::string host = endpoint.substr(0, path_start);
  std::string base = path_start == std::string::npos ? "/" : endpoint.substr(path_start);

  httplib::Client client(host);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);
  client.set_follow_location(true);
  auto res = client.Get(base + "?label=" + label + "&_format=json");
  if (!res) throw Error(ErrorKind::NetworkError, "request to " + host + " failed: " + httplib::to_string(res.error()));
  if (res->status == 404) throw Error(ErrorKind::NotFound, label + " not found at " + host);
  if (res->status != 200) throw Error(ErrorKind::NetworkError, "HTTP status " + std::to_string(res->status));

  nlohmann::json body;
  try {
    body = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConversionError, std::string("response is not JSON: ") + e.what());
  }
  if (!body.contains("data") || !body["data"].is_array() || body["data"].empty())
    throw Error(ErrorKind::NotFound, label + " not found at " + host);
  NewformRecord r = convert_lmfdb(body["data"][0]);

  std::lock_guard<std::mutex> lock(cache_writer);
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::ofstream out(path);
  out << r.to_json().dump(1) << "\n";
  return r;
}

}  // namespace qms
