#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qms/quadfield.hpp"

namespace qms {

struct NewformRecord {
  std::string label;
  const QuadField* field = nullptr;
  Int level_norm = 1;
  std::vector<std::pair<PrimeIdeal, int>> level;
  // Sorted by canonical prime order.
  std::vector<std::pair<PrimeIdeal, std::int64_t>> eigenvalues;
  std::optional<bool> genuine;
  std::optional<bool> base_change;

  bool divides_level(const PrimeIdeal& P) const;
  nlohmann::json to_json() const;
};

NewformRecord parse_newform(const nlohmann::json& doc);
NewformRecord parse_newform_text(const std::string& text);
NewformRecord parse_newform_file(const std::string& path);

// Lookup by canonical generator; conjugates are distinct keys.
std::optional<std::int64_t> eigenvalue(const NewformRecord& form, const PrimeIdeal& P);

struct FetchOptions {
  // Defaults to $QMS_LMFDB_ENDPOINT or the public LMFDB API.
  std::string endpoint;
  std::string cache_dir = "cache";
  bool offline = false;
};

std::string default_lmfdb_endpoint();
// Cached file path cache_dir/<field>/<label>.json.
std::string newform_cache_path(const std::string& cache_dir, const std::string& label);
NewformRecord fetch_lmfdb(const std::string& label, const FetchOptions& opts);
// Conversion of one LMFDB bmf_forms document (hecke_eigs in LMFDB prime order).
NewformRecord convert_lmfdb(const nlohmann::json& doc);

}  // namespace qms
