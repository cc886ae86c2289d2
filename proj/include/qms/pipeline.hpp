#pragma once

#include <json.hpp>

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qms/counting.hpp"
#include "qms/error.hpp"
#include "qms/livne.hpp"
#include "qms/newform.hpp"
#include "qms/shimura.hpp"

namespace qms {

struct RunConfig {
  std::string field_label = "2.0.3.1";
  std::uint64_t trace_bound = 3000;
  std::uint64_t square_bound = 500;
  int height = 10;
  int jobs = 0;
  std::string out;
  bool offline = false;
  std::optional<std::string> twist_prime;
  std::string results_path;
  void validate() const;
};

// Append-only JSON lines; each record gets a timestamp when written.
class ResultsStore {
 public:
  explicit ResultsStore(std::string path) : path_(std::move(path)) {}
  void append(nlohmann::json record) const;
  std::vector<nlohmann::json> read_all() const;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct SearchCandidate {
  ConicPoint point;
  JInvariant j;
  // Primes not over 2 or 3 where j is not a unit.
  std::vector<PrimeIdeal> bad_primes;
  IgusaClebsch invariants;
  nlohmann::json to_json() const;
};

// Sweeps X_6(K) up to the height bound and keeps j whose bad primes lie over the allowed set.
std::vector<SearchCandidate> cmd_search(const QuadField& K, int height, const std::set<std::uint64_t>& allowed_bad,
                                        const std::function<void(const SearchCandidate&)>& emit = {});

std::vector<PrimeIdeal> primes_of_j(const JInvariant& j);

struct ResidualSetup {
  std::optional<Modulus> modulus;
  std::vector<PrimeIdeal> span;
  std::optional<PrimeIdeal> separator;
};

// Modulus covering quadratic and cubic characters unramified outside 2 and the level.
Modulus residual_modulus(const NewformRecord& form);

struct StageResult {
  std::string stage;
  bool passed = false;
  nlohmann::json evidence;
  std::optional<ErrorKind> error;
};

struct VerifyReport {
  std::vector<StageResult> stages;
  int exit_code = 0;
  nlohmann::json to_json() const;
};

VerifyReport cmd_verify(const RunConfig& config, const GenusTwoCurve& C, const NewformRecord& form,
                        const ResidualSetup& setup = {});

struct ReferenceCase {
  std::string name;
  std::string curve_file;
  std::string newform_file;
  // Labels of the stated conductor support.
  std::vector<std::string> conductor_support;
  std::optional<std::string> twist_prime;
  std::vector<std::string> span;
  std::optional<std::string> separator;
};

std::vector<ReferenceCase> reference_cases(const std::string& fixture_dir);

struct SuiteResult {
  nlohmann::json summary;
  int verified = 0;
  int total = 0;
  // 1 if any case failed mathematically, else 2 if any lacked data, else 0.
  int exit_code = 0;
};

SuiteResult cmd_reference_suite(const RunConfig& config, const std::vector<ReferenceCase>& cases);

}  // namespace qms
