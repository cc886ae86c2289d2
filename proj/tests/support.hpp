#pragma once

#include <random>
#include <string>

#include "qms/curve.hpp"
#include "qms/newform.hpp"

namespace qms::test {

inline std::string fixture(const std::string& rel) { return std::string(QMS_FIXTURES) + "/" + rel; }

inline GenusTwoCurve curve(int i) { return GenusTwoCurve::load(fixture("curves/C" + std::to_string(i) + ".json")); }

inline const char* form_label(int i) {
  static const char* labels[] = {"", "2.0.4.1-34225.3-a", "2.0.3.1-61009.1-a", "2.0.3.1-67081.3-a",
                                 "2.0.3.1-123201.1-b"};
  return labels[i];
}

inline NewformRecord form(int i) { return parse_newform_file(fixture(std::string("newforms/") + form_label(i) + ".json")); }

// Fixed seed so failures reproduce.
inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240917);
  return g;
}

inline long rand_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline QuadElement rand_element(const QuadField& K, long r) { return QuadElement(K, rand_int(-r, r), rand_int(-r, r)); }

// Brute-force count of roots of x^2 - t x + n modulo p.
inline int omega_root_count(const QuadField& K, std::uint64_t p) {
  int c = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    long long v = static_cast<long long>((x * x) % p) - static_cast<long long>((K.omega_trace() * x) % p) +
                  static_cast<long long>(K.omega_norm() % p);
    if (((v % static_cast<long long>(p)) + p) % p == 0) ++c;
  }
  return c;
}

}  // namespace qms::test
