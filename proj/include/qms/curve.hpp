#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "qms/quadfield.hpp"

namespace qms {

// y^2 = f(x) over K with deg f in {5, 6}.
class GenusTwoCurve {
 public:
  // Coefficients c_0..c_n, low degree first (n <= 6).
  GenusTwoCurve(const QuadField& K, std::vector<QuadFraction> ascending, std::string name = {});
  static GenusTwoCurve from_descending(const QuadField& K, std::vector<QuadFraction> descending,
                                       std::string name = {});

  const QuadField& field() const { return *K_; }
  const std::string& name() const { return name_; }
  // Always seven entries, c_0..c_6.
  const std::vector<QuadFraction>& coeffs() const { return coeffs_; }
  int degree() const { return degree_; }

  // Integral model y^2 = m^2 f(x) for the least m making every coefficient integral.
  const std::vector<QuadElement>& integral_coeffs() const { return integral_; }
  const Int& y_scale() const { return y_scale_; }
  // Discriminant of the integral model as a binary sextic (a_5^2 disc_5 when deg 5).
  const QuadElement& discriminant() const { return disc_; }

  nlohmann::json to_json() const;
  static GenusTwoCurve from_json(const nlohmann::json& doc);
  static GenusTwoCurve load(const std::string& path);
  // SHA-256 of the canonical JSON serialization.
  std::string hash() const;

 private:
  const QuadField* K_;
  std::string name_;
  std::vector<QuadFraction> coeffs_;
  int degree_ = 0;
  std::vector<QuadElement> integral_;
  Int y_scale_ = 1;
  QuadElement disc_;
};

// Discriminant of a binary form of degree n given by c_0..c_n (leading may vanish).
QuadFraction binary_form_discriminant(const std::vector<QuadFraction>& ascending, int n);

// JSON helpers for arbitrary-size integers: numbers when they fit in 64 bits, strings otherwise.
nlohmann::json int_to_json(const Int& x);
Int int_from_json(const nlohmann::json& v);

}  // namespace qms
