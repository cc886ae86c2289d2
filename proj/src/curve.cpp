#include "qms/curve.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "qms/error.hpp"

namespace qms {

nlohmann::json int_to_json(const Int& x) {
  if (arith::fits_i64(x)) return x.get_si();
  return x.get_str();
}

Int int_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Int(static_cast<long>(v.get<std::int64_t>()));
  if (v.is_string()) {
    Int r;
    if (r.set_str(v.get<std::string>(), 10) != 0) throw Error(ErrorKind::SchemaError, "bad integer string");
    return r;
  }
  throw Error(ErrorKind::SchemaError, "expected an integer");
}

namespace {

// Determinant by fraction-free elimination over the fraction field.
QuadFraction determinant(std::vector<std::vector<QuadFraction>> M, const QuadField& K) {
  const std::size_t n = M.size();
  QuadFraction det(K, 1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && M[piv][col].is_zero()) ++piv;
    if (piv == n) return QuadFraction(K, 0);
    if (piv != col) {
      std::swap(M[piv], M[col]);
      det = -det;
    }
    det = det * M[col][col];
    QuadFraction inv = M[col][col].inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (M[r][col].is_zero()) continue;
      QuadFraction factor = M[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) M[r][c] = M[r][c] - factor * M[col][c];
    }
  }
  return det;
}

QuadFraction resultant(const std::vector<QuadFraction>& f, int df, const std::vector<QuadFraction>& g, int dg,
                       const QuadField& K) {
  const int n = df + dg;
  std::vector<std::vector<QuadFraction>> S(n, std::vector<QuadFraction>(n, QuadFraction(K, 0)));
  for (int r = 0; r < dg; ++r)
    for (int i = 0; i <= df; ++i) S[r][r + i] = f[df - i];
  for (int r = 0; r < df; ++r)
    for (int i = 0; i <= dg; ++i) S[dg + r][r + i] = g[dg - i];
  return determinant(std::move(S), K);
}

bool nonzero(const QuadFraction& x) { return x.a() != 0 || x.b() != 0; }

}  // namespace

QuadFraction binary_form_discriminant(const std::vector<QuadFraction>& c, int n) {
  const QuadField& K = c.front().field();
  int deg = n;
  while (deg > 0 && !nonzero(c[deg])) --deg;
  if (n - deg >= 2 || deg < 1) return QuadFraction(K, 0);
  std::vector<QuadFraction> f(c.begin(), c.begin() + deg + 1);
  std::vector<QuadFraction> df;
  for (int i = 1; i <= deg; ++i) df.push_back(f[i] * Rat(i));
  QuadFraction res = resultant(f, deg, df, deg - 1, K);
  QuadFraction disc = res / f[deg];
  if ((deg * (deg - 1) / 2) % 2 == 1) disc = -disc;
  if (deg == n - 1) disc = disc * f[deg] * f[deg];
  return disc;
}

GenusTwoCurve::GenusTwoCurve(const QuadField& K, std::vector<QuadFraction> ascending, std::string name)
    : K_(&K), name_(std::move(name)), disc_(K) {
  if (ascending.size() > 7) throw Error(ErrorKind::InvalidArgument, "sextic has at most 7 coefficients");
  for (const auto& c : ascending) {
    if (!(c.field() == K)) throw Error(ErrorKind::FieldMismatch, "coefficient from another field");
  }
  coeffs_ = std::move(ascending);
  while (coeffs_.size() < 7) coeffs_.emplace_back(K, 0);
  degree_ = 6;
  while (degree_ > 0 && !nonzero(coeffs_[degree_])) --degree_;
  if (degree_ < 5) throw Error(ErrorKind::InvalidArgument, "defining polynomial must have degree 5 or 6");

  // m = prod p^ceil(v_p(den)/2) over the coefficient denominators
  Int den = 1;
  for (const auto& c : coeffs_) den = lcm(den, c.den());
  y_scale_ = 1;
  if (den > 1) {
    for (const auto& [p, e] : arith::factor(den)) {
      for (int i = 0; i < (e + 1) / 2; ++i) y_scale_ *= p;
    }
  }
  const Rat m2(y_scale_ * y_scale_);
  for (const auto& c : coeffs_) {
    QuadFraction s = c * m2;
    if (!s.is_integral()) throw Error(ErrorKind::InvalidArgument, "integral model construction failed");
    integral_.push_back(s.numerator());
  }
  std::vector<QuadFraction> fi(integral_.begin(), integral_.end());
  QuadFraction d = binary_form_discriminant(fi, 6);
  if (!d.is_integral()) throw Error(ErrorKind::InvalidArgument, "non-integral discriminant");
  disc_ = d.numerator();
  if (disc_.is_zero()) throw Error(ErrorKind::SingularCurve, "discriminant vanishes");
}

GenusTwoCurve GenusTwoCurve::from_descending(const QuadField& K, std::vector<QuadFraction> descending,
                                             std::string name) {
  std::reverse(descending.begin(), descending.end());
  return GenusTwoCurve(K, std::move(descending), std::move(name));
}

nlohmann::json GenusTwoCurve::to_json() const {
  nlohmann::json doc;
  if (!name_.empty()) doc["name"] = name_;
  doc["field"] = K_->label();
  nlohmann::json coeffs = nlohmann::json::array();
  for (int i = 6; i >= 0; --i) {
    const auto& c = coeffs_[i];
    coeffs.push_back({int_to_json(c.a()), int_to_json(c.b()), int_to_json(c.den())});
  }
  doc["coeffs"] = coeffs;
  return doc;
}

GenusTwoCurve GenusTwoCurve::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("field") || !doc.contains("coeffs") || !doc["field"].is_string() ||
      !doc["coeffs"].is_array()) {
    throw Error(ErrorKind::SchemaError, "curve document needs string 'field' and array 'coeffs'");
  }
  const QuadField& K = QuadField::from_label(doc["field"].get<std::string>());
  std::vector<QuadFraction> desc;
  for (const auto& c : doc["coeffs"]) {
    if (!c.is_array() || c.size() != 3) throw Error(ErrorKind::SchemaError, "coefficient must be [a, b, den]");
    Int den = int_from_json(c[2]);
    if (den <= 0) throw Error(ErrorKind::SchemaError, "denominator must be positive");
    desc.emplace_back(K, int_from_json(c[0]), int_from_json(c[1]), den);
  }
  if (desc.size() < 6 || desc.size() > 7) throw Error(ErrorKind::SchemaError, "expected 6 or 7 coefficients");
  std::string name = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : "";
  return from_descending(K, std::move(desc), name);
}

GenusTwoCurve GenusTwoCurve::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open curve file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("malformed JSON: ") + e.what());
  }
  return from_json(doc);
}

std::string GenusTwoCurve::hash() const {
  nlohmann::json doc = to_json();
  doc.erase("name");
  const std::string payload = doc.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(payload.data(), payload.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

}  // namespace qms
