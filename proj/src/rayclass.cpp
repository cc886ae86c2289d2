#include "qms/rayclass.hpp"

#include <algorithm>
#include <deque>
#include <regex>
#include <sstream>

#include "qms/error.hpp"

namespace qms {

Modulus::Modulus(const QuadField& field, std::vector<std::pair<PrimeIdeal, int>> f) : K(&field), factors(std::move(f)) {
  for (const auto& [P, e] : factors) {
    if (!(*P.K == field)) throw Error(ErrorKind::FieldMismatch, "modulus prime from another field");
    if (e < 1) throw Error(ErrorKind::InvalidArgument, "modulus exponents must be positive");
  }
  std::sort(factors.begin(), factors.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 1; i < factors.size(); ++i)
    if (factors[i].first == factors[i - 1].first)
      throw Error(ErrorKind::InvalidArgument, "prime " + factors[i].first.label() + " repeated in modulus");
}

Modulus Modulus::parse(const QuadField& K, const std::string& text) {
  std::vector<std::pair<PrimeIdeal, int>> f;
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty() || s == "1") return Modulus(K, {});
  static const std::regex label_re(R"(p(\d+)(?:\.(\d))?)");
  // factors separated by ',' or by '*' outside parentheses
  std::vector<std::string> toks(1);
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' || (c == '*' && depth == 0))
      toks.emplace_back();
    else
      toks.back() += c;
  }
  for (std::string tok : toks) {
    if (tok.empty()) throw Error(ErrorKind::InvalidArgument, "empty factor in modulus '" + text + "'");
    int e = 1;
    auto caret = tok.rfind('^');
    if (caret != std::string::npos && tok.find(')', caret) == std::string::npos) {
      auto ex = tok.substr(caret + 1);
      if (ex.empty() || ex.size() > 6 || !std::all_of(ex.begin(), ex.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw Error(ErrorKind::InvalidArgument, "bad exponent in '" + tok + "'");
      e = std::stoi(ex);
      tok = tok.substr(0, caret);
    }
    std::smatch mt;
    if (std::regex_match(tok, mt, label_re)) {
      std::uint64_t p = std::stoull(mt[1].str());
      int idx = mt[2].matched ? std::stoi(mt[2].str()) : 0;
      f.emplace_back(K.prime_by_label(p, idx), e);
    } else {
      if (tok.size() >= 2 && tok.front() == '(' && tok.back() == ')') tok = tok.substr(1, tok.size() - 2);
      f.emplace_back(K.prime_from_generator(QuadElement::parse(K, tok)), e);
    }
  }
  return Modulus(K, std::move(f));
}

QuadElement Modulus::generator() const {
  QuadElement g(*K, 1);
  for (const auto& [P, e] : factors) g = g * P.gen.pow(static_cast<unsigned>(e));
  return g;
}

Int Modulus::norm() const { return generator().norm(); }

bool Modulus::coprime_to(const PrimeIdeal& P) const {
  for (const auto& [Q, e] : factors)
    if (Q == P) return false;
  return true;
}

std::string Modulus::to_string() const {
  if (factors.empty()) return "1";
  std::string out;
  for (const auto& [P, e] : factors) {
    if (!out.empty()) out += ",";
    out += P.label();
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int fmod(const Int& a, const Int& b) { return a - b * fdiv(a, b); }

}  // namespace

std::int64_t RayClassGroup::residue_index(const QuadElement& x) const {
  Int u = x.a(), v = x.b();
  Int k = fdiv(v, Int(C_));
  u -= k * B_;
  v -= k * C_;
  u = fmod(u, Int(A_));
  return u.get_si() + A_ * v.get_si();
}

bool RayClassGroup::index_is_unit(std::int64_t idx) const { return unit_[static_cast<std::size_t>(idx)] != 0; }

RayClassGroup RayClassGroup::compute(const Modulus& m, std::uint64_t budget) {
  const QuadField& K = *m.K;
  const QuadElement g = m.generator();
  const Int N = g.norm();
  if (N > Int(static_cast<unsigned long>(budget)))
    throw Error(ErrorKind::BudgetExceeded, "modulus norm " + N.get_str() + " exceeds the enumeration budget");
  RayClassGroup G(m);

  // Z-basis of (g) in Hermite form
  const QuadElement gw = g * QuadElement::omega(K);
  Int c, s, t;
  mpz_gcdext(c.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.b().get_mpz_t(), gw.b().get_mpz_t());
  Int Bp = s * g.a() + t * gw.a();
  Int A = abs(g.a() * gw.b() - gw.a() * g.b()) / c;
  G.A_ = A.get_si();
  G.C_ = c.get_si();
  G.B_ = fmod(Bp, A).get_si();
  const std::int64_t n = G.A_ * G.C_;

  const std::int64_t tr = K.omega_trace(), nm = K.omega_norm();
  auto decode = [&](std::int64_t idx) { return std::pair<std::int64_t, std::int64_t>{idx % G.A_, idx / G.A_}; };
  auto reduce = [&](std::int64_t u, std::int64_t v) {
    std::int64_t k = v >= 0 ? v / G.C_ : -((-v + G.C_ - 1) / G.C_);
    u -= k * G.B_;
    v -= k * G.C_;
    u %= G.A_;
    if (u < 0) u += G.A_;
    return u + G.A_ * v;
  };
  auto mul = [&](std::int64_t x, std::int64_t y) {
    auto [u1, v1] = decode(x);
    auto [u2, v2] = decode(y);
    // w^2 = t w - n
    std::int64_t vv = v1 * v2;
    return reduce(u1 * u2 - nm * vv, u1 * v2 + u2 * v1 + tr * vv);
  };

  G.unit_.assign(static_cast<std::size_t>(n), 0);
  for (std::int64_t idx = 0; idx < n; ++idx) {
    auto [u, v] = decode(idx);
    bool unit = true;
    for (const auto& [P, e] : m.factors) {
      const std::int64_t p = static_cast<std::int64_t>(P.p);
      if (P.f == 2) {
        if (u % p == 0 && v % p == 0) unit = false;
      } else if ((u + v * static_cast<std::int64_t>(P.omega_root)) % p == 0) {
        unit = false;
      }
    }
    G.unit_[idx] = unit;
    G.unit_count_ += unit;
  }
  const std::int64_t one = G.residue_index(QuadElement(K, 1));

  // greedy generators for (O/m)^x
  std::vector<std::int64_t> gens;
  std::vector<std::uint8_t> inH(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> H{one};
  inH[one] = 1;
  for (std::int64_t x = 0; x < n && H.size() < G.unit_count_; ++x) {
    if (!G.unit_[x] || inH[x]) continue;
    gens.push_back(x);
    std::vector<std::int64_t> powers;
    for (std::int64_t y = x; !inH[y]; y = mul(y, x)) powers.push_back(y);
    const std::size_t old = H.size();
    for (std::int64_t y : powers)
      for (std::size_t i = 0; i < old; ++i) {
        std::int64_t z = mul(H[i], y);
        inH[z] = 1;
        H.push_back(z);
      }
  }
  const std::size_t r = gens.size();

  // breadth-first exponent vectors and relations
  G.table_.assign(static_cast<std::size_t>(n), {});
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
  HermiteLattice rel(r, Int(static_cast<unsigned long>(G.unit_count_)));
  const Int target(static_cast<unsigned long>(G.unit_count_));
  std::deque<std::int64_t> queue{one};
  seen[one] = 1;
  G.table_[one].assign(r, 0);
  while (!queue.empty()) {
    std::int64_t e = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < r; ++i) {
      std::int64_t z = mul(e, gens[i]);
      std::vector<std::int32_t> vec = G.table_[e];
      vec[i] += 1;
      if (!seen[z]) {
        seen[z] = 1;
        G.table_[z] = vec;
        queue.push_back(z);
      } else if (rel.determinant() != target) {
        std::vector<Int> d(r);
        bool zero = true;
        for (std::size_t k = 0; k < r; ++k) {
          d[k] = vec[k] - G.table_[z][k];
          if (d[k] != 0) zero = false;
        }
        if (!zero) rel.insert(d);
      }
    }
  }
  if (rel.determinant() != target) throw Error(ErrorKind::Inconsistent, "relation lattice has the wrong index");

  // quotient by the roots of unity
  const QuadElement zeta = K.units().front();
  const std::int64_t zi = G.residue_index(zeta);
  {
    std::vector<Int> d(r);
    for (std::size_t k = 0; k < r; ++k) d[k] = G.table_[zi][k];
    rel.insert(d);
    G.unit_image_ = 1;
    for (std::int64_t y = zi; y != one; y = mul(y, zi)) ++G.unit_image_;
  }

  SmithForm S = smith_normal_form(rel.rows());
  G.V_ = S.V;
  for (std::size_t i = 0; i < S.diagonal.size(); ++i) {
    if (S.diagonal[i] == 1) continue;
    G.components_.push_back(i);
    G.invariants_.push_back(S.diagonal[i]);
    // generator of component i: prod g_k^(V^-1)_{ik}
    std::int64_t acc = one;
    for (std::size_t k = 0; k < r; ++k) {
      Int ex = fmod(S.V_inverse[i][k], target);
      for (unsigned long c2 = 0, ec = ex.get_ui(); c2 < ec; ++c2) acc = mul(acc, gens[k]);
    }
    auto [u, v] = decode(acc);
    G.component_gens_.emplace_back(K, u, v);
  }
  return G;
}

Int RayClassGroup::order() const {
  Int o = 1;
  for (const auto& d : invariants_) o *= d;
  return o;
}

std::vector<Int> RayClassGroup::dlog(const QuadElement& x) const {
  const std::int64_t idx = residue_index(x);
  if (!index_is_unit(idx))
    throw Error(ErrorKind::PrimeDividesModulus, x.to_string() + " is not coprime to " + m_.to_string());
  const auto& vec = table_[static_cast<std::size_t>(idx)];
  std::vector<Int> out;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    Int s = 0;
    for (std::size_t k = 0; k < vec.size(); ++k) s += Int(vec[k]) * V_[k][components_[c]];
    out.push_back(fmod(s, invariants_[c]));
  }
  return out;
}

std::vector<Int> RayClassGroup::dlog(const PrimeIdeal& P) const {
  if (!m_.coprime_to(P)) throw Error(ErrorKind::PrimeDividesModulus, P.label() + " divides " + m_.to_string());
  return dlog(P.gen);
}

nlohmann::json RayClassGroup::to_json() const {
  nlohmann::json inv = nlohmann::json::array(), gens = nlohmann::json::array();
  for (const auto& d : invariants_) inv.push_back(d.get_si());
  for (const auto& g : component_gens_) gens.push_back(g.to_string());
  return {{"field", m_.K->label()},
          {"modulus", m_.to_string()},
          {"modulus_norm", m_.norm().get_str()},
          {"invariants", inv},
          {"order", order().get_str()},
          {"residue_units", unit_count_},
          {"unit_image", unit_image_},
          {"generators", gens}};
}

// ---------------------------------------------------------------------------

int Character::eval(const RayClassGroup& G, const QuadElement& x) const {
  auto v = G.dlog(x);
  long s = 0;
  for (std::size_t c = 0; c < coeffs.size(); ++c) {
    if (coeffs[c] == 0) continue;
    s += coeffs[c] * static_cast<long>(arith::mod_u64(v[c], static_cast<std::uint64_t>(n)));
  }
  return static_cast<int>(s % n);
}

int Character::eval(const RayClassGroup& G, const PrimeIdeal& P) const {
  if (!G.modulus().coprime_to(P)) throw Error(ErrorKind::PrimeDividesModulus, P.label() + " divides the modulus");
  return eval(G, P.gen);
}

bool Character::is_trivial() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](int c) { return c == 0; });
}

Character Character::scaled(int k) const {
  Character r = *this;
  for (auto& c : r.coeffs) c = ((c * k) % n + n) % n;
  return r;
}

Character Character::plus(const Character& o) const {
  Character r = *this;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = (r.coeffs[i] + o.coeffs[i]) % n;
  return r;
}

std::string Character::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += (i ? "," : "") + std::to_string(coeffs[i]);
  return s + "] mod " + std::to_string(n);
}

std::vector<Character> character_basis(const RayClassGroup& G, int n) {
  std::vector<Character> out;
  const auto& d = G.invariants();
  for (std::size_t c = 0; c < d.size(); ++c) {
    if (d[c] % n != 0) continue;
    Character ch{n, std::vector<int>(d.size(), 0)};
    ch.coeffs[c] = 1;
    out.push_back(ch);
  }
  return out;
}

std::vector<Character> all_characters(const RayClassGroup& G, int n) {
  const auto basis = character_basis(G, n);
  std::vector<Character> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) total *= static_cast<std::size_t>(n);
  for (std::size_t code = 0; code < total; ++code) {
    Character ch{n, std::vector<int>(G.invariants().size(), 0)};
    std::size_t c = code;
    for (const auto& b : basis) {
      ch = ch.plus(b.scaled(static_cast<int>(c % n)));
      c /= n;
    }
    out.push_back(ch);
  }
  return out;
}

std::vector<int> evaluation_vector(const RayClassGroup& G, const std::vector<Character>& basis, const PrimeIdeal& P) {
  std::vector<int> v;
  for (const auto& ch : basis) v.push_back(ch.eval(G, P));
  return v;
}

namespace {

int rank_mod(std::vector<std::vector<int>> M, int n) {
  int rank = 0;
  const std::size_t cols = M.empty() ? 0 : M[0].size();
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < M.size() && M[piv][c] % n == 0) ++piv;
    if (piv == M.size()) continue;
    std::swap(M[piv], M[rank]);
    int inv = 1;
    while ((M[rank][c] * inv) % n != 1) ++inv;
    for (auto& x : M[rank]) x = (x * inv) % n;
    for (std::size_t r = 0; r < M.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || M[r][c] % n == 0) continue;
      int f = M[r][c];
      for (std::size_t k = 0; k < cols; ++k) M[r][k] = ((M[r][k] - f * M[rank][k]) % n + n) % n;
    }
    ++rank;
  }
  return rank;
}

void check_characters(const std::vector<Character>& basis) {
  for (const auto& ch : basis)
    if (ch.n != basis.front().n) throw Error(ErrorKind::InvalidArgument, "characters of mixed order");
}

}  // namespace

SpanningResult spanning_check(const RayClassGroup& G, const std::vector<Character>& basis,
                              const std::vector<PrimeIdeal>& S) {
  check_characters(basis);
  SpanningResult r;
  for (const auto& P : S) r.matrix.push_back(evaluation_vector(G, basis, P));
  r.rank = basis.empty() ? 0 : rank_mod(r.matrix, basis.front().n);
  r.spans = r.rank == static_cast<int>(basis.size()) && !(S.empty() && !basis.empty());
  return r;
}

namespace {

std::vector<std::vector<int>> nonzero_vectors(std::size_t dim, int n) {
  std::vector<std::vector<int>> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= static_cast<std::size_t>(n);
  for (std::size_t code = 1; code < total; ++code) {
    std::vector<int> v(dim);
    std::size_t c = code;
    for (std::size_t i = 0; i < dim; ++i) {
      v[i] = static_cast<int>(c % n);
      c /= n;
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

CoverResult deciding_cover_check(const RayClassGroup& G, const std::vector<Character>& basis,
                                 const std::vector<PrimeIdeal>& T) {
  check_characters(basis);
  CoverResult r;
  for (const auto& P : T) {
    auto v = evaluation_vector(G, basis, P);
    r.certificate.emplace(v, P);
  }
  const int n = basis.empty() ? 2 : basis.front().n;
  for (const auto& v : nonzero_vectors(basis.size(), n))
    if (!r.certificate.count(v)) r.uncovered.push_back(v);
  // keep only nonzero vectors in the certificate
  r.certificate.erase(std::vector<int>(basis.size(), 0));
  r.covers = r.uncovered.empty();
  return r;
}

DecidingSet find_deciding_set(const RayClassGroup& G, const std::vector<Character>& basis,
                              const std::vector<PrimeIdeal>& stream, std::size_t budget) {
  check_characters(basis);
  DecidingSet D;
  if (basis.empty()) return D;
  const int n = basis.front().n;
  std::size_t needed = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) needed *= static_cast<std::size_t>(n);
  --needed;
  const std::vector<int> zero(basis.size(), 0);
  std::size_t examined = 0;
  for (const auto& P : stream) {
    if (D.certificate.size() == needed) break;
    if (examined++ >= budget) break;
    if (!G.modulus().coprime_to(P)) continue;
    auto v = evaluation_vector(G, basis, P);
    if (v == zero || D.certificate.count(v)) continue;
    D.certificate.emplace(v, P);
    D.primes.push_back(P);
  }
  if (D.certificate.size() != needed)
    throw Error(ErrorKind::BudgetExceeded, "deciding set incomplete: " + std::to_string(D.certificate.size()) + " of " +
                                               std::to_string(needed) + " vectors covered");
  return D;
}

}  // namespace qms
