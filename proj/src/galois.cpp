#include "qms/galois.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "qms/error.hpp"
#include "qms/smith.hpp"

namespace qms {

namespace {
using Elem = GaloisField::Elem;
}

QuatOrderModEll::QuatOrderModEll(std::uint64_t ell) : ell_(ell), F_(GaloisField::quadratic(ell)) {
  if (!arith::is_prime(ell)) throw Error(ErrorKind::InvalidArgument, "l must be prime");
  if (ell > 7) throw Error(ErrorKind::BudgetExceeded, "full enumeration is limited to l <= 7");
  const std::uint64_t q = F_.size();
  for (std::uint64_t ia = 1; ia < q; ++ia) {
    Elem alpha = F_.element(ia);
    for (std::uint64_t ib = 0; ib < q; ++ib)
      elements_.push_back(Mat2{alpha, F_.element(ib), F_.zero(), F_.pow(alpha, ell)});
  }
}

QuatOrderModEll build_quat_order_group(std::uint64_t ell) { return QuatOrderModEll(ell); }

Mat2 QuatOrderModEll::mul(const Mat2& x, const Mat2& y) const {
  const GaloisField& F = F_;
  return Mat2{F.add(F.mul(x.a, y.a), F.mul(x.b, y.c)), F.add(F.mul(x.a, y.b), F.mul(x.b, y.d)),
              F.add(F.mul(x.c, y.a), F.mul(x.d, y.c)), F.add(F.mul(x.c, y.b), F.mul(x.d, y.d))};
}

Mat2 QuatOrderModEll::identity() const { return Mat2{F_.one(), F_.zero(), F_.zero(), F_.one()}; }

bool QuatOrderModEll::equal(const Mat2& x, const Mat2& y) const {
  return F_.equal(x.a, y.a) && F_.equal(x.b, y.b) && F_.equal(x.c, y.c) && F_.equal(x.d, y.d);
}

bool QuatOrderModEll::has_shape(const Mat2& m) const {
  return !F_.is_zero(m.a) && F_.is_zero(m.c) && F_.equal(m.d, F_.pow(m.a, ell_));
}

std::optional<Mat2> QuatOrderModEll::inverse(const Mat2& m) const {
  const GaloisField& F = F_;
  Elem det = F.sub(F.mul(m.a, m.d), F.mul(m.b, m.c));
  if (F.is_zero(det)) return std::nullopt;
  Elem di = F.inv(det);
  return Mat2{F.mul(m.d, di), F.neg(F.mul(m.b, di)), F.neg(F.mul(m.c, di)), F.mul(m.a, di)};
}

std::uint64_t QuatOrderModEll::element_order(const Mat2& m) const {
  Mat2 x = m;
  std::uint64_t n = 1;
  while (!equal(x, identity())) {
    x = mul(x, m);
    ++n;
  }
  return n;
}

bool QuatOrderModEll::verify_group_axioms() const {
  bool has_identity = false;
  for (const auto& x : elements_) {
    if (!has_shape(x)) return false;
    if (equal(x, identity())) has_identity = true;
    auto inv = inverse(x);
    if (!inv || !has_shape(*inv)) return false;
  }
  if (!has_identity) return false;
  for (const auto& x : elements_)
    for (const auto& y : elements_)
      if (!has_shape(mul(x, y))) return false;
  return true;
}

bool SesReport::exact() const {
  return group_order == (ell * ell - 1) * ell * ell && kernel_order == ell * ell && kernel_abelian &&
         kernel_exponent == ell && kernel_isomorphic_to_additive && quotient_order == ell * ell - 1 &&
         quotient_cyclic && reduction_is_homomorphism && kernel_order * quotient_order == group_order;
}

nlohmann::json SesReport::to_json() const {
  return {{"ell", ell},
          {"group_order", group_order},
          {"kernel_order", kernel_order},
          {"kernel_abelian", kernel_abelian},
          {"kernel_exponent", kernel_exponent},
          {"kernel_isomorphic_to_additive", kernel_isomorphic_to_additive},
          {"quotient_order", quotient_order},
          {"quotient_cyclic", quotient_cyclic},
          {"reduction_is_homomorphism", reduction_is_homomorphism},
          {"exact", exact()}};
}

SesReport verify_ses(std::uint64_t ell) {
  QuatOrderModEll G(ell);
  const GaloisField& F = G.field();
  SesReport r;
  r.ell = ell;
  r.group_order = G.order();

  // r(alpha, beta) = alpha into F_{l^2}^x
  r.reduction_is_homomorphism = true;
  for (const auto& x : G.elements()) {
    for (const auto& y : G.elements()) {
      if (!F.equal(G.mul(x, y).a, F.mul(x.a, y.a))) {
        r.reduction_is_homomorphism = false;
        break;
      }
    }
    if (!r.reduction_is_homomorphism) break;
  }

  std::vector<Mat2> kernel;
  std::set<std::uint64_t> image;
  for (const auto& x : G.elements()) {
    if (F.equal(x.a, F.one())) kernel.push_back(x);
    image.insert(F.index(x.a));
  }
  r.kernel_order = kernel.size();
  r.kernel_abelian = true;
  for (const auto& x : kernel)
    for (const auto& y : kernel)
      if (!G.equal(G.mul(x, y), G.mul(y, x))) r.kernel_abelian = false;
  r.kernel_exponent = 1;
  for (const auto& x : kernel) r.kernel_exponent = std::lcm(r.kernel_exponent, G.element_order(x));

  // beta -> (1, beta; 0, 1) is a bijective homomorphism from F^+
  r.kernel_isomorphic_to_additive = kernel.size() == F.size();
  for (std::uint64_t i = 0; i < F.size() && r.kernel_isomorphic_to_additive; ++i) {
    for (std::uint64_t j = 0; j < F.size(); ++j) {
      Mat2 x{F.one(), F.element(i), F.zero(), F.one()};
      Mat2 y{F.one(), F.element(j), F.zero(), F.one()};
      Mat2 s{F.one(), F.add(F.element(i), F.element(j)), F.zero(), F.one()};
      if (!G.equal(G.mul(x, y), s)) {
        r.kernel_isomorphic_to_additive = false;
        break;
      }
    }
  }

  r.quotient_order = image.size();
  for (std::uint64_t idx : image) {
    Elem a = F.element(idx);
    Elem x = a;
    std::uint64_t n = 1;
    while (!F.equal(x, F.one())) {
      x = F.mul(x, a);
      ++n;
    }
    if (n == r.quotient_order) {
      r.quotient_cyclic = true;
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Z/l^k [theta] with theta^2 = s theta + r.
struct LocalRing {
  std::int64_t mod, s, r;
  struct E {
    std::int64_t x, y;  // x + y theta
  };
  std::int64_t red(std::int64_t v) const {
    v %= mod;
    return v < 0 ? v + mod : v;
  }
  E add(E a, E b) const { return {red(a.x + b.x), red(a.y + b.y)}; }
  E neg(E a) const { return {red(-a.x), red(-a.y)}; }
  E mul(E a, E b) const {
    // (x1 + y1 t)(x2 + y2 t) = x1x2 + r y1y2 + (x1y2 + x2y1 + s y1y2) t
    std::int64_t yy = red(a.y * b.y);
    return {red(a.x * b.x + r * yy), red(a.x * b.y + a.y * b.x + s * yy)};
  }
  E conj(E a) const { return {red(a.x + s * a.y), red(-a.y)}; }
  std::int64_t norm(E a) const {
    // a * conj(a) lands in Z/l^k
    E n = mul(a, conj(a));
    return n.x;
  }
  bool eq(E a, E b) const { return a.x == b.x && a.y == b.y; }
};

// alpha + beta j with j^2 = l, j alpha = conj(alpha) j
struct Quat {
  LocalRing::E alpha, beta;
};

}  // namespace

bool LocalModelReport::all() const {
  return i_squared_is_u && j_squared_is_ell && ij_anticommute && ideal_square_is_ell && valuation_ok &&
         norm_multiplicative;
}

nlohmann::json LocalModelReport::to_json() const {
  return {{"ell", ell},
          {"precision", precision},
          {"u", u},
          {"i_squared_is_u", i_squared_is_u},
          {"j_squared_is_ell", j_squared_is_ell},
          {"ij_anticommute", ij_anticommute},
          {"ideal_square_is_ell", ideal_square_is_ell},
          {"valuation_ok", valuation_ok},
          {"norm_multiplicative", norm_multiplicative},
          {"all", all()}};
}

LocalModelReport verify_local_model(std::uint64_t ell, int k) {
  if (!(ell == 2 || ell == 3 || ell == 5 || ell == 7)) throw Error(ErrorKind::InvalidArgument, "l must be 2, 3, 5 or 7");
  if (k < 1 || k > 4) throw Error(ErrorKind::InvalidArgument, "precision must be 1..4");
  std::int64_t mod = 1;
  for (int i = 0; i < k; ++i) mod *= static_cast<std::int64_t>(ell);
  const std::int64_t L = static_cast<std::int64_t>(ell);

  LocalRing R{mod, 0, 0};
  LocalRing::E i_elem{};
  std::int64_t u = 0;
  if (ell == 2) {
    // unramified extension Z_2[theta], theta^2 = theta + 1; i = 2 theta - 1 squares to 5
    R.s = 1;
    R.r = 1;
    u = 5;
    i_elem = {R.red(-1), 2};
  } else {
    u = static_cast<std::int64_t>(arith::least_nonresidue(ell));
    R.r = u;
    i_elem = {0, 1};
  }

  auto qmul = [&](const Quat& a, const Quat& b) {
    // (a + b j)(c + d j) = a c + l b conj(d) + (a d + b conj(c)) j
    LocalRing::E lbd = R.mul(R.mul(a.beta, R.conj(b.beta)), {R.red(L), 0});
    return Quat{R.add(R.mul(a.alpha, b.alpha), lbd), R.add(R.mul(a.alpha, b.beta), R.mul(a.beta, R.conj(b.alpha)))};
  };
  auto qeq = [&](const Quat& a, const Quat& b) { return R.eq(a.alpha, b.alpha) && R.eq(a.beta, b.beta); };
  auto qnorm = [&](const Quat& a) { return R.red(R.norm(a.alpha) - L * R.norm(a.beta)); };
  const LocalRing::E zero{0, 0}, one{1, 0};

  LocalModelReport rep;
  rep.ell = ell;
  rep.precision = k;
  rep.u = u;
  const Quat I{i_elem, zero}, J{zero, one};
  rep.i_squared_is_u = qeq(qmul(I, I), Quat{{R.red(u), 0}, zero});
  rep.j_squared_is_ell = qeq(qmul(J, J), Quat{{R.red(L), 0}, zero});
  Quat ij = qmul(I, J), ji = qmul(J, I);
  rep.ij_anticommute = qeq(ij, Quat{R.neg(ji.alpha), R.neg(ji.beta)});

  // Coordinates (alpha.x, alpha.y, beta.x, beta.y). J = O j has Z-basis j, theta j, l, l theta.
  auto coords = [](const Quat& q) { return std::vector<Int>{Int(q.alpha.x), Int(q.alpha.y), Int(q.beta.x), Int(q.beta.y)}; };
  const std::vector<Quat> Jbasis{{zero, one}, {zero, {0, 1}}, {{R.red(L), 0}, zero}, {{0, R.red(L)}, zero}};
  HermiteLattice J2(4, Int(mod));
  for (const auto& x : Jbasis)
    for (const auto& y : Jbasis) J2.insert(coords(qmul(x, y)));
  HermiteLattice ellO(4, Int(mod));
  for (int c = 0; c < 4; ++c) {
    std::vector<Int> v(4, 0);
    v[c] = L;
    ellO.insert(v);
  }
  bool contained = true;
  for (const auto& row : ellO.rows()) contained = contained && J2.contains(row);
  for (const auto& row : J2.rows()) contained = contained && ellO.contains(row);
  rep.ideal_square_is_ell = contained && J2.determinant() == ellO.determinant();

  auto val = [&](std::int64_t n) {
    int v = 0;
    while (n != 0 && n % L == 0 && v < k) {
      n /= L;
      ++v;
    }
    return n == 0 ? k : v;
  };
  std::mt19937_64 rng(ell * 1000 + static_cast<std::uint64_t>(k));
  std::uniform_int_distribution<std::int64_t> dist(0, mod - 1);
  auto random_quat = [&]() { return Quat{{dist(rng), dist(rng)}, {dist(rng), dist(rng)}}; };

  rep.valuation_ok = val(qnorm(J)) == 1;
  for (int t = 0; t < 200; ++t) {
    Quat x = random_quat();
    bool unit = R.norm(x.alpha) % L != 0;
    if (unit && val(qnorm(x)) != 0) rep.valuation_ok = false;
  }
  rep.norm_multiplicative = true;
  for (int t = 0; t < 100; ++t) {
    Quat x = random_quat(), y = random_quat();
    if (qnorm(qmul(x, y)) != R.red(qnorm(x) * qnorm(y))) rep.norm_multiplicative = false;
  }
  return rep;
}

CartanResult nonsplit_cartan_check(const std::vector<TraceSample>& samples, std::uint64_t ell) {
  GaloisField F = GaloisField::quadratic(ell);
  std::set<std::pair<std::uint64_t, std::uint64_t>> pairs;
  std::set<std::uint64_t> traces;
  for (std::uint64_t i = 1; i < F.size(); ++i) {
    Elem a = F.element(i);
    Elem conj = F.pow(a, ell);
    Elem tr = F.add(a, conj), det = F.mul(a, conj);
    pairs.insert({tr[0], det[0]});
    traces.insert(tr[0]);
  }
  CartanResult r;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    bool ok = s.det ? pairs.count({s.trace % ell, *s.det % ell}) > 0 : traces.count(s.trace % ell) > 0;
    if (!ok) {
      r.consistent = false;
      r.flagged.push_back(i);
    }
  }
  return r;
}

CycleTypeSample sextic_cycle_type(const GenusTwoCurve& C, const PrimeIdeal& P) {
  if (P.p == 2) throw Error(ErrorKind::BadReduction, "residue characteristic 2");
  if (auto why = counting_obstruction(C, P)) throw Error(ErrorKind::BadReduction, *why);
  const ResidueField R = ResidueField::of(P);
  poly::Poly f;
  for (const auto& c : C.integral_coeffs()) f.push_back(R.reduce(c));
  poly::trim(R.field(), f);
  auto degs = poly::factor_degrees(R.field(), f);
  std::sort(degs.begin(), degs.end());
  return CycleTypeSample{P, degs};
}

bool cycle_type_in_a4(const std::vector<int>& d) {
  return d == std::vector<int>{1, 1, 1, 1, 1, 1} || d == std::vector<int>{1, 1, 2, 2} ||
         d == std::vector<int>{3, 3};
}

ParityProbe trace_parity_probe(const TraceTable& T, const std::vector<PrimeIdeal>& S) {
  ParityProbe r;
  for (const auto& P : S) {
    const EulerRecord* rec = T.find(P);
    if (!rec) throw Error(ErrorKind::MissingPrime, P.label() + " is not a good prime of the table");
    int parity = static_cast<int>(((rec->a % 2) + 2) % 2);
    r.parities.push_back(parity);
    if (parity == 0) r.all_odd = false;
  }
  return r;
}

}  // namespace qms
