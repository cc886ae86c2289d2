#include "qms/counting.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <set>

#include "qms/error.hpp"

namespace qms {

namespace {

using Elem = GaloisField::Elem;

struct Reduced {
  poly::Poly f;  // trimmed, low degree first
  int degree;
};

Reduced reduce_model(const GenusTwoCurve& C, const ResidueField& R) {
  const GaloisField& F = R.field();
  const PrimeIdeal& P = R.prime();
  if (P.p == 2) throw Error(ErrorKind::BadReduction, "residue characteristic 2");
  if (C.y_scale() % P.p == 0) throw Error(ErrorKind::BadReduction, "prime divides the y-scaling of the model");
  poly::Poly f;
  for (const auto& c : C.integral_coeffs()) f.push_back(R.reduce(c));
  poly::trim(F, f);
  int deg = poly::degree(F, f);
  if (deg < C.degree()) throw Error(ErrorKind::BadReduction, "leading coefficient vanishes");
  if (!poly::is_squarefree(F, f)) throw Error(ErrorKind::BadReduction, "reduced polynomial has a repeated root");
  return {f, deg};
}

Elem horner(const GaloisField& F, const poly::Poly& f, const Elem& x) {
  Elem v = f.back();
  for (std::size_t i = f.size() - 1; i-- > 0;) v = F.add(F.mul(v, x), f[i]);
  return v;
}

std::uint64_t points_at_infinity(const GaloisField& F, const Reduced& r, const std::vector<std::uint8_t>* squares) {
  if (r.degree == 5) return 1;
  const Elem& lead = r.f.back();
  bool sq = squares ? (*squares)[F.index(lead)] != 0 : F.chi(lead) == 1;
  return sq ? 2 : 0;
}

}  // namespace

const EulerRecord* TraceTable::find(const PrimeIdeal& P) const {
  for (const auto& r : records)
    if (r.prime == P) return &r;
  return nullptr;
}

std::optional<std::string> counting_obstruction(const GenusTwoCurve& C, const PrimeIdeal& P) {
  try {
    reduce_model(C, ResidueField::of(P));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::BadReduction) return std::string(e.what());
    throw;
  }
  return std::nullopt;
}

std::uint64_t count_points(const GenusTwoCurve& C, const ResidueField& R) {
  const GaloisField& F = R.field();
  const Reduced r = reduce_model(C, R);
  const std::vector<std::uint8_t> squares = F.square_table();
  const std::int64_t q = static_cast<std::int64_t>(F.size());
  std::uint64_t affine = 0;
#pragma omp parallel for reduction(+ : affine) schedule(static) if (q > 20000)
  for (std::int64_t i = 0; i < q; ++i) {
    Elem v = horner(F, r.f, F.element(static_cast<std::uint64_t>(i)));
    if (F.is_zero(v))
      affine += 1;
    else if (squares[F.index(v)])
      affine += 2;
  }
  return affine + points_at_infinity(F, r, &squares);
}

std::uint64_t count_points_reference(const GenusTwoCurve& C, const ResidueField& R) {
  const GaloisField& F = R.field();
  const Reduced r = reduce_model(C, R);
  std::uint64_t n = 0;
  for (std::uint64_t i = 0; i < F.size(); ++i) {
    Elem v = horner(F, r.f, F.element(i));
    for (std::uint64_t j = 0; j < F.size(); ++j) {
      Elem y = F.element(j);
      if (F.equal(F.mul(y, y), v)) ++n;
    }
  }
  if (r.degree == 5) return n + 1;
  for (std::uint64_t j = 1; j < F.size(); ++j) {
    Elem y = F.element(j);
    if (F.equal(F.mul(y, y), r.f.back())) return n + 2;
  }
  return n;
}

EulerRecord euler_record(const GenusTwoCurve& C, const PrimeIdeal& P, bool with_square_check) {
  EulerRecord rec{P, 0, 0, std::nullopt, 0, true, {}};
  const ResidueField R = ResidueField::of(P);
  rec.q = R.size();
  rec.n1 = count_points(C, R);
  const std::int64_t q = static_cast<std::int64_t>(rec.q);
  const std::int64_t diff = q + 1 - static_cast<std::int64_t>(rec.n1);
  if (diff % 2 != 0)
    throw Error(ErrorKind::NotQMShape, P.label() + ": q + 1 - n1 = " + std::to_string(diff) + " is odd");
  rec.a = diff / 2;
  if (static_cast<double>(rec.a * rec.a) > 4.0 * static_cast<double>(q))
    throw Error(ErrorKind::NotQMShape, P.label() + ": Weil bound violated");
  if (with_square_check) {
    const ResidueField R2 = ResidueField::extension(P, 2);
    rec.n2 = count_points(C, R2);
    const Int qq(static_cast<unsigned long>(rec.q));
    const Int expect = qq * qq + 1 - 2 * (Int(rec.a) * rec.a - 2 * qq);
    if (Int(static_cast<unsigned long>(*rec.n2)) != expect)
      throw Error(ErrorKind::NotQMShape, P.label() + ": F_{q^2} count " + std::to_string(*rec.n2) +
                                             " differs from " + expect.get_str());
    const Int c1 = Int(static_cast<unsigned long>(rec.n1)) - qq - 1;
    const Int c2 = (Int(static_cast<unsigned long>(*rec.n2)) - qq * qq - 1 + c1 * c1) / 2;
    rec.lpoly = {Int(1), c1, c2, qq * c1, qq * qq};
  }
  return rec;
}

TraceTable trace_table(const GenusTwoCurve& C, std::uint64_t bound, std::uint64_t square_check_bound, int jobs) {
  TraceTable T;
  T.curve_id = C.name().empty() ? C.hash() : C.name();
  T.bound = bound;
  T.square_check_bound = square_check_bound;
  if (bound < 2) return T;
  const auto primes = C.field().primes_up_to_norm(bound);
  const std::int64_t n = static_cast<std::int64_t>(primes.size());
  std::vector<std::optional<EulerRecord>> slots(primes.size());
  std::vector<std::string> reasons(primes.size());
  std::vector<std::exception_ptr> failures(primes.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    const PrimeIdeal& P = primes[i];
    try {
      slots[i] = euler_record(C, P, P.norm() <= square_check_bound);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BadReduction || e.kind() == ErrorKind::NotQMShape)
        reasons[i] = e.what();
      else
        failures[i] = std::current_exception();
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (failures[i]) std::rethrow_exception(failures[i]);
    if (slots[i])
      T.records.push_back(std::move(*slots[i]));
    else
      T.bad.push_back({primes[i], reasons[i]});
  }
  return T;
}

std::vector<PrimeIdeal> bad_prime_support(const GenusTwoCurve& C) {
  const QuadField& K = C.field();
  std::set<std::uint64_t> ps;
  for (const auto& [p, e] : arith::factor(C.discriminant().norm())) ps.insert(p.get_ui());
  if (C.y_scale() > 1)
    for (const auto& [p, e] : arith::factor(C.y_scale())) ps.insert(p.get_ui());
  std::vector<PrimeIdeal> out;
  for (std::uint64_t p : ps) {
    for (const auto& P : K.split_prime(p)) {
      if (P.contains(C.discriminant()) || C.y_scale() % p == 0) out.push_back(P);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

GenuinenessVerdict genuineness_test(const TraceTable& T) {
  GenuinenessVerdict v;
  bool any_pair = false;
  for (const auto& r : T.records) {
    if (r.prime.index != 1) continue;
    const PrimeIdeal Pbar = r.prime.K->conjugate(r.prime);
    const EulerRecord* s = T.find(Pbar);
    if (!s) continue;
    any_pair = true;
    if (r.a * r.a != s->a * s->a) {
      v.genuine = true;
      v.witness = r.prime;
      v.witness_conjugate = Pbar;
      v.a = r.a;
      v.a_conjugate = s->a;
      return v;
    }
  }
  if (!any_pair) throw Error(ErrorKind::NoSplitPrimes, "trace table has no good conjugate pair");
  return v;
}

nlohmann::json prime_to_json(const PrimeIdeal& P) {
  return {{"label", P.label()}, {"p", P.p}, {"f", P.f}, {"gen", {int_to_json(P.gen.a()), int_to_json(P.gen.b())}}};
}

nlohmann::json TraceTable::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j{{"p", r.prime.p},      {"f", r.prime.f}, {"label", r.prime.label()},
                     {"gen", {int_to_json(r.prime.gen.a()), int_to_json(r.prime.gen.b())}},
                     {"q", r.q},            {"n1", r.n1},     {"a", r.a},
                     {"good", r.good}};
    if (r.n2) j["n2"] = *r.n2;
    recs.push_back(j);
  }
  nlohmann::json bads = nlohmann::json::array();
  for (const auto& b : bad)
    bads.push_back({{"label", b.prime.label()},
                    {"gen", {int_to_json(b.prime.gen.a()), int_to_json(b.prime.gen.b())}},
                    {"reason", b.reason}});
  return {{"curve", curve_id},
          {"bound", bound},
          {"square_check_bound", square_check_bound},
          {"records", recs},
          {"bad", bads}};
}

nlohmann::json GenuinenessVerdict::to_json() const {
  nlohmann::json j{{"verdict", genuine ? "genuine-witnessed" : "undecided"}};
  if (witness) {
    j["witness"] = {{"prime", witness->label()}, {"a", a}};
    j["conjugate"] = {{"prime", witness_conjugate->label()}, {"a", a_conjugate}};
  }
  return j;
}

}  // namespace qms
