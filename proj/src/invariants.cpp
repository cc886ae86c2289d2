#include "qms/invariants.hpp"

#include "qms/error.hpp"

namespace qms {

std::string QuadExt::to_string() const {
  if (v_.is_zero()) return u_.to_string();
  return u_.to_string() + " + (" + v_.to_string() + ")*s";
}

namespace {

// Binary form of degree n: c[i] is the coefficient of x^i y^(n-i).
template <class T>
struct Form {
  int n;
  std::vector<T> c;
};

Int factorial(int n) {
  Int r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Int binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

template <class T>
Form<T> dx(const Form<T>& f, const T& zero) {
  Form<T> r{f.n - 1, std::vector<T>(f.n, zero)};
  for (int i = 1; i <= f.n; ++i) r.c[i - 1] = f.c[i] * Rat(i);
  return r;
}

template <class T>
Form<T> dy(const Form<T>& f, const T& zero) {
  Form<T> r{f.n - 1, std::vector<T>(f.n, zero)};
  for (int i = 0; i < f.n; ++i) r.c[i] = f.c[i] * Rat(f.n - i);
  return r;
}

template <class T>
Form<T> partial(Form<T> f, int nx, int ny, const T& zero) {
  for (int i = 0; i < nx; ++i) f = dx(f, zero);
  for (int i = 0; i < ny; ++i) f = dy(f, zero);
  return f;
}

template <class T>
Form<T> product(const Form<T>& f, const Form<T>& g, const T& zero) {
  Form<T> r{f.n + g.n, std::vector<T>(f.n + g.n + 1, zero)};
  for (int i = 0; i <= f.n; ++i)
    for (int j = 0; j <= g.n; ++j) r.c[i + j] = r.c[i + j] + f.c[i] * g.c[j];
  return r;
}

// (f, g)_k with the (m-k)!(n-k)!/(m! n!) normalization.
template <class T>
Form<T> transvectant(const Form<T>& f, const Form<T>& g, int k, const T& zero) {
  Form<T> acc{f.n + g.n - 2 * k, std::vector<T>(f.n + g.n - 2 * k + 1, zero)};
  for (int i = 0; i <= k; ++i) {
    Form<T> term = product(partial(f, k - i, i, zero), partial(g, i, k - i, zero), zero);
    Rat coef(binomial(k, i));
    if (i % 2 == 1) coef = -coef;
    for (int j = 0; j <= acc.n; ++j) acc.c[j] = acc.c[j] + term.c[j] * coef;
  }
  Rat norm(factorial(f.n - k) * factorial(g.n - k), factorial(f.n) * factorial(g.n));
  norm.canonicalize();
  for (auto& x : acc.c) x = x * norm;
  return acc;
}

}  // namespace

template <class T>
std::array<T, 4> igusa_clebsch_generic(const std::vector<T>& c, const T& zero) {
  Form<T> f{6, c};
  f.c.resize(7, zero);
  auto i = transvectant(f, f, 4, zero);
  auto delta = transvectant(i, i, 2, zero);
  auto y1 = transvectant(f, i, 4, zero);
  auto y2 = transvectant(i, y1, 2, zero);
  auto y3 = transvectant(i, y2, 2, zero);
  T A = transvectant(f, f, 6, zero).c[0];
  T B = transvectant(i, i, 4, zero).c[0];
  T C = transvectant(i, delta, 4, zero).c[0];
  T D = transvectant(y3, y1, 2, zero).c[0];

  T A2 = A * A, A3 = A2 * A;
  T I2 = A * Rat(-120);
  T I4 = A2 * Rat(-720) + B * Rat(6750);
  T I6 = A3 * Rat(8640) - A * B * Rat(108000) + C * Rat(202500);
  T I10 = A3 * A2 * Rat(-62208) + A3 * B * Rat(972000) + A2 * C * Rat(1620000) - A * B * B * Rat(3037500) -
          B * C * Rat(6075000) - D * Rat(4556250);
  return {I2, I4, I6, I10};
}

template std::array<QuadFraction, 4> igusa_clebsch_generic(const std::vector<QuadFraction>&, const QuadFraction&);
template std::array<QuadExt, 4> igusa_clebsch_generic(const std::vector<QuadExt>&, const QuadExt&);

IgusaClebsch igusa_clebsch(const std::vector<QuadFraction>& c) {
  const QuadField& K = c.front().field();
  auto r = igusa_clebsch_generic(c, QuadFraction(K, 0));
  if (r[3].is_zero()) throw Error(ErrorKind::SingularCurve, "I10 vanishes");
  return IgusaClebsch{r[0], r[1], r[2], r[3]};
}

IgusaClebsch igusa_clebsch(const GenusTwoCurve& C) { return igusa_clebsch(C.coeffs()); }

IgusaClebsch::Absolute IgusaClebsch::absolute() const {
  if (!I2.is_zero()) {
    QuadFraction inv = I10.inverse();
    QuadFraction I2_2 = I2 * I2, I2_3 = I2_2 * I2;
    return {"I2", {I2_3 * I2_2 * inv, I2_3 * I4 * inv, I2_2 * I6 * inv}};
  }
  QuadFraction inv = I10.inverse();
  return {"I4", {I4.pow(5) * inv * inv, I4 * I6 * inv, I6.pow(5) * inv * inv * inv}};
}

bool IgusaClebsch::same_point(const IgusaClebsch& o) const {
  // (I_k) ~ (I'_k) iff I_a^{w_b} I'_b^{w_a} = I'_a^{w_b} I_b^{w_a} for all pairs, with
  // matching zero patterns. Reduce weights by 2.
  const std::array<const QuadFraction*, 4> x{&I2, &I4, &I6, &I10};
  const std::array<const QuadFraction*, 4> y{&o.I2, &o.I4, &o.I6, &o.I10};
  const std::array<unsigned, 4> w{1, 2, 3, 5};
  for (int a = 0; a < 4; ++a) {
    if (x[a]->is_zero() != y[a]->is_zero()) return false;
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      if (x[a]->is_zero() || x[b]->is_zero()) continue;
      if (x[a]->pow(w[b]) * y[b]->pow(w[a]) != y[a]->pow(w[b]) * x[b]->pow(w[a])) return false;
    }
  }
  return true;
}

}  // namespace qms
