#pragma once

#include <array>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "qms/curve.hpp"
#include "qms/invariants.hpp"

namespace qms {

// Projective point on X_D : X^2 + k Y^2 + Z^2 = 0 (k = 3 for D = 6, k = 2 for D = 10).
struct ConicPoint {
  int D = 6;
  std::array<QuadElement, 3> coords;

  const QuadField& field() const { return coords[0].field(); }
  // Scaled by a common factor so that the gcd is 1 and the first nonzero coordinate is normalized.
  ConicPoint canonical() const;
  bool operator==(const ConicPoint& o) const { return D == o.D && coords == o.coords; }
  std::string to_string() const;
};

int conic_weight(int D);
bool conic_contains(const ConicPoint& P);

// Smallest point of X_D(K) by height of the integral coordinates, if one exists below the bound.
std::optional<ConicPoint> find_base_point(const QuadField& K, int D, int search_bound = 6);

// Lines through base with slope (u : v), u, v in O_K of height <= H, meet the conic in a
// second point. Points are emitted once each, in sweep order.
void for_each_conic_point(const ConicPoint& base, int height, const std::function<void(const ConicPoint&)>& emit);
std::vector<ConicPoint> parametrize_conic(int D, const QuadField& K, const ConicPoint& base, int height);

struct JInvariant {
  QuadFraction j;
};

JInvariant j_from_point(const ConicPoint& P);

// Baba-Granath curve with t = -2(27j + 16), s^2 = -6j; coefficients c_0..c_6 in K[s]/(s^2 + 6j).
struct FamilyCurve {
  QuadFraction j;
  QuadFraction t;
  std::vector<QuadExt> coeffs;
};

FamilyCurve baba_granath_curve(const JInvariant& j);
IgusaClebsch family_invariants(const JInvariant& j);
// Closed form of the family invariants; agrees with the transvectant evaluation.
IgusaClebsch family_invariants_closed_form(const QuadFraction& j);
// Discriminant of the model obtained by x -> sqrt(t) x, i.e. I10(C_j) / t^15.
QuadFraction family_model_discriminant(const JInvariant& j);

// Hilbert symbol (a, b)_v with v a prime or 0 for the real place.
int hilbert_symbol(const Rat& a, const Rat& b, std::uint64_t place);
// Finite ramified primes and whether the real place ramifies.
struct Ramification {
  std::set<std::uint64_t> finite;
  bool real = false;
};
Ramification quaternion_ramification(const Rat& a, const Rat& b);

// B_6 = (-6, 2), B_10 = (-2, 5) over Q.
std::pair<Rat, Rat> quaternion_algebra(int D);
// Via Hilbert symbols: each finite ramified p of (a, b) has local degree 2 in K.
bool field_splits_algebra(const QuadField& K, const Rat& a, const Rat& b);
bool splits_quaternion(const QuadField& K, int D);
// Independent criterion: no ramified prime of B_D splits in K.
bool splits_quaternion_by_splitting(const QuadField& K, int D);
// X_D(K) is nonempty iff K splits (-1, -k).
bool conic_has_points(const QuadField& K, int D);

std::optional<QuadFraction> sqrt_in_field(const QuadFraction& x);
JInvariant find_j_from_curve(const GenusTwoCurve& C);
std::optional<JInvariant> find_j_from_invariants(const IgusaClebsch& ic);

enum class ReductionOutlook { PotentiallyGood, Bad, Undetermined };
ReductionOutlook potential_reduction(const JInvariant& j, const PrimeIdeal& P);
std::string to_string(ReductionOutlook r);

}  // namespace qms
