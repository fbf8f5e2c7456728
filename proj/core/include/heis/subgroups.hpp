#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "heis/group.hpp"

namespace heis {

inline constexpr double kDefaultTol = 1e-9;

// Canonical closed subgroups of H, up to automorphism. In the names below
// "Z p" is Z when p = 1 and {0} when p = 0.

/// (R x Z p) x R.
struct Dim2 {
  int p = 0;
};
/// Z^k x R, with Z^0 = {0}, Z^1 = Z e1, Z^2 = Z^2.
struct LatticeCylinder {
  int k = 0;
};
/// R e1 x Z p.
struct LineTimesLattice {
  int p = 0;
};
/// Z e1 x Z p.
struct DiscreteLine {
  int p = 0;
};
/// {0} x Z.
struct CenterLattice {};
/// Z^2 x (1/p) Z, p >= 1.
struct FullLattice {
  int p = 1;
};

using SubgroupKind =
    std::variant<Dim2, LatticeCylinder, LineTimesLattice, DiscreteLine, CenterLattice, FullLattice>;

/// Throws PreconditionError when a parameter is outside its documented range.
void validate(const SubgroupKind& L);

std::string to_string(const SubgroupKind& L);

/// Normal subgroups are Dim2, LatticeCylinder and CenterLattice.
bool is_normal(const SubgroupKind& L);

/// Whether the flow-invariance criterion is available for this kind.
bool has_invariance_criterion(const SubgroupKind& L);

/// Membership up to `tol`; integer coordinates are compared with the nearest integer.
bool contains(const SubgroupKind& L, const GroupElement& g, double tol = kDefaultTol);

/// Representative fractional part in [0, 1).
double wrap_unit(double x);

/// Distance from x to the nearest integer.
double circular_distance(double x);

/// [x]_p: x itself for p = 0, x mod 1 in [0, 1) for p = 1.
double class_mod(int p, double x);

/// Distance between two values of R (p = 0) or R/Z (p = 1).
double class_distance(int p, double a, double b);

/// Point of (T x R) x T^p.
struct QuotientPoint0p {
  int p = 0;
  double u = 0.0;
  double s = 0.0;
  double t = 0.0;
};

/// Point of R x T^p.
struct QuotientPoint1p {
  int p = 0;
  double s = 0.0;
  double t = 0.0;
};

/// Same right coset of Z e1 x Z p.
bool coset_equal_0p(int p, const GroupElement& g1, const GroupElement& g2, double tol = kDefaultTol);

/// Same right coset of R e1 x Z p.
bool coset_equal_1p(int p, const GroupElement& g1, const GroupElement& g2, double tol = kDefaultTol);

/// ((x, y), z) -> ([x]_1, y, [z + xy/2]_p).
QuotientPoint0p project_0p(int p, const GroupElement& g);

/// ((x, y), z) -> (y, [z + xy/2]_p).
QuotientPoint1p project_1p(int p, const GroupElement& g);

double quotient_distance(const QuotientPoint0p& a, const QuotientPoint0p& b);
double quotient_distance(const QuotientPoint1p& a, const QuotientPoint1p& b);

/// Outcome of the algebraic invariance test: the names of the violated
/// conditions, empty when the subgroup is invariant.
struct InvarianceReport {
  std::vector<std::string> violated;
  bool invariant() const { return violated.empty(); }
};

/// Algebraic conditions on (A, eta) under which the flow of X preserves L.
/// Throws UnsupportedSubgroupError for the normal kinds.
InvarianceReport invariance_conditions(const SubgroupKind& L, const LinearField& X,
                                       double tol = kDefaultTol);

inline bool is_invariant(const SubgroupKind& L, const LinearField& X, double tol = kDefaultTol) {
  return invariance_conditions(L, X, tol).invariant();
}

struct BruteForceOptions {
  int samples = 64;
  std::vector<double> times = {-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0};
  double tol = kDefaultTol;
  int lattice_window = 5;
  double continuous_window = 10.0;
  std::uint64_t seed = 0x5eed;
};

/// Draw a member of L: lattice coordinates uniformly in the index window,
/// continuous ones uniformly in [-R, R].
template <typename Rng>
GroupElement sample_member(const SubgroupKind& L, Rng& rng, int lattice_window,
                           double continuous_window);

/// Sampling falsifier: pushes members of L through the flow at every time and
/// checks membership of the images. `false` refutes invariance.
bool is_invariant_bruteforce(const SubgroupKind& L, const LinearField& X,
                             const BruteForceOptions& opts = {});

/// First witness (member, time, image) refuting invariance, if any.
struct InvarianceWitness {
  GroupElement member;
  double time = 0.0;
  GroupElement image;
};
std::vector<InvarianceWitness> invariance_violations(const SubgroupKind& L, const LinearField& X,
                                                     const BruteForceOptions& opts,
                                                     std::size_t max_witnesses = 1);

}  // namespace heis

#include "heis/subgroups_sampling.hpp"
