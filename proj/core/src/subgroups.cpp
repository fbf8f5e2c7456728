#include "heis/subgroups.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "heis/errors.hpp"

namespace heis {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool near_integer(double x, double tol) { return circular_distance(x) <= tol; }
bool near_zero(double x, double tol) { return std::abs(x) <= tol; }

// Membership of a coordinate in Z p.
bool in_zp(int p, double x, double tol) { return p == 0 ? near_zero(x, tol) : near_integer(x, tol); }

void require_p01(int p, const char* name) {
  if (p != 0 && p != 1) {
    throw PreconditionError(std::string(name) + ": p must be 0 or 1");
  }
}

}  // namespace

void validate(const SubgroupKind& L) {
  std::visit(overloaded{
                 [](const Dim2& k) { require_p01(k.p, "Dim2"); },
                 [](const LatticeCylinder& k) {
                   if (k.k < 0 || k.k > 2) throw PreconditionError("LatticeCylinder: k must be 0, 1 or 2");
                 },
                 [](const LineTimesLattice& k) { require_p01(k.p, "LineTimesLattice"); },
                 [](const DiscreteLine& k) { require_p01(k.p, "DiscreteLine"); },
                 [](const CenterLattice&) {},
                 [](const FullLattice& k) {
                   if (k.p < 1) throw PreconditionError("FullLattice: p must be a positive integer");
                 },
             },
             L);
}

std::string to_string(const SubgroupKind& L) {
  return std::visit(overloaded{
                        [](const Dim2& k) { return "Dim2(p=" + std::to_string(k.p) + ")"; },
                        [](const LatticeCylinder& k) { return "LatticeCylinder(k=" + std::to_string(k.k) + ")"; },
                        [](const LineTimesLattice& k) { return "LineTimesLattice(p=" + std::to_string(k.p) + ")"; },
                        [](const DiscreteLine& k) { return "DiscreteLine(p=" + std::to_string(k.p) + ")"; },
                        [](const CenterLattice&) { return std::string("CenterLattice"); },
                        [](const FullLattice& k) { return "FullLattice(p=" + std::to_string(k.p) + ")"; },
                    },
                    L);
}

bool is_normal(const SubgroupKind& L) {
  return std::holds_alternative<Dim2>(L) || std::holds_alternative<LatticeCylinder>(L) ||
         std::holds_alternative<CenterLattice>(L);
}

bool has_invariance_criterion(const SubgroupKind& L) { return !is_normal(L); }

bool contains(const SubgroupKind& L, const GroupElement& g, double tol) {
  const double x = g.x(), y = g.y(), z = g.z;
  return std::visit(
      overloaded{
          [&](const Dim2& k) { return in_zp(k.p, y, tol); },
          [&](const LatticeCylinder& k) {
            const bool xs = k.k >= 1 ? near_integer(x, tol) : near_zero(x, tol);
            const bool ys = k.k >= 2 ? near_integer(y, tol) : near_zero(y, tol);
            return xs && ys;
          },
          [&](const LineTimesLattice& k) { return near_zero(y, tol) && in_zp(k.p, z, tol); },
          [&](const DiscreteLine& k) { return near_integer(x, tol) && near_zero(y, tol) && in_zp(k.p, z, tol); },
          [&](const CenterLattice&) { return near_zero(x, tol) && near_zero(y, tol) && near_integer(z, tol); },
          [&](const FullLattice& k) {
            const double scaled = z * k.p;
            return near_integer(x, tol) && near_integer(y, tol) &&
                   std::abs(z - std::round(scaled) / k.p) <= tol;
          },
      },
      L);
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

double circular_distance(double x) { return std::abs(x - std::round(x)); }

double class_mod(int p, double x) { return p == 0 ? x : wrap_unit(x); }

double class_distance(int p, double a, double b) {
  return p == 0 ? std::abs(a - b) : circular_distance(a - b);
}

bool coset_equal_0p(int p, const GroupElement& g1, const GroupElement& g2, double tol) {
  require_p01(p, "coset_equal_0p");
  const double w1 = g1.z + 0.5 * g1.x() * g1.y();
  const double w2 = g2.z + 0.5 * g2.x() * g2.y();
  return circular_distance(g1.x() - g2.x()) <= tol && std::abs(g1.y() - g2.y()) <= tol &&
         class_distance(p, w1, w2) <= tol;
}

bool coset_equal_1p(int p, const GroupElement& g1, const GroupElement& g2, double tol) {
  require_p01(p, "coset_equal_1p");
  const double w1 = g1.z + 0.5 * g1.x() * g1.y();
  const double w2 = g2.z + 0.5 * g2.x() * g2.y();
  return std::abs(g1.y() - g2.y()) <= tol && class_distance(p, w1, w2) <= tol;
}

QuotientPoint0p project_0p(int p, const GroupElement& g) {
  require_p01(p, "project_0p");
  return {p, wrap_unit(g.x()), g.y(), class_mod(p, g.z + 0.5 * g.x() * g.y())};
}

QuotientPoint1p project_1p(int p, const GroupElement& g) {
  require_p01(p, "project_1p");
  return {p, g.y(), class_mod(p, g.z + 0.5 * g.x() * g.y())};
}

double quotient_distance(const QuotientPoint0p& a, const QuotientPoint0p& b) {
  return std::max({circular_distance(a.u - b.u), std::abs(a.s - b.s), class_distance(a.p, a.t, b.t)});
}

double quotient_distance(const QuotientPoint1p& a, const QuotientPoint1p& b) {
  return std::max(std::abs(a.s - b.s), class_distance(a.p, a.t, b.t));
}

InvarianceReport invariance_conditions(const SubgroupKind& L, const LinearField& X, double tol) {
  validate(L);
  if (!has_invariance_criterion(L)) {
    throw UnsupportedSubgroupError("no invariance criterion for normal subgroup " + to_string(L));
  }

  const Mat2& A = X.A;
  InvarianceReport report;
  auto require = [&](bool ok, const char* what) {
    if (!ok) report.violated.emplace_back(what);
  };
  // Shared tail of every non-lattice item: eta in R e2, alpha = 0 if eta != 0.
  auto eta_conditions = [&] {
    require(near_zero(X.eta.x(), tol), "eta in R e2");
    require(near_zero(X.eta.y(), tol) || near_zero(A(0, 1), tol), "alpha = 0 if eta != 0");
  };

  std::visit(overloaded{
                 [&](const FullLattice&) {
                   require(A.cwiseAbs().maxCoeff() <= tol && X.eta.cwiseAbs().maxCoeff() <= tol, "D = 0");
                 },
                 [&](const DiscreteLine& k) {
                   require(near_zero(A(0, 0), tol) && near_zero(A(1, 0), tol), "A e1 = 0");
                   if (k.p == 1) require(near_zero(A(1, 1), tol), "A e2 = alpha e1");
                   eta_conditions();
                 },
                 [&](const LineTimesLattice& k) {
                   require(near_zero(A(1, 0), tol), "A e1 = lambda e1");
                   if (k.p == 1) require(near_zero(A(1, 1) + A(0, 0), tol), "A e2 = -lambda e2 + alpha e1");
                   eta_conditions();
                 },
                 [](const auto&) {},
             },
             L);
  return report;
}

std::vector<InvarianceWitness> invariance_violations(const SubgroupKind& L, const LinearField& X,
                                                     const BruteForceOptions& opts,
                                                     std::size_t max_witnesses) {
  validate(L);
  if (opts.samples < 1) throw PreconditionError("brute-force invariance needs samples >= 1");

  std::mt19937_64 rng(opts.seed);
  std::vector<GroupElement> members;
  members.reserve(static_cast<std::size_t>(opts.samples));
  for (int i = 0; i < opts.samples; ++i) {
    members.push_back(sample_member(L, rng, opts.lattice_window, opts.continuous_window));
  }

  std::vector<InvarianceWitness> witnesses;
  for (double t : opts.times) {
    const FlowMap phi = flow_map(X, t);
    for (const auto& g : members) {
      const GroupElement image = phi(g);
      if (!contains(L, image, opts.tol)) {
        witnesses.push_back({g, t, image});
        if (witnesses.size() >= max_witnesses) return witnesses;
      }
    }
  }
  return witnesses;
}

bool is_invariant_bruteforce(const SubgroupKind& L, const LinearField& X, const BruteForceOptions& opts) {
  return invariance_violations(L, X, opts, 1).empty();
}

}  // namespace heis
