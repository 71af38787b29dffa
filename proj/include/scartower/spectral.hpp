#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "scartower/circuit.hpp"
#include "scartower/errors.hpp"
#include "scartower/fock.hpp"
#include "scartower/op_algebra.hpp"
#include "scartower/parent_decomp.hpp"
#include "scartower/site_graph.hpp"
#include "scartower/tower_spec.hpp"

namespace scartower {

inline constexpr double kEigenstateTol = 1e-10;
inline constexpr double kSpacingTol = 1e-9;

/// Tower energies with an equal-spacing verdict.  omega0 and omega are
/// anchored to E_0 and E_1 - E_0 (no fitting); the deviation is
/// max_p |E_p - (omega0 + omega p)|.
struct SpacingReport {
  enum class Verdict { EquallySpaced, NotEigenstates, Unequal };

  std::vector<Complex> energies;
  std::vector<double> residuals;
  Complex omega0{0.0};
  Complex omega{0.0};
  double max_deviation = 0.0;
  Verdict verdict = Verdict::EquallySpaced;
  std::vector<int> non_eigenstate_ps;
  std::optional<int> truncated_at;  ///< tower end L when it precedes p_max

  static std::string verdict_name(Verdict v) {
    switch (v) {
      case Verdict::EquallySpaced: return "EquallySpaced";
      case Verdict::NotEigenstates: return "NotEigenstates";
      default: return "Unequal";
    }
  }
};

inline SpacingReport tower_energies(const Operator& h, const TowerSpec& q, int p_max,
                                    double resid_tol = kEigenstateTol,
                                    double spacing_tol = kSpacingTol) {
  SpacingReport rep;
  const int n = q.n_sites;
  const Operator qdag = q.creation_operator();
  SparseState psi = SparseState::vacuum(n);
  for (int p = 0; p <= p_max; ++p) {
    if (p > 0) {
      psi = apply(qdag, psi);
      if (psi.empty()) {
        rep.truncated_at = p - 1;
        break;
      }
      psi = psi.normalized();
    }
    const EigenCheck chk = eigen_check(h, psi);
    rep.energies.push_back(chk.eigenvalue);
    rep.residuals.push_back(chk.residual);
    if (chk.residual >= resid_tol) rep.non_eigenstate_ps.push_back(p);
  }

  if (!rep.non_eigenstate_ps.empty()) {
    rep.verdict = SpacingReport::Verdict::NotEigenstates;
    return rep;
  }
  rep.omega0 = rep.energies.empty() ? Complex(0.0) : rep.energies.front();
  rep.omega = rep.energies.size() > 1 ? rep.energies[1] - rep.energies[0] : Complex(0.0);
  for (std::size_t p = 0; p < rep.energies.size(); ++p)
    rep.max_deviation = std::max(
        rep.max_deviation,
        std::abs(rep.energies[p] - (rep.omega0 + rep.omega * static_cast<double>(p))));
  rep.verdict = rep.max_deviation < spacing_tol ? SpacingReport::Verdict::EquallySpaced
                                                : SpacingReport::Verdict::Unequal;
  return rep;
}

/// Check of the annihilation induction: when a k-local operator kills
/// the tower states up to the commutator depth bound, it kills the
/// whole tower.  Both halves are reported so a failed hypothesis is
/// distinguished from a genuine violation (which `consistent()` flags).
struct InductionReport {
  int k = 0;
  int hypothesis_depth = 0;  ///< hypothesis covers p <= this
  int tower_end = 0;
  std::vector<double> norms;  ///< ||H |Q^p>|| for p = 0..tower_end
  bool hypothesis_holds = true;
  std::vector<int> hypothesis_failures;
  bool conclusion_holds = true;
  std::vector<int> conclusion_failures;

  bool consistent() const { return !(hypothesis_holds && !conclusion_holds); }
};

inline InductionReport annihilation_induction_check(const Operator& h, const TowerSpec& q, int k,
                                                    double tol = kEigenstateTol) {
  if (k_locality(h) > k)
    throw Error("operator is not " + std::to_string(k) + "-local");
  InductionReport rep;
  rep.k = k;
  // Dicke commutators never grow the support, giving depth 2k; general
  // pure-creation towers get the safe bound 2k+1.
  rep.hypothesis_depth = q.is_dicke() ? 2 * k : 2 * k + 1;

  const int n = q.n_sites;
  const Operator qdag = q.creation_operator();
  SparseState psi = SparseState::vacuum(n);
  int p = 0;
  while (true) {
    const double nrm = apply(h, psi).norm();
    rep.norms.push_back(nrm);
    if (nrm >= tol) {
      if (p <= rep.hypothesis_depth) rep.hypothesis_failures.push_back(p);
      rep.conclusion_failures.push_back(p);
    }
    psi = apply(qdag, psi);
    if (psi.empty() || p >= n) break;
    psi = psi.normalized();
    ++p;
  }
  rep.tower_end = p;
  rep.hypothesis_holds = rep.hypothesis_failures.empty();
  rep.conclusion_holds = rep.conclusion_failures.empty();
  return rep;
}

/// Far-separated p-quasiparticle product configuration for a tower:
/// p pairwise-distant centers (packed at a radius that accounts for the
/// term diameter d1, the coverage distance d2, and r_max/2), each
/// realized by its nearest term.  nullopt when the packing or coverage
/// fails.
inline std::optional<std::uint64_t> tower_witness(const TowerSpec& q, const SiteGraph& g,
                                                  int r_max, int p, const TowerClassReport& rep) {
  if (p == 0) return std::uint64_t{0};
  if (q.is_dicke()) {
    try {
      return witness_state(g, r_max, p);
    } catch (const PackingInsufficient&) {
      return std::nullopt;
    }
  }
  if (!rep.q2.satisfied) return std::nullopt;
  const int radius = (rep.q2.d1 - 1) + (r_max + 1) / 2 + rep.q2.d2;
  const auto centers = g.pack_spheres(radius);
  if (static_cast<int>(centers.size()) < p) return std::nullopt;
  std::uint64_t bits = 0;
  for (int i = 0; i < p; ++i) {
    const auto dist = g.bfs_distances(centers[static_cast<std::size_t>(i)]);
    int best_term = -1, best_d = -1;
    for (std::size_t t = 0; t < q.terms.size(); ++t) {
      int dmin = -1;
      for (int site : q.terms[t].sites) {
        const int dd = dist[static_cast<std::size_t>(site)];
        if (dd >= 0 && (dmin < 0 || dd < dmin)) dmin = dd;
      }
      if (dmin >= 0 && (best_d < 0 || dmin < best_d)) {
        best_d = dmin;
        best_term = static_cast<int>(t);
      }
    }
    if (best_term < 0) return std::nullopt;
    for (int site : q.terms[static_cast<std::size_t>(best_term)].sites) {
      const std::uint64_t bit = std::uint64_t{1} << site;
      if (bits & bit) return std::nullopt;  // selected terms collided
      bits |= bit;
    }
  }
  return bits;
}

/// Per-rung record of the finite-fraction annihilation check.
struct FiniteFractionEntry {
  int p = 0;
  bool witness_available = false;
  bool is_eigenstate = false;
  Complex eigenvalue{0.0};
  double residual = 0.0;
  Complex witness_overlap{0.0};
  bool ok = true;
};

/// Verdict that a pure annihilator sum acts as zero on every tower
/// state it has as an eigenstate, within the range certified by
/// far-separated witness configurations.  The witness overlap
/// <witness| H' |Q^p> is asserted to vanish wherever a witness exists.
struct FiniteFractionReport {
  int r_max = 0;
  int theoretical_bound_p = 0;  ///< rungs guaranteed by the packing bound
  int checked_up_to = -1;       ///< rungs actually certified by a witness
  std::vector<FiniteFractionEntry> entries;
  bool pass = true;
};

inline FiniteFractionReport finite_fraction_check(const Operator& h_prime, const TowerSpec& q,
                                                  const SiteGraph& g, int r_max,
                                                  double tol = kEigenstateTol) {
  const int n = g.n_sites();
  if (q.n_sites != n) throw DimensionMismatch("tower spec and graph disagree on site count");
  // Preconditions: every string fits in diameter r_max, and the sum
  // kills the first tower state and the vacuum.
  if (locality_metrics(h_prime, g).range > r_max)
    throw Error("annihilator sum contains a string of diameter beyond r_max");
  if (!h_prime.empty()) {
    if (apply(h_prime, SparseState::vacuum(n)).norm() >= 1e-12)
      throw Error("annihilator sum does not kill the vacuum");
    SparseState q1 = tower_state(q, 1, n);
    if (apply(h_prime, q1).norm() >= 1e-12)
      throw Error("annihilator sum does not kill the first tower state");
  }

  const TowerClassReport rep = check_classes(q, g);
  FiniteFractionReport out;
  out.r_max = r_max;
  if (q.is_dicke()) {
    const double denom = g.max_degree() <= 2
                             ? static_cast<double>(r_max)
                             : std::pow(static_cast<double>(g.max_degree()), 2.0 * r_max) + 1.0;
    out.theoretical_bound_p = static_cast<int>(std::floor(static_cast<double>(n) / denom));
  } else {
    const double beta = rep.beta(r_max);
    out.theoretical_bound_p =
        std::isfinite(beta) ? static_cast<int>(std::floor(static_cast<double>(n) / beta)) : 0;
  }

  const Operator qdag = q.creation_operator();
  SparseState psi = SparseState::vacuum(n);
  for (int p = 0; p <= n; ++p) {
    if (p > 0) {
      psi = apply(qdag, psi);
      if (psi.empty()) break;
      psi = psi.normalized();
    }
    const auto witness = tower_witness(q, g, r_max, p, rep);
    if (!witness) break;
    FiniteFractionEntry entry;
    entry.p = p;
    entry.witness_available = true;
    const EigenCheck chk = eigen_check(h_prime, psi);
    entry.eigenvalue = chk.eigenvalue;
    entry.residual = chk.residual;
    entry.is_eigenstate = chk.residual < tol;
    entry.witness_overlap = inner(SparseState::basis_state(n, *witness), apply(h_prime, psi));
    entry.ok = std::abs(entry.witness_overlap) < tol &&
               (!entry.is_eigenstate || std::abs(entry.eigenvalue) < tol);
    out.entries.push_back(entry);
    out.checked_up_to = p;
    if (!entry.ok) out.pass = false;
  }
  if (out.checked_up_to < out.theoretical_bound_p) out.pass = false;
  return out;
}

/// Max |S(t) - S(0)| of the entanglement entropy over `cut` for the
/// analytically evolved superposition sum_p c_p e^{-i E_p t} |Q^p>.
/// The tower states are eigenstates by hypothesis, so phase evolution
/// is exact.  Energies must be real.
inline double freeze_check(const TowerSpec& q, const std::vector<Complex>& energies,
                           const std::vector<Complex>& amplitudes, const std::vector<int>& cut,
                           const std::vector<double>& times,
                           int subset_cap = kEntropySubsetCap) {
  if (energies.size() != amplitudes.size())
    throw DimensionMismatch("energies and amplitudes differ in length");
  for (const Complex& e : energies)
    if (std::abs(e.imag()) > kSymbolicTol) throw NonRealEnergies("complex tower energy rejected");

  std::vector<SparseState> states;
  states.reserve(energies.size());
  for (std::size_t p = 0; p < energies.size(); ++p)
    states.push_back(tower_state(q, static_cast<int>(p), q.n_sites));

  auto state_at = [&](double t) {
    SparseState psi(q.n_sites);
    for (std::size_t p = 0; p < states.size(); ++p) {
      const double phase = -energies[p].real() * t;
      psi += (amplitudes[p] * Complex(std::cos(phase), std::sin(phase))) * states[p];
    }
    return psi.normalized();
  };

  const double s0 = reduced_entropy(state_at(0.0), cut, subset_cap);
  double deviation = 0.0;
  for (double t : times)
    deviation = std::max(deviation, std::abs(reduced_entropy(state_at(t), cut, subset_cap) - s0));
  return deviation;
}

/// Size hypotheses of the three equal-spacing statements, evaluated
/// honestly for the given operator, graph, and tower.
struct SizeHypothesisReport {
  int n_sites = 0;
  int k = 0;
  int range = 0;
  int max_degree = 0;
  double chain_bound = 0.0;    ///< N > 4 k R          (Dicke on a chain)
  bool chain_ok = false;
  double graph_bound = 0.0;    ///< N > 2k (Delta^{4R} + 1)
  bool graph_ok = false;
  double general_bound = 0.0;  ///< N > beta(alpha(R)) gamma(k)
  bool general_ok = false;
  bool general_applicable = false;  ///< tower satisfies the q1/q2 classes
  TowerClassReport classes;
};

inline SizeHypothesisReport theorem_precondition_check(const Operator& h, const SiteGraph& g,
                                                       const TowerSpec& q) {
  SizeHypothesisReport rep;
  rep.n_sites = g.n_sites();
  rep.k = k_locality(h);
  rep.range = locality_metrics(h, g).range;
  rep.max_degree = g.max_degree();
  rep.classes = check_classes(q, g);

  const double n = static_cast<double>(rep.n_sites);
  rep.chain_bound = 4.0 * rep.k * rep.range;
  rep.chain_ok = n > rep.chain_bound;
  rep.graph_bound =
      2.0 * rep.k *
      (std::pow(static_cast<double>(std::max(1, rep.max_degree)), 4.0 * rep.range) + 1.0);
  rep.graph_ok = n > rep.graph_bound;

  rep.general_applicable = (rep.classes.q1.satisfied || rep.classes.q1.dicke_like) &&
                           rep.classes.q2.satisfied;
  if (rep.general_applicable) {
    const double alpha = rep.classes.alpha(rep.range);
    const double expo = 2.0 * (rep.classes.q2.d1 - 1) + 2.0 * rep.classes.q2.d2 + alpha;
    const double beta = std::pow(static_cast<double>(std::max(1, rep.max_degree)), expo) + 1.0;
    rep.general_bound = beta * TowerClassReport::gamma(rep.k);
    rep.general_ok = n > rep.general_bound;
  }
  return rep;
}

}  // namespace scartower
