#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scartower/errors.hpp"
#include "scartower/fock.hpp"
#include "scartower/op_algebra.hpp"
#include "scartower/rng.hpp"
#include "scartower/site_graph.hpp"

namespace scartower {

/// Coefficient-level classification of an extensive operator in the
/// normal-ordered basis, bucketed by (n, m) = (#creations,
/// #annihilations) per monomial.  Each bucket carries the condition an
/// eigen-operator of the W state must satisfy there:
///
///   (n>=1, m=0)  every coefficient vanishes
///   (n>=0, m>=2) none (such strings kill the W state and the vacuum)
///   (n>=2, m=1)  per creation set, the annihilation coefficients sum to 0
///   (n=0,  m=1)  all coefficients sum to 0
///   (n=1,  m=1)  per creation site, coefficients sum to one common value
struct ClassificationReport {
  Complex identity_coeff{0.0};
  double scale = 1.0;  ///< largest input coefficient, sets the tolerance

  std::vector<std::pair<Monomial, Complex>> pure_creation;      // (n>=1, m=0)
  std::vector<std::pair<Monomial, Complex>> multi_annihilation;  // (n>=0, m>=2)

  struct CreationGroup {
    std::vector<int> creates;
    std::vector<std::pair<int, Complex>> annihilations;  // (site, coefficient)
    Complex sum{0.0};
  };
  std::vector<CreationGroup> grouped_annihilation;  // (n>=2, m=1)

  std::vector<std::pair<int, Complex>> single_annihilation;  // (n=0, m=1)
  Complex single_annihilation_sum{0.0};

  std::map<int, std::map<int, Complex>> hopping;  // (n=1, m=1): j -> k -> coeff
  std::map<int, Complex> hopping_row_sum;         // j -> sum_k

  double tolerance() const { return kSymbolicTol * std::max(1.0, scale); }

  bool pure_creation_ok() const {
    for (const auto& [m, c] : pure_creation)
      if (std::abs(c) > tolerance()) return false;
    return true;
  }

  bool grouped_ok() const {
    for (const auto& grp : grouped_annihilation)
      if (std::abs(grp.sum) > tolerance()) return false;
    return true;
  }

  bool single_annihilation_ok() const { return std::abs(single_annihilation_sum) <= tolerance(); }

  /// Common hopping row sum over all n_sites sites (absent rows count
  /// as zero), or nullopt when the sums disagree.
  std::optional<Complex> hopping_lambda(int n_sites) const {
    Complex lambda = 0.0;
    if (static_cast<int>(hopping_row_sum.size()) == n_sites || hopping_row_sum.empty()) {
      if (!hopping_row_sum.empty()) lambda = hopping_row_sum.begin()->second;
    }  // else some site has no hopping row, forcing lambda = 0
    for (int j = 0; j < n_sites; ++j) {
      auto it = hopping_row_sum.find(j);
      const Complex row = it == hopping_row_sum.end() ? Complex(0.0) : it->second;
      if (std::abs(row - lambda) > tolerance()) return std::nullopt;
    }
    return lambda;
  }

  std::vector<std::string> violations(int n_sites) const {
    std::vector<std::string> out;
    if (!pure_creation_ok()) out.push_back("(n>=1,m=0): nonzero pure-creation coefficient");
    if (!grouped_ok()) out.push_back("(n>=2,m=1): creation group with nonzero coefficient sum");
    if (!single_annihilation_ok()) out.push_back("(n=0,m=1): annihilation coefficients do not sum to zero");
    if (!hopping_lambda(n_sites)) out.push_back("(n=1,m=1): hopping row sums are not uniform across sites");
    return out;
  }

  bool all_satisfied(int n_sites) const { return violations(n_sites).empty(); }
};

inline ClassificationReport classify_terms(const Operator& h) {
  ClassificationReport rep;
  rep.scale = h.max_abs_coeff();
  std::map<std::vector<int>, ClassificationReport::CreationGroup> groups;
  for (const auto& [m, c] : h.terms()) {
    const int n = static_cast<int>(m.creates.size());
    const int mm = static_cast<int>(m.annihilates.size());
    if (n == 0 && mm == 0) {
      rep.identity_coeff += c;
    } else if (mm == 0) {
      rep.pure_creation.emplace_back(m, c);
    } else if (mm >= 2) {
      rep.multi_annihilation.emplace_back(m, c);
    } else if (n >= 2) {
      auto& grp = groups[m.creates];
      grp.creates = m.creates;
      grp.annihilations.emplace_back(m.annihilates.front(), c);
      grp.sum += c;
    } else if (n == 0) {
      rep.single_annihilation.emplace_back(m.annihilates.front(), c);
      rep.single_annihilation_sum += c;
    } else {
      const int j = m.creates.front();
      const int k = m.annihilates.front();
      rep.hopping[j][k] += c;
      rep.hopping_row_sum[j] += c;
    }
  }
  for (auto& [key, grp] : groups) rep.grouped_annihilation.push_back(std::move(grp));
  return rep;
}

/// Raised by decompose when the input does not have the W state as an
/// eigenstate; carries the violated classification buckets.
struct NotParentOfW : Error {
  NotParentOfW(const std::string& msg, std::vector<std::string> violated_)
      : Error(msg), violated(std::move(violated_)) {}
  std::vector<std::string> violated;
};

struct LocalAnnihilator {
  std::vector<int> support;
  Operator op;
};

/// Output of the decomposition H = omega0 I + omega sum_i n_i + sum_X h_X,
/// where every h_X kills both the W state and the vacuum and is
/// supported on a set of diameter at most 2R.
struct DecompositionCertificate {
  Complex omega0{0.0};
  Complex omega{0.0};
  int input_range = 0;          ///< R of the input operator
  Complex w_eigenvalue{0.0};    ///< omega0 + omega
  std::vector<LocalAnnihilator> annihilators;
  int verified_at_n_sites = 0;
  std::vector<std::string> warnings;
};

struct CertificateCheck {
  bool ok = true;
  std::vector<std::string> failures;

  void fail(std::string msg) {
    ok = false;
    failures.push_back(std::move(msg));
  }
};

/// Re-verifies a certificate against the operator it claims to
/// decompose: exact reconstruction, annihilation of the W state and the
/// vacuum by every h_X, and the diameter bound diam(X) <= 2R.
inline CertificateCheck verify_certificate(const DecompositionCertificate& cert, const Operator& h,
                                           const SiteGraph& g) {
  CertificateCheck check;
  const int n = g.n_sites();
  Operator rebuilt = cert.omega0 * Operator::identity() + cert.omega * Operator::total_number(n);
  for (const auto& ann : cert.annihilators) rebuilt += ann.op;
  if (!approx_equal(rebuilt, h)) check.fail("reconstruction does not match input");

  const SparseState w = dicke_state(n, 1);
  const SparseState vac = SparseState::vacuum(n);
  for (std::size_t i = 0; i < cert.annihilators.size(); ++i) {
    const auto& ann = cert.annihilators[i];
    if (apply(ann.op, w).norm() >= 1e-12)
      check.fail("annihilator " + std::to_string(i) + " does not kill the W state");
    if (apply(ann.op, vac).norm() >= 1e-12)
      check.fail("annihilator " + std::to_string(i) + " does not kill the vacuum");
    if (g.diameter_of(ann.support) > 2 * cert.input_range)
      check.fail("annihilator " + std::to_string(i) + " exceeds the 2R diameter bound");
    const auto op_supp = ann.op.support();
    if (!std::includes(ann.support.begin(), ann.support.end(), op_supp.begin(), op_supp.end()))
      check.fail("annihilator " + std::to_string(i) + " acts outside its declared support");
  }
  return check;
}

/// Decomposes an extensive operator with the W state as an eigenstate
/// into omega0 I + omega sum_i n_i + sum_X h_X with certified local
/// annihilators:
///
///   (n>=0,m>=2) strings pass through unchanged;
///   (n>=2,m=1) strings join their zero-sum creation group;
///   (n=0,m=1) strings are rewritten along a BFS spanning tree into
///             edge differences s_i - s_j, eliminated leaves first;
///   (n=1,m=1) hopping splits as s^dag_j s_k = (s^dag_j s_k - n_j) + n_j,
///             leaving the uniform row sum on the number operator.
///
/// The certificate is self-verified before returning.  Throws
/// NotParentOfW when the classification conditions fail and
/// DisconnectedGraph when the spanning-tree step is impossible.
inline DecompositionCertificate decompose(const Operator& h, const SiteGraph& g) {
  const int n = g.n_sites();
  if (!g.connected()) throw DisconnectedGraph("decomposition needs a connected graph");

  const ClassificationReport cls = classify_terms(h);
  const auto violated = cls.violations(n);
  if (!violated.empty()) {
    std::string msg = "the W state is not an eigenstate;";
    for (const auto& v : violated) msg += " " + v + ";";
    throw NotParentOfW(msg, violated);
  }
  const double tol = cls.tolerance();

  DecompositionCertificate cert;
  cert.omega0 = cls.identity_coeff;
  cert.omega = *cls.hopping_lambda(n);
  cert.w_eigenvalue = cert.omega0 + cert.omega;
  cert.input_range = locality_metrics(h, g).range;
  cert.verified_at_n_sites = n;

  // Size/separation hypotheses of the symbolic argument; the numerical
  // certification below stands on its own when they fail.
  const int R = cert.input_range;
  {
    const double needed = std::pow(static_cast<double>(std::max(1, g.max_degree())), 4.0 * R) + 1.0;
    if (static_cast<double>(n) <= needed)
      cert.warnings.push_back("system size does not exceed Delta^{4R}+1");
    bool pair_far = false, triple_far = false;
    std::vector<std::vector<int>> dist;
    dist.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) dist.push_back(g.bfs_distances(i));
    for (int a = 0; a < n && !pair_far; ++a)
      for (int b = a + 1; b < n && !pair_far; ++b)
        if (dist[a][b] > 2 * R) pair_far = true;
    for (int a = 0; a < n && !triple_far; ++a)
      for (int b = a + 1; b < n && !triple_far; ++b)
        for (int c = b + 1; c < n && !triple_far; ++c)
          if (dist[a][b] > R && dist[a][c] > R && dist[b][c] > R) triple_far = true;
    if (!pair_far) cert.warnings.push_back("no pair of sites farther than 2R apart");
    if (!triple_far) cert.warnings.push_back("no three sites pairwise farther than R apart");
  }

  auto push = [&cert](Operator op) {
    LocalAnnihilator ann;
    ann.op = std::move(op);
    ann.support = ann.op.support();
    cert.annihilators.push_back(std::move(ann));
  };

  for (const auto& [m, c] : cls.multi_annihilation) push(Operator::from_monomial(m, c));

  for (const auto& grp : cls.grouped_annihilation) {
    Operator op;
    for (const auto& [k, c] : grp.annihilations) op += Operator::string(grp.creates, {k}, c);
    push(std::move(op));
  }

  if (!cls.single_annihilation.empty()) {
    // BFS spanning tree from site 0; eliminate coefficients from the
    // leaves inward, each step emitting c * (s_v - s_parent).
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    std::vector<int> order;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::deque<int> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (int w : g.neighbors(v)) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          parent[static_cast<std::size_t>(w)] = v;
          queue.push_back(w);
        }
      }
    }
    std::vector<Complex> coeff(static_cast<std::size_t>(n), 0.0);
    for (const auto& [k, c] : cls.single_annihilation) coeff[static_cast<std::size_t>(k)] += c;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      const int par = parent[static_cast<std::size_t>(v)];
      if (par < 0) continue;  // root keeps the (vanishing) remainder
      const Complex c = coeff[static_cast<std::size_t>(v)];
      if (std::abs(c) > tol) {
        push(c * (Operator::annihilation(v) - Operator::annihilation(par)));
        coeff[static_cast<std::size_t>(par)] += c;
        coeff[static_cast<std::size_t>(v)] = 0.0;
      }
    }
  }

  for (const auto& [j, row] : cls.hopping) {
    for (const auto& [k, c] : row) {
      if (k == j) continue;  // pure number content stays with omega
      if (std::abs(c) <= tol) continue;
      push(c * (Operator::string({j}, {k}) - Operator::number(j)));
    }
  }

  const CertificateCheck check = verify_certificate(cert, h, g);
  if (!check.ok) {
    std::string msg = "internal decomposition verification failed:";
    for (const auto& f : check.failures) msg += " " + f + ";";
    throw Error(msg);
  }
  return cert;
}

namespace detail {

/// Random small site set with pairwise distance <= max_pairwise; empty
/// on repeated failure.
inline std::vector<int> sample_close_sites(const SiteGraph& g, Rng& rng, int count,
                                           int max_pairwise) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const int anchor = rng.uniform_int(0, g.n_sites() - 1);
    auto pool = g.ball(anchor, max_pairwise);
    if (static_cast<int>(pool.size()) < count) continue;
    std::vector<int> picked;
    for (int t = 0; t < count; ++t) {
      const int idx = rng.uniform_int(0, static_cast<int>(pool.size()) - 1);
      picked.push_back(pool[static_cast<std::size_t>(idx)]);
      pool.erase(pool.begin() + idx);
    }
    std::sort(picked.begin(), picked.end());
    bool ok = true;
    for (std::size_t a = 0; a < picked.size() && ok; ++a) {
      const auto dist = g.bfs_distances(picked[a]);
      for (std::size_t b = a + 1; b < picked.size() && ok; ++b)
        if (dist[static_cast<std::size_t>(picked[b])] < 0 ||
            dist[static_cast<std::size_t>(picked[b])] > max_pairwise)
          ok = false;
    }
    if (ok) return picked;
  }
  return {};
}

inline std::pair<int, int> sample_edge(const SiteGraph& g, Rng& rng) {
  const auto edges = g.edge_list();
  if (edges.empty()) throw Error("graph has no edges to sample from");
  return edges[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(edges.size()) - 1))];
}

}  // namespace detail

/// Seeded random strictly local operator killing both the W state and
/// the vacuum, with support diameter <= r_max (r_max >= 2).  Draws from
/// the families that the decomposition emits: multi-annihilation
/// strings, zero-sum creation groups, hopping differences
/// s^dag_j s_k - n_j, and edge differences s_i - s_j.  The postcondition
/// is self-checked before returning.
inline Operator sample_annihilator(const SiteGraph& g, int r_max, std::uint64_t seed) {
  if (r_max < 2) throw Error("sample_annihilator needs r_max >= 2");
  Rng rng(seed);
  Operator op;
  for (int attempt = 0; attempt < 64 && op.empty(); ++attempt) {
    switch (rng.uniform_int(0, 4)) {
      case 0: {  // pure multi-annihilation string
        const int m = rng.uniform_int(2, 3);
        const auto sites = detail::sample_close_sites(g, rng, m, r_max - 1);
        if (sites.empty()) break;
        op = Operator::string({}, sites, rng.coefficient());
        break;
      }
      case 1: {  // mixed string with >= 2 annihilations
        const auto sites = detail::sample_close_sites(g, rng, 3, r_max - 1);
        if (sites.empty()) break;
        // annihilate two of them, create on a (possibly overlapping) pick
        std::vector<int> ann{sites[0], sites[1]};
        std::vector<int> cre{sites[static_cast<std::size_t>(rng.uniform_int(0, 2))]};
        op = Operator::string(cre, ann, rng.coefficient());
        break;
      }
      case 2: {  // zero-sum creation group
        const auto sites = detail::sample_close_sites(g, rng, 4, r_max - 1);
        if (sites.empty()) break;
        const std::vector<int> creates{sites[0], sites[1]};
        const Complex c = rng.coefficient();
        op = Operator::string(creates, {sites[2]}, c) - Operator::string(creates, {sites[3]}, c);
        break;
      }
      case 3: {  // hopping difference
        const auto sites = detail::sample_close_sites(g, rng, 2, r_max - 1);
        if (sites.empty()) break;
        const Complex c = rng.coefficient();
        op = c * (Operator::string({sites[0]}, {sites[1]}) - Operator::number(sites[0]));
        break;
      }
      default: {  // edge difference tau_ij = s_i - s_j
        const auto [i, j] = detail::sample_edge(g, rng);
        op = rng.coefficient() * (Operator::annihilation(i) - Operator::annihilation(j));
        break;
      }
    }
  }
  if (op.empty()) throw Error("failed to sample an annihilator on this graph");

  const int n = g.n_sites();
  if (apply(op, dicke_state(n, 1)).norm() >= 1e-12 ||
      apply(op, SparseState::vacuum(n)).norm() >= 1e-12)
    throw Error("sampled annihilator failed its self-check");
  return op;
}

/// Hermitian strictly local annihilator of the W state and vacuum.
/// Only families whose adjoints also annihilate both states are
/// Hermitizable: strings with two creations and two annihilations,
/// zero-sum creation groups, and the balanced hopping pair
/// c (s^dag_j s_k + s^dag_k s_j - n_j - n_k) with real c.
inline Operator sample_hermitian_annihilator(const SiteGraph& g, int r_max, std::uint64_t seed) {
  if (r_max < 2) throw Error("sample_hermitian_annihilator needs r_max >= 2");
  Rng rng(seed);
  Operator op;
  for (int attempt = 0; attempt < 64 && op.empty(); ++attempt) {
    switch (rng.uniform_int(0, 2)) {
      case 0: {  // two-creation / two-annihilation string plus adjoint
        const auto sites = detail::sample_close_sites(g, rng, 4, r_max - 1);
        if (sites.empty()) break;
        const Operator half =
            Operator::string({sites[0], sites[1]}, {sites[2], sites[3]}, rng.coefficient());
        op = half + adjoint(half);
        break;
      }
      case 1: {  // zero-sum creation group plus adjoint
        const auto sites = detail::sample_close_sites(g, rng, 4, r_max - 1);
        if (sites.empty()) break;
        const std::vector<int> creates{sites[0], sites[1]};
        const Complex c = rng.coefficient();
        const Operator half =
            Operator::string(creates, {sites[2]}, c) - Operator::string(creates, {sites[3]}, c);
        op = half + adjoint(half);
        break;
      }
      default: {  // balanced hopping pair
        const auto sites = detail::sample_close_sites(g, rng, 2, r_max - 1);
        if (sites.empty()) break;
        const double c = rng.real_coefficient();
        op = c * (Operator::string({sites[0]}, {sites[1]}) + Operator::string({sites[1]}, {sites[0]}) -
                  Operator::number(sites[0]) - Operator::number(sites[1]));
        break;
      }
    }
  }
  if (op.empty()) throw Error("failed to sample a Hermitian annihilator on this graph");

  const int n = g.n_sites();
  if (apply(op, dicke_state(n, 1)).norm() >= 1e-12 ||
      apply(op, SparseState::vacuum(n)).norm() >= 1e-12 || !approx_equal(op, adjoint(op)))
    throw Error("sampled Hermitian annihilator failed its self-check");
  return op;
}

/// omega0 I + omega sum_i n_i + a seeded sum of strictly local
/// annihilators.  The vacuum and the W state are eigenstates by
/// construction (eigenvalues omega0 and omega0 + omega); nothing is
/// promised for higher Dicke states.  In Hermitian mode the annihilator
/// pieces are Hermitian and omega0, omega must be real.
inline Operator sample_parent(const SiteGraph& g, int r_max, int n_terms, Complex omega0,
                              Complex omega, std::uint64_t seed, bool hermitian = false) {
  if (hermitian && (std::abs(omega0.imag()) > kSymbolicTol || std::abs(omega.imag()) > kSymbolicTol))
    throw Error("Hermitian parent needs real omega0 and omega");
  Rng rng(seed);
  Operator h = omega0 * Operator::identity() + omega * Operator::total_number(g.n_sites());
  for (int t = 0; t < n_terms; ++t) {
    const std::uint64_t sub_seed = rng.next_u64();
    h += hermitian ? sample_hermitian_annihilator(g, r_max, sub_seed)
                   : sample_annihilator(g, r_max, sub_seed);
  }
  return h;
}

/// p-particle product configuration whose particles sit pairwise
/// farther than r_max - 1 apart, so no two of them fit inside any
/// region of diameter <= r_max.  Sites are the first p centers of the
/// greedy packing at radius ceil((r_max-1)/2).
inline std::uint64_t witness_state(const SiteGraph& g, int r_max, int p) {
  if (p < 0 || p > g.n_sites()) throw InvalidParticleNumber("invalid witness particle count");
  const int r_pack = r_max / 2;  // == ceil((r_max - 1) / 2)
  const auto centers = g.pack_spheres(r_pack);
  if (static_cast<int>(centers.size()) < p)
    throw PackingInsufficient("packing yields only " + std::to_string(centers.size()) +
                                  " centers, need " + std::to_string(p),
                              static_cast<int>(centers.size()));
  std::uint64_t bits = 0;
  for (int i = 0; i < p; ++i) bits |= std::uint64_t{1} << centers[static_cast<std::size_t>(i)];
  return bits;
}

}  // namespace scartower
