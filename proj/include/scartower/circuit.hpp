#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scartower/errors.hpp"
#include "scartower/fock.hpp"
#include "scartower/op_algebra.hpp"
#include "scartower/site_graph.hpp"
#include "scartower/tower_spec.hpp"

namespace scartower {

/// Dense invertible gate on a sorted set of sites.
struct Gate {
  std::vector<int> support;
  Eigen::MatrixXcd matrix;  ///< dimension 2^{support.size()}
};

/// Layered circuit; within each layer all gate supports are pairwise
/// disjoint, so the gates of a layer commute and the layer's light cone
/// is controlled by the individual gate footprints.
struct GateCircuit {
  int n_sites = 0;
  std::vector<std::vector<Gate>> layers;

  std::size_t gate_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers) n += layer.size();
    return n;
  }
};

inline void validate_circuit(const GateCircuit& m) {
  for (const auto& layer : m.layers) {
    std::vector<bool> used(static_cast<std::size_t>(m.n_sites), false);
    for (const auto& gate : layer) {
      if (!std::is_sorted(gate.support.begin(), gate.support.end()) ||
          std::adjacent_find(gate.support.begin(), gate.support.end()) != gate.support.end())
        throw Error("gate support must be sorted and duplicate free");
      for (int s : gate.support) {
        if (s < 0 || s >= m.n_sites) throw SiteOutOfGraph("gate site outside circuit system");
        if (used[static_cast<std::size_t>(s)]) throw Error("overlapping gate supports within a layer");
        used[static_cast<std::size_t>(s)] = true;
      }
      const Eigen::Index dim = Eigen::Index(1) << gate.support.size();
      if (gate.matrix.rows() != dim || gate.matrix.cols() != dim)
        throw DimensionMismatch("gate matrix does not match its support size");
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(gate.matrix);
      if (!lu.isInvertible()) throw Error("non-invertible gate");
    }
  }
}

/// Verdicts for the three structural classes a quasiparticle operator
/// can fall into, with the minimal constants found by exhaustive scan:
///
///  q1: terms are anchorable one-to-one to sites within distance d,
///      all with the same particle count c > 1 and distinct supports
///      (enables the W -> Q mapping circuit);
///  q2: all terms have c particles, diameter <= d1, and every site has
///      a term within distance d2 (enables the far-separated witness);
///  q3: pure creation content (always true for a TowerSpec).
struct TowerClassReport {
  struct Q1 {
    bool satisfied = false;
    bool dicke_like = false;  ///< unit-weight single-site terms on every site
    int c = 0;
    int d = -1;
    std::string reason;
  };
  struct Q2 {
    bool satisfied = false;
    int c = 0;
    int d1 = -1;
    int d2 = -1;
    std::string reason;
  };
  struct Q3 {
    bool satisfied = true;
  };

  Q1 q1;
  Q2 q2;
  Q3 q3;
  std::optional<int> charge;
  int max_degree = 0;

  /// Range growth bound of the mapping circuit: 8 d (Delta^{4d} + 1).
  double delta_bound() const {
    if (q1.dicke_like) return 0.0;
    if (!q1.satisfied) return std::numeric_limits<double>::infinity();
    return 8.0 * q1.d * (std::pow(static_cast<double>(std::max(1, max_degree)), 4.0 * q1.d) + 1.0);
  }

  /// Diameter bound on decomposition supports: alpha(R) = 2R + 3 delta.
  double alpha(int range) const { return 2.0 * range + 3.0 * delta_bound(); }

  /// Witness bound denominator: beta(R_max) = Delta^{2(d1-1)+2d2+R_max} + 1.
  double beta(int r_max) const {
    if (!q2.satisfied) return std::numeric_limits<double>::infinity();
    const double expo = 2.0 * (q2.d1 - 1) + 2.0 * q2.d2 + r_max;
    return std::pow(static_cast<double>(std::max(1, max_degree)), expo) + 1.0;
  }

  /// Iterated-commutator depth bound for k-local operators.
  static int gamma(int k) { return 2 * k + 1; }
};

namespace detail {

inline bool kuhn_augment(int site, const std::vector<std::vector<int>>& cand,
                         std::vector<int>& match_site, std::vector<int>& match_term,
                         std::vector<bool>& visited) {
  for (int t : cand[static_cast<std::size_t>(site)]) {
    if (visited[static_cast<std::size_t>(t)]) continue;
    visited[static_cast<std::size_t>(t)] = true;
    if (match_term[static_cast<std::size_t>(t)] < 0 ||
        kuhn_augment(match_term[static_cast<std::size_t>(t)], cand, match_site, match_term, visited)) {
      match_site[static_cast<std::size_t>(site)] = t;
      match_term[static_cast<std::size_t>(t)] = site;
      return true;
    }
  }
  return false;
}

/// Site -> term bijection with every site of the assigned term within
/// distance d of its site; empty when infeasible.  Kuhn's matching in
/// ascending site/term order keeps the result reproducible.
inline std::vector<int> anchor_assignment(const TowerSpec& q, const SiteGraph& g, int d,
                                          const std::vector<std::vector<int>>& dist) {
  const int n = g.n_sites();
  if (static_cast<int>(q.terms.size()) != n) return {};
  std::vector<std::vector<int>> cand(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < n; ++t) {
      bool ok = true;
      for (int site : q.terms[static_cast<std::size_t>(t)].sites) {
        const int dd = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(site)];
        if (dd < 0 || dd > d) {
          ok = false;
          break;
        }
      }
      if (ok) cand[static_cast<std::size_t>(i)].push_back(t);
    }
  }
  std::vector<int> match_site(static_cast<std::size_t>(n), -1);
  std::vector<int> match_term(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    if (!kuhn_augment(i, cand, match_site, match_term, visited)) return {};
  }
  return match_site;
}

}  // namespace detail

inline TowerClassReport check_classes(const TowerSpec& q, const SiteGraph& g) {
  TowerClassReport rep;
  rep.max_degree = g.max_degree();
  rep.charge = charge_of(q);
  const int n = g.n_sites();
  if (q.n_sites != n) throw DimensionMismatch("tower spec and graph disagree on site count");

  std::vector<std::vector<int>> dist;
  dist.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dist.push_back(g.bfs_distances(i));

  // q2: uniform particle count, bounded term diameter, site coverage.
  if (!rep.charge) {
    rep.q2.reason = "terms create different particle counts";
  } else {
    rep.q2.c = *rep.charge;
    int d1 = 0;
    bool connected_terms = true;
    for (const auto& t : q.terms) {
      try {
        d1 = std::max(d1, g.diameter_of(t.sites));
      } catch (const DisconnectedSupport&) {
        connected_terms = false;
      }
    }
    int d2 = 0;
    bool covered = true;
    for (int i = 0; i < n && covered; ++i) {
      int best = -1;
      for (const auto& t : q.terms) {
        for (int site : t.sites) {
          const int dd = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(site)];
          if (dd >= 0 && (best < 0 || dd < best)) best = dd;
        }
      }
      if (best < 0) covered = false;
      d2 = std::max(d2, best);
    }
    rep.q2.d1 = connected_terms ? d1 : -1;
    rep.q2.d2 = covered ? d2 : -1;
    if (!connected_terms) {
      rep.q2.reason = "term support spans disconnected components";
    } else if (!covered) {
      rep.q2.reason = "some site is unreachable from every term";
    } else if (d2 > d1) {
      // Coverage distance beyond the term size signals terms that are
      // not spread over the whole system.
      rep.q2.reason = "coverage distance d2 = " + std::to_string(d2) + " exceeds term diameter d1 = " +
                      std::to_string(d1);
    } else {
      rep.q2.satisfied = true;
    }
  }

  // q1: bijective anchoring at minimal d with c > 1 and distinct terms
  // (TowerSpec::make already merged duplicate supports).
  if (!rep.charge) {
    rep.q1.reason = "terms create different particle counts";
  } else if (static_cast<int>(q.terms.size()) != n) {
    rep.q1.reason = "need exactly one term per site, have " + std::to_string(q.terms.size());
  } else {
    rep.q1.c = *rep.charge;
    int found_d = -1;
    int max_d = 0;
    for (const auto& row : dist)
      for (int dd : row) max_d = std::max(max_d, dd);
    for (int d = 0; d <= max_d; ++d) {
      if (!detail::anchor_assignment(q, g, d, dist).empty()) {
        found_d = d;
        break;
      }
    }
    if (found_d < 0) {
      rep.q1.reason = "no bijective site-term anchoring exists";
    } else {
      rep.q1.d = found_d;
      if (rep.q1.c > 1) {
        rep.q1.satisfied = true;
      } else if (q.is_dicke()) {
        rep.q1.dicke_like = true;
        rep.q1.reason = "single-particle terms; the mapping circuit is the identity";
      } else {
        rep.q1.reason = "terms create one particle but are not the unit-weight single-site family";
      }
    }
  }
  return rep;
}

inline SparseState apply_circuit(const GateCircuit& m, const SparseState& psi, bool inverse);

/// Gate-based map M with M|W> proportional to |Q> and M|vac> = |vac>.
/// Per site i, the gate on the ball around i swaps the one-particle
/// pattern at i with the anchored term's pattern (weighted by the
/// term's coefficient) and fixes everything else; each gate is its own
/// inverse.  Layers come from the disjoint-layer partition, so the
/// layer count obeys Delta^{2 ball_radius} + 1.
///
/// `compact` shrinks the gate balls from radius 2d to radius d.  That
/// is valid only for favorable geometries; the builder verifies the
/// mapping numerically and rejects the mode when it fails.
inline GateCircuit build_mapping_circuit(const TowerSpec& q, const SiteGraph& g,
                                         bool compact = false) {
  const int n = g.n_sites();
  const TowerClassReport rep = check_classes(q, g);
  GateCircuit circuit;
  circuit.n_sites = n;
  if (rep.q1.dicke_like) return circuit;  // identity map
  if (!rep.q1.satisfied)
    throw ClassConditionViolated("mapping circuit unavailable: " + rep.q1.reason);

  std::vector<std::vector<int>> dist;
  dist.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dist.push_back(g.bfs_distances(i));
  const std::vector<int> anchors = detail::anchor_assignment(q, g, rep.q1.d, dist);
  const int ball_radius = compact ? rep.q1.d : 2 * rep.q1.d;

  const auto site_layers = g.disjoint_layers(ball_radius);
  for (const auto& layer_sites : site_layers) {
    std::vector<Gate> layer;
    for (int i : layer_sites) {
      const TowerTerm& term = q.terms[static_cast<std::size_t>(anchors[static_cast<std::size_t>(i)])];
      Gate gate;
      gate.support = g.ball(i, ball_radius);
      auto pos_of = [&gate](int site) {
        return static_cast<int>(std::lower_bound(gate.support.begin(), gate.support.end(), site) -
                                gate.support.begin());
      };
      std::uint64_t s_idx = std::uint64_t{1} << pos_of(i);
      std::uint64_t q_idx = 0;
      for (int site : term.sites) {
        if (!std::binary_search(gate.support.begin(), gate.support.end(), site))
          throw ClassConditionViolated("anchored term leaks outside its gate ball");
        q_idx |= std::uint64_t{1} << pos_of(site);
      }
      const Eigen::Index dim = Eigen::Index(1) << gate.support.size();
      gate.matrix = Eigen::MatrixXcd::Identity(dim, dim);
      const auto s = static_cast<Eigen::Index>(s_idx);
      const auto t = static_cast<Eigen::Index>(q_idx);
      gate.matrix(s, s) = 0.0;
      gate.matrix(t, t) = 0.0;
      gate.matrix(t, s) = term.coeff;
      gate.matrix(s, t) = Complex(1.0) / term.coeff;
      layer.push_back(std::move(gate));
    }
    if (!layer.empty()) circuit.layers.push_back(std::move(layer));
  }

  // The radius-2d construction is guaranteed; the compact radius-d one
  // is not, so certify the mapping on the two states it must match.
  const SparseState vac = SparseState::vacuum(n);
  const SparseState mapped = apply_circuit(circuit, dicke_state(n, 1), false);
  if (mapped.norm() <= 0.0 ||
      (mapped.normalized() - tower_state(q, 1, n)).norm() >= 1e-12 ||
      (apply_circuit(circuit, vac, false) - vac).norm() >= 1e-12)
    throw ClassConditionViolated(compact
                                     ? "compact gate balls are too small for this tower on this graph"
                                     : "mapping circuit failed its certification");
  return circuit;
}

/// Exact layer-by-layer action on a sparse state; `inverse` runs the
/// reversed layers with inverted gates.
inline SparseState apply_circuit(const GateCircuit& m, const SparseState& psi, bool inverse = false) {
  if (psi.n_sites() != m.n_sites) throw DimensionMismatch("state and circuit site counts differ");
  SparseState current = psi;
  auto run_gate = [&current](const Gate& gate, bool invert) {
    Eigen::MatrixXcd mat = gate.matrix;
    if (invert) {
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(gate.matrix);
      if (!lu.isInvertible()) throw Error("non-invertible gate in circuit");
      mat = lu.inverse();
    }
    const int s = static_cast<int>(gate.support.size());
    const std::uint64_t local_dim = std::uint64_t{1} << s;
    SparseState next(current.n_sites());
    for (const auto& [bits, amp] : current.amplitudes()) {
      std::uint64_t local = 0;
      std::uint64_t base = bits;
      for (int k = 0; k < s; ++k) {
        const std::uint64_t site_bit = std::uint64_t{1} << gate.support[static_cast<std::size_t>(k)];
        if (bits & site_bit) local |= std::uint64_t{1} << k;
        base &= ~site_bit;
      }
      for (std::uint64_t out = 0; out < local_dim; ++out) {
        const Complex w = mat(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(local));
        if (std::abs(w) <= kAmpPrune) continue;
        std::uint64_t out_bits = base;
        for (int k = 0; k < s; ++k)
          if (out >> k & 1) out_bits |= std::uint64_t{1} << gate.support[static_cast<std::size_t>(k)];
        next.add(out_bits, w * amp);
      }
    }
    current = std::move(next);
  };

  if (!inverse) {
    for (const auto& layer : m.layers)
      for (const auto& gate : layer) run_gate(gate, false);
  } else {
    for (auto it = m.layers.rbegin(); it != m.layers.rend(); ++it)
      for (const auto& gate : *it) run_gate(gate, true);
  }
  return current;
}

namespace detail {

/// In-place conjugation of a dense operator on `cone` (sorted sites) by
/// a gate supported inside the cone: op <- G op G^{-1}.
inline void conjugate_dense_by_gate(Eigen::MatrixXcd& op, const Gate& gate,
                                    const std::vector<int>& cone) {
  const int s = static_cast<int>(gate.support.size());
  const std::uint64_t local_dim = std::uint64_t{1} << s;
  const std::uint64_t dim = static_cast<std::uint64_t>(op.rows());
  std::vector<std::uint64_t> spread(local_dim, 0);
  std::uint64_t support_mask = 0;
  for (int k = 0; k < s; ++k) {
    const auto it = std::lower_bound(cone.begin(), cone.end(), gate.support[static_cast<std::size_t>(k)]);
    if (it == cone.end() || *it != gate.support[static_cast<std::size_t>(k)])
      throw Error("gate support escapes the light cone");
    const int pos = static_cast<int>(it - cone.begin());
    support_mask |= std::uint64_t{1} << pos;
    for (std::uint64_t l = 0; l < local_dim; ++l)
      if (l >> k & 1) spread[l] |= std::uint64_t{1} << pos;
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(gate.matrix);
  if (!lu.isInvertible()) throw Error("non-invertible gate in circuit");
  const Eigen::MatrixXcd inv = lu.inverse();

  Eigen::VectorXcd scratch(static_cast<Eigen::Index>(local_dim));
  // op <- G_emb * op   (transform every column in place)
  for (std::uint64_t col = 0; col < dim; ++col) {
    for (std::uint64_t base = 0; base < dim; ++base) {
      if (base & support_mask) continue;
      for (std::uint64_t l = 0; l < local_dim; ++l)
        scratch(static_cast<Eigen::Index>(l)) = op(static_cast<Eigen::Index>(base | spread[l]),
                                                   static_cast<Eigen::Index>(col));
      const Eigen::VectorXcd out = gate.matrix * scratch;
      for (std::uint64_t l = 0; l < local_dim; ++l)
        op(static_cast<Eigen::Index>(base | spread[l]), static_cast<Eigen::Index>(col)) =
            out(static_cast<Eigen::Index>(l));
    }
  }
  // op <- op * G_emb^{-1} (transform every row in place)
  for (std::uint64_t row = 0; row < dim; ++row) {
    for (std::uint64_t base = 0; base < dim; ++base) {
      if (base & support_mask) continue;
      for (std::uint64_t l = 0; l < local_dim; ++l)
        scratch(static_cast<Eigen::Index>(l)) = op(static_cast<Eigen::Index>(row),
                                                   static_cast<Eigen::Index>(base | spread[l]));
      const Eigen::RowVectorXcd out = scratch.transpose() * inv;
      for (std::uint64_t l = 0; l < local_dim; ++l)
        op(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(base | spread[l])) =
            out(static_cast<Eigen::Index>(l));
    }
  }
}

/// Rewrites a dense matrix-unit tensor into per-site letter
/// coefficients: with (row bit, col bit) per site read as
/// (0,0) -> I, (0,1) -> s, (1,0) -> s^dag, (1,1) -> n, the only change
/// of basis is coeff(n) = coeff(E11) - coeff(E00).
inline void matrix_units_to_letters(Eigen::MatrixXcd& op, int n_positions) {
  const std::uint64_t dim = static_cast<std::uint64_t>(op.rows());
  for (int pos = 0; pos < n_positions; ++pos) {
    const std::uint64_t bit = std::uint64_t{1} << pos;
    for (std::uint64_t row = 0; row < dim; ++row) {
      if (!(row & bit)) continue;
      for (std::uint64_t col = 0; col < dim; ++col) {
        if (!(col & bit)) continue;
        op(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) -=
            op(static_cast<Eigen::Index>(row ^ bit), static_cast<Eigen::Index>(col ^ bit));
      }
    }
  }
}

/// Monomial expansion of a dense operator living on `sites`.
inline Operator dense_to_operator(Eigen::MatrixXcd op, const std::vector<int>& sites,
                                  double rel_prune = kSymbolicTol) {
  matrix_units_to_letters(op, static_cast<int>(sites.size()));
  const double scale = op.cwiseAbs().maxCoeff();
  const double threshold = std::max(kCoeffPrune, rel_prune * scale);
  Operator out;
  const std::uint64_t dim = static_cast<std::uint64_t>(op.rows());
  for (std::uint64_t row = 0; row < dim; ++row) {
    for (std::uint64_t col = 0; col < dim; ++col) {
      const Complex c = op(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
      if (std::abs(c) <= threshold) continue;
      Monomial m;
      for (std::size_t k = 0; k < sites.size(); ++k) {
        if (row >> k & 1) m.creates.push_back(sites[k]);
        if (col >> k & 1) m.annihilates.push_back(sites[k]);
      }
      out.add_term(std::move(m), c);
    }
  }
  return out;
}

/// Light cone of an initial support under the circuit's layers: a gate
/// joins the cone when its support meets the cone accumulated before
/// its layer (disjointness within a layer makes one pass per layer
/// exact).
inline std::vector<int> light_cone(const GateCircuit& m, std::vector<int> cone) {
  std::set<int> cone_set(cone.begin(), cone.end());
  for (const auto& layer : m.layers) {
    std::vector<const Gate*> touching;
    for (const auto& gate : layer) {
      const bool meets = std::any_of(gate.support.begin(), gate.support.end(),
                                     [&cone_set](int s) { return cone_set.count(s) > 0; });
      if (meets) touching.push_back(&gate);
    }
    for (const Gate* gate : touching) cone_set.insert(gate->support.begin(), gate->support.end());
  }
  return {cone_set.begin(), cone_set.end()};
}

}  // namespace detail

/// Largest observed range growth when conjugating number operators on
/// the probe sites through the circuit: for each probe j the dense
/// operator M n_j M^{-1} is expanded in the monomial basis (entries
/// above 1e-12) on the circuit's light cone, and the growth is its
/// range minus one.  Throws ConeTooLarge when a cone exceeds the cap.
inline int measure_locality_growth(const GateCircuit& m, const SiteGraph& g,
                                   const std::vector<int>& probe_sites,
                                   int cone_cap = kDenseSiteCap) {
  int max_delta = 0;
  for (int probe : probe_sites) {
    if (probe < 0 || probe >= m.n_sites) throw SiteOutOfGraph("probe site outside circuit");
    const std::vector<int> cone = detail::light_cone(m, {probe});
    if (static_cast<int>(cone.size()) > cone_cap)
      throw ConeTooLarge("light cone of probe " + std::to_string(probe) + " spans " +
                         std::to_string(cone.size()) + " sites, cap " + std::to_string(cone_cap));
    const std::uint64_t dim = std::uint64_t{1} << cone.size();
    const int probe_pos = static_cast<int>(std::lower_bound(cone.begin(), cone.end(), probe) -
                                           cone.begin());
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                 static_cast<Eigen::Index>(dim));
    for (std::uint64_t x = 0; x < dim; ++x)
      if (x >> probe_pos & 1) op(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = 1.0;

    std::set<int> cone_set{probe};
    for (const auto& layer : m.layers) {
      std::vector<const Gate*> touching;
      for (const auto& gate : layer) {
        const bool meets = std::any_of(gate.support.begin(), gate.support.end(),
                                       [&cone_set](int s) { return cone_set.count(s) > 0; });
        if (meets) touching.push_back(&gate);
      }
      for (const Gate* gate : touching) {
        detail::conjugate_dense_by_gate(op, *gate, cone);
        cone_set.insert(gate->support.begin(), gate->support.end());
      }
    }

    detail::matrix_units_to_letters(op, static_cast<int>(cone.size()));
    int observed_range = 0;
    for (std::uint64_t row = 0; row < dim; ++row) {
      for (std::uint64_t col = 0; col < dim; ++col) {
        if (std::abs(op(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col))) <= 1e-12)
          continue;
        std::vector<int> supp;
        for (std::size_t k = 0; k < cone.size(); ++k)
          if ((row >> k & 1) || (col >> k & 1)) supp.push_back(cone[k]);
        observed_range = std::max(observed_range, g.diameter_of(supp));
      }
    }
    max_delta = std::max(max_delta, observed_range - 1);
  }
  return max_delta;
}

/// M H M^{-1} reconstructed in the monomial basis via dense matrices.
inline Operator conjugate_hamiltonian(const GateCircuit& m, const Operator& h, int n_sites,
                                      int site_cap = kDenseSiteCap) {
  if (n_sites != m.n_sites) throw DimensionMismatch("circuit and requested system size differ");
  Eigen::MatrixXcd dense = to_matrix(h, n_sites, site_cap);
  std::vector<int> cone(static_cast<std::size_t>(n_sites));
  for (int i = 0; i < n_sites; ++i) cone[static_cast<std::size_t>(i)] = i;
  for (const auto& layer : m.layers)
    for (const auto& gate : layer) detail::conjugate_dense_by_gate(dense, gate, cone);
  return detail::dense_to_operator(std::move(dense), cone);
}

}  // namespace scartower
