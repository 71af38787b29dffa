#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scartower/errors.hpp"
#include "scartower/site_graph.hpp"

namespace scartower {

using Complex = std::complex<double>;

/// Coefficients below this magnitude are dropped from operators.
inline constexpr double kCoeffPrune = 1e-14;
/// Relative tolerance for symbolic operator equality / vanishing.
inline constexpr double kSymbolicTol = 1e-12;
/// Default cap on dense 2^n conversions.
inline constexpr int kDenseSiteCap = 14;

/// One normal-ordered hard-core-boson string: creation operators on the
/// `creates` sites, annihilation operators on the `annihilates` sites,
/// all creations to the left.  A site present in both sets carries the
/// number operator n = s^dag s.  Both lists are sorted and duplicate
/// free; within one site the only admitted factors are
/// {identity, s^dag, s, n} (s^dag s^dag and s s vanish and are never
/// stored).
struct Monomial {
  std::vector<int> creates;
  std::vector<int> annihilates;

  static Monomial identity() { return {}; }
  static Monomial creation(int site) { return {{site}, {}}; }
  static Monomial annihilation(int site) { return {{}, {site}}; }
  static Monomial number(int site) { return {{site}, {site}}; }

  bool is_identity() const { return creates.empty() && annihilates.empty(); }

  /// Sorted union of all touched sites.
  std::vector<int> support() const {
    std::vector<int> out;
    std::set_union(creates.begin(), creates.end(), annihilates.begin(), annihilates.end(),
                   std::back_inserter(out));
    return out;
  }

  int max_site() const {
    int m = -1;
    if (!creates.empty()) m = std::max(m, creates.back());
    if (!annihilates.empty()) m = std::max(m, annihilates.back());
    return m;
  }

  auto operator<=>(const Monomial&) const = default;
};

namespace detail {

enum class Letter : unsigned char { Id, Create, Annihilate, Number };

inline Letter letter_at(const Monomial& m, int site) {
  const bool c = std::binary_search(m.creates.begin(), m.creates.end(), site);
  const bool a = std::binary_search(m.annihilates.begin(), m.annihilates.end(), site);
  if (c && a) return Letter::Number;
  if (c) return Letter::Create;
  if (a) return Letter::Annihilate;
  return Letter::Id;
}

struct LetterTerm {
  Letter letter;
  double weight;
};

/// Single-site products lhs*rhs (rhs acts first) expanded back into the
/// {I, s^dag, s, n} alphabet.  The only two-branch case is s s^dag,
/// which expands as I - n; several products vanish outright.
inline int letter_product(Letter lhs, Letter rhs, LetterTerm out[2]) {
  using L = Letter;
  if (lhs == L::Id) {
    out[0] = {rhs, 1.0};
    return 1;
  }
  if (rhs == L::Id) {
    out[0] = {lhs, 1.0};
    return 1;
  }
  switch (lhs) {
    case L::Create:
      if (rhs == L::Annihilate) {
        out[0] = {L::Number, 1.0};
        return 1;
      }
      return 0;  // s^dag s^dag = 0, s^dag n = 0
    case L::Annihilate:
      if (rhs == L::Create) {
        out[0] = {L::Id, 1.0};
        out[1] = {L::Number, -1.0};
        return 2;  // s s^dag = I - n
      }
      if (rhs == L::Number) {
        out[0] = {L::Annihilate, 1.0};
        return 1;
      }
      return 0;  // s s = 0
    case L::Number:
      if (rhs == L::Create) {
        out[0] = {L::Create, 1.0};
        return 1;
      }
      if (rhs == L::Number) {
        out[0] = {L::Number, 1.0};
        return 1;
      }
      return 0;  // n s = 0
    default:
      return 0;
  }
}

}  // namespace detail

/// Finite linear combination of normal-ordered monomials with complex
/// coefficients.  Values are immutable in spirit: every operation below
/// returns a fresh Operator, so instances are safe to share across
/// threads.  Terms are kept in a sorted map for reproducible iteration.
class Operator {
 public:
  using TermMap = std::map<Monomial, Complex>;

  Operator() = default;

  static Operator zero() { return {}; }

  static Operator identity() { return from_monomial(Monomial::identity(), 1.0); }

  static Operator creation(int site) { return from_monomial(Monomial::creation(site), 1.0); }

  static Operator annihilation(int site) { return from_monomial(Monomial::annihilation(site), 1.0); }

  static Operator number(int site) { return from_monomial(Monomial::number(site), 1.0); }

  /// s^z = n - I/2 (equals [s^dag, s]/2).
  static Operator sz(int site) {
    Operator o = number(site);
    o.add_term(Monomial::identity(), -0.5);
    return o;
  }

  static Operator from_monomial(Monomial m, Complex coeff) {
    Operator o;
    o.add_term(std::move(m), coeff);
    return o;
  }

  /// Normal-ordered string: creations on `creates`, annihilations on
  /// `annihilates` (each site at most once per list).
  static Operator string(std::vector<int> creates, std::vector<int> annihilates, Complex coeff = 1.0) {
    std::sort(creates.begin(), creates.end());
    std::sort(annihilates.begin(), annihilates.end());
    if (std::adjacent_find(creates.begin(), creates.end()) != creates.end() ||
        std::adjacent_find(annihilates.begin(), annihilates.end()) != annihilates.end())
      return zero();  // repeated factor on one site vanishes
    return from_monomial({std::move(creates), std::move(annihilates)}, coeff);
  }

  /// Sum_i s^dag_i over sites 0..n-1.
  static Operator total_creation(int n_sites) {
    Operator o;
    for (int i = 0; i < n_sites; ++i) o.add_term(Monomial::creation(i), 1.0);
    return o;
  }

  /// Sum_i n_i over sites 0..n-1.
  static Operator total_number(int n_sites) {
    Operator o;
    for (int i = 0; i < n_sites; ++i) o.add_term(Monomial::number(i), 1.0);
    return o;
  }

  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Complex coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Complex(0.0) : it->second;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  /// All coefficients at or below tol in magnitude (an empty operator
  /// is negligible at any tolerance).
  bool is_negligible(double tol) const { return max_abs_coeff() <= tol; }

  void add_term(Monomial m, Complex coeff) {
    auto [it, inserted] = terms_.try_emplace(std::move(m), coeff);
    if (!inserted) it->second += coeff;
    if (std::abs(it->second) <= kCoeffPrune) terms_.erase(it);
  }

  Operator& operator+=(const Operator& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, c);
    return *this;
  }

  Operator& operator-=(const Operator& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
    return *this;
  }

  Operator& operator*=(Complex scale) {
    if (std::abs(scale) <= kCoeffPrune) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= scale;
    return *this;
  }

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(Operator lhs, Complex scale) { return lhs *= scale; }
  friend Operator operator*(Complex scale, Operator rhs) { return rhs *= scale; }

  /// Drop coefficients at or below `tol` in magnitude.
  Operator pruned(double tol) const {
    Operator out;
    for (const auto& [m, c] : terms_)
      if (std::abs(c) > tol) out.terms_.emplace(m, c);
    return out;
  }

  /// Sorted union of all touched sites.
  std::vector<int> support() const {
    std::set<int> sites;
    for (const auto& [m, c] : terms_) {
      sites.insert(m.creates.begin(), m.creates.end());
      sites.insert(m.annihilates.begin(), m.annihilates.end());
    }
    return {sites.begin(), sites.end()};
  }

  int max_site() const {
    int m = -1;
    for (const auto& [mono, c] : terms_) m = std::max(m, mono.max_site());
    return m;
  }

 private:
  TermMap terms_;
};

/// Hermitian conjugate: swaps creation and annihilation sets per
/// monomial and conjugates coefficients.  Involutive.
inline Operator adjoint(const Operator& a) {
  Operator out;
  for (const auto& [m, c] : a.terms())
    out.add_term(Monomial{m.annihilates, m.creates}, std::conj(c));
  return out;
}

/// Normal-ordered product.  Operators on distinct sites commute, so the
/// product reduces site by site through the single-site alphabet; the
/// rules s^dag s^dag = s s = 0, s^dag s = n and s s^dag = I - n keep
/// the result canonical.
inline Operator multiply(const Operator& a, const Operator& b) {
  Operator out;
  std::vector<int> sites;
  std::vector<detail::LetterTerm> options[2];
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      sites.clear();
      {
        auto sa = ma.support();
        auto sb = mb.support();
        std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(sites));
      }
      // Expand per-site products; branch only where s s^dag appears.
      struct Frame {
        std::size_t site_idx;
        Monomial partial;
        double weight;
      };
      std::vector<Frame> stack{{0, Monomial::identity(), 1.0}};
      while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.site_idx == sites.size()) {
          out.add_term(std::move(f.partial), ca * cb * f.weight);
          continue;
        }
        const int site = sites[f.site_idx];
        detail::LetterTerm opts[2];
        const int n_opts =
            detail::letter_product(detail::letter_at(ma, site), detail::letter_at(mb, site), opts);
        for (int k = 0; k < n_opts; ++k) {
          Frame next{f.site_idx + 1, f.partial, f.weight * opts[k].weight};
          switch (opts[k].letter) {
            case detail::Letter::Create:
              next.partial.creates.push_back(site);
              break;
            case detail::Letter::Annihilate:
              next.partial.annihilates.push_back(site);
              break;
            case detail::Letter::Number:
              next.partial.creates.push_back(site);
              next.partial.annihilates.push_back(site);
              break;
            case detail::Letter::Id:
              break;
          }
          stack.push_back(std::move(next));
        }
      }
    }
  }
  return out;
}

inline Operator commutator(const Operator& a, const Operator& b) {
  return multiply(a, b) - multiply(b, a);
}

/// depth-fold nested commutator [[..[o, q], q], .., q]; depth 0 is o.
inline Operator iterated_commutator(Operator o, const Operator& q, int depth) {
  for (int d = 0; d < depth; ++d) o = commutator(o, q);
  return o;
}

/// Smallest d <= max_depth such that the d-fold iterated commutator of
/// o with qdag vanishes; nullopt when the bound is exceeded.  Vanishing
/// is judged relative to the largest coefficient met along the chain,
/// which absorbs float dust from cancellations.
inline std::optional<int> nilpotency_depth(const Operator& o, const Operator& qdag, int max_depth) {
  Operator it = o;
  double scale = std::max(1.0, it.max_abs_coeff());
  for (int d = 0; d <= max_depth; ++d) {
    if (it.is_negligible(kSymbolicTol * scale)) return d;
    if (d == max_depth) break;
    it = commutator(it, qdag);
    scale = std::max(scale, it.max_abs_coeff());
  }
  return std::nullopt;
}

/// Equality within the symbolic tolerance, relative to the largest
/// coefficient on either side.
inline bool approx_equal(const Operator& a, const Operator& b, double tol = kSymbolicTol) {
  const double scale = std::max({1.0, a.max_abs_coeff(), b.max_abs_coeff()});
  return (a - b).is_negligible(tol * scale);
}

/// Max monomial support cardinality (0 for pure identity content).
inline int k_locality(const Operator& a) {
  int k = 0;
  for (const auto& [m, c] : a.terms()) k = std::max(k, static_cast<int>(m.support().size()));
  return k;
}

struct LocalityMetrics {
  int range = 0;    ///< max over monomials of diam(support); identity terms count 0
  int k_local = 0;  ///< max monomial support cardinality
  std::vector<int> support;
};

/// Range, k-locality, and support of an operator relative to a graph.
/// A monomial's range is the diameter of its site set: 1 + the largest
/// pairwise graph distance (so nearest-neighbor strings have range 2).
inline LocalityMetrics locality_metrics(const Operator& a, const SiteGraph& g) {
  LocalityMetrics out;
  std::set<int> all;
  for (const auto& [m, c] : a.terms()) {
    const auto supp = m.support();
    for (int s : supp) {
      if (s < 0 || s >= g.n_sites())
        throw SiteOutOfGraph("operator touches site " + std::to_string(s));
      all.insert(s);
    }
    out.k_local = std::max(out.k_local, static_cast<int>(supp.size()));
    out.range = std::max(out.range, g.diameter_of(supp));
  }
  out.support.assign(all.begin(), all.end());
  return out;
}

/// Dense matrix in the occupation-bitstring basis (bit i = site i).
inline Eigen::MatrixXcd to_matrix(const Operator& a, int n_sites, int site_cap = kDenseSiteCap) {
  if (n_sites > site_cap)
    throw DimensionCapExceeded("dense conversion needs " + std::to_string(n_sites) +
                               " sites, cap is " + std::to_string(site_cap));
  if (a.max_site() >= n_sites) throw SiteOutOfGraph("operator touches site outside dense system");
  const std::size_t dim = std::size_t{1} << n_sites;
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [m, c] : a.terms()) {
    std::uint64_t create_mask = 0, ann_mask = 0;
    for (int s : m.creates) create_mask |= std::uint64_t{1} << s;
    for (int s : m.annihilates) ann_mask |= std::uint64_t{1} << s;
    const std::uint64_t need_clear = create_mask & ~ann_mask;
    for (std::uint64_t x = 0; x < dim; ++x) {
      if ((x & ann_mask) != ann_mask) continue;  // annihilations need particles
      if ((x & need_clear) != 0) continue;       // creations need holes
      const std::uint64_t y = (x & ~ann_mask) | create_mask;
      mat(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) += c;
    }
  }
  return mat;
}

/// Graph induced by a Hamiltonian: sites are joined whenever some
/// monomial touches both.  Every monomial then has range <= 2 on the
/// result.
inline SiteGraph induced_graph_from_hamiltonian(const Operator& h, int n_sites) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& [m, c] : h.terms()) {
    const auto supp = m.support();
    for (std::size_t a = 0; a < supp.size(); ++a)
      for (std::size_t b = a + 1; b < supp.size(); ++b) edges.emplace_back(supp[a], supp[b]);
  }
  return SiteGraph::from_edge_list(n_sites, edges);
}

}  // namespace scartower
