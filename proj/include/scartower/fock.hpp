#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "scartower/errors.hpp"
#include "scartower/op_algebra.hpp"
#include "scartower/tower_spec.hpp"

namespace scartower {

/// Amplitudes below this magnitude are dropped from sparse states.
inline constexpr double kAmpPrune = 1e-15;
/// Default cap on the traced-out subsystem size in entropy computations.
inline constexpr int kEntropySubsetCap = 12;
/// Hard cap from 64-bit occupation indexing.
inline constexpr int kMaxSites = 63;

/// Sparse state vector over occupation bitstrings (bit i = occupancy of
/// site i).  Stored amplitudes are never exactly zero; the map is
/// ordered so iteration and serialization are reproducible.
class SparseState {
 public:
  using AmpMap = std::map<std::uint64_t, Complex>;

  SparseState() = default;

  explicit SparseState(int n_sites) : n_(check_sites(n_sites)) {}

  static SparseState vacuum(int n_sites) { return basis_state(n_sites, 0); }

  static SparseState basis_state(int n_sites, std::uint64_t bits) {
    SparseState s(n_sites);
    s.amps_[bits] = 1.0;
    return s;
  }

  int n_sites() const { return n_; }
  const AmpMap& amplitudes() const { return amps_; }
  bool empty() const { return amps_.empty(); }

  Complex amplitude(std::uint64_t bits) const {
    auto it = amps_.find(bits);
    return it == amps_.end() ? Complex(0.0) : it->second;
  }

  void add(std::uint64_t bits, Complex amp) {
    auto [it, inserted] = amps_.try_emplace(bits, amp);
    if (!inserted) it->second += amp;
    if (std::abs(it->second) <= kAmpPrune) amps_.erase(it);
  }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& [b, a] : amps_) s += std::norm(a);
    return s;
  }

  double norm() const { return std::sqrt(norm_sq()); }

  SparseState& operator+=(const SparseState& rhs) {
    check_same(rhs);
    for (const auto& [b, a] : rhs.amps_) add(b, a);
    return *this;
  }

  SparseState& operator-=(const SparseState& rhs) {
    check_same(rhs);
    for (const auto& [b, a] : rhs.amps_) add(b, -a);
    return *this;
  }

  SparseState& operator*=(Complex c) {
    if (std::abs(c) <= kAmpPrune) {
      amps_.clear();
      return *this;
    }
    for (auto& [b, a] : amps_) a *= c;
    return *this;
  }

  friend SparseState operator+(SparseState lhs, const SparseState& rhs) { return lhs += rhs; }
  friend SparseState operator-(SparseState lhs, const SparseState& rhs) { return lhs -= rhs; }
  friend SparseState operator*(Complex c, SparseState s) { return s *= c; }

  SparseState normalized() const {
    const double nrm = norm();
    if (nrm <= 0.0) throw Error("cannot normalize a zero state");
    SparseState out = *this;
    out *= Complex(1.0 / nrm);
    return out;
  }

  friend Complex inner(const SparseState& a, const SparseState& b) {
    a.check_same(b);
    // iterate the smaller map
    const SparseState& small = a.amps_.size() <= b.amps_.size() ? a : b;
    const SparseState& large = a.amps_.size() <= b.amps_.size() ? b : a;
    Complex s = 0.0;
    for (const auto& [bits, amp] : small.amps_) {
      auto it = large.amps_.find(bits);
      if (it == large.amps_.end()) continue;
      s += (&small == &a) ? std::conj(amp) * it->second : std::conj(it->second) * amp;
    }
    return s;
  }

  Eigen::VectorXcd to_dense(int site_cap = kDenseSiteCap) const {
    if (n_ > site_cap) throw DimensionCapExceeded("dense state at " + std::to_string(n_) + " sites");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index(1) << n_);
    for (const auto& [b, a] : amps_) v(static_cast<Eigen::Index>(b)) = a;
    return v;
  }

 private:
  static int check_sites(int n) {
    if (n < 0 || n > kMaxSites) throw DimensionCapExceeded("site count outside [0, 63]");
    return n;
  }

  void check_same(const SparseState& rhs) const {
    if (n_ != rhs.n_) throw DimensionMismatch("states live on different site counts");
  }

  int n_ = 0;
  AmpMap amps_;
};

/// Exact sparse action of an operator.  A monomial maps |x> to |y> with
/// unit weight when x has particles on all annihilation sites and holes
/// on the pure-creation sites, and to zero otherwise.
inline SparseState apply(const Operator& op, const SparseState& psi) {
  if (op.max_site() >= psi.n_sites()) throw SiteOutOfGraph("operator touches site outside state");
  SparseState out(psi.n_sites());
  for (const auto& [m, c] : op.terms()) {
    std::uint64_t create_mask = 0, ann_mask = 0;
    for (int s : m.creates) create_mask |= std::uint64_t{1} << s;
    for (int s : m.annihilates) ann_mask |= std::uint64_t{1} << s;
    const std::uint64_t need_clear = create_mask & ~ann_mask;
    for (const auto& [bits, amp] : psi.amplitudes()) {
      if ((bits & ann_mask) != ann_mask) continue;
      if ((bits & need_clear) != 0) continue;
      out.add((bits & ~ann_mask) | create_mask, c * amp);
    }
  }
  return out;
}

namespace detail {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace detail

/// Normalized uniform superposition of all weight-p occupation strings
/// on n_sites qubits; p = 1 is the W state.
inline SparseState dicke_state(int n_sites, int p) {
  if (p < 0 || p > n_sites) throw InvalidParticleNumber("particle number outside [0, N]");
  SparseState out(n_sites);
  const double amp = 1.0 / std::sqrt(detail::binomial(n_sites, p));
  if (p == 0) {
    out.add(0, amp);
    return out;
  }
  // Gosper's hack over all weight-p strings.
  std::uint64_t x = (std::uint64_t{1} << p) - 1;
  const std::uint64_t limit = n_sites == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_sites);
  while (x < limit) {
    out.add(x, amp);
    const std::uint64_t c = x & (~x + 1);
    const std::uint64_t r = x + c;
    if (r >= limit) break;
    x = (((r ^ x) >> 2) / c) | r;
  }
  return out;
}

/// Normalized (Q^dag)^p |vac>, renormalizing after each application so
/// the intermediate normalization constants never over- or underflow.
/// Throws TowerTruncated (carrying the last valid p) when the tower
/// ends before the requested rung.
inline SparseState tower_state(const TowerSpec& q, int p, int n_sites) {
  if (p < 0) throw InvalidParticleNumber("negative tower index");
  if (q.n_sites > n_sites) throw SiteOutOfGraph("tower spec larger than system");
  SparseState psi = SparseState::vacuum(n_sites);
  if (p == 0) return psi;
  const Operator qdag = q.creation_operator();
  for (int step = 1; step <= p; ++step) {
    psi = apply(qdag, psi);
    if (psi.empty())
      throw TowerTruncated("tower ends at p = " + std::to_string(step - 1), step - 1);
    psi = psi.normalized();
  }
  return psi;
}

/// Largest p with (Q^dag)^p |vac> nonzero, scanning up to p_cap.
inline int tower_end(const TowerSpec& q, int n_sites, int p_cap) {
  SparseState psi = SparseState::vacuum(n_sites);
  const Operator qdag = q.creation_operator();
  int p = 0;
  while (p < p_cap) {
    psi = apply(qdag, psi);
    if (psi.empty()) break;
    psi = psi.normalized();
    ++p;
  }
  return p;
}

/// Schmidt coefficient f_l of a p-particle Dicke state across a cut
/// into |X| = x_size sites and the rest:
/// sqrt( C(x,l) C(N-x, p-l) / C(N,p) ).
inline double schmidt_coeff(int n_sites, int x_size, int p, int l) {
  if (p < 0 || p > n_sites || x_size < 0 || x_size > n_sites)
    throw InvalidParticleNumber("invalid cut or particle number");
  if (l < 0 || l > std::min(x_size, p) || p - l > n_sites - x_size)
    throw InvalidParticleNumber("invalid Schmidt sector");
  return std::sqrt(detail::binomial(x_size, l) * detail::binomial(n_sites - x_size, p - l) /
                   detail::binomial(n_sites, p));
}

/// Von Neumann entropy (nats) of the reduced density matrix over
/// `subset`.  Works on the Gram matrix of the occupied subsystem rows,
/// so the cost scales with the state's sparsity rather than 2^|subset|.
/// Eigenvalues at or below 1e-14 are treated as exact zeros.
inline double reduced_entropy(const SparseState& psi, const std::vector<int>& subset,
                              int subset_cap = kEntropySubsetCap) {
  if (static_cast<int>(subset.size()) > subset_cap)
    throw SubsetTooLarge("entropy subset of " + std::to_string(subset.size()) + " sites, cap " +
                         std::to_string(subset_cap));
  for (int s : subset)
    if (s < 0 || s >= psi.n_sites()) throw SiteOutOfGraph("entropy subset site outside state");

  // Split each occupation string into (row = subset bits, col = rest).
  std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, Complex>>> by_col;
  std::map<std::uint64_t, int> row_index;
  for (const auto& [bits, amp] : psi.amplitudes()) {
    std::uint64_t row = 0;
    for (std::size_t k = 0; k < subset.size(); ++k)
      if (bits >> subset[k] & 1) row |= std::uint64_t{1} << k;
    std::uint64_t col = bits;
    for (int s : subset) col &= ~(std::uint64_t{1} << s);
    row_index.try_emplace(row, 0);
    by_col[col].emplace_back(row, amp);
  }
  int idx = 0;
  for (auto& [row, i] : row_index) i = idx++;

  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(idx, idx);
  for (const auto& [col, entries] : by_col) {
    for (const auto& [ra, aa] : entries) {
      for (const auto& [rb, ab] : entries) {
        gram(row_index[ra], row_index[rb]) += aa * std::conj(ab);
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda > 1e-14) entropy -= lambda * std::log(lambda);
  }
  return entropy;
}

struct EigenCheck {
  Complex eigenvalue;  ///< <psi|H|psi>
  double residual;     ///< || H psi - eigenvalue psi ||_2

  bool is_eigenstate(double tol = 1e-10) const { return residual < tol; }
};

/// Rayleigh quotient and eigenstate residual of a normalized state.
inline EigenCheck eigen_check(const Operator& h, const SparseState& psi) {
  SparseState hpsi = apply(h, psi);
  const Complex e = inner(psi, hpsi);
  hpsi -= e * psi;
  return {e, hpsi.norm()};
}

}  // namespace scartower
