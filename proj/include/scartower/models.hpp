#pragma once

#include "scartower/op_algebra.hpp"

namespace scartower {

/// sum_i (s^dag_i s_{i+1} + s^dag_{i+1} s_i).
inline Operator hopping_chain(int n_sites, bool periodic) {
  Operator h;
  const int bonds = periodic ? n_sites : n_sites - 1;
  for (int i = 0; i < bonds; ++i) {
    const int j = (i + 1) % n_sites;
    h += Operator::string({i}, {j}) + Operator::string({j}, {i});
  }
  return h;
}

/// Spin-exchange bond in boson language:
///   (s^dag_i s_j + s^dag_j s_i)/2 + (n_i - 1/2)(n_j - 1/2).
/// Fully symmetric states are eigenstates with eigenvalue 1/4.
inline Operator heisenberg_bond(int i, int j) {
  Operator h = 0.5 * (Operator::string({i}, {j}) + Operator::string({j}, {i}));
  h += Operator::string({i, j}, {i, j});      // n_i n_j
  h += -0.5 * Operator::number(i) - 0.5 * Operator::number(j);
  h += 0.25 * Operator::identity();
  return h;
}

/// sum_i S_i . S_{i+1} + field * sum_i (1/2 - n_i) on a chain.  The
/// Dicke states are eigenstates with E_p = bonds/4 + field (N/2 - p).
inline Operator heisenberg_field_chain(int n_sites, double field, bool periodic) {
  Operator h;
  const int bonds = periodic ? n_sites : n_sites - 1;
  for (int i = 0; i < bonds; ++i) h += heisenberg_bond(i, (i + 1) % n_sites);
  for (int i = 0; i < n_sites; ++i)
    h += field * (0.5 * Operator::identity() - Operator::number(i));
  return h;
}

}  // namespace scartower
