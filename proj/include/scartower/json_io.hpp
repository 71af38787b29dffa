#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scartower/circuit.hpp"
#include "scartower/fock.hpp"
#include "scartower/op_algebra.hpp"
#include "scartower/parent_decomp.hpp"
#include "scartower/site_graph.hpp"
#include "scartower/spectral.hpp"
#include "scartower/tower_spec.hpp"

namespace scartower {

/// Insertion-ordered JSON so repeated runs serialize byte-identically.
using Json = nlohmann::ordered_json;

inline Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

// ---- Operator: {"terms":[{"creates":[...],"annihilates":[...],"coeff":[re,im]},...]}

inline Json operator_to_json(const Operator& op) {
  Json terms = Json::array();
  for (const auto& [m, c] : op.terms()) {
    Json t;
    t["creates"] = m.creates;
    t["annihilates"] = m.annihilates;
    t["coeff"] = complex_to_json(c);
    terms.push_back(std::move(t));
  }
  return Json{{"terms", std::move(terms)}};
}

inline Operator operator_from_json(const Json& j) {
  Operator op;
  for (const auto& t : j.at("terms")) {
    op += Operator::string(t.at("creates").get<std::vector<int>>(),
                           t.at("annihilates").get<std::vector<int>>(),
                           complex_from_json(t.at("coeff")));
  }
  return op;
}

// ---- SiteGraph: {"n_sites": int, "edges": [[i,j],...]}

inline Json graph_to_json(const SiteGraph& g) {
  Json edges = Json::array();
  for (auto [a, b] : g.edge_list()) edges.push_back(Json::array({a, b}));
  return Json{{"n_sites", g.n_sites()}, {"edges", std::move(edges)}};
}

inline SiteGraph graph_from_json(const Json& j) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw Error("edges are [i, j] pairs");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return SiteGraph::from_edge_list(j.at("n_sites").get<int>(), edges);
}

// ---- SparseState: {"n_sites": int, "amplitudes":
//        [{"bits": "0101..." (character i = site i), "coeff":[re,im]},...]}

inline Json state_to_json(const SparseState& psi) {
  Json amps = Json::array();
  for (const auto& [bits, amp] : psi.amplitudes()) {
    std::string s(static_cast<std::size_t>(psi.n_sites()), '0');
    for (int i = 0; i < psi.n_sites(); ++i)
      if (bits >> i & 1) s[static_cast<std::size_t>(i)] = '1';
    amps.push_back(Json{{"bits", std::move(s)}, {"coeff", complex_to_json(amp)}});
  }
  return Json{{"n_sites", psi.n_sites()}, {"amplitudes", std::move(amps)}};
}

inline SparseState state_from_json(const Json& j) {
  SparseState psi(j.at("n_sites").get<int>());
  for (const auto& a : j.at("amplitudes")) {
    const std::string s = a.at("bits").get<std::string>();
    if (static_cast<int>(s.size()) != psi.n_sites())
      throw Error("bits string length must equal n_sites");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') bits |= std::uint64_t{1} << i;
      else if (s[i] != '0') throw Error("bits strings contain only 0 and 1");
    }
    psi.add(bits, complex_from_json(a.at("coeff")));
  }
  return psi;
}

// ---- TowerSpec: {"n_sites":int,"terms":[{"sites":[...],"coeff":[re,im]},...],
//                  "preset":"dicke"|"s2"|"nn"|null}

inline Json tower_to_json(const TowerSpec& q, const std::optional<std::string>& preset = std::nullopt) {
  Json terms = Json::array();
  for (const auto& t : q.terms)
    terms.push_back(Json{{"sites", t.sites}, {"coeff", complex_to_json(t.coeff)}});
  Json j{{"n_sites", q.n_sites}, {"terms", std::move(terms)}};
  j["preset"] = preset ? Json(*preset) : Json(nullptr);
  return j;
}

inline TowerSpec tower_from_json(const Json& j) {
  const int n = j.at("n_sites").get<int>();
  if (j.contains("terms") && !j.at("terms").empty()) {
    std::vector<TowerTerm> terms;
    for (const auto& t : j.at("terms"))
      terms.push_back({t.at("sites").get<std::vector<int>>(), complex_from_json(t.at("coeff"))});
    return TowerSpec::make(n, std::move(terms));
  }
  if (j.contains("preset") && j.at("preset").is_string()) {
    const std::string preset = j.at("preset").get<std::string>();
    if (preset == "dicke") return dicke_spec(n);
    if (preset == "s2") return s2_spec(n);
    throw Error("preset '" + preset + "' needs explicit terms or a graph");
  }
  throw Error("tower spec needs terms or a synthesizable preset");
}

// ---- GateCircuit: row-major complex gate matrices

inline Json circuit_to_json(const GateCircuit& m) {
  Json layers = Json::array();
  for (const auto& layer : m.layers) {
    Json jl = Json::array();
    for (const auto& gate : layer) {
      Json entries = Json::array();
      for (Eigen::Index r = 0; r < gate.matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < gate.matrix.cols(); ++c)
          entries.push_back(complex_to_json(gate.matrix(r, c)));
      jl.push_back(Json{{"support", gate.support}, {"matrix", std::move(entries)}});
    }
    layers.push_back(std::move(jl));
  }
  return Json{{"n_sites", m.n_sites}, {"layers", std::move(layers)}};
}

inline GateCircuit circuit_from_json(const Json& j) {
  GateCircuit m;
  m.n_sites = j.at("n_sites").get<int>();
  for (const auto& jl : j.at("layers")) {
    std::vector<Gate> layer;
    for (const auto& jg : jl) {
      Gate gate;
      gate.support = jg.at("support").get<std::vector<int>>();
      const Eigen::Index dim = Eigen::Index(1) << gate.support.size();
      const auto& entries = jg.at("matrix");
      if (static_cast<Eigen::Index>(entries.size()) != dim * dim)
        throw Error("gate matrix entry count does not match support size");
      gate.matrix.resize(dim, dim);
      Eigen::Index idx = 0;
      for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c)
          gate.matrix(r, c) = complex_from_json(entries[static_cast<std::size_t>(idx++)]);
      layer.push_back(std::move(gate));
    }
    m.layers.push_back(std::move(layer));
  }
  validate_circuit(m);
  return m;
}

// ---- DecompositionCertificate:
// {"omega0":[re,im],"omega":[re,im],"R":int,
//  "annihilators":[{"support":[...],"operator":{...}},...],"verified_at_n_sites":int}

inline Json certificate_to_json(const DecompositionCertificate& cert) {
  Json anns = Json::array();
  for (const auto& ann : cert.annihilators)
    anns.push_back(Json{{"support", ann.support}, {"operator", operator_to_json(ann.op)}});
  return Json{{"omega0", complex_to_json(cert.omega0)},
              {"omega", complex_to_json(cert.omega)},
              {"R", cert.input_range},
              {"annihilators", std::move(anns)},
              {"verified_at_n_sites", cert.verified_at_n_sites}};
}

inline DecompositionCertificate certificate_from_json(const Json& j) {
  DecompositionCertificate cert;
  cert.omega0 = complex_from_json(j.at("omega0"));
  cert.omega = complex_from_json(j.at("omega"));
  cert.input_range = j.at("R").get<int>();
  cert.w_eigenvalue = cert.omega0 + cert.omega;
  cert.verified_at_n_sites = j.at("verified_at_n_sites").get<int>();
  for (const auto& ja : j.at("annihilators")) {
    LocalAnnihilator ann;
    ann.support = ja.at("support").get<std::vector<int>>();
    ann.op = operator_from_json(ja.at("operator"));
    cert.annihilators.push_back(std::move(ann));
  }
  return cert;
}

// ---- certificates for packings and layerings

inline Json packing_to_json(int radius, const std::vector<int>& centers) {
  return Json{{"radius", radius}, {"centers", centers}};
}

inline Json layering_to_json(int radius, const std::vector<std::vector<int>>& layers) {
  return Json{{"radius", radius}, {"layers", layers}};
}

// ---- report serializations (one-way)

inline Json spacing_report_to_json(const SpacingReport& rep) {
  Json energies = Json::array();
  for (const Complex& e : rep.energies) energies.push_back(complex_to_json(e));
  Json j{{"energies", std::move(energies)},
         {"residuals", rep.residuals},
         {"omega0", complex_to_json(rep.omega0)},
         {"omega", complex_to_json(rep.omega)},
         {"max_deviation", rep.max_deviation},
         {"verdict", SpacingReport::verdict_name(rep.verdict)},
         {"non_eigenstate_ps", rep.non_eigenstate_ps}};
  j["truncated_at"] = rep.truncated_at ? Json(*rep.truncated_at) : Json(nullptr);
  return j;
}

inline Json classification_to_json(const ClassificationReport& rep, int n_sites) {
  Json j;
  j["identity_coeff"] = complex_to_json(rep.identity_coeff);
  {
    Json terms = Json::array();
    for (const auto& [m, c] : rep.pure_creation)
      terms.push_back(Json{{"creates", m.creates}, {"coeff", complex_to_json(c)}});
    j["pure_creation"] = Json{{"terms", std::move(terms)}, {"satisfied", rep.pure_creation_ok()}};
  }
  j["multi_annihilation"] =
      Json{{"count", rep.multi_annihilation.size()}, {"satisfied", true}};
  {
    Json groups = Json::array();
    for (const auto& grp : rep.grouped_annihilation)
      groups.push_back(Json{{"creates", grp.creates}, {"sum", complex_to_json(grp.sum)}});
    j["grouped_annihilation"] = Json{{"groups", std::move(groups)}, {"satisfied", rep.grouped_ok()}};
  }
  j["single_annihilation"] = Json{{"sum", complex_to_json(rep.single_annihilation_sum)},
                                  {"satisfied", rep.single_annihilation_ok()}};
  {
    const auto lambda = rep.hopping_lambda(n_sites);
    j["hopping"] = Json{{"lambda", lambda ? complex_to_json(*lambda) : Json(nullptr)},
                        {"satisfied", lambda.has_value()}};
  }
  j["all_satisfied"] = rep.all_satisfied(n_sites);
  return j;
}

inline Json induction_report_to_json(const InductionReport& rep) {
  return Json{{"k", rep.k},
              {"hypothesis_depth", rep.hypothesis_depth},
              {"tower_end", rep.tower_end},
              {"norms", rep.norms},
              {"hypothesis_holds", rep.hypothesis_holds},
              {"hypothesis_failures", rep.hypothesis_failures},
              {"conclusion_holds", rep.conclusion_holds},
              {"conclusion_failures", rep.conclusion_failures},
              {"consistent", rep.consistent()}};
}

inline Json finite_fraction_report_to_json(const FiniteFractionReport& rep) {
  Json entries = Json::array();
  for (const auto& e : rep.entries) {
    entries.push_back(Json{{"p", e.p},
                           {"witness_available", e.witness_available},
                           {"is_eigenstate", e.is_eigenstate},
                           {"eigenvalue", complex_to_json(e.eigenvalue)},
                           {"residual", e.residual},
                           {"witness_overlap", complex_to_json(e.witness_overlap)},
                           {"ok", e.ok}});
  }
  return Json{{"r_max", rep.r_max},
              {"theoretical_bound_p", rep.theoretical_bound_p},
              {"checked_up_to", rep.checked_up_to},
              {"entries", std::move(entries)},
              {"pass", rep.pass}};
}

inline Json class_report_to_json(const TowerClassReport& rep) {
  Json j;
  j["q1"] = Json{{"satisfied", rep.q1.satisfied},
                 {"dicke_like", rep.q1.dicke_like},
                 {"c", rep.q1.c},
                 {"d", rep.q1.d},
                 {"reason", rep.q1.reason}};
  j["q2"] = Json{{"satisfied", rep.q2.satisfied},
                 {"c", rep.q2.c},
                 {"d1", rep.q2.d1},
                 {"d2", rep.q2.d2},
                 {"reason", rep.q2.reason}};
  j["q3"] = Json{{"satisfied", rep.q3.satisfied}};
  j["charge"] = rep.charge ? Json(*rep.charge) : Json(nullptr);
  j["delta_bound"] = rep.delta_bound();
  return j;
}

inline Json size_hypothesis_to_json(const SizeHypothesisReport& rep) {
  return Json{{"n_sites", rep.n_sites},
              {"k", rep.k},
              {"range", rep.range},
              {"max_degree", rep.max_degree},
              {"chain_bound", rep.chain_bound},
              {"chain_ok", rep.chain_ok},
              {"graph_bound", rep.graph_bound},
              {"graph_ok", rep.graph_ok},
              {"general_applicable", rep.general_applicable},
              {"general_bound", rep.general_bound},
              {"general_ok", rep.general_ok},
              {"classes", class_report_to_json(rep.classes)}};
}

// ---- file helpers

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("malformed JSON in '" + path + "' at byte " + std::to_string(e.byte) + ": " +
                e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace scartower
