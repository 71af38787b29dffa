// Command-line front end: decompose parent Hamiltonians, verify tower
// spacing, build mapping circuits, and emit JSON certificates.
//
// Exit codes: 0 verified/success, 1 clean negative verdict,
// 2 usage or input errors.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scartower/scartower.hpp"

using namespace scartower;

namespace {

constexpr int kExitVerified = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;

int dense_cap_default() {
  if (const char* env = std::getenv("SCARTOWER_DENSE_CAP")) {
    const int cap = std::atoi(env);
    if (cap > 0) return cap;
  }
  return kDenseSiteCap;
}

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {std::stod(text), 0.0};
  return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto comma = text.find(',', pos);
    const std::string token = text.substr(pos, comma == std::string::npos ? text.npos : comma - pos);
    if (!token.empty()) out.push_back(std::stoi(token));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// Resolves --tower: one of the presets (dicke, s2 on a periodic chain,
/// nn from the graph) or a spec file.
TowerSpec resolve_tower(const std::string& tower_arg, std::optional<int> sites,
                        const SiteGraph* graph) {
  if (tower_arg == "dicke" || tower_arg == "s2") {
    int n = sites.value_or(graph ? graph->n_sites() : 0);
    if (n <= 0) throw Error("preset '" + tower_arg + "' needs --sites or --graph");
    return tower_arg == "dicke" ? dicke_spec(n) : s2_spec(n);
  }
  if (tower_arg == "nn") {
    if (!graph) throw Error("preset 'nn' needs --graph");
    return nn_spec(*graph);
  }
  return tower_from_json(read_json_file(tower_arg));
}

void emit(const std::string& out_path, const Json& j) {
  if (!out_path.empty()) write_json_file(out_path, j);
}

struct Options {
  std::string hamiltonian, graph, tower, out, recheck, input, circuit;
  std::string omega0_text = "0", omega_text = "0", probes_text, cut_text;
  std::optional<int> sites;
  int pmax = -1;
  int radius = 1;
  int rmax = 2;
  int n_terms = 4;
  int k = 1;
  std::uint64_t seed = 0;
  bool hermitian = false;
  bool compact = false;
  double tol = 1e-10;
  int dense_cap = dense_cap_default();
};

int run_decompose(const Options& opt) {
  const SiteGraph g = graph_from_json(read_json_file(opt.graph));
  const Operator h = operator_from_json(read_json_file(opt.hamiltonian));
  if (!opt.recheck.empty()) {
    const DecompositionCertificate cert = certificate_from_json(read_json_file(opt.recheck));
    const CertificateCheck check = verify_certificate(cert, h, g);
    if (check.ok) {
      std::cout << "certificate verified: " << cert.annihilators.size() << " annihilators, R = "
                << cert.input_range << "\n";
      return kExitVerified;
    }
    for (const auto& f : check.failures) std::cout << "certificate invalid: " << f << "\n";
    return kExitNegative;
  }
  try {
    const DecompositionCertificate cert = decompose(h, g);
    for (const auto& w : cert.warnings) std::cout << "note: " << w << "\n";
    std::cout << "decomposed: omega0 = " << cert.omega0 << ", omega = " << cert.omega
              << ", R = " << cert.input_range << ", " << cert.annihilators.size()
              << " local annihilators, verified at N = " << cert.verified_at_n_sites << "\n";
    emit(opt.out, certificate_to_json(cert));
    return kExitVerified;
  } catch (const NotParentOfW& e) {
    std::cout << "not a parent of the W state:\n";
    for (const auto& v : e.violated) std::cout << "  " << v << "\n";
    return kExitNegative;
  }
}

int run_classify(const Options& opt) {
  const Operator h = operator_from_json(read_json_file(opt.hamiltonian));
  const int n = opt.sites.value_or(h.max_site() + 1);
  const ClassificationReport rep = classify_terms(h);
  std::cout << "buckets: pure-creation " << rep.pure_creation.size() << ", multi-annihilation "
            << rep.multi_annihilation.size() << ", creation-groups "
            << rep.grouped_annihilation.size() << ", single-annihilation "
            << rep.single_annihilation.size() << ", hopping rows " << rep.hopping.size() << "\n";
  const auto violations = rep.violations(n);
  for (const auto& v : violations) std::cout << "violated: " << v << "\n";
  if (violations.empty()) std::cout << "all conditions satisfied\n";
  emit(opt.out, classification_to_json(rep, n));
  return violations.empty() ? kExitVerified : kExitNegative;
}

int run_verify_tower(const Options& opt) {
  const Operator h = operator_from_json(read_json_file(opt.hamiltonian));
  std::optional<SiteGraph> g;
  if (!opt.graph.empty()) g = graph_from_json(read_json_file(opt.graph));
  const TowerSpec q = resolve_tower(opt.tower, opt.sites, g ? &*g : nullptr);
  const int pmax = opt.pmax > 0 ? opt.pmax : q.n_sites;
  const SpacingReport rep = tower_energies(h, q, pmax, opt.tol);
  std::cout << "verdict: " << SpacingReport::verdict_name(rep.verdict);
  if (rep.verdict == SpacingReport::Verdict::EquallySpaced)
    std::cout << " with omega0 = " << rep.omega0 << ", omega = " << rep.omega
              << ", max deviation " << rep.max_deviation;
  if (rep.truncated_at) std::cout << " (tower ends at p = " << *rep.truncated_at << ")";
  std::cout << "\n";
  emit(opt.out, spacing_report_to_json(rep));
  return rep.verdict == SpacingReport::Verdict::EquallySpaced ? kExitVerified : kExitNegative;
}

int run_induction(const Options& opt) {
  const Operator h = operator_from_json(read_json_file(opt.hamiltonian));
  const TowerSpec q = resolve_tower(opt.tower, opt.sites, nullptr);
  const InductionReport rep = annihilation_induction_check(h, q, opt.k, opt.tol);
  std::cout << "hypothesis (p <= " << rep.hypothesis_depth << "): "
            << (rep.hypothesis_holds ? "holds" : "fails") << "; conclusion (all p <= "
            << rep.tower_end << "): " << (rep.conclusion_holds ? "holds" : "fails") << "\n";
  if (!rep.consistent()) std::cout << "VIOLATION: hypothesis passed but conclusion failed\n";
  emit(opt.out, induction_report_to_json(rep));
  return rep.consistent() ? kExitVerified : kExitNegative;
}

int run_finite_fraction(const Options& opt) {
  const SiteGraph g = graph_from_json(read_json_file(opt.graph));
  const Operator h = operator_from_json(read_json_file(opt.hamiltonian));
  const TowerSpec q = resolve_tower(opt.tower, opt.sites, &g);
  const FiniteFractionReport rep = finite_fraction_check(h, q, g, opt.rmax, opt.tol);
  std::cout << "bound p <= " << rep.theoretical_bound_p << ", witnesses up to p = "
            << rep.checked_up_to << ", " << (rep.pass ? "pass" : "fail") << "\n";
  emit(opt.out, finite_fraction_report_to_json(rep));
  return rep.pass ? kExitVerified : kExitNegative;
}

int run_pack(const Options& opt) {
  const SiteGraph g = graph_from_json(read_json_file(opt.graph));
  if (!opt.recheck.empty()) {
    const Json j = read_json_file(opt.recheck);
    const int r = j.at("radius").get<int>();
    const auto centers = j.at("centers").get<std::vector<int>>();
    bool ok = true;
    for (std::size_t a = 0; a < centers.size() && ok; ++a)
      for (std::size_t b = a + 1; b < centers.size() && ok; ++b) {
        const auto d = g.distance(centers[a], centers[b]);
        if (d && *d <= 2 * r) ok = false;
      }
    const double denom = std::pow(static_cast<double>(std::max(1, g.max_degree())), 2.0 * r) + 1.0;
    if (centers.size() < static_cast<std::size_t>(std::ceil(g.n_sites() / denom))) ok = false;
    std::cout << (ok ? "packing certificate verified\n" : "packing certificate invalid\n");
    return ok ? kExitVerified : kExitNegative;
  }
  const auto centers = g.pack_spheres(opt.radius);
  std::cout << centers.size() << " disjoint balls of radius " << opt.radius << " (lower bound "
            << std::ceil(g.n_sites() /
                         (std::pow(static_cast<double>(std::max(1, g.max_degree())),
                                   2.0 * opt.radius) +
                          1.0))
            << ")\n";
  emit(opt.out, packing_to_json(opt.radius, centers));
  return kExitVerified;
}

int run_layers(const Options& opt) {
  const SiteGraph g = graph_from_json(read_json_file(opt.graph));
  if (!opt.recheck.empty()) {
    const Json j = read_json_file(opt.recheck);
    const int r = j.at("radius").get<int>();
    const auto layers = j.at("layers").get<std::vector<std::vector<int>>>();
    bool ok = true;
    std::vector<int> seen(static_cast<std::size_t>(g.n_sites()), 0);
    for (const auto& layer : layers)
      for (std::size_t a = 0; a < layer.size(); ++a) {
        ++seen[static_cast<std::size_t>(layer[a])];
        for (std::size_t b = a + 1; b < layer.size(); ++b) {
          const auto d = g.distance(layer[a], layer[b]);
          if (d && *d <= 2 * r) ok = false;
        }
      }
    for (int c : seen)
      if (c != 1) ok = false;
    const double bound = std::pow(static_cast<double>(std::max(1, g.max_degree())), 2.0 * r) + 1.0;
    if (static_cast<double>(layers.size()) > bound) ok = false;
    std::cout << (ok ? "layering certificate verified\n" : "layering certificate invalid\n");
    return ok ? kExitVerified : kExitNegative;
  }
  const auto layers = g.disjoint_layers(opt.radius);
  std::cout << layers.size() << " layers at radius " << opt.radius << " (bound "
            << std::pow(static_cast<double>(std::max(1, g.max_degree())), 2.0 * opt.radius) + 1.0
            << ")\n";
  emit(opt.out, layering_to_json(opt.radius, layers));
  return kExitVerified;
}

int run_build_circuit(const Options& opt) {
  const SiteGraph g = graph_from_json(read_json_file(opt.graph));
  const TowerSpec q = resolve_tower(opt.tower, opt.sites, &g);
  auto verify = [&](const GateCircuit& m) {
    const SparseState w = dicke_state(g.n_sites(), 1);
    const SparseState vac = SparseState::vacuum(g.n_sites());
    const SparseState target = tower_state(q, 1, g.n_sites());
    const double res_w = (apply_circuit(m, w).normalized() - target).norm();
    const double res_vac = (apply_circuit(m, vac) - vac).norm();
    return std::max(res_w, res_vac);
  };
  if (!opt.recheck.empty()) {
    const GateCircuit m = circuit_from_json(read_json_file(opt.recheck));
    const double res = verify(m);
    std::cout << "circuit residual " << res << "\n";
    return res < 1e-12 ? kExitVerified : kExitNegative;
  }
  try {
    const GateCircuit m = build_mapping_circuit(q, g, opt.compact);
    const double res = verify(m);
    std::cout << m.layers.size() << " layers, " << m.gate_count() << " gates, residual " << res
              << "\n";
    emit(opt.out, circuit_to_json(m));
    return res < 1e-12 ? kExitVerified : kExitNegative;
  } catch (const ClassConditionViolated& e) {
    std::cout << "cannot build circuit: " << e.what() << "\n";
    return kExitNegative;
  }
}

int run_locality_growth(const Options& opt) {
  const SiteGraph g = graph_from_json(read_json_file(opt.graph));
  const GateCircuit m = circuit_from_json(read_json_file(opt.circuit));
  std::vector<int> probes = parse_int_list(opt.probes_text);
  if (probes.empty())
    for (int i = 0; i < g.n_sites(); i += std::max(1, g.n_sites() / 4)) probes.push_back(i);
  const int delta = measure_locality_growth(m, g, probes, opt.dense_cap);
  std::cout << "observed range growth delta = " << delta << "\n";
  emit(opt.out, Json{{"probes", probes}, {"delta", delta}});
  return kExitVerified;
}

int run_freeze(const Options& opt) {
  const Json j = read_json_file(opt.input);
  const TowerSpec q = tower_from_json(j.at("tower"));
  std::vector<Complex> energies, amplitudes;
  for (const auto& e : j.at("energies")) energies.push_back(complex_from_json(e));
  for (const auto& a : j.at("amplitudes")) amplitudes.push_back(complex_from_json(a));
  const auto cut = j.at("cut").get<std::vector<int>>();
  const auto times = j.at("times").get<std::vector<double>>();
  const double dev = freeze_check(q, energies, amplitudes, cut, times);
  std::cout << "max entropy deviation " << dev << "\n";
  emit(opt.out, Json{{"max_deviation", dev}, {"frozen", dev < opt.tol}});
  return dev < opt.tol ? kExitVerified : kExitNegative;
}

int run_sample_parent(const Options& opt) {
  const SiteGraph g = graph_from_json(read_json_file(opt.graph));
  const Operator h = sample_parent(g, opt.rmax, opt.n_terms, parse_complex(opt.omega0_text),
                                   parse_complex(opt.omega_text), opt.seed, opt.hermitian);
  std::cout << "sampled parent with " << h.size() << " monomials (seed " << opt.seed << ")\n";
  emit(opt.out, operator_to_json(h));
  return kExitVerified;
}

int run_precheck(const Options& opt) {
  const SiteGraph g = graph_from_json(read_json_file(opt.graph));
  const Operator h = operator_from_json(read_json_file(opt.hamiltonian));
  const TowerSpec q = resolve_tower(opt.tower, opt.sites, &g);
  const SizeHypothesisReport rep = theorem_precondition_check(h, g, q);
  std::cout << "k = " << rep.k << ", R = " << rep.range << ", Delta = " << rep.max_degree
            << ", N = " << rep.n_sites << "\n";
  std::cout << "chain bound N > " << rep.chain_bound << ": " << (rep.chain_ok ? "met" : "not met")
            << "\n";
  std::cout << "graph bound N > " << rep.graph_bound << ": " << (rep.graph_ok ? "met" : "not met")
            << "\n";
  if (rep.general_applicable)
    std::cout << "generalized-tower bound N > " << rep.general_bound << ": "
              << (rep.general_ok ? "met" : "not met") << "\n";
  else
    std::cout << "generalized-tower bound: tower classes not satisfied\n";
  emit(opt.out, size_hypothesis_to_json(rep));
  return kExitVerified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hard-core-boson scar-tower toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", opt.out, "write the JSON result here");
    cmd->add_option("--tol", opt.tol, "verdict tolerance");
  };

  auto* decompose_cmd = app.add_subcommand("decompose", "decompose a parent Hamiltonian");
  decompose_cmd->add_option("--hamiltonian", opt.hamiltonian)->required();
  decompose_cmd->add_option("--graph", opt.graph)->required();
  decompose_cmd->add_option("--recheck", opt.recheck, "verify an existing certificate");
  add_common(decompose_cmd);

  auto* classify_cmd = app.add_subcommand("classify", "bucket terms and check conditions");
  classify_cmd->add_option("--hamiltonian", opt.hamiltonian)->required();
  classify_cmd->add_option("--sites", opt.sites);
  add_common(classify_cmd);

  auto* verify_cmd = app.add_subcommand("verify-tower", "tower energies and spacing verdict");
  verify_cmd->add_option("--hamiltonian", opt.hamiltonian)->required();
  verify_cmd->add_option("--tower", opt.tower)->required();
  verify_cmd->add_option("--graph", opt.graph);
  verify_cmd->add_option("--sites", opt.sites);
  verify_cmd->add_option("--pmax", opt.pmax);
  add_common(verify_cmd);

  auto* induction_cmd = app.add_subcommand("induction-check", "annihilation induction check");
  induction_cmd->add_option("--hamiltonian", opt.hamiltonian)->required();
  induction_cmd->add_option("--tower", opt.tower)->required();
  induction_cmd->add_option("--sites", opt.sites);
  induction_cmd->add_option("--k", opt.k)->required();
  add_common(induction_cmd);

  auto* ff_cmd = app.add_subcommand("finite-fraction", "witness-certified annihilation");
  ff_cmd->add_option("--hamiltonian", opt.hamiltonian)->required();
  ff_cmd->add_option("--tower", opt.tower)->required();
  ff_cmd->add_option("--graph", opt.graph)->required();
  ff_cmd->add_option("--rmax", opt.rmax)->required();
  ff_cmd->add_option("--sites", opt.sites);
  add_common(ff_cmd);

  auto* pack_cmd = app.add_subcommand("pack", "greedy disjoint sphere packing");
  pack_cmd->add_option("--graph", opt.graph)->required();
  pack_cmd->add_option("--radius", opt.radius);
  pack_cmd->add_option("--recheck", opt.recheck);
  add_common(pack_cmd);

  auto* layers_cmd = app.add_subcommand("layers", "disjoint-ball layer partition");
  layers_cmd->add_option("--graph", opt.graph)->required();
  layers_cmd->add_option("--radius", opt.radius);
  layers_cmd->add_option("--recheck", opt.recheck);
  add_common(layers_cmd);

  auto* circuit_cmd = app.add_subcommand("build-circuit", "W-to-tower mapping circuit");
  circuit_cmd->add_option("--tower", opt.tower)->required();
  circuit_cmd->add_option("--graph", opt.graph)->required();
  circuit_cmd->add_option("--sites", opt.sites);
  circuit_cmd->add_flag("--compact", opt.compact, "radius-d gates instead of 2d");
  circuit_cmd->add_option("--recheck", opt.recheck);
  add_common(circuit_cmd);

  auto* growth_cmd = app.add_subcommand("locality-growth", "measure conjugation range growth");
  growth_cmd->add_option("--circuit", opt.circuit)->required();
  growth_cmd->add_option("--graph", opt.graph)->required();
  growth_cmd->add_option("--probes", opt.probes_text, "comma-separated probe sites");
  growth_cmd->add_option("--dense-cap", opt.dense_cap, "light-cone site cap");
  add_common(growth_cmd);

  auto* freeze_cmd = app.add_subcommand("freeze-check", "entanglement deviation of superpositions");
  freeze_cmd->add_option("--input", opt.input)->required();
  add_common(freeze_cmd);

  auto* sample_cmd = app.add_subcommand("sample-parent", "seeded random parent Hamiltonian");
  sample_cmd->add_option("--graph", opt.graph)->required();
  sample_cmd->add_option("--rmax", opt.rmax);
  sample_cmd->add_option("--terms", opt.n_terms);
  sample_cmd->add_option("--omega0", opt.omega0_text, "complex as re[,im]");
  sample_cmd->add_option("--omega", opt.omega_text, "complex as re[,im]");
  sample_cmd->add_option("--seed", opt.seed);
  sample_cmd->add_flag("--hermitian", opt.hermitian);
  add_common(sample_cmd);

  auto* precheck_cmd = app.add_subcommand("precheck", "size hypotheses of the spacing statements");
  precheck_cmd->add_option("--hamiltonian", opt.hamiltonian)->required();
  precheck_cmd->add_option("--graph", opt.graph)->required();
  precheck_cmd->add_option("--tower", opt.tower)->required();
  precheck_cmd->add_option("--sites", opt.sites);
  add_common(precheck_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (decompose_cmd->parsed()) return run_decompose(opt);
    if (classify_cmd->parsed()) return run_classify(opt);
    if (verify_cmd->parsed()) return run_verify_tower(opt);
    if (induction_cmd->parsed()) return run_induction(opt);
    if (ff_cmd->parsed()) return run_finite_fraction(opt);
    if (pack_cmd->parsed()) return run_pack(opt);
    if (layers_cmd->parsed()) return run_layers(opt);
    if (circuit_cmd->parsed()) return run_build_circuit(opt);
    if (growth_cmd->parsed()) return run_locality_growth(opt);
    if (freeze_cmd->parsed()) return run_freeze(opt);
    if (sample_cmd->parsed()) return run_sample_parent(opt);
    if (precheck_cmd->parsed()) return run_precheck(opt);
  } catch (const NotParentOfW& e) {
    std::cout << "negative verdict: " << e.what() << "\n";
    return kExitNegative;
  } catch (const TowerTruncated& e) {
    std::cout << "tower truncated: " << e.what() << "\n";
    return kExitNegative;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
