// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure.  argv[1] names the CLI binary (used by the determinism
// criterion).

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "scartower/scartower.hpp"
#include "test_utils.hpp"

using namespace scartower;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& msg) {
    if (!ok && pass) {
      pass = false;
      detail = msg;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- 1. symbolic algebra vs dense oracle --------------------------------

Criterion criterion_oracle_equivalence() {
  Criterion c;
  const auto start = std::chrono::steady_clock::now();
  Rng rng(1001);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.uniform_int(3, 6);
    const Operator a = testing::random_operator(rng, n, 4, 3);
    const Operator b = testing::random_operator(rng, n, 4, 3);
    const Eigen::MatrixXcd ma = to_matrix(a, n), mb = to_matrix(b, n);
    c.require((to_matrix(multiply(a, b), n) - ma * mb).cwiseAbs().maxCoeff() < 1e-12,
              "product mismatch at trial " + std::to_string(trial));
    c.require((to_matrix(commutator(a, b), n) - (ma * mb - mb * ma)).cwiseAbs().maxCoeff() < 1e-12,
              "commutator mismatch at trial " + std::to_string(trial));
    c.require((to_matrix(adjoint(a), n) - ma.adjoint()).cwiseAbs().maxCoeff() < 1e-12,
              "adjoint mismatch at trial " + std::to_string(trial));
    if (!c.pass) break;
  }
  const double secs = seconds_since(start);
  c.require(secs < 10.0, "runtime " + std::to_string(secs) + "s exceeds 10s");
  if (c.pass) c.detail = "500 pairs, " + std::to_string(secs).substr(0, 4) + "s";
  return c;
}

// ---- 2. decomposition round trip ----------------------------------------

Criterion criterion_decomposition_roundtrip() {
  Criterion c;
  const auto start = std::chrono::steady_clock::now();
  const SiteGraph chain = SiteGraph::chain(12, true);
  const SiteGraph grid = SiteGraph::square_grid(3, 4, true);
  int count = 0;
  for (const SiteGraph* g : {&chain, &grid}) {
    const SparseState w = dicke_state(g->n_sites(), 1);
    const SparseState vac = SparseState::vacuum(g->n_sites());
    for (std::uint64_t seed = 0; seed < 100 && c.pass; ++seed) {
      const bool hermitian = seed % 2 == 0;
      const Operator h = sample_parent(*g, 3, 3 + static_cast<int>(seed % 4), Complex(0.25, 0.0),
                                       Complex(1.5, 0.0), 7000 + seed, hermitian);
      DecompositionCertificate cert;
      try {
        cert = decompose(h, *g);
      } catch (const Error& e) {
        c.require(false, "decompose failed at seed " + std::to_string(seed) + ": " + e.what());
        break;
      }
      c.require(cert.input_range <= 3, "sampled parent exceeded R = 3");
      Operator rebuilt =
          cert.omega0 * Operator::identity() + cert.omega * Operator::total_number(g->n_sites());
      for (const auto& ann : cert.annihilators) rebuilt += ann.op;
      c.require((rebuilt - h).is_negligible(1e-12 * std::max(1.0, h.max_abs_coeff())),
                "reconstruction drift at seed " + std::to_string(seed));
      for (const auto& ann : cert.annihilators) {
        c.require(apply(ann.op, w).norm() < 1e-12, "W-state residual at seed " + std::to_string(seed));
        c.require(apply(ann.op, vac).norm() < 1e-12, "vacuum residual at seed " + std::to_string(seed));
        c.require(g->diameter_of(ann.support) <= 2 * cert.input_range,
                  "diameter bound at seed " + std::to_string(seed));
      }
      ++count;
    }
  }
  const double secs = seconds_since(start);
  c.require(secs < 60.0, "runtime " + std::to_string(secs) + "s exceeds 1min");
  if (c.pass)
    c.detail = std::to_string(count) + " certificates, " + std::to_string(secs).substr(0, 4) + "s";
  return c;
}

// ---- 3. equal spacing ----------------------------------------------------

Criterion criterion_equal_spacing() {
  Criterion c;
  int all_eigenstate_instances = 0;
  const SiteGraph g10 = SiteGraph::chain(10, true);
  const SiteGraph g12 = SiteGraph::chain(12, true);

  // sampled parents, Hermitian and not; every instance whose whole Dicke
  // tower passes the eigenstate check must come out equally spaced
  for (const SiteGraph* g : {&g10, &g12}) {
    for (std::uint64_t seed = 0; seed < 100 && c.pass; ++seed) {
      const bool hermitian = seed % 2 == 0;
      const Complex omega0 = hermitian ? Complex(0.5, 0.0) : Complex(0.5, -0.3);
      const Complex omega = hermitian ? Complex(1.25, 0.0) : Complex(1.25, 0.4);
      const Operator h =
          sample_parent(*g, 3, 2 + static_cast<int>(seed % 3), omega0, omega, 9000 + seed, hermitian);
      const SpacingReport rep = tower_energies(h, dicke_spec(g->n_sites()), g->n_sites());
      c.require(rep.verdict != SpacingReport::Verdict::Unequal,
                "unequal spacing with all rungs eigenstates at seed " + std::to_string(seed));
      if (rep.verdict == SpacingReport::Verdict::EquallySpaced) ++all_eigenstate_instances;
    }
  }

  // random-weight exchange bonds plus field: every rung is an eigenstate;
  // odd trials use complex weights, exercising non-Hermitian parents
  Rng rng(333);
  int non_hermitian_instances = 0;
  for (int trial = 0; trial < 30 && c.pass; ++trial) {
    const int n = trial % 2 == 0 ? 10 : 12;
    const bool complex_weights = trial % 2 == 1;
    const SiteGraph g = SiteGraph::chain(n, true);
    Operator h;
    auto weight = [&]() {
      return complex_weights ? rng.coefficient() : Complex(rng.real_coefficient(), 0.0);
    };
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < 0.7) h += weight() * heisenberg_bond(i, (i + 1) % n);
      if (rng.uniform() < 0.3) h += weight() * heisenberg_bond(i, (i + 2) % n);  // longer bonds too
    }
    const Complex field = weight();
    for (int i = 0; i < n; ++i) h += field * (0.5 * Operator::identity() - Operator::number(i));
    const SpacingReport rep = tower_energies(h, dicke_spec(n), n);
    c.require(rep.verdict == SpacingReport::Verdict::EquallySpaced,
              "weighted exchange instance not equally spaced at trial " + std::to_string(trial));
    c.require(rep.max_deviation < 1e-9, "spacing deviation above 1e-9");
    c.require(std::abs(rep.omega + field) < 1e-9, "field should set the spacing");
    ++all_eigenstate_instances;
    if (complex_weights) ++non_hermitian_instances;
  }
  c.require(non_hermitian_instances > 0, "no non-Hermitian full-tower instances exercised");

  // closed form for the uniform exchange chain plus field
  for (int n : {8, 10}) {
    for (double field : {1.0, 0.55}) {
      const SpacingReport rep =
          tower_energies(heisenberg_field_chain(n, field, true), dicke_spec(n), n);
      c.require(rep.verdict == SpacingReport::Verdict::EquallySpaced, "closed-form tower failed");
      for (int p = 0; p <= n && c.pass; ++p) {
        const Complex expect(n / 4.0 + field * (n / 2.0 - p), 0.0);
        c.require(std::abs(rep.energies[static_cast<std::size_t>(p)] - expect) < 1e-10,
                  "closed-form energy mismatch at N = " + std::to_string(n));
      }
    }
  }
  if (c.pass)
    c.detail = std::to_string(all_eigenstate_instances) + " fully eigenstate towers, 0 counterexamples";
  return c;
}

// ---- 4. nilpotent commutator bounds --------------------------------------

Criterion criterion_nilpotency() {
  Criterion c;
  const auto start = std::chrono::steady_clock::now();
  const SiteGraph grid = SiteGraph::square_grid(3, 3, true);
  struct Ladder {
    std::string name;
    Operator qdag;
    int n_sites;
  };
  const std::vector<Ladder> ladders{
      {"total-creation", dicke_spec(12).creation_operator(), 12},
      {"bond-pair", s2_spec(12).creation_operator(), 12},
      {"neighborhood-block", nn_spec(grid).creation_operator(), 9},
  };
  Rng rng(22);
  for (int trial = 0; trial < 200 && c.pass; ++trial) {
    const int k = 1 + trial % 3;
    for (const Ladder& ladder : ladders) {
      const Operator o = testing::random_k_local(rng, ladder.n_sites, k, 2);
      const auto depth = nilpotency_depth(o, ladder.qdag, 2 * k + 1);
      c.require(depth.has_value() && *depth <= 2 * k + 1,
                "depth beyond 2k+1 against " + ladder.name + " at trial " + std::to_string(trial));
      if (!c.pass) break;
    }
  }
  // known exact depths
  const Operator sdag12 = dicke_spec(12).creation_operator();
  c.require(nilpotency_depth(Operator::annihilation(4), sdag12, 4) == 3,
            "single annihilator should die at depth 3");
  c.require(nilpotency_depth(Operator::string({}, {2, 7}), sdag12, 6) == 5,
            "annihilation pair should die at depth 5");
  const double secs = seconds_since(start);
  c.require(secs < 30.0, "runtime " + std::to_string(secs) + "s exceeds 30s");
  if (c.pass) c.detail = "200 operators x 3 ladders, " + std::to_string(secs).substr(0, 4) + "s";
  return c;
}

// ---- 5. finite-fraction annihilation -------------------------------------

Criterion criterion_finite_fraction() {
  Criterion c;
  const SiteGraph chain = SiteGraph::chain(12, true);
  const SiteGraph grid = SiteGraph::square_grid(3, 4, true);
  for (const SiteGraph* g : {&chain, &grid}) {
    for (std::uint64_t seed = 0; seed < 10 && c.pass; ++seed) {
      Operator hp;
      Rng rng(500 + seed);
      for (int t = 0; t < 4; ++t) hp += sample_annihilator(*g, 3, rng.next_u64());
      const FiniteFractionReport rep = finite_fraction_check(hp, dicke_spec(12), *g, 3);
      c.require(rep.pass, "finite-fraction failure at seed " + std::to_string(seed));
      c.require(rep.checked_up_to >= rep.theoretical_bound_p, "witness range below the bound");
      for (const auto& e : rep.entries) {
        c.require(std::abs(e.witness_overlap) < 1e-10, "witness overlap not zero");
        if (e.is_eigenstate) c.require(std::abs(e.eigenvalue) < 1e-10, "eigenstate with E' != 0");
      }
    }
  }
  // the hopping-derived pure annihilator sum hits the boundary p = N / r_max
  const Operator hp = hopping_chain(12, true) - 2.0 * Operator::total_number(12);
  const FiniteFractionReport rep = finite_fraction_check(hp, dicke_spec(12), chain, 3);
  c.require(rep.theoretical_bound_p == 4 && rep.checked_up_to >= 4,
            "boundary rung p = N/r_max not covered");
  c.require(rep.pass, "hopping-derived annihilator sum failed");
  if (c.pass) c.detail = "chain + grid sums, boundary rung included";
  return c;
}

// ---- 6. mapping circuits --------------------------------------------------

Criterion criterion_circuits() {
  Criterion c;
  struct Case {
    std::string name;
    TowerSpec spec;
    SiteGraph graph;
    bool compact;
    int expected_layers;
    double delta_cap;  // additional explicit cap when specified
  };
  std::vector<Case> cases;
  cases.push_back({"bond-pair-10", s2_spec(10), SiteGraph::chain(10, true), false, 5, -1.0});
  cases.push_back({"bond-pair-9-compact", s2_spec(9), SiteGraph::chain(9, true), true, 3, 18.0});
  {
    const SiteGraph g33 = SiteGraph::square_grid(3, 3, true);
    cases.push_back({"neighborhood-3x3", nn_spec(g33), g33, false, -1, -1.0});
  }
  for (const Case& kase : cases) {
    const int n = kase.graph.n_sites();
    GateCircuit m;
    try {
      m = build_mapping_circuit(kase.spec, kase.graph, kase.compact);
    } catch (const Error& e) {
      c.require(false, kase.name + ": " + e.what());
      continue;
    }
    const TowerClassReport rep = check_classes(kase.spec, kase.graph);
    if (kase.expected_layers > 0)
      c.require(static_cast<int>(m.layers.size()) == kase.expected_layers,
                kase.name + ": unexpected layer count " + std::to_string(m.layers.size()));
    const double layer_bound =
        std::pow(static_cast<double>(kase.graph.max_degree()), 4.0 * rep.q1.d) + 1.0;
    c.require(static_cast<double>(m.layers.size()) <= layer_bound, kase.name + ": layer bound");
    const SparseState mapped = apply_circuit(m, dicke_state(n, 1));
    c.require((mapped - tower_state(kase.spec, 1, n)).norm() < 1e-12,
              kase.name + ": W-to-tower residual");
    const SparseState vac = SparseState::vacuum(n);
    c.require((apply_circuit(m, vac) - vac).norm() < 1e-12, kase.name + ": vacuum moved");
    std::vector<int> probes{0, n / 2};
    const int delta = measure_locality_growth(m, kase.graph, probes, 12);
    c.require(static_cast<double>(delta) <= rep.delta_bound(), kase.name + ": growth bound");
    if (kase.delta_cap > 0)
      c.require(static_cast<double>(delta) <= kase.delta_cap, kase.name + ": explicit growth cap");
  }
  if (c.pass) c.detail = "3 circuits map exactly within their layer and growth budgets";
  return c;
}

// ---- 7. packing and layering lemmas ---------------------------------------

Criterion criterion_graph_lemmas() {
  Criterion c;
  const auto start = std::chrono::steady_clock::now();
  std::vector<SiteGraph> graphs;
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 20 + static_cast<int>(rng.next_u64() % 41);
    std::vector<std::pair<int, int>> edges;
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (int attempt = 0; attempt < 4 * n; ++attempt) {
      const int a = rng.uniform_int(0, n - 1), b = rng.uniform_int(0, n - 1);
      if (a == b || degree[static_cast<std::size_t>(a)] >= 4 ||
          degree[static_cast<std::size_t>(b)] >= 4)
        continue;
      edges.emplace_back(a, b);
      ++degree[static_cast<std::size_t>(a)];
      ++degree[static_cast<std::size_t>(b)];
    }
    graphs.push_back(SiteGraph::from_edge_list(n, edges));
  }
  graphs.push_back(SiteGraph::chain(60, true));
  graphs.push_back(SiteGraph::chain(37, false));
  graphs.push_back(SiteGraph::square_grid(6, 8, true));
  graphs.push_back(SiteGraph::square_grid(5, 5, false));

  for (std::size_t gi = 0; gi < graphs.size() && c.pass; ++gi) {
    const SiteGraph& g = graphs[gi];
    for (int r = 0; r <= 2 && c.pass; ++r) {
      const auto centers = g.pack_spheres(r);
      for (std::size_t a = 0; a < centers.size(); ++a) {
        const auto dist = g.bfs_distances(centers[a]);
        for (std::size_t b = a + 1; b < centers.size(); ++b) {
          const int d = dist[static_cast<std::size_t>(centers[b])];
          c.require(d < 0 || d > 2 * r, "packing centers too close (graph " + std::to_string(gi) + ")");
        }
      }
      const double denom = std::pow(static_cast<double>(std::max(1, g.max_degree())), 2.0 * r) + 1.0;
      c.require(centers.size() >= static_cast<std::size_t>(std::ceil(g.n_sites() / denom)),
                "packing count below the lower bound (graph " + std::to_string(gi) + ")");

      const auto layers = g.disjoint_layers(r);
      c.require(static_cast<double>(layers.size()) <= denom,
                "layer count above the bound (graph " + std::to_string(gi) + ")");
      std::vector<int> seen(static_cast<std::size_t>(g.n_sites()), 0);
      for (const auto& layer : layers) {
        for (std::size_t a = 0; a < layer.size(); ++a) {
          ++seen[static_cast<std::size_t>(layer[a])];
          const auto dist = g.bfs_distances(layer[a]);
          for (std::size_t b = a + 1; b < layer.size(); ++b) {
            const int d = dist[static_cast<std::size_t>(layer[b])];
            c.require(d < 0 || d > 2 * r, "intra-layer separation violated");
          }
        }
      }
      for (int count : seen) c.require(count == 1, "layers do not cover every site exactly once");
    }
  }
  const double secs = seconds_since(start);
  c.require(secs < 10.0, "runtime " + std::to_string(secs) + "s exceeds 10s");
  if (c.pass)
    c.detail = std::to_string(graphs.size()) + " graphs x radii {0,1,2}, " +
               std::to_string(secs).substr(0, 4) + "s";
  return c;
}

// ---- 8. entanglement freezing ---------------------------------------------

Criterion criterion_freezing() {
  Criterion c;
  const TowerSpec q = dicke_spec(8);
  const std::vector<int> cut{0, 1, 2, 3};
  Rng rng(808);
  for (int trial = 0; trial < 20 && c.pass; ++trial) {
    const int rungs = rng.uniform_int(2, 6);
    std::vector<Complex> energies, amps;
    for (int p = 0; p < rungs; ++p) {
      energies.push_back(Complex(6.0 - p, 0.0));  // exchange-chain spectrum
      amps.push_back(rng.coefficient());
    }
    std::vector<double> times;
    for (int t = 0; t < 50; ++t) times.push_back(rng.uniform(0.0, 20.0));
    const double dev = freeze_check(q, energies, amps, cut, times);
    c.require(dev < 1e-10,
              "entropy deviation " + std::to_string(dev) + " at trial " + std::to_string(trial));
  }
  if (c.pass) c.detail = "20 superpositions x 50 times, half cut";
  return c;
}

// ---- 9. induction on annihilation ----------------------------------------

Criterion criterion_induction() {
  Criterion c;
  const int n = 10;
  const SiteGraph g = SiteGraph::chain(n, true);
  const TowerSpec dicke = dicke_spec(n);
  int checked = 0;

  // (a) numerically solved 2-local annihilators of the first five rungs
  {
    const int k = 2;
    std::vector<Operator> basis;
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      basis.push_back(Operator::string({i}, {j}) - Operator::number(i));
      basis.push_back(Operator::string({j}, {i}) - Operator::number(j));
      basis.push_back(Operator::string({}, {i, j}));
      basis.push_back(Operator::string({i, j}, {i, j}));
      basis.push_back(heisenberg_bond(i, j) - 0.25 * Operator::identity());
      basis.push_back(Operator::string({i, j}, {i}) - Operator::string({i, j}, {j}));
    }
    std::vector<SparseState> rungs;
    for (int p = 0; p <= 2 * k; ++p) rungs.push_back(dicke_state(n, p));
    std::map<std::pair<int, std::uint64_t>, int> row_of;
    int rows = 0;
    for (const Operator& b : basis) {
      for (int p = 0; p <= 2 * k; ++p) {
        const SparseState out = apply(b, rungs[static_cast<std::size_t>(p)]);
        for (const auto& [bits, amp] : out.amplitudes())
          if (row_of.try_emplace({p, bits}, rows).second) ++rows;
      }
    }
    Eigen::MatrixXcd constraints =
        Eigen::MatrixXcd::Zero(rows, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t b = 0; b < basis.size(); ++b) {
      for (int p = 0; p <= 2 * k; ++p) {
        const SparseState out = apply(basis[b], rungs[static_cast<std::size_t>(p)]);
        for (const auto& [bits, amp] : out.amplitudes())
          constraints(row_of.at({p, bits}), static_cast<Eigen::Index>(b)) += amp;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(constraints);
    lu.setThreshold(1e-9);
    const Eigen::MatrixXcd kernel = lu.kernel();
    c.require(kernel.cols() > 0, "no nontrivial annihilator of the first rungs found");
    Rng mix(606);
    for (int trial = 0; trial < 30 && c.pass; ++trial) {
      Operator h;
      for (Eigen::Index v = 0; v < kernel.cols(); ++v) {
        const Complex weight = mix.coefficient();
        for (std::size_t b = 0; b < basis.size(); ++b)
          h += (weight * kernel(static_cast<Eigen::Index>(b), v)) * basis[b];
      }
      const InductionReport rep = annihilation_induction_check(h, dicke, k, 1e-8);
      c.require(rep.hypothesis_holds, "solved annihilator misses a hypothesis rung");
      c.require(rep.consistent(), "hypothesis passed but a higher rung survived");
      c.require(rep.conclusion_holds, "conclusion failed for a solved annihilator");
      ++checked;
    }
  }

  // (b) random-weight exchange-bond sums (k = 2 annihilators of every rung)
  Rng rng(607);
  for (int trial = 0; trial < 15 && c.pass; ++trial) {
    Operator h;
    for (int i = 0; i < n; ++i)
      if (rng.uniform() < 0.6)
        h += rng.coefficient() * (heisenberg_bond(i, (i + 1) % n) - 0.25 * Operator::identity());
    const InductionReport rep = annihilation_induction_check(h, dicke, 2);
    c.require(rep.hypothesis_holds && rep.conclusion_holds, "exchange-bond sum failed induction");
    c.require(rep.consistent(), "inconsistent exchange-bond instance");
    ++checked;
  }

  // (c) controls whose hypothesis fails: never hypothesis-pass + conclusion-fail
  for (int p0 = 0; p0 < 5 && c.pass; ++p0) {
    const Operator h = Operator::total_number(n) - Complex(static_cast<double>(p0)) * Operator::identity();
    const InductionReport rep = annihilation_induction_check(h, dicke, 1);
    c.require(!rep.hypothesis_holds, "rung projector unexpectedly passed the hypothesis");
    c.require(rep.consistent(), "control instance inconsistent");
    ++checked;
  }
  if (c.pass) c.detail = std::to_string(checked) + " annihilator sums, no induction violations";
  return c;
}

// ---- 10. CLI determinism ---------------------------------------------------

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Criterion criterion_cli_determinism(const std::string& cli) {
  Criterion c;
  if (cli.empty()) {
    c.require(false, "CLI binary path not supplied");
    return c;
  }
  const fs::path dir = fs::temp_directory_path() / "scartower_acceptance";
  fs::create_directories(dir);
  const auto path = [&dir](const std::string& name) { return (dir / name).string(); };
  write_json_file(path("chain12.json"), graph_to_json(SiteGraph::chain(12, true)));

  auto run = [&cli](const std::string& args) {
    return std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
  };

  // identical seeds give byte-identical parents and certificates
  for (int round = 0; round < 2; ++round) {
    const std::string suffix = round == 0 ? "a" : "b";
    c.require(run("sample-parent --graph " + path("chain12.json") +
                  " --rmax 3 --terms 5 --omega0 0.25 --omega 1.5,0.5 --seed 42 --out " +
                  path("parent_" + suffix + ".json")) == 0,
              "sample-parent run failed");
    c.require(run("decompose --hamiltonian " + path("parent_" + suffix + ".json") + " --graph " +
                  path("chain12.json") + " --out " + path("cert_" + suffix + ".json")) == 0,
              "decompose run failed");
    c.require(run("pack --graph " + path("chain12.json") + " --radius 1 --out " +
                  path("pack_" + suffix + ".json")) == 0,
              "pack run failed");
    c.require(run("layers --graph " + path("chain12.json") + " --radius 1 --out " +
                  path("layers_" + suffix + ".json")) == 0,
              "layers run failed");
    if (!c.pass) return c;
  }
  for (const std::string name : {"parent", "cert", "pack", "layers"}) {
    const std::string a = read_file(path(name + "_a.json"));
    c.require(!a.empty() && a == read_file(path(name + "_b.json")),
              name + " output differs between identical runs");
  }

  // every emitted certificate re-validates through its verify path
  c.require(run("decompose --hamiltonian " + path("parent_a.json") + " --graph " +
                path("chain12.json") + " --recheck " + path("cert_a.json")) == 0,
            "decomposition certificate failed recheck");
  c.require(run("pack --graph " + path("chain12.json") + " --recheck " + path("pack_a.json")) == 0,
            "packing certificate failed recheck");
  c.require(
      run("layers --graph " + path("chain12.json") + " --recheck " + path("layers_a.json")) == 0,
      "layering certificate failed recheck");

  // circuit certificates
  write_json_file(path("chain9.json"), graph_to_json(SiteGraph::chain(9, true)));
  c.require(run("build-circuit --tower s2 --graph " + path("chain9.json") + " --compact --out " +
                path("circuit.json")) == 0,
            "build-circuit run failed");
  c.require(run("build-circuit --tower s2 --graph " + path("chain9.json") + " --recheck " +
                path("circuit.json")) == 0,
            "circuit failed recheck");

  // negative verdict exit code: a pure creation sum is a clean rejection
  Operator bad;
  for (int i = 0; i < 12; ++i) bad += Operator::creation(i);
  write_json_file(path("bad.json"), operator_to_json(bad));
  const int code = std::system((cli + " verify-tower --hamiltonian " + path("bad.json") +
                                " --tower dicke --sites 12 --pmax 8 > /dev/null 2>&1")
                                   .c_str());
  c.require(WIFEXITED(code) && WEXITSTATUS(code) == 1, "negative verdict should exit 1");
  if (c.pass) c.detail = "byte-identical reruns, certificates re-verified";
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Entry {
    std::string name;
    Criterion result;
  };
  std::vector<Entry> entries;
  entries.push_back({"1 oracle equivalence", criterion_oracle_equivalence()});
  entries.push_back({"2 decomposition round-trip", criterion_decomposition_roundtrip()});
  entries.push_back({"3 equal spacing", criterion_equal_spacing()});
  entries.push_back({"4 nilpotency bounds", criterion_nilpotency()});
  entries.push_back({"5 finite-fraction annihilation", criterion_finite_fraction()});
  entries.push_back({"6 circuit correctness", criterion_circuits()});
  entries.push_back({"7 graph lemmas", criterion_graph_lemmas()});
  entries.push_back({"8 entanglement freezing", criterion_freezing()});
  entries.push_back({"9 induction on annihilation", criterion_induction()});
  entries.push_back({"10 cli determinism", criterion_cli_determinism(cli)});

  int failures = 0;
  for (const Entry& e : entries) {
    std::cout << (e.result.pass ? "[PASS] " : "[FAIL] ") << e.name;
    if (!e.result.detail.empty()) std::cout << " - " << e.result.detail;
    std::cout << "\n";
    if (!e.result.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
