#include "stoqkit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "stoqkit/adiabatic.hpp"
#include "stoqkit/clock.hpp"
#include "stoqkit/protocols.hpp"
#include "stoqkit/sign_elimination.hpp"
#include "stoqkit/spectral.hpp"

namespace stoqkit::cli {

namespace {

using io::Json;

struct Options {
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  double p = 0.25;
  Index dense_cap = kDefaultDenseCap;
  bool p_given = false;

  std::string input;
  std::string out;
  std::string kind;

  double s = 0.5;
  int l_min = 1;
  int l_max = 4;
  int s_samples = 3;
  std::string csv_path;

  double total_time = 100.0;
  int steps = 0;
  int shots = 10000;
  bool padded = false;

  int c = 1;
  double a = 0.0;
  double b = 1.0;
};

struct Outcome {
  int exit_code = kExitOk;
  Json results = Json::object();
  Json checks = Json::object();
  std::string csv;
};

Json flags_to_json(const MatrixClassFlags& f) {
  return {{"hermitian", f.hermitian},
          {"nonnegative_entries", f.nonnegative_entries},
          {"stoquastic", f.stoquastic},
          {"column_stochastic", f.column_stochastic},
          {"doubly_stochastic", f.doubly_stochastic},
          {"symmetric", f.symmetric},
          {"permutation", f.permutation},
          {"projector", f.projector},
          {"psd", f.psd}};
}

std::string method_name(SolverMethod m) { return m == SolverMethod::Dense ? "dense" : "iterative"; }

Json vector_json(const std::vector<double>& v) { return Json(v); }

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Yes: return kExitOk;
    case Verdict::No: return kExitNo;
    case Verdict::Ambiguous: return kExitAmbiguous;
  }
  return kExitError;
}

double max_deviation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::vector<double> hermitian_eigenvalues(const OperatorMatrix& m, Index cap) {
  return eig_dense(m, {cap, false}).eigenvalues;
}

// ---------------------------------------------------------------------------

Outcome ham_check(const Options& o) {
  const LocalHamiltonian h = io::parse_hamiltonian(o.input);
  const MatrixClassFlags f = classify(build_matrix(h), o.tol);
  Outcome out;
  out.results = {{"n", h.num_qubits()},
                 {"terms", h.terms().size()},
                 {"locality", h.locality()},
                 {"norm_sum", h.norm_sum()},
                 {"real", h.is_real()},
                 {"flags", flags_to_json(f)}};
  out.checks["hermitian"] = f.hermitian;
  return out;
}

Outcome ham_spectrum(const Options& o) {
  const LocalHamiltonian h = io::parse_hamiltonian(o.input);
  const SpectralReport r = spectral_report(build_matrix(h), {o.tol, 1e-9, o.dense_cap, o.seed});
  Outcome out;
  out.results = {{"dim", r.dim},
                 {"method", method_name(r.method)},
                 {"ground_energy", r.ground_energy},
                 {"spectral_gap", r.spectral_gap},
                 {"ground_degeneracy", r.ground_degeneracy},
                 {"top_eigenvalue", r.top_eigenvalue},
                 {"flags", flags_to_json(r.flags)}};
  if (r.second_largest_magnitude) out.results["second_largest_magnitude"] = *r.second_largest_magnitude;
  if (r.uniform_overlap) out.results["uniform_overlap"] = *r.uniform_overlap;
  if (r.perron_ok) out.checks["perron"] = *r.perron_ok;
  return out;
}

Outcome map_command(const Options& o) {
  const LocalHamiltonian h = io::parse_hamiltonian(o.input);
  MappedHamiltonian mapped;
  Sector sector = Sector::Minus;
  if (o.kind == "stoquastic") {
    if (o.p_given) throw ContractError("--p applies to the stochastic and complex maps only");
    mapped = stoquastize(h);
  } else if (o.kind == "stochastic") {
    mapped = stochastize(h);
    if (o.p_given) mapped = add_ancilla_penalty(mapped, o.p);
  } else {
    mapped = stochastize_complex(h).first;
    sector = Sector::V1;
    if (o.p_given) mapped = add_penalty_complex(mapped, o.p);
  }
  const OperatorMatrix realized = mapped.realize();
  const MatrixClassFlags f = classify(realized, o.tol);
  const std::vector<double> reference = hermitian_eigenvalues(build_matrix(h), o.dense_cap);

  Outcome out;
  out.results = {{"kind", to_string(mapped.kind)},
                 {"work_qubits", mapped.work_qubits},
                 {"ancillas", mapped.ancilla_count},
                 {"locality", mapped.locality()},
                 {"normalization", mapped.normalization},
                 {"separation_warning", mapped.separation_warning},
                 {"flags", flags_to_json(f)}};
  if (mapped.penalty) out.results["p"] = *mapped.penalty;

  if (mapped.kind == MapKind::Stoquastic) {
    out.checks["stoquastic"] = f.stoquastic;
  } else {
    out.checks["nonnegative"] = f.nonnegative_entries;
    out.checks["column_stochastic"] = f.column_stochastic;
  }

  if (!mapped.penalty) {
    // Sector restriction against the input spectrum, rescaled by N where the
    // map normalizes.
    std::vector<double> sector_eigs = sector_spectrum(mapped, sector);
    if (mapped.kind != MapKind::Stoquastic) {
      for (double& x : sector_eigs) x *= mapped.normalization;
    }
    const double dev = max_deviation(sector_eigs, reference);
    out.results["sector"] = to_string(sector);
    out.results["sector_deviation"] = dev;
    out.checks["sector_spectrum"] = dev <= 1e-9;
  } else if (realized.dim() <= o.dense_cap) {
    // Lower part of the spectrum against (p/N) spec(H); doubled for Z4.
    const double factor = *mapped.penalty / mapped.normalization;
    std::vector<double> expected;
    for (double x : reference) {
      expected.push_back(factor * x);
      if (mapped.kind == MapKind::Complex) expected.push_back(factor * x);
    }
    std::sort(expected.begin(), expected.end());
    const std::vector<double> all = hermitian_eigenvalues(realized, o.dense_cap);
    const std::vector<double> low(all.begin(), all.begin() + static_cast<long>(expected.size()));
    const double dev = max_deviation(low, expected);
    out.results["low_spectrum_deviation"] = dev;
    out.results["upper_gap"] = all[expected.size()] - low.back();
    out.checks["penalty_split"] = dev <= 1e-9 && all[expected.size()] > low.back();
  }

  if (!o.out.empty()) io::write_json_file(o.out, io::operator_to_json(realized));
  return out;
}

Outcome clock_build(const Options& o) {
  const QuantumCircuit circuit = io::parse_circuit(o.input);
  const FFHamiltonian ff = build_ff(circuit, o.s);
  Outcome out;
  Json terms = Json::array();
  double worst_projector = 0.0;
  for (const auto& t : ff.terms) {
    const double err = (t.matrix * t.matrix - t.matrix).cwiseAbs().maxCoeff();
    worst_projector = std::max(worst_projector, err);
    terms.push_back({{"label", t.label}, {"qubits", t.qubits}, {"projector_error", err}});
  }
  const GapFormulas g = gap_formulas(o.s, ff.L);
  out.results = {{"s", ff.s},     {"n", ff.n}, {"L", ff.L}, {"b", ff.b}, {"r", ff.r},
                 {"total_qubits", ff.total_qubits()}, {"terms", std::move(terms)},
                 {"block_gap_formula", g.block_gap}, {"full_gap_formula", g.full_gap}};
  out.checks["projectors"] = worst_projector <= 1e-10;

  const OperatorMatrix h = ff.realize();
  const StateVector hist = history_state(circuit, o.s);
  const double residual = h.apply(hist).norm();
  out.results["history_residual"] = residual;
  out.checks["history_annihilated"] = residual <= 1e-10;
  if (h.dim() <= o.dense_cap) {
    const std::vector<double> eigs = hermitian_eigenvalues(h, o.dense_cap);
    const auto groups = multiplets(eigs);
    out.results["ground_energy"] = eigs[0];
    out.results["ground_degeneracy"] = groups[0].size();
    out.results["gap"] = eigs[groups[0].size()] - eigs[0];
    out.checks["frustration_free"] = std::abs(eigs[0]) <= o.tol;
    out.checks["unique_ground_state"] = groups[0].size() == 1;
  }
  return out;
}

Outcome clock_gap_scan(const Options& o) {
  if (o.l_min < 1 || o.l_max < o.l_min) throw ContractError("gap-scan: need 1 <= Lmin <= Lmax");
  if (o.s_samples < 1) throw ContractError("gap-scan: --s-samples must be at least 1");
  std::ostringstream csv;
  csv.precision(17);
  csv << "L,s,block_gap_formula,block_gap_measured,full_gap_formula,full_gap_measured\n";
  double block_worst = 0.0;
  double full_worst = 0.0;
  Json rows = Json::array();
  for (int L = o.l_min; L <= o.l_max; ++L) {
    for (int i = 1; i <= o.s_samples; ++i) {
      const double s = 0.5 * i / o.s_samples;
      const GapFormulas g = gap_formulas(s, L);
      const auto m0 = eig_dense_hermitian(block_matrix(0, s, L).entries.cast<Complex>(), false).eigenvalues;
      const auto m1 = eig_dense_hermitian(block_matrix(1, s, L).entries.cast<Complex>(), false).eigenvalues;
      const double block = m0[1] - m0[0];
      const double full = std::min(block, m1[0]) - m0[0];
      block_worst = std::max(block_worst, std::abs(block - g.block_gap));
      full_worst = std::max(full_worst, std::abs(full - g.full_gap));
      csv << L << "," << s << "," << g.block_gap << "," << block << "," << g.full_gap << "," << full << "\n";
      rows.push_back({{"L", L}, {"s", s}, {"block_gap_formula", g.block_gap}, {"block_gap_measured", block},
                      {"full_gap_formula", g.full_gap}, {"full_gap_measured", full}});
    }
  }
  Outcome out;
  out.results = {{"rows", std::move(rows)}, {"block_gap_max_deviation", block_worst},
                 {"full_gap_max_deviation", full_worst}};
  out.checks["block_gap_formula"] = block_worst <= 1e-10;
  out.checks["full_gap_formula"] = full_worst <= 1e-10;
  out.csv = csv.str();
  if (!o.csv_path.empty()) {
    std::ofstream file(o.csv_path);
    if (!file) throw io::FormatError("cannot write '" + o.csv_path + "'");
    file << out.csv;
  }
  return out;
}

Outcome adiabatic_run(const Options& o) {
  const QuantumCircuit base = io::parse_circuit(o.input);
  const QuantumCircuit circuit = o.padded ? base.padded(base.size()) : base;
  const int steps = o.steps > 0 ? o.steps : std::max(1, static_cast<int>(std::ceil(10.0 * o.total_time)));
  const StateVector initial = history_state(circuit, 0.0);
  const AdiabaticTrace trace = evolve(ff_path(circuit), o.total_time, steps, initial, o.dense_cap);
  const DecodeResult d = measure_and_decode(trace.final_state, base, o.shots, o.seed, o.padded);
  const std::vector<double> direct = output_distribution(base);

  double drift = 0.0;
  for (double x : trace.norms) drift = std::max(drift, std::abs(x - 1.0));
  Outcome out;
  out.results = {{"T", o.total_time},
                 {"steps", steps},
                 {"padded", o.padded},
                 {"final_overlap", trace.target_overlap.back()},
                 {"norm_drift", drift},
                 {"success_probability", d.success_probability},
                 {"shots", d.shots},
                 {"successes", d.successes},
                 {"exact_distribution", vector_json(d.exact_distribution)},
                 {"sampled_distribution", vector_json(d.sampled_distribution)},
                 {"direct_distribution", vector_json(direct)}};
  out.checks["unitary"] = drift <= 1e-8;
  if (!d.sampled_distribution.empty()) {
    const double tv = total_variation(d.sampled_distribution, direct);
    out.results["total_variation"] = tv;
    out.checks["decoded_output"] = tv <= 0.05;
  }
  return out;
}

Outcome protocol_excited(const Options& o) {
  const LocalHamiltonian h = io::parse_hamiltonian(o.input);
  const ExcitedDecision dec = decide_excited({h, o.c, o.a, o.b});
  const AcceptanceReport acc = acceptance_operator(h, o.c, 0.5 * (o.a + o.b));
  Outcome out;
  out.results = {{"c", o.c},
                 {"a", o.a},
                 {"b", o.b},
                 {"lambda_c", dec.lambda_c},
                 {"verdict", to_string(dec.verdict)},
                 {"acceptance_probability", acc.probability},
                 {"soundness_bound", acc.bound},
                 {"eigenvalues_below_threshold", acc.eigenvalues_below}};
  if (dec.verdict == Verdict::Yes) out.checks["completeness"] = std::abs(acc.probability - 1.0) <= 1e-10;
  if (dec.verdict == Verdict::No) out.checks["soundness"] = acc.probability <= acc.bound + 1e-10;
  out.exit_code = verdict_exit(dec.verdict);
  return out;
}

Json decision_json(const SatDecision& d) {
  return {{"verdict", to_string(d.verdict)}, {"ground_energy", d.ground_energy}, {"epsilon", d.threshold}};
}

Outcome sat_reduce(const Options& o) {
  const SatInstance source = io::parse_sat(o.input);
  const double p = o.p_given ? o.p : 1.0 / 3.0;
  const SatInstance reduced = reduce_qsat(source, p);
  const SatDecision before = decide_sat(source, o.tol);
  const SatDecision after = decide_sat(reduced, o.tol);
  Outcome out;
  out.results = {{"p", p},
                 {"m", reduced.m()},
                 {"n_max", *reduced.n_max},
                 {"epsilon_tilde", reduced.epsilon()},
                 {"source", decision_json(before)},
                 {"reduced", decision_json(after)}};
  if (before.verdict != Verdict::Ambiguous) out.checks["verdict_preserved"] = before.verdict == after.verdict;
  if (!o.out.empty()) io::write_json_file(o.out, io::sat_to_json(reduced));
  return out;
}

Outcome sat_decide(const Options& o) {
  const SatInstance inst = io::parse_sat(o.input);
  const SatDecision d = decide_sat(inst, o.tol);
  Outcome out;
  out.results = decision_json(d);
  out.results["m"] = inst.m();
  out.results["class"] = to_string(inst.tag());
  out.exit_code = verdict_exit(d.verdict);
  return out;
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Sign elimination, clock Hamiltonians and verification protocols", "stoqkit"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--tol", o.tol, "Numerical tolerance")->capture_default_str();
  CLI::Option* p_opt = app.add_option("--p", o.p, "Penalty parameter")->capture_default_str();
  app.add_option("--dense-cap", o.dense_cap, "Largest dimension for dense solves")->capture_default_str();

  std::vector<std::pair<CLI::App*, std::function<Outcome(const Options&)>>> commands;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  std::function<Outcome(const Options&)> fn) {
    CLI::App* sub = parent->add_subcommand(name, help);
    commands.emplace_back(sub, std::move(fn));
    return sub;
  };

  CLI::App* ham = app.add_subcommand("ham", "Inspect a Hamiltonian file");
  ham->require_subcommand(1);
  leaf(ham, "check", "Classify the realized matrix", ham_check)->add_option("file", o.input)->required();
  leaf(ham, "spectrum", "Spectral report", ham_spectrum)->add_option("file", o.input)->required();

  CLI::App* map = app.add_subcommand("map", "Apply a sign-elimination map");
  map->require_subcommand(1);
  for (const char* kind : {"stoquastic", "stochastic", "complex"}) {
    CLI::App* sub = leaf(map, kind, std::string(kind) + " map", [kind](Options opts) {
      opts.kind = kind;
      return map_command(opts);
    });
    sub->add_option("file", o.input)->required();
    sub->add_option("--out", o.out, "Write the realized operator here");
  }

  CLI::App* clock = app.add_subcommand("clock", "Clock construction");
  clock->require_subcommand(1);
  CLI::App* build = leaf(clock, "build", "Build H^FF(s) for a circuit", clock_build);
  build->add_option("file", o.input)->required();
  build->add_option("--s", o.s, "Schedule parameter in [0, 1/2]")->capture_default_str();
  CLI::App* scan = leaf(clock, "gap-scan", "Compare measured gaps with the closed forms", clock_gap_scan);
  scan->add_option("--Lmin", o.l_min)->capture_default_str();
  scan->add_option("--Lmax", o.l_max)->capture_default_str();
  scan->add_option("--s-samples", o.s_samples, "Samples of s in (0, 1/2]")->capture_default_str();
  scan->add_option("--csv", o.csv_path, "Write CSV here instead of stdout");

  CLI::App* adiabatic = app.add_subcommand("adiabatic", "Adiabatic evolution");
  adiabatic->require_subcommand(1);
  CLI::App* run = leaf(adiabatic, "run", "Evolve along H^FF(u/2) and decode", adiabatic_run);
  run->add_option("file", o.input)->required();
  run->add_option("--T", o.total_time, "Total evolution time")->capture_default_str();
  run->add_option("--steps", o.steps, "Time steps (default 10 T)");
  run->add_option("--shots", o.shots)->capture_default_str();
  run->add_flag("--padded", o.padded, "Pad the circuit with L identity gates");

  CLI::App* protocol = app.add_subcommand("protocol", "Verification protocols");
  protocol->require_subcommand(1);
  CLI::App* excited = leaf(protocol, "excited", "Excited-energy decision and acceptance bound", protocol_excited);
  excited->add_option("file", o.input)->required();
  excited->add_option("--c", o.c)->required();
  excited->add_option("--a", o.a)->required();
  excited->add_option("--b", o.b)->required();

  CLI::App* sat = app.add_subcommand("sat", "Satisfiability instances");
  sat->require_subcommand(1);
  CLI::App* reduce = leaf(sat, "reduce", "Reduce a projector instance to stochastic form", sat_reduce);
  reduce->add_option("file", o.input)->required();
  reduce->add_option("--out", o.out, "Write the reduced instance here");
  leaf(sat, "decide", "Decide an instance", sat_decide)->add_option("file", o.input)->required();

  CommandResult result;
  Json command = Json::array();
  for (const auto& a : args) command.push_back(a);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.text = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = kExitError;
    result.text = e.what();
    result.report = {{"version", io::kFormatVersion}, {"command", command}, {"error", e.what()}};
    return result;
  }
  o.p_given = p_opt->count() > 0;

  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    auto it = std::find_if(commands.begin(), commands.end(), [](const auto& c) { return c.first->parsed(); });
    if (it == commands.end()) throw ContractError("no command given");
    outcome = it->second(o);
  } catch (const std::exception& e) {
    result.exit_code = kExitError;
    result.text = e.what();
    result.report = {{"version", io::kFormatVersion}, {"command", command}, {"error", e.what()}};
    return result;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  result.exit_code = outcome.exit_code;
  result.csv = std::move(outcome.csv);
  result.report = {{"version", io::kFormatVersion},
                   {"command", command},
                   {"seed", o.seed},
                   {"tolerances", {{"tol", o.tol}, {"dense_cap", o.dense_cap}, {"p", o.p}}},
                   {"results", std::move(outcome.results)},
                   {"checks", std::move(outcome.checks)},
                   {"timing", {{"seconds", seconds}}}};
  return result;
}

}  // namespace stoqkit::cli
