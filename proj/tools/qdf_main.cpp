// Single-binary command line interface.  Every subcommand echoes its full
// configuration (parameters, seeds, tolerances) in the report so a run can be
// reproduced bit-for-bit; --json switches from flattened key = value lines to
// a structured document.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdf/definetti.hpp"
#include "qdf/entropy.hpp"
#include "qdf/extension.hpp"
#include "qdf/measurement.hpp"
#include "qdf/seesaw.hpp"
#include "qdf/sos.hpp"
#include "qdf/state.hpp"
#include "qdf/state_io.hpp"

namespace {

using ojson = nlohmann::ordered_json;
using namespace qdf;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void emit_lines(const std::string& prefix, const ojson& j) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      emit_lines(prefix.empty() ? key : prefix + "." + key, value);
    return;
  }
  std::cout << prefix << " = ";
  if (j.is_number_float())
    std::cout << fmt17(j.get<double>());
  else if (j.is_string())
    std::cout << j.get<std::string>();
  else
    std::cout << j.dump();
  std::cout << "\n";
}

void emit(const ojson& report, bool machine) {
  if (machine)
    std::cout << report.dump(2) << std::endl;
  else
    emit_lines("", report);
}

MeasurementClass parse_class(const std::string& s) {
  if (s == "lo") return MeasurementClass::LO;
  if (s == "parallel") return MeasurementClass::OneWayParallel;
  if (s == "full") return MeasurementClass::OneWayFull;
  if (s == "all") return MeasurementClass::All;
  throw ArgumentError("unknown measurement class '" + s + "' (use lo|parallel|full|all)");
}

Metric parse_metric(const std::string& s) {
  if (s == "norm") return Metric::TraceNorm;
  if (s == "relent") return Metric::RelativeEntropy;
  throw ArgumentError("unknown metric '" + s + "' (use norm|relent)");
}

// ---- verify-lemmas sweeps --------------------------------------------------

struct SweepReport {
  ojson fields;
  bool pass = true;
};

SweepReport sweep_chain_identity(int trials, std::uint64_t seed) {
  SweepReport out;
  double max_residual = 0.0, max_onestep = 0.0, max_laststep = 0.0;
  int skipped = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, 10'000 + t);
    const std::vector<int> dims{2, 2, 2};
    const DensityOperator rho =
        random_state(dims, Ensemble::HilbertSchmidt, rng.next_u64());
    Rng tree_rng = Rng::derive(seed, 20'000 + t);
    const AdaptiveMeasurementTree tree = random_tree(dims, TreeKind::BinaryGeneral, tree_rng);
    const ChainIdentityReport rep = chain_identity(tree, rho);
    if (!rep.finite) {
      ++skipped;
      continue;
    }
    max_residual = std::max(max_residual, rep.residual);
    max_onestep = std::max(max_onestep, rep.eq_onestep_full_residual);
    max_laststep = std::max(max_laststep, rep.eq_laststep_residual);
  }
  out.fields["trials"] = trials;
  out.fields["skipped_infinite"] = skipped;
  out.fields["max_chain_residual"] = max_residual;
  out.fields["max_onestep_decomposition_residual"] = max_onestep;
  out.fields["max_laststep_hybrid_residual"] = max_laststep;
  out.pass = skipped == 0 && max_residual <= 1e-9 && max_onestep <= 1e-9 && max_laststep <= 1e-9;
  out.fields["pass"] = out.pass;
  return out;
}

SweepReport sweep_pigeonhole(int trials, std::uint64_t seed) {
  SweepReport out;
  const GroupingLayout layout = make_grouping(4, 2);
  const double ceiling = std::log2(2.0) / 3.0;
  double worst_min = -std::numeric_limits<double>::infinity();
  double max_chain_residual = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, 30'000 + t);
    DensityOperator raw =
        random_state({2, 2, 2, 2}, Ensemble::HilbertSchmidt, rng.next_u64());
    const std::vector<Perm> block_perms{{0, 2, 1, 3}, {0, 2, 3, 1}};
    const DensityOperator rho = twirl(raw, block_perms);
    std::vector<Povm> povms;
    for (int b = 0; b < layout.m; ++b) povms.push_back(random_projective_povm(2, rng));
    const ChainEvaluation ev = evaluate_chain(rho, layout, povms);
    const double min_term = *std::min_element(ev.terms.begin(), ev.terms.end());
    worst_min = std::max(worst_min, min_term);
    max_chain_residual = std::max(max_chain_residual, std::abs(ev.sum - ev.joint_mi));
  }
  out.fields["trials"] = trials;
  out.fields["ceiling_bits"] = ceiling;
  out.fields["worst_min_term_bits"] = worst_min;
  out.fields["max_chain_rule_residual"] = max_chain_residual;
  out.pass = worst_min <= ceiling + 1e-9 && max_chain_residual <= 1e-9;
  out.fields["pass"] = out.pass;
  return out;
}

SweepReport sweep_pinsker(int trials, std::uint64_t seed) {
  SweepReport out;
  double worst_slack = std::numeric_limits<double>::infinity();
  int violations = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, 40'000 + t);
    const std::vector<int> dims = (t % 2 == 0) ? std::vector<int>{2} : std::vector<int>{2, 2};
    const DensityOperator rho = random_state(dims, Ensemble::HilbertSchmidt, rng.next_u64());
    const DensityOperator sigma = random_state(dims, Ensemble::HilbertSchmidt, rng.next_u64());
    const PinskerReport rep = pinsker_check(rho, sigma);
    if (!rep.holds) ++violations;
    if (!rep.lhs_infinite) worst_slack = std::min(worst_slack, rep.lhs_bits - rep.rhs_bits);
  }
  out.fields["trials"] = trials;
  out.fields["violations"] = violations;
  out.fields["smallest_slack_bits"] = worst_slack;
  out.pass = violations == 0;
  out.fields["pass"] = out.pass;
  return out;
}

SweepReport sweep_data_processing(int trials, std::uint64_t seed) {
  SweepReport out;
  double worst_excess = 0.0;
  int skipped = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, 50'000 + t);
    const std::vector<int> dims{2, 2};
    const DensityOperator rho = random_state(dims, Ensemble::HilbertSchmidt, rng.next_u64());
    const DensityOperator sigma = random_state(dims, Ensemble::HilbertSchmidt, rng.next_u64());
    const Povm povm = (t % 2 == 0) ? random_binary_povm(4, rng) : random_projective_povm(4, rng);
    const RelEntropy quantum = relative_entropy(rho, sigma);
    if (quantum.infinite) {
      ++skipped;
      continue;
    }
    const RVec p = outcome_probabilities(povm, rho.matrix());
    const RVec q = outcome_probabilities(povm, sigma.matrix());
    const RelEntropy classical = classical_relative_entropy(p, q);
    const double measured = classical.infinite ? std::numeric_limits<double>::infinity()
                                               : classical.bits;
    worst_excess = std::max(worst_excess, measured - quantum.bits);
  }
  out.fields["trials"] = trials;
  out.fields["skipped_infinite"] = skipped;
  out.fields["worst_excess_bits"] = worst_excess;
  out.pass = worst_excess <= 1e-9;
  out.fields["pass"] = out.pass;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Toolkit for permutation-invariant quantum states: measured de Finetti "
      "approximations with explicit error bounds, restricted-measurement "
      "distances, symmetric-extension entanglement detection, and sphere "
      "optimization relaxations."};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from an INI file; command-line flags win");

  int exit_code = 0;

  // ---- definetti-bound -----------------------------------------------------
  struct {
    int n = 4, k = 2, dim = 2;
    bool machine = false;
  } bound_args;
  {
    auto* cmd = app.add_subcommand("definetti-bound",
                                   "Print the de Finetti approximation error bounds");
    cmd->add_option("--n", bound_args.n, "Total number of identical subsystems")->required();
    cmd->add_option("--k", bound_args.k, "Approximated fold")->required();
    cmd->add_option("--dim", bound_args.dim, "Local dimension")->required();
    cmd->add_flag("--json", bound_args.machine, "Emit a machine-readable report");
    cmd->callback([&] {
      const TheoremBounds b = theorem_bounds(bound_args.n, bound_args.k, bound_args.dim);
      ojson rep;
      rep["command"] = "definetti-bound";
      rep["params"]["n"] = bound_args.n;
      rep["params"]["k"] = bound_args.k;
      rep["params"]["dim"] = bound_args.dim;
      rep["results"]["relative_entropy_bound_bits"] = b.relent_bits;
      rep["results"]["trace_norm_bound"] = b.norm;
      emit(rep, bound_args.machine);
    });
  }

  // ---- gen-state -------------------------------------------------------------
  struct {
    std::string ensemble = "haar-pure";
    int n = 1, dim = 2, mix = defaults::kBoseMixCount;
    std::uint64_t seed = 0;
    std::string out;
    bool machine = false;
  } gen_args;
  {
    auto* cmd = app.add_subcommand("gen-state", "Sample a random state and write it to a file");
    cmd->add_option("--ensemble", gen_args.ensemble,
                    "haar-pure | hs-mixed | bose-symmetric")
        ->required();
    cmd->add_option("--n", gen_args.n, "Number of subsystems")->required();
    cmd->add_option("--dim", gen_args.dim, "Local dimension")->required();
    cmd->add_option("--seed", gen_args.seed, "Sampling seed");
    cmd->add_option("--mix", gen_args.mix, "Pure components mixed in the bose-symmetric draw");
    cmd->add_option("--out", gen_args.out, "Output state file")->required();
    cmd->add_flag("--json", gen_args.machine, "Emit a machine-readable report");
    cmd->callback([&] {
      Ensemble ens;
      if (gen_args.ensemble == "haar-pure")
        ens = Ensemble::HaarPure;
      else if (gen_args.ensemble == "hs-mixed")
        ens = Ensemble::HilbertSchmidt;
      else if (gen_args.ensemble == "bose-symmetric")
        ens = Ensemble::BoseSymmetric;
      else
        throw ArgumentError("unknown ensemble '" + gen_args.ensemble +
                            "' (use haar-pure|hs-mixed|bose-symmetric)");
      RandomStateOptions ropts;
      ropts.mix_count = gen_args.mix;
      const std::vector<int> dims(gen_args.n, gen_args.dim);
      const DensityOperator rho = random_state(dims, ens, gen_args.seed, ropts);
      write_state(gen_args.out, rho);
      ojson rep;
      rep["command"] = "gen-state";
      rep["params"]["ensemble"] = gen_args.ensemble;
      rep["params"]["n"] = gen_args.n;
      rep["params"]["dim"] = gen_args.dim;
      rep["params"]["seed"] = gen_args.seed;
      rep["params"]["mix"] = gen_args.mix;
      rep["results"]["out"] = gen_args.out;
      rep["results"]["total_dimension"] = rho.dim();
      emit(rep, gen_args.machine);
    });
  }

  // ---- verify ----------------------------------------------------------------
  struct {
    std::string state;
    int k = 2;
    std::uint64_t seed = 0;
    int restarts = defaults::kSeesawRestarts;
    int iters = defaults::kSeesawIters;
    int qstar_restarts = 4;
    int qstar_iters = 60;
    bool ic_fallback = false;
    bool machine = false;
  } verify_args;
  {
    auto* cmd = app.add_subcommand(
        "verify", "Build the de Finetti candidate for a state and check the error bounds");
    cmd->add_option("--state", verify_args.state, "Input state file")->required();
    cmd->add_option("--k", verify_args.k, "Approximated fold")->required();
    cmd->add_option("--seed", verify_args.seed, "Seed for measurement selection and seesaws");
    cmd->add_option("--restarts", verify_args.restarts, "Seesaw restarts");
    cmd->add_option("--iters", verify_args.iters, "Seesaw iterations per restart");
    cmd->add_option("--qstar-restarts", verify_args.qstar_restarts,
                    "Restarts of the per-block measurement ascent");
    cmd->add_option("--qstar-iters", verify_args.qstar_iters,
                    "Iterations of the per-block measurement ascent");
    cmd->add_flag("--ic-fallback", verify_args.ic_fallback,
                  "Use the fixed informationally-complete product measurement");
    cmd->add_flag("--json", verify_args.machine, "Emit a machine-readable report");
    cmd->callback([&] {
      const DensityOperator rho = read_state(verify_args.state);
      VerifyOptions vopts;
      vopts.seed = verify_args.seed;
      vopts.seesaw_restarts = verify_args.restarts;
      vopts.seesaw_iters = verify_args.iters;
      vopts.qstar.restarts = verify_args.qstar_restarts;
      vopts.qstar.iters = verify_args.qstar_iters;
      vopts.qstar.ic_fallback = verify_args.ic_fallback;
      const TheoremReport rep = verify_theorem(rho, verify_args.k, vopts);
      ojson doc;
      doc["command"] = "verify";
      doc["params"]["state"] = verify_args.state;
      doc["params"]["k"] = verify_args.k;
      doc["params"]["seed"] = verify_args.seed;
      doc["params"]["restarts"] = verify_args.restarts;
      doc["params"]["iters"] = verify_args.iters;
      doc["params"]["qstar_restarts"] = verify_args.qstar_restarts;
      doc["params"]["qstar_iters"] = verify_args.qstar_iters;
      doc["params"]["ic_fallback"] = verify_args.ic_fallback;
      doc["results"]["n"] = rep.n;
      doc["results"]["blocks"] = rep.m;
      doc["results"]["local_dim"] = rep.dA;
      doc["results"]["greedy_min_term_bits"] = rep.qstar_score;
      doc["results"]["pigeonhole_ceiling_bits"] = rep.score_ceiling;
      doc["results"]["invariance_residual"] = rep.invariance_residual;
      doc["results"]["ensemble_size"] = rep.components;
      doc["results"]["relative_entropy_bound_bits"] = rep.bounds.relent_bits;
      doc["results"]["trace_norm_bound"] = rep.bounds.norm;
      doc["results"]["distance_estimate"] = rep.distance_estimate;
      doc["results"]["relative_entropy_estimate_bits"] = rep.relent_estimate_bits;
      doc["results"]["relative_entropy_infinite"] = rep.relent_infinite;
      doc["results"]["norm_seesaw_converged"] = rep.norm_converged;
      doc["results"]["relent_seesaw_converged"] = rep.relent_converged;
      doc["results"]["pass"] = rep.pass;
      emit(doc, verify_args.machine);
      exit_code = rep.pass ? 0 : 1;
    });
  }

  // ---- detect-entanglement -----------------------------------------------------
  struct {
    std::string state;
    double epsilon = 1.0;
    std::string metric = "norm";
    int level = 0;
    double tol = defaults::kExtensionTol;
    long max_iter = defaults::kExtensionMaxIter;
    std::uint64_t seed = 0;
    long max_dim = defaults::kMaxTotalDim;
    bool machine = false;
  } detect_args;
  {
    auto* cmd = app.add_subcommand("detect-entanglement",
                                   "Symmetric-extension feasibility test for a state");
    cmd->add_option("--state", detect_args.state, "Input state file")->required();
    cmd->add_option("--epsilon", detect_args.epsilon, "Target separable-distance accuracy")
        ->required();
    cmd->add_option("--metric", detect_args.metric, "norm | relent");
    cmd->add_option("--level", detect_args.level, "Override the extension level (0 = derive)");
    cmd->add_option("--tol", detect_args.tol, "Feasibility gap tolerance");
    cmd->add_option("--max-iter", detect_args.max_iter, "Projection iteration cap");
    cmd->add_option("--seed", detect_args.seed, "Seed for certificate sampling");
    cmd->add_option("--max-dim", detect_args.max_dim, "Total dimension cap");
    cmd->add_flag("--json", detect_args.machine, "Emit a machine-readable report");
    cmd->callback([&] {
      const DensityOperator rho = read_state(detect_args.state);
      DetectOptions dopts;
      dopts.level_override = detect_args.level;
      dopts.solver.tol = detect_args.tol;
      dopts.solver.max_iter = detect_args.max_iter;
      dopts.solver.seed = detect_args.seed;
      dopts.max_dim = detect_args.max_dim;
      const DetectionReport rep =
          detect_entanglement(rho, detect_args.epsilon, parse_metric(detect_args.metric), dopts);
      ojson doc;
      doc["command"] = "detect-entanglement";
      doc["params"]["state"] = detect_args.state;
      doc["params"]["epsilon"] = detect_args.epsilon;
      doc["params"]["metric"] = detect_args.metric;
      doc["params"]["level_override"] = detect_args.level;
      doc["params"]["tol"] = detect_args.tol;
      doc["params"]["max_iter"] = detect_args.max_iter;
      doc["params"]["seed"] = detect_args.seed;
      doc["params"]["max_dim"] = detect_args.max_dim;
      const char* verdict = rep.verdict == Verdict::SeparableWithinEps ? "SEPARABLE-WITHIN-EPS"
                            : rep.verdict == Verdict::Entangled        ? "ENTANGLED"
                                                                       : "UNDECIDED";
      doc["results"]["verdict"] = verdict;
      doc["results"]["level"] = rep.level;
      doc["results"]["effective_relent_bound_bits"] = rep.effective.relent_bits;
      doc["results"]["effective_norm_bound"] = rep.effective.norm;
      doc["results"]["iterations"] = rep.feasibility.iterations;
      doc["results"]["gap"] = rep.feasibility.gap;
      if (rep.feasibility.extension) {
        doc["results"]["cone_residual"] = rep.feasibility.cone_residual;
        doc["results"]["affine_residual"] = rep.feasibility.affine_residual;
      }
      if (rep.feasibility.certificate) {
        const auto& cert = *rep.feasibility.certificate;
        doc["results"]["certificate"]["separation_margin"] = cert.margin;
        doc["results"]["certificate"]["direction_residual"] = cert.direction_residual;
        doc["results"]["certificate"]["lambda_max"] = cert.lambda_max;
        doc["results"]["certificate"]["valid"] = cert.valid;
      }
      emit(doc, detect_args.machine);
      exit_code = rep.verdict == Verdict::SeparableWithinEps ? 0
                  : rep.verdict == Verdict::Entangled        ? 1
                                                             : 2;
    });
  }

  // ---- locc-norm ----------------------------------------------------------------
  struct {
    std::string state_a, state_b;
    std::string cls = "full";
    std::string objective = "norm";
    int restarts = defaults::kSeesawRestarts;
    int iters = defaults::kSeesawIters;
    std::uint64_t seed = 0;
    std::string witness_out;
    std::string init_tree;
    bool machine = false;
  } locc_args;
  {
    auto* cmd = app.add_subcommand(
        "locc-norm", "Seesaw lower bound on a restricted-measurement distance of two states");
    cmd->add_option("--state-a", locc_args.state_a, "First state file")->required();
    cmd->add_option("--state-b", locc_args.state_b, "Second state file")->required();
    cmd->add_option("--class", locc_args.cls, "lo | parallel | full | all");
    cmd->add_option("--objective", locc_args.objective, "norm | relent");
    cmd->add_option("--restarts", locc_args.restarts, "Seesaw restarts");
    cmd->add_option("--iters", locc_args.iters, "Seesaw iterations per restart");
    cmd->add_option("--seed", locc_args.seed, "Restart seed");
    cmd->add_option("--witness-out", locc_args.witness_out,
                    "Directory for the optimizing measurement tree");
    cmd->add_option("--init-tree", locc_args.init_tree,
                    "Warm-start measurement tree directory");
    cmd->add_flag("--json", locc_args.machine, "Emit a machine-readable report");
    cmd->callback([&] {
      const DensityOperator a = read_state(locc_args.state_a);
      const DensityOperator b = read_state(locc_args.state_b);
      if (a.dims() != b.dims())
        throw ArgumentError("the two states must share the same subsystem dimensions");
      SeesawOptions sopts;
      sopts.restarts = locc_args.restarts;
      sopts.iters = locc_args.iters;
      sopts.seed = locc_args.seed;
      AdaptiveMeasurementTree init;
      if (!locc_args.init_tree.empty()) {
        init = read_tree(locc_args.init_tree);
        sopts.init = &init;
      }
      const MeasurementClass cls = parse_class(locc_args.cls);
      const bool relent = locc_args.objective == "relent";
      if (!relent && locc_args.objective != "norm")
        throw ArgumentError("unknown objective '" + locc_args.objective + "' (use norm|relent)");
      const SeesawResult res = relent ? restricted_relative_entropy(a, b, cls, sopts)
                                      : restricted_norm(a, b, cls, sopts);
      if (!locc_args.witness_out.empty()) write_tree(locc_args.witness_out, res.witness);
      ojson doc;
      doc["command"] = "locc-norm";
      doc["params"]["state_a"] = locc_args.state_a;
      doc["params"]["state_b"] = locc_args.state_b;
      doc["params"]["class"] = locc_args.cls;
      doc["params"]["objective"] = locc_args.objective;
      doc["params"]["restarts"] = locc_args.restarts;
      doc["params"]["iters"] = locc_args.iters;
      doc["params"]["seed"] = locc_args.seed;
      if (!locc_args.init_tree.empty()) doc["params"]["init_tree"] = locc_args.init_tree;
      doc["results"]["value"] = res.value;
      doc["results"]["value_infinite"] = res.value_infinite;
      doc["results"]["converged"] = res.converged;
      if (!locc_args.witness_out.empty()) doc["results"]["witness_out"] = locc_args.witness_out;
      emit(doc, locc_args.machine);
    });
  }

  // ---- sos-opt --------------------------------------------------------------------
  struct {
    std::string objective_file;
    std::string variant = "o2";
    int k = 2;
    int level = 3;
    int restarts = defaults::kOracleRestarts;
    int iters = 300;
    std::uint64_t seed = 0;
    bool locc_flag = false;
    bool power_check = false;
    bool machine = false;
  } sos_args;
  {
    auto* cmd = app.add_subcommand(
        "sos-opt", "Eigenvalue relaxation vs product ascent for sphere optimization");
    cmd->add_option("--objective", sos_args.objective_file, "Objective matrix file")->required();
    cmd->add_option("--variant", sos_args.variant,
                    "o1 (independent spheres) | o2 (single sphere)");
    cmd->add_option("--k", sos_args.k, "Fold of the objective")->required();
    cmd->add_option("--level", sos_args.level, "Relaxation level")->required();
    cmd->add_option("--oracle-restarts", sos_args.restarts, "Product ascent restarts");
    cmd->add_option("--oracle-iters", sos_args.iters, "Product ascent iterations");
    cmd->add_option("--seed", sos_args.seed, "Oracle restart seed");
    cmd->add_flag("--locc-flag", sos_args.locc_flag,
                  "Mark the objective as a restricted-measurement effect (guarantee conditional)");
    cmd->add_flag("--power-check", sos_args.power_check,
                  "Also run the slow power-iteration path and report the difference");
    cmd->add_flag("--json", sos_args.machine, "Emit a machine-readable report");
    cmd->callback([&] {
      auto [dims, m] = read_matrix(sos_args.objective_file);
      for (int d : dims)
        if (d != dims.front())
          throw ArgumentError("objective subsystems must share one local dimension");
      if (static_cast<int>(dims.size()) != sos_args.k)
        throw ArgumentError("objective file has " + std::to_string(dims.size()) +
                            " factors but --k is " + std::to_string(sos_args.k));
      SphereProblem problem;
      problem.objective = std::move(m);
      problem.local_dim = dims.front();
      problem.fold = sos_args.k;
      problem.locc_flag = sos_args.locc_flag;
      if (sos_args.variant == "o1" || sos_args.variant == "independent")
        problem.variant = SphereVariant::IndependentSpheres;
      else if (sos_args.variant == "o2" || sos_args.variant == "single")
        problem.variant = SphereVariant::SingleSphere;
      else
        throw ArgumentError("unknown variant '" + sos_args.variant + "' (use o1|o2)");
      ProductOracleOptions oopts;
      oopts.restarts = sos_args.restarts;
      oopts.iters = sos_args.iters;
      oopts.seed = sos_args.seed;
      const SandwichReport rep = sandwich_check(problem, sos_args.level, oopts);
      ojson doc;
      doc["command"] = "sos-opt";
      doc["params"]["objective"] = sos_args.objective_file;
      doc["params"]["variant"] = sos_args.variant;
      doc["params"]["k"] = sos_args.k;
      doc["params"]["level"] = sos_args.level;
      doc["params"]["oracle_restarts"] = sos_args.restarts;
      doc["params"]["oracle_iters"] = sos_args.iters;
      doc["params"]["seed"] = sos_args.seed;
      doc["params"]["locc_flag"] = sos_args.locc_flag;
      doc["results"]["relax_value"] = rep.relax_value;
      doc["results"]["oracle_value"] = rep.oracle_value;
      doc["results"]["gap_bound"] = rep.gap_bound_value;
      doc["results"]["oracle_below_relax"] = rep.lower_ok;
      doc["results"]["gap_within_bound"] = rep.gap_ok;
      doc["results"]["guarantee_conditional"] = rep.guarantee_conditional;
      const bool pass = rep.lower_ok && rep.gap_ok;
      doc["results"]["pass"] = pass;
      if (sos_args.power_check) {
        const double slow = relax_power_value(problem, sos_args.level);
        doc["results"]["power_iteration_value"] = slow;
        doc["results"]["power_iteration_difference"] = std::abs(slow - rep.relax_value);
      }
      emit(doc, sos_args.machine);
      exit_code = pass ? 0 : 1;
    });
  }

  // ---- verify-lemmas ------------------------------------------------------------
  struct {
    std::string which = "all";
    int trials = 200;
    std::uint64_t seed = 1;
    bool machine = false;
  } lemma_args;
  {
    auto* cmd = app.add_subcommand(
        "verify-lemmas", "Property sweeps for the exact identities and inequalities");
    cmd->add_option("--which", lemma_args.which,
                    "chain | pigeonhole | pinsker | dataproc | all "
                    "(aliases: lemma2 = chain, lemma3 = pigeonhole)");
    cmd->add_option("--trials", lemma_args.trials, "Number of random instances");
    cmd->add_option("--seed", lemma_args.seed, "Base seed");
    cmd->add_flag("--json", lemma_args.machine, "Emit a machine-readable report");
    cmd->callback([&] {
      std::string which = lemma_args.which;
      if (which == "lemma2") which = "chain";
      if (which == "lemma3") which = "pigeonhole";
      const bool all = which == "all";
      ojson doc;
      doc["command"] = "verify-lemmas";
      doc["params"]["which"] = lemma_args.which;
      doc["params"]["trials"] = lemma_args.trials;
      doc["params"]["seed"] = lemma_args.seed;
      doc["params"]["tolerance"] = 1e-9;
      bool pass = true;
      if (all || which == "chain") {
        SweepReport r = sweep_chain_identity(lemma_args.trials, lemma_args.seed);
        doc["results"]["chain_identity"] = r.fields;
        pass = pass && r.pass;
      }
      if (all || which == "pigeonhole") {
        SweepReport r = sweep_pigeonhole(lemma_args.trials, lemma_args.seed);
        doc["results"]["pigeonhole"] = r.fields;
        pass = pass && r.pass;
      }
      if (all || which == "pinsker") {
        SweepReport r = sweep_pinsker(lemma_args.trials, lemma_args.seed);
        doc["results"]["pinsker"] = r.fields;
        pass = pass && r.pass;
      }
      if (all || which == "dataproc") {
        SweepReport r = sweep_data_processing(lemma_args.trials, lemma_args.seed);
        doc["results"]["data_processing"] = r.fields;
        pass = pass && r.pass;
      }
      if (!all && which != "chain" && which != "pigeonhole" && which != "pinsker" &&
          which != "dataproc")
        throw ArgumentError("unknown sweep '" + lemma_args.which +
                            "' (use chain|pigeonhole|pinsker|dataproc|all)");
      doc["results"]["pass"] = pass;
      emit(doc, lemma_args.machine);
      exit_code = pass ? 0 : 1;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const ArgumentError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 4;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource error: out of memory\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
