#include "cli.hpp"

#include "sepfix/criteria.hpp"
#include "sepfix/ensemble.hpp"
#include "sepfix/errors.hpp"
#include "sepfix/params.hpp"
#include "sepfix/report.hpp"
#include "sepfix/solver.hpp"
#include "sepfix/state_io.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

namespace sepfix::cli {

namespace {

using nlohmann::json;

std::size_t env_or(const char* name, std::size_t fallback) {
  if (const char* v = std::getenv(name)) {
    char* end = nullptr;
    const unsigned long long n = std::strtoull(v, &end, 10);
    if (end != v && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return fallback;
}

// "1.2346e+777" from a natural log, for values far outside double range.
std::string sci_from_ln(double ln_value) {
  const double l10 = ln_value / std::log(10.0);
  const double expo = std::floor(l10);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4fe%+.0f", std::pow(10.0, l10 - expo), expo);
  return buf;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const CLI::Validator kOpenUnit =
    CLI::Validator(
        [](std::string& s) -> std::string {
          double v = 0.0;
          try {
            v = std::stod(s);
          } catch (...) {
            return "not a number: " + s;
          }
          return (v > 0.0 && v < 1.0) ? std::string() : "value must lie in (0, 1): " + s;
        },
        "in (0,1)");

// Maps library exceptions thrown by a subcommand body to exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kNoInput;
  } catch (const PaperModeRefused& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kSoftware;
  }
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::SeparableWithinKappa:
      return kSeparable;
    case Outcome::EntangledSignal:
      return kEntangled;
    case Outcome::Inconclusive:
      return kInconclusive;
  }
  return kSoftware;
}

// ---------------------------------------------------------------- params

struct ParamsOpts {
  std::size_t n = 2;
  double kappa = 0.1;
  std::optional<double> p0;
  std::string state;
  bool json = false;
};

int cmd_params(const ParamsOpts& o, std::ostream& out) {
  const params::PaperParams p = params::paper_params(o.n, o.kappa);
  std::optional<double> p0 = o.p0;
  if (!o.state.empty()) {
    const DensityMatrix rho = load_state(o.state);
    if (rho.dims().a != o.n) {
      throw DimensionError("params: state factor dimension differs from --n");
    }
    p0 = rho.min_eigenvalue();
  }
  std::optional<std::uint64_t> k_true;
  if (p0) {
    // choose_K works per factor: the state's smallest eigenvalue bounds
    // the factor spectra from below.
    k_true = choose_K(std::min(*p0, 1.0 / static_cast<double>(o.n)), o.n);
  }
  if (o.json) {
    json j = to_json(p);
    if (p0) {
      j["p0"] = *p0;
      j["K_true_p0"] = *k_true;
    }
    out << j.dump(2) << '\n';
    return 0;
  }
  out << "n = " << p.n << '\n'
      << "kappa = " << g17(p.kappa) << '\n'
      << "K = " << p.K << '\n'
      << "ln_CK = " << g17(p.ln_CK) << "  (C_K ~ " << sci_from_ln(p.ln_CK) << ")\n"
      << "ln_CA = " << g17(p.ln_CA) << "  (C_A ~ " << sci_from_ln(p.ln_CA) << ")\n"
      << "ln_lambda = " << g17(p.ln_lambda) << "  (lambda ~ " << sci_from_ln(p.ln_lambda)
      << ")\n"
      << "contraction_C = " << g17(p.contraction_C) << '\n'
      << "domain_bound = " << g17(p.domain_bound) << '\n'
      << "diameter = " << g17(p.diameter) << '\n'
      << "N = " << p.N << '\n'
      << "lambda_underflows = " << (p.lambda_underflows ? "true" : "false") << '\n';
  if (p0) out << "p0 = " << g17(*p0) << '\n' << "K_true_p0 = " << *k_true << '\n';
  return 0;
}

// ---------------------------------------------------------------- test

struct TestOpts {
  std::string input;
  double kappa = 0.05;
  std::string mode = "practical";
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  std::optional<std::size_t> max_iters;
  std::string trace;
  std::optional<double> lambda;
  std::optional<double> bound;
  std::string strategy = "fixed";
  std::size_t patience = 5;
  bool no_adaptive = false;
  std::size_t threads = 0;
  bool regularize = false;
  std::string report;
  bool json = false;
};

int cmd_test(const TestOpts& o, std::ostream& out, std::ostream& err) {
  DensityMatrix rho = load_state(o.input);
  if (o.regularize) rho = regularize(rho, o.kappa);

  SolverConfig cfg;
  cfg.kappa = o.kappa;
  cfg.mode = *parse_step_mode(o.mode);
  cfg.lambda = o.lambda;
  cfg.sample_count = o.samples;
  cfg.sample_strategy = *parse_sample_strategy(o.strategy);
  cfg.bound = o.bound;
  cfg.seed = o.seed;
  cfg.adaptive = !o.no_adaptive;
  cfg.patience = o.patience;
  cfg.threads = o.threads;
  if (o.max_iters) {
    cfg.max_iters = *o.max_iters;
  } else if (cfg.mode == StepMode::Paper && rho.dims().a == rho.dims().b && rho.dims().a >= 2) {
    cfg.max_iters = params::paper_params(rho.dims().a, o.kappa).N;
  }

  std::ofstream trace_file;
  std::optional<CsvTraceWriter> writer;
  if (!o.trace.empty()) {
    trace_file.open(o.trace);
    if (!trace_file) {
      err << "error: cannot create trace file " << o.trace << '\n';
      return kCantCreate;
    }
    writer.emplace(trace_file);
  }
  TraceSink sink;
  if (writer) sink = [&](const TraceRow& r) { (*writer)(r); };

  const auto t0 = std::chrono::steady_clock::now();
  const RunResult result = run(rho, cfg, sink);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const RunReport rep = make_report(o.input, cfg, result, o.regularize, elapsed);

  if (!o.report.empty()) {
    std::ofstream rf(o.report);
    if (!rf) {
      err << "error: cannot create report file " << o.report << '\n';
      return kCantCreate;
    }
    rf << to_json(rep).dump(2) << '\n';
  }
  if (o.json) {
    out << to_json(rep).dump(2) << '\n';
  } else {
    out << "outcome = " << rep.outcome << '\n'
        << "final_residual = " << g17(rep.final_residual) << '\n'
        << "final_x_norm = " << g17(rep.final_x_norm) << '\n'
        << "steps_used = " << rep.steps_used << '\n'
        << "noise_floor = " << g17(rep.noise_floor) << '\n'
        << "lambda = " << g17(rep.config.lambda) << '\n'
        << "bound = " << g17(rep.config.bound) << '\n';
    for (const auto& w : rep.warnings) out << "warning = " << w << '\n';
    if (!rep.diagnostic.empty()) out << "diagnostic = " << rep.diagnostic << '\n';
  }
  return exit_code(result.verdict.outcome);
}

// ---------------------------------------------------------------- ppt

int cmd_ppt(const std::string& input, std::ostream& out) {
  const DensityMatrix rho = load_state(input);
  if (rho.dims().single_party()) {
    throw DimensionError("ppt: single-party state has no partial transpose");
  }
  const double lo = ppt_min_eigenvalue(rho);
  const bool ppt = lo >= -1e-9;
  out << "ppt_min_eigenvalue = " << g17(lo) << '\n'
      << "ppt = " << (ppt ? "true" : "false") << '\n'
      << "exact_criterion = " << (ppt_is_exact(rho.dims()) ? "true" : "false") << '\n';
  return ppt ? 0 : 1;
}

// ---------------------------------------------------------------- gen

struct GenOpts {
  std::string family;
  double w = 0.0;
  std::size_t n = 2;
  std::vector<std::size_t> dims{2, 2};
  std::size_t terms = 10;
  std::uint64_t seed = 1;
  std::vector<double> p;
  std::string output;
};

int cmd_gen(const GenOpts& o, std::ostream& out, std::ostream& err) {
  const auto fam = parse_family(o.family);
  if (!fam) {
    err << "error: unknown family '" << o.family << "'\n";
    return kUsage;
  }
  StateSpec spec;
  spec.family = *fam;
  spec.w = o.w;
  spec.dims = *fam == Family::Isotropic ? Dims{o.n, o.n} : Dims{o.dims[0], o.dims[1]};
  spec.terms = o.terms;
  spec.seed = o.seed;
  spec.p = Eigen::Map<const Eigen::VectorXd>(o.p.data(), static_cast<Eigen::Index>(o.p.size()));
  std::optional<DensityMatrix> rho;
  try {
    rho.emplace(generate(spec));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  try {
    save_state(o.output, *rho);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kCantCreate;
  }
  out << "wrote " << family_name(*fam) << " state, dims (" << rho->dims().a << ","
      << rho->dims().b << ") to " << o.output << '\n';
  return 0;
}

// ---------------------------------------------------------------- check-moments

struct MomentOpts {
  std::size_t n = 2;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  std::size_t operators = 5;
  std::size_t threads = 0;
};

int cmd_check_moments(const MomentOpts& o, std::ostream& out) {
  bool all_ok = true;
  auto line = [&](const char* kind, std::size_t i, double gap, double sigma) {
    const bool ok = gap <= 3.0 * sigma;
    all_ok = all_ok && ok;
    out << kind << '[' << i << "] gap_l1 = " << g17(gap) << " sigma = " << g17(sigma)
        << " ratio = " << g17(sigma > 0.0 ? gap / sigma : INFINITY) << (ok ? " ok" : " FAIL")
        << '\n';
  };
  const SampleSet single = make_sample_set(o.seed, o.samples, {o.n, 1}, o.threads);
  for (std::size_t i = 0; i < o.operators; ++i) {
    const HermitianOperator a = random_hermitian(o.n, derive_seed(o.seed, 1000 + i));
    const Estimate mc = moment_single_mc(a, single, o.threads);
    line("single", i, trace_norm(mc.value - moment_single_closed(a)), mc.noise_floor);
  }
  const Dims dims{o.n, o.n};
  const SampleSet torus = make_sample_set(derive_seed(o.seed, 1), o.samples, dims, o.threads);
  for (std::size_t i = 0; i < o.operators; ++i) {
    const HermitianOperator y = random_hermitian(dims.total(), derive_seed(o.seed, 2000 + i));
    const Estimate mc = moment_bipartite_mc(y, torus, o.threads);
    line("bipartite", i, trace_norm(mc.value - moment_bipartite_closed(y, dims)),
         mc.noise_floor);
  }
  out << "result = " << (all_ok ? "pass" : "fail") << '\n';
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------- reconstruct

struct ReconOpts {
  std::string input;
  std::size_t samples = 200000;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> K;
  std::size_t threads = 0;
};

int cmd_reconstruct(const ReconOpts& o, std::ostream& out) {
  const DensityMatrix rho = load_state(o.input);
  const Dims dims = rho.dims();
  double error = 0.0;
  double noise = 0.0;
  auto pick_K = [&](const DensityMatrix& r) {
    if (o.K) return *o.K;
    const double p0 = r.min_eigenvalue();
    if (!(p0 > 0.0)) {
      throw DomainError("reconstruct: rank-deficient state (p0 = " + g17(p0) +
                        "); regularize first");
    }
    return choose_K(p0, r.dim());
  };
  if (dims.single_party()) {
    const std::uint64_t K = pick_K(rho);
    const SampleSet s = make_sample_set(o.seed, o.samples, {dims.a, 1}, o.threads);
    const Estimate est = reconstruct(rho, K, s, o.threads);
    error = trace_norm(est.value - rho.op());
    noise = est.noise_floor;
    out << "mode = single\nK = " << K << '\n'
        << "trace_estimate = " << g17(est.value.trace()) << '\n';
  } else {
    const DensityMatrix ra(partial_trace(rho.op(), dims, Subsystem::Second), {dims.a, 1});
    const DensityMatrix rb(partial_trace(rho.op(), dims, Subsystem::First), {dims.b, 1});
    const std::uint64_t ka = pick_K(ra);
    const std::uint64_t kb = pick_K(rb);
    const SampleSet s = make_sample_set(o.seed, o.samples, dims, o.threads);
    const Estimate est = reconstruct_product(ra, ka, rb, kb, s, o.threads);
    const HermitianOperator target = tensor(ra.op(), rb.op());
    error = trace_norm(est.value - target);
    noise = est.noise_floor;
    out << "mode = factorwise\nK_A = " << ka << "\nK_B = " << kb << '\n'
        << "product_defect_l1 = " << g17(trace_norm(rho.op() - target)) << '\n'
        << "trace_estimate = " << g17(est.value.trace()) << '\n';
  }
  const bool ok = error <= 3.0 * noise;
  out << "error_l1 = " << g17(error) << '\n'
      << "noise_floor = " << g17(noise) << '\n'
      << "result = " << (ok ? "pass" : "fail") << '\n';
  return ok ? 0 : 1;
}

std::vector<std::string> family_names() {
  std::vector<std::string> v;
  for (Family f : {Family::Werner, Family::Isotropic, Family::RandomFullRank,
                   Family::RandomSeparable, Family::PureProduct, Family::Bell, Family::Diagonal})
    v.emplace_back(family_name(f));
  return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separability testing by fixed-point iteration over continuous ensembles"};
  app.require_subcommand(1);
  const std::size_t default_samples = env_or(kSamplesEnv, 100000);

  ParamsOpts po;
  auto* params_cmd = app.add_subcommand("params", "Report the iteration constants for (n, kappa)");
  params_cmd->add_option("--n", po.n, "Factor dimension")->check(CLI::Range(2, 64));
  params_cmd->add_option("--kappa", po.kappa, "Tolerance")->check(kOpenUnit);
  params_cmd->add_option("--p0", po.p0, "Smallest eigenvalue for the true-p0 K")
      ->check(CLI::PositiveNumber);
  params_cmd->add_option("--state", po.state, "State file supplying p0");
  params_cmd->add_flag("--json", po.json, "Print JSON");

  TestOpts to;
  to.samples = default_samples;
  auto* test_cmd = app.add_subcommand("test", "Run the fixed-point separability test");
  test_cmd->add_option("input", to.input, "State file")->required();
  test_cmd->add_option("--kappa", to.kappa, "Tolerance")->check(kOpenUnit);
  test_cmd->add_option("--mode", to.mode, "Step-size mode")
      ->check(CLI::IsMember({"practical", "paper"}));
  test_cmd->add_option("--samples", to.samples, "Monte Carlo sample count")
      ->check(CLI::PositiveNumber);
  test_cmd->add_option("--seed", to.seed, "Sample seed");
  test_cmd->add_option("--max-iters", to.max_iters, "Iteration budget (paper mode: N)")
      ->check(CLI::PositiveNumber);
  test_cmd->add_option("--trace", to.trace, "Write the iteration trace as CSV");
  test_cmd->add_option("--lambda", to.lambda, "Practical step size")->check(CLI::PositiveNumber);
  test_cmd->add_option("--bound", to.bound, "Practical trace-norm bound on X")
      ->check(CLI::PositiveNumber);
  test_cmd->add_option("--strategy", to.strategy, "Sample strategy")
      ->check(CLI::IsMember({"fixed", "fresh"}));
  test_cmd->add_option("--patience", to.patience, "Stalled steps before halving lambda");
  test_cmd->add_flag("--no-adaptive", to.no_adaptive, "Keep lambda fixed");
  test_cmd->add_option("--threads", to.threads, "Worker threads (0: default)");
  test_cmd->add_flag("--regularize", to.regularize, "Mix in kappa I/d before testing");
  test_cmd->add_option("--report", to.report, "Write the run report as JSON");
  test_cmd->add_flag("--json", to.json, "Print the report as JSON");

  std::string ppt_input;
  auto* ppt_cmd = app.add_subcommand("ppt", "Positive-partial-transpose check");
  ppt_cmd->add_option("input", ppt_input, "State file")->required();

  GenOpts go;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a state file");
  gen_cmd->add_option("family", go.family, "State family")
      ->required()
      ->check(CLI::IsMember(family_names()));
  gen_cmd->add_option("--w", go.w, "Mixing weight (werner, isotropic)");
  gen_cmd->add_option("--n", go.n, "Factor dimension (isotropic)");
  gen_cmd->add_option("--dims", go.dims, "Subsystem dimensions")->expected(2);
  gen_cmd->add_option("--terms", go.terms, "Product terms (random-separable)");
  gen_cmd->add_option("--seed", go.seed, "Seed (random families)");
  gen_cmd->add_option("--p", go.p, "Spectrum (diagonal)");
  gen_cmd->add_option("-o,--output", go.output, "Output path")->required();

  MomentOpts mo;
  mo.samples = default_samples;
  auto* mom_cmd =
      app.add_subcommand("check-moments", "Monte Carlo vs closed-form moment integrals");
  mom_cmd->add_option("--n", mo.n, "Factor dimension")->check(CLI::Range(1, 8));
  mom_cmd->add_option("--samples", mo.samples, "Sample count")->check(CLI::PositiveNumber);
  mom_cmd->add_option("--seed", mo.seed, "Seed");
  mom_cmd->add_option("--operators", mo.operators, "Random operators per identity")
      ->check(CLI::PositiveNumber);
  mom_cmd->add_option("--threads", mo.threads, "Worker threads (0: default)");

  ReconOpts ro;
  auto* rec_cmd =
      app.add_subcommand("reconstruct", "Rebuild a state from its smeared spectral ensemble");
  rec_cmd->add_option("input", ro.input, "State file")->required();
  rec_cmd->add_option("--samples", ro.samples, "Sample count")->check(CLI::PositiveNumber);
  rec_cmd->add_option("--seed", ro.seed, "Seed");
  rec_cmd->add_option("--K", ro.K, "Smearing order (default: smallest valid)")
      ->check(CLI::PositiveNumber);
  rec_cmd->add_option("--threads", ro.threads, "Worker threads (0: default)");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("sepfix");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  if (*params_cmd) return guarded(err, [&] { return cmd_params(po, out); });
  if (*test_cmd) return guarded(err, [&] { return cmd_test(to, out, err); });
  if (*ppt_cmd) return guarded(err, [&] { return cmd_ppt(ppt_input, out); });
  if (*gen_cmd) return guarded(err, [&] { return cmd_gen(go, out, err); });
  if (*mom_cmd) return guarded(err, [&] { return cmd_check_moments(mo, out); });
  if (*rec_cmd) return guarded(err, [&] { return cmd_reconstruct(ro, out); });
  return kUsage;
}

}  // namespace sepfix::cli
