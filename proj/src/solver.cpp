#include "sepfix/solver.hpp"

#include "sepfix/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sepfix {

namespace {

template <class E>
struct Named {
  std::string_view name;
  E value;
};

constexpr Named<StepMode> kModes[] = {{"paper", StepMode::Paper},
                                      {"practical", StepMode::Practical}};
constexpr Named<SampleStrategy> kStrategies[] = {{"fixed", SampleStrategy::Fixed},
                                                 {"fresh", SampleStrategy::Fresh}};
constexpr Named<Outcome> kOutcomes[] = {{"separable_within_kappa", Outcome::SeparableWithinKappa},
                                        {"entangled_signal", Outcome::EntangledSignal},
                                        {"inconclusive", Outcome::Inconclusive}};

template <class E, std::size_t N>
std::string_view name_of(const Named<E> (&table)[N], E v) {
  for (const auto& t : table)
    if (t.value == v) return t.name;
  return "unknown";
}

template <class E, std::size_t N>
std::optional<E> parse_name(const Named<E> (&table)[N], std::string_view s) {
  for (const auto& t : table)
    if (t.name == s) return t.value;
  return std::nullopt;
}

void validate(const DensityMatrix& rho, const SolverConfig& cfg) {
  const Dims dims = rho.dims();
  if (dims.a != dims.b || dims.a < 2) {
    throw DomainError("run: requires square bipartite dims (n, n) with n >= 2");
  }
  if (!(cfg.kappa > 0.0 && cfg.kappa < 1.0)) throw DomainError("run: kappa must lie in (0, 1)");
  if (cfg.max_iters == 0) throw DomainError("run: max_iters must be >= 1");
  if (cfg.sample_count == 0) throw DomainError("run: sample_count must be >= 1");
  if (cfg.lambda && !(*cfg.lambda > 0.0)) throw DomainError("run: lambda must be positive");
  if (cfg.bound && !(*cfg.bound > 0.0)) throw DomainError("run: bound must be positive");
}

}  // namespace

std::string_view to_string(StepMode m) { return name_of(kModes, m); }
std::string_view to_string(SampleStrategy s) { return name_of(kStrategies, s); }
std::string_view to_string(Outcome o) { return name_of(kOutcomes, o); }
std::optional<StepMode> parse_step_mode(std::string_view s) { return parse_name(kModes, s); }
std::optional<SampleStrategy> parse_sample_strategy(std::string_view s) {
  return parse_name(kStrategies, s);
}
std::optional<Outcome> parse_outcome(std::string_view s) { return parse_name(kOutcomes, s); }

double default_practical_lambda(std::size_t n) {
  if (n < 2) throw DomainError("default_practical_lambda: n must be >= 2");
  const double nn = static_cast<double>(n);
  return 1.5 * nn * nn;
}

double default_practical_bound(std::size_t n) {
  const double nn = static_cast<double>(n);
  return 50.0 * nn * nn;
}

DensityMatrix regularize(const DensityMatrix& rho, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("regularize: kappa must lie in (0, 1)");
  const std::size_t d = rho.dim();
  HermitianOperator op = (1.0 - kappa) * rho.op() +
                         HermitianOperator::identity(d) * (kappa / static_cast<double>(d));
  return {std::move(op), rho.dims()};
}

StepResult apply_F(const HermitianOperator& x, const DensityMatrix& rho, double lambda,
                   const SampleSet& s, std::size_t threads) {
  if (x.dim() != rho.dim()) throw DimensionError("apply_F: X and rho dimensions differ");
  ImageEstimate image = estimate_image(x, s, threads);
  HermitianOperator diff = rho.op() - image.value;
  const double residual = trace_norm(diff);
  HermitianOperator next = x + lambda * diff;
  const double noise = image.noise_floor;
  return {std::move(next), residual, noise, std::move(image)};
}

RunResult run(const DensityMatrix& rho, const SolverConfig& cfg, const TraceSink& sink) {
  validate(rho, cfg);
  const Dims dims = rho.dims();
  const std::size_t n = dims.a;

  RunResult out;
  double lambda = 0.0;
  bool adaptive = cfg.adaptive;
  if (cfg.mode == StepMode::Paper) {
    const params::PaperParams pp = params::paper_params(n, cfg.kappa);
    out.paper = pp;
    if (pp.lambda_underflows) {
      std::ostringstream msg;
      msg << "paper mode refused: ln(lambda) = " << pp.ln_lambda
          << " is below ln(smallest normal double) = " << params::ln_min_normal()
          << "; the step size underflows to zero (use --mode practical)";
      throw PaperModeRefused(msg.str());
    }
    if (!(rho.min_eigenvalue() > 0.0)) {
      throw DomainError("run: paper mode needs a full-rank state; regularize first");
    }
    lambda = std::exp(pp.ln_lambda);
    out.bound = pp.domain_bound;
    adaptive = false;
  } else {
    lambda = cfg.lambda.value_or(default_practical_lambda(n));
    out.bound = cfg.bound.value_or(default_practical_bound(n));
  }
  out.lambda = lambda;

  std::optional<SampleSet> fixed;
  if (cfg.sample_strategy == SampleStrategy::Fixed) {
    fixed.emplace(make_sample_set(cfg.seed, cfg.sample_count, dims, cfg.threads));
  }

  Verdict& v = out.verdict;
  HermitianOperator x = HermitianOperator::zero(rho.dim());
  HermitianOperator best_x = x;
  HermitianOperator best_diff = x;
  double best_residual = std::numeric_limits<double>::infinity();
  std::size_t stall = 0;
  bool halved = false;

  for (std::size_t k = 0;; ++k) {
    std::optional<SampleSet> fresh;
    if (!fixed) {
      fresh.emplace(
          make_sample_set(derive_seed(cfg.seed, k), cfg.sample_count, dims, cfg.threads));
    }
    const SampleSet& s = fixed ? *fixed : *fresh;

    const double x_norm = trace_norm(x);
    StepResult step{x, 0.0, 0.0, {}};
    try {
      step = apply_F(x, rho, lambda, s, cfg.threads);
    } catch (const OverflowError& e) {
      v.outcome = Outcome::EntangledSignal;
      v.final_x_norm = x_norm;
      v.steps_used = k;
      v.warnings.emplace_back(warning::kExponentOverflow);
      v.diagnostic = e.what();
      out.x = x;
      return out;
    }

    bool reset = false;
    if (adaptive) {
      if (step.residual < best_residual) {
        best_residual = step.residual;
        best_x = x;
        best_diff = rho.op() - step.image.value;
        stall = 0;
      } else if (++stall >= cfg.patience) {
        lambda *= 0.5;
        stall = 0;
        reset = true;
        if (!halved) v.warnings.emplace_back(warning::kLambdaHalved);
        halved = true;
      }
    }

    const TraceRow row{k, step.residual, x_norm, lambda, step.noise_floor};
    out.trace.push_back(row);
    if (sink) sink(row);

    v.final_residual = step.residual;
    v.final_x_norm = x_norm;
    v.noise_floor = step.noise_floor;
    v.steps_used = k;
    out.x = x;

    if (x_norm > out.bound) {
      v.outcome = Outcome::EntangledSignal;
      std::ostringstream msg;
      msg << "||X||_1 = " << x_norm << " exceeds the bound " << out.bound << " at step " << k;
      v.diagnostic = msg.str();
      return out;
    }
    if (step.residual <= cfg.kappa) {
      v.outcome = Outcome::SeparableWithinKappa;
      if (cfg.kappa < 2.0 * step.noise_floor) {
        v.warnings.emplace_back(warning::kKappaBelowNoise);
      }
      return out;
    }
    if (k >= cfg.max_iters) {
      v.outcome = Outcome::Inconclusive;
      std::ostringstream msg;
      msg << "iteration budget of " << cfg.max_iters << " steps exhausted; best residual "
          << std::min(best_residual, step.residual);
      v.diagnostic = msg.str();
      return out;
    }

    x = reset ? best_x + lambda * best_diff : std::move(step.next);
  }
}

}  // namespace sepfix
