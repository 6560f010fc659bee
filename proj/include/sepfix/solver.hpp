#pragma once

#include "sepfix/ensemble.hpp"
#include "sepfix/operator.hpp"
#include "sepfix/params.hpp"
#include "sepfix/sampling.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sepfix {

enum class StepMode { Paper, Practical };
enum class SampleStrategy { Fixed, Fresh };
enum class Outcome { SeparableWithinKappa, EntangledSignal, Inconclusive };

std::string_view to_string(StepMode m);
std::string_view to_string(SampleStrategy s);
std::string_view to_string(Outcome o);
std::optional<StepMode> parse_step_mode(std::string_view s);
std::optional<SampleStrategy> parse_sample_strategy(std::string_view s);
std::optional<Outcome> parse_outcome(std::string_view s);

struct SolverConfig {
  double kappa = 0.05;
  StepMode mode = StepMode::Practical;
  // Practical mode only; empty means default_practical_lambda(n).
  std::optional<double> lambda;
  std::size_t sample_count = 100000;
  SampleStrategy sample_strategy = SampleStrategy::Fixed;
  std::size_t max_iters = 200;
  // Practical mode only; empty means default_practical_bound(n).
  std::optional<double> bound;
  std::uint64_t seed = 1;
  bool adaptive = true;
  std::size_t patience = 5;
  std::size_t threads = 0;  // 0: default_thread_count()
};

struct TraceRow {
  std::size_t step = 0;
  double residual = 0.0;  // ||rho - E(X_k)||_1
  double x_norm = 0.0;    // ||X_k||_1
  double lambda = 0.0;    // step size used to form X_{k+1}
  double noise_floor = 0.0;
};

using IterationTrace = std::vector<TraceRow>;
using TraceSink = std::function<void(const TraceRow&)>;

namespace warning {
inline constexpr std::string_view kKappaBelowNoise = "kappa_below_noise_floor";
inline constexpr std::string_view kExponentOverflow = "exponent_overflow";
inline constexpr std::string_view kLambdaHalved = "lambda_halved";
}  // namespace warning

struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  double final_residual = 0.0;
  double final_x_norm = 0.0;
  std::size_t steps_used = 0;
  double noise_floor = 0.0;
  std::vector<std::string> warnings;
  std::string diagnostic;
};

struct RunResult {
  Verdict verdict;
  IterationTrace trace;
  HermitianOperator x;  // last iterate that was evaluated
  double lambda = 0.0;  // initial step size
  double bound = 0.0;
  std::optional<params::PaperParams> paper;  // set in paper mode
};

// 1.5 n^2. At X = 0 the Jacobian of F is I - lambda M, M the bipartite
// moment operator, whose eigenvalues are 1/(n^2 (n+1)^2), 1/(n^2 (n+1)) and
// 1/n^2 (the identity direction). This lambda maps the stiffest mode to -1/2;
// anything above 2 n^2 makes the trace direction diverge.
double default_practical_lambda(std::size_t n);
// 50 n^2.
double default_practical_bound(std::size_t n);

// (1 - kappa) rho + kappa I / d.
DensityMatrix regularize(const DensityMatrix& rho, double kappa);

struct StepResult {
  HermitianOperator next;
  double residual = 0.0;
  double noise_floor = 0.0;
  ImageEstimate image;
};

/// X + lambda (rho - E(X)) with E estimated on s. Propagates OverflowError.
StepResult apply_F(const HermitianOperator& x, const DensityMatrix& rho, double lambda,
                   const SampleSet& s, std::size_t threads = 0);

/// Iterates X_{k+1} = F(X_k) from X_0 = 0. Terminates with
/// separable_within_kappa once the residual is <= kappa, entangled_signal
/// once ||X_k||_1 exceeds the bound (or an exponent overflows), and
/// inconclusive after max_iters applications of F.
///
/// In adaptive mode, lambda is halved (and the iterate reset to the best one
/// seen) when the residual has not improved on its running minimum for
/// `patience` consecutive steps.
///
/// Throws PaperModeRefused in paper mode when lambda underflows, and
/// DomainError for non-square dims or an invalid config.
RunResult run(const DensityMatrix& rho, const SolverConfig& cfg, const TraceSink& sink = {});

}  // namespace sepfix
