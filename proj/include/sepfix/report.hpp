#pragma once

#include "sepfix/params.hpp"
#include "sepfix/solver.hpp"

#include "json.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sepfix {

inline constexpr std::string_view kTraceCsvHeader = "step,residual_l1,x_norm_l1,lambda,noise_floor";

// One CSV line (no newline), doubles printed with 17 significant digits.
std::string format_trace_row(const TraceRow& row);

/// Streams trace rows as CSV, flushing after every row.
class CsvTraceWriter {
 public:
  explicit CsvTraceWriter(std::ostream& out);
  void operator()(const TraceRow& row);

 private:
  std::ostream& out_;
};

struct ConfigEcho {
  double kappa = 0.0;
  std::string mode;
  double lambda = 0.0;
  std::size_t sample_count = 0;
  std::string sample_strategy;
  std::size_t max_iters = 0;
  double bound = 0.0;
  std::uint64_t seed = 0;
  bool adaptive = false;
  std::size_t patience = 0;
  bool regularized = false;

  bool operator==(const ConfigEcho&) const = default;
};

/// Everything `test` reports about one solver run.
struct RunReport {
  std::string input;
  std::string outcome;
  double final_residual = 0.0;
  double final_x_norm = 0.0;
  std::size_t steps_used = 0;
  double noise_floor = 0.0;
  std::vector<std::string> warnings;
  std::string diagnostic;
  ConfigEcho config;
  std::optional<params::PaperParams> params;
  double elapsed_seconds = 0.0;

  bool operator==(const RunReport&) const;
};

RunReport make_report(const std::string& input, const SolverConfig& cfg, const RunResult& r,
                      bool regularized, double elapsed_seconds);

nlohmann::json to_json(const params::PaperParams& p);
params::PaperParams paper_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

}  // namespace sepfix
