#include "sepfix/report.hpp"

#include <cstdio>

namespace sepfix {

using nlohmann::json;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool same(const params::PaperParams& a, const params::PaperParams& b) {
  return a.n == b.n && a.kappa == b.kappa && a.K == b.K && a.ln_CK == b.ln_CK &&
         a.ln_CA == b.ln_CA && a.ln_lambda == b.ln_lambda && a.contraction_C == b.contraction_C &&
         a.domain_bound == b.domain_bound && a.diameter == b.diameter && a.N == b.N &&
         a.lambda_underflows == b.lambda_underflows;
}

}  // namespace

std::string format_trace_row(const TraceRow& row) {
  return std::to_string(row.step) + ',' + g17(row.residual) + ',' + g17(row.x_norm) + ',' +
         g17(row.lambda) + ',' + g17(row.noise_floor);
}

CsvTraceWriter::CsvTraceWriter(std::ostream& out) : out_(out) {
  out_ << kTraceCsvHeader << '\n';
  out_.flush();
}

void CsvTraceWriter::operator()(const TraceRow& row) {
  out_ << format_trace_row(row) << '\n';
  out_.flush();
}

bool RunReport::operator==(const RunReport& o) const {
  const bool params_equal = params.has_value() == o.params.has_value() &&
                            (!params.has_value() || same(*params, *o.params));
  return input == o.input && outcome == o.outcome && final_residual == o.final_residual &&
         final_x_norm == o.final_x_norm && steps_used == o.steps_used &&
         noise_floor == o.noise_floor && warnings == o.warnings && diagnostic == o.diagnostic &&
         config == o.config && params_equal && elapsed_seconds == o.elapsed_seconds;
}

RunReport make_report(const std::string& input, const SolverConfig& cfg, const RunResult& r,
                      bool regularized, double elapsed_seconds) {
  RunReport rep;
  rep.input = input;
  rep.outcome = std::string(to_string(r.verdict.outcome));
  rep.final_residual = r.verdict.final_residual;
  rep.final_x_norm = r.verdict.final_x_norm;
  rep.steps_used = r.verdict.steps_used;
  rep.noise_floor = r.verdict.noise_floor;
  rep.warnings = r.verdict.warnings;
  rep.diagnostic = r.verdict.diagnostic;
  rep.config = {cfg.kappa,
                std::string(to_string(cfg.mode)),
                r.lambda,
                cfg.sample_count,
                std::string(to_string(cfg.sample_strategy)),
                cfg.max_iters,
                r.bound,
                cfg.seed,
                cfg.adaptive && cfg.mode == StepMode::Practical,
                cfg.patience,
                regularized};
  rep.params = r.paper;
  rep.elapsed_seconds = elapsed_seconds;
  return rep;
}

json to_json(const params::PaperParams& p) {
  return json{{"n", p.n},
              {"kappa", p.kappa},
              {"K", p.K},
              {"ln_CK", p.ln_CK},
              {"ln_CA", p.ln_CA},
              {"ln_lambda", p.ln_lambda},
              {"contraction_C", p.contraction_C},
              {"domain_bound", p.domain_bound},
              {"diameter", p.diameter},
              {"N", p.N},
              {"lambda_underflows", p.lambda_underflows}};
}

params::PaperParams paper_params_from_json(const json& j) {
  params::PaperParams p;
  j.at("n").get_to(p.n);
  j.at("kappa").get_to(p.kappa);
  j.at("K").get_to(p.K);
  j.at("ln_CK").get_to(p.ln_CK);
  j.at("ln_CA").get_to(p.ln_CA);
  j.at("ln_lambda").get_to(p.ln_lambda);
  j.at("contraction_C").get_to(p.contraction_C);
  j.at("domain_bound").get_to(p.domain_bound);
  j.at("diameter").get_to(p.diameter);
  j.at("N").get_to(p.N);
  j.at("lambda_underflows").get_to(p.lambda_underflows);
  return p;
}

json to_json(const RunReport& r) {
  const ConfigEcho& c = r.config;
  json j{{"input", r.input},
         {"outcome", r.outcome},
         {"final_residual", r.final_residual},
         {"final_x_norm", r.final_x_norm},
         {"steps_used", r.steps_used},
         {"noise_floor", r.noise_floor},
         {"warnings", r.warnings},
         {"diagnostic", r.diagnostic},
         {"config",
          {{"kappa", c.kappa},
           {"mode", c.mode},
           {"lambda", c.lambda},
           {"sample_count", c.sample_count},
           {"sample_strategy", c.sample_strategy},
           {"max_iters", c.max_iters},
           {"bound", c.bound},
           {"seed", c.seed},
           {"adaptive", c.adaptive},
           {"patience", c.patience},
           {"regularized", c.regularized}}},
         {"elapsed_seconds", r.elapsed_seconds}};
  j["params"] = r.params ? to_json(*r.params) : json(nullptr);
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  j.at("input").get_to(r.input);
  j.at("outcome").get_to(r.outcome);
  j.at("final_residual").get_to(r.final_residual);
  j.at("final_x_norm").get_to(r.final_x_norm);
  j.at("steps_used").get_to(r.steps_used);
  j.at("noise_floor").get_to(r.noise_floor);
  j.at("warnings").get_to(r.warnings);
  j.at("diagnostic").get_to(r.diagnostic);
  const json& c = j.at("config");
  c.at("kappa").get_to(r.config.kappa);
  c.at("mode").get_to(r.config.mode);
  c.at("lambda").get_to(r.config.lambda);
  c.at("sample_count").get_to(r.config.sample_count);
  c.at("sample_strategy").get_to(r.config.sample_strategy);
  c.at("max_iters").get_to(r.config.max_iters);
  c.at("bound").get_to(r.config.bound);
  c.at("seed").get_to(r.config.seed);
  c.at("adaptive").get_to(r.config.adaptive);
  c.at("patience").get_to(r.config.patience);
  c.at("regularized").get_to(r.config.regularized);
  if (!j.at("params").is_null()) r.params = paper_params_from_json(j.at("params"));
  j.at("elapsed_seconds").get_to(r.elapsed_seconds);
  return r;
}

}  // namespace sepfix
