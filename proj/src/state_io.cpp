#include "sepfix/state_io.hpp"

#include "sepfix/errors.hpp"

#include <fstream>
#include <string>

namespace sepfix {

using nlohmann::json;

json state_to_json(const DensityMatrix& rho) {
  const Matrix& m = rho.matrix();
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
  return json{{"dims", {rho.dims().a, rho.dims().b}}, {"matrix", std::move(entries)}};
}

DensityMatrix state_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("matrix")) {
    throw ValidationError("state file: expected an object with \"dims\" and \"matrix\"");
  }
  const json& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_unsigned() ||
      !dims[1].is_number_unsigned()) {
    throw ValidationError("state file: \"dims\" must be two positive integers");
  }
  const Dims d{dims[0].get<std::size_t>(), dims[1].get<std::size_t>()};
  if (d.a == 0 || d.b == 0) throw ValidationError("state file: dims must be positive");
  const std::size_t n = d.total();
  const json& entries = j.at("matrix");
  if (!entries.is_array() || entries.size() != n * n) {
    throw ValidationError("state file: \"matrix\" must hold " + std::to_string(n * n) +
                          " [re, im] entries");
  }
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n * n; ++k) {
    const json& e = entries[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ValidationError("state file: entry " + std::to_string(k) + " is not [re, im]");
    }
    m(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) =
        cplx(e[0].get<double>(), e[1].get<double>());
  }
  return {HermitianOperator(m, kHermitianTol), d};
}

DensityMatrix load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open state file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("state file " + path.string() + ": " + e.what());
  }
  return state_from_json(j);
}

void save_state(const std::filesystem::path& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write state file " + path.string());
  out << state_to_json(rho).dump() << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace sepfix
