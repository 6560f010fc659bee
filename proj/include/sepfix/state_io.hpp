#pragma once

#include "sepfix/operator.hpp"

#include "json.hpp"

#include <filesystem>

namespace sepfix {

// State file schema:
//   {"dims": [n_A, n_B], "matrix": [[re, im], ...]}
// with (n_A n_B)^2 entries, row-major over the composite index
// i = i_A * n_B + i_B.
nlohmann::json state_to_json(const DensityMatrix& rho);

// Throws ValidationError for schema violations and for matrices that are
// not valid density matrices (Hermiticity 1e-12 per entry, trace and PSD
// 1e-10).
DensityMatrix state_from_json(const nlohmann::json& j);

// IoError if the file is missing or unreadable; ValidationError otherwise.
DensityMatrix load_state(const std::filesystem::path& path);
// IoError if the file cannot be written.
void save_state(const std::filesystem::path& path, const DensityMatrix& rho);

}  // namespace sepfix
