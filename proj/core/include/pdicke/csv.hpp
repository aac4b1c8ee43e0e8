// csv.hpp - deterministic CSV output.
//
// Header row, '\n' line endings, floats in scientific notation with nine
// significant digits and a bare exponent (1/3 -> 3.33333333e-1). Files are
// written to a temporary sibling and renamed into place.

#pragma once

#include "pdicke/analysis.hpp"
#include "pdicke/fidelity.hpp"
#include "pdicke/time_series.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pdicke {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_scientific(double value);

/// Quote a field when it contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

std::string to_csv_text(const CsvTable& table);

/// Atomic write (temp file + rename). Throws std::runtime_error naming the
/// path and the OS error on failure.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_csv(const CsvTable& table, const std::filesystem::path& path);

/// Fidelity map rows x_m, z_m, F, in_corridor (z-major order).
CsvTable fidelity_map_table(const FidelityMap& map, const CorridorMask& mask);

}  // namespace pdicke
