#include "pdicke/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace pdicke {

std::string format_scientific(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0

  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 8);
  if (ec != std::errc()) throw std::runtime_error("format_scientific: conversion failed");
  const std::string text(buf, ptr);

  const auto e = text.find('e');
  std::string mantissa = text.substr(0, e);
  std::string exponent = text.substr(e + 1);
  bool negative = false;
  if (!exponent.empty() && (exponent.front() == '+' || exponent.front() == '-')) {
    negative = exponent.front() == '-';
    exponent.erase(0, 1);
  }
  const auto nonzero = exponent.find_first_not_of('0');
  exponent = nonzero == std::string::npos ? "0" : exponent.substr(nonzero);
  if (exponent == "0") negative = false;
  return mantissa + "e" + (negative ? "-" : "") + exponent;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string to_csv_text(const CsvTable& table) {
  std::string out;
  const auto append_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_escape(row[i]);
    }
    out += '\n';
  };
  append_row(table.header);
  for (const auto& row : table.rows) append_row(row);
  return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + ": " + std::strerror(errno));
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
      throw std::runtime_error("write failed for " + tmp.string() + ": " + std::strerror(errno));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                             ec.message());
  }
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  write_text_atomic(path, to_csv_text(table));
}

CsvTable fidelity_map_table(const FidelityMap& map, const CorridorMask& mask) {
  CsvTable table;
  table.header = {"x_m", "z_m", "F", "in_corridor"};
  table.rows.reserve(map.values.size());
  for (std::size_t iz = 0; iz < map.nz(); ++iz) {
    for (std::size_t ix = 0; ix < map.nx(); ++ix) {
      table.rows.push_back({format_scientific(map.xs[ix]), format_scientific(map.zs[iz]),
                            format_scientific(map.at(iz, ix)), mask.at(iz, ix) ? "1" : "0"});
    }
  }
  return table;
}

}  // namespace pdicke
