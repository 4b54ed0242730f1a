#include <cstdio>

#include "pqlab/app.hpp"
#include "pqlab/error.hpp"

namespace pqlab::app {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  require(static_cast<bool>(out_), ErrorKind::ConfigError, "cannot write '" + path.string() + "'");
  std::vector<CsvCell> cells(header.begin(), header.end());
  row(cells);
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  require(cells.size() == columns_, ErrorKind::Precondition, "CSV row width differs from header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    if (const auto* s = std::get_if<std::string>(&cells[i])) {
      out_ << csv_escape(*s);
    } else if (const auto* d = std::get_if<double>(&cells[i])) {
      out_ << format_double(*d);
    } else if (const auto* n = std::get_if<long long>(&cells[i])) {
      out_ << *n;
    } else {
      out_ << (std::get<bool>(cells[i]) ? "true" : "false");
    }
  }
  out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

}  // namespace pqlab::app
