#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bipsim/errors.hpp"

namespace bipsim {

// doubles print with 17 significant digits so a re-read reproduces the exact
// bit pattern; formatting is locale-independent (std::to_chars).
std::string format_double(double value);
double parse_double(const std::string& text);

using CsvCell = std::variant<long long, double, std::string>;

// Minimal RFC-4180 writer: comma separated, CRLF-free ('\n'), header row
// first, string cells quoted only when they need it.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
  ~CsvWriter();

  void row(std::span<const CsvCell> cells);
  void row(std::initializer_list<CsvCell> cells) {
    row(std::span<const CsvCell>(cells.begin(), cells.size()));
  }
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t n_columns_;
  bool closed_ = false;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace bipsim
