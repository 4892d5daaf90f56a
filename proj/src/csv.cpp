#include "bipsim/csv.hpp"

#include <charconv>
#include <system_error>

namespace bipsim {

std::string format_double(double value) {
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw IoError("parse_double: '" + text + "' is not a number");
  }
  return value;
}

namespace {

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n") != std::string::npos;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : path_(path), n_columns_(columns.size()) {
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open '" + path.string() + "' for writing");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << (needs_quoting(columns[i]) ? quoted(columns[i]) : columns[i]);
  }
  out_ << '\n';
}

CsvWriter::~CsvWriter() {
  if (!closed_ && out_.is_open()) out_.close();
}

void CsvWriter::row(std::span<const CsvCell> cells) {
  if (cells.size() != n_columns_) {
    throw IoError("csv row width " + std::to_string(cells.size()) + " != header width " +
                  std::to_string(n_columns_));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    if (const auto* n = std::get_if<long long>(&cells[i])) {
      out_ << *n;
    } else if (const auto* d = std::get_if<double>(&cells[i])) {
      out_ << format_double(*d);
    } else {
      const auto& s = std::get<std::string>(cells[i]);
      out_ << (needs_quoting(s) ? quoted(s) : s);
    }
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  closed_ = true;
  if (out_.fail()) throw IoError("failed writing '" + path_.string() + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            ++i;
          } else {
            in_quotes = false;
          }
        } else {
          field += c;
        }
      } else if (c == '"') {
        in_quotes = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else {
        field += c;
      }
    }
    fields.push_back(std::move(field));
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

}  // namespace bipsim
