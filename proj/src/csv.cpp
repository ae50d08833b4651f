#include "mftg/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "mftg/types.hpp"

namespace mftg {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_int(std::int64_t v) { return std::to_string(v); }

CsvWriter::CsvWriter(std::string path, const std::vector<std::string>& columns,
                     const std::string& config_hash, std::uint64_t seed, bool with_timestamp)
    : path_(std::move(path)), n_cols_(columns.size()) {
  buffer_ += "#schema=v1\n";
  buffer_ += "#config_hash=" + config_hash + "\n";
  buffer_ += "#seed=" + std::to_string(seed) + "\n";
  if (with_timestamp) {
    char ts[64];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    buffer_ += std::string("#timestamp=") + ts + "\n";
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += columns[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_) throw NumericError("csv: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw ConfigError("csv: cannot open \"" + path_ + "\" for writing");
  out << buffer_;
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double pos = q * (values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double t = pos - lo;
  return (1.0 - t) * values[lo] + t * values[hi];
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

}  // namespace mftg
