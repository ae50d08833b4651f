#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mftg {

// CSV with a versioned comment header. Every file records the config hash so
// results from different configurations cannot be compared by accident; the
// timestamp line is optional to allow byte-identical reruns.
class CsvWriter {
 public:
  CsvWriter(std::string path, const std::vector<std::string>& columns,
            const std::string& config_hash, std::uint64_t seed, bool with_timestamp);

  void row(const std::vector<std::string>& cells);
  void close();  // flushes; also run by the destructor
  ~CsvWriter();

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string buffer_;
  std::size_t n_cols_;
  bool closed_ = false;
};

// Shortest round-trip formatting (%.17g) so reruns are byte-identical.
std::string format_double(double v);
std::string format_int(std::int64_t v);

double median(std::vector<double> values);
double quantile(std::vector<double> values, double q);

}  // namespace mftg
