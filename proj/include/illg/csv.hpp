#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace illg {

inline constexpr const char* kTrajectoryCsvTag = "illg-trajectory-csv v1";
inline constexpr const char* kSweepCsvTag = "illg-sweep-csv v1";

// Comma-separated, LF line endings, '#' comment lines before the header.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& text);
  void header(const std::vector<std::string>& columns);
  // Throws std::logic_error when the cell count differs from the header.
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  std::size_t width_ = 0;
};

std::vector<std::string> trajectory_columns(bool with_approx);
std::vector<std::string> sweep_columns();

// Every stride-th index of [0, n), always including the last one.
std::vector<std::size_t> strided_indices(std::size_t n, int stride);

}  // namespace illg
