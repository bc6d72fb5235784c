#include "illg/csv.hpp"

#include <stdexcept>

namespace illg {

void CsvWriter::comment(const std::string& text) {
  if (width_ != 0) throw std::logic_error("csv comments must precede the header");
  out_ << "# " << text << '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  width_ = columns.size();
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::logic_error("csv row width differs from header");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
}

std::vector<std::string> trajectory_columns(bool with_approx) {
  std::vector<std::string> c = {"t", "m1", "m2", "m3", "v1", "v2", "v3", "W", "field_on"};
  if (with_approx)
    for (const char* s : {"m1_leq1", "m2_leq1", "m3_leq1", "m1_leq2", "m2_leq2", "m3_leq2",
                          "v1_approx", "v2_approx", "v3_approx"})
      c.emplace_back(s);
  return c;
}

std::vector<std::string> sweep_columns() {
  return {"t_star", "outcome", "decided_by", "final_W", "m1", "m2", "m3", "error"};
}

std::vector<std::size_t> strided_indices(std::size_t n, int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be at least 1");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; i += static_cast<std::size_t>(stride)) out.push_back(i);
  if (n > 0 && out.back() != n - 1) out.push_back(n - 1);
  return out;
}

}  // namespace illg
