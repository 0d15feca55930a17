#pragma once

// Column-named result tables written both as CSV and as a JSON array of
// objects with the same field names.

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace ffcorr {

using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

class ReportTable {
 public:
  explicit ReportTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  /// Appends a row; throws std::invalid_argument on a width mismatch.
  void add_row(std::vector<Cell> row);

  /// Doubles use 17 significant digits; NaN and infinities are spelled out.
  void write_csv(std::ostream& os) const;
  /// Non-finite doubles become null.
  void write_json(std::ostream& os) const;
  /// Writes `stem`.csv and `stem`.json.
  void save(const std::filesystem::path& stem) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Shortest round-trip text for a double ("nan", "inf", "-inf" for the
/// non-finite values).
std::string format_double(double x);

}  // namespace ffcorr
