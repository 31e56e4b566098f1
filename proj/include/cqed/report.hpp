#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cqed/params.hpp"

namespace cqed {

inline constexpr std::string_view kReportSchema = "cqed-report/1";

/// Flat key/value view of a derivation. Key suffixes carry the unit;
/// `*_hz` values are the angular ones divided by 2π.
nlohmann::ordered_json derived_report(const DerivedParams& d, const DeviceSpecs& specs,
                                      const PhysicalConstants& consts = {});

/// Regime flags raised by a device derivation alone.
std::vector<std::string> device_warnings(const DerivedParams& d, const DeviceSpecs& specs);

/// Value at a dotted path such as "derived.g_hz". Returns nullopt when any
/// segment is missing.
std::optional<nlohmann::ordered_json> lookup(const nlohmann::ordered_json& root,
                                             std::string_view dotted);

/// Comma-separated table with a header row and LF line endings. Doubles
/// are written as the shortest decimal that round-trips.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);

  CsvWriter& cell(double value);
  CsvWriter& cell(std::int64_t value);
  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(bool value) { return cell(std::string_view(value ? "true" : "false")); }
  CsvWriter& cell(int value) { return cell(static_cast<std::int64_t>(value)); }
  void end_row();

  [[nodiscard]] const std::string& str() const { return out_; }
  [[nodiscard]] std::size_t columns() const { return columns_; }

 private:
  void separator();

  std::string out_;
  std::size_t columns_;
  std::size_t pending_ = 0;
};

}  // namespace cqed
