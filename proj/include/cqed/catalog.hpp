#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace cqed {

/// Example configuration shipped with the library.
struct CatalogEntry {
  std::string_view name;
  std::string_view text;  // JSON configuration
};

/// Entries sorted by name.
std::span<const CatalogEntry> catalog();
std::optional<CatalogEntry> find_scenario(std::string_view name);

}  // namespace cqed
