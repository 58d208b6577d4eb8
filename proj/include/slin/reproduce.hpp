#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "slin/explorer.hpp"

namespace slin {

/// Built-in client programs, by name: two-enqueues, three-phase, enqueue-dequeue. The same texts ship
/// under programs/.
std::string_view builtin_program(std::string_view name);

struct ReproductionInfo {
  std::string name;
  std::string summary;
};

/// Catalogue in acceptance order.
const std::vector<ReproductionInfo>& reproductions();

struct ReproductionResult {
  std::string name;
  bool passed = false;
  std::vector<std::string> lines;
};

/// Runs one named reproduction. Throws UsageError for unknown names.
ReproductionResult reproduce(std::string_view name, const ExploreOptions& opts = {});

}  // namespace slin
