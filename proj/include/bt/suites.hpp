#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bt/json_io.hpp"

namespace bt {

/// Restrictions and budgets for the verify suites. Unset fields keep each
/// suite's default case list.
struct SuiteConfig {
  std::uint64_t seed = 1;
  std::optional<std::string> field;
  std::optional<int> d;
  std::optional<int> r;
  std::optional<int> q;
  std::optional<int> radius;
  std::optional<int> depth;
};

struct SuiteInfo {
  std::string name;
  std::string module;
  /// The module invariant the suite checks.
  std::string invariant;
};

struct SuiteResult {
  SuiteInfo info;
  bool pass = true;
  Json counts = Json::object();
  /// First violation found, null when passing.
  Json counterexample = nullptr;

  Json to_json(const SuiteConfig& cfg) const;
};

const std::vector<SuiteInfo>& suite_list();
/// Throws InputError for unknown suites or unusable restrictions.
SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg);

} // namespace bt
