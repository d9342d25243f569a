#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "vg/repository.hpp"

namespace vg::bench {

inline constexpr std::string_view kCityNs = "http://example.org/city/";

// Synthetic evolving city: buildings with a height, metro stations with an
// accessibility flag, edited commit by commit on a branching history.
struct ScenarioParams {
  std::size_t buildings = 50;
  std::size_t stations = 8;
  std::size_t versions = 20;
  // Per commit: probability of working on a side branch instead of main.
  double branch_prob = 0.2;
  // Fraction of the graph's triples changed per commit.
  double churn = 0.05;
  std::uint64_t seed = 42;

  // Throws ValidationError on out-of-range values.
  void validate() const;
  // Stable identifier used in reports, e.g. "s42-b50-st8-v20-bp0.2-c0.05".
  std::string id() const;
};

// Number of attribute edits applied by each non-root commit.
std::size_t edits_per_commit(const ScenarioParams& params);

// Builds the history in memory. Same parameters give the same history.
Repository generate_repository(const ScenarioParams& params,
                               Encoding encoding = Encoding::Extension);

// Builds the history and writes it as a repository directory.
Repository generate(const ScenarioParams& params, const std::filesystem::path& outdir);

}  // namespace vg::bench
