#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vg/query.hpp"
#include "vg/version_set.hpp"

namespace vg::bench {

enum class Evaluator { Annotated, Checkout };
std::string_view to_string(Evaluator e);
Evaluator parse_evaluator(std::string_view name);

struct BenchQuery {
  std::string id;
  std::string text;
  query::VersionDomain domain = query::VersionDomain::All;
};

// Q1 (accessible metro station), Q2-all / Q2-heads (maximum building height)
// and pattern-only microqueries, all over the generated city vocabulary.
std::vector<BenchQuery> canonical_queries();
const BenchQuery& canonical_query(std::string_view id);

struct BenchConfig {
  Encoding encoding = Encoding::Extension;
  Evaluator evaluator = Evaluator::Annotated;
  std::string query_id;
};

// Every encoding x evaluator x canonical query.
std::vector<BenchConfig> full_matrix();

struct BenchReportRow {
  std::string scenario;
  Encoding encoding = Encoding::Extension;
  Evaluator evaluator = Evaluator::Annotated;
  std::string query;
  double build_ms = 0;
  std::size_t scalar_cost_total = 0;
  std::size_t triples_sum_over_versions = 0;
  double latency_ms = 0;
  std::string result_hash;
};

struct BenchOptions {
  std::string scenario_id = "repo";
  std::size_t runs = 3;  // latency is the median over this many runs
  bool parallel = false;
};

// Loads the repository once per encoding used, runs every configuration and
// checks that each query hashes identically everywhere. Throws BenchError on
// a mismatch.
std::vector<BenchReportRow> run(const std::filesystem::path& repo,
                                const std::vector<BenchConfig>& configs,
                                const BenchOptions& options = {});

// 64-bit FNV-1a of the TSV rendering, as 16 hex digits.
std::string result_hash(const query::SolutionTable& table);

inline constexpr std::string_view kReportHeader =
    "scenario,encoding,evaluator,query,build_ms,scalar_cost_total,triples_sum_over_versions,"
    "latency_ms,result_hash";

std::string format_report(const std::vector<BenchReportRow>& rows);
void write_report(const std::vector<BenchReportRow>& rows, const std::filesystem::path& path);
std::vector<BenchReportRow> read_report(const std::filesystem::path& path);

}  // namespace vg::bench
