#include "vg/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

#include "vg/error.hpp"
#include "vg/repository.hpp"
#include "vg/scenario.hpp"

namespace vg::bench {

std::string_view to_string(Evaluator e) {
  return e == Evaluator::Annotated ? "annotated" : "checkout";
}

Evaluator parse_evaluator(std::string_view name) {
  if (name == "annotated") return Evaluator::Annotated;
  if (name == "checkout") return Evaluator::Checkout;
  throw ValidationError("unknown evaluator '" + std::string(name) +
                        "' (expected annotated or checkout)");
}

std::vector<BenchQuery> canonical_queries() {
  const std::string prologue =
      "PREFIX ex: <" + std::string(kCityNs) +
      ">\n"
      "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n"
      "PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>\n";
  const std::string q1 =
      prologue +
      "SELECT ?v WHERE { GRAPH ?v { ?st rdf:type ex:MetroStation . "
      "?st ex:accessible \"true\"^^xsd:boolean } }\n";
  const std::string q2 =
      prologue + "SELECT (MAX(?h) AS ?m) WHERE { GRAPH ?v { ex:building0 ex:height ?h } }\n";
  using query::VersionDomain;
  return {
      {"Q1", q1, VersionDomain::All},
      {"Q2-all", q2, VersionDomain::All},
      {"Q2-heads", q2, VersionDomain::Heads},
      {"P-heights", prologue + "SELECT ?b ?h WHERE { GRAPH ?v { ?b ex:height ?h } }\n",
       VersionDomain::All},
      {"P-count-per-version",
       prologue +
           "SELECT ?v (COUNT(*) AS ?n) WHERE { GRAPH ?v { ?b a ex:Building } } GROUP BY ?v\n",
       VersionDomain::All},
      {"P-head-accessible",
       prologue +
           "SELECT DISTINCT ?st WHERE { GRAPH ?v { ?st ex:accessible true } "
           "FILTER(isHead(?v)) }\n",
       VersionDomain::All},
  };
}

const BenchQuery& canonical_query(std::string_view id) {
  static const std::vector<BenchQuery> queries = canonical_queries();
  for (const BenchQuery& q : queries) {
    if (q.id == id) return q;
  }
  throw LookupError("unknown benchmark query '" + std::string(id) + "'");
}

std::vector<BenchConfig> full_matrix() {
  std::vector<BenchConfig> out;
  for (Encoding enc : {Encoding::Extension, Encoding::Interval}) {
    for (Evaluator ev : {Evaluator::Annotated, Evaluator::Checkout}) {
      for (const BenchQuery& q : canonical_queries()) out.push_back({enc, ev, q.id});
    }
  }
  return out;
}

std::string result_hash(const query::SolutionTable& table) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : query::format_results(table, query::ResultFormat::Tsv)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

struct Loaded {
  Repository repo;
  double build_ms = 0;
  StoreStats stats;
};

BenchReportRow measure(const Loaded& loaded, const BenchConfig& cfg, const BenchOptions& opt) {
  const BenchQuery& bq = canonical_query(cfg.query_id);
  query::Query q = query::parse_query(bq.text);
  std::vector<double> times;
  query::SolutionTable result;
  for (std::size_t i = 0; i < std::max<std::size_t>(opt.runs, 1); ++i) {
    auto start = Clock::now();
    result = cfg.evaluator == Evaluator::Annotated
                 ? query::eval_annotated(loaded.repo.store, loaded.repo.dag, q, bq.domain)
                 : query::eval_checkout(loaded.repo.store, loaded.repo.dag, q, bq.domain);
    times.push_back(ms_since(start));
  }
  BenchReportRow row;
  row.scenario = opt.parallel ? opt.scenario_id + "+parallel" : opt.scenario_id;
  row.encoding = cfg.encoding;
  row.evaluator = cfg.evaluator;
  row.query = cfg.query_id;
  row.build_ms = loaded.build_ms;
  row.scalar_cost_total = loaded.stats.scalar_cost_total;
  row.triples_sum_over_versions = loaded.stats.triples_sum_over_versions;
  row.latency_ms = median(std::move(times));
  row.result_hash = result_hash(result);
  return row;
}

}  // namespace

std::vector<BenchReportRow> run(const std::filesystem::path& repo,
                                const std::vector<BenchConfig>& configs,
                                const BenchOptions& options) {
  std::map<Encoding, Loaded> loaded;
  for (const BenchConfig& cfg : configs) {
    if (loaded.contains(cfg.encoding)) continue;
    auto start = Clock::now();
    Repository r = load_repository(repo, cfg.encoding);
    double build = ms_since(start);
    StoreStats stats = r.store.stats(r.dag);
    loaded.emplace(cfg.encoding, Loaded{std::move(r), build, stats});
  }

  std::vector<BenchReportRow> rows;
  if (options.parallel) {
    std::vector<std::future<BenchReportRow>> jobs;
    for (const BenchConfig& cfg : configs) {
      jobs.push_back(std::async(std::launch::async, [&, cfg] {
        return measure(loaded.at(cfg.encoding), cfg, options);
      }));
    }
    for (auto& j : jobs) rows.push_back(j.get());
  } else {
    for (const BenchConfig& cfg : configs) rows.push_back(measure(loaded.at(cfg.encoding), cfg, options));
  }

  std::map<std::string, const BenchReportRow*> reference;
  for (const BenchReportRow& row : rows) {
    auto [it, inserted] = reference.emplace(row.query, &row);
    if (!inserted && it->second->result_hash != row.result_hash) {
      const BenchReportRow& a = *it->second;
      throw BenchError("result mismatch on " + row.query + ": " + std::string(to_string(a.encoding)) +
                       "/" + std::string(to_string(a.evaluator)) + " gave " + a.result_hash + ", " +
                       std::string(to_string(row.encoding)) + "/" +
                       std::string(to_string(row.evaluator)) + " gave " + row.result_hash);
    }
  }
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      field.clear();
      record.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace

std::string format_report(const std::vector<BenchReportRow>& rows) {
  std::string out(kReportHeader);
  out += "\r\n";
  for (const BenchReportRow& r : rows) {
    out += csv_field(r.scenario) + "," + std::string(to_string(r.encoding)) + "," +
           std::string(to_string(r.evaluator)) + "," + csv_field(r.query) + "," +
           fixed3(r.build_ms) + "," + std::to_string(r.scalar_cost_total) + "," +
           std::to_string(r.triples_sum_over_versions) + "," + fixed3(r.latency_ms) + "," +
           r.result_hash + "\r\n";
  }
  return out;
}

void write_report(const std::vector<BenchReportRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RepositoryError("cannot write report " + path.string());
  out << format_report(rows);
  if (!out.flush()) throw RepositoryError("cannot write report " + path.string());
}

std::vector<BenchReportRow> read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RepositoryError("cannot read report " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto records = parse_csv(buf.str());
  if (records.empty()) throw ValidationError("report is empty");
  std::string header;
  for (std::size_t i = 0; i < records[0].size(); ++i) header += (i ? "," : "") + records[0][i];
  if (header != kReportHeader) throw ValidationError("unexpected report header");
  std::vector<BenchReportRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() != 9) throw ValidationError("report row " + std::to_string(i) + " has " +
                                             std::to_string(f.size()) + " fields");
    BenchReportRow r;
    r.scenario = f[0];
    r.encoding = parse_encoding(f[1]);
    r.evaluator = parse_evaluator(f[2]);
    r.query = f[3];
    r.build_ms = std::stod(f[4]);
    r.scalar_cost_total = std::stoull(f[5]);
    r.triples_sum_over_versions = std::stoull(f[6]);
    r.latency_ms = std::stod(f[7]);
    r.result_hash = f[8];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace vg::bench
