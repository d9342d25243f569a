#include "cli.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "vg/error.hpp"
#include "vg/harness.hpp"
#include "vg/ntriples.hpp"
#include "vg/query.hpp"
#include "vg/repository.hpp"
#include "vg/scenario.hpp"

namespace vg::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exclusive access to a repository directory for the life of the process.
class RepoLock {
 public:
  explicit RepoLock(const fs::path& dir, bool create = false) : path_(dir / ".vglock") {
    if (create) {
      std::error_code ec;
      fs::create_directories(dir, ec);
    }
    if (!fs::is_directory(dir)) throw RepositoryError("no repository at " + dir.string());
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0 && errno == EEXIST) {
      throw RepositoryError("repository " + dir.string() + " is locked by another process (" +
                            path_.string() + ")");
    }
    if (fd_ < 0) {
      throw RepositoryError("cannot create " + path_.string() + ": " + std::strerror(errno));
    }
  }
  ~RepoLock() {
    ::close(fd_);
    std::error_code ec;
    fs::remove(path_, ec);
  }
  RepoLock(const RepoLock&) = delete;
  RepoLock& operator=(const RepoLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RepositoryError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw RepositoryError("cannot write " + path.string());
}

struct MetaFlags {
  std::string message;
  std::string author;
  std::string code_ref;
  std::string tool;
  std::string timestamp;

  void add_to(CLI::App* cmd, bool message_required) {
    auto* m = cmd->add_option("-m,--message", message, "Commit message");
    if (message_required) m->required();
    cmd->add_option("--author", author, "Author (default: $USER)");
    cmd->add_option("--code-ref", code_ref, "Reference to the code that produced the data");
    cmd->add_option("--tool", tool, "Tool that produced the data");
    cmd->add_option("--timestamp", timestamp, "UTC time, YYYY-MM-DDTHH:MM:SSZ (default: now)");
  }

  CommitInfo info(const std::string& default_message) const {
    CommitInfo out;
    out.message = message.empty() ? default_message : message;
    if (!author.empty()) {
      out.author = author;
    } else if (const char* user = std::getenv("USER")) {
      out.author = user;
    } else {
      out.author = "unknown";
    }
    out.provenance = {code_ref, tool};
    out.timestamp = timestamp.empty()
                        ? std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now())
                        : parse_timestamp(timestamp);
    return out;
  }
};

struct Options {
  std::string repo = ".";
  std::string encoding = "extension";

  MetaFlags meta;
  std::string patch;
  std::string branch = std::string(kDefaultBranch);
  std::vector<VersionSeq> parents;
  bool permissive = false;

  std::string name;
  std::optional<VersionSeq> at;
  VersionSeq from = 0;
  VersionSeq version = 0;
  std::string out_file;

  std::string query_file;
  std::string query_inline;
  std::string evaluator = "annotated";
  std::string versions = "all";
  std::string format = "tsv";

  bench::ScenarioParams scenario;
  std::string report;
  std::string workdir;
  std::size_t runs = 3;
  bool parallel = false;
  bool use_repo = false;
};

Encoding encoding_of(const Options& o) { return parse_encoding(o.encoding); }

ApplyOptions apply_options(const Options& o, std::ostream& err) {
  ApplyOptions a;
  a.strict = !o.permissive;
  a.warn = [&err](std::string_view msg) { err << "warning: " << msg << "\n"; };
  return a;
}

int cmd_init(const Options& o, std::ostream& out, std::ostream& err) {
  RepoLock lock(o.repo, true);
  if (is_repository(o.repo)) throw RepositoryError(o.repo + " is already a repository");
  Repository repo(encoding_of(o));
  Delta delta = parse_patch(read_text(o.patch), repo.store.dictionary());
  VersionSeq v = repo.store.apply_commit(repo.dag, {}, kDefaultBranch, delta,
                                         o.meta.info("initial commit"), apply_options(o, err));
  save_repository(repo, o.repo);
  out << "initialized " << o.repo << " at " << version_iri(v) << "\n";
  return kOk;
}

int cmd_commit(const Options& o, std::ostream& out, std::ostream& err) {
  RepoLock lock(o.repo);
  Repository repo = load_repository(o.repo, encoding_of(o));
  std::vector<VersionSeq> parents = o.parents;
  if (parents.empty()) parents.push_back(repo.dag.head(o.branch));
  Delta delta = parse_patch(read_text(o.patch), repo.store.dictionary());
  VersionSeq v = repo.store.apply_commit(repo.dag, parents, o.branch, delta, o.meta.info(""),
                                         apply_options(o, err));
  save_repository(repo, o.repo);
  out << "committed " << version_iri(v) << " on " << o.branch << "\n";
  return kOk;
}

int cmd_branch(const Options& o, std::ostream& out, std::ostream&) {
  RepoLock lock(o.repo);
  Repository repo = load_repository(o.repo, encoding_of(o));
  if (o.name.empty()) {
    for (const auto& [name, seq] : repo.dag.branches()) out << name << "\t" << seq << "\n";
    return kOk;
  }
  VersionSeq at = o.at.value_or(repo.dag.head(kDefaultBranch));
  repo.dag.create_branch(o.name, at);
  save_repository(repo, o.repo);
  out << "created branch " << o.name << " at " << version_iri(at) << "\n";
  return kOk;
}

int cmd_merge(const Options& o, std::ostream& out, std::ostream& err) {
  RepoLock lock(o.repo);
  Repository repo = load_repository(o.repo, encoding_of(o));
  VersionSeq head = repo.dag.head(o.branch);
  repo.dag.at(o.from);
  if (head == o.from) throw StateError("cannot merge a version into itself");
  Delta delta;
  if (!o.patch.empty()) delta = parse_patch(read_text(o.patch), repo.store.dictionary());
  std::string message = "merge " + std::to_string(o.from) + " into " + o.branch;
  VersionSeq v = repo.store.apply_commit(repo.dag, {head, o.from}, o.branch, delta,
                                         o.meta.info(message), apply_options(o, err));
  save_repository(repo, o.repo);
  out << "merged " << version_iri(o.from) << " into " << o.branch << " as " << version_iri(v)
      << "\n";
  return kOk;
}

int cmd_checkout(const Options& o, std::ostream& out, std::ostream&) {
  RepoLock lock(o.repo);
  Repository repo = load_repository(o.repo, encoding_of(o));
  auto triples = repo.store.materialize(repo.dag, o.version);
  std::string text = serialize_ntriples(triples, repo.store.dictionary());
  if (o.out_file.empty()) {
    out << text;
  } else {
    write_text(o.out_file, text);
  }
  return kOk;
}

int cmd_query(const Options& o, std::ostream& out, std::ostream&) {
  if (o.query_file.empty() == o.query_inline.empty()) {
    throw UsageError("query needs exactly one of --file or --inline");
  }
  std::string text = o.query_inline.empty() ? read_text(o.query_file) : o.query_inline;
  query::Query q = query::parse_query(text);
  RepoLock lock(o.repo);
  Repository repo = load_repository(o.repo, encoding_of(o));
  auto domain = query::parse_domain(o.versions);
  auto table = bench::parse_evaluator(o.evaluator) == bench::Evaluator::Annotated
                   ? query::eval_annotated(repo.store, repo.dag, q, domain)
                   : query::eval_checkout(repo.store, repo.dag, q, domain);
  out << query::format_results(table, query::parse_format(o.format));
  return kOk;
}

int cmd_log(const Options& o, std::ostream& out, std::ostream&) {
  RepoLock lock(o.repo);
  Repository repo = load_repository(o.repo, encoding_of(o));
  const auto& commits = repo.dag.commits();
  for (auto it = commits.rbegin(); it != commits.rend(); ++it) {
    const CommitMeta& c = *it;
    out << "commit " << c.seq << " " << c.iri << "\n";
    out << "Parents: ";
    for (std::size_t i = 0; i < c.parents.size(); ++i) out << (i ? " " : "") << c.parents[i];
    out << "\nBranch: " << c.branch << "\n";
    out << "Author: " << c.author << "\n";
    out << "Date: " << format_timestamp(c.timestamp) << "\n";
    out << "Code-Ref: " << c.provenance.code_ref << "\n";
    out << "Tool: " << c.provenance.tool << "\n\n";
    out << "    " << c.message << "\n\n";
  }
  return kOk;
}

int cmd_stats(const Options& o, std::ostream& out, std::ostream&) {
  RepoLock lock(o.repo);
  Repository repo = load_repository(o.repo, encoding_of(o));
  StoreStats s = repo.store.stats(repo.dag);
  out << "encoding: " << to_string(repo.store.encoding()) << "\n";
  out << "versions: " << s.versions << "\n";
  out << "branches: " << repo.dag.branches().size() << "\n";
  out << "distinct_triples: " << s.distinct_triples << "\n";
  out << "triples_sum_over_versions: " << s.triples_sum_over_versions << "\n";
  out << "scalar_cost_total: " << s.scalar_cost_total << "\n";
  out << "terms: " << repo.store.dictionary().size() << "\n";
  return kOk;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  fs::path repo_dir;
  std::optional<fs::path> scratch;
  std::string scenario_id;
  if (o.use_repo) {
    repo_dir = o.repo;
    scenario_id = fs::path(o.repo).filename().string();
    if (scenario_id.empty() || scenario_id == ".") scenario_id = "repo";
  } else {
    o.scenario.validate();
    if (o.workdir.empty()) {
      scratch = fs::temp_directory_path() /
                ("vg-bench-" + std::to_string(::getpid()) + "-" + o.scenario.id());
      repo_dir = *scratch;
    } else {
      repo_dir = o.workdir;
    }
    bench::generate(o.scenario, repo_dir);
    scenario_id = o.scenario.id();
    err << "generated " << scenario_id << " in " << repo_dir.string() << "\n";
  }
  std::optional<RepoLock> lock;
  lock.emplace(repo_dir, true);
  bench::BenchOptions bo;
  bo.scenario_id = scenario_id;
  bo.runs = o.runs;
  bo.parallel = o.parallel;
  auto rows = bench::run(repo_dir, bench::full_matrix(), bo);
  lock.reset();
  if (scratch) {
    std::error_code ec;
    fs::remove_all(*scratch, ec);
  }
  if (o.report.empty()) {
    out << bench::format_report(rows);
  } else {
    bench::write_report(rows, o.report);
    out << "wrote " << rows.size() << " rows to " << o.report << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Versioned RDF store with cross-version queries", "vg"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--repo", o.repo, "Repository directory")->capture_default_str();
  app.add_option("--encoding", o.encoding, "Version-set encoding")
      ->check(CLI::IsMember({"extension", "interval"}))
      ->capture_default_str();

  auto* init = app.add_subcommand("init", "Create a repository with a root commit");
  init->add_option("--patch", o.patch, "Patch file with the root additions")->required();
  o.meta.add_to(init, false);

  auto* commit = app.add_subcommand("commit", "Apply a patch as a new commit");
  commit->add_option("--branch", o.branch, "Branch to commit on")->capture_default_str();
  commit->add_option("--patch", o.patch, "Patch file")->required();
  commit->add_option("--parent", o.parents, "Parent version (repeatable; default: branch head)");
  commit->add_flag("--permissive", o.permissive, "Ignore removals of absent triples");
  o.meta.add_to(commit, true);

  auto* branch = app.add_subcommand("branch", "Create a branch, or list branches");
  branch->add_option("--name", o.name, "New branch name");
  branch->add_option("--at", o.at, "Version to branch from (default: head of main)");

  auto* merge = app.add_subcommand("merge", "Merge a version into a branch");
  merge->add_option("--branch", o.branch, "Target branch")->capture_default_str();
  merge->add_option("--from", o.from, "Version to merge")->required();
  merge->add_option("--patch", o.patch, "Optional resolution patch");
  merge->add_flag("--permissive", o.permissive, "Ignore removals of absent triples");
  o.meta.add_to(merge, false);

  auto* checkout = app.add_subcommand("checkout", "Write one version as N-Triples");
  checkout->add_option("--version", o.version, "Version seq")->required();
  checkout->add_option("--out", o.out_file, "Output file (default: stdout)");

  auto* query = app.add_subcommand("query", "Evaluate a query across versions");
  query->add_option("--file", o.query_file, "Query file");
  query->add_option("--inline", o.query_inline, "Query text");
  query->add_option("--evaluator", o.evaluator)
      ->check(CLI::IsMember({"annotated", "checkout"}))
      ->capture_default_str();
  query->add_option("--versions", o.versions)
      ->check(CLI::IsMember({"all", "heads"}))
      ->capture_default_str();
  query->add_option("--format", o.format)->check(CLI::IsMember({"tsv", "csv"}))->capture_default_str();

  auto* log = app.add_subcommand("log", "Print commit metadata, newest first");
  auto* stats = app.add_subcommand("stats", "Print storage statistics");

  auto* bench = app.add_subcommand("bench", "Generate a scenario and benchmark it");
  bench->add_option("--buildings", o.scenario.buildings)->capture_default_str();
  bench->add_option("--stations", o.scenario.stations)->capture_default_str();
  bench->add_option("--versions", o.scenario.versions)->capture_default_str();
  bench->add_option("--branch-prob", o.scenario.branch_prob)->capture_default_str();
  bench->add_option("--churn", o.scenario.churn)->capture_default_str();
  bench->add_option("--seed", o.scenario.seed)->capture_default_str();
  bench->add_option("--runs", o.runs, "Timed runs per configuration")->capture_default_str();
  bench->add_option("--report", o.report, "CSV report path (default: stdout)");
  bench->add_option("--workdir", o.workdir, "Where to write the generated repository");
  bench->add_flag("--use-repo", o.use_repo, "Benchmark --repo instead of generating");
  bench->add_flag("--parallel", o.parallel, "Run configurations concurrently");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "vg: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (init->parsed()) return cmd_init(o, out, err);
    if (commit->parsed()) return cmd_commit(o, out, err);
    if (branch->parsed()) return cmd_branch(o, out, err);
    if (merge->parsed()) return cmd_merge(o, out, err);
    if (checkout->parsed()) return cmd_checkout(o, out, err);
    if (query->parsed()) return cmd_query(o, out, err);
    if (log->parsed()) return cmd_log(o, out, err);
    if (stats->parsed()) return cmd_stats(o, out, err);
    if (bench->parsed()) return cmd_bench(o, out, err);
  } catch (const UsageError& e) {
    err << "vg: " << e.what() << "\n";
    return kUsage;
  } catch (const QueryError& e) {
    err << "vg: query error: " << e.what() << "\n";
    return kQuery;
  } catch (const std::exception& e) {
    err << "vg: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}

}  // namespace vg::cli
