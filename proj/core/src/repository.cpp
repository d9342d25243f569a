#include "vg/repository.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vg/error.hpp"
#include "vg/ntriples.hpp"

namespace vg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kFormat = "vg-repository";
constexpr int kFormatVersion = 1;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RepositoryError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw RepositoryError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw RepositoryError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw RepositoryError("cannot write " + path.string() + ": " + ec.message());
}

std::string patch_path(VersionSeq seq) {
  return std::string(kDeltaDir) + "/" + std::to_string(seq) + ".patch";
}

json commit_to_json(const CommitMeta& c) {
  return json{{"seq", c.seq},
              {"iri", c.iri},
              {"parents", c.parents},
              {"branch", c.branch},
              {"message", c.message},
              {"author", c.author},
              {"timestamp", format_timestamp(c.timestamp)},
              {"provenance", {{"code_ref", c.provenance.code_ref}, {"tool", c.provenance.tool}}},
              {"patch", patch_path(c.seq)}};
}

template <typename T>
T field(const json& obj, const char* name, std::size_t index) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw RepositoryError("manifest commit #" + std::to_string(index) + " lacks '" + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw RepositoryError("manifest commit #" + std::to_string(index) + " has invalid '" + name +
                          "'");
  }
}

}  // namespace

bool is_repository(const fs::path& dir) { return fs::is_regular_file(dir / kManifestFile); }

void save_repository(const AnnotatedStore& store, const VersionDag& dag, const fs::path& dir) {
  if (!dag.initialized()) throw RepositoryError("cannot save an empty history");
  std::error_code ec;
  fs::create_directories(dir / kDeltaDir, ec);
  if (ec) throw RepositoryError("cannot create " + (dir / kDeltaDir).string() + ": " + ec.message());

  json commits = json::array();
  for (const CommitMeta& c : dag.commits()) {
    Delta delta = store.reconstruct_delta(dag, c.seq);
    write_file(dir / patch_path(c.seq), serialize_patch(delta, store.dictionary()));
    commits.push_back(commit_to_json(c));
  }
  json branches = json::object();
  for (const auto& [name, seq] : dag.branches()) branches[name] = seq;

  json manifest{{"format", kFormat},
                {"format_version", kFormatVersion},
                {"branches", branches},
                {"commits", commits}};
  write_file(dir / kManifestFile, manifest.dump(2) + "\n");
}

Repository load_repository(const fs::path& dir, Encoding encoding) {
  if (!is_repository(dir)) {
    throw RepositoryError("no " + std::string(kManifestFile) + " in " + dir.string());
  }
  json manifest;
  try {
    manifest = json::parse(read_file(dir / kManifestFile));
  } catch (const json::exception& e) {
    throw RepositoryError("malformed manifest: " + std::string(e.what()));
  }
  if (!manifest.is_object() || manifest.value("format", "") != kFormat) {
    throw RepositoryError("manifest is not a vg repository manifest");
  }
  if (manifest.value("format_version", 0) != kFormatVersion) {
    throw RepositoryError("unsupported manifest format_version");
  }
  if (!manifest.contains("commits") || !manifest["commits"].is_array() ||
      manifest["commits"].empty()) {
    throw RepositoryError("manifest lists no commits");
  }
  if (!manifest.contains("branches") || !manifest["branches"].is_object() ||
      !manifest["branches"].contains(kDefaultBranch)) {
    throw RepositoryError("manifest branch map lacks 'main'");
  }

  Repository repo(encoding);
  std::size_t index = 0;
  for (const json& c : manifest["commits"]) {
    if (!c.is_object()) throw RepositoryError("manifest commit entry is not an object");
    auto seq = field<VersionSeq>(c, "seq", index);
    if (seq != index) {
      throw RepositoryError("commit seqs are not dense: expected " + std::to_string(index) +
                            ", found " + std::to_string(seq));
    }
    if (field<std::string>(c, "iri", index) != version_iri(seq)) {
      throw RepositoryError("commit " + std::to_string(seq) + " has a non-canonical iri");
    }
    auto parents = field<std::vector<VersionSeq>>(c, "parents", index);
    for (VersionSeq p : parents) {
      if (p >= seq) {
        throw RepositoryError("commit " + std::to_string(seq) + " lists parent " +
                              std::to_string(p) + " that is not older");
      }
    }
    if ((seq == 0) != parents.empty()) {
      throw RepositoryError("exactly the first commit must have no parents");
    }
    auto branch = field<std::string>(c, "branch", index);
    CommitInfo info;
    info.message = field<std::string>(c, "message", index);
    info.author = field<std::string>(c, "author", index);
    try {
      info.timestamp = parse_timestamp(field<std::string>(c, "timestamp", index));
    } catch (const ValidationError& e) {
      throw RepositoryError("commit " + std::to_string(seq) + ": " + e.what());
    }
    auto prov = field<json>(c, "provenance", index);
    info.provenance.code_ref = field<std::string>(prov, "code_ref", index);
    info.provenance.tool = field<std::string>(prov, "tool", index);

    fs::path patch = dir / field<std::string>(c, "patch", index);
    if (!fs::is_regular_file(patch)) throw RepositoryError("missing patch file " + patch.string());
    try {
      Delta delta = parse_patch(read_file(patch), repo.store.dictionary());
      if (!parents.empty() && !repo.dag.has_branch(branch)) {
        repo.dag.create_branch(branch, parents.front());
      }
      repo.store.apply_commit(repo.dag, parents, branch, delta, info);
    } catch (const RepositoryError&) {
      throw;
    } catch (const Error& e) {
      throw RepositoryError(patch.string() + ": " + e.what());
    }
    ++index;
  }

  for (const auto& [name, value] : manifest["branches"].items()) {
    if (!value.is_number_unsigned() || value.get<VersionSeq>() >= repo.dag.size()) {
      throw RepositoryError("branch '" + name + "' points at an unknown commit");
    }
    repo.dag.set_head(name, value.get<VersionSeq>());
  }
  return repo;
}

}  // namespace vg
