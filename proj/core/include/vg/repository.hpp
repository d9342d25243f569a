#pragma once

#include <filesystem>

#include "vg/store.hpp"
#include "vg/version_dag.hpp"

namespace vg {

// On disk a repository is a directory holding `manifest.json` (commit
// metadata and branch heads) and one `deltas/<seq>.patch` per commit.
// Annotations are never persisted; loading replays the patches.
struct Repository {
  AnnotatedStore store;
  VersionDag dag;

  explicit Repository(Encoding encoding = Encoding::Extension) : store(encoding) {}
};

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kDeltaDir = "deltas";

Repository load_repository(const std::filesystem::path& dir,
                           Encoding encoding = Encoding::Extension);

void save_repository(const AnnotatedStore& store, const VersionDag& dag,
                     const std::filesystem::path& dir);

inline void save_repository(const Repository& repo, const std::filesystem::path& dir) {
  save_repository(repo.store, repo.dag, dir);
}

bool is_repository(const std::filesystem::path& dir);

}  // namespace vg
