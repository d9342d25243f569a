#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "random_instances.hpp"
#include "vg/error.hpp"
#include "vg/ntriples.hpp"
#include "vg/repository.hpp"

using namespace vg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("vg_repo_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Repository, RoundTripRandom) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    auto inst = fixtures::random_instance(rng, Encoding::Extension);
    fs::path dir = scratch("rt" + std::to_string(i));
    save_repository(inst.repo, dir);
    EXPECT_TRUE(is_repository(dir));
    Repository loaded = load_repository(dir, i % 2 ? Encoding::Interval : Encoding::Extension);
    ASSERT_EQ(loaded.dag.commits(), inst.repo.dag.commits());
    ASSERT_EQ(loaded.dag.branches(), inst.repo.dag.branches());
    for (VersionSeq v = 0; v < inst.repo.dag.size(); ++v) {
      ASSERT_EQ(serialize_ntriples(loaded.store.materialize(loaded.dag, v), loaded.store.dictionary()),
                serialize_ntriples(inst.repo.store.materialize(inst.repo.dag, v),
                                   inst.repo.store.dictionary()));
    }
    // Saving the loaded copy gives identical files.
    fs::path again = scratch("rt_again" + std::to_string(i));
    save_repository(loaded, again);
    EXPECT_EQ(slurp(dir / kManifestFile), slurp(again / kManifestFile));
    fs::remove_all(dir);
    fs::remove_all(again);
  }
}

TEST(Repository, ManifestLayout) {
  std::mt19937_64 rng(32);
  auto inst = fixtures::random_instance(rng, Encoding::Extension);
  fs::path dir = scratch("layout");
  save_repository(inst.repo, dir);
  auto manifest = nlohmann::json::parse(slurp(dir / kManifestFile));
  EXPECT_EQ(manifest["format"], "vg-repository");
  EXPECT_EQ(manifest["format_version"], 1);
  ASSERT_EQ(manifest["commits"].size(), inst.repo.dag.size());
  const auto& c0 = manifest["commits"][0];
  EXPECT_EQ(c0["iri"], "urn:vg:version:0");
  EXPECT_EQ(c0["patch"], "deltas/0.patch");
  EXPECT_TRUE(fs::exists(dir / "deltas" / "0.patch"));
  EXPECT_EQ(manifest["branches"]["main"], inst.repo.dag.head("main"));
  fs::remove_all(dir);
}

TEST(Repository, MissingPatchIsNamed) {
  std::mt19937_64 rng(33);
  auto inst = fixtures::random_instance(rng, Encoding::Extension);
  fs::path dir = scratch("missing");
  save_repository(inst.repo, dir);
  fs::remove(dir / "deltas" / "2.patch");
  try {
    load_repository(dir);
    FAIL() << "expected RepositoryError";
  } catch (const RepositoryError& e) {
    EXPECT_NE(std::string(e.what()).find("2.patch"), std::string::npos) << e.what();
  }
  fs::remove_all(dir);
}

TEST(Repository, CorruptInputsAreRejected) {
  std::mt19937_64 rng(34);
  auto inst = fixtures::random_instance(rng, Encoding::Extension);
  fs::path dir = scratch("corrupt");
  save_repository(inst.repo, dir);
  std::string good = slurp(dir / kManifestFile);

  auto write_manifest = [&](const std::string& text) {
    std::ofstream(dir / kManifestFile, std::ios::binary | std::ios::trunc) << text;
  };
  write_manifest("{ not json");
  EXPECT_THROW(load_repository(dir), RepositoryError);

  auto m = nlohmann::json::parse(good);
  m["commits"][1]["parents"] = nlohmann::json::array({5});
  write_manifest(m.dump());
  EXPECT_THROW(load_repository(dir), RepositoryError);

  m = nlohmann::json::parse(good);
  m["format_version"] = 99;
  write_manifest(m.dump());
  EXPECT_THROW(load_repository(dir), RepositoryError);

  write_manifest(good);
  std::ofstream(dir / "deltas" / "1.patch", std::ios::app) << "Z garbage\n";
  try {
    load_repository(dir);
    FAIL() << "expected RepositoryError";
  } catch (const RepositoryError& e) {
    EXPECT_NE(std::string(e.what()).find("1.patch"), std::string::npos) << e.what();
  }
  EXPECT_FALSE(is_repository(dir / "nowhere"));
  EXPECT_THROW(load_repository(dir / "nowhere"), RepositoryError);
  fs::remove_all(dir);
}
