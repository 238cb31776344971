// End-to-end sweep of the full preset catalog: every experiment must run
// to completion (positivity intact, no solver abort) and produce a
// self-consistent manifest.

#include <filesystem>

#include "gtest/gtest.h"
#include "vgcg/harness.hpp"

namespace vgcg {
namespace {

namespace fs = std::filesystem;

TEST(PresetSweep, EveryPresetRunsToCompletion) {
  const fs::path out = fs::temp_directory_path() / "vgcg_preset_sweep";
  fs::remove_all(out);
  std::vector<Experiment> exps;
  for (const std::string& name : preset_names()) {
    Experiment e = preset(name);
    e.out_dir = out.string();
    exps.push_back(std::move(e));
  }
  const std::vector<Manifest> ms = batch(exps, 4);
  ASSERT_EQ(ms.size(), exps.size());
  for (size_t i = 0; i < ms.size(); ++i) {
    EXPECT_TRUE(ms[i].ok) << ms[i].name << ": " << ms[i].error;
    EXPECT_TRUE(fs::exists(out / ms[i].name / "manifest.json")) << ms[i].name;
    for (const std::string& f : ms[i].files) {
      EXPECT_TRUE(fs::exists(out / ms[i].name / f)) << ms[i].name << "/" << f;
    }
  }
}

}  // namespace
}  // namespace vgcg
