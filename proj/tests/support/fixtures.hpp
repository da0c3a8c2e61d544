#pragma once

// Scratch files and CLI invocation helpers shared by the CLI tests and the
// acceptance binary.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "gencert/cli.hpp"
#include "gencert/io.hpp"
#include "gencert/rng.hpp"
#include "gencert/tables.hpp"

namespace fixtures {

namespace fs = std::filesystem;

inline fs::path scratch_dir(const std::string& name) {
  const char* env = std::getenv("GENCERT_TEST_TMP");
  fs::path base = env ? fs::path(env) : fs::temp_directory_path() / "gencert_tests";
  fs::path dir = base / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult r;
  r.code = gencert::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Two-blob 2-D features with 0-1 losses of a fixed linear rule.
struct Dataset {
  gencert::SampleTable losses;
  gencert::FeatureTable features;
};

inline Dataset make_dataset(std::size_t n, std::uint64_t seed) {
  Dataset d;
  d.features.dim = 2;
  gencert::CounterRng rng(seed, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = "s" + std::to_string(i);
    const double shift = rng.bernoulli(0.5) ? 1.5 : -1.5;
    const double x = shift + rng.normal(), y = rng.normal();
    d.features.ids.push_back(id);
    d.features.values.push_back(x);
    d.features.values.push_back(y);
    d.losses.ids.push_back(id);
    d.losses.losses.push_back((x > 0) != (shift > 0) ? 1.0 : 0.0);
  }
  return d;
}

/// Cell i mod K for sample i.
inline gencert::Assignment round_robin(const std::vector<std::string>& ids, std::size_t K) {
  gencert::Assignment a;
  a.ids = ids;
  for (std::size_t i = 0; i < ids.size(); ++i) a.cells.push_back(static_cast<std::uint32_t>(i % K));
  return a;
}

inline std::string write(const fs::path& dir, const std::string& name, const std::string& content) {
  const std::string p = (dir / name).string();
  gencert::io::write_text(p, content);
  return p;
}

}  // namespace fixtures
