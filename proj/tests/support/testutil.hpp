// Shared test scaffolding: unique scratch directories and tiny fixtures.
#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>

#include "graphsim/run_config.hpp"

namespace graphsim::testing {

// Unique directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Small corpus configuration: default class structure shrunk to tiny graphs
// so corpus-level tests run in milliseconds.
inline RunConfig tiny_config(const std::filesystem::path& out, int instances = 1) {
  RunConfig c;
  c.output_dir = out;
  c.seed = 1234;
  c.verbosity = 0;
  c.grid.size_classes = {{{"S1", 10}, {"S2", 12}, {"S3", 14}, {"S4", 16}}};
  // D2 = 1.6 rather than 1.5: a 16-node preferential-attachment graph can
  // only hit density 0.9375 or 1.8125, and 1.8125 needs the wider window.
  c.grid.density_classes = {{{"D1", 1.1}, {"D2", 1.6}, {"D3", 2.0}}};
  c.instances_per_cell = instances;
  c.layout_iterations = 60;
  c.style.canvas = 128;
  return c;
}

}  // namespace graphsim::testing
