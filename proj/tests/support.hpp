#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

#include "pred/lm/toy_provider.hpp"
#include "pred/lm/vocab.hpp"

namespace pred::testing {

namespace fs = std::filesystem;

inline fs::path data_dir() { return fs::path(PRED_TEST_DATA); }
inline fs::path toy_dir() { return fs::path(PRED_TOY_DIR); }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("pred_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

  fs::path write(const std::string& name, const std::string& content) const {
    const fs::path p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::shared_ptr<const lm::TokenVocab> make_vocab(std::vector<std::string> tokens,
                                                        std::optional<std::string> eos = std::nullopt) {
  return std::make_shared<const lm::TokenVocab>(std::move(tokens), std::move(eos));
}

inline lm::Segmentation make_segmentation(std::vector<std::string> tokens,
                                          std::optional<std::string> eos = std::nullopt,
                                          std::map<std::string, std::vector<lm::TokenId>> table = {}) {
  return lm::Segmentation(make_vocab(std::move(tokens), std::move(eos)), std::move(table));
}

// Bigram provider with explicit rows; rows not listed fall back to uniform.
inline lm::ToyProvider bigram(lm::Segmentation seg,
                              std::map<std::vector<lm::TokenId>, std::vector<double>> rows) {
  lm::ToyProvider::Options opt;
  opt.order = 2;
  opt.rows = std::move(rows);
  return lm::ToyProvider(std::move(seg), std::move(opt));
}

}  // namespace pred::testing
