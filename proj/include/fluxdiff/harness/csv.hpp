#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "fluxdiff/errors.hpp"

namespace fluxdiff::harness {

inline constexpr const char* kOutputDirEnv = "FLUXDIFF_OUTPUT_DIR";

inline std::filesystem::path output_path(const std::string& dir, const std::string& name) {
  std::filesystem::path d(dir.empty() ? "." : dir);
  std::error_code ec;
  std::filesystem::create_directories(d, ec);
  if (ec) throw Error("cannot create output directory '" + d.string() + "': " + ec.message());
  return d / name;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw Error("cannot write '" + path.string() + "'");
    out_ << header << '\n';
  }

  template <typename... T>
  void row(const T&... values) {
    std::ostringstream line;
    line << std::setprecision(17);
    bool first = true;
    ((line << (first ? "" : ",") << values, first = false), ...);
    out_ << line.str() << '\n';
    if (!out_) throw Error("write failed for '" + path_.string() + "'");
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace fluxdiff::harness
