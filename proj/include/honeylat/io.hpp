#pragma once

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace honeylat {

/// Full-precision CSV writer: 17 significant digits per numeric cell.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
    for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }
  void row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i)
      out_ << (i ? "," : "") << std::setprecision(17) << values[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

/// Run manifest: inputs, version, timings.
class Manifest {
 public:
  explicit Manifest(std::string command) {
    j_["command"] = std::move(command);
    j_["version"] = "0.1.0";
    start_ = std::chrono::steady_clock::now();
  }
  template <class T>
  void input(const std::string& key, const T& v) {
    j_["inputs"][key] = v;
  }
  void output(const std::string& path) { j_["outputs"].push_back(path); }
  void write(const std::string& path) {
    j_["elapsed_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ofstream out(path);
    out << j_.dump(2) << "\n";
  }

 private:
  nlohmann::json j_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace honeylat
