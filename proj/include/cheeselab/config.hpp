#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cheeselab/cheese.hpp"

namespace cheeselab::io {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string file, int line, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
        file_name(std::move(file)),
        line_number(line) {}
  std::string file_name;
  int line_number;
};

struct RunConfig {
  cheese::Mode mode = cheese::Mode::Thm14;
  int covers = 12;
  double budget = 1.0;
  int discs_per_family = 5;
  double s_min = 0.02;
  double mesh = 1.0;
  std::vector<std::pair<double, double>> rho_pairs = {{0.0, 1.0}};
  std::vector<double> nu = {0.0, 1.0, 3.0};
  std::vector<int> truncations = {5, 10};
  double quad_tol = 1e-10;
  double pass_tol = 1e-8;
  double cole_tol = 1e-12;
  double rho_max = 6.0;
  uint64_t seed = 1;
  std::string out_dir = "out";

  cheese::BuildOptions build_options() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& file_name);

}  // namespace cheeselab::io
