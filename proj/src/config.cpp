#include "cheeselab/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cheeselab::io {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& file, int line, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError(file, line, "expected a number, got '" + text + "'");
  }
  return v;
}

long parse_long(const std::string& file, int line, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError(file, line, "expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

cheese::BuildOptions RunConfig::build_options() const {
  cheese::BuildOptions opt;
  opt.mode = mode;
  opt.covers = covers;
  opt.budget = budget;
  opt.discs_per_family = discs_per_family;
  opt.s_min = s_min;
  opt.mesh = mesh;
  opt.rho_max = rho_max;
  opt.seed = seed;
  return opt;
}

RunConfig parse_config(const std::string& text, const std::string& file_name) {
  RunConfig cfg;
  bool saw_mode = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(file_name, line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(file_name, line_no, "empty value for '" + key + "'");

    if (key == "mode") {
      if (value == "thm14") {
        cfg.mode = cheese::Mode::Thm14;
      } else if (value == "thm15") {
        cfg.mode = cheese::Mode::Thm15;
      } else {
        throw ConfigError(file_name, line_no, "mode must be thm14 or thm15");
      }
      saw_mode = true;
    } else if (key == "covers") {
      cfg.covers = static_cast<int>(parse_long(file_name, line_no, value));
    } else if (key == "budget") {
      cfg.budget = parse_double(file_name, line_no, value);
    } else if (key == "discs_per_family") {
      cfg.discs_per_family = static_cast<int>(parse_long(file_name, line_no, value));
    } else if (key == "s_min") {
      cfg.s_min = parse_double(file_name, line_no, value);
    } else if (key == "mesh") {
      cfg.mesh = parse_double(file_name, line_no, value);
    } else if (key == "rho_pairs") {
      cfg.rho_pairs.clear();
      std::string rest = value;
      while (true) {
        const auto open = rest.find('(');
        if (open == std::string::npos) break;
        const auto comma = rest.find(',', open);
        const auto close = rest.find(')', open);
        if (comma == std::string::npos || close == std::string::npos || comma > close) {
          throw ConfigError(file_name, line_no, "rho_pairs entries look like (rho1,rho2)");
        }
        const double r1 =
            parse_double(file_name, line_no, trim(rest.substr(open + 1, comma - open - 1)));
        const double r2 =
            parse_double(file_name, line_no, trim(rest.substr(comma + 1, close - comma - 1)));
        cfg.rho_pairs.emplace_back(r1, r2);
        rest = rest.substr(close + 1);
      }
      if (cfg.rho_pairs.empty()) {
        throw ConfigError(file_name, line_no, "rho_pairs needs at least one (rho1,rho2) pair");
      }
    } else if (key == "nu") {
      cfg.nu.clear();
      for (const auto& tok : split_ws(value)) {
        cfg.nu.push_back(parse_double(file_name, line_no, tok));
      }
    } else if (key == "truncations") {
      cfg.truncations.clear();
      for (const auto& tok : split_ws(value)) {
        cfg.truncations.push_back(static_cast<int>(parse_long(file_name, line_no, tok)));
      }
    } else if (key == "quad_tol") {
      cfg.quad_tol = parse_double(file_name, line_no, value);
    } else if (key == "pass_tol") {
      cfg.pass_tol = parse_double(file_name, line_no, value);
    } else if (key == "cole_tol") {
      cfg.cole_tol = parse_double(file_name, line_no, value);
    } else if (key == "rho_max") {
      cfg.rho_max = parse_double(file_name, line_no, value);
    } else if (key == "seed") {
      cfg.seed = static_cast<uint64_t>(parse_long(file_name, line_no, value));
    } else if (key == "out") {
      cfg.out_dir = value;
    } else {
      throw ConfigError(file_name, line_no, "unknown key '" + key + "'");
    }
  }

  if (!saw_mode) throw ConfigError(file_name, line_no, "missing required key 'mode'");
  if (cfg.covers < 1) throw ConfigError(file_name, 0, "covers must be >= 1");
  if (!(cfg.budget > 0.0)) throw ConfigError(file_name, 0, "budget must be positive");
  if (cfg.discs_per_family < 2) throw ConfigError(file_name, 0, "discs_per_family must be >= 2");
  if (!(cfg.s_min > 0.0)) throw ConfigError(file_name, 0, "s_min must be positive");
  if (!(cfg.mesh > 0.0)) throw ConfigError(file_name, 0, "mesh must be positive");
  if (!(cfg.quad_tol > 0.0) || !(cfg.pass_tol > 0.0) || !(cfg.cole_tol > 0.0)) {
    throw ConfigError(file_name, 0, "tolerances must be positive");
  }
  if (cfg.rho_max < 0.0) throw ConfigError(file_name, 0, "rho_max must be >= 0");
  for (const auto& [r1, r2] : cfg.rho_pairs) {
    if (!(r1 >= 0.0) || !(r1 < r2)) {
      throw ConfigError(file_name, 0, "each rho pair needs 0 <= rho1 < rho2");
    }
  }
  for (int n : cfg.truncations) {
    if (n < 1) throw ConfigError(file_name, 0, "truncations must be >= 1");
  }
  if (cfg.truncations.empty()) throw ConfigError(file_name, 0, "truncations must be nonempty");
  if (cfg.nu.empty()) throw ConfigError(file_name, 0, "nu list must be nonempty");
  for (double v : cfg.nu) {
    if (v < 0.0) throw ConfigError(file_name, 0, "nu values must be >= 0");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace cheeselab::io
