#include "cheeselab/planio.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cheeselab/util.hpp"

namespace cheeselab::io {

namespace {

using util::fmt_g17;

const char* kind_token(cheese::CoverKind k) {
  switch (k) {
    case cheese::CoverKind::NearTarget: return "near_target";
    case cheese::CoverKind::BoundaryCentered: return "boundary";
    default: return "interior";
  }
}

cheese::CoverKind parse_kind(const std::string& file, int line, const std::string& tok) {
  if (tok == "near_target") return cheese::CoverKind::NearTarget;
  if (tok == "boundary") return cheese::CoverKind::BoundaryCentered;
  if (tok == "interior") return cheese::CoverKind::Interior;
  throw ConfigError(file, line, "unknown cover kind '" + tok + "'");
}

const char* type_token(cheese::FamilyType t) {
  return t == cheese::FamilyType::McKissick ? "mckissick" : "strong_regularity";
}

cheese::FamilyType parse_type(const std::string& file, int line, const std::string& tok) {
  if (tok == "mckissick") return cheese::FamilyType::McKissick;
  if (tok == "strong_regularity") return cheese::FamilyType::StrongRegularity;
  throw ConfigError(file, line, "unknown family type '" + tok + "'");
}

double num(const std::string& file, int line, const std::string& tok) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') {
    throw ConfigError(file, line, "expected a number, got '" + tok + "'");
  }
  return v;
}

long inum(const std::string& file, int line, const std::string& tok) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0') {
    throw ConfigError(file, line, "expected an integer, got '" + tok + "'");
  }
  return v;
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string serialize_plan(const cheese::CheesePlan& plan) {
  std::ostringstream out;
  out << "# cheeselab plan\n";
  out << "format = 1\n";
  out << "mode = " << (plan.mode == cheese::Mode::Thm14 ? "thm14" : "thm15") << "\n";
  out << "budget = " << fmt_g17(plan.budget_r) << "\n";
  out << "covers_requested = " << plan.truncation_covers << "\n";
  out << "discs_per_family = " << plan.discs_per_family << "\n";
  out << "s_min = " << fmt_g17(plan.s_min) << "\n";
  out << "mesh = " << fmt_g17(plan.mesh) << "\n";
  out << "rho_max = " << fmt_g17(plan.rho_max) << "\n";
  out << "seed = " << plan.seed << "\n";
  out << "radius_sum = " << fmt_g17(plan.radius_sum()) << "\n";
  out << "outer = " << fmt_g17(plan.outer.center.real()) << " " << fmt_g17(plan.outer.center.imag())
      << " " << fmt_g17(plan.outer.radius) << "\n";
  if (plan.lambda) {
    out << "lambda_excluded = " << fmt_g17(plan.lambda->excluded_measure) << "\n";
    for (const auto& arc : plan.lambda->arcs) {
      out << "lambda_arc = " << fmt_g17(arc.start) << " " << fmt_g17(arc.span) << "\n";
    }
  }
  for (const auto& c : plan.covers) {
    out << "cover = " << c.index << " " << kind_token(c.kind) << " "
        << fmt_g17(c.disc.center.real()) << " " << fmt_g17(c.disc.center.imag()) << " "
        << fmt_g17(c.disc.radius) << "\n";
  }
  for (const auto& f : plan.families) {
    out << "family = " << type_token(f.type) << " " << f.index << " "
        << fmt_g17(f.working_disc.center.real()) << " " << fmt_g17(f.working_disc.center.imag())
        << " " << fmt_g17(f.working_disc.radius) << " " << fmt_g17(f.gamma) << " "
        << fmt_g17(f.delta) << " " << fmt_g17(f.epsilon) << " " << fmt_g17(f.eps_used) << " "
        << f.first_hole << " " << f.hole_count << " "
        << (f.skip_reason.empty() ? "-" : f.skip_reason) << "\n";
  }
  for (size_t k = 0; k < plan.holes.size(); ++k) {
    const auto& h = plan.holes[k];
    out << "hole = " << (k + 1) << " " << h.cover_index << " " << h.family_index << " "
        << type_token(h.family) << " " << fmt_g17(h.disc.center.real()) << " "
        << fmt_g17(h.disc.center.imag()) << " " << fmt_g17(h.disc.radius) << "\n";
  }
  return out.str();
}

cheese::CheesePlan parse_plan(const std::string& text, const std::string& file_name) {
  cheese::CheesePlan plan;
  plan.holes.clear();
  bool saw_mode = false, saw_outer = false;
  std::vector<geom::AngularInterval> lambda_arcs;
  bool saw_lambda = false;
  double lambda_excluded = 0.0;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos) throw ConfigError(file_name, line_no, "expected 'key = value'");
    std::string key;
    {
      std::istringstream ks(line.substr(0, eq));
      ks >> key;
    }
    const auto toks = tokens(line.substr(eq + 1));
    if (toks.empty()) throw ConfigError(file_name, line_no, "empty value for '" + key + "'");

    if (key == "format") {
      if (toks[0] != "1") throw ConfigError(file_name, line_no, "unsupported plan format");
    } else if (key == "mode") {
      if (toks[0] == "thm14") {
        plan.mode = cheese::Mode::Thm14;
      } else if (toks[0] == "thm15") {
        plan.mode = cheese::Mode::Thm15;
      } else {
        throw ConfigError(file_name, line_no, "mode must be thm14 or thm15");
      }
      saw_mode = true;
    } else if (key == "budget") {
      plan.budget_r = num(file_name, line_no, toks[0]);
    } else if (key == "covers_requested") {
      plan.truncation_covers = static_cast<int>(inum(file_name, line_no, toks[0]));
    } else if (key == "discs_per_family") {
      plan.discs_per_family = static_cast<int>(inum(file_name, line_no, toks[0]));
    } else if (key == "s_min") {
      plan.s_min = num(file_name, line_no, toks[0]);
    } else if (key == "mesh") {
      plan.mesh = num(file_name, line_no, toks[0]);
    } else if (key == "rho_max") {
      plan.rho_max = num(file_name, line_no, toks[0]);
    } else if (key == "seed") {
      plan.seed = static_cast<uint64_t>(inum(file_name, line_no, toks[0]));
    } else if (key == "radius_sum") {
      // informational; revalidated below
    } else if (key == "outer") {
      if (toks.size() != 3) throw ConfigError(file_name, line_no, "outer = re im radius");
      plan.outer = geom::Disc({num(file_name, line_no, toks[0]), num(file_name, line_no, toks[1])},
                              num(file_name, line_no, toks[2]));
      saw_outer = true;
    } else if (key == "lambda_excluded") {
      lambda_excluded = num(file_name, line_no, toks[0]);
      saw_lambda = true;
    } else if (key == "lambda_arc") {
      if (toks.size() != 2) throw ConfigError(file_name, line_no, "lambda_arc = start span");
      lambda_arcs.emplace_back(num(file_name, line_no, toks[0]), num(file_name, line_no, toks[1]));
      saw_lambda = true;
    } else if (key == "cover") {
      if (toks.size() != 5) throw ConfigError(file_name, line_no, "cover = n kind re im radius");
      cheese::CoverDisc c{static_cast<int>(inum(file_name, line_no, toks[0])),
                          geom::Disc({num(file_name, line_no, toks[2]),
                                      num(file_name, line_no, toks[3])},
                                     num(file_name, line_no, toks[4])),
                          parse_kind(file_name, line_no, toks[1])};
      plan.covers.push_back(c);
    } else if (key == "family") {
      if (toks.size() != 12) throw ConfigError(file_name, line_no, "family row needs 12 fields");
      cheese::FamilyRecord f;
      f.type = parse_type(file_name, line_no, toks[0]);
      f.index = static_cast<int>(inum(file_name, line_no, toks[1]));
      f.working_disc = geom::Disc(
          {num(file_name, line_no, toks[2]), num(file_name, line_no, toks[3])},
          num(file_name, line_no, toks[4]));
      f.gamma = num(file_name, line_no, toks[5]);
      f.delta = num(file_name, line_no, toks[6]);
      f.epsilon = num(file_name, line_no, toks[7]);
      f.eps_used = num(file_name, line_no, toks[8]);
      f.first_hole = static_cast<int>(inum(file_name, line_no, toks[9]));
      f.hole_count = static_cast<int>(inum(file_name, line_no, toks[10]));
      f.skip_reason = toks[11] == "-" ? "" : toks[11];
      plan.families.push_back(std::move(f));
    } else if (key == "hole") {
      if (toks.size() != 7) throw ConfigError(file_name, line_no, "hole row needs 7 fields");
      const size_t k = static_cast<size_t>(inum(file_name, line_no, toks[0]));
      if (k != plan.holes.size() + 1) {
        throw ConfigError(file_name, line_no, "hole rows must be consecutively numbered");
      }
      cheese::Hole h;
      h.cover_index = static_cast<int>(inum(file_name, line_no, toks[1]));
      h.family_index = static_cast<int>(inum(file_name, line_no, toks[2]));
      h.family = parse_type(file_name, line_no, toks[3]);
      h.disc = geom::Disc({num(file_name, line_no, toks[4]), num(file_name, line_no, toks[5])},
                          num(file_name, line_no, toks[6]));
      plan.holes.push_back(std::move(h));
    } else {
      throw ConfigError(file_name, line_no, "unknown key '" + key + "'");
    }
  }

  if (!saw_mode) throw ConfigError(file_name, 0, "missing mode");
  if (!saw_outer) throw ConfigError(file_name, 0, "missing outer disc");
  if (saw_lambda) {
    cheese::LambdaSet lambda;
    lambda.arcs = std::move(lambda_arcs);
    lambda.excluded_measure = lambda_excluded;
    plan.lambda = std::move(lambda);
  }
  if (plan.mode == cheese::Mode::Thm15 && !plan.lambda) {
    throw ConfigError(file_name, 0, "thm15 plan requires the surviving arc set");
  }
  // semantic invariants (budget, target clearance, winding) are the
  // verification suites' business: a loaded plan that violates them must
  // surface as failing ledger rows, not as a parse error
  return plan;
}

void save_plan(const cheese::CheesePlan& plan, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path, 0, "cannot open plan file for writing");
  out << serialize_plan(plan);
}

cheese::CheesePlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open plan file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str(), path);
}

}  // namespace cheeselab::io
