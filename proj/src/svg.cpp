#include "cheeselab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cheeselab::io {

namespace {

std::string f6(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace

std::string render_plan_svg(const cheese::CheesePlan& plan) {
  double extent = plan.outer.radius * 1.1;
  for (const auto& h : plan.holes) {
    extent = std::max(extent, std::abs(h.disc.center) + h.disc.radius);
  }
  extent *= 1.05;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"720\" viewBox=\""
      << f6(-extent) << " " << f6(-extent) << " " << f6(2 * extent) << " " << f6(2 * extent)
      << "\">\n";
  out << "<g transform=\"scale(1,-1)\">\n";
  out << "<rect x=\"" << f6(-extent) << "\" y=\"" << f6(-extent) << "\" width=\""
      << f6(2 * extent) << "\" height=\"" << f6(2 * extent) << "\" fill=\"#ffffff\"/>\n";

  // the cheese body
  out << "<circle cx=\"" << f6(plan.outer.center.real()) << "\" cy=\""
      << f6(plan.outer.center.imag()) << "\" r=\"" << f6(plan.outer.radius)
      << "\" fill=\"#f4e9c9\" stroke=\"#8a7b4f\" stroke-width=\"" << f6(extent / 400) << "\"/>\n";

  // placement shells
  for (const auto& fam : plan.families) {
    if (fam.skipped()) continue;
    const double mid = fam.working_disc.radius - fam.eps_used / 2.0;
    const double width = std::max(fam.eps_used, extent / 500);
    out << "<circle cx=\"" << f6(fam.working_disc.center.real()) << "\" cy=\""
        << f6(fam.working_disc.center.imag()) << "\" r=\"" << f6(mid)
        << "\" fill=\"none\" stroke=\"#c9b9e8\" stroke-opacity=\"0.5\" stroke-width=\""
        << f6(width) << "\"/>\n";
  }

  // holes by provenance
  for (const auto& h : plan.holes) {
    const char* color = h.family == cheese::FamilyType::McKissick ? "#4878cf" : "#6acc65";
    const double r = std::max(h.disc.radius, extent / 600);
    out << "<circle cx=\"" << f6(h.disc.center.real()) << "\" cy=\"" << f6(h.disc.center.imag())
        << "\" r=\"" << f6(r) << "\" fill=\"" << color << "\" fill-opacity=\"0.85\"/>\n";
  }

  if (plan.mode == cheese::Mode::Thm15 && plan.lambda) {
    for (const auto& arc : plan.lambda->arcs) {
      const double a0 = arc.start;
      const double a1 = arc.end();
      const int large = arc.span > geom::kTau / 2 ? 1 : 0;
      out << "<path d=\"M " << f6(std::cos(a0)) << " " << f6(std::sin(a0)) << " A 1 1 0 " << large
          << " 1 " << f6(std::cos(a1)) << " " << f6(std::sin(a1))
          << "\" fill=\"none\" stroke=\"#d65f5f\" stroke-width=\"" << f6(extent / 120)
          << "\" stroke-linecap=\"round\"/>\n";
    }
  } else {
    out << "<circle cx=\"1\" cy=\"0\" r=\"" << f6(extent / 100)
        << "\" fill=\"#d65f5f\" stroke=\"none\"/>\n";
  }

  out << "</g>\n</svg>\n";
  return out.str();
}

std::string convergence_plot_svg(const std::vector<std::pair<int, double>>& points,
                                 const std::string& y_label) {
  const double width = 640, height = 420, ml = 70, mr = 20, mt = 24, mb = 48;
  int n_min = points.empty() ? 0 : points.front().first;
  int n_max = n_min + 1;
  double l_min = -16, l_max = 0;
  if (!points.empty()) {
    l_max = -16;
    for (const auto& [n, r] : points) {
      n_min = std::min(n_min, n);
      n_max = std::max(n_max, n);
      const double lg = std::log10(std::max(r, 1e-17));
      l_min = std::min(l_min, lg);
      l_max = std::max(l_max, lg);
    }
    if (n_max == n_min) n_max = n_min + 1;
    l_min = std::floor(l_min) - 0.5;
    l_max = std::ceil(l_max) + 0.5;
  }

  auto px = [&](double n) {
    return ml + (n - n_min) / static_cast<double>(n_max - n_min) * (width - ml - mr);
  };
  auto py = [&](double lg) {
    return height - mb - (lg - l_min) / (l_max - l_min) * (height - mt - mb);
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out << "<line x1=\"" << f6(ml) << "\" y1=\"" << f6(height - mb) << "\" x2=\"" << f6(width - mr)
      << "\" y2=\"" << f6(height - mb) << "\" stroke=\"#333\"/>\n";
  out << "<line x1=\"" << f6(ml) << "\" y1=\"" << f6(mt) << "\" x2=\"" << f6(ml) << "\" y2=\""
      << f6(height - mb) << "\" stroke=\"#333\"/>\n";

  for (int lg = static_cast<int>(std::ceil(l_min)); lg <= static_cast<int>(std::floor(l_max));
       ++lg) {
    out << "<text x=\"" << f6(ml - 8) << "\" y=\"" << f6(py(lg) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"#333\">1e" << lg << "</text>\n";
    out << "<line x1=\"" << f6(ml) << "\" y1=\"" << f6(py(lg)) << "\" x2=\"" << f6(width - mr)
        << "\" y2=\"" << f6(py(lg)) << "\" stroke=\"#dddddd\"/>\n";
  }
  for (const auto& [n, r] : points) {
    out << "<text x=\"" << f6(px(n)) << "\" y=\"" << f6(height - mb + 16)
        << "\" text-anchor=\"middle\" font-size=\"11\" fill=\"#333\">" << n << "</text>\n";
  }
  out << "<text x=\"" << f6((ml + width - mr) / 2) << "\" y=\"" << f6(height - 10)
      << "\" text-anchor=\"middle\" font-size=\"12\" fill=\"#333\">truncation n</text>\n";
  out << "<text x=\"14\" y=\"" << f6(mt - 8) << "\" font-size=\"12\" fill=\"#333\">" << y_label
      << "</text>\n";

  if (!points.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#4878cf\" stroke-width=\"1.5\" points=\"";
    for (const auto& [n, r] : points) {
      out << f6(px(n)) << "," << f6(py(std::log10(std::max(r, 1e-17)))) << " ";
    }
    out << "\"/>\n";
    for (const auto& [n, r] : points) {
      out << "<circle cx=\"" << f6(px(n)) << "\" cy=\""
          << f6(py(std::log10(std::max(r, 1e-17)))) << "\" r=\"3\" fill=\"#4878cf\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace cheeselab::io
