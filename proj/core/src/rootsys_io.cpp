#include "qibg/rootsys_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qibg/exactmat.hpp"

namespace qibg {

namespace {

nlohmann::json vector_json(const RationalVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

double dot_d(const RationalVector& a, const RationalVector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].get_d() * b[i].get_d();
  return s;
}

}  // namespace

nlohmann::json to_json(const RootSystem& rs) {
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& r : rs.roots()) roots.push_back(vector_json(r));
  return {{"family", to_string(rs.family())},
          {"rank", rs.rank()},
          {"ambient_dim", rs.ambient_dim()},
          {"roots", std::move(roots)},
          {"simple_roots", rs.simple_roots()}};
}

nlohmann::json to_json(const Projection& p) { return {{"u", vector_json(p.u)}, {"w", vector_json(p.w)}}; }

nlohmann::json to_json(const RootSystem& rs, const ClassOrdering& ordering) {
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t i = 0; i < ordering.size(); ++i) {
    nlohmann::json members = nlohmann::json::array();
    for (std::size_t r : ordering.classes[i]) members.push_back(vector_json(rs.root(r)));
    classes.push_back({{"index", i + 1}, {"angle", ordering.angles[i]}, {"roots", std::move(members)}});
  }
  return {{"system", rs.name()}, {"projection", to_json(ordering.projection)}, {"classes", std::move(classes)}};
}

nlohmann::json to_json(const InvariantReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"passed", r.all_passed()}, {"checks", std::move(checks)}};
}

std::string render_svg(const RootSystem& rs, const ClassOrdering& ordering) {
  constexpr double kSize = 480, kCenter = kSize / 2, kRadius = 200;
  double longest = 0;
  std::vector<std::pair<double, double>> tips;
  for (const auto& cls : ordering.classes) {
    const auto& r = rs.root(cls.back());
    double x = dot_d(ordering.projection.u, r), y = dot_d(ordering.projection.w, r);
    tips.emplace_back(x, y);
    longest = std::max(longest, std::hypot(x, y));
  }
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize << "\" viewBox=\"0 0 "
      << kSize << ' ' << kSize << "\">\n";
  svg << "  <title>" << rs.name() << " positive roots, clockwise classes</title>\n";
  svg << "  <line x1=\"0\" y1=\"" << kCenter << "\" x2=\"" << kSize << "\" y2=\"" << kCenter
      << "\" stroke=\"#bbb\" stroke-dasharray=\"4 4\"/>\n";
  for (std::size_t i = 0; i < tips.size(); ++i) {
    double s = longest > 0 ? kRadius / longest : 0;
    double x = kCenter + tips[i].first * s, y = kCenter - tips[i].second * s;
    svg << "  <line x1=\"" << kCenter << "\" y1=\"" << kCenter << "\" x2=\"" << x << "\" y2=\"" << y
        << "\" stroke=\"#1f5fa8\" stroke-width=\"1.5\"/>\n";
    svg << "  <text x=\"" << x << "\" y=\"" << y - 4 << "\" font-size=\"11\" text-anchor=\"middle\">" << i + 1
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace qibg
