#include "aniso/verify/report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace aniso {

double InequalityReport::value(const std::string& key) const {
  for (const auto* list : {&values, &constants, &witness})
    for (const auto& [k, v] : *list)
      if (k == key) return v;
  throw std::out_of_range("InequalityReport '" + name + "': no value named '" + key + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

void write_reports_csv(std::ostream& os, const std::vector<InequalityReport>& reports) {
  os << "report,field,value\r\n";
  for (const auto& r : reports) {
    const std::string n = csv_field(r.name);
    os << n << ",samples," << r.samples << "\r\n";
    os << n << ",violations," << r.violations << "\r\n";
    os << n << ",worst_margin," << csv_number(r.worst_margin) << "\r\n";
    os << n << ",passed," << (r.passed ? 1 : 0) << "\r\n";
    for (const auto& [k, v] : r.constants) os << n << "," << csv_field("constant:" + k) << "," << csv_number(v) << "\r\n";
    for (const auto& [k, v] : r.values) os << n << "," << csv_field("value:" + k) << "," << csv_number(v) << "\r\n";
    for (const auto& [k, v] : r.witness) os << n << "," << csv_field("witness:" + k) << "," << csv_number(v) << "\r\n";
  }
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg(std::ostream& os, const SvgPlot& plot) {
  const double W = 640, H = 420, L = 70, R = 160, T = 40, B = 50;
  auto tx = [&](double v) { return plot.logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return plot.logy ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!plot.logx || x > 0) && (!plot.logy || y > 0);
  };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (usable(s.x[i], s.y[i])) {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i]));
        y1 = std::max(y1, ty(s.y[i]));
      }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

  os << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)", W, H, W, H)
     << "\n";
  os << fmt::format(R"(<rect width="{}" height="{}" fill="white"/>)", W, H) << "\n";
  os << fmt::format(R"(<text x="{}" y="22" font-size="15" text-anchor="middle">{}</text>)", (W - R + L) / 2,
                    escape_xml(plot.title))
     << "\n";
  os << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/>)", L, H - B, W - R) << "\n";
  os << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/>)", L, H - B, T) << "\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    const double vx = plot.logx ? std::pow(10.0, fx) : fx, vy = plot.logy ? std::pow(10.0, fy) : fy;
    os << fmt::format(R"(<text x="{}" y="{}" font-size="11" text-anchor="middle">{:.3g}</text>)", px(vx), H - B + 16, vx)
       << "\n";
    os << fmt::format(R"(<text x="{}" y="{}" font-size="11" text-anchor="end">{:.3g}</text>)", L - 6, py(vy) + 4, vy)
       << "\n";
  }
  os << fmt::format(R"(<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>)", (W - R + L) / 2, H - 12,
                    escape_xml(plot.xlabel + (plot.logx ? " (log)" : "")))
     << "\n";
  os << fmt::format(R"svg(<text x="16" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>)svg",
                    (H - B + T) / 2, (H - B + T) / 2, escape_xml(plot.ylabel + (plot.logy ? " (log)" : "")))
     << "\n";
  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const auto& s = plot.series[si];
    const char* color = colors[si % 7];
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (usable(s.x[i], s.y[i])) pts += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
    os << fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>)", color, pts) << "\n";
    const double ly = T + 14 + 18.0 * static_cast<double>(si);
    os << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="2"/>)", W - R + 10, ly,
                      W - R + 30, ly, color)
       << "\n";
    os << fmt::format(R"(<text x="{}" y="{}" font-size="11">{}</text>)", W - R + 35, ly + 4, escape_xml(s.name)) << "\n";
  }
  os << "</svg>\n";
}

}  // namespace aniso
