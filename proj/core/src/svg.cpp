#include <cmath>
#include <limits>
#include <sstream>

#include "gradnorm/harness.hpp"

namespace gradnorm {
namespace {

constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string trace_svg(const TraceTable& table, const std::string& title) {
  const bool op = is_operator_method(table.method);
  std::vector<std::pair<double, double>> meas, env;
  double running = std::numeric_limits<double>::infinity();
  for (const TraceRow& r : table.rows) {
    double m = op ? r.grad_norm : r.grad_norm_sq;
    if (table.method == Method::FGM) {
      running = std::min(running, m);
      m = running;
    }
    if (r.k < 1) continue;
    if (m > 0.0) meas.emplace_back(std::log10(r.k), std::log10(m));
    if (r.envelope && *r.envelope > 0.0) env.emplace_back(std::log10(r.k), std::log10(*r.envelope));
  }

  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  bool first = true;
  for (const auto* series : {&meas, &env}) {
    for (const auto& [x, y] : *series) {
      if (first) {
        x0 = x1 = x;
        y0 = y1 = y;
        first = false;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  x0 = std::floor(x0);
  x1 = std::max(std::ceil(x1), x0 + 1.0);
  y0 = std::floor(y0);
  y1 = std::max(std::ceil(y1), y0 + 1.0);
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  auto py = [&](double y) { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); };

  std::ostringstream s;
  s.precision(6);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\">" << escape(title)
    << "</text>\n";
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kW - kLeft - kRight
    << "\" height=\"" << kH - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = x0; d <= x1 + 1e-9; d += 1.0) {
    s << "<text x=\"" << px(d) << "\" y=\"" << kH - kBottom + 18
      << "\" text-anchor=\"middle\">1e" << static_cast<int>(d) << "</text>\n";
  }
  const double ystep = std::max(1.0, std::ceil((y1 - y0) / 8.0));
  for (double d = y0; d <= y1 + 1e-9; d += ystep) {
    s << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\">1e"
      << static_cast<int>(d) << "</text>\n";
  }
  s << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">k</text>\n";
  s << "<text x=\"16\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 16 " << kH / 2
    << ")\" text-anchor=\"middle\">" << (op ? "||F(u_k)||" : "||grad f(x_k)||^2") << "</text>\n";

  auto polyline = [&](const std::vector<std::pair<double, double>>& pts, const char* style) {
    if (pts.size() == 1) {
      s << "<circle cx=\"" << px(pts[0].first) << "\" cy=\"" << py(pts[0].second)
        << "\" r=\"4\" " << style << "/>\n";
      return;
    }
    s << "<polyline fill=\"none\" " << style << " points=\"";
    for (const auto& [x, y] : pts) s << px(x) << ',' << py(y) << ' ';
    s << "\"/>\n";
  };
  if (!env.empty()) polyline(env, "stroke=\"#c0392b\" stroke-dasharray=\"6 4\"");
  if (!meas.empty()) polyline(meas, "stroke=\"#1f4e9c\" stroke-width=\"1.5\"");
  s << "</svg>\n";
  return s.str();
}

}  // namespace gradnorm
