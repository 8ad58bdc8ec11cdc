#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "stresstune/io.hpp"
#include "stresstune/tune.hpp"

namespace stresstune::plot {

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Series {
  std::vector<double> x, y;
};

inline std::string polyline(const Series& s, double x0, double x1, double y0, double y1, double left, double top,
                            double w, double h, const std::string& color, bool dashed) {
  if (s.x.empty()) return {};
  auto px = [&](double x) { return left + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * w; };
  auto py = [&](double y) { return top + h - (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5) * h; };
  std::string out = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"";
  if (dashed) out += " stroke-dasharray=\"6,4\"";
  out += " points=\"";
  for (std::size_t k = 0; k < s.x.size(); ++k) out += (k ? " " : "") + fmt(px(s.x[k])) + "," + fmt(py(s.y[k]));
  out += "\"/>\n";
  for (std::size_t k = 0; k < s.x.size(); ++k)
    out += "<circle cx=\"" + fmt(px(s.x[k])) + "\" cy=\"" + fmt(py(s.y[k])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
  return out;
}

}  // namespace detail

/// Stress (left axis) and, when available, embedding error (right axis)
/// against h. Failed rows are skipped. Output depends only on the report.
inline std::string sweep_svg(const SweepReport& rep, const std::string& title = "hop sweep") {
  constexpr double W = 640, H = 400, left = 70, right = 70, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  detail::Series st, err;
  for (const auto& r : rep.rows) {
    if (r.failed) continue;
    st.x.push_back(r.h);
    st.y.push_back(r.stress);
    if (r.embedding_error) {
      err.x.push_back(r.h);
      err.y.push_back(*r.embedding_error);
    }
  }
  double x0 = 0, x1 = 1;
  if (!rep.rows.empty()) {
    x0 = rep.rows.front().h;
    x1 = rep.rows.back().h;
  }
  auto range = [](const std::vector<double>& v) {
    if (v.empty()) return std::pair{0.0, 1.0};
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return std::pair{std::min(0.0, *lo), *hi > 0 ? *hi * 1.05 : 1.0};
  };
  const auto [s0, s1] = range(st.y);
  const auto [e0, e1] = range(err.y);

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(W) + "\" height=\"" +
                    detail::fmt(H) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + detail::fmt(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + title +
         "</text>\n";
  svg += "<rect x=\"" + detail::fmt(left) + "\" y=\"" + detail::fmt(top) + "\" width=\"" + detail::fmt(pw) +
         "\" height=\"" + detail::fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double f = k / 4.0, y = top + ph - f * ph;
    svg += "<text x=\"" + detail::fmt(left - 6) + "\" y=\"" + detail::fmt(y + 4) + "\" text-anchor=\"end\" fill=\"#1f77b4\">" +
           detail::tick(s0 + f * (s1 - s0)) + "</text>\n";
    if (!err.y.empty())
      svg += "<text x=\"" + detail::fmt(left + pw + 6) + "\" y=\"" + detail::fmt(y + 4) + "\" fill=\"#d62728\">" +
             detail::tick(e0 + f * (e1 - e0)) + "</text>\n";
  }
  for (const auto& r : rep.rows) {
    const double x = left + (x1 > x0 ? (r.h - x0) / (x1 - x0) : 0.5) * pw;
    svg += "<text x=\"" + detail::fmt(x) + "\" y=\"" + detail::fmt(top + ph + 18) + "\" text-anchor=\"middle\">" +
           std::to_string(r.h) + "</text>\n";
    if (r.h == rep.selected_h)
      svg += "<line x1=\"" + detail::fmt(x) + "\" y1=\"" + detail::fmt(top) + "\" x2=\"" + detail::fmt(x) + "\" y2=\"" +
             detail::fmt(top + ph) + "\" stroke=\"gray\" stroke-dasharray=\"2,3\"/>\n";
  }
  svg += "<text x=\"" + detail::fmt(left + pw / 2) + "\" y=\"" + detail::fmt(H - 10) + "\" text-anchor=\"middle\">h</text>\n";
  svg += "<text x=\"16\" y=\"" + detail::fmt(top + ph / 2) + "\" fill=\"#1f77b4\" transform=\"rotate(-90 16 " +
         detail::fmt(top + ph / 2) + ")\" text-anchor=\"middle\">stress</text>\n";
  if (!err.y.empty())
    svg += "<text x=\"" + detail::fmt(W - 12) + "\" y=\"" + detail::fmt(top + ph / 2) + "\" fill=\"#d62728\" transform=\"rotate(90 " +
           detail::fmt(W - 12) + " " + detail::fmt(top + ph / 2) + ")\" text-anchor=\"middle\">embedding error</text>\n";
  svg += detail::polyline(st, x0, x1, s0, s1, left, top, pw, ph, "#1f77b4", false);
  svg += detail::polyline(err, x0, x1, e0, e1, left, top, pw, ph, "#d62728", true);
  svg += "</svg>\n";
  return svg;
}

}  // namespace stresstune::plot
