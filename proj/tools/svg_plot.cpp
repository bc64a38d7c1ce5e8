#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gwhf::cli {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

double nice_step(double span) {
  double raw = span / 6, p = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * p >= raw) return m * p;
  return 10 * p;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string zeros_svg(const std::vector<ChargedZero>& zeros, const PlotOptions& opt) {
  Domain d{0, 1, 0, 1};
  if (opt.domain) {
    d = *opt.domain;
  } else if (!zeros.empty()) {
    d = {zeros[0].position.real(), zeros[0].position.real(), zeros[0].position.imag(), zeros[0].position.imag()};
    for (const auto& z : zeros) {
      d.x0 = std::min(d.x0, z.position.real());
      d.x1 = std::max(d.x1, z.position.real());
      d.y0 = std::min(d.y0, z.position.imag());
      d.y1 = std::max(d.y1, z.position.imag());
    }
    double pad = 0.02 * std::max({d.width(), d.height(), 1e-9});
    d = {d.x0 - pad, d.x1 + pad, d.y0 - pad, d.y1 + pad};
    if (d.width() <= 0) d.x1 = d.x0 + 1;
    if (d.height() <= 0) d.y1 = d.y0 + 1;
  }
  const double margin = 48;
  const double scale = opt.size / std::max(d.width(), d.height());
  const double w = d.width() * scale, h = d.height() * scale;
  auto X = [&](double x) { return margin + (x - d.x0) * scale; };
  auto Y = [&](double y) { return margin + (d.y1 - y) * scale; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w + 2 * margin) + "\" height=\"" +
       num(h + 2 * margin) + "\" viewBox=\"0 0 " + num(w + 2 * margin) + " " + num(h + 2 * margin) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    s += "<text x=\"" + num(margin + w / 2) + "\" y=\"" + num(margin / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + escape(opt.title) + "</text>\n";
  s += "<rect x=\"" + num(margin) + "\" y=\"" + num(margin) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
       "\" fill=\"none\" stroke=\"black\"/>\n";

  double step = nice_step(std::max(d.width(), d.height()));
  s += "<g font-family=\"sans-serif\" font-size=\"10\">\n";
  for (double t = std::ceil(d.x0 / step - 1e-9) * step; t <= d.x1 + 1e-9; t += step) {
    s += "<line x1=\"" + num(X(t)) + "\" y1=\"" + num(margin + h) + "\" x2=\"" + num(X(t)) + "\" y2=\"" +
         num(margin + h + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(X(t)) + "\" y=\"" + num(margin + h + 17) + "\" text-anchor=\"middle\">" +
         tick(t) + "</text>\n";
  }
  for (double t = std::ceil(d.y0 / step - 1e-9) * step; t <= d.y1 + 1e-9; t += step) {
    s += "<line x1=\"" + num(margin - 5) + "\" y1=\"" + num(Y(t)) + "\" x2=\"" + num(margin) + "\" y2=\"" +
         num(Y(t)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(margin - 8) + "\" y=\"" + num(Y(t) + 3) + "\" text-anchor=\"end\">" + tick(t) +
         "</text>\n";
  }
  s += "</g>\n";

  const double r = 3.5;
  s += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  for (const auto& z : zeros) {
    double x = X(z.position.real()), y = Y(z.position.imag());
    if (z.charge > 0)
      s += "<path d=\"M" + num(x - r) + " " + num(y) + "H" + num(x + r) + "M" + num(x) + " " + num(y - r) + "V" +
           num(y + r) + "\"/>\n";
    else
      s += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + num(r) + "\"/>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace gwhf::cli
