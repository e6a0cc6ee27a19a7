#include "kirchhoff/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

namespace kirchhoff {

namespace {

constexpr int kMarginLeft = 80, kMarginRight = 160, kMarginTop = 40, kMarginBottom = 60;
constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.6g", v);
  return buf.data();
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi;
  bool log;
  double pixel_lo, pixel_hi;

  double map(double v) const {
    const double a = log ? std::log10(v) : v;
    const double b = log ? std::log10(lo) : lo;
    const double c = log ? std::log10(hi) : hi;
    const double f = c > b ? (a - b) / (c - b) : 0.5;
    return pixel_lo + f * (pixel_hi - pixel_lo);
  }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

std::string header(int w, int h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
         "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " +
         std::to_string(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle",
                 int size = 12) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" +
         std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
}

std::vector<double> ticks(double lo, double hi, bool log) {
  std::vector<double> out;
  if (log) {
    const int a = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
    const int b = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
    const int stride = std::max(1, (b - a) / 8 + 1);
    for (int e = a; e <= b; e += stride) out.push_back(std::pow(10.0, e));
  } else {
    const double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double step = raw / mag < 2.0 ? 2.0 * mag : (raw / mag < 5.0 ? 5.0 * mag : 10.0 * mag);
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) out.push_back(v);
  }
  return out;
}

}  // namespace

std::string line_chart_svg(std::span<const PlotSeries> series, const ChartOptions& options) {
  const int w = options.width, h = options.height;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], options.log_x) || !usable(s.y[i], options.log_y)) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  std::string out = header(w, h);
  out += text(w / 2.0, 24, options.title, "middle", 14);
  if (!(xlo <= xhi) || !(ylo <= yhi)) {
    out += text(w / 2.0, h / 2.0, "no plottable data");
    return out + "</svg>\n";
  }
  if (xlo == xhi) xhi = options.log_x ? xlo * 10.0 : xlo + 1.0;
  if (ylo == yhi) yhi = options.log_y ? ylo * 10.0 : ylo + 1.0;

  const Axis ax{xlo, xhi, options.log_x, double(kMarginLeft), double(w - kMarginRight)};
  const Axis ay{ylo, yhi, options.log_y, double(h - kMarginBottom), double(kMarginTop)};

  out += "<rect x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(kMarginTop) +
         "\" width=\"" + std::to_string(w - kMarginLeft - kMarginRight) + "\" height=\"" +
         std::to_string(h - kMarginTop - kMarginBottom) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(xlo, xhi, options.log_x)) {
    const double px = ax.map(t);
    out += "<line x1=\"" + num(px) + "\" y1=\"" + num(ay.pixel_lo) + "\" x2=\"" + num(px) +
           "\" y2=\"" + num(ay.pixel_hi) + "\" stroke=\"#dddddd\"/>\n";
    out += text(px, ay.pixel_lo + 18, num(t));
  }
  for (double t : ticks(ylo, yhi, options.log_y)) {
    const double py = ay.map(t);
    out += "<line x1=\"" + num(ax.pixel_lo) + "\" y1=\"" + num(py) + "\" x2=\"" + num(ax.pixel_hi) +
           "\" y2=\"" + num(py) + "\" stroke=\"#dddddd\"/>\n";
    out += text(ax.pixel_lo - 6, py + 4, num(t), "end");
  }
  out += text(w / 2.0 - kMarginRight / 2.0, h - 16, options.x_label);
  out += "<text x=\"18\" y=\"" + num(h / 2.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " +
         num(h / 2.0) + ")\">" + escape(options.y_label) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % kPalette.size()];
    std::string points;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], options.log_x) || !usable(s.y[i], options.log_y)) continue;
      points += num(ax.map(s.x[i])) + "," + num(ay.map(s.y[i])) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    const double ly = kMarginTop + 16.0 * static_cast<double>(k) + 8.0;
    out += "<line x1=\"" + num(w - kMarginRight + 10.0) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(w - kMarginRight + 30.0) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += text(w - kMarginRight + 34.0, ly + 4, s.label, "start", 11);
  }
  return out + "</svg>\n";
}

std::string regime_map_svg(std::span<const RegimeCell> cells, const std::string& title) {
  const int w = 720, h = 480;
  std::string out = header(w, h);
  out += text(w / 2.0, 24, title, "middle", 14);
  if (cells.empty()) return out + "</svg>\n";

  std::set<double> gammas, ps;
  for (const auto& c : cells) {
    gammas.insert(c.gamma);
    ps.insert(c.p);
  }
  const double glo = *gammas.begin(), ghi = *gammas.rbegin();
  const double plo = *ps.begin(), phi = *ps.rbegin();
  const Axis ax{glo, ghi > glo ? ghi : glo + 1.0, false, double(kMarginLeft),
                double(w - kMarginRight)};
  const Axis ay{plo, phi > plo ? phi : plo + 1.0, false, double(h - kMarginBottom),
                double(kMarginTop)};
  const double cw = (ax.pixel_hi - ax.pixel_lo) / std::max<double>(1.0, double(gammas.size()));
  const double ch = (ay.pixel_lo - ay.pixel_hi) / std::max<double>(1.0, double(ps.size()));

  auto color = [](RegimeTag tag) {
    switch (tag) {
      case RegimeTag::Parabolic:
        return "#9ecae1";
      case RegimeTag::Hyperbolic:
        return "#fc9272";
      case RegimeTag::NoMansLand:
        return "#d9d9d9";
      case RegimeTag::NoTheory:
        return "#ffffff";
    }
    return "#000000";
  };
  for (const auto& c : cells) {
    out += "<rect x=\"" + num(ax.map(c.gamma) - cw / 2.0) + "\" y=\"" + num(ay.map(c.p) - ch / 2.0) +
           "\" width=\"" + num(cw) + "\" height=\"" + num(ch) + "\" fill=\"" + color(c.tag) +
           "\" stroke=\"none\"/>\n";
  }
  std::string curve;
  for (int i = 0; i <= 200; ++i) {
    const double g = glo + (ghi - glo) * i / 200.0;
    if (!(g > 0.0)) continue;
    const double pg = p_gamma(g);
    if (pg < plo || pg > ay.hi) continue;
    curve += num(ax.map(g)) + "," + num(ay.map(pg)) + " ";
  }
  out += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"" + curve + "\"/>\n";
  for (double t : ticks(glo, ax.hi, false)) out += text(ax.map(t), h - kMarginBottom + 18, num(t));
  for (double t : ticks(plo, ay.hi, false)) out += text(kMarginLeft - 6, ay.map(t) + 4, num(t), "end");
  out += text(w / 2.0 - kMarginRight / 2.0, h - 16, "gamma");
  out += text(24, h / 2.0, "p");
  const std::array<RegimeTag, 4> tags{RegimeTag::Parabolic, RegimeTag::NoMansLand,
                                      RegimeTag::Hyperbolic, RegimeTag::NoTheory};
  for (std::size_t k = 0; k < tags.size(); ++k) {
    const double ly = kMarginTop + 18.0 * static_cast<double>(k);
    out += "<rect x=\"" + num(w - kMarginRight + 10.0) + "\" y=\"" + num(ly) +
           "\" width=\"14\" height=\"12\" stroke=\"black\" fill=\"" + color(tags[k]) + "\"/>\n";
    out += text(w - kMarginRight + 30.0, ly + 10, std::string(to_string(tags[k])), "start", 11);
  }
  return out + "</svg>\n";
}

}  // namespace kirchhoff
