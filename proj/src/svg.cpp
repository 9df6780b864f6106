#include "occ/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace occ::svg {

namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

Range padded(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) return {0.0, 1.0};
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double step = nice_step(hi - lo);
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step};
}

class Canvas {
 public:
  Canvas(const Axes& axes, Range x, Range y) : axes_(axes), x_(x), y_(y) {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
         << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
         << "<text x=\"" << num(kLeft) << "\" y=\"24\" font-size=\"15\">" << escape(axes.title) << "</text>\n";
  }

  double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * plot_w(); }
  double py(double y) const { return kTop + (1.0 - (y - y_.lo) / (y_.hi - y_.lo)) * plot_h(); }
  static double plot_w() { return kWidth - kLeft - kRight; }
  static double plot_h() { return kHeight - kTop - kBottom; }

  void frame(bool x_ticks) {
    out_ << "<g stroke=\"#999\" stroke-width=\"1\">\n";
    const double ys = nice_step(y_.hi - y_.lo);
    for (double v = y_.lo; v <= y_.hi + ys * 1e-6; v += ys)
      out_ << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(v)) << "\" x2=\"" << num(kLeft + plot_w())
           << "\" y2=\"" << num(py(v)) << "\" stroke=\"#eee\"/>\n";
    out_ << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h()) << "\" x2=\"" << num(kLeft + plot_w())
         << "\" y2=\"" << num(kTop + plot_h()) << "\"/>\n"
         << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
         << num(kTop + plot_h()) << "\"/>\n</g>\n";
    for (double v = y_.lo; v <= y_.hi + ys * 1e-6; v += ys)
      out_ << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">"
           << tick_label(v) << "</text>\n";
    if (x_ticks) {
      const double xs = nice_step(x_.hi - x_.lo);
      for (double v = x_.lo; v <= x_.hi + xs * 1e-6; v += xs)
        out_ << "<text x=\"" << num(px(v)) << "\" y=\"" << num(kTop + plot_h() + 18)
             << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
    }
    out_ << "<text x=\"" << num(kLeft + plot_w() / 2) << "\" y=\"" << num(kHeight - 12)
         << "\" text-anchor=\"middle\">" << escape(axes_.x_label) << "</text>\n"
         << "<text transform=\"translate(18," << num(kTop + plot_h() / 2)
         << ") rotate(-90)\" text-anchor=\"middle\">" << escape(axes_.y_label) << "</text>\n";
  }

  void legend(std::size_t index, const std::string& name, const std::string& colour) {
    const double y = kTop + 10 + 20.0 * static_cast<double>(index);
    const double x = kWidth - kRight + 15;
    out_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 9) << "\" width=\"12\" height=\"12\" fill=\"" << colour
         << "\"/>\n<text x=\"" << num(x + 18) << "\" y=\"" << num(y + 1) << "\">" << escape(name) << "</text>\n";
  }

  std::ostringstream& out() { return out_; }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  Axes axes_;
  Range x_;
  Range y_;
  std::ostringstream out_;
};

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string line_chart(const Axes& axes, const std::vector<Series>& series) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  Canvas c(axes, padded(xlo, xhi), padded(ylo, yhi));
  c.frame(true);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const std::string colour = kPalette[k % std::size(kPalette)];
    auto& out = c.out();
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < std::min(series[k].x.size(), series[k].y.size()); ++i) {
      if (!std::isfinite(series[k].x[i]) || !std::isfinite(series[k].y[i])) continue;
      out << (first ? "" : " ") << num(c.px(series[k].x[i])) << ',' << num(c.py(series[k].y[i]));
      first = false;
    }
    out << "\"/>\n";
    c.legend(k, series[k].name, colour);
  }
  return c.finish();
}

std::string stacked_bar_chart(const Axes& axes, const StackedBars& bars) {
  double top = 0.0;
  for (const auto& per_series : bars.values)
    for (const auto& stack : per_series) {
      double sum = 0.0;
      for (double v : stack) sum += std::max(0.0, v);
      top = std::max(top, sum);
    }
  Canvas c(axes, {0.0, static_cast<double>(std::max<std::size_t>(1, bars.categories.size()))}, padded(0.0, top));
  c.frame(false);
  auto& out = c.out();
  const double group_w = Canvas::plot_w() / static_cast<double>(std::max<std::size_t>(1, bars.categories.size()));
  const double bar_w = group_w * 0.8 / static_cast<double>(std::max<std::size_t>(1, bars.series.size()));
  static constexpr const char* kShades[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3"};
  for (std::size_t g = 0; g < bars.categories.size(); ++g) {
    const double gx = c.px(static_cast<double>(g)) + group_w * 0.1;
    for (std::size_t s = 0; s < bars.series.size(); ++s) {
      double base = 0.0;
      const double x = gx + bar_w * static_cast<double>(s);
      const auto& stack = bars.values.at(s).at(g);
      for (std::size_t k = 0; k < stack.size(); ++k) {
        const double v = std::max(0.0, stack[k]);
        const double y0 = c.py(base), y1 = c.py(base + v);
        out << "<rect x=\"" << num(x) << "\" y=\"" << num(y1) << "\" width=\"" << num(bar_w * 0.95)
            << "\" height=\"" << num(y0 - y1) << "\" fill=\"" << kShades[k % std::size(kShades)]
            << "\" fill-opacity=\"" << num(1.0 - 0.25 * static_cast<double>(s % 3)) << "\"><title>"
            << escape(bars.series[s] + " " + bars.categories[g] + " " + bars.components.at(k)) << "</title></rect>\n";
        base += v;
      }
    }
    out << "<text x=\"" << num(gx + group_w * 0.4) << "\" y=\"" << num(kTop + Canvas::plot_h() + 18)
        << "\" text-anchor=\"middle\">" << escape(bars.categories[g]) << "</text>\n";
  }
  for (std::size_t k = 0; k < bars.components.size(); ++k)
    c.legend(k, bars.components[k], kShades[k % std::size(kShades)]);
  std::string order = "bars per week, left to right:";
  for (std::size_t s = 0; s < bars.series.size(); ++s) order += (s ? ", " : " ") + bars.series[s];
  out << "<text x=\"" << num(kLeft + Canvas::plot_w()) << "\" y=\"24\" text-anchor=\"end\" font-size=\"11\">"
      << escape(order) << "</text>\n";
  return c.finish();
}

}  // namespace occ::svg
