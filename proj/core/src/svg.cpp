#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "barrier/figures.hpp"

namespace barrier {

namespace {

constexpr const char* kMinusColour = "#000000";
constexpr const char* kPlusColour = "#ff8c00";
constexpr const char* kAdmissibleColour = "#d62728";
constexpr const char* kInadmissibleColour = "#1f77b4";
constexpr const char* kRegionColour = "#9ecae1";

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

std::vector<double> nice_ticks(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) ticks.push_back(t);
  return ticks;
}

struct Axis {
  double lo;
  double hi;
  std::string label;
  bool log = false;
  std::vector<double> ticks = {};
};

class Panel {
 public:
  Panel(double x, double y, double w, double h, Axis xa, Axis ya, std::string title)
      : x_(x), y_(y), w_(w), h_(h), xa_(std::move(xa)), ya_(std::move(ya)), title_(std::move(title)) {}

  double px(double v) const {
    if (xa_.log) return x_ + w_ * (std::log(v) - std::log(xa_.lo)) / (std::log(xa_.hi) - std::log(xa_.lo));
    return x_ + w_ * (v - xa_.lo) / (xa_.hi - xa_.lo);
  }
  double py(double v) const { return y_ + h_ - h_ * (v - ya_.lo) / (ya_.hi - ya_.lo); }
  bool visible(cplx z) const {
    return z.real() >= xa_.lo && z.real() <= xa_.hi && z.imag() >= ya_.lo && z.imag() <= ya_.hi;
  }

  void circle(cplx z, double r, const char* fill) {
    if (!visible(z)) return;
    body_ << "<circle cx=\"" << num(px(z.real())) << "\" cy=\"" << num(py(z.imag())) << "\" r=\"" << num(r)
          << "\" fill=\"" << fill << "\"/>\n";
  }
  void square(cplx z, double side, const char* fill) {
    if (!visible(z)) return;
    body_ << "<rect x=\"" << num(px(z.real()) - side / 2) << "\" y=\"" << num(py(z.imag()) - side / 2)
          << "\" width=\"" << num(side) << "\" height=\"" << num(side) << "\" fill=\"" << fill << "\"/>\n";
  }
  void path(const std::vector<std::vector<cplx>>& loops, bool close, const char* fill, const char* stroke,
            double width, const char* extra = "") {
    std::ostringstream d;
    for (const auto& loop : loops) {
      for (std::size_t i = 0; i < loop.size(); ++i) {
        d << (i == 0 ? "M" : "L") << num(px(loop[i].real())) << ',' << num(py(loop[i].imag())) << ' ';
      }
      if (close) d << "Z ";
    }
    body_ << "<path d=\"" << d.str() << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\""
          << num(width) << "\" fill-rule=\"evenodd\"" << extra << "/>\n";
  }
  void legend(int row, const char* colour, bool square_marker, const std::string& text) {
    const double lx = x_ + w_ - 150;
    const double ly = y_ + 16 + 16 * row;
    if (square_marker) {
      body_ << "<rect x=\"" << num(lx - 4) << "\" y=\"" << num(ly - 4) << "\" width=\"8\" height=\"8\" fill=\""
            << colour << "\"/>\n";
    } else {
      body_ << "<circle cx=\"" << num(lx) << "\" cy=\"" << num(ly) << "\" r=\"4\" fill=\"" << colour << "\"/>\n";
    }
    body_ << "<text x=\"" << num(lx + 10) << "\" y=\"" << num(ly + 4) << "\" font-size=\"11\">" << escape(text)
          << "</text>\n";
  }

  std::string str() const {
    std::ostringstream s;
    s << "<g class=\"panel\">\n";
    s << "<text x=\"" << num(x_ + w_ / 2) << "\" y=\"" << num(y_ - 8)
      << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(title_) << "</text>\n";
    s << "<rect x=\"" << num(x_) << "\" y=\"" << num(y_) << "\" width=\"" << num(w_) << "\" height=\"" << num(h_)
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
    const auto xt = xa_.ticks.empty() ? nice_ticks(xa_.lo, xa_.hi) : xa_.ticks;
    for (double t : xt) {
      const double X = px(t);
      s << "<line x1=\"" << num(X) << "\" y1=\"" << num(y_ + h_) << "\" x2=\"" << num(X) << "\" y2=\""
        << num(y_ + h_ + 4) << "\" stroke=\"#444\"/>\n";
      s << "<text x=\"" << num(X) << "\" y=\"" << num(y_ + h_ + 16) << "\" font-size=\"10\" text-anchor=\"middle\">"
        << tick_label(t) << "</text>\n";
    }
    for (double t : nice_ticks(ya_.lo, ya_.hi)) {
      const double Y = py(t);
      s << "<line x1=\"" << num(x_ - 4) << "\" y1=\"" << num(Y) << "\" x2=\"" << num(x_) << "\" y2=\"" << num(Y)
        << "\" stroke=\"#444\"/>\n";
      s << "<text x=\"" << num(x_ - 6) << "\" y=\"" << num(Y + 3) << "\" font-size=\"10\" text-anchor=\"end\">"
        << tick_label(t) << "</text>\n";
    }
    s << "<text x=\"" << num(x_ + w_ / 2) << "\" y=\"" << num(y_ + h_ + 32)
      << "\" font-size=\"11\" text-anchor=\"middle\">" << escape(xa_.label) << "</text>\n";
    s << "<text x=\"" << num(x_ - 40) << "\" y=\"" << num(y_ + h_ / 2) << "\" font-size=\"11\" text-anchor=\"middle\""
      << " transform=\"rotate(-90 " << num(x_ - 40) << ' ' << num(y_ + h_ / 2) << ")\">" << escape(ya_.label)
      << "</text>\n";
    s << body_.str() << "</g>\n";
    return s.str();
  }

 private:
  double x_, y_, w_, h_;
  Axis xa_, ya_;
  std::string title_;
  std::ostringstream body_;
};

std::string document(double width, double height, const std::vector<const Panel*>& panels) {
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
    << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" font-family=\"sans-serif\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (const Panel* p : panels) s << p->str();
  s << "</svg>\n";
  return s.str();
}

void draw_z_panel(Panel& panel, Branch branch, const RootSet& roots, const DiscreteSpectrum& spectrum,
                  const std::vector<Polyline>& region) {
  std::vector<std::vector<cplx>> loops;
  for (const auto& line : region) {
    if (line.closed) loops.push_back(line.points);
  }
  panel.path(loops, true, kRegionColour, "#3182bd", 0.6, " fill-opacity=\"0.7\"");

  std::vector<cplx> circle;
  for (int i = 0; i <= 180; ++i) circle.push_back(std::polar(1.0, 3.141592653589793 * i / 180.0));
  panel.path({circle}, false, "none", "#888", 1.0, " stroke-dasharray=\"4 3\"");

  for (const Root& r : roots.roots) {
    if (r.value.imag() < -1e-12) continue;
    const bool admissible = std::any_of(spectrum.points.begin(), spectrum.points.end(), [&](const auto& p) {
      return p.branch == branch && std::abs(p.z - r.value) < 1e-12;
    });
    panel.circle(r.value, 3.0, admissible ? kAdmissibleColour : kInadmissibleColour);
  }
  panel.legend(0, kAdmissibleColour, false, "admissible root");
  panel.legend(1, kInadmissibleColour, false, "other root");
}

}  // namespace

std::string render_figure1(const DiscreteBarrier& op, const DiscreteSpectrum& spectrum,
                           const std::vector<Polyline>& minus_region, const std::vector<Polyline>& plus_region) {
  const Axis zx{-1.25, 1.25, "Re z"};
  const Axis zy{0.0, 1.25, "Im z"};
  Panel minus(70, 40, 420, 210, zx, zy, "minus branch: |z^(n+1) - 1| < |z^n - z|");
  Panel plus(570, 40, 420, 210, zx, zy, "plus branch: |z^(n+1) + 1| < |z^n + z|");
  draw_z_panel(minus, Branch::minus, spectrum.minus_roots, spectrum, minus_region);
  draw_z_panel(plus, Branch::plus, spectrum.plus_roots, spectrum, plus_region);

  Panel lam(70, 330, 920, 380, Axis{-2.2, 2.2, "Re lambda"}, Axis{0.0, 1.1 * op.h(), "Im lambda"},
            "eigenvalues, n = " + std::to_string(op.n()) + ", h = " + tick_label(op.h()));
  lam.path({{cplx{-2.0, 0.0}, cplx{2.0, 0.0}}}, false, "none", "#888", 3.0);
  for (const auto& p : spectrum.points) {
    if (p.branch == Branch::minus) {
      lam.circle(p.lambda, 4.0, kMinusColour);
    } else {
      lam.square(p.lambda, 7.0, kPlusColour);
    }
  }
  lam.legend(0, kMinusColour, false, "minus branch");
  lam.legend(1, kPlusColour, true, "plus branch");
  return document(1040, 760, {&minus, &plus, &lam});
}

std::string render_discrete_spectrum(const DiscreteBarrier& op, const DiscreteSpectrum& spectrum) {
  Panel lam(70, 40, 820, 420, Axis{-2.2, 2.2, "Re lambda"}, Axis{0.0, 1.1 * op.h(), "Im lambda"},
            "eigenvalues, n = " + std::to_string(op.n()) + ", h = " + tick_label(op.h()));
  lam.path({{cplx{-2.0, 0.0}, cplx{2.0, 0.0}}}, false, "none", "#888", 3.0);
  for (const auto& p : spectrum.points) {
    if (p.branch == Branch::minus) {
      lam.circle(p.lambda, 4.0, kMinusColour);
    } else {
      lam.square(p.lambda, 7.0, kPlusColour);
    }
  }
  lam.legend(0, kMinusColour, false, "minus branch");
  lam.legend(1, kPlusColour, true, "plus branch");
  return document(940, 520, {&lam});
}

std::string render_figure2(const ContinuousBarrier& op, const ContinuousSpectrum& spectrum) {
  double re_max = 1.0;
  for (const auto& p : spectrum.points) re_max = std::max(re_max, p.lambda.real());
  Panel lam(80, 40, 820, 440, Axis{0.0, 1.05 * re_max, "Re lambda"}, Axis{0.0, 1.1 * op.h(), "Im lambda"},
            "eigenvalues, h = " + tick_label(op.h()));
  lam.path({{cplx{0.0, op.h()}, cplx{1.05 * re_max, op.h()}}}, false, "none", "#888", 1.0,
           " stroke-dasharray=\"4 3\"");
  for (const auto& p : spectrum.points) lam.circle(p.lambda, 3.0, kMinusColour);
  return document(960, 540, {&lam});
}

std::string render_scan(const std::string& title, const std::string& x_label, const std::string& y_label,
                        const std::vector<Series>& series) {
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  std::vector<double> ticks;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !std::isfinite(s.y[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
      ticks.push_back(s.x[i]);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 1.0, x_hi = 10.0, y_lo = 0.0, y_hi = 1.0;
  if (x_hi <= x_lo) x_hi = x_lo * 10.0;
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  const double pad = 0.08 * (y_hi - y_lo);
  Panel panel(80, 40, 720, 380, Axis{x_lo / 1.2, x_hi * 1.2, x_label, true, ticks},
              Axis{std::min(0.0, y_lo - pad), y_hi + pad, y_label}, title);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = colours[k % 4];
    std::vector<cplx> pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.x[i] > 0.0 && std::isfinite(s.y[i])) pts.emplace_back(s.x[i], s.y[i]);
    }
    if (pts.size() > 1) panel.path({pts}, false, "none", colour, 1.5);
    for (cplx p : pts) panel.circle(p, 3.5, colour);
    panel.legend(static_cast<int>(k), colour, false, s.label);
  }
  return document(880, 480, {&panel});
}

}  // namespace barrier
