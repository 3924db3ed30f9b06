#include "vaep/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace vaep::svg {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;
constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
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

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

Frame frame_for(const std::vector<std::pair<double, double>>& pts) {
  Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& [x, y] : pts) {
    f.x0 = std::min(f.x0, x);
    f.x1 = std::max(f.x1, x);
    f.y0 = std::min(f.y0, y);
    f.y1 = std::max(f.y1, y);
  }
  if (pts.empty()) f = {0, 1, 0, 1};
  if (f.x1 - f.x0 < 1e-12) f.x1 = f.x0 + 1;
  if (f.y1 - f.y0 < 1e-12) {
    f.y0 -= 0.5;
    f.y1 += 0.5;
  }
  const double pad = 0.05 * (f.y1 - f.y0);
  f.y0 -= pad;
  f.y1 += pad;
  return f;
}

void open(std::ostringstream& o, const std::string& title, const std::string& x_label, const std::string& y_label,
          const Frame& f) {
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
    << "</text>\n";
  const double bx = kLeft, by = kHeight - kBottom;
  o << "<line x1=\"" << num(bx) << "\" y1=\"" << num(by) << "\" x2=\"" << num(kWidth - kRight) << "\" y2=\""
    << num(by) << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << num(bx) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(bx) << "\" y2=\"" << num(by)
    << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    o << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(by + 16) << "\" text-anchor=\"middle\">" << tick(xv)
      << "</text>\n";
    o << "<text x=\"" << num(bx - 6) << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
      << "</text>\n";
  }
  o << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kHeight - 12) << "\" text-anchor=\"middle\">"
    << escape(x_label) << "</text>\n"
    << "<text x=\"16\" y=\"" << num(kHeight / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << num(kHeight / 2) << ")\">" << escape(y_label) << "</text>\n";
}

void legend(std::ostringstream& o, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double y = kTop + 14.0 * double(i);
    o << "<rect x=\"" << num(kWidth - kRight - 150) << "\" y=\"" << num(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
      << kColors[i % kColors.size()] << "\"/>\n"
      << "<text x=\"" << num(kWidth - kRight - 135) << "\" y=\"" << num(y) << "\">" << escape(labels[i])
      << "</text>\n";
  }
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series) {
  std::vector<std::pair<double, double>> all;
  for (const auto& s : series) all.insert(all.end(), s.points.begin(), s.points.end());
  const Frame f = frame_for(all);
  std::ostringstream o;
  open(o, title, x_label, y_label, f);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < series.size(); ++i) {
    labels.push_back(series[i].label);
    o << "<polyline fill=\"none\" stroke=\"" << kColors[i % kColors.size()] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < series[i].points.size(); ++k) {
      const auto& [x, y] = series[i].points[k];
      o << (k ? " " : "") << num(f.px(x)) << ',' << num(f.py(y));
    }
    o << "\"/>\n";
  }
  legend(o, labels);
  o << "</svg>\n";
  return o.str();
}

std::string scatter_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<LabeledPoint>& points) {
  std::vector<std::pair<double, double>> all;
  for (const auto& p : points) all.emplace_back(p.x, p.y);
  const Frame f = frame_for(all);
  std::ostringstream o;
  open(o, title, x_label, y_label, f);
  for (const auto& p : points) {
    o << "<circle cx=\"" << num(f.px(p.x)) << "\" cy=\"" << num(f.py(p.y)) << "\" r=\"3\" fill=\"" << kColors[0]
      << "\" fill-opacity=\"0.7\"><title>" << escape(p.label) << "</title></circle>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string calibration_chart(const EvalReport& report, const std::string& title) {
  Frame f{0, 1, 0, 1};
  std::ostringstream o;
  open(o, title, "mean predicted probability", "fraction of positives", f);
  o << "<line x1=\"" << num(f.px(0)) << "\" y1=\"" << num(f.py(0)) << "\" x2=\"" << num(f.px(1)) << "\" y2=\""
    << num(f.py(1)) << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  o << "<polyline fill=\"none\" stroke=\"" << kColors[0] << "\" stroke-width=\"1.5\" points=\"";
  bool first = true;
  for (const auto& b : report.bins) {
    if (!b.count) continue;
    o << (first ? "" : " ") << num(f.px(b.mean_predicted)) << ',' << num(f.py(b.fraction_positive));
    first = false;
  }
  o << "\"/>\n";
  for (const auto& b : report.bins) {
    if (!b.count) continue;
    o << "<circle cx=\"" << num(f.px(b.mean_predicted)) << "\" cy=\"" << num(f.py(b.fraction_positive))
      << "\" r=\"3.5\" fill=\"" << kColors[0] << "\"><title>n=" << b.count << "</title></circle>\n";
  }
  legend(o, {"model (AUC " + tick(report.roc_auc) + ")"});
  o << "</svg>\n";
  return o.str();
}

}  // namespace vaep::svg
