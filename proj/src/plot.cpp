#include "reskit/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <ostream>

#include "reskit/error.hpp"
#include "reskit/spectra_io.hpp"

namespace reskit::plot {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kMargin = 60.0;
constexpr std::array<const char*, 4> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  // Four decimals keep files small and stable.
  return io::format_double(std::round(v * 1e4) / 1e4);
}

}  // namespace

void write_svg(std::ostream& out, const std::vector<double>& x, const std::vector<Series>& series,
               const std::string& title, const std::string& x_label) {
  if (x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "plot needs at least two points");
  }
  double y_min = 0.0;
  double y_max = 0.0;
  for (const auto& s : series) {
    if (s.y.size() != x.size()) {
      throw Error(ErrorCode::InvalidArgument, "series '" + s.label + "' has the wrong length");
    }
    for (double v : s.y) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (y_max == y_min) {
    y_max = y_min + 1.0;
  }
  const double x_min = x.front();
  const double x_max = x.back();
  auto sx = [&](double v) { return kMargin + (v - x_min) / (x_max - x_min) * (kWidth - 2 * kMargin); };
  auto sy = [&](double v) { return kHeight - kMargin - (v - y_min) / (y_max - y_min) * (kHeight - 2 * kMargin); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << escape(title) << "</text>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin << "\" y2=\""
      << kHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\"" << kHeight - kMargin
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(x_label) << "</text>\n";
  for (double frac : {0.0, 0.5, 1.0}) {
    const double xv = x_min + frac * (x_max - x_min);
    const double yv = y_min + frac * (y_max - y_min);
    out << "<text x=\"" << num(sx(xv)) << "\" y=\"" << kHeight - kMargin + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << io::format_double(xv)
        << "</text>\n"
        << "<text x=\"" << kMargin - 6 << "\" y=\"" << num(sy(yv))
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << io::format_double(yv)
        << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    out << "<polyline fill=\"none\" stroke=\"" << kColors[s % kColors.size()] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
      out << (i ? " " : "") << num(sx(x[i])) << ',' << num(sy(series[s].y[i]));
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kMargin + 16.0 * s
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << kColors[s % kColors.size()]
        << "\">" << escape(series[s].label) << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) {
    throw Error(ErrorCode::IoFailure, "failed writing SVG");
  }
}

void write_svg(const std::filesystem::path& path, const std::vector<double>& x, const std::vector<Series>& series,
               const std::string& title, const std::string& x_label) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  }
  write_svg(out, x, series, title, x_label);
}

}  // namespace reskit::plot
