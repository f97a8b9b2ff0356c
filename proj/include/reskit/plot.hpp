#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace reskit::plot {

struct Series {
  std::string label;
  std::vector<double> y;
};

// Standalone SVG line plot of one or more series over a shared x grid.
void write_svg(std::ostream& out, const std::vector<double>& x, const std::vector<Series>& series,
               const std::string& title, const std::string& x_label);
void write_svg(const std::filesystem::path& path, const std::vector<double>& x, const std::vector<Series>& series,
               const std::string& title, const std::string& x_label);

}  // namespace reskit::plot
