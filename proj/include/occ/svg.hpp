#pragma once

#include <string>
#include <vector>

namespace occ::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Axes {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// One <polyline> per series, plus axes, ticks and a legend. Non-finite points are skipped.
std::string line_chart(const Axes& axes, const std::vector<Series>& series);

/// One bar group per category; within a group one bar per series, each bar stacked from
/// its components. values[series][category][component].
struct StackedBars {
  std::vector<std::string> categories;
  std::vector<std::string> series;
  std::vector<std::string> components;
  std::vector<std::vector<std::vector<double>>> values;
};

std::string stacked_bar_chart(const Axes& axes, const StackedBars& bars);

/// Escapes &, <, >, " for text and attribute content.
std::string escape(const std::string& text);

}  // namespace occ::svg
