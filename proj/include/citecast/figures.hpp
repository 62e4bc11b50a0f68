#pragma once

#include <string>
#include <utility>
#include <vector>

#include "citecast/dataset.hpp"
#include "citecast/evaluation.hpp"

namespace citecast {

// Minimal static SVG chart: points, lines with optional error bars, grouped bars.
class SvgChart {
 public:
  SvgChart(std::string title, std::string x_label, std::string y_label);

  void add_points(std::string label, std::vector<std::pair<double, double>> xy);
  void add_line(std::string label, std::vector<std::pair<double, double>> xy, std::vector<double> errors = {});
  // Bars at x positions 1..n, one group per series.
  void add_bars(std::string label, std::vector<double> heights);
  void set_y_range(double lo, double hi);

  std::string render() const;

 private:
  enum class Kind { kPoints, kLine, kBars };
  struct Series {
    Kind kind;
    std::string label;
    std::vector<std::pair<double, double>> xy;
    std::vector<double> errors;
  };
  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  bool fixed_y_ = false;
  double y_lo_ = 0.0, y_hi_ = 1.0;
};

// Writes a CSV and the SVG beside it ("name.csv", "name.svg").
std::vector<std::string> emit_figures(const EvaluationReport& report, const Dataset& dataset,
                                      const std::string& out_dir);
std::vector<std::string> emit_epoch_figures(const EpochStudyReport& report, const std::string& out_dir);
std::vector<std::string> emit_ablation_figures(const AblationReport& report, const std::string& out_dir);
std::vector<std::string> emit_hirsch_grid(const HirschGrid& grid, const std::string& out_dir);

// Creates the directory if needed; throws IoError otherwise.
void ensure_directory(const std::string& dir);

}  // namespace citecast
