#include "citecast/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "citecast/errors.hpp"
#include "citecast/format.hpp"

namespace citecast {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 55;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

}  // namespace

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgChart::add_points(std::string label, std::vector<std::pair<double, double>> xy) {
  series_.push_back({Kind::kPoints, std::move(label), std::move(xy), {}});
}

void SvgChart::add_line(std::string label, std::vector<std::pair<double, double>> xy, std::vector<double> errors) {
  if (!errors.empty() && errors.size() != xy.size()) throw ArgumentError("error bar count mismatch");
  series_.push_back({Kind::kLine, std::move(label), std::move(xy), std::move(errors)});
}

void SvgChart::add_bars(std::string label, std::vector<double> heights) {
  std::vector<std::pair<double, double>> xy;
  for (std::size_t i = 0; i < heights.size(); ++i) xy.emplace_back(static_cast<double>(i + 1), heights[i]);
  series_.push_back({Kind::kBars, std::move(label), std::move(xy), {}});
}

void SvgChart::set_y_range(double lo, double hi) {
  fixed_y_ = true;
  y_lo_ = lo;
  y_hi_ = hi;
}

std::string SvgChart::render() const {
  Range xr, yr;
  std::size_t bar_series = 0;
  for (const auto& s : series_) {
    if (s.kind == Kind::kBars) {
      ++bar_series;
      yr.add(0.0);
    }
    for (std::size_t i = 0; i < s.xy.size(); ++i) {
      xr.add(s.xy[i].first);
      yr.add(s.xy[i].second);
      if (!s.errors.empty() && std::isfinite(s.errors[i])) {
        yr.add(s.xy[i].second - s.errors[i]);
        yr.add(s.xy[i].second + s.errors[i]);
      }
    }
  }
  if (bar_series > 0) {
    xr.add(0.5);
    xr.add(xr.hi + 0.5);
    xr.lo = std::min(xr.lo, 0.5);
  }
  xr.finish();
  yr.finish();
  if (fixed_y_) yr.lo = y_lo_, yr.hi = y_hi_;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  o << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"15\">" << escape(title_) << "</text>\n";
  o << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    double xv = xr.lo + (xr.hi - xr.lo) * t / 4.0;
    double yv = yr.lo + (yr.hi - yr.lo) * t / 4.0;
    o << "<line x1=\"" << fmt(sx(xv)) << "\" y1=\"" << fmt(kTop + ph) << "\" x2=\"" << fmt(sx(xv)) << "\" y2=\""
      << fmt(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << fmt(kTop + ph + 18)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(xv) << "</text>\n";
    o << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(sy(yv)) << "\" x2=\"" << fmt(kLeft) << "\" y2=\""
      << fmt(sy(yv)) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(sy(yv) + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(yv) << "</text>\n";
  }
  o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 12)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(x_label_) << "</text>\n";
  o << "<text x=\"16\" y=\"" << fmt(kTop + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"13\" transform=\"rotate(-90 16 " << fmt(kTop + ph / 2) << ")\">" << escape(y_label_)
    << "</text>\n";

  const double slot = bar_series > 0 ? 0.8 / static_cast<double>(bar_series) : 0.0;
  std::size_t bar_index = 0;
  for (std::size_t k = 0; k < series_.size(); ++k) {
    const auto& s = series_[k];
    const char* color = kPalette[k % std::size(kPalette)];
    o << "<g fill=\"" << color << "\" stroke=\"" << color << "\">\n";
    if (s.kind == Kind::kLine) {
      std::string points;
      for (const auto& [x, y] : s.xy) {
        if (!std::isfinite(y)) continue;
        points += (points.empty() ? "" : " ") + fmt(sx(x)) + "," + fmt(sy(y));
      }
      o << "<polyline fill=\"none\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.xy.size(); ++i) {
      auto [x, y] = s.xy[i];
      if (!std::isfinite(y)) continue;
      if (s.kind == Kind::kBars) {
        double left = x - 0.4 + slot * static_cast<double>(bar_index);
        double top = sy(std::max(y, 0.0));
        double bottom = sy(std::min(y, 0.0));
        o << "<rect x=\"" << fmt(sx(left)) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(sx(left + slot) - sx(left))
          << "\" height=\"" << fmt(bottom - top) << "\" stroke=\"none\"/>\n";
        continue;
      }
      o << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y)) << "\" r=\"" << (s.kind == Kind::kPoints ? 2 : 3)
        << "\"/>\n";
      if (!s.errors.empty() && std::isfinite(s.errors[i]) && s.errors[i] > 0.0) {
        o << "<line x1=\"" << fmt(sx(x)) << "\" y1=\"" << fmt(sy(y - s.errors[i])) << "\" x2=\"" << fmt(sx(x))
          << "\" y2=\"" << fmt(sy(y + s.errors[i])) << "\"/>\n";
      }
    }
    if (s.kind == Kind::kBars) ++bar_index;
    o << "</g>\n";
    double ly = kTop + 12 + 18 * static_cast<double>(k);
    o << "<rect x=\"" << fmt(kWidth - kRight + 12) << "\" y=\"" << fmt(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
      << color << "\"/>\n";
    o << "<text x=\"" << fmt(kWidth - kRight + 28) << "\" y=\"" << fmt(ly) << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">" << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir + "'" + (ec ? ": " + ec.message() : ""));
  }
}

std::vector<std::string> emit_figures(const EvaluationReport& report, const Dataset& dataset,
                                      const std::string& out_dir) {
  ensure_directory(out_dir);
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& csv, const SvgChart* chart) {
    auto base = (std::filesystem::path(out_dir) / name).string();
    write_text(base + ".csv", csv);
    written.push_back(base + ".csv");
    if (chart) {
      write_text(base + ".svg", chart->render());
      written.push_back(base + ".svg");
    }
  };
  const auto last = static_cast<std::size_t>(report.horizons - 1);
  const auto& fr = report.first_round;

  {  // validation scatter at the last horizon, first round
    std::ostringstream csv;
    csv << "author_id,actual";
    for (const auto& p : report.predictors) csv << ',' << predictor_name(p.kind);
    csv << '\n';
    SvgChart chart("Predicted vs actual, horizon " + std::to_string(report.horizons), "actual", "predicted");
    std::vector<std::vector<std::pair<double, double>>> points(report.predictors.size());
    for (std::size_t k = 0; k < fr.authors.size(); ++k) {
      const auto& a = dataset.authors[fr.authors[k]];
      csv << a.author_id << ',' << format_number(a.target[last]);
      for (std::size_t p = 0; p < report.predictors.size(); ++p) {
        double v = fr.series[p][k][last];
        csv << ',' << format_number(v);
        points[p].emplace_back(a.target[last], v);
      }
      csv << '\n';
    }
    for (std::size_t p = 0; p < report.predictors.size(); ++p) {
      chart.add_points(predictor_name(report.predictors[p].kind), std::move(points[p]));
    }
    emit("fig2_scatter", csv.str(), &chart);
  }

  {  // R^2 against horizon
    std::ostringstream csv;
    csv << "predictor,horizon,r2_mean,r2_std\n";
    SvgChart chart("R^2 by forecast horizon", "years after cutoff", "R^2");
    for (const auto& p : report.predictors) {
      std::vector<std::pair<double, double>> xy;
      std::vector<double> err;
      for (std::size_t h = 0; h < p.r2_summary.size(); ++h) {
        csv << predictor_name(p.kind) << ',' << h + 1 << ',' << format_number(p.r2_summary[h].mean) << ','
            << format_number(p.r2_summary[h].std) << '\n';
        xy.emplace_back(static_cast<double>(h + 1), p.r2_summary[h].mean);
        err.push_back(p.r2_summary[h].std);
      }
      chart.add_line(predictor_name(p.kind), std::move(xy), std::move(err));
    }
    emit("fig3_r2_by_horizon", csv.str(), &chart);
  }

  {  // per-round values
    std::ostringstream csv;
    csv << "predictor,round,seed,r2_last,r_last\n";
    SvgChart chart("R^2 at horizon " + std::to_string(report.horizons) + " per round", "round", "R^2");
    for (const auto& p : report.predictors) {
      std::vector<double> heights;
      for (std::size_t r = 0; r < p.r2.size(); ++r) {
        csv << predictor_name(p.kind) << ',' << r << ',' << report.round_seeds[r] << ','
            << format_number(p.r2[r][last]) << ',' << format_number(p.r_final[r]) << '\n';
        heights.push_back(p.r2[r][last]);
      }
      chart.add_bars(predictor_name(p.kind), std::move(heights));
    }
    emit("fig4_rounds", csv.str(), &chart);
  }

  {  // example trajectories chosen by quantiles of the final actual value
    std::vector<std::size_t> order(fr.authors.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& ra = dataset.authors[fr.authors[a]];
      const auto& rb = dataset.authors[fr.authors[b]];
      return std::tie(ra.target[last], ra.author_id) < std::tie(rb.target[last], rb.author_id);
    });
    std::vector<std::pair<double, std::size_t>> picks;
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      if (order.empty()) break;
      auto k = order[static_cast<std::size_t>(q * static_cast<double>(order.size() - 1))];
      if (picks.empty() || picks.back().second != k) picks.emplace_back(q, k);
    }
    std::ostringstream csv;
    csv << "author_id,quantile,horizon,actual";
    for (const auto& p : report.predictors) csv << ',' << predictor_name(p.kind);
    csv << '\n';
    SvgChart chart("Example trajectories", "years after cutoff", "target");
    for (const auto& [q, k] : picks) {
      const auto& a = dataset.authors[fr.authors[k]];
      std::vector<std::pair<double, double>> actual;
      std::vector<std::pair<double, double>> predicted;
      for (std::size_t h = 0; h <= last; ++h) {
        csv << a.author_id << ',' << format_number(q) << ',' << h + 1 << ',' << format_number(a.target[h]);
        for (std::size_t p = 0; p < report.predictors.size(); ++p) csv << ',' << format_number(fr.series[p][k][h]);
        csv << '\n';
        actual.emplace_back(static_cast<double>(h + 1), a.target[h]);
        predicted.emplace_back(static_cast<double>(h + 1), fr.series[0][k][h]);
      }
      chart.add_points(a.author_id + " actual", std::move(actual));
      chart.add_line(a.author_id + " " + predictor_name(report.predictors[0].kind), std::move(predicted));
    }
    emit("fig5_trajectories", csv.str(), &chart);
  }

  {
    std::ostringstream csv;
    csv << "predictor,metric,horizon,mean,std\n";
    for (const auto& p : report.predictors) {
      for (std::size_t h = 0; h < p.r2_summary.size(); ++h) {
        csv << predictor_name(p.kind) << ",r2," << h + 1 << ',' << format_number(p.r2_summary[h].mean) << ','
            << format_number(p.r2_summary[h].std) << '\n';
      }
      csv << predictor_name(p.kind) << ",r," << report.horizons << ',' << format_number(p.r_summary.mean) << ','
          << format_number(p.r_summary.std) << '\n';
    }
    emit("summary", csv.str(), nullptr);
  }

  {
    std::ostringstream csv;
    csv << "key,value\n";
    csv << "task," << task_name(report.task) << '\n';
    csv << "rounds," << report.rounds << '\n';
    csv << "horizons," << report.horizons << '\n';
    csv << "train_count," << report.train_count << '\n';
    csv << "validation_count," << report.validation_count << '\n';
    csv << "broadness_source," << dataset.broadness_source << '\n';
    csv << "fingerprint," << report.fingerprint << '\n';
    emit("report_meta", csv.str(), nullptr);
  }
  return written;
}

std::vector<std::string> emit_epoch_figures(const EpochStudyReport& report, const std::string& out_dir) {
  ensure_directory(out_dir);
  std::vector<std::string> written;
  auto base = (std::filesystem::path(out_dir) / "epoch_study").string();
  std::ostringstream rounds;
  rounds << "checkpoint,round,horizon,r2\n";
  for (std::size_t c = 0; c < report.checkpoints.size(); ++c) {
    for (std::size_t r = 0; r < report.r2[c].size(); ++r) {
      for (std::size_t h = 0; h < report.r2[c][r].size(); ++h) {
        rounds << report.checkpoints[c] << ',' << r << ',' << h + 1 << ',' << format_number(report.r2[c][r][h]) << '\n';
      }
    }
  }
  write_text(base + "_rounds.csv", rounds.str());
  written.push_back(base + "_rounds.csv");

  std::ostringstream csv;
  csv << "checkpoint,horizon,r2_mean,r2_std\n";
  SvgChart chart("R^2 by horizon per training length", "years after cutoff", "R^2");
  for (std::size_t c = 0; c < report.checkpoints.size(); ++c) {
    std::vector<std::pair<double, double>> xy;
    std::vector<double> err;
    for (std::size_t h = 0; h < report.averaged[c].size(); ++h) {
      const auto& m = report.averaged[c][h];
      csv << report.checkpoints[c] << ',' << h + 1 << ',' << format_number(m.mean) << ',' << format_number(m.std)
          << '\n';
      xy.emplace_back(static_cast<double>(h + 1), m.mean);
      err.push_back(m.std);
    }
    chart.add_line(std::to_string(report.checkpoints[c]) + " epochs", std::move(xy), std::move(err));
  }
  write_text(base + ".csv", csv.str());
  write_text(base + ".svg", chart.render());
  written.push_back(base + ".csv");
  written.push_back(base + ".svg");
  return written;
}

std::vector<std::string> emit_ablation_figures(const AblationReport& report, const std::string& out_dir) {
  ensure_directory(out_dir);
  auto base = (std::filesystem::path(out_dir) / "ablation").string();
  std::ostringstream rounds;
  rounds << "removed,round,horizon,ratio\n";
  std::ostringstream csv;
  csv << "removed,horizon,ratio_mean,ratio_std\n";
  SvgChart chart("R^2 ratio with input removed", "removed input", "R^2 ratio");
  for (std::size_t i = 0; i < report.horizons.size(); ++i) {
    std::vector<double> heights;
    for (const auto& e : report.entries) heights.push_back(e.ratio_summary[i].mean);
    chart.add_bars("n=" + std::to_string(report.horizons[i]), std::move(heights));
  }
  for (const auto& e : report.entries) {
    for (std::size_t i = 0; i < e.horizons.size(); ++i) {
      csv << e.removed << ',' << e.horizons[i] << ',' << format_number(e.ratio_summary[i].mean) << ','
          << format_number(e.ratio_summary[i].std) << '\n';
    }
    for (std::size_t r = 0; r < e.ratios.size(); ++r) {
      for (std::size_t i = 0; i < e.horizons.size(); ++i) {
        rounds << e.removed << ',' << r << ',' << e.horizons[i] << ',' << format_number(e.ratios[r][i]) << '\n';
      }
    }
  }
  std::ostringstream legend;
  legend << "index,removed\n";
  for (std::size_t k = 0; k < report.entries.size(); ++k) legend << k + 1 << ',' << report.entries[k].removed << '\n';
  write_text(base + ".csv", csv.str());
  write_text(base + "_rounds.csv", rounds.str());
  write_text(base + "_index.csv", legend.str());
  write_text(base + ".svg", chart.render());
  return {base + ".csv", base + "_rounds.csv", base + "_index.csv", base + ".svg"};
}

std::vector<std::string> emit_hirsch_grid(const HirschGrid& grid, const std::string& out_dir) {
  ensure_directory(out_dir);
  auto base = (std::filesystem::path(out_dir) / "hirsch_grid").string();
  std::ostringstream csv;
  csv << "quantity";
  for (const auto& n : grid.names) csv << ',' << n;
  csv << '\n';
  for (std::size_t a = 0; a < 5; ++a) {
    csv << grid.names[a];
    for (std::size_t b = 0; b < 5; ++b) csv << ',' << format_number(grid.correlations(a, b));
    csv << '\n';
  }
  std::ostringstream values;
  values << "author_id";
  for (const auto& n : grid.names) values << ',' << n;
  values << '\n';
  for (std::size_t i = 0; i < grid.author_ids.size(); ++i) {
    values << grid.author_ids[i];
    for (std::size_t q = 0; q < 5; ++q) values << ',' << format_number(grid.values(i, q));
    values << '\n';
  }

  std::ostringstream svg;
  const double cell = 70, left = 130, top = 50;
  const double size = left + 5 * cell + 20;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
      << size << ' ' << size << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << size << "\" height=\"" << size << "\" fill=\"white\"/>\n";
  for (std::size_t a = 0; a < 5; ++a) {
    svg << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(top + cell * (a + 0.5) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << escape(grid.names[a]) << "</text>\n";
    svg << "<text x=\"" << fmt(left + cell * (a + 0.5)) << "\" y=\"" << fmt(top - 8)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << escape(grid.names[a])
        << "</text>\n";
    for (std::size_t b = 0; b < 5; ++b) {
      double r = grid.correlations(a, b);
      int shade = std::isfinite(r) ? static_cast<int>(255 - 200 * std::clamp(std::abs(r), 0.0, 1.0)) : 220;
      char color[16];
      std::snprintf(color, sizeof color, "#%02x%02xff", shade, shade);
      svg << "<rect x=\"" << fmt(left + cell * b) << "\" y=\"" << fmt(top + cell * a) << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"" << color << "\" stroke=\"white\"/>\n";
      svg << "<text x=\"" << fmt(left + cell * (b + 0.5)) << "\" y=\"" << fmt(top + cell * (a + 0.5) + 4)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
          << (std::isfinite(r) ? fmt(r) : std::string("n/a")) << "</text>\n";
    }
  }
  svg << "</svg>\n";

  write_text(base + ".csv", csv.str());
  write_text(base + "_values.csv", values.str());
  write_text(base + ".svg", svg.str());
  return {base + ".csv", base + "_values.csv", base + ".svg"};
}

}  // namespace citecast
