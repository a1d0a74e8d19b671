// Copyright 2026 The llmevo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "llmevo/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "llmevo/core/events.hpp"
#include "llmevo/core/run.hpp"

namespace llmevo::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string xml_escape(std::string_view s) {
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

/// 1, 2 or 5 times a power of ten, giving about `target` ticks over span.
double tick_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

std::string format_tick(double v, double step) {
  if (step >= 1.0) return fmt::format("{:.0f}", v);
  const int digits = std::clamp(static_cast<int>(std::ceil(-std::log10(step))), 1, 6);
  return fmt::format("{:.{}f}", v, digits);
}

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{:.4f}", *v) : "-"; }

}  // namespace

RunSeries load_run(const fs::path& run_dir) {
  RunSeries series;
  series.label = run_dir.filename().string();
  if (series.label.empty()) series.label = run_dir.parent_path().filename().string();

  const fs::path manifest_path = run_dir / "manifest.json";
  if (fs::exists(run_dir / "FAILED")) series.partial = true;
  if (std::ifstream in(manifest_path); in) {
    const auto manifest = json::parse(in, nullptr, false);
    if (manifest.is_discarded() || manifest.value("status", "") != "complete") series.partial = true;
  } else {
    series.partial = true;
  }

  std::vector<metrics::MetricSnapshot> from_events;
  if (std::ifstream in(run_dir / "events.jsonl"); in) {
    std::size_t bad = 0;
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      const auto ev = json::parse(line, nullptr, false);
      if (ev.is_discarded() || !ev.is_object()) {
        ++bad;
        continue;
      }
      const auto type = ev.value("event", "");
      try {
        if (type == "candidate" && ev.value("status", "") == "evaluated") {
          series.call_fitness.push_back(ev.value("valid", false) ? ev.at("fitness").get<double>()
                                                                 : 0.0);
        } else if (type == "generation_end") {
          from_events.push_back(snapshot_from_json(ev.at("snapshot")));
        }
      } catch (const json::exception&) {
        ++bad;
      }
    }
    if (bad > 0) {
      series.warnings.push_back(fmt::format("{}: skipped {} malformed event line(s)", series.label, bad));
    }
  } else {
    series.warnings.push_back(fmt::format("{}: events.jsonl missing", series.label));
  }

  if (std::ifstream in(run_dir / "metrics.csv"); in) {
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (auto row = metrics::parse_csv_row(line)) series.generations.push_back(*row);
    }
  } else {
    series.warnings.push_back(
        fmt::format("{}: metrics.csv missing; report built from events.jsonl only", series.label));
    series.generations = std::move(from_events);
  }
  return series;
}

std::string render_svg(const Chart& chart) {
  constexpr double width = 720, height = 440;
  constexpr double left = 70, right = 20, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& c : chart.curves) {
    for (const auto& [x, y] : c.points) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (x_hi - x_lo < 1e-12) x_hi = x_lo + 1.0;
  if (y_hi - y_lo < 1e-12) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double x_step = tick_step(x_hi - x_lo, 6);
  const double y_step = tick_step(y_hi - y_lo, 5);
  x_lo = std::floor(x_lo / x_step) * x_step;
  x_hi = std::ceil(x_hi / x_step) * x_step;
  y_lo = std::floor(y_lo / y_step) * y_step;
  y_hi = std::ceil(y_hi / y_step) * y_step;

  const auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto py = [&](double y) { return top + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{3}</text>\n",
      width, height, width / 2, xml_escape(chart.title));

  for (double x = x_lo; x <= x_hi + x_step * 1e-9; x += x_step) {
    svg += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1}\" x2=\"{0:.1f}\" y2=\"{2}\" stroke=\"#e5e5e5\"/>"
        "<text x=\"{0:.1f}\" y=\"{3}\" text-anchor=\"middle\">{4}</text>\n",
        px(x), top, top + plot_h, top + plot_h + 16, format_tick(x, x_step));
  }
  for (double y = y_lo; y <= y_hi + y_step * 1e-9; y += y_step) {
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.1f}\" x2=\"{2}\" y2=\"{1:.1f}\" stroke=\"#e5e5e5\"/>"
        "<text x=\"{3}\" y=\"{4:.1f}\" text-anchor=\"end\">{5}</text>\n",
        left, py(y), left + plot_w, left - 6, py(y) + 4, format_tick(y, y_step));
  }
  svg += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n"
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n"
      "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
      left, top, plot_w, plot_h, left + plot_w / 2, height - 18, xml_escape(chart.x_label),
      top + plot_h / 2, top + plot_h / 2, xml_escape(chart.y_label));

  for (std::size_t i = 0; i < chart.curves.size(); ++i) {
    const auto& c = chart.curves[i];
    const char* color = kPalette[i % std::size(kPalette)];
    std::string pts;
    for (const auto& [x, y] : c.points) pts += fmt::format("{:.1f},{:.1f} ", px(x), py(y));
    if (c.points.size() == 1) {
      svg += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"{}\"/>\n",
                         px(c.points[0].first), py(c.points[0].second), color);
    } else if (!c.points.empty()) {
      svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\" points=\"{}\"/>\n",
                         color, pts);
    }
    const double ly = top + 14 + 16.0 * static_cast<double>(i);
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.1f}\" x2=\"{2}\" y2=\"{1:.1f}\" stroke=\"{3}\" stroke-width=\"2\"/>"
        "<text x=\"{4}\" y=\"{5:.1f}\">{6}</text>\n",
        left + 10, ly, left + 30, color, left + 36, ly + 4, xml_escape(c.label));
  }
  svg += "</svg>\n";
  return svg;
}

std::string final_table(std::span<const RunSeries> runs) {
  std::size_t label_w = 3;
  for (const auto& r : runs) label_w = std::max(label_w, r.label.size() + (r.partial ? 10 : 0));
  std::string out = fmt::format("{:<{}}  {:>5} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}\n",
                                "run", label_w, "gen", "calls", "top1", "top10", "auc10", "hv",
                                "unique", "valid", "divers");
  for (const auto& r : runs) {
    const std::string label = r.partial ? r.label + " (partial)" : r.label;
    if (r.generations.empty()) {
      out += fmt::format("{:<{}}  no generations recorded\n", label, label_w);
      continue;
    }
    const auto& s = r.generations.back();
    out += fmt::format("{:<{}}  {:>5} {:>8} {:>8} {:>8} {:>8.4f} {:>8.4f} {:>8} {:>8} {:>8}\n",
                       label, label_w, s.generation, s.consumed, cell(s.top1_f), cell(s.top10_f),
                       s.auc_top10, s.hypervolume, cell(s.uniqueness), cell(s.validity),
                       cell(s.diversity));
  }
  return out;
}

ReportOutput write_report(std::span<const fs::path> run_dirs, const fs::path& out_dir) {
  ReportOutput out;
  std::vector<RunSeries> runs;
  for (const auto& dir : run_dirs) {
    runs.push_back(load_run(dir));
    auto& r = runs.back();
    out.partial = out.partial || r.partial;
    out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
  }

  Chart fitness{"Best fitness vs oracle calls", "oracle calls", "best F so far", {}};
  Chart top10{"Top-10 mean fitness vs oracle calls", "oracle calls", "top-10 mean F", {}};
  Chart hv{"Hypervolume vs generation", "generation", "hypervolume", {}};
  for (const auto& r : runs) {
    Curve f{r.label, {}};
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.call_fitness.size(); ++i) {
      best = std::max(best, r.call_fitness[i]);
      f.points.emplace_back(static_cast<double>(i + 1), best);
    }
    Curve t{r.label, {}};
    Curve h{r.label, {}};
    for (const auto& s : r.generations) {
      if (s.top10_f) t.points.emplace_back(static_cast<double>(s.consumed), *s.top10_f);
      h.points.emplace_back(static_cast<double>(s.generation), s.hypervolume);
    }
    fitness.curves.push_back(std::move(f));
    top10.curves.push_back(std::move(t));
    hv.curves.push_back(std::move(h));
  }

  fs::create_directories(out_dir);
  for (const auto& [name, chart] : {std::pair{"fitness_vs_calls.svg", &fitness},
                                    std::pair{"top10_vs_calls.svg", &top10},
                                    std::pair{"hypervolume_vs_generation.svg", &hv}}) {
    const fs::path path = out_dir / name;
    write_file_atomic(path, render_svg(*chart));
    out.images.push_back(path);
  }

  out.text = final_table(runs);
  if (out.partial) out.text = "PARTIAL: at least one run did not complete\n" + out.text;
  write_file_atomic(out_dir / "report.txt", out.text);
  return out;
}

}  // namespace llmevo::cli
