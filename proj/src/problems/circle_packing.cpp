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

#include "llmevo/problems/circle_packing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace llmevo::circles {
namespace {

double center_distance(const Circle& a, const Circle& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void project_centers(Layout& layout) {
  for (auto& c : layout) {
    c.r = std::min(c.r, 0.5);
    c.x = std::clamp(c.x, c.r, 1.0 - c.r);
    c.y = std::clamp(c.y, c.r, 1.0 - c.r);
  }
}

// Jacobi-style sweep: every overlapping pair is pushed apart by half its
// overlap each, displacements accumulated and applied with damping 0.5.
void separate(Layout& layout, std::vector<double>& dx, std::vector<double>& dy) {
  const std::size_t n = layout.size();
  std::fill(dx.begin(), dx.end(), 0.0);
  std::fill(dy.begin(), dy.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double ex = layout[j].x - layout[i].x;
      double ey = layout[j].y - layout[i].y;
      double d = std::hypot(ex, ey);
      const double overlap = layout[i].r + layout[j].r - d;
      if (overlap <= 0.0) continue;
      if (d < 1e-12) {
        // Coincident centers: split along a pair-specific fixed direction.
        const double angle = 2.399963229728653 * static_cast<double>(i * n + j);
        ex = std::cos(angle);
        ey = std::sin(angle);
        d = 1.0;
      }
      const double push = 0.5 * overlap / d;
      dx[i] -= ex * push;
      dy[i] -= ey * push;
      dx[j] += ex * push;
      dy[j] += ey * push;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    layout[i].x += 0.5 * dx[i];
    layout[i].y += 0.5 * dy[i];
  }
}

void grow_each(Layout& layout, std::size_t passes) {
  const std::size_t n = layout.size();
  for (std::size_t pass = 0; pass < passes; ++pass) {
    for (std::size_t i = 0; i < n; ++i) {
      auto& c = layout[i];
      double room = std::min({c.x, 1.0 - c.x, c.y, 1.0 - c.y});
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) room = std::min(room, center_distance(c, layout[j]) - layout[j].r);
      }
      if (room > c.r) c.r = room;
    }
  }
}

Layout finalize(Layout layout) {
  for (auto& c : layout) {
    c.x = std::clamp(c.x, 0.0, 1.0);
    c.y = std::clamp(c.y, 0.0, 1.0);
  }
  const double s = uniform_growth_factor(layout);
  for (auto& c : layout) c.r *= s;
  grow_each(layout, 3);
  return layout;
}

enum class RadiusMode { per_circle, shared };

Layout relax(Layout layout, const RepairOptions& opt, RadiusMode mode) {
  const std::size_t n = layout.size();
  std::vector<double> dx(n), dy(n);
  for (auto& c : layout) c.r = std::max(c.r, opt.min_radius);
  const auto iters = static_cast<double>(opt.iterations);
  for (std::size_t it = 0; it < opt.iterations; ++it) {
    const double delta = opt.growth_step * (1.0 - static_cast<double>(it) / iters);
    for (auto& c : layout) c.r = std::min(c.r + delta, 0.5);
    for (std::size_t sweep = 0; sweep < opt.separation_sweeps; ++sweep) {
      separate(layout, dx, dy);
      project_centers(layout);
    }
    if (mode == RadiusMode::per_circle) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const double o = layout[i].r + layout[j].r - center_distance(layout[i], layout[j]);
          if (o > 0.0) {
            layout[i].r -= o * opt.shrink_fraction;
            layout[j].r -= o * opt.shrink_fraction;
          }
        }
      }
      for (auto& c : layout) c.r = std::max(c.r, opt.min_radius);
    } else {
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          worst = std::max(worst, layout[i].r + layout[j].r -
                                      center_distance(layout[i], layout[j]));
        }
      }
      const double shared = std::max(layout.front().r - worst * opt.shrink_fraction,
                                     opt.min_radius);
      for (auto& c : layout) c.r = shared;
    }
  }
  return finalize(std::move(layout));
}

std::vector<double> scan_numbers(std::string_view text, std::string* error) {
  std::vector<double> out;
  std::string buf(text);
  const char* p = buf.c_str();
  const char* end = p + buf.size();
  while (p < end) {
    const char c = *p;
    const bool starts = std::isdigit(static_cast<unsigned char>(c)) ||
                        ((c == '-' || c == '+' || c == '.') && p + 1 < end &&
                         (std::isdigit(static_cast<unsigned char>(p[1])) || p[1] == '.'));
    if (!starts) {
      ++p;
      continue;
    }
    char* stop = nullptr;
    const double v = std::strtod(p, &stop);
    if (stop == p) {
      ++p;
      continue;
    }
    if (!std::isfinite(v)) {
      if (error) *error = "non-finite number";
      return {};
    }
    out.push_back(v);
    p = stop;
  }
  return out;
}

std::size_t find_keyword(std::string_view text, std::string_view word) {
  for (std::size_t i = 0; i + word.size() <= text.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < word.size(); ++k) {
      if (std::tolower(static_cast<unsigned char>(text[i + k])) != word[k]) {
        match = false;
        break;
      }
    }
    if (match) return i;
  }
  return std::string_view::npos;
}

}  // namespace

double max_overlap(const Layout& layout) {
  double worst = 0.0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    for (std::size_t j = i + 1; j < layout.size(); ++j) {
      worst = std::max(worst,
                       layout[i].r + layout[j].r - center_distance(layout[i], layout[j]));
    }
  }
  return worst;
}

double max_boundary_violation(const Layout& layout) {
  double worst = 0.0;
  for (const auto& c : layout) {
    worst = std::max({worst, c.r - c.x, c.x + c.r - 1.0, c.r - c.y, c.y + c.r - 1.0});
  }
  return worst;
}

double radius_sum(const Layout& layout) {
  return std::accumulate(layout.begin(), layout.end(), 0.0,
                         [](double acc, const Circle& c) { return acc + c.r; });
}

bool is_feasible(const Layout& layout, double tol) {
  for (const auto& c : layout) {
    if (!(c.r > 0.0) || !std::isfinite(c.x) || !std::isfinite(c.y)) return false;
  }
  return max_overlap(layout) <= tol && max_boundary_violation(layout) <= tol;
}

double uniform_growth_factor(const Layout& layout) {
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& c = layout[i];
    if (c.r <= 0.0) continue;
    s = std::min({s, c.x / c.r, (1.0 - c.x) / c.r, c.y / c.r, (1.0 - c.y) / c.r});
    for (std::size_t j = i + 1; j < layout.size(); ++j) {
      const double rr = c.r + layout[j].r;
      if (rr > 0.0) s = std::min(s, center_distance(c, layout[j]) / rr);
    }
  }
  if (!std::isfinite(s)) return 1.0;
  return std::max(0.0, s * (1.0 - 1e-12));
}

Layout feasible_projection(const Layout& input) {
  Layout layout = input;
  for (auto& c : layout) c.r = std::clamp(c.r, 0.0, 0.5);
  project_centers(layout);
  return finalize(std::move(layout));
}

RepairResult repair(const Layout& input, const RepairOptions& options) {
  RepairResult result;
  if (input.empty()) {
    result.converged = true;
    result.trajectory = "input";
    return result;
  }
  Layout start = input;
  for (auto& c : start) {
    if (!std::isfinite(c.x)) c.x = 0.5;
    if (!std::isfinite(c.y)) c.y = 0.5;
    if (!std::isfinite(c.r)) c.r = options.min_radius;
    c.r = std::clamp(c.r, options.min_radius, 0.5);
  }

  const Layout projection = feasible_projection(start);
  result.input_projection_sum = radius_sum(projection);

  Layout equalized = start;
  const double mean_r = radius_sum(start) / static_cast<double>(start.size());
  for (auto& c : equalized) c.r = mean_r;

  struct Candidate {
    const char* name;
    Layout layout;
  };
  std::vector<Candidate> candidates;
  candidates.push_back({"input", relax(start, options, RadiusMode::per_circle)});
  candidates.push_back({"equalized", relax(equalized, options, RadiusMode::per_circle)});
  candidates.push_back({"common", relax(equalized, options, RadiusMode::shared)});
  candidates.push_back({"projection", projection});

  const Candidate* best = nullptr;
  double best_sum = -1.0;
  for (const auto& cand : candidates) {
    if (!is_feasible(cand.layout)) continue;
    const double s = radius_sum(cand.layout);
    if (s > best_sum) {
      best_sum = s;
      best = &cand;
    }
  }
  if (best == nullptr) {
    result.layout = projection;
    result.trajectory = "projection";
    result.converged = false;
    return result;
  }
  result.layout = best->layout;
  result.trajectory = best->name;
  result.converged = std::all_of(result.layout.begin(), result.layout.end(),
                                 [&](const Circle& c) { return c.r >= options.min_radius; });
  return result;
}

std::string encode(const Layout& layout) {
  std::string out = "centers = np.array([\n";
  for (std::size_t i = 0; i < layout.size(); ++i) {
    out += fmt::format("    [{:.6f}, {:.6f}]{}\n", layout[i].x, layout[i].y,
                       i + 1 < layout.size() ? "," : "");
  }
  out += "])\nradii = np.array([\n    ";
  for (std::size_t i = 0; i < layout.size(); ++i) {
    out += fmt::format("{:.6f}{}", layout[i].r, i + 1 < layout.size() ? ", " : "");
  }
  out += "\n])";
  return out;
}

ParsedLayout parse(std::string_view text, std::size_t n) {
  ParsedLayout out;
  std::string error;
  const auto centers_at = find_keyword(text, "centers");
  const auto radii_at = find_keyword(text, "radii");
  std::vector<double> centers;
  std::vector<double> radii;
  if (centers_at != std::string_view::npos && radii_at != std::string_view::npos) {
    if (centers_at < radii_at) {
      centers = scan_numbers(text.substr(centers_at, radii_at - centers_at), &error);
      if (error.empty()) radii = scan_numbers(text.substr(radii_at), &error);
    } else {
      radii = scan_numbers(text.substr(radii_at, centers_at - radii_at), &error);
      if (error.empty()) centers = scan_numbers(text.substr(centers_at), &error);
    }
  } else {
    // Bare (x, y, r) triples.
    const auto all = scan_numbers(text, &error);
    if (error.empty()) {
      if (all.size() % 3 != 0) {
        out.error = "expected (x, y, r) triples";
        return out;
      }
      for (std::size_t i = 0; i + 2 < all.size(); i += 3) {
        centers.push_back(all[i]);
        centers.push_back(all[i + 1]);
        radii.push_back(all[i + 2]);
      }
    }
  }
  if (!error.empty()) {
    out.error = error;
    return out;
  }
  if (centers.size() != 2 * radii.size()) {
    out.error = fmt::format("{} center coordinates for {} radii", centers.size(), radii.size());
    return out;
  }
  if (radii.size() != n) {
    out.error = fmt::format("wrong circle count: expected {}, got {}", n, radii.size());
    return out;
  }
  Layout layout(n);
  for (std::size_t i = 0; i < n; ++i) {
    layout[i] = {centers[2 * i], centers[2 * i + 1], radii[i]};
  }
  out.layout = std::move(layout);
  return out;
}

std::string canonical_key(const Layout& layout) {
  Layout sorted = layout;
  std::sort(sorted.begin(), sorted.end(), [](const Circle& a, const Circle& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.r < b.r;
  });
  std::string key;
  for (const auto& c : sorted) {
    key += fmt::format("{:.9f},{:.9f},{:.9f};", c.x, c.y, c.r);
  }
  return key;
}

double distance(const Layout& a, const Layout& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.size() != b.size()) return 1.0;
  auto by_position = [](const Circle& p, const Circle& q) {
    if (p.x != q.x) return p.x < q.x;
    return p.y < q.y;
  };
  Layout sa = a;
  Layout sb = b;
  std::sort(sa.begin(), sa.end(), by_position);
  std::sort(sb.begin(), sb.end(), by_position);
  double total = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double dx = std::clamp(sa[i].x, 0.0, 1.0) - std::clamp(sb[i].x, 0.0, 1.0);
    const double dy = std::clamp(sa[i].y, 0.0, 1.0) - std::clamp(sb[i].y, 0.0, 1.0);
    total += std::hypot(dx, dy);
  }
  return std::min(1.0, total / static_cast<double>(sa.size()) / std::sqrt(2.0));
}

}  // namespace llmevo::circles
