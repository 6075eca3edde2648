#include "msst/boxplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace msst {

double quantile(std::span<const double> values, double p) {
  if (values.empty()) throw std::invalid_argument("empty value set");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile fraction outside [0,1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BoxPlotSummary five_number_summary(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty value set");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  BoxPlotSummary s;
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile(sorted, 0.25);
  s.median = quantile(sorted, 0.5);
  s.q3 = quantile(sorted, 0.75);

  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  s.whisker_low = s.q3;
  s.whisker_high = s.q1;
  bool any_inlier = false;
  for (double v : sorted) {
    if (v < lo_fence || v > hi_fence) {
      s.outliers.push_back(v);
    } else {
      if (!any_inlier) {
        s.whisker_low = v;
        any_inlier = true;
      }
      s.whisker_high = v;
    }
  }
  if (!any_inlier) {
    s.whisker_low = s.q1;
    s.whisker_high = s.q3;
  }
  return s;
}

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BoxPlotAnnotations annotate_from_pairwise(const PairwiseKwResult& pairwise, double overall_p) {
  BoxPlotAnnotations ann;
  ann.overall_p = overall_p;
  const std::size_t n = pairwise.gestures.size();
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = pairwise.at(i, j);
      if (first || p < ann.min_pairwise_p) {
        ann.min_pairwise_p = p;
        ann.min_pair_a = pairwise.gestures[i];
        ann.min_pair_b = pairwise.gestures[j];
      }
      if (first || p > ann.max_pairwise_p) {
        ann.max_pairwise_p = p;
        ann.max_pair_a = pairwise.gestures[i];
        ann.max_pair_b = pairwise.gestures[j];
      }
      first = false;
    }
  }
  return ann;
}

void render_boxplot_svg(const std::vector<FeatureRecord>& table, std::size_t feature_index,
                        const BoxPlotAnnotations& annotations, std::ostream& os) {
  if (table.empty()) throw std::invalid_argument("empty table");

  std::array<std::vector<double>, kGestureCount> groups;
  for (const auto& r : table) {
    groups[static_cast<std::size_t>(r.gesture)].push_back(feature_value(r, feature_index));
  }

  std::vector<std::pair<Gesture, BoxPlotSummary>> boxes;
  double vmin = 0.0, vmax = 0.0;
  bool have_range = false;
  for (std::size_t g = 0; g < kGestureCount; ++g) {
    if (groups[g].empty()) continue;
    BoxPlotSummary s = five_number_summary(groups[g]);
    if (!have_range) {
      vmin = s.min;
      vmax = s.max;
      have_range = true;
    } else {
      vmin = std::min(vmin, s.min);
      vmax = std::max(vmax, s.max);
    }
    boxes.emplace_back(static_cast<Gesture>(static_cast<int>(g)), std::move(s));
  }
  if (vmax == vmin) {
    vmin -= 0.5;
    vmax += 0.5;
  }

  constexpr double width = 900.0, height = 520.0;
  constexpr double left = 70.0, right = 30.0, top = 60.0, bottom = 50.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const double span = vmax - vmin;
  const auto y_of = [&](double v) { return top + plot_h * (1.0 - (v - vmin) / span); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "  <title>" << kFeatureNames[feature_index] << " by gesture</title>\n";
  os << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  os << "  <text x=\"" << left << "\" y=\"24\" font-size=\"16\">" << kFeatureNames[feature_index]
     << "  overall p=" << fmt(annotations.overall_p) << "</text>\n";
  os << "  <text x=\"" << left << "\" y=\"42\" font-size=\"12\">min pairwise p="
     << fmt(annotations.min_pairwise_p) << " (" << gesture_code(annotations.min_pair_a) << " vs "
     << gesture_code(annotations.min_pair_b) << "), max pairwise p="
     << fmt(annotations.max_pairwise_p) << " (" << gesture_code(annotations.max_pair_a) << " vs "
     << gesture_code(annotations.max_pair_b) << ")</text>\n";
  os << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
     << top + plot_h << "\" stroke=\"black\"/>\n";
  os << "  <line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
     << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";

  const double slot = plot_w / static_cast<double>(kGestureCount);
  const double box_w = slot * 0.5;
  std::size_t slot_index = 0;
  for (std::size_t g = 0; g < kGestureCount; ++g) {
    const char code = kGestureCodes[g];
    const double cx = left + slot * (static_cast<double>(slot_index) + 0.5);
    os << "  <text x=\"" << fmt(cx) << "\" y=\"" << height - 26.0
       << "\" font-size=\"14\" text-anchor=\"middle\">" << code << "</text>\n";
    ++slot_index;
    const auto it = std::find_if(boxes.begin(), boxes.end(), [&](const auto& b) {
      return gesture_code(b.first) == code;
    });
    if (it == boxes.end()) continue;
    const BoxPlotSummary& s = it->second;
    const double x0 = cx - box_w / 2.0;
    os << "  <g class=\"box\" data-gesture=\"" << code << "\">\n";
    os << "    <desc>gesture=" << code << " min=" << fmt17(s.min) << " q1=" << fmt17(s.q1)
       << " median=" << fmt17(s.median) << " q3=" << fmt17(s.q3) << " max=" << fmt17(s.max)
       << " outliers=" << s.outliers.size() << "</desc>\n";
    // whiskers
    os << "    <line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(y_of(s.whisker_low)) << "\" x2=\""
       << fmt(cx) << "\" y2=\"" << fmt(y_of(s.q1)) << "\" stroke=\"black\"/>\n";
    os << "    <line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(y_of(s.q3)) << "\" x2=\"" << fmt(cx)
       << "\" y2=\"" << fmt(y_of(s.whisker_high)) << "\" stroke=\"black\"/>\n";
    // box (degenerate boxes collapse to a line)
    os << "    <rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y_of(s.q3)) << "\" width=\""
       << fmt(box_w) << "\" height=\"" << fmt(std::max(y_of(s.q1) - y_of(s.q3), 0.0))
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "    <line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y_of(s.median)) << "\" x2=\""
       << fmt(x0 + box_w) << "\" y2=\"" << fmt(y_of(s.median))
       << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    for (double v : s.outliers) {
      os << "    <circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(y_of(v))
         << "\" r=\"2\" fill=\"none\" stroke=\"black\"/>\n";
    }
    os << "  </g>\n";
  }

  // y-axis ticks
  for (int i = 0; i <= 4; ++i) {
    const double v = vmin + span * static_cast<double>(i) / 4.0;
    const double y = y_of(v);
    os << "  <line x1=\"" << left - 4.0 << "\" y1=\"" << fmt(y) << "\" x2=\"" << left
       << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
    os << "  <text x=\"" << left - 8.0 << "\" y=\"" << fmt(y + 4.0)
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace msst
