#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "msst/features.hpp"
#include "msst/stats.hpp"

namespace msst {

struct BoxPlotSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double whisker_low = 0.0;   // most extreme values within 1.5 IQR of the box
  double whisker_high = 0.0;
  std::vector<double> outliers;
};

// Quantile by linear interpolation between order statistics (inclusive),
// p in [0, 1].
double quantile(std::span<const double> values, double p);

BoxPlotSummary five_number_summary(std::span<const double> values);

struct BoxPlotAnnotations {
  double overall_p = 1.0;
  double min_pairwise_p = 1.0;
  double max_pairwise_p = 1.0;
  Gesture min_pair_a = Gesture::rest;
  Gesture min_pair_b = Gesture::rest;
  Gesture max_pair_a = Gesture::rest;
  Gesture max_pair_b = Gesture::rest;
};

// Standalone SVG: one box per gesture in fixed X,E,F,U,R,G,B,D,S,P order,
// with the overall and extreme pairwise p values as text elements and each
// box's five-number summary embedded in a <desc> element.
void render_boxplot_svg(const std::vector<FeatureRecord>& table, std::size_t feature_index,
                        const BoxPlotAnnotations& annotations, std::ostream& os);

// Extreme off-diagonal entries of a pairwise matrix.
BoxPlotAnnotations annotate_from_pairwise(const PairwiseKwResult& pairwise, double overall_p);

}  // namespace msst
