#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "msst/features.hpp"

namespace msst {

// Ascending mid-ranks (tied values share the average of their positions).
std::vector<double> rank_with_ties(std::span<const double> values);

// (multiplicity) of each tied value group with multiplicity >= 2.
std::vector<std::size_t> tie_multiplicities(std::span<const double> values);

struct KwResult {
  double h = 0.0;               // tie-corrected statistic
  int df = 0;                   // group count - 1
  double p_value = 1.0;
  double tie_correction = 1.0;  // C = 1 - sum(t^3 - t) / (N^3 - N)
  std::vector<double> group_rank_sums;
  std::vector<std::size_t> group_sizes;
  std::vector<int> group_labels;
};

// Kruskal-Wallis H test of the rows grouped by group_ids. At least two
// distinct nonempty groups are required; if expected_labels is nonempty,
// every listed label must appear.
KwResult kruskal_wallis(std::span<const double> values, std::span<const int> group_ids,
                        std::span<const int> expected_labels = {});

// Upper tail of the chi-square distribution: Q(df/2, x/2) via the regularized
// incomplete gamma (series below a+1, continued fraction above), accurate to
// ~1e-13 relative down to p ~ 1e-300.
double chisq_survival(double x, int df);

// Symmetric matrix of two-group KW p-values over every gesture pair present
// in the table (diagonal 1). Gestures with no rows are excluded; their labels
// are reported in `excluded`.
struct PairwiseKwResult {
  std::vector<Gesture> gestures;  // row/column order
  std::vector<double> p;          // row-major [g][g]
  std::vector<Gesture> excluded;

  double at(std::size_t i, std::size_t j) const { return p[i * gestures.size() + j]; }
};

PairwiseKwResult pairwise_kw(const std::vector<FeatureRecord>& table, std::size_t feature_index);

enum class ScenarioKind { inter_subject, intra_subject };

struct Scenario {
  ScenarioKind kind = ScenarioKind::inter_subject;
  std::size_t subjects_per_block = 1;  // intra only
};

struct BlockResult {
  int first_subject = 0;
  int last_subject = 0;
  std::array<KwResult, 4> per_feature;
};

struct ScenarioReport {
  Scenario scenario;
  std::vector<BlockResult> blocks;       // one block for inter-subject
  std::array<double, 4> mean_p{};        // across blocks, per feature
};

// Inter-subject: one test per feature over the whole table. Intra-subject:
// tests over consecutive non-overlapping k-subject blocks plus the mean p per
// feature across blocks. Partial trailing blocks are dropped.
ScenarioReport scenario_runner(const std::vector<FeatureRecord>& table, const Scenario& scenario);

void write_kw_summary(const ScenarioReport& report, std::ostream& os);
void write_pairwise_csv(const PairwiseKwResult& result, std::ostream& os);

}  // namespace msst
