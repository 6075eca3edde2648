#include "msst/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

namespace msst {

std::vector<double> rank_with_ties(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty value set");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  }
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the mid-rank
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
    i = j + 1;
  }
  return ranks;
}

std::vector<std::size_t> tie_multiplicities(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> mult;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    if (j > i) mult.push_back(j - i + 1);
    i = j + 1;
  }
  return mult;
}

KwResult kruskal_wallis(std::span<const double> values, std::span<const int> group_ids,
                        std::span<const int> expected_labels) {
  if (values.size() != group_ids.size()) throw std::invalid_argument("length mismatch");
  if (values.empty()) throw std::invalid_argument("empty value set");

  std::map<int, std::size_t> counts;
  for (int g : group_ids) ++counts[g];
  for (int label : expected_labels) {
    if (counts.find(label) == counts.end())
      throw std::invalid_argument("group with 0 observations");
  }
  if (counts.size() < 2) throw std::invalid_argument("fewer than 2 groups");

  const std::vector<double> ranks = rank_with_ties(values);
  const double n = static_cast<double>(values.size());

  KwResult res;
  res.df = static_cast<int>(counts.size()) - 1;
  std::map<int, double> rank_sums;
  for (std::size_t i = 0; i < values.size(); ++i) rank_sums[group_ids[i]] += ranks[i];
  for (const auto& [label, count] : counts) {
    res.group_labels.push_back(label);
    res.group_sizes.push_back(count);
    res.group_rank_sums.push_back(rank_sums[label]);
  }

  // Accumulate sum of R_i^2 / n_i in value order, not label order, so
  // relabeling groups cannot change the result through reassociation.
  std::vector<std::pair<double, std::size_t>> terms;
  terms.reserve(res.group_labels.size());
  for (std::size_t i = 0; i < res.group_labels.size(); ++i) {
    terms.emplace_back(res.group_rank_sums[i], res.group_sizes[i]);
  }
  std::sort(terms.begin(), terms.end());
  double s = 0.0;  // sum of R_i^2 / n_i
  for (const auto& [rank_sum, size] : terms) {
    s += rank_sum * rank_sum / static_cast<double>(size);
  }
  // Grouped so untied integer inputs stay exact until the single division.
  const double h_raw = (12.0 * s - 3.0 * n * (n + 1.0) * (n + 1.0)) / (n * (n + 1.0));

  double tie_sum = 0.0;
  for (std::size_t t : tie_multiplicities(values)) {
    const double td = static_cast<double>(t);
    tie_sum += td * td * td - td;
  }
  const double correction = 1.0 - tie_sum / (n * n * n - n);

  if (correction <= 0.0) {
    // all observations equal
    res.h = 0.0;
    res.p_value = 1.0;
    res.tie_correction = 1.0;
    return res;
  }
  res.tie_correction = correction;
  res.h = std::max(h_raw / correction, 0.0);
  res.p_value = chisq_survival(res.h, res.df);
  return res;
}

namespace {

// lgamma without the signgam global, safe for concurrent callers.
double lgamma_positive(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

// Regularized lower incomplete gamma P(a, x) by power series, for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - lgamma_positive(a));
}

// Regularized upper incomplete gamma Q(a, x) by continued fraction (modified
// Lentz), for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - lgamma_positive(a));
}

}  // namespace

double chisq_survival(double x, int df) {
  if (x < 0.0) throw std::invalid_argument("negative value");
  if (df < 1) throw std::invalid_argument("degrees of freedom must be positive");
  if (x == 0.0) return 1.0;
  const double a = static_cast<double>(df) / 2.0;
  const double xs = x / 2.0;
  if (xs < a + 1.0) return 1.0 - gamma_p_series(a, xs);
  return gamma_q_continued_fraction(a, xs);
}

PairwiseKwResult pairwise_kw(const std::vector<FeatureRecord>& table, std::size_t feature_index) {
  PairwiseKwResult result;
  std::array<std::vector<double>, kGestureCount> per_gesture;
  for (const auto& r : table) {
    per_gesture[static_cast<std::size_t>(r.gesture)].push_back(feature_value(r, feature_index));
  }
  for (std::size_t g = 0; g < kGestureCount; ++g) {
    if (per_gesture[g].empty()) {
      result.excluded.push_back(static_cast<Gesture>(static_cast<int>(g)));
    } else {
      result.gestures.push_back(static_cast<Gesture>(static_cast<int>(g)));
    }
  }
  const std::size_t g = result.gestures.size();
  if (g < 2) throw std::invalid_argument("fewer than 2 groups");

  result.p.assign(g * g, 1.0);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = i + 1; j < g; ++j) {
      const auto& a = per_gesture[static_cast<std::size_t>(result.gestures[i])];
      const auto& b = per_gesture[static_cast<std::size_t>(result.gestures[j])];
      std::vector<double> values;
      std::vector<int> ids;
      values.reserve(a.size() + b.size());
      ids.reserve(a.size() + b.size());
      for (double v : a) {
        values.push_back(v);
        ids.push_back(0);
      }
      for (double v : b) {
        values.push_back(v);
        ids.push_back(1);
      }
      const KwResult kw = kruskal_wallis(values, ids);
      result.p[i * g + j] = kw.p_value;
      result.p[j * g + i] = kw.p_value;
    }
  }
  return result;
}

namespace {

KwResult feature_kw(const std::vector<FeatureRecord>& rows, std::size_t feature_index) {
  std::vector<double> values;
  std::vector<int> ids;
  values.reserve(rows.size());
  ids.reserve(rows.size());
  for (const auto& r : rows) {
    values.push_back(feature_value(r, feature_index));
    ids.push_back(static_cast<int>(r.gesture));
  }
  return kruskal_wallis(values, ids);
}

}  // namespace

ScenarioReport scenario_runner(const std::vector<FeatureRecord>& table, const Scenario& scenario) {
  if (table.empty()) throw std::invalid_argument("empty table");

  ScenarioReport report;
  report.scenario = scenario;

  std::set<int> subject_set;
  for (const auto& r : table) subject_set.insert(r.subject_id);
  const std::vector<int> subjects(subject_set.begin(), subject_set.end());

  if (scenario.kind == ScenarioKind::inter_subject) {
    BlockResult block;
    block.first_subject = subjects.front();
    block.last_subject = subjects.back();
    for (std::size_t f = 0; f < 4; ++f) block.per_feature[f] = feature_kw(table, f);
    report.blocks.push_back(std::move(block));
  } else {
    const std::size_t k = scenario.subjects_per_block;
    if (k == 0 || k > subjects.size())
      throw std::invalid_argument("subject block larger than subject pool");
    for (std::size_t start = 0; start + k <= subjects.size(); start += k) {
      const std::set<int> block_subjects(subjects.begin() + start, subjects.begin() + start + k);
      std::vector<FeatureRecord> rows;
      for (const auto& r : table) {
        if (block_subjects.count(r.subject_id)) rows.push_back(r);
      }
      BlockResult block;
      block.first_subject = subjects[start];
      block.last_subject = subjects[start + k - 1];
      for (std::size_t f = 0; f < 4; ++f) block.per_feature[f] = feature_kw(rows, f);
      report.blocks.push_back(std::move(block));
    }
  }

  for (std::size_t f = 0; f < 4; ++f) {
    double sum = 0.0;
    for (const auto& b : report.blocks) sum += b.per_feature[f].p_value;
    report.mean_p[f] = sum / static_cast<double>(report.blocks.size());
  }
  return report;
}

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_kw_summary(const ScenarioReport& report, std::ostream& os) {
  const bool inter = report.scenario.kind == ScenarioKind::inter_subject;
  os << "scenario=" << (inter ? "inter" : "intra:" + std::to_string(report.scenario.subjects_per_block))
     << " blocks=" << report.blocks.size() << "\n";
  for (const auto& block : report.blocks) {
    for (std::size_t f = 0; f < 4; ++f) {
      const KwResult& kw = block.per_feature[f];
      os << "feature=" << kFeatureNames[f];
      if (!inter) os << " subjects=" << block.first_subject << ".." << block.last_subject;
      os << " H=" << fmt17(kw.h) << " df=" << kw.df << " tie_correction="
         << fmt17(kw.tie_correction) << " p=" << fmt17(kw.p_value) << "\n";
    }
  }
  for (std::size_t f = 0; f < 4; ++f) {
    os << "mean_p feature=" << kFeatureNames[f] << " p=" << fmt17(report.mean_p[f]) << "\n";
  }
}

void write_pairwise_csv(const PairwiseKwResult& result, std::ostream& os) {
  os << "gesture";
  for (Gesture g : result.gestures) os << ',' << gesture_code(g);
  os << '\n';
  const std::size_t n = result.gestures.size();
  for (std::size_t i = 0; i < n; ++i) {
    os << gesture_code(result.gestures[i]);
    for (std::size_t j = 0; j < n; ++j) os << ',' << fmt17(result.at(i, j));
    os << '\n';
  }
}

}  // namespace msst
