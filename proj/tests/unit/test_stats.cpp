#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chisq_oracle.hpp"
#include "msst/dataio.hpp"
#include "msst/stats.hpp"

using msst::FeatureRecord;
using msst::Gesture;
using msst::KwResult;

namespace {

// O(n^2) comparison-counting rank oracle: rank = 1 + (#smaller) + (#equal-1)/2
std::vector<double> rank_oracle(const std::vector<double>& values) {
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t smaller = 0, equal = 0;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j] < values[i]) ++smaller;
      if (values[j] == values[i]) ++equal;
    }
    ranks[i] = 1.0 + static_cast<double>(smaller) + (static_cast<double>(equal) - 1.0) / 2.0;
  }
  return ranks;
}

std::vector<FeatureRecord> synthetic_table(std::size_t subjects, std::size_t rows_per_gesture,
                                           std::uint64_t seed, double gesture_shift) {
  msst::SplitMix64 rng(seed);
  std::vector<FeatureRecord> table;
  for (std::size_t s = 1; s <= subjects; ++s) {
    for (std::size_t g = 0; g < msst::kGestureCount; ++g) {
      for (std::size_t i = 0; i < rows_per_gesture; ++i) {
        FeatureRecord r;
        r.subject_id = static_cast<int>(s);
        r.gesture = static_cast<Gesture>(static_cast<int>(g));
        r.repetition = static_cast<int>(i % 5) + 1;
        r.window_index = static_cast<int>(i);
        const double shift = gesture_shift * static_cast<double>(g);
        r.mean = rng.gaussian() + shift;
        r.variance = rng.gaussian() + shift;
        r.skewness = rng.gaussian() + shift;
        r.kurtosis = rng.gaussian() + shift;
        table.push_back(r);
      }
    }
  }
  return table;
}

}  // namespace

TEST_CASE("ranks of distinct values are their positions") {
  const std::vector<double> v = {10.0, 20.0, 30.0};
  CHECK(msst::rank_with_ties(v) == std::vector<double>({1.0, 2.0, 3.0}));
}

TEST_CASE("tied pair shares the mid-rank") {
  const std::vector<double> v = {5.0, 5.0, 9.0};
  CHECK(msst::rank_with_ties(v) == std::vector<double>({1.5, 1.5, 3.0}));
}

TEST_CASE("ranks match the counting oracle and sum to N(N+1)/2") {
  msst::SplitMix64 rng(101);
  std::vector<double> v(100);
  for (auto& x : v) x = std::floor(rng.uniform01() * 20.0);  // many duplicates
  const auto ranks = msst::rank_with_ties(v);
  const auto expect = rank_oracle(v);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(ranks[i] == expect[i]);
  double sum = 0.0;
  for (double r : ranks) sum += r;
  CHECK(sum == 100.0 * 101.0 / 2.0);
}

TEST_CASE("ranking rejects non-finite input") {
  CHECK_THROWS_WITH_AS(msst::rank_with_ties(std::vector<double>{1.0, std::nan("")}),
                       "non-finite value", std::invalid_argument);
}

TEST_CASE("kruskal-wallis hand example: H = 7.2 exactly") {
  const std::vector<double> values = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::vector<int> ids = {0, 0, 0, 1, 1, 1, 2, 2, 2};
  const KwResult kw = msst::kruskal_wallis(values, ids);
  CHECK(kw.h == 7.2);  // bitwise: integer arithmetic until one division
  CHECK(kw.df == 2);
  CHECK(kw.tie_correction == 1.0);
  CHECK(kw.group_rank_sums == std::vector<double>({6.0, 15.0, 24.0}));
  // oracle value: exp(-3.6) for df=2
  CHECK(std::fabs(kw.p_value - 0.027323722447292558) < 1e-6);
}

TEST_CASE("kruskal-wallis on two identical groups is non-significant") {
  const std::vector<double> values = {1, 2, 3, 1, 2, 3};
  const std::vector<int> ids = {0, 0, 0, 1, 1, 1};
  const KwResult kw = msst::kruskal_wallis(values, ids);
  CHECK(kw.tie_correction < 1.0);
  CHECK(kw.tie_correction > 0.0);
  CHECK(kw.p_value > 0.9);
}

TEST_CASE("kruskal-wallis degenerate all-equal case") {
  const std::vector<double> values = {4, 4, 4, 4, 4, 4};
  const std::vector<int> ids = {0, 0, 1, 1, 2, 2};
  const KwResult kw = msst::kruskal_wallis(values, ids);
  CHECK(kw.h == 0.0);
  CHECK(kw.p_value == 1.0);
  CHECK(kw.tie_correction == 1.0);
}

TEST_CASE("kruskal-wallis input validation") {
  CHECK_THROWS_WITH_AS(
      msst::kruskal_wallis(std::vector<double>{1, 2}, std::vector<int>{0, 0}),
      "fewer than 2 groups", std::invalid_argument);
  const std::vector<double> v = {1, 2, 3};
  const std::vector<int> ids = {0, 0, 1};
  const std::vector<int> expected = {0, 1, 2};
  CHECK_THROWS_WITH_AS(msst::kruskal_wallis(v, ids, expected), "group with 0 observations",
                       std::invalid_argument);
}

TEST_CASE("monotone transforms leave H and p bit-identical") {
  msst::SplitMix64 rng(303);
  std::vector<double> v(60);
  for (auto& x : v) x = rng.gaussian();
  std::vector<int> ids(60);
  for (std::size_t i = 0; i < 60; ++i) ids[i] = static_cast<int>(i % 3);
  const KwResult base = msst::kruskal_wallis(v, ids);

  std::vector<double> mapped(60);
  for (std::size_t i = 0; i < 60; ++i) mapped[i] = std::exp(v[i] * 0.5) + 3.0;
  const KwResult after = msst::kruskal_wallis(mapped, ids);
  CHECK(base.h == after.h);
  CHECK(base.p_value == after.p_value);
}

TEST_CASE("group relabeling permutes rank sums but not H") {
  msst::SplitMix64 rng(305);
  std::vector<double> v(45);
  for (auto& x : v) x = rng.gaussian();
  std::vector<int> ids(45), relabeled(45);
  for (std::size_t i = 0; i < 45; ++i) {
    ids[i] = static_cast<int>(i % 3);
    relabeled[i] = (ids[i] + 1) % 3;
  }
  const KwResult a = msst::kruskal_wallis(v, ids);
  const KwResult b = msst::kruskal_wallis(v, relabeled);
  CHECK(a.h == b.h);
  CHECK(a.p_value == b.p_value);
  auto sums_a = a.group_rank_sums;
  auto sums_b = b.group_rank_sums;
  std::sort(sums_a.begin(), sums_a.end());
  std::sort(sums_b.begin(), sums_b.end());
  CHECK(sums_a == sums_b);
}

TEST_CASE("chi-square survival: basic anchors") {
  CHECK(msst::chisq_survival(0.0, 5) == 1.0);
  CHECK(std::fabs(msst::chisq_survival(2.0 * std::log(2.0), 2) - 0.5) < 1e-14);
  CHECK_THROWS_WITH_AS(msst::chisq_survival(-1.0, 3), "negative value", std::invalid_argument);
}

TEST_CASE("chi-square survival matches the arbitrary-precision oracle") {
  double worst = 0.0;
  for (int df = 1; df <= 20; ++df) {
    for (double x = 0.1; x <= 150.0; x += 4.9) {
      const double expect = oracle::chisq_survival_mp(x, df);
      const double got = msst::chisq_survival(x, df);
      if (expect > 0.0) worst = std::max(worst, std::fabs(got - expect) / expect);
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("chi-square survival is strictly decreasing in x") {
  for (const int df : {1, 4, 9, 17}) {
    double prev = 1.0;
    for (double x = 0.5; x <= 120.0; x += 0.5) {
      const double q = msst::chisq_survival(x, df);
      CHECK(q < prev);
      prev = q;
    }
  }
}

TEST_CASE("reported p-values invert to the right statistics at df=9") {
  // bisection against the paper's four overall p-values
  const double targets[] = {5.9155e-16, 2.5985e-20, 1.2819e-16, 1.0664e-07};
  for (const double target : targets) {
    double lo = 1.0, hi = 200.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (msst::chisq_survival(mid, 9) > target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double x_star = 0.5 * (lo + hi);
    CHECK(std::fabs(msst::chisq_survival(x_star, 9) - target) <= 1e-3 * target);
    const double oracle_q = oracle::chisq_survival_mp(x_star, 9);
    CHECK(std::fabs(oracle_q - target) <= 1e-3 * target);
  }
}

TEST_CASE("pairwise: ten gestures produce a 10x10 matrix with unit diagonal") {
  const auto table = synthetic_table(3, 6, 11, 0.8);
  const auto result = msst::pairwise_kw(table, 0);
  REQUIRE(result.gestures.size() == 10);
  CHECK(result.excluded.empty());
  std::size_t off_diag = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(result.at(i, i) == 1.0);
    for (std::size_t j = i + 1; j < 10; ++j) {
      CHECK(result.at(i, j) == result.at(j, i));
      ++off_diag;
    }
  }
  CHECK(off_diag == 45);
}

TEST_CASE("pairwise: disjoint ranges are extremely significant") {
  std::vector<FeatureRecord> table;
  msst::SplitMix64 rng(13);
  for (int i = 0; i < 30; ++i) {
    FeatureRecord a, b;
    a.gesture = Gesture::rest;
    a.mean = rng.uniform01();
    b.gesture = Gesture::flexion;
    b.mean = 10.0 + rng.uniform01();
    a.subject_id = b.subject_id = 1;
    table.push_back(a);
    table.push_back(b);
  }
  const auto result = msst::pairwise_kw(table, 0);
  REQUIRE(result.gestures.size() == 2);
  CHECK(result.at(0, 1) < 1e-6);
}

TEST_CASE("pairwise excludes gestures with no rows") {
  auto table = synthetic_table(2, 4, 17, 0.0);
  table.erase(std::remove_if(table.begin(), table.end(),
                             [](const FeatureRecord& r) { return r.gesture == Gesture::grip; }),
              table.end());
  const auto result = msst::pairwise_kw(table, 2);
  CHECK(result.gestures.size() == 9);
  REQUIRE(result.excluded.size() == 1);
  CHECK(result.excluded[0] == Gesture::grip);
}

TEST_CASE("scenario: intra with every subject equals inter exactly") {
  const auto table = synthetic_table(4, 5, 23, 0.3);
  msst::Scenario inter;
  msst::Scenario intra;
  intra.kind = msst::ScenarioKind::intra_subject;
  intra.subjects_per_block = 4;
  const auto a = msst::scenario_runner(table, inter);
  const auto b = msst::scenario_runner(table, intra);
  REQUIRE(a.blocks.size() == 1);
  REQUIRE(b.blocks.size() == 1);
  for (std::size_t f = 0; f < 4; ++f) {
    CHECK(a.blocks[0].per_feature[f].h == b.blocks[0].per_feature[f].h);
    CHECK(a.blocks[0].per_feature[f].p_value == b.blocks[0].per_feature[f].p_value);
  }
}

TEST_CASE("scenario: intra blocks are consecutive and averaged") {
  const auto table = synthetic_table(6, 4, 29, 0.2);
  msst::Scenario intra;
  intra.kind = msst::ScenarioKind::intra_subject;
  intra.subjects_per_block = 2;
  const auto report = msst::scenario_runner(table, intra);
  REQUIRE(report.blocks.size() == 3);
  CHECK(report.blocks[0].first_subject == 1);
  CHECK(report.blocks[0].last_subject == 2);
  CHECK(report.blocks[2].first_subject == 5);
  CHECK(report.blocks[2].last_subject == 6);
  for (std::size_t f = 0; f < 4; ++f) {
    double mean = 0.0;
    for (const auto& b : report.blocks) mean += b.per_feature[f].p_value;
    mean /= 3.0;
    CHECK(report.mean_p[f] == doctest::Approx(mean).epsilon(1e-15));
  }
}

TEST_CASE("scenario rejects oversized blocks") {
  const auto table = synthetic_table(3, 4, 31, 0.0);
  msst::Scenario intra;
  intra.kind = msst::ScenarioKind::intra_subject;
  intra.subjects_per_block = 7;
  CHECK_THROWS_WITH_AS(msst::scenario_runner(table, intra),
                       "subject block larger than subject pool", std::invalid_argument);
}

TEST_CASE("null calibration: p-values under one shared distribution are uniform-ish") {
  // 200 Monte-Carlo repeats of an inter-subject null analysis
  std::array<std::size_t, 4> below_05{};
  const std::size_t repeats = 200;
  for (std::size_t rep = 0; rep < repeats; ++rep) {
    const auto table = synthetic_table(3, 5, 1000 + rep, 0.0);
    const auto report = msst::scenario_runner(table, msst::Scenario{});
    for (std::size_t f = 0; f < 4; ++f) {
      if (report.blocks[0].per_feature[f].p_value < 0.05) ++below_05[f];
    }
  }
  for (std::size_t f = 0; f < 4; ++f) {
    const double frac = static_cast<double>(below_05[f]) / static_cast<double>(repeats);
    CHECK(frac >= 0.01);
    CHECK(frac <= 0.10);
  }
}

TEST_CASE("z-scoring features leaves KW results bit-identical") {
  const auto table = synthetic_table(3, 6, 37, 0.4);
  const auto zref = msst::zscore_columns(table);
  for (std::size_t f = 0; f < 4; ++f) {
    const auto a = msst::pairwise_kw(table, f);
    const auto b = msst::pairwise_kw(zref, f);
    REQUIRE(a.p.size() == b.p.size());
    for (std::size_t i = 0; i < a.p.size(); ++i) CHECK(a.p[i] == b.p[i]);
  }
}

TEST_CASE("summary and pairwise writers emit one value per test") {
  const auto table = synthetic_table(2, 3, 41, 0.5);
  const auto report = msst::scenario_runner(table, msst::Scenario{});
  std::stringstream summary;
  msst::write_kw_summary(report, summary);
  std::size_t h_lines = 0;
  std::string line;
  while (std::getline(summary, line)) {
    if (line.find(" H=") != std::string::npos) ++h_lines;
  }
  CHECK(h_lines == 4);

  const auto pairwise = msst::pairwise_kw(table, 0);
  std::stringstream csv;
  msst::write_pairwise_csv(pairwise, csv);
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 11);  // header + 10 gesture rows
}
