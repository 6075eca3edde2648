#include <doctest.h>

#include <cmath>
#include <sstream>

#include "msst/dataio.hpp"
#include "msst/features.hpp"

using msst::FeatureRecord;
using msst::TfDistribution;
using msst::TimeFrequencyMatrix;

namespace {

TimeFrequencyMatrix matrix_from(const std::vector<double>& freq, const std::vector<double>& time,
                                const std::vector<double>& values) {
  TimeFrequencyMatrix T;
  T.freq_axis_hz = freq;
  T.time_axis_s = time;
  T.sample_rate_hz = 2000.0;
  T.coeff.reserve(values.size());
  for (double v : values) T.coeff.emplace_back(v, 0.0);
  return T;
}

}  // namespace

TEST_CASE("normalization: single entry becomes a unit point mass") {
  const auto T = matrix_from({100.0}, {0.25}, {7.5});
  const TfDistribution P = msst::normalize_distribution(T);
  CHECK(P.p.size() == 1);
  CHECK(P.p[0] == 1.0);
}

TEST_CASE("normalization: uniform matrix spreads mass evenly") {
  const auto T = matrix_from({10.0, 20.0, 30.0, 40.0}, {0.0, 0.1, 0.2, 0.3, 0.4},
                             std::vector<double>(20, 1.0));
  const TfDistribution P = msst::normalize_distribution(T);
  for (double v : P.p) CHECK(v == doctest::Approx(1.0 / 20.0).epsilon(1e-15));
}

TEST_CASE("normalization: arbitrary matrix sums to one") {
  msst::SplitMix64 rng(3);
  std::vector<double> vals(64 * 10);
  for (auto& v : vals) v = rng.uniform01() * 5.0;
  std::vector<double> freq(64);
  for (std::size_t i = 0; i < 64; ++i) freq[i] = 5.0 + static_cast<double>(i);
  std::vector<double> time(10);
  for (std::size_t i = 0; i < 10; ++i) time[i] = static_cast<double>(i) * 0.01;
  const TfDistribution P = msst::normalize_distribution(matrix_from(freq, time, vals));
  double total = 0.0;
  for (double v : P.p) total += v;
  CHECK(std::fabs(total - 1.0) < 1e-12);
}

TEST_CASE("normalization rejects an all-zero matrix") {
  const auto T = matrix_from({100.0, 200.0}, {0.0, 0.1}, {0.0, 0.0, 0.0, 0.0});
  CHECK_THROWS_WITH_AS(msst::normalize_distribution(T), "degenerate distribution",
                       std::invalid_argument);
}

TEST_CASE("energy mode squares the magnitudes before normalizing") {
  const auto T = matrix_from({100.0, 200.0}, {0.0}, {1.0, 2.0});
  const TfDistribution P = msst::normalize_distribution(T, msst::DistributionMode::energy);
  CHECK(P.p[0] == doctest::Approx(1.0 / 5.0).epsilon(1e-15));
  CHECK(P.p[1] == doctest::Approx(4.0 / 5.0).epsilon(1e-15));
}

TEST_CASE("joint moments: order (0,0) is total mass") {
  const auto T = matrix_from({100.0, 300.0}, {0.0, 0.1, 0.2}, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
  const TfDistribution P = msst::normalize_distribution(T);
  CHECK(msst::joint_moment(P, 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("joint moments: delta at (0.1 s, 100 Hz) gives <t w> = 10") {
  const auto T = matrix_from({100.0}, {0.1}, {2.0});
  const TfDistribution P = msst::normalize_distribution(T);
  CHECK(msst::joint_moment(P, 1, 1) == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("joint moments: uniform three-bin frequency marginal") {
  const auto T = matrix_from({100.0, 200.0, 300.0}, {0.0, 0.1},
                             std::vector<double>(6, 1.0));
  const TfDistribution P = msst::normalize_distribution(T);
  CHECK(msst::joint_moment(P, 0, 1) == doctest::Approx(200.0).epsilon(1e-14));
}

TEST_CASE("joint features: delta distribution trips the guards") {
  const auto T = matrix_from({100.0}, {0.1}, {5.0});
  const auto f = msst::moment_features_joint(msst::normalize_distribution(T));
  CHECK(f.mean == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(f.variance == 0.0);
  CHECK(f.skewness == 0.0);
  CHECK(f.kurtosis == 0.0);
  CHECK(f.degenerate);
}

TEST_CASE("joint features: bi-axially symmetric distribution has zero skewness") {
  // symmetric about (0.1, 200): corners equal, center heavier
  auto T = matrix_from({100.0, 200.0, 300.0}, {0.0, 0.1, 0.2},
                       {1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 1.0, 0.0, 1.0});
  const auto f = msst::moment_features_joint(msst::normalize_distribution(T));
  CHECK(std::fabs(f.skewness) < 1e-9);
  CHECK_FALSE(f.degenerate);
}

TEST_CASE("elementwise stats match the hand calculation") {
  const std::vector<double> vals = {1.0, 2.0, 3.0, 4.0};
  const auto f = msst::elementwise_stats(vals);
  CHECK(f.mean == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(f.variance == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  CHECK(f.skewness == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("scale invariance: joint features ignore matrix scaling") {
  msst::SplitMix64 rng(15);
  std::vector<double> vals(32 * 6);
  for (auto& v : vals) v = rng.uniform01();
  std::vector<double> freq(32);
  for (std::size_t i = 0; i < 32; ++i) freq[i] = 10.0 + 3.0 * static_cast<double>(i);
  std::vector<double> time(6);
  for (std::size_t i = 0; i < 6; ++i) time[i] = 0.05 * static_cast<double>(i);

  auto T = matrix_from(freq, time, vals);
  const auto f1 = msst::moment_features_joint(msst::normalize_distribution(T));
  for (auto& v : T.coeff) v *= 37.5;
  const auto f2 = msst::moment_features_joint(msst::normalize_distribution(T));
  CHECK(f1.mean == doctest::Approx(f2.mean).epsilon(1e-12));
  CHECK(f1.variance == doctest::Approx(f2.variance).epsilon(1e-12));
  CHECK(f1.skewness == doctest::Approx(f2.skewness).epsilon(1e-12));
  CHECK(f1.kurtosis == doctest::Approx(f2.kurtosis).epsilon(1e-12));
}

TEST_CASE("joint skewness and kurtosis ignore affine time rescaling") {
  msst::SplitMix64 rng(19);
  std::vector<double> vals(16 * 8);
  for (auto& v : vals) v = rng.uniform01();
  std::vector<double> freq(16);
  for (std::size_t i = 0; i < 16; ++i) freq[i] = 20.0 + 10.0 * static_cast<double>(i);
  std::vector<double> time(8), time_scaled(8);
  for (std::size_t i = 0; i < 8; ++i) {
    time[i] = 0.01 * static_cast<double>(i);
    time_scaled[i] = 5.0 + 3.0 * time[i];
  }
  const auto f1 =
      msst::moment_features_joint(msst::normalize_distribution(matrix_from(freq, time, vals)));
  const auto f2 = msst::moment_features_joint(
      msst::normalize_distribution(matrix_from(freq, time_scaled, vals)));
  CHECK(f1.skewness == doctest::Approx(f2.skewness).epsilon(1e-9));
  CHECK(f1.kurtosis == doctest::Approx(f2.kurtosis).epsilon(1e-9));
}

TEST_CASE("z-score: {1,2,3} maps to {-1,0,1}") {
  std::vector<FeatureRecord> table(3);
  for (int i = 0; i < 3; ++i) {
    table[i].mean = static_cast<double>(i + 1);
    table[i].variance = 5.0;  // constant column
    table[i].skewness = static_cast<double>(2 * i);
    table[i].kurtosis = -static_cast<double>(i);
  }
  const auto z = msst::zscore_columns(table);
  CHECK(z[0].mean == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(z[1].mean == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(z[2].mean == doctest::Approx(1.0).epsilon(1e-15));
  // zero-variance column becomes all zeros
  for (const auto& r : z) CHECK(r.variance == 0.0);
}

TEST_CASE("z-score output has zero mean and unit sample deviation") {
  msst::SplitMix64 rng(21);
  std::vector<FeatureRecord> table(40);
  for (auto& r : table) {
    r.mean = rng.gaussian() * 7.0 + 3.0;
    r.variance = rng.gaussian() * 0.1;
    r.skewness = rng.gaussian();
    r.kurtosis = rng.gaussian() * 100.0;
  }
  const auto z = msst::zscore_columns(table);
  for (std::size_t f = 0; f < 4; ++f) {
    double sum = 0.0;
    for (const auto& r : z) sum += msst::feature_value(r, f);
    const double mean = sum / 40.0;
    double ss = 0.0;
    for (const auto& r : z) {
      const double d = msst::feature_value(r, f) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / 39.0);
    CHECK(std::fabs(mean) < 1e-12);
    CHECK(std::fabs(sd - 1.0) < 1e-12);
  }
}

TEST_CASE("z-score rejects an empty table") {
  CHECK_THROWS_WITH_AS(msst::zscore_columns({}), "empty table", std::invalid_argument);
}

TEST_CASE("feature CSV round-trips exactly") {
  msst::SplitMix64 rng(27);
  std::vector<FeatureRecord> table;
  for (int i = 0; i < 25; ++i) {
    FeatureRecord r;
    r.subject_id = 1 + i % 5;
    r.gesture = static_cast<msst::Gesture>(i % 10);
    r.repetition = 1 + i % 5;
    r.window_index = i;
    r.mean = rng.gaussian() * 1e-7;
    r.variance = rng.gaussian() * 1e9;
    r.skewness = rng.gaussian();
    r.kurtosis = rng.gaussian() + 3.0;
    table.push_back(r);
  }
  std::stringstream ss;
  msst::write_feature_csv(table, ss);
  const auto back = msst::read_feature_csv(ss);
  REQUIRE(back.size() == table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(back[i].subject_id == table[i].subject_id);
    CHECK(back[i].gesture == table[i].gesture);
    CHECK(back[i].repetition == table[i].repetition);
    CHECK(back[i].window_index == table[i].window_index);
    CHECK(back[i].mean == table[i].mean);
    CHECK(back[i].variance == table[i].variance);
    CHECK(back[i].skewness == table[i].skewness);
    CHECK(back[i].kurtosis == table[i].kurtosis);
  }
}

TEST_CASE("gesture codes round-trip and reject junk") {
  for (std::size_t i = 0; i < msst::kGestureCount; ++i) {
    const auto g = static_cast<msst::Gesture>(static_cast<int>(i));
    CHECK(msst::gesture_from_code(msst::gesture_code(g)) == g);
  }
  CHECK_THROWS_AS(msst::gesture_from_code('Q'), std::invalid_argument);
}
