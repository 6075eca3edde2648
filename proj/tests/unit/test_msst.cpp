#include <doctest.h>

#include <cmath>

#include "msst/dataio.hpp"
#include "msst/msst.hpp"
#include "msst/sst.hpp"

using msst::BandEstimates;
using msst::BandPartition;
using msst::MsstOptions;
using msst::MultichannelSignal;
using msst::TimeFrequencyMatrix;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> tone(double freq_hz, double fs, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::cos(2.0 * kPi * freq_hz * static_cast<double>(i) / fs);
  return x;
}

// small matrix on a 16-bin axis covering 50..200 Hz
TimeFrequencyMatrix small_matrix() {
  TimeFrequencyMatrix T;
  T.freq_axis_hz = msst::linear_frequency_axis(50.0, 200.0, 16);
  T.time_axis_s = {0.0, 0.0005, 0.001};
  T.sample_rate_hz = 2000.0;
  T.coeff.assign(16 * 3, {0.0, 0.0});
  return T;
}

}  // namespace

TEST_CASE("equal band partition is contiguous and exhaustive") {
  const BandPartition p = msst::equal_band_partition(256, 32);
  CHECK(p.band_count() == 32);
  CHECK(p.band_edges.front() == 0);
  CHECK(p.band_edges.back() == 256);
  for (std::size_t i = 0; i + 1 < p.band_edges.size(); ++i)
    CHECK(p.band_edges[i] < p.band_edges[i + 1]);
  // uneven case still covers everything
  const BandPartition q = msst::equal_band_partition(10, 3);
  CHECK(q.band_edges == std::vector<std::size_t>({0, 3, 6, 10}));
  CHECK_THROWS_AS(msst::equal_band_partition(4, 9), std::invalid_argument);
}

TEST_CASE("band estimates: single coefficient acts as a point mass") {
  TimeFrequencyMatrix T = small_matrix();
  // bin 7 maps to 120 Hz on this axis
  const std::size_t bin = msst::nearest_bin(T.freq_axis_hz, 120.0);
  T.coeff[bin * 3 + 1] = {2.0, 0.0};
  const BandPartition p = msst::equal_band_partition(16, 4);
  const BandEstimates est = msst::band_if_ia(T, p);
  // find the band containing `bin`
  std::size_t band = 0;
  for (std::size_t k = 0; k < p.band_count(); ++k) {
    if (bin >= p.band_edges[k] && bin < p.band_edges[k + 1]) band = k;
  }
  CHECK(est.valid[band * 3 + 1] == 1);
  CHECK(est.band_if_hz[band * 3 + 1] == T.freq_axis_hz[bin]);
  CHECK(est.band_ia[band * 3 + 1] == 2.0);
  // empty time slots of the same band stay invalid
  CHECK(est.valid[band * 3 + 0] == 0);
  CHECK(est.band_ia[band * 3 + 0] == 0.0);
}

TEST_CASE("band estimates: equal magnitudes average their frequencies") {
  TimeFrequencyMatrix T;
  T.freq_axis_hz = {100.0, 140.0};
  T.time_axis_s = {0.0};
  T.sample_rate_hz = 2000.0;
  T.coeff = {{3.0, 0.0}, {3.0, 0.0}};
  const BandPartition p = msst::equal_band_partition(2, 1);
  const BandEstimates est = msst::band_if_ia(T, p);
  CHECK(est.band_if_hz[0] == doctest::Approx(120.0).epsilon(1e-15));
  CHECK(est.band_ia[0] == doctest::Approx(std::sqrt(2.0) * 3.0).epsilon(1e-15));
}

TEST_CASE("band estimates reject a partition that does not cover the axis") {
  const TimeFrequencyMatrix T = small_matrix();
  BandPartition p = msst::equal_band_partition(16, 4);
  p.band_edges.back() = 15;
  CHECK_THROWS_WITH_AS(msst::band_if_ia(T, p), "partition does not cover frequency axis",
                       std::invalid_argument);
}

TEST_CASE("fusion: identical channels reproduce the single-channel estimates") {
  TimeFrequencyMatrix T = small_matrix();
  msst::SplitMix64 rng(5);
  for (auto& v : T.coeff) v = {rng.gaussian(), rng.gaussian()};
  const BandPartition p = msst::equal_band_partition(16, 4);
  const BandEstimates est = msst::band_if_ia(T, p);
  const auto fused = msst::multivariate_fuse({est, est, est, est});
  for (std::size_t i = 0; i < fused.multi_if_hz.size(); ++i) {
    REQUIRE(fused.valid[i] == est.valid[i]);
    if (!est.valid[i]) continue;
    CHECK(fused.multi_if_hz[i] == est.band_if_hz[i]);  // bitwise
    CHECK(fused.multi_ia[i] ==
          doctest::Approx(2.0 * est.band_ia[i]).epsilon(1e-12));
  }
}

TEST_CASE("fusion: hand-evaluated two-channel example") {
  BandEstimates a, b;
  a.bands = b.bands = 1;
  a.times = b.times = 1;
  a.band_if_hz = {100.0};
  a.band_ia = {1.0};
  a.valid = {1};
  b.band_if_hz = {200.0};
  b.band_ia = {std::sqrt(3.0)};
  b.valid = {1};
  const auto fused = msst::multivariate_fuse({a, b});
  CHECK(fused.multi_if_hz[0] == doctest::Approx(175.0).epsilon(1e-15));
  CHECK(fused.multi_ia[0] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("fusion: single channel is the identity") {
  TimeFrequencyMatrix T = small_matrix();
  msst::SplitMix64 rng(9);
  for (auto& v : T.coeff) v = {rng.gaussian(), 0.0};
  const BandEstimates est = msst::band_if_ia(T, msst::equal_band_partition(16, 8));
  const auto fused = msst::multivariate_fuse({est});
  for (std::size_t i = 0; i < fused.multi_if_hz.size(); ++i) {
    if (!est.valid[i]) continue;
    CHECK(fused.multi_if_hz[i] == est.band_if_hz[i]);
    CHECK(fused.multi_ia[i] == est.band_ia[i]);
  }
}

TEST_CASE("fusion rejects inconsistent shapes") {
  BandEstimates a, b;
  a.bands = 2;
  a.times = 3;
  a.band_if_hz.assign(6, 0.0);
  a.band_ia.assign(6, 0.0);
  a.valid.assign(6, 0);
  b = a;
  b.times = 2;
  b.band_if_hz.resize(4);
  b.band_ia.resize(4);
  b.valid.resize(4);
  CHECK_THROWS_WITH_AS(msst::multivariate_fuse({a, b}), "inconsistent shapes",
                       std::invalid_argument);
}

TEST_CASE("assembly drops a delta at the nearest bin per band") {
  msst::MultivariateEstimates fused;
  fused.bands = 2;
  fused.times = 3;
  fused.multi_if_hz = {120.0, 120.0, 120.0, 300.0, 300.0, 300.0};
  fused.multi_ia = {2.0, 2.0, 2.0, 5.0, 5.0, 5.0};
  fused.valid.assign(6, 1);
  const auto axis = msst::linear_frequency_axis(5.0, 500.0, 256);
  const auto T = msst::msst_assemble(fused, axis, {0.0, 0.0005, 0.001}, 2000.0);
  const std::size_t bin120 = msst::nearest_bin(axis, 120.0);
  const std::size_t bin300 = msst::nearest_bin(axis, 300.0);
  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t nonzero = 0;
    for (std::size_t r = 0; r < T.rows(); ++r) {
      if (std::abs(T.coeff[r * 3 + c]) != 0.0) ++nonzero;
    }
    CHECK(nonzero == 2);
    CHECK(T.coeff[bin120 * 3 + c] == std::complex<double>(2.0, 0.0));
    CHECK(T.coeff[bin300 * 3 + c] == std::complex<double>(5.0, 0.0));
  }
}

TEST_CASE("assembly of all-invalid input is the zero matrix") {
  msst::MultivariateEstimates fused;
  fused.bands = 2;
  fused.times = 2;
  fused.multi_if_hz.assign(4, 0.0);
  fused.multi_ia.assign(4, 0.0);
  fused.valid.assign(4, 0);
  const auto T =
      msst::msst_assemble(fused, msst::linear_frequency_axis(5.0, 500.0, 64), {0.0, 0.0005}, 2000.0);
  for (const auto& v : T.coeff) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("msst: four identical tone channels ridge at 100 Hz with doubled mass") {
  const double fs = 2000.0;
  MsstOptions opts;
  const auto axis = msst::linear_frequency_axis(opts.wavelet.min_freq_hz,
                                                opts.wavelet.max_freq_hz, opts.sst_bins);
  MultichannelSignal sig;
  sig.sample_rate_hz = fs;
  sig.samples.assign(4, tone(100.0, fs, 500));
  const TimeFrequencyMatrix multi = msst::msst(sig, opts);

  // single-channel band amplitudes for comparison
  const auto single = msst::sst(sig.samples[0], fs, opts.wavelet, axis);
  const auto est = msst::band_if_ia(single, msst::equal_band_partition(opts.sst_bins, opts.bands));

  const std::size_t cols = multi.cols();
  const std::size_t bin100 = msst::nearest_bin(axis, 100.0);
  for (std::size_t c = 100; c <= 400; c += 30) {
    // ridge bin of the column
    double best = 0.0;
    std::size_t best_r = 0;
    double col_mass = 0.0;
    for (std::size_t r = 0; r < multi.rows(); ++r) {
      const double m = std::abs(multi.coeff[r * cols + c]);
      col_mass += m;
      if (m > best) {
        best = m;
        best_r = r;
      }
    }
    CHECK(std::llabs(static_cast<long long>(best_r) - static_cast<long long>(bin100)) <= 2);

    double single_band_mass = 0.0;
    for (std::size_t k = 0; k < est.bands; ++k) {
      if (est.valid[k * est.times + c]) single_band_mass += est.band_ia[k * est.times + c];
    }
    CHECK(col_mass == doctest::Approx(2.0 * single_band_mass).epsilon(1e-9));
  }
}

TEST_CASE("msst of a zero signal is the zero matrix") {
  MultichannelSignal sig;
  sig.sample_rate_hz = 2000.0;
  sig.samples.assign(4, std::vector<double>(500, 0.0));
  const auto T = msst::msst(sig, MsstOptions{});
  for (const auto& v : T.coeff) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("msst: two tones in different bands both appear with equal mass") {
  const double fs = 2000.0;
  MsstOptions opts;
  MultichannelSignal sig;
  sig.sample_rate_hz = fs;
  sig.samples.push_back(tone(100.0, fs, 500));
  sig.samples.push_back(tone(300.0, fs, 500));
  const auto axis = msst::linear_frequency_axis(opts.wavelet.min_freq_hz,
                                                opts.wavelet.max_freq_hz, opts.sst_bins);
  const auto T = msst::msst(sig, opts);
  const std::size_t cols = T.cols();
  const std::size_t bin100 = msst::nearest_bin(axis, 100.0);
  const std::size_t bin300 = msst::nearest_bin(axis, 300.0);
  for (std::size_t c = 150; c <= 350; c += 40) {
    double near100 = 0.0, near300 = 0.0;
    for (std::size_t r = 0; r < T.rows(); ++r) {
      const double m = std::abs(T.coeff[r * cols + c]);
      if (r + 3 >= bin100 && r <= bin100 + 3) near100 += m;
      if (r + 3 >= bin300 && r <= bin300 + 3) near300 += m;
    }
    CHECK(near100 > 0.0);
    CHECK(near300 > 0.0);
    // equal-amplitude tones carry comparable ridge mass
    CHECK(near100 == doctest::Approx(near300).epsilon(0.2));
  }
}

TEST_CASE("msst: channel permutation leaves the output bit-identical") {
  const double fs = 2000.0;
  MultichannelSignal sig;
  sig.sample_rate_hz = fs;
  msst::SplitMix64 rng(41);
  for (int ch = 0; ch < 4; ++ch) {
    std::vector<double> x = tone(80.0 + 40.0 * ch, fs, 500);
    for (auto& v : x) v += 0.3 * rng.gaussian();
    sig.samples.push_back(std::move(x));
  }
  const auto a = msst::msst(sig, MsstOptions{});
  std::rotate(sig.samples.begin(), sig.samples.begin() + 2, sig.samples.end());
  std::swap(sig.samples[0], sig.samples[1]);
  const auto b = msst::msst(sig, MsstOptions{});
  CHECK(a.coeff == b.coeff);
}

TEST_CASE("msst: power-of-two channel scaling propagates exactly") {
  const double fs = 2000.0;
  MultichannelSignal sig;
  sig.sample_rate_hz = fs;
  msst::SplitMix64 rng(43);
  for (int ch = 0; ch < 3; ++ch) {
    std::vector<double> x(500);
    for (auto& v : x) v = rng.gaussian();
    sig.samples.push_back(std::move(x));
  }
  const auto base = msst::msst(sig, MsstOptions{});
  for (auto& ch : sig.samples) {
    for (auto& v : ch) v *= 4.0;
  }
  const auto scaled = msst::msst(sig, MsstOptions{});
  REQUIRE(scaled.coeff.size() == base.coeff.size());
  for (std::size_t i = 0; i < base.coeff.size(); ++i) {
    CHECK(scaled.coeff[i] == 4.0 * base.coeff[i]);
  }
}

TEST_CASE("msst: integer-valued fusion scales exactly by 3") {
  // one nonzero coefficient per band and channel keeps every intermediate
  // quantity exactly representable
  const auto axis = msst::linear_frequency_axis(5.0, 500.0, 64);
  const BandPartition p = msst::equal_band_partition(64, 8);
  const auto make = [&](double c0, double c1) {
    TimeFrequencyMatrix T;
    T.freq_axis_hz = axis;
    T.time_axis_s = {0.0, 0.0005};
    T.sample_rate_hz = 2000.0;
    T.coeff.assign(64 * 2, {0.0, 0.0});
    T.coeff[3 * 2 + 0] = {c0, 0.0};
    T.coeff[3 * 2 + 1] = {c0, 0.0};
    T.coeff[40 * 2 + 0] = {c1, 0.0};
    T.coeff[40 * 2 + 1] = {c1, 0.0};
    return T;
  };
  const auto run = [&](double scale) {
    const auto ea = msst::band_if_ia(make(3.0 * scale, 4.0 * scale), p);
    const auto eb = msst::band_if_ia(make(4.0 * scale, 3.0 * scale), p);
    return msst::msst_assemble(msst::multivariate_fuse({ea, eb}), axis, {0.0, 0.0005}, 2000.0);
  };
  const auto one = run(1.0);
  const auto three = run(3.0);
  // amplitudes: sqrt(3^2+4^2)=5 and 15 scale exactly
  for (std::size_t i = 0; i < one.coeff.size(); ++i) {
    CHECK(three.coeff[i] == 3.0 * one.coeff[i]);
  }
}

TEST_CASE("msst column nonzero count never exceeds the band count") {
  const double fs = 2000.0;
  MsstOptions opts;
  opts.bands = 8;
  MultichannelSignal sig;
  sig.sample_rate_hz = fs;
  msst::SplitMix64 rng(47);
  for (int ch = 0; ch < 2; ++ch) {
    std::vector<double> x(400);
    for (auto& v : x) v = rng.gaussian();
    sig.samples.push_back(std::move(x));
  }
  const auto T = msst::msst(sig, opts);
  const std::size_t cols = T.cols();
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t nonzero = 0;
    for (std::size_t r = 0; r < T.rows(); ++r) {
      if (std::abs(T.coeff[r * cols + c]) != 0.0) ++nonzero;
    }
    CHECK(nonzero <= opts.bands);
  }
}

TEST_CASE("msst conserves amplitude mass per column") {
  const double fs = 2000.0;
  MsstOptions opts;
  MultichannelSignal sig;
  sig.sample_rate_hz = fs;
  msst::SplitMix64 rng(53);
  for (int ch = 0; ch < 3; ++ch) {
    std::vector<double> x(320);
    for (auto& v : x) v = rng.gaussian();
    sig.samples.push_back(std::move(x));
  }
  const auto axis = msst::linear_frequency_axis(opts.wavelet.min_freq_hz,
                                                opts.wavelet.max_freq_hz, opts.sst_bins);
  // independently recompute fused amplitudes
  const BandPartition p = msst::equal_band_partition(opts.sst_bins, opts.bands);
  std::vector<BandEstimates> ests;
  for (const auto& ch : sig.samples) {
    ests.push_back(msst::band_if_ia(msst::sst(ch, fs, opts.wavelet, axis), p));
  }
  const auto fused = msst::multivariate_fuse(ests);
  const auto T = msst::msst(sig, opts);
  const std::size_t cols = T.cols();
  for (std::size_t c = 0; c < cols; c += 13) {
    double expect = 0.0;
    for (std::size_t k = 0; k < fused.bands; ++k) {
      if (fused.valid[k * fused.times + c]) expect += fused.multi_ia[k * fused.times + c];
    }
    double got = 0.0;
    for (std::size_t r = 0; r < T.rows(); ++r) got += std::abs(T.coeff[r * cols + c]);
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  }
}
