#include "msst/selftest.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "msst/dataio.hpp"
#include "msst/features.hpp"
#include "msst/fft.hpp"
#include "msst/filter.hpp"
#include "msst/msst.hpp"
#include "msst/sst.hpp"
#include "msst/stats.hpp"

namespace msst {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ChisqReference {
  double x;
  int df;
  double q;
};

// Reference values of the chi-square survival function, frozen from a
// 40-digit computation.
constexpr ChisqReference kChisqTable[] = {
    {0.5, 1, 0.47950012218695346},
    {2.0, 1, 0.15729920705028513},
    {7.2, 2, 0.027323722447292558},
    {1.0, 3, 0.80125195690120080},
    {10.0, 4, 0.040427681994512803},
    {4.4, 5, 0.49337352355883761},
    {25.0, 6, 0.00034145459689170823},
    {3.3, 7, 0.85593304725149311},
    {60.0, 8, 4.6610320007792910e-10},
    {92.19, 9, 5.9134046916918027e-16},
    {113.69, 9, 2.6025176645983704e-20},
    {95.49, 9, 1.2809626023322918e-16},
    {50.02, 9, 1.0679503015985662e-7},
    {15.0, 10, 0.13206185628772061},
    {80.0, 12, 4.1273087297317359e-12},
    {42.5, 15, 0.00018818987123257351},
    {130.0, 18, 5.3046361063927243e-19},
    {22.2, 20, 0.32975747686494139},
};

std::vector<double> tone(double freq_hz, double fs, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::cos(2.0 * kPi * freq_hz * static_cast<double>(i) / fs);
  return x;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::vector<SelfTestCheck> run_selftest(const SelfTestOptions& options) {
  std::vector<SelfTestCheck> checks;
  const auto add = [&checks](const std::string& name, bool ok, const std::string& detail = "") {
    checks.push_back({name, ok, detail});
  };

  // fft: impulse spectrum and Parseval
  try {
    const std::vector<cplx> impulse = {1.0, 0.0, 0.0, 0.0};
    const auto spec = fft_forward(impulse);
    bool ok = true;
    for (const auto& v : spec) ok = ok && std::abs(v - cplx(1.0, 0.0)) < 1e-12;
    add("fft impulse spectrum", ok);

    SplitMix64 rng(7);
    std::vector<cplx> x(256);
    for (auto& v : x) v = cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
    const auto X = fft_forward(x);
    double lhs = 0.0, rhs = 0.0;
    for (const auto& v : x) lhs += std::norm(v);
    for (const auto& v : X) rhs += std::norm(v);
    rhs /= static_cast<double>(x.size());
    add("fft parseval equality", std::fabs(lhs - rhs) <= 1e-10 * lhs,
        "lhs=" + fmt(lhs) + " rhs=" + fmt(rhs));
  } catch (const std::exception& e) {
    add("fft impulse spectrum", false, e.what());
  }

  // filters
  try {
    IirFilterSpec bp;
    bp.kind = FilterKind::butterworth_bandpass;
    bp.order = 6;
    bp.low_cut_hz = 5.0;
    bp.high_cut_hz = 500.0;
    const SosCascade bandpass = design_filter(bp, 2000.0);
    const double mid = bandpass.magnitude_at(250.0, 2000.0);
    add("bandpass mid-band gain", mid > 0.99 && mid < 1.01, "gain=" + fmt(mid));
    const double low = bandpass.magnitude_at(1.0, 2000.0);
    add("bandpass stop-band rejection", 20.0 * std::log10(low) < -60.0,
        "dB=" + fmt(20.0 * std::log10(low)));

    IirFilterSpec nt;
    nt.kind = FilterKind::notch;
    nt.center_hz = 50.0;
    nt.quality_factor = 35.0;
    const SosCascade notch = design_filter(nt, 2000.0);
    const double at50 = notch.magnitude_at(50.0, 2000.0);
    const double at60 = notch.magnitude_at(60.0, 2000.0);
    add("notch response", 20.0 * std::log10(at50) < -30.0 && 20.0 * std::log10(at60) > -1.0,
        "dB(50)=" + fmt(20.0 * std::log10(at50)) + " dB(60)=" + fmt(20.0 * std::log10(at60)));
    add("filter pole stability",
        bandpass.max_pole_modulus() < 1.0 - 1e-9 && notch.max_pole_modulus() < 1.0 - 1e-9);
  } catch (const std::exception& e) {
    add("bandpass mid-band gain", false, e.what());
  }

  // cwt ridge and phase transform
  try {
    WaveletSpec wavelet;
    const double fs = 2000.0;
    const auto x = tone(100.0, fs, 500);
    const TimeFrequencyMatrix W = cwt(x, fs, wavelet);
    const std::size_t cols = W.cols();
    bool ridge_ok = true;
    const double voice_ratio = std::pow(2.0, 1.0 / wavelet.voices_per_octave);
    for (std::size_t c = 100; c <= 400; c += 25) {
      double best = 0.0;
      std::size_t best_r = 0;
      for (std::size_t r = 0; r < W.rows(); ++r) {
        const double m = std::abs(W.coeff[r * cols + c]);
        if (m > best) {
          best = m;
          best_r = r;
        }
      }
      const double f = W.freq_axis_hz[best_r];
      ridge_ok = ridge_ok && f >= 100.0 / voice_ratio && f <= 100.0 * voice_ratio;
    }
    add("cwt tone ridge location", ridge_ok);

    const InstFreqField field = phase_transform(W);
    const std::size_t ridge = nearest_bin(W.freq_axis_hz, 100.0);
    bool if_ok = true;
    for (std::size_t c = 100; c <= 400; c += 25) {
      if_ok = if_ok && field.is_valid(ridge, c) && field.at(ridge, c) >= 98.0 &&
              field.at(ridge, c) <= 102.0;
    }
    add("phase transform tone frequency", if_ok);

    const auto axis = linear_frequency_axis(5.0, 500.0, 256);
    const TimeFrequencyMatrix T = synchrosqueeze(W, field, axis);
    const std::size_t bin100 = nearest_bin(axis, 100.0);
    bool conc_ok = true;
    for (std::size_t c = 100; c <= 400; c += 50) {
      double total = 0.0, near = 0.0;
      for (std::size_t r = 0; r < T.rows(); ++r) {
        const double m = std::abs(T.coeff[r * cols + c]);
        total += m;
        if (r + 2 >= bin100 && r <= bin100 + 2) near += m;
      }
      conc_ok = conc_ok && total > 0.0 && near >= 0.85 * total;
    }
    add("sst tone concentration", conc_ok);
  } catch (const std::exception& e) {
    add("cwt tone ridge location", false, e.what());
  }

  // msst fusion identities
  try {
    const double fs = 2000.0;
    MultichannelSignal sig;
    sig.sample_rate_hz = fs;
    sig.samples.assign(4, tone(100.0, fs, 500));
    MsstOptions opts;
    const auto axis = linear_frequency_axis(opts.wavelet.min_freq_hz, opts.wavelet.max_freq_hz,
                                            opts.sst_bins);
    const BandPartition partition = equal_band_partition(opts.sst_bins, opts.bands);
    const TimeFrequencyMatrix single = sst(sig.samples[0], fs, opts.wavelet, axis);
    const BandEstimates est = band_if_ia(single, partition);
    const MultivariateEstimates fused = multivariate_fuse({est, est, est, est});
    bool if_identical = true;
    bool ia_scaled = true;
    for (std::size_t i = 0; i < fused.multi_if_hz.size(); ++i) {
      if (est.valid[i] != fused.valid[i]) if_identical = false;
      if (!est.valid[i]) continue;
      if (fused.multi_if_hz[i] != est.band_if_hz[i]) if_identical = false;
      const double expect = 2.0 * est.band_ia[i];
      if (std::fabs(fused.multi_ia[i] - expect) > 1e-12 * expect) ia_scaled = false;
    }
    add("msst identical-channel fusion", if_identical && ia_scaled);

    MultichannelSignal two;
    two.sample_rate_hz = fs;
    two.samples.push_back(tone(100.0, fs, 500));
    two.samples.push_back(tone(300.0, fs, 500));
    const TimeFrequencyMatrix forward = msst(two, opts);
    std::swap(two.samples[0], two.samples[1]);
    const TimeFrequencyMatrix swapped = msst(two, opts);
    add("msst channel permutation invariance", forward.coeff == swapped.coeff);

    MultichannelSignal scaled = two;
    for (auto& ch : scaled.samples) {
      for (auto& v : ch) v *= 2.0;  // power-of-two scaling propagates exactly
    }
    const TimeFrequencyMatrix doubled = msst(scaled, opts);
    bool scale_ok = doubled.coeff.size() == swapped.coeff.size();
    for (std::size_t i = 0; scale_ok && i < doubled.coeff.size(); ++i) {
      scale_ok = doubled.coeff[i] == 2.0 * swapped.coeff[i];
    }
    add("msst amplitude homogeneity", scale_ok);
  } catch (const std::exception& e) {
    add("msst identical-channel fusion", false, e.what());
  }

  // moment guards and symmetry
  try {
    TimeFrequencyMatrix T;
    T.freq_axis_hz = {100.0};
    T.time_axis_s = {0.1};
    T.sample_rate_hz = 2000.0;
    T.coeff = {cplx(2.0, 0.0)};
    const MomentFeatures delta = moment_features_joint(normalize_distribution(T));
    add("moment delta guards",
        delta.mean == 10.0 && delta.variance == 0.0 && delta.skewness == 0.0 &&
            delta.kurtosis == 0.0 && delta.degenerate);

    TimeFrequencyMatrix S;
    S.freq_axis_hz = {100.0, 200.0, 300.0};
    S.time_axis_s = {0.0, 0.1, 0.2};
    S.sample_rate_hz = 2000.0;
    S.coeff.assign(9, cplx(0.0, 0.0));
    // symmetric about (0.1 s, 200 Hz) in both axes
    S.coeff[0 * 3 + 0] = 1.0;
    S.coeff[2 * 3 + 2] = 1.0;
    S.coeff[0 * 3 + 2] = 1.0;
    S.coeff[2 * 3 + 0] = 1.0;
    S.coeff[1 * 3 + 1] = 2.0;
    const MomentFeatures sym = moment_features_joint(normalize_distribution(S));
    add("moment symmetry", std::fabs(sym.skewness) < 1e-9, "skewness=" + fmt(sym.skewness));
  } catch (const std::exception& e) {
    add("moment delta guards", false, e.what());
  }

  // kruskal-wallis hand example
  try {
    const std::vector<double> values = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    const std::vector<int> ids = {0, 0, 0, 1, 1, 1, 2, 2, 2};
    const KwResult kw = kruskal_wallis(values, ids);
    add("kruskal-wallis hand example", kw.h == 7.2, "H=" + fmt(kw.h));
    add("kruskal-wallis p-value", std::fabs(kw.p_value - 0.027323722447292558) < 1e-12,
        "p=" + fmt(kw.p_value));
  } catch (const std::exception& e) {
    add("kruskal-wallis hand example", false, e.what());
  }

  // chi-square survival against the stored reference table
  try {
    bool ok = true;
    double worst = 0.0;
    for (const auto& ref : kChisqTable) {
      const double q = chisq_survival(ref.x, ref.df) + options.perturb_chisq_table;
      const double rel = std::fabs(q - ref.q) / ref.q;
      worst = std::max(worst, rel);
      ok = ok && rel <= 1e-9;
    }
    add("chi-square reference grid", ok, "worst_rel=" + fmt(worst));
    const double half = chisq_survival(2.0 * std::log(2.0), 2);
    add("chi-square df=2 closed form", std::fabs(half - 0.5) < 1e-14);
  } catch (const std::exception& e) {
    add("chi-square reference grid", false, e.what());
  }

  // segmentation geometry
  try {
    MultichannelSignal sig;
    sig.sample_rate_hz = 2000.0;
    sig.samples.assign(4, std::vector<double>(12000, 1.0));
    const auto windows = trim_and_segment(sig, SegmentationSpec{});
    add("segmentation window count",
        windows.size() == 76 && windows[0].length_samples() == 500,
        "windows=" + std::to_string(windows.size()));
  } catch (const std::exception& e) {
    add("segmentation window count", false, e.what());
  }

  // z-score idempotence
  try {
    std::vector<FeatureRecord> table(5);
    SplitMix64 rng(11);
    for (auto& r : table) {
      r.mean = rng.gaussian();
      r.variance = rng.gaussian() * 3.0 + 1.0;
      r.skewness = rng.gaussian() * 0.2;
      r.kurtosis = rng.gaussian() + 3.0;
    }
    const auto once = zscore_columns(table);
    const auto twice = zscore_columns(once);
    bool ok = true;
    for (std::size_t i = 0; i < table.size(); ++i) {
      for (std::size_t f = 0; f < 4; ++f) {
        ok = ok && std::fabs(feature_value(once[i], f) - feature_value(twice[i], f)) <= 1e-9;
      }
    }
    add("z-score idempotence", ok);
  } catch (const std::exception& e) {
    add("z-score idempotence", false, e.what());
  }

  return checks;
}

bool report_selftest(const std::vector<SelfTestCheck>& checks, std::ostream& os) {
  bool all = true;
  for (const auto& c : checks) {
    os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
    all = all && c.passed;
  }
  os << (all ? "selftest: all checks passed" : "selftest: FAILURES detected") << " ("
     << checks.size() << " checks)\n";
  return all;
}

}  // namespace msst
