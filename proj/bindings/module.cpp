#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstring>
#include <map>

#include "msst/boxplot.hpp"
#include "msst/dataio.hpp"
#include "msst/errors.hpp"
#include "msst/features.hpp"
#include "msst/fft.hpp"
#include "msst/filter.hpp"
#include "msst/msst.hpp"
#include "msst/pipeline.hpp"
#include "msst/selftest.hpp"
#include "msst/sst.hpp"
#include "msst/stats.hpp"

namespace py = pybind11;

namespace {

msst::MultichannelSignal signal_from_array(const py::array_t<double>& samples,
                                           double sample_rate_hz) {
  const auto buf = samples.request();
  if (buf.ndim != 2) throw std::invalid_argument("samples must be a 2-D [channel, time] array");
  msst::MultichannelSignal signal;
  signal.sample_rate_hz = sample_rate_hz;
  const auto channels = static_cast<std::size_t>(buf.shape[0]);
  const auto length = static_cast<std::size_t>(buf.shape[1]);
  signal.samples.assign(channels, std::vector<double>(length));
  const auto view = samples.unchecked<2>();
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t i = 0; i < length; ++i) {
      signal.samples[c][i] = view(static_cast<py::ssize_t>(c), static_cast<py::ssize_t>(i));
    }
  }
  return signal;
}

py::array_t<double> array_from_signal(const msst::MultichannelSignal& signal) {
  const auto channels = static_cast<py::ssize_t>(signal.channel_count());
  const auto length = static_cast<py::ssize_t>(signal.length_samples());
  py::array_t<double> out({channels, length});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t c = 0; c < channels; ++c) {
    for (py::ssize_t i = 0; i < length; ++i) {
      view(c, i) = signal.samples[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
    }
  }
  return out;
}

std::vector<double> vector_from_array(const py::array_t<double>& x) {
  const auto buf = x.request();
  if (buf.ndim != 1) throw std::invalid_argument("expected a 1-D array");
  std::vector<double> out(static_cast<std::size_t>(buf.shape[0]));
  const auto view = x.unchecked<1>();
  for (py::ssize_t i = 0; i < buf.shape[0]; ++i) out[static_cast<std::size_t>(i)] = view(i);
  return out;
}

py::dict tfm_to_dict(const msst::TimeFrequencyMatrix& T) {
  const auto rows = static_cast<py::ssize_t>(T.rows());
  const auto cols = static_cast<py::ssize_t>(T.cols());
  py::array_t<std::complex<double>> coeff({rows, cols});
  std::memcpy(coeff.mutable_data(), T.coeff.data(), T.coeff.size() * sizeof(std::complex<double>));
  py::dict d;
  d["coefficients"] = coeff;
  d["freq_axis_hz"] = py::array_t<double>(static_cast<py::ssize_t>(T.freq_axis_hz.size()),
                                          T.freq_axis_hz.data());
  d["time_axis_s"] = py::array_t<double>(static_cast<py::ssize_t>(T.time_axis_s.size()),
                                         T.time_axis_s.data());
  d["sample_rate_hz"] = T.sample_rate_hz;
  return d;
}

msst::WaveletSpec wavelet_from_kwargs(double center_cycles, int voices, double min_freq_hz,
                                      double max_freq_hz) {
  msst::WaveletSpec spec;
  spec.center_frequency_cycles = center_cycles;
  spec.voices_per_octave = voices;
  spec.min_freq_hz = min_freq_hz;
  spec.max_freq_hz = max_freq_hz;
  return spec;
}

py::dict kw_to_dict(const msst::KwResult& kw) {
  py::dict d;
  d["h"] = kw.h;
  d["df"] = kw.df;
  d["p_value"] = kw.p_value;
  d["tie_correction"] = kw.tie_correction;
  d["group_rank_sums"] = kw.group_rank_sums;
  d["group_sizes"] = kw.group_sizes;
  d["group_labels"] = kw.group_labels;
  return d;
}

}  // namespace

PYBIND11_MODULE(msstkit, m) {
  m.doc() = "multivariate synchrosqueezing, joint time-frequency moments, and rank statistics";

  py::register_exception<msst::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<msst::DataError>(m, "DataError", PyExc_RuntimeError);

  m.def(
      "fft_forward",
      [](const py::array_t<std::complex<double>>& x) {
        const auto buf = x.request();
        if (buf.ndim != 1) throw std::invalid_argument("expected a 1-D array");
        std::vector<msst::cplx> in(static_cast<std::size_t>(buf.shape[0]));
        std::memcpy(in.data(), buf.ptr, in.size() * sizeof(msst::cplx));
        const auto out = msst::fft_forward(in);
        return py::array_t<std::complex<double>>(static_cast<py::ssize_t>(out.size()), out.data());
      },
      py::arg("x"), "DFT of a power-of-two-length complex vector.");

  m.def(
      "butterworth_bandpass",
      [](int order, double low_hz, double high_hz, double sample_rate_hz) {
        msst::IirFilterSpec spec;
        spec.kind = msst::FilterKind::butterworth_bandpass;
        spec.order = order;
        spec.low_cut_hz = low_hz;
        spec.high_cut_hz = high_hz;
        const auto cascade = msst::design_filter(spec, sample_rate_hz);
        py::list sections;
        for (const auto& s : cascade.sections) {
          sections.append(py::make_tuple(s.b0, s.b1, s.b2, s.a1, s.a2));
        }
        return sections;
      },
      py::arg("order"), py::arg("low_hz"), py::arg("high_hz"), py::arg("sample_rate_hz"),
      "Second-order-section coefficients (b0,b1,b2,a1,a2) of the band-pass design.");

  m.def(
      "filter_zero_phase",
      [](const py::array_t<double>& samples, double sample_rate_hz, double low_hz, double high_hz,
         int order, bool notch, double notch_hz, double notch_q) {
        auto signal = signal_from_array(samples, sample_rate_hz);
        msst::IirFilterSpec bp;
        bp.kind = msst::FilterKind::butterworth_bandpass;
        bp.order = order;
        bp.low_cut_hz = low_hz;
        bp.high_cut_hz = high_hz;
        signal = msst::apply_filter_zero_phase(signal, msst::design_filter(bp, sample_rate_hz));
        if (notch) {
          msst::IirFilterSpec nt;
          nt.kind = msst::FilterKind::notch;
          nt.center_hz = notch_hz;
          nt.quality_factor = notch_q;
          signal = msst::apply_filter_zero_phase(signal, msst::design_filter(nt, sample_rate_hz));
        }
        return array_from_signal(signal);
      },
      py::arg("samples"), py::arg("sample_rate_hz"), py::arg("low_hz") = 5.0,
      py::arg("high_hz") = 500.0, py::arg("order") = 6, py::arg("notch") = true,
      py::arg("notch_hz") = 50.0, py::arg("notch_q") = 35.0,
      "Forward-backward band-pass (and optional notch) filtering per channel.");

  m.def(
      "cwt",
      [](const py::array_t<double>& channel, double sample_rate_hz, double center_cycles,
         int voices, double min_freq_hz, double max_freq_hz) {
        return tfm_to_dict(msst::cwt(vector_from_array(channel), sample_rate_hz,
                                     wavelet_from_kwargs(center_cycles, voices, min_freq_hz,
                                                         max_freq_hz)));
      },
      py::arg("channel"), py::arg("sample_rate_hz"),
      py::arg("center_cycles") = 0.9549296585513721, py::arg("voices") = 16,
      py::arg("min_freq_hz") = 5.0, py::arg("max_freq_hz") = 500.0,
      "Morlet continuous wavelet transform on a logarithmic scale grid.");

  m.def(
      "sst",
      [](const py::array_t<double>& channel, double sample_rate_hz, std::size_t bins,
         double center_cycles, int voices, double min_freq_hz, double max_freq_hz) {
        const auto axis = msst::linear_frequency_axis(min_freq_hz, max_freq_hz, bins);
        return tfm_to_dict(msst::sst(vector_from_array(channel), sample_rate_hz,
                                     wavelet_from_kwargs(center_cycles, voices, min_freq_hz,
                                                         max_freq_hz),
                                     axis));
      },
      py::arg("channel"), py::arg("sample_rate_hz"), py::arg("bins") = 256,
      py::arg("center_cycles") = 0.9549296585513721, py::arg("voices") = 16,
      py::arg("min_freq_hz") = 5.0, py::arg("max_freq_hz") = 500.0,
      "Single-channel synchrosqueezing transform onto a linear frequency axis.");

  m.def(
      "msst",
      [](const py::array_t<double>& samples, double sample_rate_hz, std::size_t bins,
         std::size_t bands, double center_cycles, int voices, double min_freq_hz,
         double max_freq_hz) {
        msst::MsstOptions opts;
        opts.wavelet = wavelet_from_kwargs(center_cycles, voices, min_freq_hz, max_freq_hz);
        opts.sst_bins = bins;
        opts.bands = bands;
        return tfm_to_dict(msst::msst(signal_from_array(samples, sample_rate_hz), opts));
      },
      py::arg("samples"), py::arg("sample_rate_hz"), py::arg("bins") = 256,
      py::arg("bands") = 32, py::arg("center_cycles") = 0.9549296585513721,
      py::arg("voices") = 16, py::arg("min_freq_hz") = 5.0, py::arg("max_freq_hz") = 500.0,
      "Multivariate synchrosqueezing of a [channel, time] array into one matrix.");

  m.def(
      "moment_features",
      [](const py::array_t<std::complex<double>>& coefficients,
         const py::array_t<double>& freq_axis_hz, const py::array_t<double>& time_axis_s,
         const std::string& mode, const std::string& distribution) {
        const auto buf = coefficients.request();
        if (buf.ndim != 2) throw std::invalid_argument("expected a 2-D coefficient array");
        msst::TimeFrequencyMatrix T;
        T.freq_axis_hz = vector_from_array(freq_axis_hz);
        T.time_axis_s = vector_from_array(time_axis_s);
        T.sample_rate_hz = 2.0 * (T.freq_axis_hz.empty() ? 1.0 : T.freq_axis_hz.back());
        T.coeff.resize(static_cast<std::size_t>(buf.shape[0] * buf.shape[1]));
        std::memcpy(T.coeff.data(), buf.ptr, T.coeff.size() * sizeof(std::complex<double>));

        msst::MomentFeatures f;
        if (mode == "joint") {
          const auto dist = distribution == "energy" ? msst::DistributionMode::energy
                                                     : msst::DistributionMode::magnitude;
          f = msst::moment_features_joint(msst::normalize_distribution(T, dist));
        } else if (mode == "elementwise") {
          f = msst::moment_features_elementwise(T);
        } else {
          throw msst::ConfigError("mode must be joint or elementwise");
        }
        py::dict d;
        d["mean"] = f.mean;
        d["variance"] = f.variance;
        d["skewness"] = f.skewness;
        d["kurtosis"] = f.kurtosis;
        d["degenerate"] = f.degenerate;
        return d;
      },
      py::arg("coefficients"), py::arg("freq_axis_hz"), py::arg("time_axis_s"),
      py::arg("mode") = "joint", py::arg("distribution") = "magnitude",
      "The four joint (or elementwise) time-frequency moment features of a matrix.");

  m.def(
      "rank_with_ties",
      [](const py::array_t<double>& values) {
        return msst::rank_with_ties(vector_from_array(values));
      },
      py::arg("values"), "Ascending mid-ranks.");

  m.def(
      "kruskal_wallis",
      [](const py::array_t<double>& values, const std::vector<int>& group_ids) {
        return kw_to_dict(msst::kruskal_wallis(vector_from_array(values), group_ids));
      },
      py::arg("values"), py::arg("group_ids"),
      "Tie-corrected Kruskal-Wallis H test with chi-square p-value.");

  m.def("chisq_survival", &msst::chisq_survival, py::arg("x"), py::arg("df"),
        "Upper tail of the chi-square distribution.");

  m.def(
      "trim_and_segment",
      [](const py::array_t<double>& samples, double sample_rate_hz, double trim_head_s,
         double trim_tail_s, double window_s, double step_s) {
        msst::SegmentationSpec spec;
        spec.trim_head_s = trim_head_s;
        spec.trim_tail_s = trim_tail_s;
        spec.window_s = window_s;
        spec.step_s = step_s;
        const auto windows =
            msst::trim_and_segment(signal_from_array(samples, sample_rate_hz), spec);
        py::list out;
        for (const auto& w : windows) out.append(array_from_signal(w));
        return out;
      },
      py::arg("samples"), py::arg("sample_rate_hz"), py::arg("trim_head_s") = 1.0,
      py::arg("trim_tail_s") = 1.0, py::arg("window_s") = 0.250, py::arg("step_s") = 0.050,
      "Steady-state trimming and overlapped sliding-window segmentation.");

  m.def(
      "synth_tones_noise",
      [](const std::vector<std::pair<double, double>>& tones, double noise_sigma,
         std::uint64_t seed, double duration_s, double sample_rate_hz, std::size_t channels) {
        std::vector<std::vector<msst::SynthComponent>> spec(channels);
        for (std::size_t c = 0; c < channels; ++c) {
          for (const auto& [f, amp] : tones) {
            spec[c].push_back(msst::SynthComponent::tone(f, amp));
          }
          if (noise_sigma > 0.0) {
            spec[c].push_back(msst::SynthComponent::noise(noise_sigma, seed + c));
          }
        }
        return array_from_signal(msst::synth_multichannel(spec, duration_s, sample_rate_hz));
      },
      py::arg("tones"), py::arg("noise_sigma") = 0.0, py::arg("seed") = 1,
      py::arg("duration_s") = 1.0, py::arg("sample_rate_hz") = 2000.0, py::arg("channels") = 4,
      "Deterministic multichannel test signal: shared tones plus per-channel seeded noise.");

  m.def(
      "zscore",
      [](const py::array_t<double>& features) {
        const auto buf = features.request();
        if (buf.ndim != 2 || buf.shape[1] != 4)
          throw std::invalid_argument("expected an [n, 4] feature array");
        std::vector<msst::FeatureRecord> table(static_cast<std::size_t>(buf.shape[0]));
        const auto view = features.unchecked<2>();
        for (py::ssize_t i = 0; i < buf.shape[0]; ++i) {
          table[static_cast<std::size_t>(i)].mean = view(i, 0);
          table[static_cast<std::size_t>(i)].variance = view(i, 1);
          table[static_cast<std::size_t>(i)].skewness = view(i, 2);
          table[static_cast<std::size_t>(i)].kurtosis = view(i, 3);
        }
        const auto z = msst::zscore_columns(table);
        py::array_t<double> out({buf.shape[0], py::ssize_t{4}});
        auto w = out.mutable_unchecked<2>();
        for (py::ssize_t i = 0; i < buf.shape[0]; ++i) {
          w(i, 0) = z[static_cast<std::size_t>(i)].mean;
          w(i, 1) = z[static_cast<std::size_t>(i)].variance;
          w(i, 2) = z[static_cast<std::size_t>(i)].skewness;
          w(i, 3) = z[static_cast<std::size_t>(i)].kurtosis;
        }
        return out;
      },
      py::arg("features"), "Column-wise z-score of an [n, 4] feature array.");

  m.def(
      "run_pipeline",
      [](const std::map<std::string, std::string>& options) {
        msst::PipelineConfig config;
        for (const auto& [key, value] : options) msst::apply_config_entry(config, key, value);
        const auto result = msst::cmd_pipeline(config);
        py::dict d;
        d["out_dir"] = result.out_dir.string();
        d["feature_rows"] = result.feature_rows;
        d["overall_tests"] = result.overall_tests;
        d["pairwise_tests"] = result.pairwise_tests;
        return d;
      },
      py::arg("options"),
      "Full pipeline run configured by {key: value} strings (same keys as the config file).");

  m.def(
      "selftest",
      []() {
        py::list out;
        for (const auto& check : msst::run_selftest()) {
          out.append(py::make_tuple(check.name, check.passed, check.detail));
        }
        return out;
      },
      "Run the embedded analytic checks; returns (name, passed, detail) tuples.");

  m.attr("GESTURE_CODES") = std::string(msst::kGestureCodes.begin(), msst::kGestureCodes.end());
  m.attr("__version__") = "1.0.0";
}
