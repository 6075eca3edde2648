#include "msst/msst.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "msst/sst.hpp"

namespace msst {

void BandPartition::validate(std::size_t bin_count) const {
  if (band_edges.size() < 2) throw std::invalid_argument("partition needs at least one band");
  if (band_edges.front() != 0 || band_edges.back() != bin_count)
    throw std::invalid_argument("partition does not cover frequency axis");
  for (std::size_t i = 0; i + 1 < band_edges.size(); ++i) {
    if (!(band_edges[i] < band_edges[i + 1]))
      throw std::invalid_argument("every band needs at least one bin");
  }
}

BandPartition equal_band_partition(std::size_t bin_count, std::size_t band_count) {
  if (band_count == 0 || band_count > bin_count)
    throw std::invalid_argument("band count must be in [1, bin count]");
  BandPartition p;
  p.band_edges.resize(band_count + 1);
  for (std::size_t i = 0; i <= band_count; ++i) p.band_edges[i] = i * bin_count / band_count;
  return p;
}

BandEstimates band_if_ia(const TimeFrequencyMatrix& T, const BandPartition& partition) {
  partition.validate(T.rows());
  const std::size_t cols = T.cols();
  const std::size_t bands = partition.band_count();

  BandEstimates est;
  est.bands = bands;
  est.times = cols;
  est.band_if_hz.assign(bands * cols, std::numeric_limits<double>::quiet_NaN());
  est.band_ia.assign(bands * cols, 0.0);
  est.valid.assign(bands * cols, 0);

  for (std::size_t k = 0; k < bands; ++k) {
    const std::size_t lo = partition.band_edges[k];
    const std::size_t hi = partition.band_edges[k + 1];
    for (std::size_t c = 0; c < cols; ++c) {
      double energy = 0.0;
      double weighted = 0.0;
      for (std::size_t r = lo; r < hi; ++r) {
        const double e = std::norm(T.coeff[r * cols + c]);
        energy += e;
        weighted += e * T.freq_axis_hz[r];
      }
      if (energy > 0.0) {
        est.band_if_hz[k * cols + c] = weighted / energy;
        est.band_ia[k * cols + c] = std::sqrt(energy);
        est.valid[k * cols + c] = 1;
      }
    }
  }
  return est;
}

MultivariateEstimates multivariate_fuse(const std::vector<BandEstimates>& estimates) {
  if (estimates.empty()) throw std::invalid_argument("no channels");
  const std::size_t bands = estimates[0].bands;
  const std::size_t times = estimates[0].times;
  for (const auto& e : estimates) {
    if (e.bands != bands || e.times != times) throw std::invalid_argument("inconsistent shapes");
  }

  MultivariateEstimates fused;
  fused.bands = bands;
  fused.times = times;
  fused.multi_if_hz.assign(bands * times, std::numeric_limits<double>::quiet_NaN());
  fused.multi_ia.assign(bands * times, 0.0);
  fused.valid.assign(bands * times, 0);

  std::vector<std::pair<double, double>> cells;  // (A^2, Omega)
  cells.reserve(estimates.size());
  for (std::size_t i = 0; i < bands * times; ++i) {
    cells.clear();
    for (const auto& e : estimates) {
      if (e.valid[i]) cells.emplace_back(e.band_ia[i] * e.band_ia[i], e.band_if_hz[i]);
    }
    if (cells.empty()) continue;
    // Canonical order makes the reduction independent of channel order.
    std::sort(cells.begin(), cells.end());
    // Incremental weighted mean; identical inputs leave the mean bit-exact.
    double mean = 0.0;
    double total = 0.0;
    for (const auto& [w, f] : cells) {
      total += w;
      mean += (f - mean) * (w / total);
    }
    fused.multi_if_hz[i] = mean;
    fused.multi_ia[i] = std::sqrt(total);
    fused.valid[i] = 1;
  }
  return fused;
}

TimeFrequencyMatrix msst_assemble(const MultivariateEstimates& fused,
                                  const std::vector<double>& out_freq_axis,
                                  const std::vector<double>& time_axis_s, double sample_rate_hz) {
  TimeFrequencyMatrix out;
  out.freq_axis_hz = out_freq_axis;
  out.time_axis_s = time_axis_s;
  out.sample_rate_hz = sample_rate_hz;
  out.coeff.assign(out_freq_axis.size() * fused.times, std::complex<double>(0.0, 0.0));
  if (time_axis_s.size() != fused.times) throw std::invalid_argument("time axis mismatch");

  for (std::size_t k = 0; k < fused.bands; ++k) {
    for (std::size_t c = 0; c < fused.times; ++c) {
      const std::size_t i = k * fused.times + c;
      if (!fused.valid[i]) continue;
      const std::size_t bin = nearest_bin(out_freq_axis, fused.multi_if_hz[i]);
      out.coeff[bin * fused.times + c] += fused.multi_ia[i];
    }
  }
  return out;
}

TimeFrequencyMatrix msst(const MultichannelSignal& signal, const MsstOptions& options) {
  signal.validate();
  const auto axis = linear_frequency_axis(options.wavelet.min_freq_hz,
                                          options.wavelet.max_freq_hz, options.sst_bins);
  CwtPlan plan(signal.length_samples(), signal.sample_rate_hz, options.wavelet);
  return msst_with_plan(plan, signal, options, axis);
}

TimeFrequencyMatrix msst_with_plan(const CwtPlan& plan, const MultichannelSignal& signal,
                                   const MsstOptions& options,
                                   const std::vector<double>& out_freq_axis) {
  if (options.bands < 1) throw std::invalid_argument("band count must be >= 1");
  const BandPartition partition = equal_band_partition(out_freq_axis.size(), options.bands);

  std::vector<BandEstimates> estimates;
  estimates.reserve(signal.channel_count());
  std::vector<double> time_axis;
  for (std::size_t n = 0; n < signal.channel_count(); ++n) {
    const TimeFrequencyMatrix T = sst_with_plan(plan, signal.samples[n], out_freq_axis);
    if (n == 0) time_axis = T.time_axis_s;
    BandEstimates e = band_if_ia(T, partition);
    e.channel_index = static_cast<int>(n);
    estimates.push_back(std::move(e));
  }
  const MultivariateEstimates fused = multivariate_fuse(estimates);
  return msst_assemble(fused, out_freq_axis, time_axis, signal.sample_rate_hz);
}

void write_tfm_csv(const TimeFrequencyMatrix& T, std::ostream& os) {
  char buf[64];
  os << "time_s";
  for (double t : T.time_axis_s) {
    std::snprintf(buf, sizeof buf, "%.17g", t);
    os << ',' << buf;
  }
  os << '\n';
  const std::size_t cols = T.cols();
  for (std::size_t r = 0; r < T.rows(); ++r) {
    std::snprintf(buf, sizeof buf, "# freq_hz=%.17g", T.freq_axis_hz[r]);
    os << buf;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::complex<double> v = T.coeff[r * cols + c];
      if (v.imag() == 0.0) {
        std::snprintf(buf, sizeof buf, "%.17g", v.real());
      } else {
        std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
      }
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace msst
