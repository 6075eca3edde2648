#include "msst/sst.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace msst {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kValidityFraction = 1e-8;
}  // namespace

InstFreqField phase_transform(const TimeFrequencyMatrix& W) {
  const std::size_t rows = W.rows();
  const std::size_t cols = W.cols();

  InstFreqField field;
  field.rows = rows;
  field.cols = cols;
  field.omega_hz.assign(rows * cols, std::numeric_limits<double>::quiet_NaN());
  field.valid.assign(rows * cols, 0);

  double max_mag = 0.0;
  for (const auto& c : W.coeff) max_mag = std::max(max_mag, std::abs(c));
  if (max_mag == 0.0) return field;  // all invalid
  const double threshold = kValidityFraction * max_mag;

  // Central differences of the coefficient phase: the mean of the two
  // adjacent one-sample phase increments. Unlike differencing the raw
  // coefficients, this is free of the sin(w dt)/dt discretization bias, so a
  // pure tone reads back its exact frequency anywhere below Nyquist.
  const double fs = W.sample_rate_hz;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::complex<double>* row = &W.coeff[r * cols];
    for (std::size_t c = 0; c < cols; ++c) {
      const std::complex<double> w = row[c];
      if (std::abs(w) < threshold) continue;
      double phase_step;
      if (c == 0) {
        phase_step = std::arg(row[1] * std::conj(row[0]));
      } else if (c + 1 == cols) {
        phase_step = std::arg(row[cols - 1] * std::conj(row[cols - 2]));
      } else {
        phase_step = 0.5 * (std::arg(row[c] * std::conj(row[c - 1])) +
                            std::arg(row[c + 1] * std::conj(row[c])));
      }
      const double est = phase_step * fs / (2.0 * kPi);
      if (std::isfinite(est)) {
        field.omega_hz[r * cols + c] = est;
        field.valid[r * cols + c] = 1;
      }
    }
  }
  return field;
}

TimeFrequencyMatrix synchrosqueeze(const TimeFrequencyMatrix& W, const InstFreqField& omega,
                                   const std::vector<double>& out_freq_axis) {
  if (omega.rows != W.rows() || omega.cols != W.cols())
    throw std::invalid_argument("shape mismatch");
  if (out_freq_axis.size() < 2) throw std::invalid_argument("invalid frequency axis");
  for (std::size_t i = 0; i + 1 < out_freq_axis.size(); ++i) {
    if (!(out_freq_axis[i] < out_freq_axis[i + 1]))
      throw std::invalid_argument("invalid frequency axis");
  }

  const std::size_t rows = W.rows();
  const std::size_t cols = W.cols();

  // a^-3/2 * da on the log-spaced grid reduces to sqrt(f) * dln(f); the
  // constant wavelet-center factor drops out of all downstream ratios.
  std::vector<double> weight(rows);
  const auto& f = W.freq_axis_hz;
  for (std::size_t r = 0; r < rows; ++r) {
    double dln;
    if (r == 0) {
      dln = std::log(f[1] / f[0]);
    } else if (r + 1 == rows) {
      dln = std::log(f[rows - 1] / f[rows - 2]);
    } else {
      dln = 0.5 * std::log(f[r + 1] / f[r - 1]);
    }
    weight[r] = std::sqrt(f[r]) * dln;
  }

  TimeFrequencyMatrix out;
  out.freq_axis_hz = out_freq_axis;
  out.time_axis_s = W.time_axis_s;
  out.sample_rate_hz = W.sample_rate_hz;
  out.edge_cols = W.edge_cols;
  out.coeff.assign(out_freq_axis.size() * cols, std::complex<double>(0.0, 0.0));

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!omega.is_valid(r, c)) continue;
      const double mass = std::abs(W.coeff[r * cols + c]) * weight[r];
      const std::size_t bin = nearest_bin(out_freq_axis, omega.at(r, c));
      out.coeff[bin * cols + c] += mass;
    }
  }
  return out;
}

TimeFrequencyMatrix sst(const std::vector<double>& channel, double sample_rate_hz,
                        const WaveletSpec& wavelet, const std::vector<double>& out_freq_axis) {
  CwtPlan plan(channel.size(), sample_rate_hz, wavelet);
  return sst_with_plan(plan, channel, out_freq_axis);
}

TimeFrequencyMatrix sst_with_plan(const CwtPlan& plan, const std::vector<double>& channel,
                                  const std::vector<double>& out_freq_axis) {
  const TimeFrequencyMatrix W = plan.run(channel);
  const InstFreqField omega = phase_transform(W);
  return synchrosqueeze(W, omega, out_freq_axis);
}

}  // namespace msst
