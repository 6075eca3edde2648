#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "msst/cwt.hpp"
#include "msst/signal.hpp"
#include "msst/tfmatrix.hpp"

namespace msst {

// Contiguous, exhaustive partition of a frequency axis into K bands. Edge i
// and i+1 delimit the bin index range [edges[i], edges[i+1]) of band i.
struct BandPartition {
  std::vector<std::size_t> band_edges;  // K+1 strictly increasing, first 0, last = bin count

  std::size_t band_count() const { return band_edges.empty() ? 0 : band_edges.size() - 1; }

  void validate(std::size_t bin_count) const;
};

// K equal-width bands over an axis of bin_count bins (K <= bin_count).
BandPartition equal_band_partition(std::size_t bin_count, std::size_t band_count);

// Per-band instantaneous frequency and amplitude of one channel:
//   Omega_k(b) = sum_k |T|^2 w / sum_k |T|^2,  A_k(b) = sqrt(sum_k |T|^2).
// Bands with zero energy at a time index are flagged invalid with A = 0.
struct BandEstimates {
  std::vector<double> band_if_hz;       // row-major [band][time]; NaN where invalid
  std::vector<double> band_ia;          // row-major [band][time]
  std::vector<std::uint8_t> valid;
  std::size_t bands = 0;
  std::size_t times = 0;
  int channel_index = 0;
};

BandEstimates band_if_ia(const TimeFrequencyMatrix& T, const BandPartition& partition);

// Amplitude^2-weighted fusion across channels:
//   Omega_multi = sum_n A_n^2 Omega_n / sum_n A_n^2,  A_multi = sqrt(sum_n A_n^2).
// The reduction is carried out in a canonical order so the result is
// bit-identical under any channel permutation.
struct MultivariateEstimates {
  std::vector<double> multi_if_hz;  // row-major [band][time]; NaN where invalid
  std::vector<double> multi_ia;
  std::vector<std::uint8_t> valid;
  std::size_t bands = 0;
  std::size_t times = 0;
};

MultivariateEstimates multivariate_fuse(const std::vector<BandEstimates>& estimates);

// Deposits each band's fused amplitude into the single output bin nearest its
// fused frequency; collisions accumulate by addition.
TimeFrequencyMatrix msst_assemble(const MultivariateEstimates& fused,
                                  const std::vector<double>& out_freq_axis,
                                  const std::vector<double>& time_axis_s, double sample_rate_hz);

struct MsstOptions {
  WaveletSpec wavelet;
  std::size_t sst_bins = 256;
  std::size_t bands = 32;  // K
};

// Full multivariate pipeline: per-channel SST on a shared linear axis, band
// estimates, fusion, and delta deposits into one matrix.
TimeFrequencyMatrix msst(const MultichannelSignal& signal, const MsstOptions& options);

// Plan-backed variant for repeated equal-length segments.
TimeFrequencyMatrix msst_with_plan(const CwtPlan& plan, const MultichannelSignal& signal,
                                   const MsstOptions& options,
                                   const std::vector<double>& out_freq_axis);

// Plain-text dump: header row of time values, then one row per frequency bin
// prefixed with a `# freq_hz=<v>` comment column.
void write_tfm_csv(const TimeFrequencyMatrix& T, std::ostream& os);

}  // namespace msst
