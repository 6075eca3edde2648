#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msst/features.hpp"
#include "msst/signal.hpp"

namespace msst {

// splitmix64: tiny, fully specified generator so synthetic runs reproduce
// bit-identically across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 random bits
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller
  double gaussian();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct ManifestEntry {
  int subject_id = 0;      // 1..40
  Gesture gesture = Gesture::rest;
  int repetition = 0;      // 1..5
  std::filesystem::path file_path;
};

struct TrialManifest {
  std::vector<ManifestEntry> entries;
  double sample_rate_hz = 2000.0;
  std::size_t channel_count = 4;
};

// Manifest CSV: header `subject,gesture,repetition,path`, one row per trial.
TrialManifest read_manifest(const std::filesystem::path& path, double sample_rate_hz,
                            std::size_t channel_count);

struct TrialLoadOptions {
  std::size_t channel_count = 4;
  double sample_rate_hz = 2000.0;
  // When set, the row count must equal this value exactly.
  std::optional<std::size_t> expected_samples;
};

// Trial CSV: one row per sample, one column per channel, optional header.
MultichannelSignal load_trial(const std::filesystem::path& path, const TrialLoadOptions& options);
void save_trial(const MultichannelSignal& signal, const std::filesystem::path& path);

struct SegmentationSpec {
  double trim_head_s = 1.0;
  double trim_tail_s = 1.0;
  double window_s = 0.250;
  double step_s = 0.050;
};

// Steady-state trimming followed by overlapped sliding windows; window k
// covers samples [k*step, k*step + window) of the trimmed signal and trailing
// samples that do not fill a window are dropped.
std::vector<MultichannelSignal> trim_and_segment(const MultichannelSignal& signal,
                                                 const SegmentationSpec& spec);

std::size_t window_count(std::size_t trimmed_samples, std::size_t window_samples,
                         std::size_t step_samples);

struct SynthComponent {
  enum class Kind { tone, chirp, noise } kind = Kind::tone;
  double freq_hz = 100.0;        // tone; chirp start
  double freq_end_hz = 100.0;    // chirp end
  double amplitude = 1.0;        // tone/chirp
  double sigma = 1.0;            // noise
  std::uint64_t seed = 0;        // noise

  static SynthComponent tone(double f, double amp);
  static SynthComponent chirp(double f0, double f1, double amp);
  static SynthComponent noise(double sigma, std::uint64_t seed);
};

// Sums the channel's components; tones and chirps use the cosine convention
// (value amp at t = 0). Deterministic for a given seed.
MultichannelSignal synth_multichannel(const std::vector<std::vector<SynthComponent>>& channels,
                                      double duration_s, double sample_rate_hz);

}  // namespace msst
