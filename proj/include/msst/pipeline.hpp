#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msst/dataio.hpp"
#include "msst/filter.hpp"
#include "msst/msst.hpp"
#include "msst/stats.hpp"

namespace msst {

struct SynthSpec {
  std::size_t subjects = 5;
  std::size_t repetitions = 5;
  double duration_s = 6.0;
  double noise_sigma = 0.5;
  bool null_model = false;  // all gestures drawn from one distribution
};

struct PipelineConfig {
  // input: a manifest path, or synthetic generation when `synthetic` is set
  std::string manifest_path;
  bool synthetic = false;
  double sample_rate_hz = 2000.0;
  std::size_t channel_count = 4;
  std::optional<std::size_t> expected_samples;  // strict per-trial length check

  // pre-processing (off by default: the reference recordings arrive filtered)
  bool prefilter = false;
  IirFilterSpec bandpass{FilterKind::butterworth_bandpass, 6, 5.0, 500.0, 0.0, 0.0};
  IirFilterSpec notch{FilterKind::notch, 2, 0.0, 0.0, 50.0, 35.0};

  // transform
  WaveletSpec wavelet;
  std::size_t sst_bins = 256;
  std::size_t bands = 32;

  // features
  FeatureMode feature_mode = FeatureMode::joint;
  DistributionMode distribution = DistributionMode::magnitude;
  bool zscore = true;

  SegmentationSpec segmentation;

  Scenario scenario;
  double significance = 0.001;

  std::string out_dir = "msst-run";
  std::size_t workers = 1;
  std::uint64_t seed = 1;
  SynthSpec synth;
  bool dump_msst_first = false;

  void validate() const;
};

// key=value configuration text; '#' starts a comment. Unknown keys are
// rejected.
PipelineConfig parse_config_text(const std::string& text);
PipelineConfig load_config_file(const std::filesystem::path& path);
void apply_config_entry(PipelineConfig& config, const std::string& key, const std::string& value);

// Serialized knob listing as it appears in run.log.
std::string describe_config(const PipelineConfig& config);

// Deterministic synthetic trial for (subject, gesture, repetition): a
// gesture-dependent two-tone mix plus seeded noise, or pure noise under the
// null model.
MultichannelSignal synth_trial(const PipelineConfig& config, int subject, Gesture gesture,
                               int repetition);

// Feature extraction over every trial/window of the run. Parallel over
// trials; record order is (subject, gesture, repetition, window) regardless
// of worker count.
std::vector<FeatureRecord> compute_feature_table(const PipelineConfig& config,
                                                 std::vector<std::string>* warnings = nullptr);

struct PipelineResult {
  std::filesystem::path out_dir;
  std::size_t feature_rows = 0;
  std::size_t overall_tests = 0;
  std::size_t pairwise_tests = 0;
};

// End-to-end run: features.csv, kw_summary.txt, pairwise_<feature>.csv,
// boxplot_<feature>.svg, run.log. Partial outputs are removed on failure.
PipelineResult cmd_pipeline(const PipelineConfig& config);

// features.csv only.
PipelineResult cmd_features(const PipelineConfig& config);

// KW analysis of an existing feature table.
PipelineResult cmd_kwtest(const PipelineConfig& config,
                          const std::filesystem::path& features_csv);

// Box plot of one feature from an existing feature table.
void cmd_boxplot(const std::filesystem::path& features_csv, const std::string& feature_name,
                 const std::filesystem::path& svg_path, bool zscore);

// Synthetic trial CSVs plus manifest, for feeding the manifest-driven path.
void cmd_synth(const PipelineConfig& config, const std::filesystem::path& out_dir);

}  // namespace msst
