#include "msst/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "msst/boxplot.hpp"
#include "msst/errors.hpp"
#include "msst/sst.hpp"

namespace msst {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  SplitMix64 rng(seed ^ (salt * 0x9E3779B97F4A7C15ull));
  return rng.next_u64();
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError("invalid boolean for " + key + ": " + value);
}

double parse_double_cfg(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + key + ": " + value);
  }
}

std::size_t parse_size_cfg(const std::string& key, const std::string& value) {
  const double v = parse_double_cfg(key, value);
  if (v < 0.0 || v != std::floor(v)) throw ConfigError("invalid integer for " + key + ": " + value);
  return static_cast<std::size_t>(v);
}

std::string trim_ws(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(significance > 0.0 && significance < 1.0))
    throw ConfigError("significance threshold must lie in (0,1)");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (channel_count < 1) throw ConfigError("channel count must be >= 1");
  if (sst_bins < 2) throw ConfigError("sst.bins must be >= 2");
  if (bands < 1 || bands > sst_bins) throw ConfigError("msst.bands must lie in [1, sst.bins]");
  if (!(sample_rate_hz > 0.0)) throw ConfigError("sample rate must be positive");
  if (scenario.kind == ScenarioKind::intra_subject && scenario.subjects_per_block < 1)
    throw ConfigError("intra-subject block size must be >= 1");
}

void apply_config_entry(PipelineConfig& c, const std::string& key, const std::string& value) {
  if (key == "manifest") c.manifest_path = value;
  else if (key == "synthetic") c.synthetic = parse_bool(key, value);
  else if (key == "sample_rate_hz") c.sample_rate_hz = parse_double_cfg(key, value);
  else if (key == "channels") c.channel_count = parse_size_cfg(key, value);
  else if (key == "expected_samples") {
    if (value.empty() || value == "none") c.expected_samples.reset();
    else c.expected_samples = parse_size_cfg(key, value);
  }
  else if (key == "prefilter") c.prefilter = parse_bool(key, value);
  else if (key == "bandpass.order") c.bandpass.order = static_cast<int>(parse_size_cfg(key, value));
  else if (key == "bandpass.low_hz") c.bandpass.low_cut_hz = parse_double_cfg(key, value);
  else if (key == "bandpass.high_hz") c.bandpass.high_cut_hz = parse_double_cfg(key, value);
  else if (key == "notch.center_hz") c.notch.center_hz = parse_double_cfg(key, value);
  else if (key == "notch.q") c.notch.quality_factor = parse_double_cfg(key, value);
  else if (key == "wavelet.center_cycles") c.wavelet.center_frequency_cycles = parse_double_cfg(key, value);
  else if (key == "wavelet.voices") c.wavelet.voices_per_octave = static_cast<int>(parse_size_cfg(key, value));
  else if (key == "wavelet.min_freq_hz") c.wavelet.min_freq_hz = parse_double_cfg(key, value);
  else if (key == "wavelet.max_freq_hz") c.wavelet.max_freq_hz = parse_double_cfg(key, value);
  else if (key == "sst.bins") c.sst_bins = parse_size_cfg(key, value);
  else if (key == "msst.bands") c.bands = parse_size_cfg(key, value);
  else if (key == "feature.mode") {
    if (value == "joint") c.feature_mode = FeatureMode::joint;
    else if (value == "elementwise") c.feature_mode = FeatureMode::elementwise;
    else throw ConfigError("feature.mode must be joint or elementwise");
  }
  else if (key == "feature.distribution") {
    if (value == "magnitude") c.distribution = DistributionMode::magnitude;
    else if (value == "energy") c.distribution = DistributionMode::energy;
    else throw ConfigError("feature.distribution must be magnitude or energy");
  }
  else if (key == "feature.zscore") c.zscore = parse_bool(key, value);
  else if (key == "segment.trim_head_s") c.segmentation.trim_head_s = parse_double_cfg(key, value);
  else if (key == "segment.trim_tail_s") c.segmentation.trim_tail_s = parse_double_cfg(key, value);
  else if (key == "segment.window_s") c.segmentation.window_s = parse_double_cfg(key, value);
  else if (key == "segment.step_s") c.segmentation.step_s = parse_double_cfg(key, value);
  else if (key == "scenario") {
    if (value == "inter") {
      c.scenario.kind = ScenarioKind::inter_subject;
    } else if (value.rfind("intra:", 0) == 0) {
      c.scenario.kind = ScenarioKind::intra_subject;
      c.scenario.subjects_per_block = parse_size_cfg(key, value.substr(6));
    } else {
      throw ConfigError("scenario must be inter or intra:<k>");
    }
  }
  else if (key == "significance") c.significance = parse_double_cfg(key, value);
  else if (key == "out_dir") c.out_dir = value;
  else if (key == "workers") c.workers = parse_size_cfg(key, value);
  else if (key == "seed") {
    try {
      c.seed = std::stoull(value);
    } catch (const std::exception&) {
      throw ConfigError("invalid number for seed: " + value);
    }
  }
  else if (key == "synth.subjects") c.synth.subjects = parse_size_cfg(key, value);
  else if (key == "synth.repetitions") c.synth.repetitions = parse_size_cfg(key, value);
  else if (key == "synth.duration_s") c.synth.duration_s = parse_double_cfg(key, value);
  else if (key == "synth.noise_sigma") c.synth.noise_sigma = parse_double_cfg(key, value);
  else if (key == "synth.null") c.synth.null_model = parse_bool(key, value);
  else if (key == "dump.msst_first") c.dump_msst_first = parse_bool(key, value);
  else throw ConfigError("unknown config key: " + key);
}

PipelineConfig parse_config_text(const std::string& text) {
  PipelineConfig config;
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim_ws(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + " is not key=value");
    apply_config_entry(config, trim_ws(line.substr(0, eq)), trim_ws(line.substr(eq + 1)));
  }
  return config;
}

PipelineConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

std::string describe_config(const PipelineConfig& c) {
  std::ostringstream os;
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "manifest=" << c.manifest_path << "\n";
  os << "synthetic=" << (c.synthetic ? "on" : "off") << "\n";
  os << "sample_rate_hz=" << num(c.sample_rate_hz) << "\n";
  os << "channels=" << c.channel_count << "\n";
  os << "expected_samples=" << (c.expected_samples ? std::to_string(*c.expected_samples) : "none") << "\n";
  os << "prefilter=" << (c.prefilter ? "on" : "off") << "\n";
  os << "bandpass.order=" << c.bandpass.order << "\n";
  os << "bandpass.low_hz=" << num(c.bandpass.low_cut_hz) << "\n";
  os << "bandpass.high_hz=" << num(c.bandpass.high_cut_hz) << "\n";
  os << "notch.center_hz=" << num(c.notch.center_hz) << "\n";
  os << "notch.q=" << num(c.notch.quality_factor) << "\n";
  os << "wavelet.center_cycles=" << num(c.wavelet.center_frequency_cycles) << "\n";
  os << "wavelet.voices=" << c.wavelet.voices_per_octave << "\n";
  os << "wavelet.min_freq_hz=" << num(c.wavelet.min_freq_hz) << "\n";
  os << "wavelet.max_freq_hz=" << num(c.wavelet.max_freq_hz) << "\n";
  os << "sst.bins=" << c.sst_bins << "\n";
  os << "msst.bands=" << c.bands << "\n";
  os << "feature.mode=" << (c.feature_mode == FeatureMode::joint ? "joint" : "elementwise") << "\n";
  os << "feature.distribution="
     << (c.distribution == DistributionMode::magnitude ? "magnitude" : "energy") << "\n";
  os << "feature.zscore=" << (c.zscore ? "on" : "off") << "\n";
  os << "segment.trim_head_s=" << num(c.segmentation.trim_head_s) << "\n";
  os << "segment.trim_tail_s=" << num(c.segmentation.trim_tail_s) << "\n";
  os << "segment.window_s=" << num(c.segmentation.window_s) << "\n";
  os << "segment.step_s=" << num(c.segmentation.step_s) << "\n";
  if (c.scenario.kind == ScenarioKind::inter_subject) {
    os << "scenario=inter\n";
  } else {
    os << "scenario=intra:" << c.scenario.subjects_per_block << "\n";
  }
  os << "significance=" << num(c.significance) << "\n";
  // out_dir and workers are execution details: they never change the
  // computed bytes, so the log omits them to keep reruns comparable.
  os << "seed=" << c.seed << "\n";
  os << "synth.subjects=" << c.synth.subjects << "\n";
  os << "synth.repetitions=" << c.synth.repetitions << "\n";
  os << "synth.duration_s=" << num(c.synth.duration_s) << "\n";
  os << "synth.noise_sigma=" << num(c.synth.noise_sigma) << "\n";
  os << "synth.null=" << (c.synth.null_model ? "on" : "off") << "\n";
  os << "dump.msst_first=" << (c.dump_msst_first ? "on" : "off") << "\n";
  return os.str();
}

MultichannelSignal synth_trial(const PipelineConfig& config, int subject, Gesture gesture,
                               int repetition) {
  const int g = static_cast<int>(gesture);
  std::vector<std::vector<SynthComponent>> channels(config.channel_count);
  for (std::size_t ch = 0; ch < config.channel_count; ++ch) {
    const std::uint64_t noise_seed =
        mix_seed(config.seed, 0x100000u + 40000ull * static_cast<std::uint64_t>(subject) +
                                  4000ull * static_cast<std::uint64_t>(g) +
                                  16ull * static_cast<std::uint64_t>(repetition) + ch);
    auto& comps = channels[ch];
    if (!config.synth.null_model) {
      const double chan_gain = 0.8 + 0.1 * static_cast<double>(ch);
      const double subj_gain = 1.0 + 0.05 * static_cast<double>((subject + repetition) % 3);
      comps.push_back(SynthComponent::tone(60.0 + 18.0 * g, 1.0 * chan_gain * subj_gain));
      comps.push_back(SynthComponent::tone(130.0 + 23.0 * g, 0.6 * chan_gain * subj_gain));
    }
    comps.push_back(SynthComponent::noise(
        config.synth.null_model ? 1.0 : config.synth.noise_sigma, noise_seed));
  }
  return synth_multichannel(channels, config.synth.duration_s, config.sample_rate_hz);
}

namespace {

struct TrialTask {
  int subject = 0;
  Gesture gesture = Gesture::rest;
  int repetition = 0;
  std::filesystem::path path;  // empty for synthetic trials
};

std::vector<TrialTask> build_tasks(const PipelineConfig& config) {
  std::vector<TrialTask> tasks;
  if (config.synthetic) {
    for (std::size_t s = 1; s <= config.synth.subjects; ++s) {
      for (std::size_t g = 0; g < kGestureCount; ++g) {
        for (std::size_t r = 1; r <= config.synth.repetitions; ++r) {
          tasks.push_back({static_cast<int>(s), static_cast<Gesture>(static_cast<int>(g)),
                           static_cast<int>(r), {}});
        }
      }
    }
  } else if (!config.manifest_path.empty()) {
    const TrialManifest manifest =
        read_manifest(config.manifest_path, config.sample_rate_hz, config.channel_count);
    for (const auto& e : manifest.entries) {
      tasks.push_back({e.subject_id, e.gesture, e.repetition, e.file_path});
    }
    std::sort(tasks.begin(), tasks.end(), [](const TrialTask& a, const TrialTask& b) {
      if (a.subject != b.subject) return a.subject < b.subject;
      if (a.gesture != b.gesture) return static_cast<int>(a.gesture) < static_cast<int>(b.gesture);
      return a.repetition < b.repetition;
    });
  } else {
    throw ConfigError("no input: provide a manifest or enable synthetic mode");
  }
  return tasks;
}

}  // namespace

std::vector<FeatureRecord> compute_feature_table(const PipelineConfig& config,
                                                 std::vector<std::string>* warnings) {
  config.validate();
  const std::vector<TrialTask> tasks = build_tasks(config);
  if (tasks.empty()) throw DataError("no trials to process");

  const double fs = config.sample_rate_hz;
  const std::size_t window_samples =
      static_cast<std::size_t>(std::llround(config.segmentation.window_s * fs));
  const CwtPlan plan(window_samples, fs, config.wavelet);
  const auto axis =
      linear_frequency_axis(config.wavelet.min_freq_hz, config.wavelet.max_freq_hz, config.sst_bins);

  SosCascade bandpass, notch;
  if (config.prefilter) {
    bandpass = design_filter(config.bandpass, fs);
    notch = design_filter(config.notch, fs);
  }

  MsstOptions opts;
  opts.wavelet = config.wavelet;
  opts.sst_bins = config.sst_bins;
  opts.bands = config.bands;

  std::vector<std::vector<FeatureRecord>> per_task(tasks.size());
  std::vector<std::vector<std::string>> per_task_warnings(tasks.size());
  std::vector<std::exception_ptr> per_task_error(tasks.size());

  const auto process_task = [&](std::size_t i) {
    const TrialTask& task = tasks[i];
    MultichannelSignal signal;
    if (config.synthetic) {
      signal = synth_trial(config, task.subject, task.gesture, task.repetition);
    } else {
      TrialLoadOptions load_opts;
      load_opts.channel_count = config.channel_count;
      load_opts.sample_rate_hz = fs;
      load_opts.expected_samples = config.expected_samples;
      try {
        signal = load_trial(task.path, load_opts);
      } catch (const DataError& e) {
        throw DataError(task.path.string() + ": " + e.what());
      }
    }
    if (config.prefilter) {
      signal = apply_filter_zero_phase(signal, bandpass);
      signal = apply_filter_zero_phase(signal, notch);
    }
    const auto windows = trim_and_segment(signal, config.segmentation);
    per_task[i].reserve(windows.size());
    for (std::size_t w = 0; w < windows.size(); ++w) {
      const TimeFrequencyMatrix T = msst_with_plan(plan, windows[w], opts, axis);
      FeatureRecord rec;
      rec.subject_id = task.subject;
      rec.gesture = task.gesture;
      rec.repetition = task.repetition;
      rec.window_index = static_cast<int>(w);
      MomentFeatures f;
      bool degenerate_window = false;
      if (config.feature_mode == FeatureMode::joint) {
        try {
          f = moment_features_joint(normalize_distribution(T, config.distribution));
        } catch (const std::invalid_argument&) {
          degenerate_window = true;  // all-zero matrix: keep zeros, flag it
        }
      } else {
        f = moment_features_elementwise(T);
      }
      rec.mean = f.mean;
      rec.variance = f.variance;
      rec.skewness = f.skewness;
      rec.kurtosis = f.kurtosis;
      rec.degenerate = f.degenerate || degenerate_window;
      if (degenerate_window) {
        per_task_warnings[i].push_back(
            "degenerate window: subject " + std::to_string(task.subject) + " gesture " +
            gesture_code(task.gesture) + std::string(" repetition ") +
            std::to_string(task.repetition) + " window " + std::to_string(w));
      }
      per_task[i].push_back(rec);
    }
  };

  const std::size_t n_workers = std::min<std::size_t>(config.workers, tasks.size());
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) process_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t) {
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          try {
            process_task(i);
          } catch (...) {
            per_task_error[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : per_task_error) {
      if (err) std::rethrow_exception(err);
    }
  }

  std::vector<FeatureRecord> table;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    table.insert(table.end(), per_task[i].begin(), per_task[i].end());
    if (warnings) {
      warnings->insert(warnings->end(), per_task_warnings[i].begin(), per_task_warnings[i].end());
    }
  }
  return table;
}

namespace {

class OutputTracker {
 public:
  explicit OutputTracker(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  std::filesystem::path path(const std::string& name) const { return dir_ / name; }

  void write(const std::string& name, const std::string& contents) {
    const auto p = path(name);
    std::ofstream os(p, std::ios::binary);
    if (!os) throw DataError("cannot write output: " + p.string());
    os << contents;
    os.close();
    written_.push_back(p);
  }

  void discard_all() {
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
    written_.clear();
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
};

struct AnalysisOutputs {
  ScenarioReport report;
  std::array<PairwiseKwResult, 4> pairwise;
  std::size_t pairwise_tests = 0;
};

AnalysisOutputs run_analysis(const std::vector<FeatureRecord>& table, const PipelineConfig& config) {
  AnalysisOutputs out;
  out.report = scenario_runner(table, config.scenario);
  for (std::size_t f = 0; f < 4; ++f) {
    out.pairwise[f] = pairwise_kw(table, f);
    const std::size_t g = out.pairwise[f].gestures.size();
    out.pairwise_tests += g * (g - 1) / 2;
  }
  return out;
}

std::string pairwise_csv_name(std::size_t feature_index) {
  return std::string("pairwise_") + kFeatureNames[feature_index] + ".csv";
}

std::string render_summary(const PipelineConfig& config, const AnalysisOutputs& analysis) {
  std::ostringstream os;
  write_kw_summary(analysis.report, os);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", config.significance);
  os << "significance_threshold=" << buf << "\n";
  for (std::size_t f = 0; f < 4; ++f) {
    const KwResult& kw = analysis.report.blocks.front().per_feature[f];
    os << "significant feature=" << kFeatureNames[f] << " "
       << (kw.p_value < config.significance ? "yes" : "no") << "\n";
  }
  return os.str();
}

PipelineResult run_outputs(const PipelineConfig& config, bool emit_analysis) {
  config.validate();
  OutputTracker out(config.out_dir);
  PipelineResult result;
  result.out_dir = config.out_dir;

  try {
    std::vector<std::string> warnings;
    std::vector<FeatureRecord> table = compute_feature_table(config, &warnings);
    result.feature_rows = table.size();

    {
      std::ostringstream os;
      write_feature_csv(table, os);
      out.write("features.csv", os.str());
    }

    if (config.dump_msst_first && !table.empty()) {
      // re-derive the first window's matrix for inspection
      const std::vector<TrialTask> tasks = build_tasks(config);
      const TrialTask& task = tasks.front();
      MultichannelSignal signal;
      if (config.synthetic) {
        signal = synth_trial(config, task.subject, task.gesture, task.repetition);
      } else {
        TrialLoadOptions load_opts;
        load_opts.channel_count = config.channel_count;
        load_opts.sample_rate_hz = config.sample_rate_hz;
        load_opts.expected_samples = config.expected_samples;
        signal = load_trial(task.path, load_opts);
      }
      const auto windows = trim_and_segment(signal, config.segmentation);
      MsstOptions opts;
      opts.wavelet = config.wavelet;
      opts.sst_bins = config.sst_bins;
      opts.bands = config.bands;
      const TimeFrequencyMatrix T = msst(windows.front(), opts);
      std::ostringstream os;
      write_tfm_csv(T, os);
      out.write("msst_first.csv", os.str());
    }

    std::ostringstream log;
    log << "run configuration:\n" << describe_config(config);
    const std::string log_text = log.str();

    std::ostringstream tail;
    tail << "feature_rows=" << table.size() << "\n";

    if (emit_analysis) {
      const std::vector<FeatureRecord> analyzed = config.zscore ? zscore_columns(table) : table;
      const AnalysisOutputs analysis = run_analysis(analyzed, config);
      result.overall_tests = 4 * analysis.report.blocks.size();
      result.pairwise_tests = analysis.pairwise_tests;

      out.write("kw_summary.txt", render_summary(config, analysis));
      for (std::size_t f = 0; f < 4; ++f) {
        std::ostringstream os;
        write_pairwise_csv(analysis.pairwise[f], os);
        out.write(pairwise_csv_name(f), os.str());
        for (Gesture g : analysis.pairwise[f].excluded) {
          warnings.push_back(std::string("gesture with no rows excluded from pairwise ") +
                             kFeatureNames[f] + ": " + gesture_code(g));
        }
      }
      for (std::size_t f = 0; f < 4; ++f) {
        const BoxPlotAnnotations ann = annotate_from_pairwise(
            analysis.pairwise[f], analysis.report.blocks.front().per_feature[f].p_value);
        std::ostringstream os;
        render_boxplot_svg(analyzed, f, ann, os);
        out.write(std::string("boxplot_") + kFeatureNames[f] + ".svg", os.str());
      }
      tail << "overall_tests=" << result.overall_tests << "\n";
      tail << "pairwise_tests=" << result.pairwise_tests << "\n";
    }

    for (const auto& w : warnings) tail << "warning: " << w << "\n";
    out.write("run.log", log_text + tail.str());
  } catch (...) {
    out.discard_all();
    throw;
  }
  return result;
}

}  // namespace

PipelineResult cmd_pipeline(const PipelineConfig& config) { return run_outputs(config, true); }

PipelineResult cmd_features(const PipelineConfig& config) { return run_outputs(config, false); }

PipelineResult cmd_kwtest(const PipelineConfig& config,
                          const std::filesystem::path& features_csv) {
  config.validate();
  std::ifstream is(features_csv);
  if (!is) throw DataError("cannot open features: " + features_csv.string());
  std::vector<FeatureRecord> table = read_feature_csv(is);
  if (table.empty()) throw DataError("empty table");

  OutputTracker out(config.out_dir);
  PipelineResult result;
  result.out_dir = config.out_dir;
  result.feature_rows = table.size();
  try {
    const std::vector<FeatureRecord> analyzed = config.zscore ? zscore_columns(table) : table;
    const AnalysisOutputs analysis = run_analysis(analyzed, config);
    result.overall_tests = 4 * analysis.report.blocks.size();
    result.pairwise_tests = analysis.pairwise_tests;
    out.write("kw_summary.txt", render_summary(config, analysis));
    for (std::size_t f = 0; f < 4; ++f) {
      std::ostringstream os;
      write_pairwise_csv(analysis.pairwise[f], os);
      out.write(pairwise_csv_name(f), os.str());
    }
  } catch (...) {
    out.discard_all();
    throw;
  }
  return result;
}

void cmd_boxplot(const std::filesystem::path& features_csv, const std::string& feature_name,
                 const std::filesystem::path& svg_path, bool zscore) {
  std::size_t feature_index = kFeatureNames.size();
  for (std::size_t f = 0; f < kFeatureNames.size(); ++f) {
    if (feature_name == kFeatureNames[f]) feature_index = f;
  }
  if (feature_index == kFeatureNames.size()) {
    std::string valid;
    for (std::size_t f = 0; f < kFeatureNames.size(); ++f) {
      if (f) valid += ", ";
      valid += kFeatureNames[f];
    }
    throw ConfigError("unknown feature name: " + feature_name + " (valid: " + valid + ")");
  }

  std::ifstream is(features_csv);
  if (!is) throw DataError("cannot open features: " + features_csv.string());
  std::vector<FeatureRecord> table = read_feature_csv(is);
  if (table.empty()) throw DataError("empty table");
  if (zscore) table = zscore_columns(table);

  Scenario inter;
  const ScenarioReport report = scenario_runner(table, inter);
  const PairwiseKwResult pairwise = pairwise_kw(table, feature_index);
  const BoxPlotAnnotations ann =
      annotate_from_pairwise(pairwise, report.blocks.front().per_feature[feature_index].p_value);

  std::ofstream os(svg_path, std::ios::binary);
  if (!os) throw DataError("cannot write output: " + svg_path.string());
  render_boxplot_svg(table, feature_index, ann, os);
}

void cmd_synth(const PipelineConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  if (config.synth.subjects < 1 || config.synth.subjects > 40)
    throw ConfigError("synth.subjects must lie in [1, 40]");
  if (config.synth.repetitions < 1 || config.synth.repetitions > 5)
    throw ConfigError("synth.repetitions must lie in [1, 5]");
  std::filesystem::create_directories(out_dir);

  std::ostringstream manifest;
  manifest << "subject,gesture,repetition,path\n";
  for (std::size_t s = 1; s <= config.synth.subjects; ++s) {
    for (std::size_t g = 0; g < kGestureCount; ++g) {
      const Gesture gesture = static_cast<Gesture>(static_cast<int>(g));
      for (std::size_t r = 1; r <= config.synth.repetitions; ++r) {
        const std::string name = "s" + std::to_string(s) + "_" + gesture_code(gesture) + "_r" +
                                 std::to_string(r) + ".csv";
        const MultichannelSignal trial =
            synth_trial(config, static_cast<int>(s), gesture, static_cast<int>(r));
        save_trial(trial, out_dir / name);
        manifest << s << ',' << gesture_code(gesture) << ',' << r << ',' << name << '\n';
      }
    }
  }
  std::ofstream os(out_dir / "manifest.csv", std::ios::binary);
  if (!os) throw DataError("cannot write output: " + (out_dir / "manifest.csv").string());
  os << manifest.str();
}

}  // namespace msst
