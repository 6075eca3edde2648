#include "msst/dataio.hpp"

#include "msst/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace msst {

namespace {
constexpr double kPi = 3.14159265358979323846;

DataError data_error(const std::string& what) { return DataError(what); }

double parse_field(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  const char* stop = last;
  while (stop != first && (stop[-1] == ' ' || stop[-1] == '\t' || stop[-1] == '\r')) --stop;
  const auto res = std::from_chars(first, stop, v);
  if (res.ec != std::errc{} || res.ptr != stop || first == stop)
    throw data_error("malformed row at line " + std::to_string(line_no));
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

double SplitMix64::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

TrialManifest read_manifest(const std::filesystem::path& path, double sample_rate_hz,
                            std::size_t channel_count) {
  std::ifstream is(path);
  if (!is) throw data_error("cannot open manifest: " + path.string());

  TrialManifest manifest;
  manifest.sample_rate_hz = sample_rate_hz;
  manifest.channel_count = channel_count;

  std::set<std::string> seen_paths;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("subject,", 0) == 0) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 4) throw data_error("malformed row at line " + std::to_string(line_no));
    ManifestEntry entry;
    entry.subject_id = static_cast<int>(parse_field(fields[0], line_no));
    if (entry.subject_id < 1 || entry.subject_id > 40)
      throw data_error("subject id out of range at line " + std::to_string(line_no));
    std::string code = fields[1];
    if (!code.empty() && code.back() == '\r') code.pop_back();
    if (code.size() != 1) throw data_error("malformed row at line " + std::to_string(line_no));
    entry.gesture = gesture_from_code(code[0]);
    entry.repetition = static_cast<int>(parse_field(fields[2], line_no));
    if (entry.repetition < 1 || entry.repetition > 5)
      throw data_error("repetition out of range at line " + std::to_string(line_no));
    std::string p = fields[3];
    if (!p.empty() && p.back() == '\r') p.pop_back();
    if (p.empty()) throw data_error("malformed row at line " + std::to_string(line_no));
    if (!seen_paths.insert(p).second)
      throw data_error("duplicate trial path at line " + std::to_string(line_no));
    entry.file_path = path.parent_path() / p;
    manifest.entries.push_back(std::move(entry));
  }
  if (manifest.entries.empty()) throw data_error("empty manifest");
  return manifest;
}

MultichannelSignal load_trial(const std::filesystem::path& path, const TrialLoadOptions& options) {
  std::ifstream is(path);
  if (!is) throw data_error("cannot open trial: " + path.string());

  MultichannelSignal signal;
  signal.sample_rate_hz = options.sample_rate_hz;
  signal.samples.assign(options.channel_count, {});

  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      // optional header: skip if the first field is not numeric
      const auto fields = split_csv(line);
      double probe = 0.0;
      const auto res = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), probe);
      if (res.ec != std::errc{}) continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != options.channel_count)
      throw data_error("malformed row at line " + std::to_string(line_no) + ": expected " +
                       std::to_string(options.channel_count) + " columns, got " +
                       std::to_string(fields.size()));
    for (std::size_t c = 0; c < options.channel_count; ++c) {
      const double v = parse_field(fields[c], line_no);
      if (!std::isfinite(v))
        throw data_error("non-finite sample at line " + std::to_string(line_no));
      signal.samples[c].push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw data_error("empty trial");
  if (options.expected_samples && rows != *options.expected_samples)
    throw data_error("length mismatch: expected " + std::to_string(*options.expected_samples) +
                     " samples, got " + std::to_string(rows));
  return signal;
}

void save_trial(const MultichannelSignal& signal, const std::filesystem::path& path) {
  signal.validate();
  std::ofstream os(path);
  if (!os) throw data_error("cannot write trial: " + path.string());
  char buf[32];
  const std::size_t n = signal.length_samples();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < signal.channel_count(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", signal.samples[c][i]);
      if (c) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

std::size_t window_count(std::size_t trimmed_samples, std::size_t window_samples,
                         std::size_t step_samples) {
  if (trimmed_samples < window_samples) return 0;
  return (trimmed_samples - window_samples) / step_samples + 1;
}

std::vector<MultichannelSignal> trim_and_segment(const MultichannelSignal& signal,
                                                 const SegmentationSpec& spec) {
  signal.validate();
  if (!(spec.window_s > 0.0) || !(spec.step_s > 0.0) || spec.step_s > spec.window_s)
    throw std::invalid_argument("invalid segmentation spec");
  if (spec.trim_head_s < 0.0 || spec.trim_tail_s < 0.0)
    throw std::invalid_argument("invalid segmentation spec");

  const double fs = signal.sample_rate_hz;
  const std::size_t head = static_cast<std::size_t>(std::llround(spec.trim_head_s * fs));
  const std::size_t tail = static_cast<std::size_t>(std::llround(spec.trim_tail_s * fs));
  const std::size_t window = static_cast<std::size_t>(std::llround(spec.window_s * fs));
  const std::size_t step = static_cast<std::size_t>(std::llround(spec.step_s * fs));
  if (window == 0 || step == 0) throw std::invalid_argument("invalid segmentation spec");

  const std::size_t n = signal.length_samples();
  if (head + tail >= n) throw data_error("signal shorter than window");
  const std::size_t trimmed = n - head - tail;
  if (trimmed < window) throw data_error("signal shorter than window");

  const std::size_t count = window_count(trimmed, window, step);
  std::vector<MultichannelSignal> windows;
  windows.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    MultichannelSignal w;
    w.sample_rate_hz = fs;
    w.samples.resize(signal.channel_count());
    const std::size_t start = head + k * step;
    for (std::size_t c = 0; c < signal.channel_count(); ++c) {
      w.samples[c].assign(signal.samples[c].begin() + static_cast<std::ptrdiff_t>(start),
                          signal.samples[c].begin() + static_cast<std::ptrdiff_t>(start + window));
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

SynthComponent SynthComponent::tone(double f, double amp) {
  SynthComponent c;
  c.kind = Kind::tone;
  c.freq_hz = f;
  c.amplitude = amp;
  return c;
}

SynthComponent SynthComponent::chirp(double f0, double f1, double amp) {
  SynthComponent c;
  c.kind = Kind::chirp;
  c.freq_hz = f0;
  c.freq_end_hz = f1;
  c.amplitude = amp;
  return c;
}

SynthComponent SynthComponent::noise(double sigma, std::uint64_t seed) {
  SynthComponent c;
  c.kind = Kind::noise;
  c.sigma = sigma;
  c.seed = seed;
  return c;
}

MultichannelSignal synth_multichannel(const std::vector<std::vector<SynthComponent>>& channels,
                                      double duration_s, double sample_rate_hz) {
  if (channels.empty()) throw std::invalid_argument("empty signal");
  if (!(sample_rate_hz > 0.0) || !(duration_s > 0.0))
    throw std::invalid_argument("invalid synthesis parameters");
  const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  if (n == 0) throw std::invalid_argument("invalid synthesis parameters");
  const double nyquist = sample_rate_hz / 2.0;

  MultichannelSignal signal;
  signal.sample_rate_hz = sample_rate_hz;
  signal.samples.assign(channels.size(), std::vector<double>(n, 0.0));

  for (std::size_t ch = 0; ch < channels.size(); ++ch) {
    auto& samples = signal.samples[ch];
    for (const auto& comp : channels[ch]) {
      switch (comp.kind) {
        case SynthComponent::Kind::tone: {
          if (comp.freq_hz >= nyquist) throw std::invalid_argument("frequency exceeds Nyquist");
          for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / sample_rate_hz;
            samples[i] += comp.amplitude * std::cos(2.0 * kPi * comp.freq_hz * t);
          }
          break;
        }
        case SynthComponent::Kind::chirp: {
          if (comp.freq_hz >= nyquist || comp.freq_end_hz >= nyquist)
            throw std::invalid_argument("frequency exceeds Nyquist");
          const double rate = (comp.freq_end_hz - comp.freq_hz) / duration_s;
          for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / sample_rate_hz;
            const double phase = 2.0 * kPi * (comp.freq_hz * t + 0.5 * rate * t * t);
            samples[i] += comp.amplitude * std::cos(phase);
          }
          break;
        }
        case SynthComponent::Kind::noise: {
          SplitMix64 rng(comp.seed);
          for (std::size_t i = 0; i < n; ++i) samples[i] += comp.sigma * rng.gaussian();
          break;
        }
      }
    }
  }
  return signal;
}

}  // namespace msst
