#include "msst/features.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace msst {

char gesture_code(Gesture g) { return kGestureCodes[static_cast<std::size_t>(g)]; }

Gesture gesture_from_code(char code) {
  for (std::size_t i = 0; i < kGestureCount; ++i) {
    if (kGestureCodes[i] == code) return static_cast<Gesture>(static_cast<int>(i));
  }
  throw std::invalid_argument(std::string("unknown gesture label: ") + code);
}

TfDistribution normalize_distribution(const TimeFrequencyMatrix& T, DistributionMode mode) {
  TfDistribution dist;
  dist.freq_axis_hz = T.freq_axis_hz;
  dist.time_axis_s = T.time_axis_s;
  dist.p.resize(T.coeff.size());

  double total = 0.0;
  for (std::size_t i = 0; i < T.coeff.size(); ++i) {
    const double mag = std::abs(T.coeff[i]);
    dist.p[i] = (mode == DistributionMode::magnitude) ? mag : mag * mag;
    total += dist.p[i];
  }
  if (!(total > 0.0)) throw std::invalid_argument("degenerate distribution");
  for (auto& v : dist.p) v /= total;
  return dist;
}

namespace {

struct Marginals {
  double mean_t = 0.0, mean_w = 0.0;
  double sd_t = 0.0, sd_w = 0.0;
};

Marginals distribution_marginals(const TfDistribution& P) {
  const std::size_t rows = P.rows();
  const std::size_t cols = P.cols();
  Marginals m;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double p = P.p[r * cols + c];
      m.mean_t += p * P.time_axis_s[c];
      m.mean_w += p * P.freq_axis_hz[r];
    }
  }
  double var_t = 0.0, var_w = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double p = P.p[r * cols + c];
      const double dt = P.time_axis_s[c] - m.mean_t;
      const double dw = P.freq_axis_hz[r] - m.mean_w;
      var_t += p * dt * dt;
      var_w += p * dw * dw;
    }
  }
  m.sd_t = std::sqrt(std::max(var_t, 0.0));
  m.sd_w = std::sqrt(std::max(var_w, 0.0));
  return m;
}

}  // namespace

double joint_moment(const TfDistribution& P, int n, int m, bool centered, bool standardized) {
  if (n < 0 || m < 0) throw std::invalid_argument("moment order must be nonnegative");
  const std::size_t rows = P.rows();
  const std::size_t cols = P.cols();

  double mean_t = 0.0, mean_w = 0.0, sd_t = 1.0, sd_w = 1.0;
  if (centered || standardized) {
    const Marginals marg = distribution_marginals(P);
    mean_t = marg.mean_t;
    mean_w = marg.mean_w;
    if (standardized) {
      if (marg.sd_t == 0.0 || marg.sd_w == 0.0) return 0.0;  // degenerate guard
      sd_t = marg.sd_t;
      sd_w = marg.sd_w;
    }
  }

  double acc = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double w0 = P.freq_axis_hz[r];
    const double wv = (centered || standardized) ? (w0 - mean_w) / sd_w : w0;
    const double wp = std::pow(wv, m);
    for (std::size_t c = 0; c < cols; ++c) {
      const double t0 = P.time_axis_s[c];
      const double tv = (centered || standardized) ? (t0 - mean_t) / sd_t : t0;
      acc += P.p[r * cols + c] * std::pow(tv, n) * wp;
    }
  }
  return acc;
}

MomentFeatures moment_features_joint(const TfDistribution& P) {
  MomentFeatures f;
  const Marginals marg = distribution_marginals(P);
  f.mean = joint_moment(P, 1, 1, false, false);
  f.variance = joint_moment(P, 2, 2, true, false);
  if (marg.sd_t == 0.0 || marg.sd_w == 0.0) {
    f.skewness = 0.0;
    f.kurtosis = 0.0;
    f.degenerate = true;
  } else {
    f.skewness = joint_moment(P, 3, 3, true, true);
    f.kurtosis = joint_moment(P, 4, 4, true, true);
  }
  return f;
}

MomentFeatures elementwise_stats(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty value set");
  MomentFeatures f;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  f.mean = sum / n;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - f.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  f.variance = values.size() > 1 ? m2 / (n - 1.0) : 0.0;
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    f.skewness = m3 / std::pow(m2, 1.5);
    f.kurtosis = m4 / (m2 * m2);
  } else {
    f.degenerate = true;
  }
  return f;
}

MomentFeatures moment_features_elementwise(const TimeFrequencyMatrix& T) {
  std::vector<double> mags(T.coeff.size());
  for (std::size_t i = 0; i < T.coeff.size(); ++i) mags[i] = std::abs(T.coeff[i]);
  return elementwise_stats(mags);
}

double feature_value(const FeatureRecord& r, std::size_t feature_index) {
  switch (feature_index) {
    case 0: return r.mean;
    case 1: return r.variance;
    case 2: return r.skewness;
    case 3: return r.kurtosis;
    default: throw std::out_of_range("feature index");
  }
}

namespace {

void set_feature_value(FeatureRecord& r, std::size_t feature_index, double v) {
  switch (feature_index) {
    case 0: r.mean = v; break;
    case 1: r.variance = v; break;
    case 2: r.skewness = v; break;
    case 3: r.kurtosis = v; break;
    default: throw std::out_of_range("feature index");
  }
}

}  // namespace

std::vector<FeatureRecord> zscore_columns(const std::vector<FeatureRecord>& table) {
  if (table.empty()) throw std::invalid_argument("empty table");
  std::vector<FeatureRecord> out = table;
  const double n = static_cast<double>(table.size());
  for (std::size_t f = 0; f < 4; ++f) {
    double sum = 0.0;
    for (const auto& r : table) sum += feature_value(r, f);
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : table) {
      const double d = feature_value(r, f) - mean;
      ss += d * d;
    }
    const double sd = table.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    for (auto& r : out) {
      set_feature_value(r, f, sd > 0.0 ? (feature_value(r, f) - mean) / sd : 0.0);
    }
  }
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw std::runtime_error("malformed row at line " + std::to_string(line_no));
  }
  return v;
}

}  // namespace

void write_feature_csv(const std::vector<FeatureRecord>& table, std::ostream& os) {
  os << "subject,gesture,repetition,window,mean,variance,skewness,kurtosis\n";
  for (const auto& r : table) {
    os << r.subject_id << ',' << gesture_code(r.gesture) << ',' << r.repetition << ','
       << r.window_index << ',' << format_double(r.mean) << ',' << format_double(r.variance)
       << ',' << format_double(r.skewness) << ',' << format_double(r.kurtosis) << '\n';
  }
}

std::vector<FeatureRecord> read_feature_csv(std::istream& is) {
  std::vector<FeatureRecord> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("subject,", 0) == 0) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8) throw std::runtime_error("malformed row at line " + std::to_string(line_no));
    FeatureRecord r;
    r.subject_id = static_cast<int>(parse_double(fields[0], line_no));
    if (fields[1].size() != 1) throw std::runtime_error("malformed row at line " + std::to_string(line_no));
    r.gesture = gesture_from_code(fields[1][0]);
    r.repetition = static_cast<int>(parse_double(fields[2], line_no));
    r.window_index = static_cast<int>(parse_double(fields[3], line_no));
    r.mean = parse_double(fields[4], line_no);
    r.variance = parse_double(fields[5], line_no);
    r.skewness = parse_double(fields[6], line_no);
    r.kurtosis = parse_double(fields[7], line_no);
    table.push_back(r);
  }
  return table;
}

}  // namespace msst
