#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "msst/tfmatrix.hpp"

namespace msst {

// The ten gesture labels, in fixed reporting order.
enum class Gesture : int {
  rest = 0,          // X
  extension,         // E
  flexion,           // F
  ulnar_deviation,   // U
  radial_deviation,  // R
  grip,              // G
  fingers_abduction, // B
  fingers_adduction, // D
  supination,        // S
  pronation,         // P
};

inline constexpr std::size_t kGestureCount = 10;
inline constexpr std::array<char, kGestureCount> kGestureCodes = {'X', 'E', 'F', 'U', 'R',
                                                                  'G', 'B', 'D', 'S', 'P'};

char gesture_code(Gesture g);
Gesture gesture_from_code(char code);

enum class DistributionMode { magnitude, energy };
enum class FeatureMode { joint, elementwise };

// Normalized nonnegative distribution over the TF plane, summing to 1.
struct TfDistribution {
  std::vector<double> p;  // row-major [bin][time]
  std::vector<double> freq_axis_hz;
  std::vector<double> time_axis_s;

  std::size_t rows() const { return freq_axis_hz.size(); }
  std::size_t cols() const { return time_axis_s.size(); }
};

// P = |T| / sum|T| (magnitude mode) or |T|^2 / sum|T|^2 (energy mode).
TfDistribution normalize_distribution(const TimeFrequencyMatrix& T,
                                      DistributionMode mode = DistributionMode::magnitude);

// Discrete joint moment sum_t sum_w t^n w^m P(w,t), t in seconds, w in Hz.
// centered replaces t, w by deviations from their means; standardized divides
// the deviations by the marginal standard deviations (0 when degenerate).
double joint_moment(const TfDistribution& P, int n, int m, bool centered = false,
                    bool standardized = false);

struct MomentFeatures {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  bool degenerate = false;  // single-support guard fired
};

// Joint mode: mean = <t w>, variance = centered (2,2), skewness and kurtosis
// the standardized (3,3) and (4,4) joint moments.
MomentFeatures moment_features_joint(const TfDistribution& P);

// Flat sample statistics of arbitrary values (variance with divisor n-1,
// kurtosis without the excess offset).
MomentFeatures elementwise_stats(std::span<const double> values);

// Elementwise mode over the flattened coefficient magnitudes of T.
MomentFeatures moment_features_elementwise(const TimeFrequencyMatrix& T);

struct FeatureRecord {
  int subject_id = 0;
  Gesture gesture = Gesture::rest;
  int repetition = 0;
  int window_index = 0;
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  bool degenerate = false;
};

inline constexpr std::array<const char*, 4> kFeatureNames = {"mean", "variance", "skewness",
                                                             "kurtosis"};

double feature_value(const FeatureRecord& r, std::size_t feature_index);

// Replaces each of the four feature columns by (x - mean) / sample std;
// zero-variance columns become all zeros.
std::vector<FeatureRecord> zscore_columns(const std::vector<FeatureRecord>& table);

// Feature table CSV: fixed header, one row per segment, values formatted to
// round-trip IEEE-754 doubles.
void write_feature_csv(const std::vector<FeatureRecord>& table, std::ostream& os);
std::vector<FeatureRecord> read_feature_csv(std::istream& is);

}  // namespace msst
