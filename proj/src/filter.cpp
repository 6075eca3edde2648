#include "msst/filter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace msst {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::complex<double> biquad_response(const Biquad& s, const std::complex<double>& z1) {
  // z1 = z^-1
  const std::complex<double> z2 = z1 * z1;
  return (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
}

// Butterworth band-pass: analog prototype of order n, low-pass to band-pass
// transform s -> (s^2 + w0^2)/(B s), bilinear map to z with prewarped edges.
SosCascade design_butterworth_bandpass(int order, double low_hz, double high_hz, double fs) {
  if (!(low_hz > 0.0) || !(low_hz < high_hz) || !(high_hz < fs / 2.0))
    throw std::invalid_argument("invalid cutoff");
  if (order < 2 || order % 2 != 0)
    throw std::invalid_argument("band-pass order must be even and >= 2");

  const int n = order;
  const double k = 2.0 * fs;  // bilinear constant
  const double wl = k * std::tan(kPi * low_hz / fs);
  const double wh = k * std::tan(kPi * high_hz / fs);
  const double w0sq = wl * wh;
  const double bw = wh - wl;

  // LHP prototype poles, then each maps to a pair of analog band-pass poles.
  std::vector<std::complex<double>> zpoles;
  zpoles.reserve(2 * static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const double theta = kPi * (2.0 * i + n - 1.0) / (2.0 * n);
    const std::complex<double> p(std::cos(theta), std::sin(theta));
    const std::complex<double> bp = bw * p;
    const std::complex<double> disc = std::sqrt(bp * bp - 4.0 * w0sq);
    for (const std::complex<double> s : {(bp + disc) / 2.0, (bp - disc) / 2.0}) {
      zpoles.push_back((k + s) / (k - s));
    }
  }

  // Group into conjugate pairs deterministically.
  std::vector<std::complex<double>> upper;
  for (const auto& p : zpoles) {
    if (p.imag() >= 0.0) upper.push_back(p);
  }
  std::sort(upper.begin(), upper.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  SosCascade cascade;
  for (const auto& p : upper) {
    Biquad s;
    s.b0 = 1.0;
    s.b1 = 0.0;
    s.b2 = -1.0;  // zeros at z = +1 and z = -1
    s.a1 = -2.0 * p.real();
    s.a2 = std::norm(p);
    cascade.sections.push_back(s);
  }

  // Normalize to unit gain at the (digital) geometric center frequency.
  const double fc = fs / kPi * std::atan(std::sqrt(w0sq) / k);
  const double g = cascade.magnitude_at(fc, fs);
  if (!(g > 0.0)) throw std::runtime_error("degenerate band-pass design");
  cascade.sections[0].b0 /= g;
  cascade.sections[0].b1 /= g;
  cascade.sections[0].b2 /= g;
  return cascade;
}

// Second-order notch biquad (constant-gain cookbook form).
SosCascade design_notch(double center_hz, double q, double fs) {
  if (!(center_hz > 0.0) || !(center_hz < fs / 2.0)) throw std::invalid_argument("invalid cutoff");
  if (!(q > 0.0)) throw std::invalid_argument("quality factor must be positive");
  const double w0 = 2.0 * kPi * center_hz / fs;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  Biquad s;
  s.b0 = 1.0 / a0;
  s.b1 = -2.0 * std::cos(w0) / a0;
  s.b2 = 1.0 / a0;
  s.a1 = -2.0 * std::cos(w0) / a0;
  s.a2 = (1.0 - alpha) / a0;
  SosCascade cascade;
  cascade.sections.push_back(s);
  return cascade;
}

// Direct form II transposed, zero initial state.
void sos_filter_in_place(const SosCascade& cascade, std::vector<double>& x) {
  for (const auto& s : cascade.sections) {
    double z1 = 0.0, z2 = 0.0;
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

}  // namespace

double SosCascade::magnitude_at(double freq_hz, double sample_rate_hz) const {
  const double w = 2.0 * kPi * freq_hz / sample_rate_hz;
  const std::complex<double> z1(std::cos(-w), std::sin(-w));
  std::complex<double> h(1.0, 0.0);
  for (const auto& s : sections) h *= biquad_response(s, z1);
  return std::abs(h);
}

double SosCascade::max_pole_modulus() const {
  double m = 0.0;
  for (const auto& s : sections) {
    // roots of z^2 + a1 z + a2
    const std::complex<double> disc = std::sqrt(std::complex<double>(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
    m = std::max(m, std::abs((-s.a1 + disc) / 2.0));
    m = std::max(m, std::abs((-s.a1 - disc) / 2.0));
  }
  return m;
}

SosCascade design_filter(const IirFilterSpec& spec, double sample_rate_hz) {
  if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("sample rate must be positive");
  switch (spec.kind) {
    case FilterKind::butterworth_bandpass:
      return design_butterworth_bandpass(spec.order, spec.low_cut_hz, spec.high_cut_hz,
                                         sample_rate_hz);
    case FilterKind::notch:
      return design_notch(spec.center_hz, spec.quality_factor, sample_rate_hz);
  }
  throw std::invalid_argument("unknown filter kind");
}

MultichannelSignal apply_filter_zero_phase(const MultichannelSignal& signal,
                                           const SosCascade& cascade) {
  signal.validate();
  const std::size_t warmup = 3u * static_cast<std::size_t>(cascade.order());
  if (signal.length_samples() < warmup)
    throw std::invalid_argument("signal shorter than filter warm-up");

  MultichannelSignal out = signal;
  for (auto& ch : out.samples) {
    sos_filter_in_place(cascade, ch);
    std::reverse(ch.begin(), ch.end());
    sos_filter_in_place(cascade, ch);
    std::reverse(ch.begin(), ch.end());
  }
  return out;
}

}  // namespace msst
