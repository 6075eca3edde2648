#include "msst/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace msst {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("empty signal");
  if (!is_power_of_two(n)) throw std::invalid_argument("length not a power of two");
  twiddle_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[k] = cplx(std::cos(ang), std::sin(ang));
  }
  bit_rev_.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    }
    bit_rev_[i] = r;
  }
}

void FftPlan::transform(cplx* data, bool inverse) const {
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = bit_rev_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx w = twiddle_[k * stride];
        if (inverse) w = std::conj(w);
        const cplx odd = data[start + k + half] * w;
        const cplx even = data[start + k];
        data[start + k] = even + odd;
        data[start + k + half] = even - odd;
      }
    }
  }
}

std::vector<cplx> fft_forward(const std::vector<cplx>& x) {
  if (x.empty()) throw std::invalid_argument("empty signal");
  FftPlan plan(x.size());
  std::vector<cplx> out = x;
  plan.transform(out.data(), false);
  return out;
}

std::vector<cplx> fft_inverse(const std::vector<cplx>& x) {
  if (x.empty()) throw std::invalid_argument("empty signal");
  FftPlan plan(x.size());
  std::vector<cplx> out = x;
  plan.transform(out.data(), true);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace msst
