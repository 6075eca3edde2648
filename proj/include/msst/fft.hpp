#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace msst {

using cplx = std::complex<double>;

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Precomputed twiddle table for a fixed power-of-two length. Construction is
// the expensive part; transform application is reentrant and const.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }

  // In-place radix-2 DFT. inverse=true applies the unscaled inverse; callers
  // combining forward+inverse divide by n once.
  void transform(cplx* data, bool inverse) const;

 private:
  std::size_t n_;
  std::vector<cplx> twiddle_;           // e^{-2*pi*i*k/n}, k in [0, n/2)
  std::vector<std::size_t> bit_rev_;
};

// DFT of x. Length must be a nonzero power of two; other lengths are
// rejected so the zero-padding policy stays with the caller.
std::vector<cplx> fft_forward(const std::vector<cplx>& x);

// Inverse DFT, scaled by 1/n so fft_inverse(fft_forward(x)) == x.
std::vector<cplx> fft_inverse(const std::vector<cplx>& x);

}  // namespace msst
