#pragma once

#include <complex>
#include <span>

namespace gpcollapse {

using cplx = std::complex<double>;

/// Square 2D complex FFT of side n. Plans are shared per size and created
/// under a lock; execution uses the new-array interface so one object may be
/// used concurrently on distinct buffers.
class Fft2d {
 public:
  explicit Fft2d(int n);

  int n() const { return n_; }

  /// Unnormalized forward transform, out[k] = sum_x in[x] e^{-ikx}.
  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  /// Inverse transform including the 1/n^2 factor.
  void backward(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  int n_;
  void* forward_plan_;
  void* backward_plan_;
};

}  // namespace gpcollapse
