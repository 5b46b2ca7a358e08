#include "gpcollapse/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace gpcollapse {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

// FFTW's planner is not reentrant; plans live for the process lifetime.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

PlanPair plans_for(int n) {
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  auto* in = fftw_alloc_complex(static_cast<size_t>(n) * n);
  auto* out = fftw_alloc_complex(static_cast<size_t>(n) * n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, flags),
             fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, flags)};
  fftw_free(in);
  fftw_free(out);
  if (p.forward == nullptr || p.backward == nullptr) {
    throw std::runtime_error("fftw: plan creation failed");
  }
  cache.emplace(n, p);
  return p;
}

fftw_complex* as_fftw(const cplx* p) {
  // fftw_execute_dft takes non-const input; out-of-place c2c leaves it intact.
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
}

}  // namespace

Fft2d::Fft2d(int n) : n_(n) {
  if (n <= 0) throw std::invalid_argument("Fft2d: n must be positive");
  const PlanPair p = plans_for(n);
  forward_plan_ = p.forward;
  backward_plan_ = p.backward;
}

void Fft2d::forward(std::span<const cplx> in, std::span<cplx> out) const {
  const auto size = static_cast<size_t>(n_) * n_;
  if (in.size() != size || out.size() != size) throw std::invalid_argument("Fft2d: size mismatch");
  if (in.data() == out.data()) throw std::invalid_argument("Fft2d: in-place transform not supported");
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(in.data()), as_fftw(out.data()));
}

void Fft2d::backward(std::span<const cplx> in, std::span<cplx> out) const {
  const auto size = static_cast<size_t>(n_) * n_;
  if (in.size() != size || out.size() != size) throw std::invalid_argument("Fft2d: size mismatch");
  if (in.data() == out.data()) throw std::invalid_argument("Fft2d: in-place transform not supported");
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(in.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(size);
  for (auto& v : out) v *= scale;
}

}  // namespace gpcollapse
