#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace momentreg::detail {

namespace {

template <typename T>
struct FftwFree {
  void operator()(T* p) const noexcept { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree<T>>;

FftwBuffer<double> alloc_real(std::size_t n) {
  return FftwBuffer<double>(fftw_alloc_real(n));
}
FftwBuffer<fftw_complex> alloc_complex(std::size_t n) {
  return FftwBuffer<fftw_complex>(fftw_alloc_complex(n));
}

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// Plans live for the life of the process.
const PlanPair& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto r = alloc_real(n);
  auto c = alloc_complex(n / 2 + 1);
  const int ni = static_cast<int>(n);
  PlanPair p;
  p.forward = fftw_plan_dft_r2c_1d(ni, r.get(), c.get(), FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_c2r_1d(ni, c.get(), r.get(), FFTW_ESTIMATE);
  if (!p.forward || !p.backward) throw std::runtime_error("FFTW plan creation failed");
  return cache.emplace(n, p).first->second;
}

}  // namespace

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  const auto& plan = plans_for(n);
  auto in = alloc_real(n);
  auto out = alloc_complex(n / 2 + 1);
  std::memcpy(in.get(), x.data(), n * sizeof(double));
  fftw_execute_dft_r2c(plan.forward, in.get(), out.get());
  std::vector<std::complex<double>> result(n / 2 + 1);
  for (std::size_t k = 0; k < result.size(); ++k)
    result[k] = {out[k][0], out[k][1]};
  return result;
}

std::vector<double> irfft(std::span<const std::complex<double>> X, std::size_t n) {
  if (X.size() != n / 2 + 1) throw std::invalid_argument("irfft: size mismatch");
  if (n == 0) return {};
  const auto& plan = plans_for(n);
  auto in = alloc_complex(n / 2 + 1);
  auto out = alloc_real(n);
  for (std::size_t k = 0; k < X.size(); ++k) {
    in[k][0] = X[k].real();
    in[k][1] = X[k].imag();
  }
  // c2r destroys its input; `in` is scratch here.
  fftw_execute_dft_c2r(plan.backward, in.get(), out.get());
  std::vector<double> result(out.get(), out.get() + n);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : result) v *= scale;
  return result;
}

}  // namespace momentreg::detail
