#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace lrdcp::detail {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are made once per (size, kind) with FFTW_UNALIGNED so that
// std::vector storage can be passed to the new-array execute functions.
std::mutex g_plan_mutex;
std::map<std::pair<int, int>, fftw_plan> g_plans;

fftw_plan plan_for(int n, int kind) {
  std::lock_guard lock(g_plan_mutex);
  auto it = g_plans.find({n, kind});
  if (it != g_plans.end()) return it->second;
  fftw_plan p = nullptr;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (kind == 0) {
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(n));
    auto* ptr = reinterpret_cast<fftw_complex*>(buf.data());
    p = fftw_plan_dft_1d(n, ptr, ptr, FFTW_FORWARD, flags);
  } else {
    std::vector<double> in(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n / 2 + 1));
    p = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), flags);
  }
  g_plans.emplace(std::make_pair(n, kind), p);
  return p;
}

}  // namespace

void dft_forward(std::vector<std::complex<double>>& data) {
  if (data.empty()) return;
  const int n = static_cast<int>(data.size());
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(n, 0), ptr, ptr);
}

std::vector<std::complex<double>> dft_real(std::span<const double> data) {
  const int n = static_cast<int>(data.size());
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n / 2 + 1));
  if (n == 0) return out;
  // r2c may clobber its input only for multi-dimensional c2r; copy for const-correctness.
  std::vector<double> in(data.begin(), data.end());
  fftw_execute_dft_r2c(plan_for(n, 1), in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace lrdcp::detail
