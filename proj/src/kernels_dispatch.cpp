#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace wgtrap::kernels {

namespace {

Backend detect() {
  if (const char* forced = std::getenv("WGTRAP_KERNELS")) {
    const std::string want(forced);
    if (want == "scalar") return Backend::scalar;
    if (want == "avx2" && avx2_supported()) return Backend::avx2;
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": size mismatch");
}

}  // namespace

bool avx2_supported() {
#if defined(WGTRAP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (backend == Backend::avx2 && !avx2_supported())
    throw std::invalid_argument("AVX2 kernels are not available on this CPU");
  current().store(backend, std::memory_order_relaxed);
}

std::string_view backend_name(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

#if defined(WGTRAP_HAVE_AVX2)
#define WGTRAP_DISPATCH(fn, ...) \
  (active_backend() == Backend::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define WGTRAP_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void potential(std::span<const cplx> eps, double n_ref_sq, double scale, std::span<cplx> out) {
  require_same(eps.size(), out.size(), "potential");
  WGTRAP_DISPATCH(potential, eps.data(), eps.size(), n_ref_sq, scale, out.data());
}

void cn_rhs(std::span<const cplx> psi, std::span<const cplx> v, double half_dz, double lap_coef,
            std::span<cplx> out) {
  require_same(psi.size(), v.size(), "cn_rhs");
  require_same(psi.size(), out.size(), "cn_rhs");
  if (psi.size() < 3) throw std::invalid_argument("cn_rhs needs at least 3 samples");
  WGTRAP_DISPATCH(cn_rhs, psi.data(), v.data(), psi.size(), half_dz, lap_coef, out.data());
}

void cn_diagonal(std::span<const cplx> v, double half_dz, double lap_coef, std::span<cplx> diag) {
  require_same(v.size(), diag.size(), "cn_diagonal");
  WGTRAP_DISPATCH(cn_diagonal, v.data(), v.size(), half_dz, lap_coef, diag.data());
}

void intensity(std::span<const cplx> psi, std::span<double> out) {
  require_same(psi.size(), out.size(), "intensity");
  WGTRAP_DISPATCH(intensity, psi.data(), psi.size(), out.data());
}

double sum_intensity(std::span<const cplx> psi) {
  return WGTRAP_DISPATCH(sum_intensity, psi.data(), psi.size());
}

#undef WGTRAP_DISPATCH

}  // namespace wgtrap::kernels
