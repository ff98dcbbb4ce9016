#include <stdexcept>

#include "rcnet/kernels.hpp"

namespace rcnet::kernels {

namespace {

Isa g_isa = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;

}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return g_isa; }

void set_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2())
    throw std::runtime_error("kernels: AVX2 not supported on this CPU");
  g_isa = isa;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void matvec(const double* a, const double* x, double* y, std::size_t m, std::size_t n) {
  if (g_isa == Isa::avx2)
    detail::matvec_avx2(a, x, y, m, n);
  else
    detail::matvec_scalar(a, x, y, m, n);
}

void poly_rhs(const double* r, const double* c, double lambda, double p1, double p2,
              double p3, double* out, std::size_t n) {
  if (g_isa == Isa::avx2)
    detail::poly_rhs_avx2(r, c, lambda, p1, p2, p3, out, n);
  else
    detail::poly_rhs_scalar(r, c, lambda, p1, p2, p3, out, n);
}

void axpy(const double* r, const double* k, double h, double* out, std::size_t n) {
  if (g_isa == Isa::avx2)
    detail::axpy_avx2(r, k, h, out, n);
  else
    detail::axpy_scalar(r, k, h, out, n);
}

void rk4_combine(double* r, const double* k1, const double* k2, const double* k3,
                 const double* k4, double h, std::size_t n) {
  if (g_isa == Isa::avx2)
    detail::rk4_combine_avx2(r, k1, k2, k3, k4, h, n);
  else
    detail::rk4_combine_scalar(r, k1, k2, k3, k4, h, n);
}

}  // namespace rcnet::kernels
