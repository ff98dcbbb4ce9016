#include "rcnet/kernels.hpp"

namespace rcnet::kernels::detail {

void matvec_scalar(const double* a, const double* x, double* y, std::size_t m,
                   std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = a + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void poly_rhs_scalar(const double* r, const double* c, double lambda, double p1,
                     double p2, double p3, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = r[i];
    out[i] = lambda * (((p3 * ri + p2) * ri + p1) * ri + c[i]);
  }
}

void axpy_scalar(const double* r, const double* k, double h, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = r[i] + h * k[i];
}

void rk4_combine_scalar(double* r, const double* k1, const double* k2, const double* k3,
                        const double* k4, double h, std::size_t n) {
  const double c = h / 6.0;
  for (std::size_t i = 0; i < n; ++i)
    r[i] += c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace rcnet::kernels::detail
