#pragma once

// Data-parallel inner loops of the reservoir integration. Each kernel has a
// scalar reference implementation and an AVX2 variant; the active variant is
// chosen once at startup from CPU features and can be overridden (used by the
// equivalence tests and for forcing reproducible scalar runs).

#include <cstddef>

namespace rcnet::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
void set_isa(Isa isa);     // throws if the ISA is unsupported on this CPU
bool cpu_has_avx2();
const char* isa_name(Isa isa);

// y = A x, A row-major m x n
void matvec(const double* a, const double* x, double* y, std::size_t m, std::size_t n);

// out[i] = lambda * (p1*r[i] + p2*r[i]^2 + p3*r[i]^3 + c[i]), length n.
// c carries the coupling-plus-drive term already summed.
void poly_rhs(const double* r, const double* c, double lambda, double p1, double p2,
              double p3, double* out, std::size_t n);

// out[i] = r[i] + h * k[i]
void axpy(const double* r, const double* k, double h, double* out, std::size_t n);

// r[i] += h/6 * (k1[i] + 2 k2[i] + 2 k3[i] + k4[i])
void rk4_combine(double* r, const double* k1, const double* k2, const double* k3,
                 const double* k4, double h, std::size_t n);

namespace detail {
void matvec_scalar(const double* a, const double* x, double* y, std::size_t m, std::size_t n);
void poly_rhs_scalar(const double* r, const double* c, double lambda, double p1,
                     double p2, double p3, double* out, std::size_t n);
void axpy_scalar(const double* r, const double* k, double h, double* out, std::size_t n);
void rk4_combine_scalar(double* r, const double* k1, const double* k2, const double* k3,
                        const double* k4, double h, std::size_t n);

void matvec_avx2(const double* a, const double* x, double* y, std::size_t m, std::size_t n);
void poly_rhs_avx2(const double* r, const double* c, double lambda, double p1,
                   double p2, double p3, double* out, std::size_t n);
void axpy_avx2(const double* r, const double* k, double h, double* out, std::size_t n);
void rk4_combine_avx2(double* r, const double* k1, const double* k2, const double* k3,
                      const double* k4, double h, std::size_t n);
}  // namespace detail

}  // namespace rcnet::kernels
