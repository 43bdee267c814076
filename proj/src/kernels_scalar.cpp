#include "brittle/kernels.hpp"

namespace brittle {

namespace {

void stencil_apply(const StencilView& a, const double* x, double* y, std::size_t begin,
                   std::size_t end) {
  const std::size_t s = a.stride;
  for (std::size_t p = begin; p < end; ++p) {
    double v = a.diag[p] * x[p];
    v -= a.east[p] * x[p + 1];
    v -= a.east[p - 1] * x[p - 1];
    v -= a.north[p] * x[p + s];
    v -= a.north[p - s] * x[p - s];
    y[p] = v;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += a[i] * b[i];
    acc[1] += a[i + 1] * b[i + 1];
    acc[2] += a[i + 2] * b[i + 2];
    acc[3] += a[i + 3] * b[i + 3];
  }
  double sum = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void mul(const double* a, const double* b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", stencil_apply, dot, axpy, xpby, mul};
  return table;
}

}  // namespace brittle
