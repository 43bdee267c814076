// Built with -mavx2 -ffp-contract=off; only reached after a runtime CPU check.
#include <immintrin.h>

#include "brittle/kernels.hpp"

namespace brittle {

namespace {

void stencil_apply(const StencilView& a, const double* x, double* y, std::size_t begin,
                   std::size_t end) {
  const std::size_t s = a.stride;
  std::size_t p = begin;
  for (; p + 4 <= end; p += 4) {
    __m256d v = _mm256_mul_pd(_mm256_loadu_pd(a.diag + p), _mm256_loadu_pd(x + p));
    v = _mm256_sub_pd(v, _mm256_mul_pd(_mm256_loadu_pd(a.east + p), _mm256_loadu_pd(x + p + 1)));
    v = _mm256_sub_pd(
        v, _mm256_mul_pd(_mm256_loadu_pd(a.east + p - 1), _mm256_loadu_pd(x + p - 1)));
    v = _mm256_sub_pd(v, _mm256_mul_pd(_mm256_loadu_pd(a.north + p), _mm256_loadu_pd(x + p + s)));
    v = _mm256_sub_pd(
        v, _mm256_mul_pd(_mm256_loadu_pd(a.north + p - s), _mm256_loadu_pd(x + p - s)));
    _mm256_storeu_pd(y + p, v);
  }
  for (; p < end; ++p) {
    double v = a.diag[p] * x[p];
    v -= a.east[p] * x[p + 1];
    v -= a.east[p - 1] * x[p - 1];
    v -= a.north[p] * x[p + s];
    v -= a.north[p - s] * x[p - s];
    y[p] = v;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(vb, _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void mul(const double* a, const double* b, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) y[i] = a[i] * b[i];
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{"avx2", stencil_apply, dot, axpy, xpby, mul};
  return &table;
}

}  // namespace brittle
