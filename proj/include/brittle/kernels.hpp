#pragma once

// Inner loops of the conjugate-gradient solver. Every variant evaluates the
// same expression tree in the same order (four-lane partial sums for dot,
// no fused multiply-add), so scalar and vector results agree bit for bit.

#include <cstddef>
#include <string>

namespace brittle {

// Five-point operator on a padded row-major block of `stride` columns:
//   y[p] = diag[p] x[p] - east[p] x[p+1] - east[p-1] x[p-1]
//          - north[p] x[p+stride] - north[p-stride] x[p-stride]
// for p in [begin, end). Callers keep begin >= stride + 1 and pad the arrays
// with zeros so all neighbor reads stay in range.
struct StencilView {
  const double* diag;
  const double* east;
  const double* north;
  std::size_t stride;
};

struct KernelTable {
  const char* name;
  void (*stencil_apply)(const StencilView& a, const double* x, double* y, std::size_t begin,
                        std::size_t end);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = x + beta * y
  void (*xpby)(const double* x, double beta, double* y, std::size_t n);
  // y = a * b (elementwise)
  void (*mul)(const double* a, const double* b, double* y, std::size_t n);
};

enum class KernelChoice { automatic, scalar, avx2 };

KernelChoice parse_kernel_choice(const std::string& name);

const KernelTable& scalar_kernels();
// Null when the build has no AVX2 variant.
const KernelTable* avx2_kernels();
bool cpu_supports_avx2();

// Throws std::invalid_argument when avx2 is requested but unavailable.
const KernelTable& select_kernels(KernelChoice choice);

// Process-wide default used by solves that do not pass a table.
void set_active_kernels(KernelChoice choice);
const KernelTable& active_kernels();

}  // namespace brittle
