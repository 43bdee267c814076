#include <atomic>
#include <stdexcept>

#include "brittle/kernels.hpp"

namespace brittle {

#ifndef BRITTLE_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_supports_avx2() {
#if defined(BRITTLE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

KernelChoice parse_kernel_choice(const std::string& name) {
  if (name == "auto") return KernelChoice::automatic;
  if (name == "scalar") return KernelChoice::scalar;
  if (name == "avx2") return KernelChoice::avx2;
  throw std::invalid_argument("kernel: expected auto, scalar or avx2, got '" + name + "'");
}

const KernelTable& select_kernels(KernelChoice choice) {
  const bool have_avx2 = avx2_kernels() != nullptr && cpu_supports_avx2();
  switch (choice) {
    case KernelChoice::scalar:
      return scalar_kernels();
    case KernelChoice::avx2:
      if (!have_avx2) throw std::invalid_argument("kernel: avx2 not available on this build/CPU");
      return *avx2_kernels();
    case KernelChoice::automatic:
      break;
  }
  return have_avx2 ? *avx2_kernels() : scalar_kernels();
}

namespace {
std::atomic<const KernelTable*> g_active{nullptr};
}

void set_active_kernels(KernelChoice choice) { g_active.store(&select_kernels(choice)); }

const KernelTable& active_kernels() {
  const KernelTable* table = g_active.load();
  if (!table) {
    table = &select_kernels(KernelChoice::automatic);
    g_active.store(table);
  }
  return *table;
}

}  // namespace brittle
