#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace simploscore::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> out{&scalar_table()};
  if (const auto* t = detail::avx2_table(); t != nullptr && cpu_has_avx2()) out.push_back(t);
  if (const auto* t = detail::neon_table(); t != nullptr) out.push_back(t);
  return out;
}

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("SIMPLOSCORE_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_table();
    return *available_tables().back();
  }();
  return chosen;
}

}  // namespace simploscore::kernels
