#include "unirec/simd/cpu.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace unirec::simd {
namespace {

// -1: auto, otherwise an Isa value.
std::atomic<int> g_override{-1};

Isa detect() noexcept {
  if (const char* env = std::getenv("UNIREC_ISA"); env && std::strcmp(env, "scalar") == 0) {
    return Isa::Scalar;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  static const bool has = __builtin_cpu_supports("avx2");
  return has;
#else
  return false;
#endif
}

Isa active_isa() noexcept {
  const int forced = g_override.load(std::memory_order_relaxed);
  if (forced >= 0) {
    const auto isa = static_cast<Isa>(forced);
    return isa == Isa::Avx2 && !cpu_has_avx2() ? Isa::Scalar : isa;
  }
  static const Isa detected = detect();
  return detected;
}

void set_isa_override(std::optional<Isa> isa) noexcept {
  g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

}  // namespace unirec::simd
