#pragma once

#include <optional>
#include <string_view>

namespace unirec::simd {

enum class Isa { Scalar, Avx2 };

bool cpu_has_avx2() noexcept;

/// Kernel family used by the dispatched entry points: the widest one the
/// CPU supports, unless UNIREC_ISA=scalar is set or an override is active.
Isa active_isa() noexcept;

/// Pins dispatch to `isa` (or restores auto-detection with nullopt).
/// Requests for an unsupported ISA fall back to scalar.
void set_isa_override(std::optional<Isa> isa) noexcept;

std::string_view isa_name(Isa isa) noexcept;

}  // namespace unirec::simd
