#include "hybridsort/lanes.hpp"

#include <stdexcept>

namespace hybridsort {

std::string_view to_string(LaneBackend backend) noexcept {
  return backend == LaneBackend::Native ? "native" : "emulated";
}

std::optional<LaneBackend> parse_backend(std::string_view name) noexcept {
  if (name == "emulated") return LaneBackend::Emulated;
  if (name == "native") return LaneBackend::Native;
  return std::nullopt;
}

void require_backend(LaneBackend backend) {
  if (backend == LaneBackend::Native && !native_available()) {
    throw std::invalid_argument(
        "native lane backend not compiled in (configure with "
        "HYBRIDSORT_NATIVE=ON on a host with SSE4.1 or AArch64 NEON)");
  }
}

}  // namespace hybridsort
