#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ginovl::provenance {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kReportSchema = "ginovl.report/1";

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t v);

/// Hash of a canonical config string, as embedded in every output.
std::string config_hash(std::string_view canonical_config);

}  // namespace ginovl::provenance
