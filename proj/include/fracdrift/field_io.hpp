#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "fracdrift/fields.hpp"

namespace fracdrift {

/// Binary field dump ("FRQS"): magic, u32 version, u32 n, u32 N, f64 L,
/// then N^n f64 samples row-major. All values little-endian.
inline constexpr std::uint32_t kFrqsVersion = 1;

std::string encode_frqs(const RealField& f);
RealField decode_frqs(const std::string& bytes);

void write_frqs(const std::filesystem::path& path, const RealField& f);
RealField read_frqs(const std::filesystem::path& path);

}  // namespace fracdrift
