#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bdmec {

using Hash256 = std::array<std::uint8_t, 32>;

Hash256 sha256(std::span<const std::uint8_t> bytes);

std::string hex_encode(std::span<const std::uint8_t> bytes);

// Returns false on odd length or non-hex characters.
bool hex_decode(const std::string& hex, std::vector<std::uint8_t>& out);

}  // namespace bdmec
