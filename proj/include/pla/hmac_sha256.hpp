#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace pla {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(const std::uint8_t* data, std::size_t len);

// HMAC-SHA256 per RFC 2104 (block size 64).
Sha256Digest hmac_sha256(const std::vector<std::uint8_t>& key,
                         const std::vector<std::uint8_t>& msg);

}  // namespace pla
