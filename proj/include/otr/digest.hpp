#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace otr {

using Bytes = std::vector<uint8_t>;

//! 256-bit digest. The single hash primitive used everywhere so that
//! commitments, trace states, measurements and VRF proofs are comparable.
struct Digest {
    std::array<uint8_t, 32> bytes{};

    auto operator<=>(const Digest&) const = default;

    std::string hex() const;
    static Digest from_hex(std::string_view hex);

    std::span<const uint8_t> view() const { return {bytes.data(), bytes.size()}; }
};

//! 128-bit nonce bound into the attestation report body.
struct Nonce {
    std::array<uint8_t, 16> bytes{};

    auto operator<=>(const Nonce&) const = default;
    std::string hex() const;
};

Digest sha256(std::span<const uint8_t> data);
Digest sha256(std::string_view data);

/** Incremental hasher for building domain-separated digests. */
class HashWriter {
public:
    HashWriter();
    explicit HashWriter(std::string_view domain_tag);

    HashWriter& write(std::span<const uint8_t> data);
    HashWriter& write(std::string_view data);
    HashWriter& write(const Digest& d);
    HashWriter& write_u64(uint64_t v);  // little-endian
    HashWriter& write_u32(uint32_t v);  // little-endian

    Digest finish();

private:
    std::array<uint8_t, 128> state_;  // opaque crypto_hash_sha256_state storage
};

std::string to_hex(std::span<const uint8_t> data);
Bytes to_bytes(std::string_view s);

}  // namespace otr
