#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>

#include "otr/digest.hpp"

namespace otr {

struct PublicKey {
    std::array<uint8_t, 32> bytes{};
    auto operator<=>(const PublicKey&) const = default;
    std::string hex() const;
};

//! Ed25519 secret key (libsodium layout: seed || public key).
struct SecretKey {
    std::array<uint8_t, 64> bytes{};
};

struct Signature {
    std::array<uint8_t, 64> bytes{};
    auto operator<=>(const Signature&) const = default;
};

struct KeyPair {
    PublicKey pub;
    SecretKey sec;
};

//! Deterministic keypair; the digest is the Ed25519 seed.
KeyPair make_keypair(const Digest& seed);

Signature sign(const SecretKey& key, std::span<const uint8_t> message);

//! Pure check; never throws.
bool verify(const PublicKey& key, std::span<const uint8_t> message, const Signature& sig);

}  // namespace otr
