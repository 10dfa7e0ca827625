#include "otr/keys.hpp"

#include <sodium.h>

#include <stdexcept>

namespace otr {

namespace {

void ensure_sodium() {
    if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
}

}  // namespace

std::string PublicKey::hex() const {
    return to_hex(std::span<const uint8_t>(bytes.data(), bytes.size()));
}

KeyPair make_keypair(const Digest& seed) {
    ensure_sodium();
    KeyPair kp;
    static_assert(crypto_sign_SEEDBYTES == 32);
    static_assert(crypto_sign_PUBLICKEYBYTES == 32);
    static_assert(crypto_sign_SECRETKEYBYTES == 64);
    if (crypto_sign_seed_keypair(kp.pub.bytes.data(), kp.sec.bytes.data(),
                                 seed.bytes.data()) != 0) {
        throw std::runtime_error("keypair generation failed");
    }
    return kp;
}

Signature sign(const SecretKey& key, std::span<const uint8_t> message) {
    ensure_sodium();
    Signature sig;
    static_assert(crypto_sign_BYTES == 64);
    if (crypto_sign_detached(sig.bytes.data(), nullptr, message.data(), message.size(),
                             key.bytes.data()) != 0) {
        throw std::runtime_error("signing failed");
    }
    return sig;
}

bool verify(const PublicKey& key, std::span<const uint8_t> message, const Signature& sig) {
    if (sodium_init() < 0) return false;
    return crypto_sign_verify_detached(sig.bytes.data(), message.data(), message.size(),
                                       key.bytes.data()) == 0;
}

}  // namespace otr
