#include "otr/digest.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

namespace otr {

static_assert(sizeof(crypto_hash_sha256_state) <= 128);

namespace {

void ensure_sodium() {
    // sodium_init is idempotent and thread-safe; -1 only on catastrophic failure.
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialization failed");
}

char hex_digit(unsigned v) { return v < 10 ? char('0' + v) : char('a' + v - 10); }

unsigned hex_value(char c) {
    if (c >= '0' && c <= '9') return unsigned(c - '0');
    if (c >= 'a' && c <= 'f') return unsigned(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return unsigned(c - 'A' + 10);
    throw std::invalid_argument("invalid hex digit");
}

}  // namespace

std::string to_hex(std::span<const uint8_t> data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(hex_digit(b >> 4));
        out.push_back(hex_digit(b & 0x0f));
    }
    return out;
}

Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

std::string Digest::hex() const { return to_hex(view()); }

Digest Digest::from_hex(std::string_view hex) {
    if (hex.size() != 64) throw std::invalid_argument("digest hex must be 64 chars");
    Digest d;
    for (size_t i = 0; i < 32; ++i)
        d.bytes[i] = uint8_t(hex_value(hex[2 * i]) << 4 | hex_value(hex[2 * i + 1]));
    return d;
}

std::string Nonce::hex() const { return to_hex({bytes.data(), bytes.size()}); }

Digest sha256(std::span<const uint8_t> data) {
    ensure_sodium();
    Digest d;
    crypto_hash_sha256(d.bytes.data(), data.data(), data.size());
    return d;
}

Digest sha256(std::string_view data) {
    return sha256(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(data.data()), data.size()));
}

HashWriter::HashWriter() {
    ensure_sodium();
    auto* st = reinterpret_cast<crypto_hash_sha256_state*>(state_.data());
    crypto_hash_sha256_init(st);
}

HashWriter::HashWriter(std::string_view domain_tag) : HashWriter() {
    // Length-prefixed tag keeps distinct domains from colliding by concatenation.
    write_u64(domain_tag.size());
    write(domain_tag);
}

HashWriter& HashWriter::write(std::span<const uint8_t> data) {
    auto* st = reinterpret_cast<crypto_hash_sha256_state*>(state_.data());
    crypto_hash_sha256_update(st, data.data(), data.size());
    return *this;
}

HashWriter& HashWriter::write(std::string_view data) {
    return write(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(data.data()), data.size()));
}

HashWriter& HashWriter::write(const Digest& d) { return write(d.view()); }

HashWriter& HashWriter::write_u64(uint64_t v) {
    uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = uint8_t(v >> (8 * i));
    return write(std::span<const uint8_t>(buf, 8));
}

HashWriter& HashWriter::write_u32(uint32_t v) {
    uint8_t buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = uint8_t(v >> (8 * i));
    return write(std::span<const uint8_t>(buf, 4));
}

Digest HashWriter::finish() {
    auto* st = reinterpret_cast<crypto_hash_sha256_state*>(state_.data());
    Digest d;
    crypto_hash_sha256_final(st, d.bytes.data());
    return d;
}

}  // namespace otr
