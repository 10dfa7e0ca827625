#include "otr/attest.hpp"

#include "otr/errors.hpp"

namespace otr {

namespace {

Bytes cert_message(std::string_view enclave_id, const PublicKey& key) {
    Bytes msg;
    msg.reserve(8 + enclave_id.size() + key.bytes.size());
    const uint64_t n = enclave_id.size();
    for (int i = 0; i < 8; ++i) msg.push_back(static_cast<uint8_t>(n >> (8 * i)));
    msg.insert(msg.end(), enclave_id.begin(), enclave_id.end());
    msg.insert(msg.end(), key.bytes.begin(), key.bytes.end());
    return msg;
}

// Signed report: claimed measurement followed by the commitment body
// query_hash || response_hash || nonce. Fixed-width fields, no framing needed.
Bytes report_message(const Digest& mrenclave, const Digest& query_hash,
                     const Digest& response_hash, const Nonce& nonce) {
    Bytes msg;
    msg.reserve(32 + 32 + 32 + 16);
    msg.insert(msg.end(), mrenclave.bytes.begin(), mrenclave.bytes.end());
    msg.insert(msg.end(), query_hash.bytes.begin(), query_hash.bytes.end());
    msg.insert(msg.end(), response_hash.bytes.begin(), response_hash.bytes.end());
    msg.insert(msg.end(), nonce.bytes.begin(), nonce.bytes.end());
    return msg;
}

}  // namespace

Digest measure_enclave(std::string_view model_id, uint32_t binary_version) {
    HashWriter w("otr/measure");
    w.write(model_id);
    w.write_u32(binary_version);
    return w.finish();
}

EnclaveIdentity provision_enclave(const KeyPair& vendor, std::string enclave_id,
                                  const Digest& mrenclave, const Digest& key_seed) {
    EnclaveIdentity e;
    e.enclave_id = std::move(enclave_id);
    e.mrenclave = mrenclave;
    e.signing_key = make_keypair(key_seed);
    const Bytes msg = cert_message(e.enclave_id, e.signing_key.pub);
    e.vendor_cert = sign(vendor.sec, msg);
    return e;
}

std::string_view to_string(QuoteStatus s) {
    switch (s) {
        case QuoteStatus::Valid: return "valid";
        case QuoteStatus::InvalidSignature: return "invalid_signature";
        case QuoteStatus::UnknownVendor: return "unknown_vendor";
        case QuoteStatus::Revoked: return "revoked";
    }
    return "?";
}

CommitmentTuple generate_quote(const EnclaveIdentity& enclave, const Digest& query_hash,
                               std::string response, const Nonce& nonce,
                               std::optional<Digest> forged_mrenclave) {
    Digest claimed = enclave.mrenclave;
    if (forged_mrenclave && *forged_mrenclave != enclave.mrenclave) {
        if (!enclave.compromised) {
            throw ForgeryNotPermitted("enclave " + enclave.enclave_id +
                                      " is intact and reports only its own measurement");
        }
        claimed = *forged_mrenclave;
    }

    CommitmentTuple t;
    t.query_hash = query_hash;
    t.response = std::move(response);
    t.response_hash = sha256(t.response);
    t.nonce = nonce;
    t.mrenclave = claimed;
    t.enclave_id = enclave.enclave_id;
    t.signer = enclave.signing_key.pub;
    t.vendor_cert = enclave.vendor_cert;
    const Bytes msg = report_message(claimed, t.query_hash, t.response_hash, t.nonce);
    t.signature = sign(enclave.signing_key.sec, msg);
    return t;
}

QuoteStatus verify_quote(const CommitmentTuple& tuple, const RootOfTrust& root) {
    // Chain first: an unknown signer's body signature proves nothing.
    const Bytes cert = cert_message(tuple.enclave_id, tuple.signer);
    if (!verify(root.vendor_key, cert, tuple.vendor_cert)) {
        return QuoteStatus::UnknownVendor;
    }
    if (root.revoked.contains(tuple.enclave_id)) {
        return QuoteStatus::Revoked;
    }
    const Bytes msg =
        report_message(tuple.mrenclave, tuple.query_hash, tuple.response_hash, tuple.nonce);
    if (!verify(tuple.signer, msg, tuple.signature)) {
        return QuoteStatus::InvalidSignature;
    }
    return QuoteStatus::Valid;
}

}  // namespace otr
