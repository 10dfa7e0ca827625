#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "otr/digest.hpp"
#include "otr/keys.hpp"

namespace otr {

//! Deterministic stand-in for an enclave binary measurement (MRENCLAVE).
Digest measure_enclave(std::string_view model_id, uint32_t binary_version);

struct EnclaveIdentity {
    std::string enclave_id;
    Digest mrenclave;        //! measurement this enclave truthfully reports
    KeyPair signing_key;
    Signature vendor_cert;   //! vendor signature binding enclave_id to the signing key
    bool compromised = false;  //! extracted key: holder can sign arbitrary claims
};

//! Verifier-side trust anchors. Certs chain directly to the vendor key.
struct RootOfTrust {
    PublicKey vendor_key;
    std::set<std::string> revoked;  // enclave ids whose trust was withdrawn
};

//! Issue signing credentials for a new enclave instance.
EnclaveIdentity provision_enclave(const KeyPair& vendor, std::string enclave_id,
                                  const Digest& mrenclave, const Digest& key_seed);

/** One attested inference commitment.
 *
 * The signature covers mrenclave || query_hash || response_hash || nonce, so a
 * verified tuple pins the claimed measurement to exactly this (query, response)
 * pair. Credential fields ride along to keep verification self-contained.
 */
struct CommitmentTuple {
    Digest query_hash;
    std::string response;
    Digest response_hash;
    Nonce nonce;
    Digest mrenclave;  // claimed; equals the real measurement unless forged
    Signature signature;
    std::string sequencer_id;  // filled when the tuple is placed in a batch

    // credential chain
    std::string enclave_id;
    PublicKey signer;
    Signature vendor_cert;
};

enum class QuoteStatus : uint8_t {
    Valid,
    InvalidSignature,
    UnknownVendor,
    Revoked,
};

std::string_view to_string(QuoteStatus s);

/** Produce a signed commitment for the given response.
 *
 * An honest enclave always reports its own measurement. Passing forged_mrenclave
 * models a compromised enclave claiming to be something else; requesting that
 * from an intact enclave throws ForgeryNotPermitted.
 */
CommitmentTuple generate_quote(const EnclaveIdentity& enclave, const Digest& query_hash,
                               std::string response, const Nonce& nonce,
                               std::optional<Digest> forged_mrenclave = std::nullopt);

//! Pure verification against the root of trust. Never throws.
QuoteStatus verify_quote(const CommitmentTuple& tuple, const RootOfTrust& root);

}  // namespace otr
