// Copyright (c) 2026 The edhoc-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Long-term credentials. A credential is a self-contained public-key record
// (identity, key kind, public key) with a canonical byte encoding CRED_x and
// a short retrieval identifier ID_CRED_x. Identifiers are deliberately NOT
// required to be unique: verification resolves every matching candidate and
// trial-verifies each one, which is the environment the misbinding analyses
// attack. The full credential bytes, not the identifier, are what enter the
// transcript hashes and MAC contexts.

#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "edhoc/cbor.hpp"
#include "edhoc/crypto.hpp"

namespace edhoc {

struct Credential {
    Bytes identity;  // display name bytes
    AuthKind kind = AuthKind::Signature;
    Bytes public_key;
    std::optional<Bytes> private_key;  // own credentials only
    Bytes id_cred;

    // Canonical CRED_x: (identity, kind, public_key). Equal fields encode
    // identically; private key and identifier are not part of it.
    Bytes cred_bytes() const {
        cbor::Writer w;
        w.array(3);
        w.bstr(identity);
        w.uint(kind == AuthKind::Signature ? 0 : 1);
        w.bstr(public_key);
        return w.take();
    }

    Credential public_part() const {
        Credential c = *this;
        c.private_key.reset();
        return c;
    }

    friend bool operator==(const Credential&, const Credential&) = default;
};

inline Result<Credential> credential_from_cred_bytes(ConstSpan cred_bytes) {
    cbor::Reader r(cred_bytes);
    auto arity = r.array();
    if (!arity) return arity.error();
    if (*arity != 3) return Error::MalformedMessage;
    Credential c;
    auto identity = r.bstr();
    if (!identity) return identity.error();
    c.identity = to_bytes(*identity);
    auto kind = r.uint();
    if (!kind) return kind.error();
    if (*kind > 1) return Error::MalformedMessage;
    c.kind = *kind == 0 ? AuthKind::Signature : AuthKind::StaticDH;
    auto pub = r.bstr();
    if (!pub) return pub.error();
    c.public_key = to_bytes(*pub);
    auto done = r.expect_done();
    if (!done) return done.error();
    return c;
}

// Default ID_CRED_x: trailing 4 bytes of SHA-256(CRED_x). Tests may assign
// colliding identifiers deliberately.
inline Bytes default_id_cred(ConstSpan cred_bytes) {
    Bytes digest = sha(HashAlg::Sha256, cred_bytes);
    return Bytes(digest.end() - 4, digest.end());
}

inline Credential make_credential(Bytes identity, AuthKind kind, KeyPair keys,
                                  std::optional<Bytes> id_cred = std::nullopt) {
    Credential c;
    c.identity = std::move(identity);
    c.kind = kind;
    c.public_key = std::move(keys.public_key);
    c.private_key = std::move(keys.private_key);
    c.id_cred = id_cred ? std::move(*id_cred) : default_id_cred(c.cred_bytes());
    return c;
}

inline Result<Credential> make_signature_credential(const CipherSuiteProfile& suite,
                                                    Bytes identity, Rng& rng) {
    auto keys = gen_signature_keypair(suite.signature, rng);
    if (!keys) return keys.error();
    return make_credential(std::move(identity), AuthKind::Signature, std::move(*keys));
}

inline Result<Credential> make_static_dh_credential(const CipherSuiteProfile& suite,
                                                    Bytes identity, Rng& rng) {
    auto keys = gen_keypair(suite.ecdh_curve, rng);
    if (!keys) return keys.error();
    return make_credential(std::move(identity), AuthKind::StaticDH, std::move(*keys));
}

// Trusted peer credentials (public parts only). The local peer's own
// credential is always a member of its own list; the constructor inserts it
// if the caller left it out.
class TrustStore {
public:
    TrustStore() = default;

    TrustStore(const Credential& own, std::vector<Credential> trusted) {
        own_identity_ = own.identity;
        for (auto& c : trusted) entries_.push_back(c.public_part());
        if (!contains_identity(own.identity)) entries_.push_back(own.public_part());
    }

    const std::vector<Credential>& entries() const { return entries_; }
    const Bytes& own_identity() const { return own_identity_; }

    bool contains_identity(ConstSpan identity) const {
        return std::any_of(entries_.begin(), entries_.end(), [&](const Credential& c) {
            return ct_equal(c.identity, identity);
        });
    }

    // Every trusted credential whose identifier matches; possibly several,
    // possibly none. The handshake trial-verifies each candidate.
    std::vector<Credential> resolve(ConstSpan id_cred) const {
        std::vector<Credential> out;
        for (const auto& c : entries_)
            if (ct_equal(c.id_cred, id_cred)) out.push_back(c);
        return out;
    }

private:
    std::vector<Credential> entries_;
    Bytes own_identity_;
};

// Post-verification policy: when an intended peer identity is configured,
// the cryptographically authenticated identity must match it exactly.
inline Result<Unit> check_intended_peer(ConstSpan authenticated_identity,
                                        const std::optional<Bytes>& expected) {
    if (!expected.has_value()) return Unit{};
    if (!ct_equal(authenticated_identity, *expected)) return Error::UnintendedPeer;
    return Unit{};
}

}  // namespace edhoc
