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
// The IANA registries the handshake negotiates over: authentication
// methods 0-3 and the cipher-suite table (ids 0-6, 24, 25 concrete;
// -24..-21 reserved for private use).

#pragma once

#include <array>
#include <set>
#include <vector>

#include "edhoc/error.hpp"

namespace edhoc {

enum class AuthKind { Signature, StaticDH };

inline const char* auth_kind_name(AuthKind k) {
    return k == AuthKind::Signature ? "Signature" : "StaticDH";
}

struct AuthMethod {
    int id;
    AuthKind initiator_kind;
    AuthKind responder_kind;

    friend bool operator==(const AuthMethod&, const AuthMethod&) = default;
};

inline Result<AuthMethod> method_kinds(int method_id) {
    switch (method_id) {
        case 0: return AuthMethod{0, AuthKind::Signature, AuthKind::Signature};
        case 1: return AuthMethod{1, AuthKind::Signature, AuthKind::StaticDH};
        case 2: return AuthMethod{2, AuthKind::StaticDH, AuthKind::Signature};
        case 3: return AuthMethod{3, AuthKind::StaticDH, AuthKind::StaticDH};
        default: return Error::UnknownMethod;
    }
}

enum class AeadAlg { AesCcm16_64_128, AesCcm16_128_128, ChaCha20Poly1305, Aes128Gcm, Aes256Gcm };
enum class HashAlg { Sha256, Sha384, Shake256 };
enum class Curve { X25519, P256, P384, X448 };
enum class SigAlg { EdDSA, ES256, ES384 };

struct CipherSuiteProfile {
    int id;
    const char* aead_name;
    AeadAlg aead;
    const char* hash_name;
    HashAlg hash;
    std::size_t mac_length;  // bytes
    const char* ecdh_curve_name;
    Curve ecdh_curve;
    const char* signature_name;
    SigAlg signature;
    const char* app_aead_name;
    AeadAlg app_aead;
    bool implemented;  // primitive backends available in this build
};

// The nine concrete registry rows.
inline const std::array<CipherSuiteProfile, 9>& suite_registry() {
    static const std::array<CipherSuiteProfile, 9> rows = {{
        {0, "AES-CCM-16-64-128", AeadAlg::AesCcm16_64_128, "SHA-256", HashAlg::Sha256, 8,
         "X25519", Curve::X25519, "EdDSA", SigAlg::EdDSA,
         "AES-CCM-16-64-128", AeadAlg::AesCcm16_64_128, true},
        {1, "AES-CCM-16-128-128", AeadAlg::AesCcm16_128_128, "SHA-256", HashAlg::Sha256, 16,
         "X25519", Curve::X25519, "EdDSA", SigAlg::EdDSA,
         "AES-CCM-16-64-128", AeadAlg::AesCcm16_64_128, true},
        {2, "AES-CCM-16-64-128", AeadAlg::AesCcm16_64_128, "SHA-256", HashAlg::Sha256, 8,
         "P-256", Curve::P256, "ES256", SigAlg::ES256,
         "AES-CCM-16-64-128", AeadAlg::AesCcm16_64_128, true},
        {3, "AES-CCM-16-128-128", AeadAlg::AesCcm16_128_128, "SHA-256", HashAlg::Sha256, 16,
         "P-256", Curve::P256, "ES256", SigAlg::ES256,
         "AES-CCM-16-64-128", AeadAlg::AesCcm16_64_128, true},
        {4, "ChaCha20/Poly1305", AeadAlg::ChaCha20Poly1305, "SHA-256", HashAlg::Sha256, 16,
         "X25519", Curve::X25519, "EdDSA", SigAlg::EdDSA,
         "ChaCha20/Poly1305", AeadAlg::ChaCha20Poly1305, true},
        {5, "ChaCha20/Poly1305", AeadAlg::ChaCha20Poly1305, "SHA-256", HashAlg::Sha256, 16,
         "P-256", Curve::P256, "ES256", SigAlg::ES256,
         "ChaCha20/Poly1305", AeadAlg::ChaCha20Poly1305, true},
        {6, "A128GCM", AeadAlg::Aes128Gcm, "SHA-256", HashAlg::Sha256, 16,
         "X25519", Curve::X25519, "ES256", SigAlg::ES256,
         "A128GCM", AeadAlg::Aes128Gcm, true},
        {24, "A256GCM", AeadAlg::Aes256Gcm, "SHA-384", HashAlg::Sha384, 16,
         "P-384", Curve::P384, "ES384", SigAlg::ES384,
         "A256GCM", AeadAlg::Aes256Gcm, true},
        // SHAKE256-based KDF and X448/Ed448 are registry-only in this build.
        {25, "ChaCha20/Poly1305", AeadAlg::ChaCha20Poly1305, "SHAKE256", HashAlg::Shake256, 16,
         "X448", Curve::X448, "EdDSA", SigAlg::EdDSA,
         "ChaCha20/Poly1305", AeadAlg::ChaCha20Poly1305, false},
    }};
    return rows;
}

inline const std::array<int, 4>& reserved_suite_ids() {
    static const std::array<int, 4> ids = {-24, -23, -22, -21};
    return ids;
}

inline Result<CipherSuiteProfile> lookup_suite(int id) {
    for (const auto& row : suite_registry())
        if (row.id == id) return row;
    for (int reserved : reserved_suite_ids())
        if (id == reserved) return Error::ReservedSuite;
    return Error::UnknownSuite;
}

// First entry of the initiator's ordered list that the responder supports;
// initiator preference wins.
inline Result<int> negotiate(const std::vector<int>& suites_i,
                             const std::set<int>& responder_supported) {
    for (int id : suites_i)
        if (responder_supported.count(id)) return id;
    return Error::NoCommonSuite;
}

inline std::size_t hash_length(HashAlg h) {
    switch (h) {
        case HashAlg::Sha256: return 32;
        case HashAlg::Sha384: return 48;
        case HashAlg::Shake256: return 64;
    }
    return 0;
}

struct AeadSpec {
    std::size_t key_length;
    std::size_t iv_length;
    std::size_t tag_length;
};

inline AeadSpec aead_spec(AeadAlg a) {
    switch (a) {
        case AeadAlg::AesCcm16_64_128: return {16, 13, 8};
        case AeadAlg::AesCcm16_128_128: return {16, 13, 16};
        case AeadAlg::ChaCha20Poly1305: return {32, 12, 16};
        case AeadAlg::Aes128Gcm: return {16, 12, 16};
        case AeadAlg::Aes256Gcm: return {32, 12, 16};
    }
    return {0, 0, 0};
}

inline std::size_t curve_public_length(Curve c) {
    switch (c) {
        case Curve::X25519: return 32;
        case Curve::P256: return 65;  // uncompressed point
        case Curve::P384: return 97;
        case Curve::X448: return 56;
    }
    return 0;
}

inline std::size_t curve_shared_length(Curve c) {
    switch (c) {
        case Curve::X25519: return 32;
        case Curve::P256: return 32;
        case Curve::P384: return 48;
        case Curve::X448: return 56;
    }
    return 0;
}

inline std::size_t signature_length(SigAlg s) {
    switch (s) {
        case SigAlg::EdDSA: return 64;  // Ed25519
        case SigAlg::ES256: return 64;  // raw r||s
        case SigAlg::ES384: return 96;
    }
    return 0;
}

// Curve the signature algorithm's key pair lives on. Suite 6 pairs an
// X25519 ECDH curve with ES256 signatures, so this is not always the
// suite's ECDH curve.
inline Curve signature_key_curve(SigAlg s) {
    switch (s) {
        case SigAlg::EdDSA: return Curve::X25519;  // Ed25519 keys, 32-byte raw
        case SigAlg::ES256: return Curve::P256;
        case SigAlg::ES384: return Curve::P384;
    }
    return Curve::X25519;
}

inline std::size_t signature_public_key_length(SigAlg s) {
    switch (s) {
        case SigAlg::EdDSA: return 32;
        case SigAlg::ES256: return 65;
        case SigAlg::ES384: return 97;
    }
    return 0;
}

}  // namespace edhoc
