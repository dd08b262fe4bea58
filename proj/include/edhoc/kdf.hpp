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
// The handshake key schedule: HKDF extract/expand over the suite hash,
// transcript hashes TH_2..TH_4, the PRK chain ending in PRK_out, per-message
// keys and MACs. Structural choices that matter:
//   - TH_2 hashes message_1 through an inner digest so argument boundaries
//     cannot be shifted between g_y and the message bytes.
//   - TH_3/TH_4 are built from plaintexts and the peer's full credential
//     bytes, never from identifiers or ciphertext.
//   - PRK_2e uses TH_2 as the extract salt; the salt is never empty.
//   - Every expand call carries a distinct label; exporter labels live in
//     a reserved band >= 1000.

#pragma once

#include <optional>
#include <vector>

#include "edhoc/cbor.hpp"
#include "edhoc/crypto.hpp"

namespace edhoc {

namespace labels {
inline constexpr std::uint64_t kKeystream2 = 0;
inline constexpr std::uint64_t kSalt3e2m = 1;
inline constexpr std::uint64_t kMac2 = 2;
inline constexpr std::uint64_t kK3 = 3;
inline constexpr std::uint64_t kIv3 = 4;
inline constexpr std::uint64_t kSalt4e3m = 5;
inline constexpr std::uint64_t kMac3 = 6;
inline constexpr std::uint64_t kPrkOut = 7;
inline constexpr std::uint64_t kK4 = 8;
inline constexpr std::uint64_t kIv4 = 9;
inline constexpr std::uint64_t kExporterMin = 1000;
}  // namespace labels

// Call-capture for tests that assert structural properties of the schedule
// (which salt fed which extract, label uniqueness across a run, ...).
struct KdfTraceEntry {
    enum class Kind { Extract, Expand };
    Kind kind;
    const char* purpose;
    Bytes key;      // extract: salt; expand: prk
    Bytes input;    // extract: ikm;  expand: context
    std::uint64_t label = 0;  // expand only
    std::size_t length = 0;
    Bytes output;
};

using KdfTrace = std::vector<KdfTraceEntry>;

struct PrkChain {
    Bytes prk_2e;
    Bytes prk_3e2m;
    Bytes prk_4e3m;
    Bytes prk_out;
};

struct TranscriptHashes {
    Bytes th_2;
    Bytes th_3;
    Bytes th_4;
};

struct MessageKeys {
    Bytes keystream_2;
    Bytes k_3;
    Bytes iv_3;
    Bytes k_4;
    Bytes iv_4;
    Bytes mac_2;
    Bytes mac_3;
};

class KeySchedule {
public:
    explicit KeySchedule(HashAlg hash, KdfTrace* trace = nullptr)
        : hash_(hash), trace_(trace) {}

    HashAlg hash_alg() const { return hash_; }
    std::size_t hash_len() const { return hash_length(hash_); }

    // HKDF-Extract with the suite hash; salt may be empty at this layer
    // (the protocol itself never passes an empty salt).
    Bytes extract(ConstSpan salt, ConstSpan ikm) const {
        return extract_traced(salt, ikm, "extract");
    }

    // HKDF-Expand over info = (label, context, length) in canonical encoding.
    Result<Bytes> expand(ConstSpan prk, std::uint64_t label, ConstSpan context,
                         std::size_t length) const {
        return expand_traced(prk, label, context, length, "expand");
    }

    Bytes compute_th2(ConstSpan g_y, ConstSpan message_1_bytes) const {
        const Bytes inner = sha(hash_, message_1_bytes);
        Bytes input = cbor::encode_bstr(g_y);
        append(input, inner);
        return sha(hash_, input);
    }

    Bytes compute_th3(ConstSpan th_2, ConstSpan plaintext_2_bytes, ConstSpan cred_r) const {
        return sha(hash_, concat(th_2, plaintext_2_bytes, cred_r));
    }

    Bytes compute_th4(ConstSpan th_3, ConstSpan plaintext_3_bytes, ConstSpan cred_i) const {
        return sha(hash_, concat(th_3, plaintext_3_bytes, cred_i));
    }

    Bytes derive_prk_2e(ConstSpan th_2, ConstSpan g_xy) const {
        return extract_traced(th_2, g_xy, "prk_2e");
    }

    Result<Bytes> derive_prk_3e2m(ConstSpan prk_2e, ConstSpan th_2,
                                  const std::optional<Bytes>& g_rx,
                                  AuthKind responder_kind) const {
        return derive_chain_step(prk_2e, th_2, g_rx, responder_kind,
                                 labels::kSalt3e2m, "prk_3e2m");
    }

    Result<Bytes> derive_prk_4e3m(ConstSpan prk_3e2m, ConstSpan th_3,
                                  const std::optional<Bytes>& g_iy,
                                  AuthKind initiator_kind) const {
        return derive_chain_step(prk_3e2m, th_3, g_iy, initiator_kind,
                                 labels::kSalt4e3m, "prk_4e3m");
    }

    Result<Bytes> derive_keystream_2(ConstSpan prk_2e, ConstSpan th_2,
                                     std::size_t plaintext_2_length) const {
        return expand_traced(prk_2e, labels::kKeystream2, th_2, plaintext_2_length,
                             "keystream_2");
    }

    Result<Bytes> derive_k3(ConstSpan prk_3e2m, ConstSpan th_3, std::size_t len) const {
        return expand_traced(prk_3e2m, labels::kK3, th_3, len, "k_3");
    }
    Result<Bytes> derive_iv3(ConstSpan prk_3e2m, ConstSpan th_3, std::size_t len) const {
        return expand_traced(prk_3e2m, labels::kIv3, th_3, len, "iv_3");
    }
    Result<Bytes> derive_k4(ConstSpan prk_4e3m, ConstSpan th_4, std::size_t len) const {
        return expand_traced(prk_4e3m, labels::kK4, th_4, len, "k_4");
    }
    Result<Bytes> derive_iv4(ConstSpan prk_4e3m, ConstSpan th_4, std::size_t len) const {
        return expand_traced(prk_4e3m, labels::kIv4, th_4, len, "iv_4");
    }

    // keystream_2, k_3/iv_3 and k_4/iv_4; the two MACs are context-bound and
    // derived separately.
    Result<MessageKeys> derive_message_keys(const PrkChain& prks,
                                            const TranscriptHashes& ths,
                                            const AeadSpec& aead,
                                            std::size_t plaintext_2_length) const {
        MessageKeys keys;
        auto ks = derive_keystream_2(prks.prk_2e, ths.th_2, plaintext_2_length);
        if (!ks) return ks.error();
        keys.keystream_2 = std::move(*ks);
        auto k3 = derive_k3(prks.prk_3e2m, ths.th_3, aead.key_length);
        auto iv3 = derive_iv3(prks.prk_3e2m, ths.th_3, aead.iv_length);
        auto k4 = derive_k4(prks.prk_4e3m, ths.th_4, aead.key_length);
        auto iv4 = derive_iv4(prks.prk_4e3m, ths.th_4, aead.iv_length);
        if (!k3 || !iv3 || !k4 || !iv4) return Error::CryptoFailure;
        keys.k_3 = std::move(*k3);
        keys.iv_3 = std::move(*iv3);
        keys.k_4 = std::move(*k4);
        keys.iv_4 = std::move(*iv4);
        return keys;
    }

    Result<Bytes> compute_mac_2(ConstSpan prk_3e2m, ConstSpan context_2,
                                std::size_t length) const {
        return expand_traced(prk_3e2m, labels::kMac2, context_2, length, "mac_2");
    }

    Result<Bytes> compute_mac_3(ConstSpan prk_4e3m, ConstSpan context_3,
                                std::size_t length) const {
        return expand_traced(prk_4e3m, labels::kMac3, context_3, length, "mac_3");
    }

    Result<Bytes> derive_prk_out(ConstSpan prk_4e3m, ConstSpan th_4) const {
        return expand_traced(prk_4e3m, labels::kPrkOut, th_4, hash_len(), "prk_out");
    }

    // Application exporter; labels below the reserved band are refused so
    // the session key can never alias an internal key.
    Result<Bytes> export_key(ConstSpan prk_out, std::uint64_t label,
                             ConstSpan context, std::size_t length) const {
        if (label < labels::kExporterMin) return Error::ConfigError;
        return expand_traced(prk_out, label, context, length, "export");
    }

    // (c_r, id_cred_r, th_2, cred_r, ead_2); the MAC_2 context carries the
    // responder's full credential bytes, not just its identifier.
    static Bytes encode_context_2(ConstSpan c_r, ConstSpan id_cred_r, ConstSpan th_2,
                                  ConstSpan cred_r, ConstSpan ead_2_encoded) {
        cbor::Writer w;
        w.array(5);
        w.bstr(c_r);
        w.bstr(id_cred_r);
        w.bstr(th_2);
        w.bstr(cred_r);
        w.raw(ead_2_encoded);
        return w.take();
    }

    // (id_cred_i, th_3, cred_i, ead_3)
    static Bytes encode_context_3(ConstSpan id_cred_i, ConstSpan th_3, ConstSpan cred_i,
                                  ConstSpan ead_3_encoded) {
        cbor::Writer w;
        w.array(4);
        w.bstr(id_cred_i);
        w.bstr(th_3);
        w.bstr(cred_i);
        w.raw(ead_3_encoded);
        return w.take();
    }

private:
    Bytes extract_traced(ConstSpan salt, ConstSpan ikm, const char* purpose) const {
        Bytes prk = hmac(hash_, salt, ikm);
        if (trace_ != nullptr)
            trace_->push_back({KdfTraceEntry::Kind::Extract, purpose, to_bytes(salt),
                               to_bytes(ikm), 0, prk.size(), prk});
        return prk;
    }

    Result<Bytes> expand_traced(ConstSpan prk, std::uint64_t label, ConstSpan context,
                                std::size_t length, const char* purpose) const {
        const std::size_t hlen = hash_len();
        if (length > 255 * hlen) return Error::LengthTooLarge;
        cbor::Writer info_w;
        info_w.array(3);
        info_w.uint(label);
        info_w.bstr(context);
        info_w.uint(length);
        const Bytes info = info_w.take();

        Bytes okm;
        okm.reserve(length + hlen);
        Bytes t;
        std::uint8_t counter = 1;
        while (okm.size() < length) {
            Bytes block = t;
            append(block, info);
            block.push_back(counter++);
            t = hmac(hash_, prk, block);
            append(okm, t);
        }
        okm.resize(length);
        if (trace_ != nullptr)
            trace_->push_back({KdfTraceEntry::Kind::Expand, purpose, to_bytes(prk),
                               to_bytes(context), label, length, okm});
        return okm;
    }

    Result<Bytes> derive_chain_step(ConstSpan prev_prk, ConstSpan th,
                                    const std::optional<Bytes>& static_secret,
                                    AuthKind kind, std::uint64_t salt_label,
                                    const char* purpose) const {
        if (kind == AuthKind::Signature) {
            if (static_secret.has_value()) return Error::MissingStaticSecret;
            return to_bytes(prev_prk);
        }
        if (!static_secret.has_value()) return Error::MissingStaticSecret;
        const char* salt_purpose =
            salt_label == labels::kSalt3e2m ? "salt_3e2m" : "salt_4e3m";
        auto salt = expand_traced(prev_prk, salt_label, th, hash_len(), salt_purpose);
        if (!salt) return salt.error();
        return extract_traced(*salt, *static_secret, purpose);
    }

    HashAlg hash_;
    KdfTrace* trace_;
};

}  // namespace edhoc
