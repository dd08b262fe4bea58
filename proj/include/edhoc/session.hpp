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
// Initiator and Responder state machines for the three-message handshake
// with optional fourth message. Phase transitions are strictly forward;
// any out-of-order, duplicate or malformed inbound message leaves the
// session terminally aborted. A (key, iv) pair is never submitted to the
// AEAD seal twice: every seal goes through a ledger that records the pair
// and refuses repeats, and completed phases refuse reprocessing, so no
// message can be recomputed from stored data.
//
// Authentication is MAC-then-Sign: both peers always derive a MAC bound to
// the transcript hash and the sender's full credential bytes; signature
// authenticators sign (ID_CRED, TH || CRED || EAD, MAC) while static-DH
// authenticators send the (suite-length) MAC itself.

#pragma once

#include <memory>
#include <set>

#include "edhoc/creds.hpp"
#include "edhoc/kdf.hpp"
#include "edhoc/messages.hpp"

namespace edhoc {

enum class Role { Initiator, Responder };

struct SessionConfig {
    Role role = Role::Initiator;
    int method = 0;
    // Initiator: ordered preference list sent as SUITES_I; the first entry
    // is the proposed suite. Responder: supported set (listed in the order
    // it is advertised inside a suite-rejection error).
    std::vector<int> suites;
    Credential own_credential;
    TrustStore trust;
    std::optional<Bytes> expected_peer;
    bool send_message_4 = false;     // responder
    bool require_message_4 = false;  // initiator
    std::vector<std::uint64_t> recognized_critical_ead;
    std::optional<Bytes> rng_seed;
    std::vector<EADItem> ead_1;
    std::vector<EADItem> ead_2;
    std::vector<EADItem> ead_3;
    std::vector<EADItem> ead_4;
    std::size_t connection_id_length = 1;  // 1..8 bytes
    std::size_t pad_to_block = 0;          // 0 = no padding
};

enum class Phase {
    Start,     // initiator, before message 1
    Msg1Sent,  // initiator
    Msg3Sent,  // initiator
    Idle,      // responder, before message 1
    Msg2Sent,  // responder
    Completed,
    Aborted,
};

inline const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Start: return "Start";
        case Phase::Msg1Sent: return "Msg1Sent";
        case Phase::Msg3Sent: return "Msg3Sent";
        case Phase::Idle: return "Idle";
        case Phase::Msg2Sent: return "Msg2Sent";
        case Phase::Completed: return "Completed";
        case Phase::Aborted: return "Aborted";
    }
    return "?";
}

struct CompletedSession {
    Bytes prk_out;
    Bytes peer_identity;
    int method = 0;
    int suite_id = 0;
    bool key_confirmed = false;
    Bytes c_i;
    Bytes c_r;
    Bytes th_4;
    HashAlg hash = HashAlg::Sha256;
    // NotConfirmed when the session finished without the message 4 it was
    // configured to require.
    std::optional<Error> advisory;

    Result<Bytes> export_key(std::uint64_t label, ConstSpan context,
                             std::size_t length) const {
        return KeySchedule(hash).export_key(prk_out, label, context, length);
    }
};

class Session {
public:
    struct Msg3Result {
        CompletedSession session;
        std::optional<Bytes> message_4;
    };

    static Result<Session> create(SessionConfig config, KdfTrace* trace = nullptr) {
        auto method = method_kinds(config.method);
        if (!method) return Error::ConfigError;
        if (config.suites.empty()) return Error::ConfigError;
        for (int id : config.suites) {
            auto suite = lookup_suite(id);
            if (!suite || !suite->implemented) return Error::ConfigError;
        }
        if (!config.own_credential.private_key.has_value()) return Error::ConfigError;
        const AuthKind own_kind = config.role == Role::Initiator
                                      ? method->initiator_kind
                                      : method->responder_kind;
        if (config.own_credential.kind != own_kind) return Error::ConfigError;
        if (config.connection_id_length < 1 || config.connection_id_length > 8)
            return Error::ConfigError;

        Session s;
        s.method_ = *method;
        s.trace_ = trace;
        if (!s.trust_contains_own(config))
            config.trust = TrustStore(config.own_credential, config.trust.entries());
        if (config.role == Role::Initiator) {
            auto suite = lookup_suite(config.suites.front());
            if (!credential_matches(config.own_credential, *suite, own_kind))
                return Error::ConfigError;
            s.suite_ = *suite;
            s.phase_ = Phase::Start;
        } else {
            s.phase_ = Phase::Idle;
        }
        if (config.rng_seed.has_value())
            s.rng_ = std::make_unique<DeterministicRng>(*config.rng_seed);
        else
            s.rng_ = std::make_unique<SystemRng>();
        s.config_ = std::move(config);
        return s;
    }

    // ---- Initiator ----------------------------------------------------

    // Generates the ephemeral key and produces message 1. The exact
    // transmitted bytes are retained; they feed TH_2 verbatim.
    Result<Bytes> start() {
        if (config_.role != Role::Initiator || phase_ != Phase::Start)
            return Error::ReplayOrOutOfOrder;
        auto eph = gen_keypair(suite_.ecdh_curve, *rng_);
        if (!eph) return abort(eph.error());
        ephemeral_ = std::move(*eph);
        c_i_ = rng_->bytes(config_.connection_id_length);

        Message1 m;
        m.method = static_cast<std::uint64_t>(config_.method);
        m.suites_i = config_.suites;
        m.g_x = ephemeral_.public_key;
        m.c_i = c_i_;
        m.ead_1 = config_.ead_1;
        auto wire = encode_message_1(m);
        if (!wire) return abort(wire.error());
        message_1_bytes_ = *wire;
        phase_ = Phase::Msg1Sent;
        return *wire;
    }

    // Verifies message 2 (trial-verifying every credential the received
    // ID_CRED_R resolves to) and produces message 3.
    Result<Bytes> handle_message_2(ConstSpan wire) {
        if (config_.role != Role::Initiator || phase_ != Phase::Msg1Sent)
            return Error::ReplayOrOutOfOrder;

        auto msg = decode_message_2(wire);
        if (!msg) {
            if (auto err = decode_error(wire)) {
                peer_error_ = *err;
                if (err->code == 2) {
                    if (auto suites = decode_suite_list(err->info))
                        peer_supported_suites_ = *suites;
                }
                return abort(Error::PeerError);
            }
            return abort(Error::MalformedMessage);
        }
        if (msg->g_y.size() != curve_public_length(suite_.ecdh_curve))
            return abort(Error::InvalidPoint);
        c_r_ = msg->c_r;
        peer_ephemeral_ = msg->g_y;

        KeySchedule kdf(suite_.hash, trace_);
        auto g_xy = ecdh(suite_.ecdh_curve, ephemeral_.private_key, msg->g_y);
        if (!g_xy) return abort(g_xy.error());
        ths_.th_2 = kdf.compute_th2(msg->g_y, message_1_bytes_);
        prks_.prk_2e = kdf.derive_prk_2e(ths_.th_2, *g_xy);

        auto keystream = kdf.derive_keystream_2(prks_.prk_2e, ths_.th_2,
                                                msg->ciphertext_2.size());
        if (!keystream) return abort(keystream.error());
        keys_.keystream_2 = std::move(*keystream);
        Bytes plaintext_bytes = msg->ciphertext_2;
        xor_with(plaintext_bytes, keys_.keystream_2);
        auto plaintext = decode_plaintext_2(plaintext_bytes);
        if (!plaintext) return abort(Error::MalformedMessage);
        plaintext_2_bytes_ = plaintext_bytes;
        if (auto ead = check_ead(plaintext->ead_2); !ead) return abort(ead.error());

        auto ead_2_encoded = encode_ead_list(plaintext->ead_2);
        if (!ead_2_encoded) return abort(Error::MalformedMessage);

        // Trial verification over every candidate sharing ID_CRED_R. The
        // MAC context carries each candidate's full credential bytes, so a
        // substituted credential under a colliding identifier cannot verify.
        auto candidates = config_.trust.resolve(plaintext->id_cred_r);
        if (candidates.empty()) return abort(Error::UntrustedPeer);
        const Credential* peer = nullptr;
        Bytes prk_3e2m;
        for (const auto& cand : candidates) {
            if (cand.kind != method_.responder_kind) continue;
            if (!credential_matches(cand, suite_, method_.responder_kind)) continue;
            const Bytes cred_r = cand.cred_bytes();
            const Bytes context_2 = KeySchedule::encode_context_2(
                c_r_, plaintext->id_cred_r, ths_.th_2, cred_r, *ead_2_encoded);

            std::optional<Bytes> g_rx;
            if (method_.responder_kind == AuthKind::StaticDH) {
                auto shared = ecdh(suite_.ecdh_curve, ephemeral_.private_key,
                                   cand.public_key);
                if (!shared) continue;
                g_rx = std::move(*shared);
            }
            auto prk = kdf.derive_prk_3e2m(prks_.prk_2e, ths_.th_2, g_rx,
                                           method_.responder_kind);
            if (!prk) continue;
            auto mac = kdf.compute_mac_2(*prk, context_2,
                                         mac_length_for(method_.responder_kind));
            if (!mac) continue;

            bool accepted = false;
            if (method_.responder_kind == AuthKind::StaticDH) {
                accepted = ct_equal(*mac, plaintext->sig_or_mac_2);
            } else {
                const Bytes payload = signature_payload(plaintext->id_cred_r, ths_.th_2,
                                                        cred_r, *ead_2_encoded, *mac);
                accepted = verify(suite_.signature, cand.public_key, payload,
                                  plaintext->sig_or_mac_2);
            }
            if (accepted) {
                peer = &cand;
                prk_3e2m = std::move(*prk);
                break;
            }
        }
        if (peer == nullptr) return abort(Error::AuthenticationFailed);
        if (auto intended = check_intended_peer(peer->identity, config_.expected_peer);
            !intended)
            return abort(intended.error());
        prks_.prk_3e2m = std::move(prk_3e2m);
        peer_identity_ = peer->identity;

        ths_.th_3 = kdf.compute_th3(ths_.th_2, plaintext_2_bytes_, peer->cred_bytes());

        std::optional<Bytes> g_iy;
        if (method_.initiator_kind == AuthKind::StaticDH) {
            auto shared = ecdh(suite_.ecdh_curve, *config_.own_credential.private_key,
                               msg->g_y);
            if (!shared) return abort(shared.error());
            g_iy = std::move(*shared);
        }
        auto prk_4e3m = kdf.derive_prk_4e3m(prks_.prk_3e2m, ths_.th_3, g_iy,
                                            method_.initiator_kind);
        if (!prk_4e3m) return abort(prk_4e3m.error());
        prks_.prk_4e3m = std::move(*prk_4e3m);

        // Build plaintext 3.
        const Bytes cred_i = config_.own_credential.cred_bytes();
        std::vector<EADItem> ead_3 = config_.ead_3;
        auto plaintext_3 = build_plaintext_3(kdf, cred_i, ead_3);
        if (!plaintext_3) return abort(plaintext_3.error());
        plaintext_3_bytes_ = std::move(*plaintext_3);

        const AeadSpec aead = aead_spec(suite_.aead);
        auto k_3 = kdf.derive_k3(prks_.prk_3e2m, ths_.th_3, aead.key_length);
        auto iv_3 = kdf.derive_iv3(prks_.prk_3e2m, ths_.th_3, aead.iv_length);
        if (!k_3 || !iv_3) return abort(Error::CryptoFailure);
        keys_.k_3 = std::move(*k_3);
        keys_.iv_3 = std::move(*iv_3);
        auto sealed = seal_with_ledger(keys_.k_3, keys_.iv_3, ths_.th_3,
                                       plaintext_3_bytes_);
        if (!sealed) return abort(sealed.error());
        auto wire_3 = encode_message_3(Message3{std::move(*sealed)});
        if (!wire_3) return abort(wire_3.error());

        ths_.th_4 = kdf.compute_th4(ths_.th_3, plaintext_3_bytes_, cred_i);
        auto prk_out = kdf.derive_prk_out(prks_.prk_4e3m, ths_.th_4);
        if (!prk_out) return abort(prk_out.error());
        prks_.prk_out = std::move(*prk_out);
        auto k_4 = kdf.derive_k4(prks_.prk_4e3m, ths_.th_4, aead.key_length);
        auto iv_4 = kdf.derive_iv4(prks_.prk_4e3m, ths_.th_4, aead.iv_length);
        if (!k_4 || !iv_4) return abort(Error::CryptoFailure);
        keys_.k_4 = std::move(*k_4);
        keys_.iv_4 = std::move(*iv_4);

        phase_ = Phase::Msg3Sent;
        return *wire_3;
    }

    // Opens message 4, which proves the responder's possession of PRK_4e3m
    // over TH_4; only then is the key confirmed for a static-DH initiator.
    Result<CompletedSession> handle_message_4(ConstSpan wire) {
        if (config_.role != Role::Initiator || phase_ != Phase::Msg3Sent)
            return Error::ReplayOrOutOfOrder;
        auto msg = decode_message_4(wire);
        if (!msg) {
            if (auto err = decode_error(wire)) {
                peer_error_ = *err;
                return abort(Error::PeerError);
            }
            return abort(Error::MalformedMessage);
        }
        auto plaintext = aead_open(suite_.aead, keys_.k_4, keys_.iv_4, ths_.th_4,
                                   msg->ciphertext_4);
        if (!plaintext) return abort(Error::AuthenticationFailed);
        auto ead_4 = decode_ead_list(*plaintext);
        if (!ead_4) return abort(Error::MalformedMessage);
        if (auto ead = check_ead(*ead_4); !ead) return abort(ead.error());
        phase_ = Phase::Completed;
        key_confirmed_ = true;
        return completed_session();
    }

    // Finishes an initiator run without message 4. Static-DH initiators
    // stay unconfirmed; when the config demanded message 4 the result also
    // carries the NotConfirmed advisory.
    Result<CompletedSession> complete() {
        if (config_.role != Role::Initiator || phase_ != Phase::Msg3Sent)
            return Error::ReplayOrOutOfOrder;
        phase_ = Phase::Completed;
        key_confirmed_ = method_.initiator_kind == AuthKind::Signature;
        CompletedSession out = completed_session();
        if (!key_confirmed_ && config_.require_message_4)
            out.advisory = Error::NotConfirmed;
        return out;
    }

    // ---- Responder ----------------------------------------------------

    // Consumes message 1 and returns either message 2 or an encoded error
    // message (suite rejection carries the supported list). When the reply
    // is an error the session is aborted and aborted() reports why; a
    // malformed message 1 aborts with nothing to send.
    Result<Bytes> handle_message_1(ConstSpan wire) {
        if (config_.role != Role::Responder || phase_ != Phase::Idle)
            return Error::ReplayOrOutOfOrder;
        auto msg = decode_message_1(wire);
        if (!msg) return abort(msg.error());
        message_1_bytes_ = to_bytes(wire);

        if (static_cast<int>(msg->method) != config_.method)
            return reply_error(Error::UnsupportedMethod, 1);

        // The initiator's first listed suite is the proposed one; anything
        // we cannot accept is answered with our supported list so the
        // initiator can retry.
        const std::set<int> supported(config_.suites.begin(), config_.suites.end());
        const int proposed = msg->suites_i.front();
        if (!supported.count(proposed)) return reply_error(Error::NoCommonSuite, 2);
        auto suite = lookup_suite(proposed);
        if (!suite || !suite->implemented) return reply_error(Error::NoCommonSuite, 2);
        suite_ = *suite;
        if (!credential_matches(config_.own_credential, suite_, method_.responder_kind))
            return reply_error(Error::ConfigError, 1);

        if (msg->g_x.size() != curve_public_length(suite_.ecdh_curve))
            return reply_error(Error::InvalidPoint, 1);
        if (auto ead = check_ead(msg->ead_1); !ead)
            return reply_error(ead.error(), 1);

        auto eph = gen_keypair(suite_.ecdh_curve, *rng_);
        if (!eph) return abort(eph.error());
        ephemeral_ = std::move(*eph);
        c_i_ = msg->c_i;
        c_r_ = rng_->bytes(config_.connection_id_length);
        peer_ephemeral_ = msg->g_x;

        KeySchedule kdf(suite_.hash, trace_);
        auto g_xy = ecdh(suite_.ecdh_curve, ephemeral_.private_key, msg->g_x);
        if (!g_xy) return reply_error(Error::InvalidPoint, 1);
        ths_.th_2 = kdf.compute_th2(ephemeral_.public_key, message_1_bytes_);
        prks_.prk_2e = kdf.derive_prk_2e(ths_.th_2, *g_xy);

        std::optional<Bytes> g_rx;
        if (method_.responder_kind == AuthKind::StaticDH) {
            auto shared = ecdh(suite_.ecdh_curve, *config_.own_credential.private_key,
                               msg->g_x);
            if (!shared) return reply_error(Error::InvalidPoint, 1);
            g_rx = std::move(*shared);
        }
        auto prk_3e2m = kdf.derive_prk_3e2m(prks_.prk_2e, ths_.th_2, g_rx,
                                            method_.responder_kind);
        if (!prk_3e2m) return abort(prk_3e2m.error());
        prks_.prk_3e2m = std::move(*prk_3e2m);

        // Plaintext 2: ID_CRED_R, Sig-or-MAC_2, EAD_2.
        const Bytes cred_r = config_.own_credential.cred_bytes();
        std::vector<EADItem> ead_2 = config_.ead_2;
        auto plaintext_bytes = build_plaintext_2(kdf, cred_r, ead_2);
        if (!plaintext_bytes) return abort(plaintext_bytes.error());
        plaintext_2_bytes_ = std::move(*plaintext_bytes);

        auto keystream = kdf.derive_keystream_2(prks_.prk_2e, ths_.th_2,
                                                plaintext_2_bytes_.size());
        if (!keystream) return abort(keystream.error());
        keys_.keystream_2 = std::move(*keystream);
        Bytes ciphertext_2 = plaintext_2_bytes_;
        xor_with(ciphertext_2, keys_.keystream_2);

        auto wire_2 = encode_message_2(Message2{ephemeral_.public_key,
                                                std::move(ciphertext_2), c_r_});
        if (!wire_2) return abort(wire_2.error());
        ths_.th_3 = kdf.compute_th3(ths_.th_2, plaintext_2_bytes_, cred_r);
        phase_ = Phase::Msg2Sent;
        return *wire_2;
    }

    // Opens and verifies message 3; trial-verifies the initiator the same
    // way the initiator verified us. Optionally seals message 4. Duplicate
    // deliveries are rejected by the phase check before any key is touched.
    Result<Msg3Result> handle_message_3(ConstSpan wire) {
        if (config_.role != Role::Responder || phase_ != Phase::Msg2Sent)
            return Error::ReplayOrOutOfOrder;
        auto msg = decode_message_3(wire);
        if (!msg) return abort(msg.error());

        KeySchedule kdf(suite_.hash, trace_);
        const AeadSpec aead = aead_spec(suite_.aead);
        auto k_3 = kdf.derive_k3(prks_.prk_3e2m, ths_.th_3, aead.key_length);
        auto iv_3 = kdf.derive_iv3(prks_.prk_3e2m, ths_.th_3, aead.iv_length);
        if (!k_3 || !iv_3) return abort(Error::CryptoFailure);
        keys_.k_3 = std::move(*k_3);
        keys_.iv_3 = std::move(*iv_3);

        auto plaintext_bytes = aead_open(suite_.aead, keys_.k_3, keys_.iv_3, ths_.th_3,
                                         msg->ciphertext_3);
        if (!plaintext_bytes) return abort(Error::AuthenticationFailed);
        auto plaintext = decode_plaintext_3(*plaintext_bytes);
        if (!plaintext) return abort(Error::MalformedMessage);
        plaintext_3_bytes_ = *plaintext_bytes;
        if (auto ead = check_ead(plaintext->ead_3); !ead) return abort(ead.error());
        auto ead_3_encoded = encode_ead_list(plaintext->ead_3);
        if (!ead_3_encoded) return abort(Error::MalformedMessage);

        auto candidates = config_.trust.resolve(plaintext->id_cred_i);
        if (candidates.empty()) return abort(Error::UntrustedPeer);
        const Credential* peer = nullptr;
        Bytes prk_4e3m;
        for (const auto& cand : candidates) {
            if (cand.kind != method_.initiator_kind) continue;
            if (!credential_matches(cand, suite_, method_.initiator_kind)) continue;
            const Bytes cred_i = cand.cred_bytes();
            const Bytes context_3 = KeySchedule::encode_context_3(
                plaintext->id_cred_i, ths_.th_3, cred_i, *ead_3_encoded);

            std::optional<Bytes> g_iy;
            if (method_.initiator_kind == AuthKind::StaticDH) {
                auto shared = ecdh(suite_.ecdh_curve, ephemeral_.private_key,
                                   cand.public_key);
                if (!shared) continue;
                g_iy = std::move(*shared);
            }
            auto prk = kdf.derive_prk_4e3m(prks_.prk_3e2m, ths_.th_3, g_iy,
                                           method_.initiator_kind);
            if (!prk) continue;
            auto mac = kdf.compute_mac_3(*prk, context_3,
                                         mac_length_for(method_.initiator_kind));
            if (!mac) continue;

            bool accepted = false;
            if (method_.initiator_kind == AuthKind::StaticDH) {
                accepted = ct_equal(*mac, plaintext->sig_or_mac_3);
            } else {
                const Bytes payload = signature_payload(plaintext->id_cred_i, ths_.th_3,
                                                        cred_i, *ead_3_encoded, *mac);
                accepted = verify(suite_.signature, cand.public_key, payload,
                                  plaintext->sig_or_mac_3);
            }
            if (accepted) {
                peer = &cand;
                prk_4e3m = std::move(*prk);
                break;
            }
        }
        if (peer == nullptr) return abort(Error::AuthenticationFailed);
        if (auto intended = check_intended_peer(peer->identity, config_.expected_peer);
            !intended)
            return abort(intended.error());
        prks_.prk_4e3m = std::move(prk_4e3m);
        peer_identity_ = peer->identity;

        ths_.th_4 = kdf.compute_th4(ths_.th_3, plaintext_3_bytes_, peer->cred_bytes());
        auto prk_out = kdf.derive_prk_out(prks_.prk_4e3m, ths_.th_4);
        if (!prk_out) return abort(prk_out.error());
        prks_.prk_out = std::move(*prk_out);

        Msg3Result out;
        if (config_.send_message_4) {
            auto k_4 = kdf.derive_k4(prks_.prk_4e3m, ths_.th_4, aead.key_length);
            auto iv_4 = kdf.derive_iv4(prks_.prk_4e3m, ths_.th_4, aead.iv_length);
            if (!k_4 || !iv_4) return abort(Error::CryptoFailure);
            keys_.k_4 = std::move(*k_4);
            keys_.iv_4 = std::move(*iv_4);
            std::vector<EADItem> ead_4 = config_.ead_4;
            auto plaintext_4 = padded_ead_bytes(ead_4);
            if (!plaintext_4) return abort(plaintext_4.error());
            auto sealed = seal_with_ledger(keys_.k_4, keys_.iv_4, ths_.th_4, *plaintext_4);
            if (!sealed) return abort(sealed.error());
            auto wire_4 = encode_message_4(Message4{std::move(*sealed)});
            if (!wire_4) return abort(wire_4.error());
            out.message_4 = std::move(*wire_4);
        }
        phase_ = Phase::Completed;
        key_confirmed_ = true;
        out.session = completed_session();
        return out;
    }

    // ---- Introspection (harness and tests; not part of the peer API) ---

    Phase phase() const { return phase_; }
    bool aborted() const { return phase_ == Phase::Aborted; }
    std::optional<Error> abort_reason() const { return abort_reason_; }
    Role role() const { return config_.role; }
    int method() const { return config_.method; }
    const CipherSuiteProfile& suite() const { return suite_; }
    const PrkChain& prk_chain() const { return prks_; }
    const TranscriptHashes& transcripts() const { return ths_; }
    const MessageKeys& message_keys() const { return keys_; }
    const KeyPair& ephemeral() const { return ephemeral_; }
    const Bytes& connection_id_i() const { return c_i_; }
    const Bytes& connection_id_r() const { return c_r_; }
    const Bytes& message_1_bytes() const { return message_1_bytes_; }
    const Bytes& plaintext_2_bytes() const { return plaintext_2_bytes_; }
    const Bytes& plaintext_3_bytes() const { return plaintext_3_bytes_; }
    const std::optional<ErrorMessage>& peer_error() const { return peer_error_; }
    const std::optional<std::vector<int>>& peer_supported_suites() const {
        return peer_supported_suites_;
    }
    // Every (key, iv) pair ever submitted to the AEAD seal, in order.
    const std::vector<Bytes>& nonce_ledger() const { return seal_ledger_; }

private:
    Session() = default;

    bool trust_contains_own(const SessionConfig& config) const {
        return config.trust.contains_identity(config.own_credential.identity);
    }

    static bool credential_matches(const Credential& cred,
                                   const CipherSuiteProfile& suite, AuthKind kind) {
        if (cred.kind != kind) return false;
        const std::size_t expect = kind == AuthKind::Signature
                                       ? signature_public_key_length(suite.signature)
                                       : curve_public_length(suite.ecdh_curve);
        return cred.public_key.size() == expect;
    }

    std::size_t mac_length_for(AuthKind authenticator_kind) const {
        // Static-DH authenticators send the MAC raw at the suite's length;
        // a signature covers its MAC, so the full hash length costs nothing
        // on the wire.
        return authenticator_kind == AuthKind::StaticDH ? suite_.mac_length
                                                        : hash_length(suite_.hash);
    }

    // (ID_CRED, TH || CRED || EAD, MAC): the three signed parameters.
    static Bytes signature_payload(ConstSpan id_cred, ConstSpan th, ConstSpan cred,
                                   ConstSpan ead_encoded, ConstSpan mac) {
        cbor::Writer w;
        w.array(3);
        w.bstr(id_cred);
        Bytes external = to_bytes(th);
        append(external, cred);
        append(external, ead_encoded);
        w.bstr(external);
        w.bstr(mac);
        return w.take();
    }

    Result<Unit> check_ead(const std::vector<EADItem>& items) const {
        for (const auto& item : items) {
            if (!item.critical) continue;
            bool known = false;
            for (std::uint64_t label : config_.recognized_critical_ead)
                if (label == item.label) { known = true; break; }
            if (!known) return Error::CriticalEadUnrecognized;
        }
        return Unit{};
    }

    // Pads by appending a non-critical EAD item (label 0) until the encoded
    // plaintext length is a multiple of the configured block.
    Result<Bytes> pad_plaintext(std::vector<EADItem>& ead,
                                const std::function<Result<Bytes>(void)>& encode) const {
        auto bytes = encode();
        if (!bytes) return bytes.error();
        if (config_.pad_to_block == 0 || bytes->size() % config_.pad_to_block == 0)
            return bytes;
        ead.push_back(EADItem{0, false, {}});
        for (std::size_t fill = 0; fill <= 2 * config_.pad_to_block; ++fill) {
            ead.back().value.assign(fill, 0x00);
            bytes = encode();
            if (!bytes) return bytes.error();
            if (bytes->size() % config_.pad_to_block == 0) return bytes;
        }
        return bytes;  // no exact fit at a length-head boundary; send as-is
    }

    Result<Bytes> build_plaintext_2(const KeySchedule& kdf, const Bytes& cred_r,
                                    std::vector<EADItem>& ead_2) {
        Plaintext2 p;
        p.id_cred_r = config_.own_credential.id_cred;
        return pad_plaintext(ead_2, [&]() -> Result<Bytes> {
            auto ead_encoded = encode_ead_list(ead_2);
            if (!ead_encoded) return ead_encoded.error();
            const Bytes context_2 = KeySchedule::encode_context_2(
                c_r_, p.id_cred_r, ths_.th_2, cred_r, *ead_encoded);
            auto mac = kdf.compute_mac_2(prks_.prk_3e2m, context_2,
                                         mac_length_for(method_.responder_kind));
            if (!mac) return mac.error();
            keys_.mac_2 = *mac;
            if (method_.responder_kind == AuthKind::StaticDH) {
                p.sig_or_mac_2 = *mac;
            } else {
                const Bytes payload = signature_payload(p.id_cred_r, ths_.th_2, cred_r,
                                                        *ead_encoded, *mac);
                auto sig = sign(suite_.signature,
                                *config_.own_credential.private_key, payload);
                if (!sig) return sig.error();
                p.sig_or_mac_2 = std::move(*sig);
            }
            p.ead_2 = ead_2;
            return encode_plaintext_2(p);
        });
    }

    Result<Bytes> build_plaintext_3(const KeySchedule& kdf, const Bytes& cred_i,
                                    std::vector<EADItem>& ead_3) {
        Plaintext3 p;
        p.id_cred_i = config_.own_credential.id_cred;
        return pad_plaintext(ead_3, [&]() -> Result<Bytes> {
            auto ead_encoded = encode_ead_list(ead_3);
            if (!ead_encoded) return ead_encoded.error();
            const Bytes context_3 = KeySchedule::encode_context_3(
                p.id_cred_i, ths_.th_3, cred_i, *ead_encoded);
            auto mac = kdf.compute_mac_3(prks_.prk_4e3m, context_3,
                                         mac_length_for(method_.initiator_kind));
            if (!mac) return mac.error();
            keys_.mac_3 = *mac;
            if (method_.initiator_kind == AuthKind::StaticDH) {
                p.sig_or_mac_3 = *mac;
            } else {
                const Bytes payload = signature_payload(p.id_cred_i, ths_.th_3, cred_i,
                                                        *ead_encoded, *mac);
                auto sig = sign(suite_.signature,
                                *config_.own_credential.private_key, payload);
                if (!sig) return sig.error();
                p.sig_or_mac_3 = std::move(*sig);
            }
            p.ead_3 = ead_3;
            return encode_plaintext_3(p);
        });
    }

    Result<Bytes> padded_ead_bytes(std::vector<EADItem>& ead) const {
        return pad_plaintext(ead,
                             [&]() -> Result<Bytes> { return encode_ead_list(ead); });
    }

    // The only path to the AEAD seal. Records the (key, iv) pair and
    // refuses to seal under a pair that was already used.
    Result<Bytes> seal_with_ledger(ConstSpan key, ConstSpan iv, ConstSpan aad,
                                   ConstSpan plaintext) {
        Bytes entry = concat(key, iv);
        for (const Bytes& used : seal_ledger_)
            if (used == entry) return Error::ReplayOrOutOfOrder;
        seal_ledger_.push_back(std::move(entry));
        return aead_seal(suite_.aead, key, iv, aad, plaintext);
    }

    CompletedSession completed_session() const {
        CompletedSession out;
        out.prk_out = prks_.prk_out;
        out.peer_identity = peer_identity_;
        out.method = config_.method;
        out.suite_id = suite_.id;
        out.key_confirmed = key_confirmed_;
        out.c_i = c_i_;
        out.c_r = c_r_;
        out.th_4 = ths_.th_4;
        out.hash = suite_.hash;
        return out;
    }

    Error abort(Error reason) {
        if (phase_ != Phase::Aborted) {
            phase_ = Phase::Aborted;
            abort_reason_ = reason;
        }
        return reason;
    }

    // Responder-side polite rejection: abort and hand back an encoded error
    // message for the caller to transmit. Code 2 carries our supported list.
    Result<Bytes> reply_error(Error reason, std::uint64_t code) {
        abort(reason);
        Bytes info;
        if (code == 2) {
            auto suites = encode_suite_list(config_.suites);
            if (!suites) return reason;
            info = std::move(*suites);
        }
        auto wire = encode_error(ErrorMessage{code, std::move(info)});
        if (!wire) return reason;
        return *wire;
    }

    SessionConfig config_;
    AuthMethod method_{0, AuthKind::Signature, AuthKind::Signature};
    CipherSuiteProfile suite_{};
    Phase phase_ = Phase::Start;
    std::optional<Error> abort_reason_;
    std::unique_ptr<Rng> rng_;
    KdfTrace* trace_ = nullptr;

    KeyPair ephemeral_;
    Bytes peer_ephemeral_;
    Bytes c_i_;
    Bytes c_r_;
    Bytes message_1_bytes_;
    Bytes plaintext_2_bytes_;
    Bytes plaintext_3_bytes_;
    TranscriptHashes ths_;
    PrkChain prks_;
    MessageKeys keys_;
    Bytes peer_identity_;
    bool key_confirmed_ = false;
    std::vector<Bytes> seal_ledger_;
    std::optional<ErrorMessage> peer_error_;
    std::optional<std::vector<int>> peer_supported_suites_;
};

}  // namespace edhoc
