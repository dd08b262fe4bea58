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
// Regression vectors: for a fixed seed and every method x {suite 0, 2, 3},
// an honest handshake's messages, transcript hashes, PRK chain, message keys
// and both MACs as hex. The output is a pure function of the seed, so two
// runs with the same seed are byte-identical and the repository pins one.

#pragma once

#include "edhoc/json_io.hpp"

namespace edhoc {

inline constexpr const char* kDefaultVectorSeed = "edhoc-lab-vectors-v1";

inline Result<Json> generate_vector_entry(int method, int suite_id, ConstSpan seed) {
    auto suite = lookup_suite(suite_id);
    if (!suite) return suite.error();
    if (!suite->implemented) return Error::UnsupportedSuite;
    auto kinds = method_kinds(method);
    if (!kinds) return kinds.error();

    auto tag = [&](const char* who) {
        Bytes s = to_bytes(seed);
        append(s, to_bytes(std::string(who)));
        s.push_back(static_cast<std::uint8_t>(method));
        s.push_back(static_cast<std::uint8_t>(suite_id));
        return s;
    };
    DeterministicRng cred_rng_i(tag("cred-i"));
    DeterministicRng cred_rng_r(tag("cred-r"));
    auto cred_i = kinds->initiator_kind == AuthKind::Signature
                      ? make_signature_credential(*suite, to_bytes(std::string("I")), cred_rng_i)
                      : make_static_dh_credential(*suite, to_bytes(std::string("I")), cred_rng_i);
    auto cred_r = kinds->responder_kind == AuthKind::Signature
                      ? make_signature_credential(*suite, to_bytes(std::string("R")), cred_rng_r)
                      : make_static_dh_credential(*suite, to_bytes(std::string("R")), cred_rng_r);
    if (!cred_i || !cred_r) return Error::CryptoFailure;

    SessionConfig ci;
    ci.role = Role::Initiator;
    ci.method = method;
    ci.suites = {suite_id};
    ci.own_credential = *cred_i;
    ci.trust = TrustStore(*cred_i, {cred_r->public_part()});
    ci.rng_seed = tag("session-i");
    ci.require_message_4 = true;
    SessionConfig cr;
    cr.role = Role::Responder;
    cr.method = method;
    cr.suites = {suite_id};
    cr.own_credential = *cred_r;
    cr.trust = TrustStore(*cred_r, {cred_i->public_part()});
    cr.rng_seed = tag("session-r");
    cr.send_message_4 = true;

    auto rr = harness::run_handshake(std::move(ci), std::move(cr));
    if (!rr.outcome.initiator.completed || !rr.outcome.responder.completed)
        return Error::CryptoFailure;

    Json j;
    j["method"] = method;
    j["suite"] = suite_id;
    Json msgs;
    for (const auto& e : rr.outcome.transcript) {
        if (e.step == 1) msgs["message_1"] = to_hex(e.original);
        if (e.step == 2) msgs["message_2"] = to_hex(e.original);
        if (e.step == 3) msgs["message_3"] = to_hex(e.original);
        if (e.step == 4) msgs["message_4"] = to_hex(e.original);
    }
    j["messages"] = std::move(msgs);

    const Session& s = *rr.initiator;
    Json th;
    th["th_2"] = to_hex(s.transcripts().th_2);
    th["th_3"] = to_hex(s.transcripts().th_3);
    th["th_4"] = to_hex(s.transcripts().th_4);
    j["transcript_hashes"] = std::move(th);
    Json prk;
    prk["prk_2e"] = to_hex(s.prk_chain().prk_2e);
    prk["prk_3e2m"] = to_hex(s.prk_chain().prk_3e2m);
    prk["prk_4e3m"] = to_hex(s.prk_chain().prk_4e3m);
    prk["prk_out"] = to_hex(s.prk_chain().prk_out);
    j["prk_chain"] = std::move(prk);
    Json keys;
    keys["keystream_2"] = to_hex(s.message_keys().keystream_2);
    keys["k_3"] = to_hex(s.message_keys().k_3);
    keys["iv_3"] = to_hex(s.message_keys().iv_3);
    keys["k_4"] = to_hex(s.message_keys().k_4);
    keys["iv_4"] = to_hex(s.message_keys().iv_4);
    j["message_keys"] = std::move(keys);
    Json macs;
    macs["mac_2"] = to_hex(rr.responder->message_keys().mac_2);
    macs["mac_3"] = to_hex(s.message_keys().mac_3);
    j["macs"] = std::move(macs);
    j["c_i"] = to_hex(s.connection_id_i());
    j["c_r"] = to_hex(s.connection_id_r());
    return j;
}

// The full vector document: registries plus one entry per method x suite.
inline Result<Json> generate_vectors(ConstSpan seed,
                                     const std::vector<int>& methods = {0, 1, 2, 3},
                                     const std::vector<int>& suites = {0, 2, 3}) {
    Json doc;
    doc["seed"] = to_string(seed);
    doc["methods"] = method_registry_json();
    doc["cipher_suites"] = suite_registry_json();
    Json entries = Json::array();
    for (int m : methods) {
        for (int su : suites) {
            auto entry = generate_vector_entry(m, su, seed);
            if (!entry) return entry.error();
            entries.push_back(std::move(*entry));
        }
    }
    doc["vectors"] = std::move(entries);
    return doc;
}

}  // namespace edhoc
