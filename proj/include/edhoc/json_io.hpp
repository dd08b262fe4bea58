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
// JSON forms used by the CLI: credential files, suite/method registries,
// scenario verdicts and footprint reports.

#pragma once

#include <fstream>

#include <json.hpp>

#include "edhoc/harness.hpp"

namespace edhoc {

using Json = nlohmann::ordered_json;

// {identity, kind, public_key_hex, private_key_hex?, id_cred_hex?}
inline Json credential_to_json(const Credential& c, bool include_private = false) {
    Json j;
    j["identity"] = to_string(c.identity);
    j["kind"] = c.kind == AuthKind::Signature ? "Signature" : "StaticDH";
    j["public_key_hex"] = to_hex(c.public_key);
    if (include_private && c.private_key.has_value())
        j["private_key_hex"] = to_hex(*c.private_key);
    j["id_cred_hex"] = to_hex(c.id_cred);
    return j;
}

inline Result<Credential> credential_from_json(const Json& j) {
    if (!j.contains("identity") || !j.contains("kind") || !j.contains("public_key_hex"))
        return Error::ConfigError;
    Credential c;
    c.identity = to_bytes(j["identity"].get<std::string>());
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "Signature") c.kind = AuthKind::Signature;
    else if (kind == "StaticDH") c.kind = AuthKind::StaticDH;
    else return Error::ConfigError;
    auto pub = from_hex(j["public_key_hex"].get<std::string>());
    if (!pub) return Error::ConfigError;
    c.public_key = std::move(*pub);
    if (j.contains("private_key_hex")) {
        auto priv = from_hex(j["private_key_hex"].get<std::string>());
        if (!priv) return Error::ConfigError;
        c.private_key = std::move(*priv);
    }
    if (j.contains("id_cred_hex")) {
        auto id = from_hex(j["id_cred_hex"].get<std::string>());
        if (!id) return Error::ConfigError;
        c.id_cred = std::move(*id);
    } else {
        c.id_cred = default_id_cred(c.cred_bytes());
    }
    return c;
}

inline Result<Credential> load_credential_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return Error::ConfigError;
    Json j;
    try {
        in >> j;
    } catch (const std::exception&) {
        return Error::ConfigError;
    }
    return credential_from_json(j);
}

// A trust file is a JSON array of public credentials.
inline Result<std::vector<Credential>> load_trust_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return Error::ConfigError;
    Json j;
    try {
        in >> j;
    } catch (const std::exception&) {
        return Error::ConfigError;
    }
    if (!j.is_array()) return Error::ConfigError;
    std::vector<Credential> out;
    for (const auto& item : j) {
        auto c = credential_from_json(item);
        if (!c) return c.error();
        out.push_back(std::move(*c));
    }
    return out;
}

inline Json method_registry_json() {
    Json out = Json::array();
    for (int id = 0; id <= 3; ++id) {
        const AuthMethod m = *method_kinds(id);
        Json j;
        j["id"] = m.id;
        j["initiator"] = auth_kind_name(m.initiator_kind);
        j["responder"] = auth_kind_name(m.responder_kind);
        out.push_back(std::move(j));
    }
    return out;
}

inline Json suite_registry_json() {
    Json out = Json::array();
    for (const auto& s : suite_registry()) {
        Json j;
        j["id"] = s.id;
        j["aead"] = s.aead_name;
        j["hash"] = s.hash_name;
        j["mac_length"] = s.mac_length;
        j["ecdh_curve"] = s.ecdh_curve_name;
        j["signature"] = s.signature_name;
        j["app_aead"] = s.app_aead_name;
        j["implemented"] = s.implemented;
        out.push_back(std::move(j));
    }
    Json reserved = Json::array();
    for (int id : reserved_suite_ids()) reserved.push_back(id);
    Json doc;
    doc["suites"] = std::move(out);
    doc["reserved"] = std::move(reserved);
    return doc;
}

inline Json verdict_to_json(const harness::ScenarioVerdict& v) {
    Json j;
    j["scenario"] = v.name;
    j["expected_defense"] = v.expected_defense;
    j["held"] = v.held;
    j["evidence"] = v.evidence;
    return j;
}

inline Json footprint_to_json(const harness::FootprintReport& r) {
    Json j;
    j["method"] = r.method;
    j["suite"] = r.suite;
    j["message_1"] = r.message_1;
    j["message_2"] = r.message_2;
    j["message_3"] = r.message_3;
    if (r.message_4.has_value()) j["message_4"] = *r.message_4;
    j["total_3_messages"] = r.total3;
    j["sig_or_mac_2"] = r.sig_or_mac_2;
    j["sig_or_mac_3"] = r.sig_or_mac_3;
    return j;
}

}  // namespace edhoc
