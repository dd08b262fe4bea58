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

#include <catch2/catch.hpp>

#include "edhoc/creds.hpp"
#include "edhoc/json_io.hpp"

using namespace edhoc;

namespace {

Credential named_cred(const char* name, AuthKind kind, std::uint8_t fill,
                      std::optional<Bytes> id = std::nullopt) {
    KeyPair kp;
    kp.private_key = Bytes(32, fill);
    kp.public_key = Bytes(32, static_cast<std::uint8_t>(fill ^ 0xff));
    return make_credential(to_bytes(std::string(name)), kind, kp, std::move(id));
}

}  // namespace

TEST_CASE("cred_bytes is canonical and round-trips") {
    Credential a = named_cred("peer-a", AuthKind::Signature, 0x11);
    Credential b = named_cred("peer-a", AuthKind::Signature, 0x11);
    CHECK(a.cred_bytes() == b.cred_bytes());  // equal fields, equal bytes

    auto back = credential_from_cred_bytes(a.cred_bytes());
    REQUIRE(back.ok());
    CHECK(back->identity == a.identity);
    CHECK(back->kind == a.kind);
    CHECK(back->public_key == a.public_key);
    CHECK(back->cred_bytes() == a.cred_bytes());

    Credential c = named_cred("peer-a", AuthKind::StaticDH, 0x11);
    CHECK(c.cred_bytes() != a.cred_bytes());  // kind is part of the encoding
}

TEST_CASE("default id_cred is the hash tail and may be overridden to collide") {
    Credential a = named_cred("peer-a", AuthKind::Signature, 0x22);
    const Bytes digest = sha(HashAlg::Sha256, a.cred_bytes());
    CHECK(a.id_cred == Bytes(digest.end() - 4, digest.end()));
    CHECK(a.id_cred.size() == 4);

    Credential b = named_cred("peer-b", AuthKind::Signature, 0x33, Bytes{0x05});
    Credential c = named_cred("peer-c", AuthKind::Signature, 0x44, Bytes{0x05});
    CHECK(b.id_cred == c.id_cred);  // deliberate collision is representable
    CHECK(b.cred_bytes() != c.cred_bytes());
}

TEST_CASE("resolve returns every match, in store order") {
    Credential own = named_cred("me", AuthKind::Signature, 0x01);
    Credential b = named_cred("peer-b", AuthKind::Signature, 0x33, Bytes{0x05});
    Credential c = named_cred("peer-c", AuthKind::Signature, 0x44, Bytes{0x05});
    Credential d = named_cred("peer-d", AuthKind::Signature, 0x55);
    TrustStore store(own, {b.public_part(), c.public_part(), d.public_part()});

    auto both = store.resolve(Bytes{0x05});
    REQUIRE(both.size() == 2);
    CHECK(both[0].identity == b.identity);
    CHECK(both[1].identity == c.identity);

    CHECK(store.resolve(Bytes{0x99}).empty());  // unknown id: empty, not an error

    auto one = store.resolve(d.id_cred);
    REQUIRE(one.size() == 1);
    CHECK(one[0].identity == d.identity);
}

TEST_CASE("trust store always contains its own identity") {
    Credential own = named_cred("me", AuthKind::Signature, 0x01);
    Credential peer = named_cred("peer", AuthKind::Signature, 0x02);

    TrustStore omitted(own, {peer.public_part()});
    CHECK(omitted.contains_identity(own.identity));
    CHECK(omitted.entries().size() == 2);
    REQUIRE(omitted.resolve(own.id_cred).size() == 1);
    // only the public part is stored
    CHECK(!omitted.resolve(own.id_cred)[0].private_key.has_value());

    TrustStore included(own, {peer.public_part(), own.public_part()});
    CHECK(included.contains_identity(own.identity));
    CHECK(included.entries().size() == 2);  // no duplicate insertion
}

TEST_CASE("intended-peer policy") {
    const Bytes r = to_bytes(std::string("R"));
    const Bytes m = to_bytes(std::string("M"));
    CHECK(check_intended_peer(r, r).ok());
    auto mismatch = check_intended_peer(m, r);
    CHECK(!mismatch.ok());
    CHECK(mismatch.error() == Error::UnintendedPeer);
    CHECK(check_intended_peer(m, std::nullopt).ok());  // unset: any trusted identity
}

TEST_CASE("credential json round-trip") {
    Credential a = named_cred("alice", AuthKind::StaticDH, 0x77);
    const Json with_priv = credential_to_json(a, true);
    auto back = credential_from_json(with_priv);
    REQUIRE(back.ok());
    CHECK(back->identity == a.identity);
    CHECK(back->kind == a.kind);
    CHECK(back->public_key == a.public_key);
    CHECK(back->private_key == a.private_key);
    CHECK(back->id_cred == a.id_cred);

    const Json public_only = credential_to_json(a, false);
    auto pub = credential_from_json(public_only);
    REQUIRE(pub.ok());
    CHECK(!pub->private_key.has_value());

    CHECK(!credential_from_json(Json{{"identity", "x"}}).ok());
    CHECK(!credential_from_json(Json{{"identity", "x"},
                                     {"kind", "Wizard"},
                                     {"public_key_hex", "00"}})
               .ok());
}

TEST_CASE("suite-backed credential factories produce usable keys") {
    DeterministicRng rng(to_bytes(std::string("factory")));
    auto suite = lookup_suite(2);
    auto sig = make_signature_credential(*suite, to_bytes(std::string("s")), rng);
    REQUIRE(sig.ok());
    CHECK(sig->kind == AuthKind::Signature);
    CHECK(sig->public_key.size() == signature_public_key_length(suite->signature));
    CHECK(sig->private_key.has_value());

    auto sdh = make_static_dh_credential(*suite, to_bytes(std::string("d")), rng);
    REQUIRE(sdh.ok());
    CHECK(sdh->kind == AuthKind::StaticDH);
    CHECK(sdh->public_key.size() == curve_public_length(suite->ecdh_curve));
}
