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

#include <random>
#include <string>

#include <catch2/catch.hpp>

#include "edhoc/suites.hpp"

using namespace edhoc;

TEST_CASE("authentication method registry") {
    auto m0 = method_kinds(0);
    REQUIRE(m0.ok());
    CHECK(m0->initiator_kind == AuthKind::Signature);
    CHECK(m0->responder_kind == AuthKind::Signature);

    auto m1 = method_kinds(1);
    REQUIRE(m1.ok());
    CHECK(m1->initiator_kind == AuthKind::Signature);
    CHECK(m1->responder_kind == AuthKind::StaticDH);

    auto m2 = method_kinds(2);
    REQUIRE(m2.ok());
    CHECK(m2->initiator_kind == AuthKind::StaticDH);
    CHECK(m2->responder_kind == AuthKind::Signature);

    auto m3 = method_kinds(3);
    REQUIRE(m3.ok());
    CHECK(m3->initiator_kind == AuthKind::StaticDH);
    CHECK(m3->responder_kind == AuthKind::StaticDH);

    CHECK(!method_kinds(4).ok());
    CHECK(method_kinds(4).error() == Error::UnknownMethod);
    CHECK(!method_kinds(-1).ok());
}

TEST_CASE("cipher suite registry rows") {
    struct Row {
        int id;
        std::string aead, hash;
        std::size_t mac;
        std::string curve, sig, app_aead;
    };
    const Row rows[] = {
        {0, "AES-CCM-16-64-128", "SHA-256", 8, "X25519", "EdDSA", "AES-CCM-16-64-128"},
        {1, "AES-CCM-16-128-128", "SHA-256", 16, "X25519", "EdDSA", "AES-CCM-16-64-128"},
        {2, "AES-CCM-16-64-128", "SHA-256", 8, "P-256", "ES256", "AES-CCM-16-64-128"},
        {3, "AES-CCM-16-128-128", "SHA-256", 16, "P-256", "ES256", "AES-CCM-16-64-128"},
        {4, "ChaCha20/Poly1305", "SHA-256", 16, "X25519", "EdDSA", "ChaCha20/Poly1305"},
        {5, "ChaCha20/Poly1305", "SHA-256", 16, "P-256", "ES256", "ChaCha20/Poly1305"},
        {6, "A128GCM", "SHA-256", 16, "X25519", "ES256", "A128GCM"},
        {24, "A256GCM", "SHA-384", 16, "P-384", "ES384", "A256GCM"},
        {25, "ChaCha20/Poly1305", "SHAKE256", 16, "X448", "EdDSA", "ChaCha20/Poly1305"},
    };
    CHECK(suite_registry().size() == 9);
    CHECK(reserved_suite_ids().size() == 4);
    for (const auto& row : rows) {
        auto s = lookup_suite(row.id);
        REQUIRE(s.ok());
        CHECK(s->id == row.id);
        CHECK(s->aead_name == row.aead);
        CHECK(s->hash_name == row.hash);
        CHECK(s->mac_length == row.mac);
        CHECK(s->ecdh_curve_name == row.curve);
        CHECK(s->signature_name == row.sig);
        CHECK(s->app_aead_name == row.app_aead);
        CHECK((s->mac_length == 8 || s->mac_length == 16));
    }
}

TEST_CASE("suite lookup errors") {
    auto missing = lookup_suite(7);
    CHECK(!missing.ok());
    CHECK(missing.error() == Error::UnknownSuite);

    for (int id : {-24, -23, -22, -21}) {
        auto reserved = lookup_suite(id);
        CHECK(!reserved.ok());
        CHECK(reserved.error() == Error::ReservedSuite);
    }
    CHECK(lookup_suite(-25).error() == Error::UnknownSuite);
    CHECK(lookup_suite(100).error() == Error::UnknownSuite);
}

TEST_CASE("registry round-trips its own ids") {
    for (const auto& row : suite_registry()) {
        auto s = lookup_suite(row.id);
        REQUIRE(s.ok());
        CHECK(s->id == row.id);
    }
}

TEST_CASE("suite negotiation picks the first common entry") {
    auto pick = negotiate({2, 0}, {0, 2, 3});
    REQUIRE(pick.ok());
    CHECK(*pick == 2);

    auto none = negotiate({5}, {0, 2});
    CHECK(!none.ok());
    CHECK(none.error() == Error::NoCommonSuite);

    auto third = negotiate({0, 2, 3}, {3});
    REQUIRE(third.ok());
    CHECK(*third == 3);
}

TEST_CASE("negotiation is monotone in initiator preference") {
    // Removing any non-selected element never changes the result.
    std::mt19937_64 gen(42);
    const std::vector<int> pool = {0, 1, 2, 3, 4, 5, 6, 24};
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<int> prefs;
        const std::size_t len = 1 + gen() % 5;
        for (std::size_t i = 0; i < len; ++i) prefs.push_back(pool[gen() % pool.size()]);
        std::set<int> supported;
        const std::size_t slen = gen() % 5;
        for (std::size_t i = 0; i < slen; ++i) supported.insert(pool[gen() % pool.size()]);

        auto selected = negotiate(prefs, supported);
        if (!selected.ok()) continue;
        for (std::size_t drop = 0; drop < prefs.size(); ++drop) {
            if (prefs[drop] == *selected) continue;
            std::vector<int> reduced;
            for (std::size_t i = 0; i < prefs.size(); ++i)
                if (i != drop) reduced.push_back(prefs[i]);
            auto again = negotiate(reduced, supported);
            REQUIRE(again.ok());
            CHECK(*again == *selected);
        }
    }
}

TEST_CASE("algorithm parameter tables") {
    CHECK(hash_length(HashAlg::Sha256) == 32);
    CHECK(hash_length(HashAlg::Sha384) == 48);
    CHECK(aead_spec(AeadAlg::AesCcm16_64_128).tag_length == 8);
    CHECK(aead_spec(AeadAlg::AesCcm16_64_128).iv_length == 13);
    CHECK(aead_spec(AeadAlg::AesCcm16_64_128).key_length == 16);
    CHECK(aead_spec(AeadAlg::AesCcm16_128_128).tag_length == 16);
    CHECK(aead_spec(AeadAlg::Aes256Gcm).key_length == 32);
    CHECK(aead_spec(AeadAlg::ChaCha20Poly1305).key_length == 32);
    CHECK(curve_public_length(Curve::X25519) == 32);
    CHECK(curve_public_length(Curve::P256) == 65);
    CHECK(curve_public_length(Curve::P384) == 97);
    CHECK(signature_length(SigAlg::EdDSA) == 64);
    CHECK(signature_length(SigAlg::ES256) == 64);
    CHECK(signature_length(SigAlg::ES384) == 96);
}
