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

#include <catch2/catch.hpp>

#include "edhoc/messages.hpp"

using namespace edhoc;

namespace {

// Randomized well-formed values for round-trip properties.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    Bytes bytes(std::size_t n) {
        Bytes out(n);
        for (auto& b : out) b = static_cast<std::uint8_t>(rng());
        return out;
    }
    Bytes nonempty(std::size_t max) { return bytes(1 + rng() % max); }
    Bytes cid() { return bytes(1 + rng() % 8); }

    std::vector<EADItem> ead(std::size_t max_items = 3) {
        std::vector<EADItem> out;
        const std::size_t n = rng() % (max_items + 1);
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(EADItem{rng() % 1000, (rng() & 1) != 0, bytes(rng() % 20)});
        return out;
    }

    Message1 message_1() {
        Message1 m;
        m.method = rng() % 4;
        const std::size_t n = 1 + rng() % 3;
        for (std::size_t i = 0; i < n; ++i)
            m.suites_i.push_back(static_cast<int>(rng() % 25));
        m.g_x = nonempty(80);
        m.c_i = cid();
        m.ead_1 = ead();
        return m;
    }
    Message2 message_2() { return Message2{nonempty(80), nonempty(120), cid()}; }
    Plaintext2 plaintext_2() { return Plaintext2{nonempty(8), nonempty(64), ead()}; }
    Plaintext3 plaintext_3() { return Plaintext3{nonempty(8), nonempty(64), ead()}; }
};

}  // namespace

TEST_CASE("frozen encoding: message_1 from the hand-computed oracle") {
    // array(5)[3, [2], h''x32, h'0a', []]:
    //   85 03 81 02 58 20 <32 zero bytes> 41 0a 80
    Message1 m;
    m.method = 3;
    m.suites_i = {2};
    m.g_x = Bytes(32, 0x00);
    m.c_i = Bytes{0x0a};
    Bytes expect = {0x85, 0x03, 0x81, 0x02, 0x58, 0x20};
    append(expect, Bytes(32, 0x00));
    append(expect, Bytes{0x41, 0x0a, 0x80});

    auto enc = encode_message_1(m);
    REQUIRE(enc.ok());
    CHECK(*enc == expect);
    auto back = decode_message_1(*enc);
    REQUIRE(back.ok());
    CHECK(*back == m);
}

TEST_CASE("frozen encoding: plaintext_2 from the hand-computed oracle") {
    // array(3)[h'05', h'ff..ff'(8), []]: 83 41 05 48 ff*8 80
    Plaintext2 p;
    p.id_cred_r = Bytes{0x05};
    p.sig_or_mac_2 = Bytes(8, 0xff);
    Bytes expect = {0x83, 0x41, 0x05, 0x48};
    append(expect, Bytes(8, 0xff));
    expect.push_back(0x80);

    auto enc = encode_plaintext_2(p);
    REQUIRE(enc.ok());
    CHECK(*enc == expect);
    auto back = decode_plaintext_2(*enc);
    REQUIRE(back.ok());
    CHECK(*back == p);
}

TEST_CASE("empty ead list encodes as a zero-item segment") {
    auto enc = encode_ead_list({});
    REQUIRE(enc.ok());
    CHECK(*enc == Bytes{0x80});
    auto p2 = encode_plaintext_2(Plaintext2{Bytes{0x05}, Bytes(8, 0x01), {}});
    REQUIRE(p2.ok());
    CHECK(p2->back() == 0x80);
}

TEST_CASE("ead items carry the critical flag in the label's low bit") {
    const std::vector<EADItem> items = {{7, true, Bytes{0xaa}}, {7, false, Bytes{0xaa}}};
    auto enc = encode_ead_list(items);
    REQUIRE(enc.ok());
    // array(2)[ [15, h'aa'], [14, h'aa'] ]
    CHECK(*enc == Bytes{0x82, 0x82, 0x0f, 0x41, 0xaa, 0x82, 0x0e, 0x41, 0xaa});
    auto back = decode_ead_list(*enc);
    REQUIRE(back.ok());
    CHECK(*back == items);
}

TEST_CASE("round-trip identity on randomized messages") {
    Gen gen(0xc0de);
    for (int i = 0; i < 1000; ++i) {
        const Message2 m = gen.message_2();
        auto enc = encode_message_2(m);
        REQUIRE(enc.ok());
        auto back = decode_message_2(*enc);
        REQUIRE(back.ok());
        CHECK(*back == m);
        // decode is canonical, so re-encoding reproduces the input bytes
        CHECK(*encode_message_2(*back) == *enc);
    }
    for (int i = 0; i < 300; ++i) {
        const Message1 m = gen.message_1();
        auto enc = encode_message_1(m);
        REQUIRE(enc.ok());
        CHECK(*decode_message_1(*enc) == m);

        const Plaintext2 p2 = gen.plaintext_2();
        CHECK(*decode_plaintext_2(*encode_plaintext_2(p2)) == p2);
        const Plaintext3 p3 = gen.plaintext_3();
        CHECK(*decode_plaintext_3(*encode_plaintext_3(p3)) == p3);

        const Message3 m3{gen.nonempty(100)};
        CHECK(*decode_message_3(*encode_message_3(m3)) == m3);
        const Message4 m4{gen.nonempty(100)};
        CHECK(*decode_message_4(*encode_message_4(m4)) == m4);
    }
}

TEST_CASE("structurally equal messages encode identically") {
    Gen gen(0xbeef);
    const Message1 m = gen.message_1();
    Message1 copy = m;
    CHECK(*encode_message_1(m) == *encode_message_1(copy));
}

TEST_CASE("decoders reject malformed wire data") {
    Gen gen(0xfeed);
    const Message1 m = gen.message_1();
    auto enc = encode_message_1(m);
    REQUIRE(enc.ok());

    SECTION("trailing byte") {
        Bytes padded = *enc;
        padded.push_back(0x00);
        auto r = decode_message_1(padded);
        CHECK(!r.ok());
        CHECK(r.error() == Error::MalformedMessage);
    }
    SECTION("truncation at every length") {
        for (std::size_t len = 0; len < enc->size(); ++len) {
            const Bytes cut(enc->begin(), enc->begin() + len);
            CHECK(!decode_message_1(cut).ok());
        }
    }
    SECTION("field constraint violations") {
        CHECK(!decode_message_1(Bytes{0x80}).ok());  // wrong arity
        // method 4 is outside the registry
        Bytes bad = *enc;
        bad[1] = 0x04;
        CHECK(!decode_message_1(bad).ok());
        // connection ids are 1..8 bytes
        Message1 long_cid = m;
        long_cid.c_i = Bytes(9, 0x01);
        CHECK(!encode_message_1(long_cid).ok());
        Message1 empty_suites = m;
        empty_suites.suites_i.clear();
        CHECK(!encode_message_1(empty_suites).ok());
    }
    SECTION("oversize input") {
        Bytes huge(cbor::kMaxMessageSize + 1, 0x00);
        CHECK(!decode_message_1(huge).ok());
        CHECK(!decode_message_2(huge).ok());
        CHECK(!decode_error(huge).ok());
    }
}

TEST_CASE("error message codec") {
    auto suites = encode_suite_list({0, 2, 3});
    REQUIRE(suites.ok());
    auto e = make_error_message(2, *suites);
    REQUIRE(e.ok());
    auto enc = encode_error(*e);
    REQUIRE(enc.ok());
    auto back = decode_error(*enc);
    REQUIRE(back.ok());
    CHECK(*back == *e);
    auto info = decode_suite_list(back->info);
    REQUIRE(info.ok());
    CHECK(*info == std::vector<int>{0, 2, 3});

    // code 0 and code 3 are outside the code set
    CHECK(!make_error_message(0, {}).ok());
    CHECK(!make_error_message(3, {}).ok());
    auto generic = make_error_message(1, {});
    REQUIRE(generic.ok());
    auto generic_enc = encode_error(*generic);
    REQUIRE(generic_enc.ok());
    CHECK(decode_error(*generic_enc)->code == 1);
    CHECK(decode_error(*generic_enc)->info.empty());

    const Bytes bad_code{0x82, 0x00, 0x40};  // code 0 on the wire
    CHECK(!decode_error(bad_code).ok());
}

TEST_CASE("decoder fuzz: arbitrary bytes never crash and never over-allocate") {
    std::mt19937_64 rng(0x5eed);
    for (int i = 0; i < 20000; ++i) {
        const std::size_t len = rng() % 200;
        Bytes junk(len);
        for (auto& b : junk) b = static_cast<std::uint8_t>(rng());
        (void)decode_message_1(junk);
        (void)decode_message_2(junk);
        (void)decode_message_3(junk);
        (void)decode_message_4(junk);
        (void)decode_error(junk);
        (void)decode_plaintext_2(junk);
        (void)decode_plaintext_3(junk);
    }
    // adversarial length heads: huge announced sizes with tiny bodies
    const Bytes bomb{0x85, 0x00, 0x81, 0x00, 0x5b, 0x7f, 0xff, 0xff,
                     0xff, 0xff, 0xff, 0xff, 0xff, 0x41, 0x0a, 0x80};
    CHECK(!decode_message_1(bomb).ok());
}
