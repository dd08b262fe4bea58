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
// Wire objects for the handshake and their codecs. Each message is a
// fixed-arity array of its fields in declaration order, so truncation and
// trailing garbage are always detectable. EAD items encode as
// [label*2 + critical, value]; connection identifiers are opaque 1..8 byte
// strings. Encoding is canonical: equal values produce identical bytes and
// decode(encode(m)) == m on the entire valid set.

#pragma once

#include <vector>

#include "edhoc/cbor.hpp"

namespace edhoc {

struct EADItem {
    std::uint64_t label = 0;
    bool critical = false;
    Bytes value;

    friend bool operator==(const EADItem&, const EADItem&) = default;
};

struct Message1 {
    std::uint64_t method = 0;
    std::vector<int> suites_i;
    Bytes g_x;
    Bytes c_i;
    std::vector<EADItem> ead_1;

    friend bool operator==(const Message1&, const Message1&) = default;
};

struct Message2 {
    Bytes g_y;
    Bytes ciphertext_2;
    Bytes c_r;

    friend bool operator==(const Message2&, const Message2&) = default;
};

struct Plaintext2 {
    Bytes id_cred_r;
    Bytes sig_or_mac_2;
    std::vector<EADItem> ead_2;

    friend bool operator==(const Plaintext2&, const Plaintext2&) = default;
};

struct Message3 {
    Bytes ciphertext_3;

    friend bool operator==(const Message3&, const Message3&) = default;
};

struct Plaintext3 {
    Bytes id_cred_i;
    Bytes sig_or_mac_3;
    std::vector<EADItem> ead_3;

    friend bool operator==(const Plaintext3&, const Plaintext3&) = default;
};

struct Message4 {
    Bytes ciphertext_4;

    friend bool operator==(const Message4&, const Message4&) = default;
};

// code 1: generic abort; code 2: wrong selected suite, info carries the
// responder's supported suite list. Never encrypted; receipt terminates
// the session.
struct ErrorMessage {
    std::uint64_t code = 1;
    Bytes info;

    friend bool operator==(const ErrorMessage&, const ErrorMessage&) = default;
};

inline Result<ErrorMessage> make_error_message(std::uint64_t code, Bytes info) {
    if (code != 1 && code != 2) return Error::MalformedMessage;
    return ErrorMessage{code, std::move(info)};
}

// --------------------------------------------------------------------------
// EAD items

namespace detail {
inline constexpr std::uint64_t kMaxEadLabel = std::uint64_t{1} << 62;
}

inline Result<Unit> append_ead_list(cbor::Writer& w, const std::vector<EADItem>& items) {
    w.array(items.size());
    for (const auto& item : items) {
        if (item.label >= detail::kMaxEadLabel) return Error::MalformedMessage;
        w.array(2);
        w.uint(item.label << 1 | (item.critical ? 1 : 0));
        w.bstr(item.value);
    }
    return Unit{};
}

inline Result<Bytes> encode_ead_list(const std::vector<EADItem>& items) {
    cbor::Writer w;
    auto r = append_ead_list(w, items);
    if (!r) return r.error();
    return w.take();
}

inline Result<std::vector<EADItem>> read_ead_list(cbor::Reader& r) {
    auto count = r.array();
    if (!count) return count.error();
    std::vector<EADItem> items;
    items.reserve(static_cast<std::size_t>(*count));
    for (std::uint64_t i = 0; i < *count; ++i) {
        auto arity = r.array();
        if (!arity) return arity.error();
        if (*arity != 2) return Error::MalformedMessage;
        auto packed = r.uint();
        if (!packed) return packed.error();
        auto value = r.bstr();
        if (!value) return value.error();
        items.push_back(EADItem{*packed >> 1, (*packed & 1) != 0, to_bytes(*value)});
    }
    return items;
}

inline Result<std::vector<EADItem>> decode_ead_list(ConstSpan in) {
    cbor::Reader r(in);
    auto items = read_ead_list(r);
    if (!items) return items.error();
    auto done = r.expect_done();
    if (!done) return done.error();
    return items;
}

// --------------------------------------------------------------------------
// Suite lists (message 1 and error code 2 payloads)

inline Result<Bytes> encode_suite_list(const std::vector<int>& suites) {
    cbor::Writer w;
    w.array(suites.size());
    for (int id : suites) {
        if (id < 0) return Error::MalformedMessage;  // reserved ids never go on the wire
        w.uint(static_cast<std::uint64_t>(id));
    }
    return w.take();
}

inline Result<std::vector<int>> read_suite_list(cbor::Reader& r) {
    auto count = r.array();
    if (!count) return count.error();
    std::vector<int> suites;
    suites.reserve(static_cast<std::size_t>(*count));
    for (std::uint64_t i = 0; i < *count; ++i) {
        auto id = r.uint();
        if (!id) return id.error();
        if (*id > 0x7fffffff) return Error::MalformedMessage;
        suites.push_back(static_cast<int>(*id));
    }
    return suites;
}

inline Result<std::vector<int>> decode_suite_list(ConstSpan in) {
    if (in.size() > cbor::kMaxMessageSize) return Error::MalformedMessage;
    cbor::Reader r(in);
    auto suites = read_suite_list(r);
    if (!suites) return suites.error();
    auto done = r.expect_done();
    if (!done) return done.error();
    return suites;
}

// --------------------------------------------------------------------------
// Field checks shared by encoders and decoders

namespace detail {

inline bool connection_id_ok(ConstSpan c) { return c.size() >= 1 && c.size() <= 8; }

inline Result<Unit> check_message_1(const Message1& m) {
    if (m.method > 3) return Error::MalformedMessage;
    if (m.suites_i.empty()) return Error::MalformedMessage;
    if (m.g_x.empty()) return Error::MalformedMessage;
    if (!connection_id_ok(m.c_i)) return Error::MalformedMessage;
    return Unit{};
}

}  // namespace detail

// --------------------------------------------------------------------------
// Message 1

inline Result<Bytes> encode_message_1(const Message1& m) {
    auto valid = detail::check_message_1(m);
    if (!valid) return valid.error();
    cbor::Writer w;
    w.array(5);
    w.uint(m.method);
    auto suites = encode_suite_list(m.suites_i);
    if (!suites) return suites.error();
    w.raw(*suites);
    w.bstr(m.g_x);
    w.bstr(m.c_i);
    auto ead = append_ead_list(w, m.ead_1);
    if (!ead) return ead.error();
    return w.take();
}

inline Result<Message1> decode_message_1(ConstSpan in) {
    if (in.size() > cbor::kMaxMessageSize) return Error::MalformedMessage;
    cbor::Reader r(in);
    auto arity = r.array();
    if (!arity) return arity.error();
    if (*arity != 5) return Error::MalformedMessage;
    Message1 m;
    auto method = r.uint();
    if (!method) return method.error();
    m.method = *method;
    auto suites = read_suite_list(r);
    if (!suites) return suites.error();
    m.suites_i = std::move(*suites);
    auto g_x = r.bstr();
    if (!g_x) return g_x.error();
    m.g_x = to_bytes(*g_x);
    auto c_i = r.bstr();
    if (!c_i) return c_i.error();
    m.c_i = to_bytes(*c_i);
    auto ead = read_ead_list(r);
    if (!ead) return ead.error();
    m.ead_1 = std::move(*ead);
    auto done = r.expect_done();
    if (!done) return done.error();
    auto valid = detail::check_message_1(m);
    if (!valid) return valid.error();
    return m;
}

// --------------------------------------------------------------------------
// Message 2 and Plaintext 2

inline Result<Bytes> encode_message_2(const Message2& m) {
    if (m.g_y.empty() || m.ciphertext_2.empty() || !detail::connection_id_ok(m.c_r))
        return Error::MalformedMessage;
    cbor::Writer w;
    w.array(3);
    w.bstr(m.g_y);
    w.bstr(m.ciphertext_2);
    w.bstr(m.c_r);
    return w.take();
}

inline Result<Message2> decode_message_2(ConstSpan in) {
    if (in.size() > cbor::kMaxMessageSize) return Error::MalformedMessage;
    cbor::Reader r(in);
    auto arity = r.array();
    if (!arity) return arity.error();
    if (*arity != 3) return Error::MalformedMessage;
    Message2 m;
    auto g_y = r.bstr();
    if (!g_y) return g_y.error();
    m.g_y = to_bytes(*g_y);
    auto ct = r.bstr();
    if (!ct) return ct.error();
    m.ciphertext_2 = to_bytes(*ct);
    auto c_r = r.bstr();
    if (!c_r) return c_r.error();
    m.c_r = to_bytes(*c_r);
    auto done = r.expect_done();
    if (!done) return done.error();
    if (m.g_y.empty() || m.ciphertext_2.empty() || !detail::connection_id_ok(m.c_r))
        return Error::MalformedMessage;
    return m;
}

inline Result<Bytes> encode_plaintext_2(const Plaintext2& p) {
    if (p.id_cred_r.empty() || p.sig_or_mac_2.empty()) return Error::MalformedMessage;
    cbor::Writer w;
    w.array(3);
    w.bstr(p.id_cred_r);
    w.bstr(p.sig_or_mac_2);
    auto ead = append_ead_list(w, p.ead_2);
    if (!ead) return ead.error();
    return w.take();
}

inline Result<Plaintext2> decode_plaintext_2(ConstSpan in) {
    if (in.size() > cbor::kMaxMessageSize) return Error::MalformedMessage;
    cbor::Reader r(in);
    auto arity = r.array();
    if (!arity) return arity.error();
    if (*arity != 3) return Error::MalformedMessage;
    Plaintext2 p;
    auto id_cred = r.bstr();
    if (!id_cred) return id_cred.error();
    p.id_cred_r = to_bytes(*id_cred);
    auto sig_or_mac = r.bstr();
    if (!sig_or_mac) return sig_or_mac.error();
    p.sig_or_mac_2 = to_bytes(*sig_or_mac);
    auto ead = read_ead_list(r);
    if (!ead) return ead.error();
    p.ead_2 = std::move(*ead);
    auto done = r.expect_done();
    if (!done) return done.error();
    if (p.id_cred_r.empty() || p.sig_or_mac_2.empty()) return Error::MalformedMessage;
    return p;
}

inline Result<Bytes> encode_plaintext_3(const Plaintext3& p) {
    if (p.id_cred_i.empty() || p.sig_or_mac_3.empty()) return Error::MalformedMessage;
    cbor::Writer w;
    w.array(3);
    w.bstr(p.id_cred_i);
    w.bstr(p.sig_or_mac_3);
    auto ead = append_ead_list(w, p.ead_3);
    if (!ead) return ead.error();
    return w.take();
}

inline Result<Plaintext3> decode_plaintext_3(ConstSpan in) {
    if (in.size() > cbor::kMaxMessageSize) return Error::MalformedMessage;
    cbor::Reader r(in);
    auto arity = r.array();
    if (!arity) return arity.error();
    if (*arity != 3) return Error::MalformedMessage;
    Plaintext3 p;
    auto id_cred = r.bstr();
    if (!id_cred) return id_cred.error();
    p.id_cred_i = to_bytes(*id_cred);
    auto sig_or_mac = r.bstr();
    if (!sig_or_mac) return sig_or_mac.error();
    p.sig_or_mac_3 = to_bytes(*sig_or_mac);
    auto ead = read_ead_list(r);
    if (!ead) return ead.error();
    p.ead_3 = std::move(*ead);
    auto done = r.expect_done();
    if (!done) return done.error();
    if (p.id_cred_i.empty() || p.sig_or_mac_3.empty()) return Error::MalformedMessage;
    return p;
}

// --------------------------------------------------------------------------
// Messages 3 and 4 (a single sealed byte string each)

namespace detail {

inline Result<Bytes> encode_sealed(const Bytes& ciphertext) {
    if (ciphertext.empty()) return Error::MalformedMessage;
    cbor::Writer w;
    w.array(1);
    w.bstr(ciphertext);
    return w.take();
}

inline Result<Bytes> decode_sealed(ConstSpan in) {
    if (in.size() > cbor::kMaxMessageSize) return Error::MalformedMessage;
    cbor::Reader r(in);
    auto arity = r.array();
    if (!arity) return arity.error();
    if (*arity != 1) return Error::MalformedMessage;
    auto ct = r.bstr();
    if (!ct) return ct.error();
    auto done = r.expect_done();
    if (!done) return done.error();
    if (ct->empty()) return Error::MalformedMessage;
    return to_bytes(*ct);
}

}  // namespace detail

inline Result<Bytes> encode_message_3(const Message3& m) {
    return detail::encode_sealed(m.ciphertext_3);
}

inline Result<Message3> decode_message_3(ConstSpan in) {
    auto ct = detail::decode_sealed(in);
    if (!ct) return ct.error();
    return Message3{std::move(*ct)};
}

inline Result<Bytes> encode_message_4(const Message4& m) {
    return detail::encode_sealed(m.ciphertext_4);
}

inline Result<Message4> decode_message_4(ConstSpan in) {
    auto ct = detail::decode_sealed(in);
    if (!ct) return ct.error();
    return Message4{std::move(*ct)};
}

// --------------------------------------------------------------------------
// Error message

inline Result<Bytes> encode_error(const ErrorMessage& e) {
    if (e.code != 1 && e.code != 2) return Error::MalformedMessage;
    cbor::Writer w;
    w.array(2);
    w.uint(e.code);
    w.bstr(e.info);
    return w.take();
}

inline Result<ErrorMessage> decode_error(ConstSpan in) {
    if (in.size() > cbor::kMaxMessageSize) return Error::MalformedMessage;
    cbor::Reader r(in);
    auto arity = r.array();
    if (!arity) return arity.error();
    if (*arity != 2) return Error::MalformedMessage;
    ErrorMessage e;
    auto code = r.uint();
    if (!code) return code.error();
    e.code = *code;
    auto info = r.bstr();
    if (!info) return info.error();
    e.info = to_bytes(*info);
    auto done = r.expect_done();
    if (!done) return done.error();
    if (e.code != 1 && e.code != 2) return Error::MalformedMessage;
    return e;
}

}  // namespace edhoc
