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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace edhoc {

using Bytes = std::vector<std::uint8_t>;
using ConstSpan = std::span<const std::uint8_t>;

inline Bytes to_bytes(ConstSpan s) { return Bytes(s.begin(), s.end()); }

inline Bytes to_bytes(const std::string& s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(ConstSpan s) {
    return std::string(s.begin(), s.end());
}

inline void append(Bytes& out, ConstSpan more) {
    out.insert(out.end(), more.begin(), more.end());
}

inline Bytes concat(ConstSpan a, ConstSpan b) {
    Bytes out(a.begin(), a.end());
    append(out, b);
    return out;
}

inline Bytes concat(ConstSpan a, ConstSpan b, ConstSpan c) {
    Bytes out = concat(a, b);
    append(out, c);
    return out;
}

// In-place XOR of `data` with `mask`; mask must be at least data.size() long.
inline void xor_with(Bytes& data, ConstSpan mask) {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] ^= mask[i];
}

// Constant-time comparison; length mismatch returns false immediately
// (lengths are public in every context this is used).
inline bool ct_equal(ConstSpan a, ConstSpan b) {
    if (a.size() != b.size()) return false;
    volatile std::uint8_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc = acc | (a[i] ^ b[i]);
    return acc == 0;
}

inline std::string to_hex(ConstSpan data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

inline std::optional<Bytes> from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) return std::nullopt;
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]);
        int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

// True if `needle` occurs as a contiguous subsequence of `haystack`.
inline bool contains_subsequence(ConstSpan haystack, ConstSpan needle) {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < needle.size(); ++j) {
            if (haystack[i + j] != needle[j]) { match = false; break; }
        }
        if (match) return true;
    }
    return false;
}

}  // namespace edhoc
