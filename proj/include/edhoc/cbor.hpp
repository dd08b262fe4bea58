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
// Canonical CBOR subset: major types 0 (unsigned integer), 2 (byte string)
// and 4 (array) only, definite lengths only, shortest-form integer heads.
// Every valid byte string has exactly one decoding and every value has
// exactly one encoding, so structural equality and byte equality coincide.

#pragma once

#include <cstdint>

#include "edhoc/bytes.hpp"
#include "edhoc/error.hpp"

namespace edhoc::cbor {

// Hard cap on any input the decoder will look at.
inline constexpr std::size_t kMaxMessageSize = 64 * 1024;

inline constexpr std::uint8_t kMajorUint = 0;
inline constexpr std::uint8_t kMajorBstr = 2;
inline constexpr std::uint8_t kMajorArray = 4;

class Writer {
public:
    void uint(std::uint64_t v) { head(kMajorUint, v); }

    void bstr(ConstSpan v) {
        head(kMajorBstr, v.size());
        append(out_, v);
    }

    // Array of `n` items; the caller writes the items afterwards.
    void array(std::uint64_t n) { head(kMajorArray, n); }

    // Splices in bytes that are already canonically encoded.
    void raw(ConstSpan encoded) { append(out_, encoded); }

    const Bytes& bytes() const& { return out_; }
    Bytes take() { return std::move(out_); }

private:
    void head(std::uint8_t major, std::uint64_t v) {
        const std::uint8_t m = static_cast<std::uint8_t>(major << 5);
        if (v < 24) {
            out_.push_back(static_cast<std::uint8_t>(m | v));
        } else if (v <= 0xff) {
            out_.push_back(m | 24);
            out_.push_back(static_cast<std::uint8_t>(v));
        } else if (v <= 0xffff) {
            out_.push_back(m | 25);
            out_.push_back(static_cast<std::uint8_t>(v >> 8));
            out_.push_back(static_cast<std::uint8_t>(v));
        } else if (v <= 0xffffffff) {
            out_.push_back(m | 26);
            for (int shift = 24; shift >= 0; shift -= 8)
                out_.push_back(static_cast<std::uint8_t>(v >> shift));
        } else {
            out_.push_back(m | 27);
            for (int shift = 56; shift >= 0; shift -= 8)
                out_.push_back(static_cast<std::uint8_t>(v >> shift));
        }
    }

    Bytes out_;
};

inline Bytes encode_bstr(ConstSpan v) {
    Writer w;
    w.bstr(v);
    return w.take();
}

// Decoder over a borrowed buffer. Rejects anything outside the subset:
// wrong major types, non-shortest heads, indefinite lengths, reserved
// additional-info values, truncation. Never allocates more than the
// input it was given.
class Reader {
public:
    explicit Reader(ConstSpan in) : in_(in) {}
    // The reader borrows the buffer; refuse temporaries outright.
    explicit Reader(Bytes&&) = delete;

    Result<std::uint64_t> uint() { return head(kMajorUint); }

    Result<ConstSpan> bstr() {
        auto len = head(kMajorBstr);
        if (!len) return len.error();
        if (*len > remaining()) return Error::MalformedMessage;
        ConstSpan out = in_.subspan(pos_, static_cast<std::size_t>(*len));
        pos_ += static_cast<std::size_t>(*len);
        return out;
    }

    // Returns the element count. Each element needs at least one byte, so a
    // count beyond the remaining input is malformed (this bounds any
    // reservation a caller might make on the count).
    Result<std::uint64_t> array() {
        auto n = head(kMajorArray);
        if (!n) return n.error();
        if (*n > remaining()) return Error::MalformedMessage;
        return *n;
    }

    std::size_t remaining() const { return in_.size() - pos_; }
    bool done() const { return remaining() == 0; }

    Result<Unit> expect_done() const {
        if (!done()) return Error::MalformedMessage;
        return Unit{};
    }

private:
    Result<std::uint64_t> head(std::uint8_t expect_major) {
        if (remaining() < 1) return Error::MalformedMessage;
        const std::uint8_t initial = in_[pos_++];
        if ((initial >> 5) != expect_major) return Error::MalformedMessage;
        const std::uint8_t ai = initial & 0x1f;
        if (ai < 24) return static_cast<std::uint64_t>(ai);
        std::size_t extra;
        switch (ai) {
            case 24: extra = 1; break;
            case 25: extra = 2; break;
            case 26: extra = 4; break;
            case 27: extra = 8; break;
            default: return Error::MalformedMessage;  // reserved / indefinite
        }
        if (remaining() < extra) return Error::MalformedMessage;
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < extra; ++i) v = v << 8 | in_[pos_++];
        // Shortest-form requirement.
        switch (ai) {
            case 24: if (v < 24) return Error::MalformedMessage; break;
            case 25: if (v <= 0xff) return Error::MalformedMessage; break;
            case 26: if (v <= 0xffff) return Error::MalformedMessage; break;
            case 27: if (v <= 0xffffffff) return Error::MalformedMessage; break;
        }
        return v;
    }

    ConstSpan in_;
    std::size_t pos_ = 0;
};

}  // namespace edhoc::cbor
