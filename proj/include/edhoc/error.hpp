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

#include <cassert>
#include <utility>
#include <variant>

namespace edhoc {

enum class Error {
    UnknownSuite,
    ReservedSuite,
    UnsupportedSuite,
    UnknownMethod,
    UnsupportedMethod,
    NoCommonSuite,
    InvalidPoint,
    MalformedMessage,
    LengthTooLarge,
    MissingStaticSecret,
    UntrustedPeer,
    UnintendedPeer,
    AuthenticationFailed,
    CriticalEadUnrecognized,
    ReplayOrOutOfOrder,
    ConfigError,
    NotConfirmed,
    Timeout,
    PeerError,
    UnknownScenario,
    CryptoFailure,
};

inline const char* error_name(Error e) {
    switch (e) {
        case Error::UnknownSuite: return "UnknownSuite";
        case Error::ReservedSuite: return "ReservedSuite";
        case Error::UnsupportedSuite: return "UnsupportedSuite";
        case Error::UnknownMethod: return "UnknownMethod";
        case Error::UnsupportedMethod: return "UnsupportedMethod";
        case Error::NoCommonSuite: return "NoCommonSuite";
        case Error::InvalidPoint: return "InvalidPoint";
        case Error::MalformedMessage: return "MalformedMessage";
        case Error::LengthTooLarge: return "LengthTooLarge";
        case Error::MissingStaticSecret: return "MissingStaticSecret";
        case Error::UntrustedPeer: return "UntrustedPeer";
        case Error::UnintendedPeer: return "UnintendedPeer";
        case Error::AuthenticationFailed: return "AuthenticationFailed";
        case Error::CriticalEadUnrecognized: return "CriticalEadUnrecognized";
        case Error::ReplayOrOutOfOrder: return "ReplayOrOutOfOrder";
        case Error::ConfigError: return "ConfigError";
        case Error::NotConfirmed: return "NotConfirmed";
        case Error::Timeout: return "Timeout";
        case Error::PeerError: return "PeerError";
        case Error::UnknownScenario: return "UnknownScenario";
        case Error::CryptoFailure: return "CryptoFailure";
    }
    return "UnknownError";
}

struct Unit {
    friend bool operator==(Unit, Unit) { return true; }
};

// Minimal value-or-error type. Failed results hold an Error; accessing the
// value of a failed result is a programming error (asserted in debug builds).
template <typename T>
class [[nodiscard]] Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(Error err) : v_(err) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    Error error() const {
        assert(!ok());
        return std::get<Error>(v_);
    }

    T& value() & {
        assert(ok());
        return std::get<T>(v_);
    }
    const T& value() const& {
        assert(ok());
        return std::get<T>(v_);
    }
    T&& value() && {
        assert(ok());
        return std::get<T>(std::move(v_));
    }

    T& operator*() & { return value(); }
    const T& operator*() const& { return value(); }
    T&& operator*() && { return std::move(*this).value(); }
    T* operator->() { return &value(); }
    const T* operator->() const { return &value(); }

private:
    std::variant<T, Error> v_;
};

inline Result<Unit> ok() { return Result<Unit>(Unit{}); }

}  // namespace edhoc
