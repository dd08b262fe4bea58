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
// Independent reference implementations used only as test oracles. They
// deliberately take different code paths from the library: HKDF goes through
// OpenSSL's EVP_KDF provider instead of the hand-rolled HMAC loop, CCM is
// rebuilt from the raw AES-ECB primitive, and curve/signature/AEAD oracles
// come from libsodium.

#pragma once

#include <cstring>
#include <optional>

#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/kdf.h>
#include <sodium.h>

#include "edhoc/bytes.hpp"
#include "edhoc/suites.hpp"

namespace oracle {

using edhoc::Bytes;
using edhoc::ConstSpan;

inline const char* digest_name(edhoc::HashAlg h) {
    return h == edhoc::HashAlg::Sha256 ? "SHA256" : "SHA384";
}

// ---------------------------------------------------------------------------
// HKDF via the EVP_KDF provider.

inline Bytes hkdf_extract(edhoc::HashAlg hash, ConstSpan salt, ConstSpan ikm) {
    EVP_KDF* kdf = EVP_KDF_fetch(nullptr, "HKDF", nullptr);
    EVP_KDF_CTX* ctx = EVP_KDF_CTX_new(kdf);
    int mode = EVP_KDF_HKDF_MODE_EXTRACT_ONLY;
    static std::uint8_t dummy = 0;
    OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_KDF_PARAM_DIGEST,
                                         const_cast<char*>(digest_name(hash)), 0),
        OSSL_PARAM_construct_octet_string(
            OSSL_KDF_PARAM_KEY, const_cast<std::uint8_t*>(ikm.empty() ? &dummy : ikm.data()),
            ikm.size()),
        OSSL_PARAM_construct_octet_string(
            OSSL_KDF_PARAM_SALT,
            const_cast<std::uint8_t*>(salt.empty() ? &dummy : salt.data()), salt.size()),
        OSSL_PARAM_construct_int(OSSL_KDF_PARAM_MODE, &mode),
        OSSL_PARAM_construct_end(),
    };
    Bytes out(edhoc::hash_length(hash));
    EVP_KDF_derive(ctx, out.data(), out.size(), params);
    EVP_KDF_CTX_free(ctx);
    EVP_KDF_free(kdf);
    return out;
}

inline Bytes hkdf_expand(edhoc::HashAlg hash, ConstSpan prk, ConstSpan info,
                         std::size_t length) {
    EVP_KDF* kdf = EVP_KDF_fetch(nullptr, "HKDF", nullptr);
    EVP_KDF_CTX* ctx = EVP_KDF_CTX_new(kdf);
    int mode = EVP_KDF_HKDF_MODE_EXPAND_ONLY;
    static std::uint8_t dummy = 0;
    OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_KDF_PARAM_DIGEST,
                                         const_cast<char*>(digest_name(hash)), 0),
        OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_KEY,
                                          const_cast<std::uint8_t*>(prk.data()),
                                          prk.size()),
        OSSL_PARAM_construct_octet_string(
            OSSL_KDF_PARAM_INFO,
            const_cast<std::uint8_t*>(info.empty() ? &dummy : info.data()), info.size()),
        OSSL_PARAM_construct_int(OSSL_KDF_PARAM_MODE, &mode),
        OSSL_PARAM_construct_end(),
    };
    Bytes out(length);
    EVP_KDF_derive(ctx, out.data(), out.size(), params);
    EVP_KDF_CTX_free(ctx);
    EVP_KDF_free(kdf);
    return out;
}

// ---------------------------------------------------------------------------
// AES-CCM rebuilt from the ECB primitive (CBC-MAC + CTR), 13-byte nonce.

namespace detail {

inline void aes128_ecb(ConstSpan key, const std::uint8_t in[16], std::uint8_t out[16]) {
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    int len = 0;
    EVP_EncryptInit_ex(ctx, EVP_aes_128_ecb(), nullptr, key.data(), nullptr);
    EVP_CIPHER_CTX_set_padding(ctx, 0);
    EVP_EncryptUpdate(ctx, out, &len, in, 16);
    EVP_CIPHER_CTX_free(ctx);
}

}  // namespace detail

inline Bytes ccm_seal(ConstSpan key, ConstSpan nonce, ConstSpan aad, ConstSpan pt,
                      std::size_t tag_len) {
    // L = 15 - nonce length = 2 for the 13-byte nonces used here.
    const std::size_t L = 15 - nonce.size();
    std::uint8_t b0[16];
    b0[0] = static_cast<std::uint8_t>((aad.empty() ? 0 : 0x40) |
                                      (((tag_len - 2) / 2) << 3) | (L - 1));
    std::memcpy(b0 + 1, nonce.data(), nonce.size());
    for (std::size_t i = 0; i < L; ++i)
        b0[15 - i] = static_cast<std::uint8_t>(pt.size() >> (8 * i));

    // CBC-MAC over B_0, the length-prefixed AAD, then the padded message.
    std::uint8_t x[16];
    detail::aes128_ecb(key, b0, x);
    Bytes auth_data;
    if (!aad.empty()) {
        auth_data.push_back(static_cast<std::uint8_t>(aad.size() >> 8));
        auth_data.push_back(static_cast<std::uint8_t>(aad.size()));
        edhoc::append(auth_data, aad);
        while (auth_data.size() % 16 != 0) auth_data.push_back(0);
    }
    Bytes msg_data = edhoc::to_bytes(pt);
    while (msg_data.size() % 16 != 0) msg_data.push_back(0);
    Bytes blocks = auth_data;
    edhoc::append(blocks, msg_data);
    for (std::size_t off = 0; off < blocks.size(); off += 16) {
        std::uint8_t in[16];
        for (int i = 0; i < 16; ++i) in[i] = x[i] ^ blocks[off + i];
        detail::aes128_ecb(key, in, x);
    }

    // CTR keystream: A_i = flags(L-1) | nonce | counter.
    auto ctr_block = [&](std::uint16_t counter, std::uint8_t out[16]) {
        std::uint8_t a[16];
        a[0] = static_cast<std::uint8_t>(L - 1);
        std::memcpy(a + 1, nonce.data(), nonce.size());
        a[14] = static_cast<std::uint8_t>(counter >> 8);
        a[15] = static_cast<std::uint8_t>(counter);
        detail::aes128_ecb(key, a, out);
    };

    Bytes out(pt.begin(), pt.end());
    std::uint8_t s[16];
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i % 16 == 0) ctr_block(static_cast<std::uint16_t>(i / 16 + 1), s);
        out[i] ^= s[i % 16];
    }
    std::uint8_t s0[16];
    ctr_block(0, s0);
    for (std::size_t i = 0; i < tag_len; ++i)
        out.push_back(x[i] ^ s0[i]);
    return out;
}

inline std::optional<Bytes> ccm_open(ConstSpan key, ConstSpan nonce, ConstSpan aad,
                                     ConstSpan ct, std::size_t tag_len) {
    if (ct.size() < tag_len) return std::nullopt;
    const std::size_t body = ct.size() - tag_len;
    const std::size_t L = 15 - nonce.size();
    auto ctr_block = [&](std::uint16_t counter, std::uint8_t out[16]) {
        std::uint8_t a[16];
        a[0] = static_cast<std::uint8_t>(L - 1);
        std::memcpy(a + 1, nonce.data(), nonce.size());
        a[14] = static_cast<std::uint8_t>(counter >> 8);
        a[15] = static_cast<std::uint8_t>(counter);
        detail::aes128_ecb(key, a, out);
    };
    Bytes pt(ct.begin(), ct.begin() + body);
    std::uint8_t s[16];
    for (std::size_t i = 0; i < pt.size(); ++i) {
        if (i % 16 == 0) ctr_block(static_cast<std::uint16_t>(i / 16 + 1), s);
        pt[i] ^= s[i % 16];
    }
    Bytes resealed = ccm_seal(key, nonce, aad, pt, tag_len);
    if (!edhoc::ct_equal(resealed, ct)) return std::nullopt;
    return pt;
}

// ---------------------------------------------------------------------------
// libsodium oracles

inline Bytes sodium_sha256(ConstSpan data) {
    Bytes out(crypto_hash_sha256_BYTES);
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

inline Bytes sodium_hmac_sha256(ConstSpan key, ConstSpan data) {
    crypto_auth_hmacsha256_state st;
    crypto_auth_hmacsha256_init(&st, key.data(), key.size());
    crypto_auth_hmacsha256_update(&st, data.data(), data.size());
    Bytes out(crypto_auth_hmacsha256_BYTES);
    crypto_auth_hmacsha256_final(&st, out.data());
    return out;
}

inline std::optional<Bytes> sodium_x25519(ConstSpan scalar, ConstSpan point) {
    Bytes out(crypto_scalarmult_BYTES);
    if (crypto_scalarmult(out.data(), scalar.data(), point.data()) != 0)
        return std::nullopt;
    return out;
}

inline Bytes sodium_x25519_base(ConstSpan scalar) {
    Bytes out(crypto_scalarmult_BYTES);
    crypto_scalarmult_base(out.data(), scalar.data());
    return out;
}

inline Bytes sodium_ed25519_sign(ConstSpan seed, ConstSpan msg) {
    std::uint8_t pk[crypto_sign_PUBLICKEYBYTES];
    std::uint8_t sk[crypto_sign_SECRETKEYBYTES];
    crypto_sign_seed_keypair(pk, sk, seed.data());
    Bytes sig(crypto_sign_BYTES);
    unsigned long long len = 0;
    crypto_sign_detached(sig.data(), &len, msg.data(), msg.size(), sk);
    sig.resize(len);
    return sig;
}

inline Bytes sodium_ed25519_public(ConstSpan seed) {
    std::uint8_t pk[crypto_sign_PUBLICKEYBYTES];
    std::uint8_t sk[crypto_sign_SECRETKEYBYTES];
    crypto_sign_seed_keypair(pk, sk, seed.data());
    return Bytes(pk, pk + sizeof pk);
}

inline bool sodium_ed25519_verify(ConstSpan pub, ConstSpan msg, ConstSpan sig) {
    return crypto_sign_verify_detached(sig.data(), msg.data(), msg.size(),
                                       pub.data()) == 0;
}

inline Bytes sodium_chacha_seal(ConstSpan key, ConstSpan nonce, ConstSpan aad,
                                ConstSpan pt) {
    Bytes out(pt.size() + crypto_aead_chacha20poly1305_ietf_ABYTES);
    unsigned long long len = 0;
    static const std::uint8_t dummy = 0;
    crypto_aead_chacha20poly1305_ietf_encrypt(
        out.data(), &len, pt.empty() ? &dummy : pt.data(), pt.size(),
        aad.empty() ? &dummy : aad.data(), aad.size(), nullptr, nonce.data(), key.data());
    out.resize(len);
    return out;
}

inline std::optional<Bytes> sodium_aes256gcm_seal(ConstSpan key, ConstSpan nonce,
                                                  ConstSpan aad, ConstSpan pt) {
    if (!crypto_aead_aes256gcm_is_available()) return std::nullopt;
    Bytes out(pt.size() + crypto_aead_aes256gcm_ABYTES);
    unsigned long long len = 0;
    static const std::uint8_t dummy = 0;
    crypto_aead_aes256gcm_encrypt(out.data(), &len, pt.empty() ? &dummy : pt.data(),
                                  pt.size(), aad.empty() ? &dummy : aad.data(),
                                  aad.size(), nullptr, nonce.data(), key.data());
    out.resize(len);
    return out;
}

}  // namespace oracle
