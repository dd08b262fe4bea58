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
// Cryptographic primitives backed by OpenSSL (libcrypto 3.x).
//
// All key material crosses this boundary as raw bytes: X25519/Ed25519 keys
// in their 32-byte raw form, P-256/P-384 public keys as uncompressed points,
// scalars big-endian zero-padded to the field width, ECDSA signatures as
// fixed-width r||s. ECDSA nonces follow RFC 6979 so that every signature in
// a seeded session is reproducible byte for byte.

#pragma once

#include <cassert>
#include <cstring>
#include <memory>

#include <openssl/bn.h>
#include <openssl/crypto.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/obj_mac.h>
#include <openssl/rand.h>

#include "edhoc/bytes.hpp"
#include "edhoc/error.hpp"
#include "edhoc/suites.hpp"

namespace edhoc {

namespace detail {

struct MdCtxFree { void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); } };
struct CipherCtxFree { void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); } };
struct PkeyFree { void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); } };
struct PkeyCtxFree { void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); } };
struct BnFree { void operator()(BIGNUM* p) const { BN_free(p); } };
struct BnCtxFree { void operator()(BN_CTX* p) const { BN_CTX_free(p); } };
struct GroupFree { void operator()(EC_GROUP* p) const { EC_GROUP_free(p); } };
struct PointFree { void operator()(EC_POINT* p) const { EC_POINT_free(p); } };

using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxFree>;
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;
using Pkey = std::unique_ptr<EVP_PKEY, PkeyFree>;
using PkeyCtx = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxFree>;
using Bn = std::unique_ptr<BIGNUM, BnFree>;
using BnCtx = std::unique_ptr<BN_CTX, BnCtxFree>;
using Group = std::unique_ptr<EC_GROUP, GroupFree>;
using Point = std::unique_ptr<EC_POINT, PointFree>;

inline const EVP_MD* md_for(HashAlg h) {
    switch (h) {
        case HashAlg::Sha256: return EVP_sha256();
        case HashAlg::Sha384: return EVP_sha384();
        case HashAlg::Shake256: return nullptr;  // not wired up in this build
    }
    return nullptr;
}

inline const std::uint8_t* nonempty(ConstSpan s) {
    static const std::uint8_t dummy = 0;
    return s.empty() ? &dummy : s.data();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hash / HMAC

inline Bytes sha(HashAlg alg, ConstSpan data) {
    const EVP_MD* md = detail::md_for(alg);
    assert(md != nullptr);
    if (md == nullptr) return {};
    Bytes out(static_cast<std::size_t>(EVP_MD_get_size(md)));
    unsigned int len = 0;
    EVP_Digest(detail::nonempty(data), data.size(), out.data(), &len, md, nullptr);
    out.resize(len);
    return out;
}

inline Bytes hmac(HashAlg alg, ConstSpan key, ConstSpan data) {
    const EVP_MD* md = detail::md_for(alg);
    assert(md != nullptr);
    if (md == nullptr) return {};
    Bytes out(EVP_MAX_MD_SIZE);
    unsigned int len = 0;
    HMAC(md, detail::nonempty(key), static_cast<int>(key.size()),
         detail::nonempty(data), data.size(), out.data(), &len);
    out.resize(len);
    return out;
}

// ---------------------------------------------------------------------------
// Randomness

class Rng {
public:
    virtual ~Rng() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;

    Bytes bytes(std::size_t n) {
        Bytes out(n);
        fill(out);
        return out;
    }
};

class SystemRng final : public Rng {
public:
    void fill(std::span<std::uint8_t> out) override {
        if (!out.empty()) RAND_bytes(out.data(), static_cast<int>(out.size()));
    }
};

// HMAC-SHA-256 counter stream keyed off the seed. Identical seeds give
// identical streams, which makes whole handshakes replayable in tests.
class DeterministicRng final : public Rng {
public:
    explicit DeterministicRng(ConstSpan seed) : key_(sha(HashAlg::Sha256, seed)) {}

    void fill(std::span<std::uint8_t> out) override {
        std::size_t done = 0;
        while (done < out.size()) {
            if (offset_ == block_.size()) {
                std::uint8_t ctr[8];
                for (int i = 0; i < 8; ++i)
                    ctr[i] = static_cast<std::uint8_t>(counter_ >> (56 - 8 * i));
                block_ = hmac(HashAlg::Sha256, key_, ConstSpan(ctr, 8));
                offset_ = 0;
                ++counter_;
            }
            const std::size_t take = std::min(out.size() - done, block_.size() - offset_);
            std::memcpy(out.data() + done, block_.data() + offset_, take);
            done += take;
            offset_ += take;
        }
    }

private:
    Bytes key_;
    Bytes block_;
    std::size_t offset_ = 0;
    std::uint64_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// AEAD
//
// seal returns ciphertext||tag; open takes the same and yields the plaintext
// or AuthenticationFailed. CCM needs the total message length announced
// before any AAD is fed in, hence the separate path.

inline bool aead_is_ccm(AeadAlg alg) {
    return alg == AeadAlg::AesCcm16_64_128 || alg == AeadAlg::AesCcm16_128_128;
}

namespace detail {

inline const EVP_CIPHER* cipher_for(AeadAlg alg) {
    switch (alg) {
        case AeadAlg::AesCcm16_64_128:
        case AeadAlg::AesCcm16_128_128: return EVP_aes_128_ccm();
        case AeadAlg::ChaCha20Poly1305: return EVP_chacha20_poly1305();
        case AeadAlg::Aes128Gcm: return EVP_aes_128_gcm();
        case AeadAlg::Aes256Gcm: return EVP_aes_256_gcm();
    }
    return nullptr;
}

}  // namespace detail

inline Result<Bytes> aead_seal(AeadAlg alg, ConstSpan key, ConstSpan iv,
                               ConstSpan aad, ConstSpan plaintext) {
    const AeadSpec spec = aead_spec(alg);
    if (key.size() != spec.key_length || iv.size() != spec.iv_length)
        return Error::CryptoFailure;
    detail::CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) return Error::CryptoFailure;

    const EVP_CIPHER* cipher = detail::cipher_for(alg);
    if (EVP_EncryptInit_ex(ctx.get(), cipher, nullptr, nullptr, nullptr) != 1)
        return Error::CryptoFailure;
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_IVLEN,
                            static_cast<int>(spec.iv_length), nullptr) != 1)
        return Error::CryptoFailure;
    if (aead_is_ccm(alg) &&
        EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG,
                            static_cast<int>(spec.tag_length), nullptr) != 1)
        return Error::CryptoFailure;
    if (EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), iv.data()) != 1)
        return Error::CryptoFailure;

    int len = 0;
    if (aead_is_ccm(alg) &&
        EVP_EncryptUpdate(ctx.get(), nullptr, &len, nullptr,
                          static_cast<int>(plaintext.size())) != 1)
        return Error::CryptoFailure;
    if (!aad.empty() &&
        EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                          static_cast<int>(aad.size())) != 1)
        return Error::CryptoFailure;

    Bytes out(plaintext.size() + spec.tag_length);
    if (EVP_EncryptUpdate(ctx.get(), out.data(), &len, detail::nonempty(plaintext),
                          static_cast<int>(plaintext.size())) != 1)
        return Error::CryptoFailure;
    int fin = 0;
    if (EVP_EncryptFinal_ex(ctx.get(), out.data() + len, &fin) != 1)
        return Error::CryptoFailure;
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG,
                            static_cast<int>(spec.tag_length),
                            out.data() + plaintext.size()) != 1)
        return Error::CryptoFailure;
    return out;
}

inline Result<Bytes> aead_open(AeadAlg alg, ConstSpan key, ConstSpan iv,
                               ConstSpan aad, ConstSpan ciphertext) {
    const AeadSpec spec = aead_spec(alg);
    if (key.size() != spec.key_length || iv.size() != spec.iv_length)
        return Error::CryptoFailure;
    if (ciphertext.size() < spec.tag_length) return Error::AuthenticationFailed;
    const std::size_t body_len = ciphertext.size() - spec.tag_length;
    ConstSpan body = ciphertext.first(body_len);
    ConstSpan tag = ciphertext.subspan(body_len);

    detail::CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) return Error::CryptoFailure;
    const EVP_CIPHER* cipher = detail::cipher_for(alg);
    if (EVP_DecryptInit_ex(ctx.get(), cipher, nullptr, nullptr, nullptr) != 1)
        return Error::CryptoFailure;
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_IVLEN,
                            static_cast<int>(spec.iv_length), nullptr) != 1)
        return Error::CryptoFailure;

    // +1 keeps out.data() valid when the body is empty (tag-only input).
    Bytes out(body_len + 1);
    int len = 0;
    if (aead_is_ccm(alg)) {
        // CCM verifies the tag inside the single data update.
        if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG,
                                static_cast<int>(spec.tag_length),
                                const_cast<std::uint8_t*>(tag.data())) != 1)
            return Error::CryptoFailure;
        if (EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), iv.data()) != 1)
            return Error::CryptoFailure;
        if (EVP_DecryptUpdate(ctx.get(), nullptr, &len, nullptr,
                              static_cast<int>(body_len)) != 1)
            return Error::CryptoFailure;
        if (!aad.empty() &&
            EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                              static_cast<int>(aad.size())) != 1)
            return Error::CryptoFailure;
        if (EVP_DecryptUpdate(ctx.get(), out.data(), &len, detail::nonempty(body),
                              static_cast<int>(body_len)) != 1)
            return Error::AuthenticationFailed;
    } else {
        if (EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), iv.data()) != 1)
            return Error::CryptoFailure;
        if (!aad.empty() &&
            EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                              static_cast<int>(aad.size())) != 1)
            return Error::CryptoFailure;
        if (EVP_DecryptUpdate(ctx.get(), out.data(), &len, detail::nonempty(body),
                              static_cast<int>(body_len)) != 1)
            return Error::CryptoFailure;
        if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG,
                                static_cast<int>(spec.tag_length),
                                const_cast<std::uint8_t*>(tag.data())) != 1)
            return Error::CryptoFailure;
        int fin = 0;
        if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &fin) != 1)
            return Error::AuthenticationFailed;
    }
    out.resize(body_len);
    return out;
}

// ---------------------------------------------------------------------------
// Key agreement

struct KeyPair {
    Bytes private_key;
    Bytes public_key;
};

namespace detail {

inline int nid_for(Curve c) {
    switch (c) {
        case Curve::P256: return NID_X9_62_prime256v1;
        case Curve::P384: return NID_secp384r1;
        default: return NID_undef;
    }
}

inline Result<Bytes> x25519_public(ConstSpan priv) {
    if (priv.size() != 32) return Error::CryptoFailure;
    Pkey pkey(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr,
                                           priv.data(), priv.size()));
    if (!pkey) return Error::CryptoFailure;
    Bytes pub(32);
    std::size_t len = pub.size();
    if (EVP_PKEY_get_raw_public_key(pkey.get(), pub.data(), &len) != 1 || len != 32)
        return Error::CryptoFailure;
    return pub;
}

inline Result<Bytes> x25519_shared(ConstSpan priv, ConstSpan peer_pub) {
    if (peer_pub.size() != 32 || priv.size() != 32) return Error::InvalidPoint;
    Pkey pkey(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr,
                                           priv.data(), priv.size()));
    Pkey peer(EVP_PKEY_new_raw_public_key(EVP_PKEY_X25519, nullptr,
                                          peer_pub.data(), peer_pub.size()));
    if (!pkey || !peer) return Error::InvalidPoint;
    PkeyCtx ctx(EVP_PKEY_CTX_new(pkey.get(), nullptr));
    if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
        EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) != 1)
        return Error::CryptoFailure;
    Bytes shared(32);
    std::size_t len = shared.size();
    // OpenSSL reports failure when the result is the all-zero string, which
    // is exactly the low-order / identity case we must reject.
    if (EVP_PKEY_derive(ctx.get(), shared.data(), &len) != 1 || len != 32)
        return Error::InvalidPoint;
    return shared;
}

struct EcContext {
    Group group;
    BnCtx bn;
    const BIGNUM* order = nullptr;
    std::size_t field_bytes = 0;
    std::size_t order_bytes = 0;

    static Result<EcContext> make(Curve c) {
        EcContext out;
        out.group.reset(EC_GROUP_new_by_curve_name(nid_for(c)));
        out.bn.reset(BN_CTX_new());
        if (!out.group || !out.bn) return Error::CryptoFailure;
        out.order = EC_GROUP_get0_order(out.group.get());
        out.field_bytes = (static_cast<std::size_t>(EC_GROUP_get_degree(out.group.get())) + 7) / 8;
        out.order_bytes = static_cast<std::size_t>(BN_num_bytes(out.order));
        return out;
    }

    Result<Point> decode_point(ConstSpan oct) const {
        Point p(EC_POINT_new(group.get()));
        if (!p) return Error::CryptoFailure;
        if (oct.empty() ||
            EC_POINT_oct2point(group.get(), p.get(), oct.data(), oct.size(), bn.get()) != 1)
            return Error::InvalidPoint;
        if (EC_POINT_is_at_infinity(group.get(), p.get()) ||
            EC_POINT_is_on_curve(group.get(), p.get(), bn.get()) != 1)
            return Error::InvalidPoint;
        return p;
    }

    Result<Bytes> encode_point(const EC_POINT* p) const {
        const std::size_t len = 1 + 2 * field_bytes;
        Bytes out(len);
        if (EC_POINT_point2oct(group.get(), p, POINT_CONVERSION_UNCOMPRESSED,
                               out.data(), out.size(), bn.get()) != len)
            return Error::CryptoFailure;
        return out;
    }
};

inline Bytes bn_to_padded(const BIGNUM* v, std::size_t width) {
    Bytes out(width);
    BN_bn2binpad(v, out.data(), static_cast<int>(width));
    return out;
}

// Scalar in [1, order-1] by rejection sampling from the rng.
inline Bn sample_scalar(const EcContext& ec, Rng& rng) {
    Bn d(BN_new());
    Bytes buf(ec.order_bytes);
    do {
        rng.fill(buf);
        BN_bin2bn(buf.data(), static_cast<int>(buf.size()), d.get());
    } while (BN_is_zero(d.get()) || BN_cmp(d.get(), ec.order) >= 0);
    return d;
}

inline Result<KeyPair> ec_gen_keypair(Curve c, Rng& rng) {
    auto ec = EcContext::make(c);
    if (!ec) return ec.error();
    Bn d = sample_scalar(*ec, rng);
    Point q(EC_POINT_new(ec->group.get()));
    if (!q || EC_POINT_mul(ec->group.get(), q.get(), d.get(), nullptr, nullptr,
                           ec->bn.get()) != 1)
        return Error::CryptoFailure;
    auto pub = ec->encode_point(q.get());
    if (!pub) return pub.error();
    return KeyPair{bn_to_padded(d.get(), ec->order_bytes), std::move(*pub)};
}

inline Result<Bytes> ec_shared(Curve c, ConstSpan priv, ConstSpan peer_pub) {
    auto ec = EcContext::make(c);
    if (!ec) return ec.error();
    auto peer = ec->decode_point(peer_pub);
    if (!peer) return peer.error();
    Bn d(BN_bin2bn(priv.data(), static_cast<int>(priv.size()), nullptr));
    if (!d || BN_is_zero(d.get()) || BN_cmp(d.get(), ec->order) >= 0)
        return Error::CryptoFailure;
    Point s(EC_POINT_new(ec->group.get()));
    if (!s || EC_POINT_mul(ec->group.get(), s.get(), nullptr, peer->get(), d.get(),
                           ec->bn.get()) != 1)
        return Error::CryptoFailure;
    if (EC_POINT_is_at_infinity(ec->group.get(), s.get())) return Error::InvalidPoint;
    Bn x(BN_new());
    if (EC_POINT_get_affine_coordinates(ec->group.get(), s.get(), x.get(), nullptr,
                                        ec->bn.get()) != 1)
        return Error::CryptoFailure;
    return bn_to_padded(x.get(), ec->field_bytes);
}

// Digest bytes -> integer per ECDSA: leftmost order-bits of the digest.
inline Bn bits2int(ConstSpan digest, const BIGNUM* order) {
    Bn z(BN_bin2bn(digest.data(), static_cast<int>(digest.size()), nullptr));
    const int excess = static_cast<int>(digest.size()) * 8 - BN_num_bits(order);
    if (excess > 0) BN_rshift(z.get(), z.get(), excess);
    return z;
}

// RFC 6979 deterministic nonce generator for ECDSA.
class Rfc6979 {
public:
    Rfc6979(HashAlg h, const BIGNUM* order, ConstSpan priv_padded, ConstSpan digest)
        : hash_(h), order_(order), qlen_(static_cast<std::size_t>(BN_num_bytes(order))) {
        const std::size_t hlen = hash_length(h);
        v_.assign(hlen, 0x01);
        k_.assign(hlen, 0x00);
        Bn z = bits2int(digest, order);
        Bn zmod(BN_new());
        BnCtx bn_ctx(BN_CTX_new());
        BN_nnmod(zmod.get(), z.get(), order, bn_ctx.get());
        const Bytes h1 = bn_to_padded(zmod.get(), qlen_);

        Bytes seed = concat(v_, Bytes{0x00});
        append(seed, priv_padded);
        append(seed, h1);
        k_ = hmac(hash_, k_, seed);
        v_ = hmac(hash_, k_, v_);
        seed = concat(v_, Bytes{0x01});
        append(seed, priv_padded);
        append(seed, h1);
        k_ = hmac(hash_, k_, seed);
        v_ = hmac(hash_, k_, v_);
    }

    Bn next() {
        for (;;) {
            Bytes t;
            while (t.size() < qlen_) {
                v_ = hmac(hash_, k_, v_);
                append(t, v_);
            }
            Bn k = bits2int(ConstSpan(t.data(), qlen_), order_);
            if (!BN_is_zero(k.get()) && BN_cmp(k.get(), order_) < 0) return k;
            bump();
        }
    }

    void bump() {
        k_ = hmac(hash_, k_, concat(v_, Bytes{0x00}));
        v_ = hmac(hash_, k_, v_);
    }

private:
    HashAlg hash_;
    const BIGNUM* order_;
    std::size_t qlen_;
    Bytes v_;
    Bytes k_;
};

inline Result<Bytes> ecdsa_sign(Curve c, HashAlg h, ConstSpan priv, ConstSpan payload) {
    auto ec = EcContext::make(c);
    if (!ec) return ec.error();
    if (priv.size() != ec->order_bytes) return Error::CryptoFailure;
    Bn d(BN_bin2bn(priv.data(), static_cast<int>(priv.size()), nullptr));
    if (!d || BN_is_zero(d.get()) || BN_cmp(d.get(), ec->order) >= 0)
        return Error::CryptoFailure;

    const Bytes digest = sha(h, payload);
    Bn z = bits2int(digest, ec->order);
    Rfc6979 nonce(h, ec->order, bn_to_padded(d.get(), ec->order_bytes), digest);

    Bn r(BN_new()), s(BN_new()), tmp(BN_new());
    Point rp(EC_POINT_new(ec->group.get()));
    for (;;) {
        Bn k = nonce.next();
        if (EC_POINT_mul(ec->group.get(), rp.get(), k.get(), nullptr, nullptr,
                         ec->bn.get()) != 1)
            return Error::CryptoFailure;
        Bn rx(BN_new());
        if (EC_POINT_get_affine_coordinates(ec->group.get(), rp.get(), rx.get(),
                                            nullptr, ec->bn.get()) != 1)
            return Error::CryptoFailure;
        BN_nnmod(r.get(), rx.get(), ec->order, ec->bn.get());
        if (BN_is_zero(r.get())) { nonce.bump(); continue; }

        // s = k^-1 (z + r d) mod n
        Bn kinv(BN_mod_inverse(nullptr, k.get(), ec->order, ec->bn.get()));
        if (!kinv) return Error::CryptoFailure;
        BN_mod_mul(tmp.get(), r.get(), d.get(), ec->order, ec->bn.get());
        BN_mod_add(tmp.get(), tmp.get(), z.get(), ec->order, ec->bn.get());
        BN_mod_mul(s.get(), kinv.get(), tmp.get(), ec->order, ec->bn.get());
        if (BN_is_zero(s.get())) { nonce.bump(); continue; }
        break;
    }

    Bytes sig = bn_to_padded(r.get(), ec->order_bytes);
    append(sig, bn_to_padded(s.get(), ec->order_bytes));
    return sig;
}

inline bool ecdsa_verify(Curve c, HashAlg h, ConstSpan pub, ConstSpan payload,
                         ConstSpan sig) {
    auto ec = EcContext::make(c);
    if (!ec) return false;
    if (sig.size() != 2 * ec->order_bytes) return false;
    Bn r(BN_bin2bn(sig.data(), static_cast<int>(ec->order_bytes), nullptr));
    Bn s(BN_bin2bn(sig.data() + ec->order_bytes, static_cast<int>(ec->order_bytes), nullptr));
    if (!r || !s || BN_is_zero(r.get()) || BN_is_zero(s.get()) ||
        BN_cmp(r.get(), ec->order) >= 0 || BN_cmp(s.get(), ec->order) >= 0)
        return false;
    auto q = ec->decode_point(pub);
    if (!q) return false;

    const Bytes digest = sha(h, payload);
    Bn z = bits2int(digest, ec->order);
    Bn w(BN_mod_inverse(nullptr, s.get(), ec->order, ec->bn.get()));
    if (!w) return false;
    Bn u1(BN_new()), u2(BN_new());
    BN_mod_mul(u1.get(), z.get(), w.get(), ec->order, ec->bn.get());
    BN_mod_mul(u2.get(), r.get(), w.get(), ec->order, ec->bn.get());
    Point p(EC_POINT_new(ec->group.get()));
    if (EC_POINT_mul(ec->group.get(), p.get(), u1.get(), q->get(), u2.get(),
                     ec->bn.get()) != 1)
        return false;
    if (EC_POINT_is_at_infinity(ec->group.get(), p.get())) return false;
    Bn px(BN_new()), v(BN_new());
    if (EC_POINT_get_affine_coordinates(ec->group.get(), p.get(), px.get(), nullptr,
                                        ec->bn.get()) != 1)
        return false;
    BN_nnmod(v.get(), px.get(), ec->order, ec->bn.get());
    return BN_cmp(v.get(), r.get()) == 0;
}

inline Result<Bytes> ed25519_public(ConstSpan priv) {
    if (priv.size() != 32) return Error::CryptoFailure;
    Pkey pkey(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                           priv.data(), priv.size()));
    if (!pkey) return Error::CryptoFailure;
    Bytes pub(32);
    std::size_t len = pub.size();
    if (EVP_PKEY_get_raw_public_key(pkey.get(), pub.data(), &len) != 1 || len != 32)
        return Error::CryptoFailure;
    return pub;
}

inline Result<Bytes> ed25519_sign(ConstSpan priv, ConstSpan payload) {
    if (priv.size() != 32) return Error::CryptoFailure;
    Pkey pkey(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                           priv.data(), priv.size()));
    MdCtx ctx(EVP_MD_CTX_new());
    if (!pkey || !ctx) return Error::CryptoFailure;
    if (EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1)
        return Error::CryptoFailure;
    Bytes sig(64);
    std::size_t len = sig.size();
    if (EVP_DigestSign(ctx.get(), sig.data(), &len, detail::nonempty(payload),
                       payload.size()) != 1 || len != 64)
        return Error::CryptoFailure;
    return sig;
}

inline bool ed25519_verify(ConstSpan pub, ConstSpan payload, ConstSpan sig) {
    if (pub.size() != 32 || sig.size() != 64) return false;
    Pkey pkey(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr,
                                          pub.data(), pub.size()));
    MdCtx ctx(EVP_MD_CTX_new());
    if (!pkey || !ctx) return false;
    if (EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1)
        return false;
    return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(),
                            detail::nonempty(payload), payload.size()) == 1;
}

}  // namespace detail

inline Result<KeyPair> gen_keypair(Curve c, Rng& rng) {
    switch (c) {
        case Curve::X25519: {
            Bytes priv = rng.bytes(32);
            auto pub = detail::x25519_public(priv);
            if (!pub) return pub.error();
            return KeyPair{std::move(priv), std::move(*pub)};
        }
        case Curve::P256:
        case Curve::P384:
            return detail::ec_gen_keypair(c, rng);
        case Curve::X448:
            return Error::UnsupportedSuite;
    }
    return Error::CryptoFailure;
}

// Diffie-Hellman shared secret. Low-order inputs, the identity element,
// off-curve points and malformed encodings all come back as InvalidPoint.
inline Result<Bytes> ecdh(Curve c, ConstSpan priv, ConstSpan peer_pub) {
    switch (c) {
        case Curve::X25519: return detail::x25519_shared(priv, peer_pub);
        case Curve::P256:
        case Curve::P384: {
            if (peer_pub.size() != curve_public_length(c)) return Error::InvalidPoint;
            return detail::ec_shared(c, priv, peer_pub);
        }
        case Curve::X448: return Error::UnsupportedSuite;
    }
    return Error::CryptoFailure;
}

inline Result<KeyPair> gen_signature_keypair(SigAlg alg, Rng& rng) {
    switch (alg) {
        case SigAlg::EdDSA: {
            Bytes priv = rng.bytes(32);
            auto pub = detail::ed25519_public(priv);
            if (!pub) return pub.error();
            return KeyPair{std::move(priv), std::move(*pub)};
        }
        case SigAlg::ES256: return detail::ec_gen_keypair(Curve::P256, rng);
        case SigAlg::ES384: return detail::ec_gen_keypair(Curve::P384, rng);
    }
    return Error::CryptoFailure;
}

inline Result<Bytes> sign(SigAlg alg, ConstSpan priv, ConstSpan payload) {
    switch (alg) {
        case SigAlg::EdDSA: return detail::ed25519_sign(priv, payload);
        case SigAlg::ES256:
            return detail::ecdsa_sign(Curve::P256, HashAlg::Sha256, priv, payload);
        case SigAlg::ES384:
            return detail::ecdsa_sign(Curve::P384, HashAlg::Sha384, priv, payload);
    }
    return Error::CryptoFailure;
}

inline bool verify(SigAlg alg, ConstSpan pub, ConstSpan payload, ConstSpan sig) {
    switch (alg) {
        case SigAlg::EdDSA: return detail::ed25519_verify(pub, payload, sig);
        case SigAlg::ES256:
            return detail::ecdsa_verify(Curve::P256, HashAlg::Sha256, pub, payload, sig);
        case SigAlg::ES384:
            return detail::ecdsa_verify(Curve::P384, HashAlg::Sha384, pub, payload, sig);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Suite-bound facade over the primitives above.

class PrimitiveProvider {
public:
    static Result<PrimitiveProvider> make(const CipherSuiteProfile& suite) {
        if (!suite.implemented) return Error::UnsupportedSuite;
        return PrimitiveProvider(suite);
    }

    const CipherSuiteProfile& suite() const { return suite_; }

    Bytes hash(ConstSpan data) const { return sha(suite_.hash, data); }
    std::size_t hash_len() const { return hash_length(suite_.hash); }

    Result<Bytes> aead_seal(ConstSpan key, ConstSpan iv, ConstSpan aad,
                            ConstSpan pt) const {
        return edhoc::aead_seal(suite_.aead, key, iv, aad, pt);
    }
    Result<Bytes> aead_open(ConstSpan key, ConstSpan iv, ConstSpan aad,
                            ConstSpan ct) const {
        return edhoc::aead_open(suite_.aead, key, iv, aad, ct);
    }

    Result<Bytes> ecdh(ConstSpan priv, ConstSpan pub) const {
        return edhoc::ecdh(suite_.ecdh_curve, priv, pub);
    }
    Result<KeyPair> gen_ephemeral(Rng& rng) const {
        return gen_keypair(suite_.ecdh_curve, rng);
    }
    Result<KeyPair> gen_static_dh_keypair(Rng& rng) const {
        return gen_keypair(suite_.ecdh_curve, rng);
    }
    Result<KeyPair> gen_signature_keypair(Rng& rng) const {
        return edhoc::gen_signature_keypair(suite_.signature, rng);
    }

    Result<Bytes> sign(ConstSpan priv, ConstSpan payload) const {
        return edhoc::sign(suite_.signature, priv, payload);
    }
    bool verify(ConstSpan pub, ConstSpan payload, ConstSpan sig) const {
        return edhoc::verify(suite_.signature, pub, payload, sig);
    }

private:
    explicit PrimitiveProvider(const CipherSuiteProfile& suite) : suite_(suite) {}
    CipherSuiteProfile suite_;
};

}  // namespace edhoc
