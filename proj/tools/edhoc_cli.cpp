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
// The edhoc command line: loopback handshakes, the attack-scenario runner,
// regression vectors, message-size reporting, credential generation and a
// two-process UDP demo (one encoded message per datagram, no framing).

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "edhoc/edhoc.hpp"
#include "edhoc/json_io.hpp"
#include "edhoc/vectors.hpp"

using namespace edhoc;

namespace {

std::string fingerprint(ConstSpan key) {
    return to_hex(ConstSpan(key.data(), std::min<std::size_t>(8, key.size())));
}

Bytes seed_or(const std::string& hex_or_text, const char* fallback_tag) {
    if (hex_or_text.empty()) return to_bytes(std::string(fallback_tag));
    if (auto b = from_hex(hex_or_text)) return *b;
    return to_bytes(hex_or_text);
}

struct DemoPeers {
    Credential initiator;
    Credential responder;
};

Result<DemoPeers> make_demo_peers(int method, const CipherSuiteProfile& suite,
                                  const Bytes& seed) {
    auto kinds = method_kinds(method);
    if (!kinds) return kinds.error();
    DeterministicRng rng_i(concat(seed, to_bytes(std::string("/cred-i"))));
    DeterministicRng rng_r(concat(seed, to_bytes(std::string("/cred-r"))));
    auto cred_i = kinds->initiator_kind == AuthKind::Signature
                      ? make_signature_credential(suite, to_bytes(std::string("I")), rng_i)
                      : make_static_dh_credential(suite, to_bytes(std::string("I")), rng_i);
    auto cred_r = kinds->responder_kind == AuthKind::Signature
                      ? make_signature_credential(suite, to_bytes(std::string("R")), rng_r)
                      : make_static_dh_credential(suite, to_bytes(std::string("R")), rng_r);
    if (!cred_i || !cred_r) return Error::CryptoFailure;
    return DemoPeers{std::move(*cred_i), std::move(*cred_r)};
}

// ---- handshake -----------------------------------------------------------

int cmd_handshake(int method, int suite_id, bool msg4, const std::string& seed_hex) {
    auto suite = lookup_suite(suite_id);
    if (!suite || !suite->implemented) {
        std::cerr << "error: suite " << suite_id << " is not runnable\n";
        return 1;
    }
    const Bytes seed = seed_or(seed_hex, "edhoc-demo");
    auto peers = make_demo_peers(method, *suite, seed);
    if (!peers) {
        std::cerr << "error: " << error_name(peers.error()) << "\n";
        return 1;
    }

    SessionConfig ci;
    ci.role = Role::Initiator;
    ci.method = method;
    ci.suites = {suite_id};
    ci.own_credential = peers->initiator;
    ci.trust = TrustStore(peers->initiator, {peers->responder.public_part()});
    ci.rng_seed = concat(seed, to_bytes(std::string("/i")));
    ci.require_message_4 = msg4;
    SessionConfig cr;
    cr.role = Role::Responder;
    cr.method = method;
    cr.suites = {suite_id};
    cr.own_credential = peers->responder;
    cr.trust = TrustStore(peers->responder, {peers->initiator.public_part()});
    cr.rng_seed = concat(seed, to_bytes(std::string("/r")));
    cr.send_message_4 = msg4;

    auto rr = harness::run_handshake(std::move(ci), std::move(cr));
    const auto& oi = rr.outcome.initiator;
    const auto& orr = rr.outcome.responder;
    if (!oi.completed || !orr.completed) {
        std::cerr << "handshake failed: initiator="
                  << (oi.error ? error_name(*oi.error) : "ok") << " responder="
                  << (orr.error ? error_name(*orr.error) : "ok") << "\n";
        return 1;
    }
    std::cout << "method " << method << ", suite " << suite_id << " ("
              << suite->aead_name << ", " << suite->hash_name << ", "
              << suite->ecdh_curve_name << ", " << suite->signature_name << ")\n";
    for (const auto& e : rr.outcome.transcript)
        std::cout << "  message_" << e.step << " (" << harness::direction_name(e.direction)
                  << "): " << e.original.size() << " bytes\n";
    std::cout << "  total: " << rr.outcome.total_bytes << " bytes\n";
    std::cout << "  th_4:        " << fingerprint(oi.session->th_4) << "..\n";
    std::cout << "  prk_out (i): " << fingerprint(oi.session->prk_out) << "..\n";
    std::cout << "  prk_out (r): " << fingerprint(orr.session->prk_out) << "..\n";
    const bool agree = oi.session->prk_out == orr.session->prk_out;
    std::cout << "  agreement:   " << (agree ? "yes" : "NO") << ", key_confirmed (i): "
              << (oi.session->key_confirmed ? "yes" : "no") << "\n";
    return agree ? 0 : 1;
}

// ---- attack ---------------------------------------------------------------

int cmd_attack(const std::string& which, bool as_json) {
    std::vector<std::string> names;
    if (which == "all")
        names = harness::scenario_catalog();
    else
        names.push_back(which);

    Json out = Json::array();
    bool all_held = true;
    for (const auto& name : names) {
        auto verdict = harness::run_scenario(name);
        if (!verdict) {
            std::cerr << "error: " << error_name(verdict.error()) << ": " << name << "\n";
            return 2;
        }
        all_held = all_held && verdict->held;
        if (as_json) {
            out.push_back(verdict_to_json(*verdict));
        } else {
            std::cout << (verdict->held ? "HELD " : "BROKE") << "  " << verdict->name
                      << "\n       defense: " << verdict->expected_defense
                      << "\n       evidence: " << verdict->evidence << "\n";
        }
    }
    if (as_json) {
        Json doc;
        doc["verdicts"] = std::move(out);
        if (which == "all") {
            Json cov = Json::array();
            for (const auto& note : harness::table_coverage())
                cov.push_back(Json{{"vulnerability", note.vulnerability},
                                   {"coverage", note.coverage}});
            doc["coverage"] = std::move(cov);
        }
        std::cout << doc.dump(2) << "\n";
    } else if (which == "all") {
        std::cout << "\nvulnerability coverage:\n";
        for (const auto& note : harness::table_coverage())
            std::cout << "  - " << note.vulnerability << "\n      -> " << note.coverage
                      << "\n";
    }
    return all_held ? 0 : 1;
}

// ---- vectors ---------------------------------------------------------------

int cmd_vectors(int method, int suite_id, const std::string& seed_text) {
    const Bytes seed =
        seed_text.empty() ? to_bytes(std::string(kDefaultVectorSeed)) : to_bytes(seed_text);
    std::vector<int> methods = {0, 1, 2, 3};
    std::vector<int> suites = {0, 2, 3};
    if (method >= 0) methods = {method};
    if (suite_id >= 0) suites = {suite_id};
    auto doc = generate_vectors(seed, methods, suites);
    if (!doc) {
        std::cerr << "error: " << error_name(doc.error()) << "\n";
        return 1;
    }
    std::cout << doc->dump(2) << "\n";
    return 0;
}

// ---- bench-size -------------------------------------------------------------

int cmd_bench_size(bool as_json) {
    Json rows = Json::array();
    if (!as_json)
        std::cout << "method suite  msg1  msg2  msg3  msg4  total3  sig_or_mac_2/3\n";
    for (int suite_id : {0, 2, 3}) {
        for (int method : {0, 1, 2, 3}) {
            auto rep = harness::report_footprint(method, suite_id, true);
            if (!rep) {
                std::cerr << "error: " << error_name(rep.error()) << "\n";
                return 1;
            }
            if (as_json) {
                rows.push_back(footprint_to_json(*rep));
            } else {
                std::printf("%6d %5d %5zu %5zu %5zu %5zu %7zu  %zu/%zu\n", method,
                            suite_id, rep->message_1, rep->message_2, rep->message_3,
                            rep->message_4.value_or(0), rep->total3, rep->sig_or_mac_2,
                            rep->sig_or_mac_3);
            }
        }
    }
    if (as_json) std::cout << rows.dump(2) << "\n";
    return 0;
}

// ---- keygen -----------------------------------------------------------------

int cmd_keygen(int suite_id, const std::string& kind, const std::string& identity,
               const std::string& out_path, const std::string& seed_hex) {
    auto suite = lookup_suite(suite_id);
    if (!suite || !suite->implemented) {
        std::cerr << "error: suite " << suite_id << " is not runnable\n";
        return 1;
    }
    std::unique_ptr<Rng> rng;
    if (seed_hex.empty())
        rng = std::make_unique<SystemRng>();
    else
        rng = std::make_unique<DeterministicRng>(seed_or(seed_hex, ""));
    auto cred = kind == "sig"
                    ? make_signature_credential(*suite, to_bytes(identity), *rng)
                    : make_static_dh_credential(*suite, to_bytes(identity), *rng);
    if (!cred) {
        std::cerr << "error: " << error_name(cred.error()) << "\n";
        return 1;
    }
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 1;
    }
    out << credential_to_json(*cred, true).dump(2) << "\n";
    std::ofstream pub(out_path + ".pub");
    pub << credential_to_json(*cred, false).dump(2) << "\n";
    std::cout << "wrote " << out_path << " (private) and " << out_path
              << ".pub (public part for peers' trust files)\n";
    return 0;
}

// ---- udp --------------------------------------------------------------------

struct UdpEndpoint {
    int fd = -1;
    sockaddr_in peer{};
    bool have_peer = false;

    ~UdpEndpoint() {
        if (fd >= 0) close(fd);
    }

    bool send(ConstSpan data) {
        return sendto(fd, data.data(), data.size(), 0,
                      reinterpret_cast<const sockaddr*>(&peer),
                      sizeof peer) == static_cast<ssize_t>(data.size());
    }

    // One datagram, or empty on timeout/error.
    Bytes recv() {
        Bytes buf(cbor::kMaxMessageSize);
        sockaddr_in from{};
        socklen_t from_len = sizeof from;
        const ssize_t n = recvfrom(fd, buf.data(), buf.size(), 0,
                                   reinterpret_cast<sockaddr*>(&from), &from_len);
        if (n <= 0) return {};
        if (!have_peer) {
            peer = from;
            have_peer = true;
        }
        buf.resize(static_cast<std::size_t>(n));
        return buf;
    }
};

bool parse_addr(const std::string& addr, sockaddr_in& out) {
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos) return false;
    const std::string host = addr.substr(0, colon);
    const int port = std::atoi(addr.c_str() + colon + 1);
    if (port <= 0 || port > 65535) return false;
    std::memset(&out, 0, sizeof out);
    out.sin_family = AF_INET;
    out.sin_port = htons(static_cast<std::uint16_t>(port));
    return inet_pton(AF_INET, host.c_str(), &out.sin_addr) == 1;
}

int cmd_udp(const std::string& role, const std::string& addr, const std::string& cred_path,
            const std::string& trust_path, int method, int suite_id, bool msg4,
            const std::string& expect, const std::string& seed_hex, int timeout_ms) {
    auto own = load_credential_file(cred_path);
    if (!own || !own->private_key.has_value()) {
        std::cerr << "error: cannot load credential (with private key) from " << cred_path
                  << "\n";
        return 1;
    }
    auto trusted = load_trust_file(trust_path);
    if (!trusted) {
        std::cerr << "error: cannot load trust list from " << trust_path << "\n";
        return 1;
    }

    SessionConfig config;
    config.role = role == "initiator" ? Role::Initiator : Role::Responder;
    config.method = method;
    config.suites = {suite_id};
    config.own_credential = *own;
    config.trust = TrustStore(*own, *trusted);
    if (!expect.empty()) config.expected_peer = to_bytes(expect);
    if (!seed_hex.empty()) config.rng_seed = seed_or(seed_hex, "");
    config.require_message_4 = msg4 && config.role == Role::Initiator;
    config.send_message_4 = msg4 && config.role == Role::Responder;
    const Role my_role = config.role;

    auto session = Session::create(std::move(config));
    if (!session) {
        std::cerr << "error: ConfigError\n";
        return 1;
    }

    UdpEndpoint ep;
    ep.fd = socket(AF_INET, SOCK_DGRAM, 0);
    if (ep.fd < 0) {
        std::cerr << "error: socket\n";
        return 1;
    }
    timeval tv{timeout_ms / 1000, static_cast<suseconds_t>((timeout_ms % 1000) * 1000)};
    setsockopt(ep.fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);

    sockaddr_in sa{};
    if (!parse_addr(addr, sa)) {
        std::cerr << "error: bad address " << addr << " (expected HOST:PORT)\n";
        return 1;
    }

    auto fail = [&](const char* what) {
        std::cerr << "abort: " << what << "\n";
        return 1;
    };

    if (my_role == Role::Responder) {
        sockaddr_in bind_sa = sa;
        if (bind(ep.fd, reinterpret_cast<sockaddr*>(&bind_sa), sizeof bind_sa) != 0)
            return fail("bind failed");
        const Bytes m1 = ep.recv();
        if (m1.empty()) return fail("Timeout");
        auto reply = session->handle_message_1(m1);
        if (reply) ep.send(*reply);
        if (session->aborted()) return fail(error_name(*session->abort_reason()));
        if (!reply) return fail("MalformedMessage");
        const Bytes m3 = ep.recv();
        if (m3.empty()) return fail("Timeout");
        auto done = session->handle_message_3(m3);
        if (!done) {
            if (auto err = encode_error(ErrorMessage{1, {}})) ep.send(*err);
            return fail(error_name(done.error()));
        }
        if (done->message_4.has_value()) ep.send(*done->message_4);
        std::cout << "completed method=" << done->session.method
                  << " suite=" << done->session.suite_id
                  << " peer=" << to_string(done->session.peer_identity)
                  << " prk_out=" << fingerprint(done->session.prk_out) << "\n";
        return 0;
    }

    // initiator
    ep.peer = sa;
    ep.have_peer = true;
    auto m1 = session->start();
    if (!m1) return fail("ConfigError");
    if (!ep.send(*m1)) return fail("send failed");
    const Bytes reply = ep.recv();
    if (reply.empty()) return fail("Timeout");
    auto m3 = session->handle_message_2(reply);
    if (!m3) {
        if (session->peer_error().has_value()) {
            std::cerr << "peer error code " << session->peer_error()->code;
            if (session->peer_supported_suites().has_value()) {
                std::cerr << ", responder supports:";
                for (int id : *session->peer_supported_suites()) std::cerr << " " << id;
            }
            std::cerr << "\n";
        }
        return fail(error_name(m3.error()));
    }
    if (!ep.send(*m3)) return fail("send failed");

    Result<CompletedSession> done = Error::Timeout;
    if (msg4) {
        const Bytes m4 = ep.recv();
        if (m4.empty()) return fail("Timeout");
        done = session->handle_message_4(m4);
    } else {
        done = session->complete();
    }
    if (!done) return fail(error_name(done.error()));
    std::cout << "completed method=" << done->method << " suite=" << done->suite_id
              << " peer=" << to_string(done->peer_identity)
              << " prk_out=" << fingerprint(done->prk_out)
              << (done->key_confirmed ? " key_confirmed" : " unconfirmed") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EDHOC authenticated key exchange: handshake, attack harness, vectors"};
    app.require_subcommand(1);

    int method = 0, suite_id = 0;
    bool msg4 = false, as_json = false;
    std::string seed, which = "all", addr, cred_path, trust_path, expect;
    std::string kind = "sig", identity = "peer", out_path = "cred.json";
    int timeout_ms = 5000;

    auto* handshake = app.add_subcommand("handshake", "run one loopback handshake");
    handshake->add_option("--method", method, "authentication method 0..3");
    handshake->add_option("--suite", suite_id, "cipher suite id");
    handshake->add_flag("--msg4", msg4, "request the optional fourth message");
    handshake->add_option("--seed", seed, "deterministic seed (hex or text)");

    auto* attack = app.add_subcommand("attack", "run attack scenarios");
    attack->add_option("scenario", which, "scenario name or 'all'");
    attack->add_flag("--json", as_json, "machine-readable verdicts");

    int vec_method = -1, vec_suite = -1;
    auto* vectors = app.add_subcommand("vectors", "emit deterministic regression vectors");
    vectors->add_option("--method", vec_method, "restrict to one method");
    vectors->add_option("--suite", vec_suite, "restrict to one suite");
    vectors->add_option("--seed", seed, "vector seed (text)");

    auto* bench = app.add_subcommand("bench-size", "report message footprints");
    bench->add_flag("--json", as_json, "machine-readable report");

    auto* keygen = app.add_subcommand("keygen", "generate a credential file");
    keygen->add_option("--suite", suite_id, "cipher suite the key must match");
    keygen->add_option("--kind", kind, "sig | sdh")->check(CLI::IsMember({"sig", "sdh"}));
    keygen->add_option("--identity", identity, "display name");
    keygen->add_option("--out", out_path, "output file (private); .pub written too");
    keygen->add_option("--seed", seed, "deterministic seed (hex or text)");

    std::string udp_role;
    auto* udp = app.add_subcommand("udp", "run one handshake over UDP");
    udp->add_option("--role", udp_role, "initiator | responder")
        ->required()
        ->check(CLI::IsMember({"initiator", "responder"}));
    udp->add_option("--addr", addr, "HOST:PORT (bind for responder, peer for initiator)")
        ->required();
    udp->add_option("--cred", cred_path, "own credential JSON (with private key)")
        ->required();
    udp->add_option("--trust", trust_path, "trust list JSON (array of public credentials)")
        ->required();
    udp->add_option("--method", method, "authentication method 0..3");
    udp->add_option("--suite", suite_id, "cipher suite id");
    udp->add_flag("--msg4", msg4, "send/require the optional fourth message");
    udp->add_option("--expect", expect, "intended peer identity");
    udp->add_option("--seed", seed, "deterministic session seed");
    udp->add_option("--timeout-ms", timeout_ms, "receive timeout (default 5000)");

    CLI11_PARSE(app, argc, argv);

    if (handshake->parsed()) return cmd_handshake(method, suite_id, msg4, seed);
    if (attack->parsed()) return cmd_attack(which, as_json);
    if (vectors->parsed()) return cmd_vectors(vec_method, vec_suite, seed);
    if (bench->parsed()) return cmd_bench_size(as_json);
    if (keygen->parsed()) return cmd_keygen(suite_id, kind, identity, out_path, seed);
    if (udp->parsed())
        return cmd_udp(udp_role, addr, cred_path, trust_path, method, suite_id, msg4,
                       expect, seed, timeout_ms);
    return 0;
}
