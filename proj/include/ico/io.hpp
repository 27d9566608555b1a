// Copyright 2026 The ico-netsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Serialization helpers: locale-free shortest round-trip numbers, exact
 * pi-fraction angles, protocol config JSON and the run manifest.
 *
 * Config schema:
 *   {"n_parties": int, "theta": number | "3pi/4",
 *    "alphas": [number], "shared_phase": "1" | "i" | {"re": x, "im": y}}
 */

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"

#include "ico/protocol.hpp"

namespace ico::io {

inline constexpr const char *kToolVersion = "0.1.0";

/// CSV cell, quoted when it holds a comma, quote or newline.
inline std::string csv_field(const std::string &v) {
    if (v.find_first_of(",\"\n") == std::string::npos) {
        return v;
    }
    std::string out = "\"";
    for (char c : v) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + '"';
}

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
    if (v == 0.0) {
        return "0";  // folds -0
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::optional<double> parse_number(std::string_view s) {
    if (s.empty()) {
        return std::nullopt;
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

inline std::optional<long long> parse_integer(std::string_view s) {
    if (s.empty()) {
        return std::nullopt;
    }
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

} // namespace detail

/// Radians from "0.785", "pi", "-pi/2", "3pi/4", "3*pi/4". Forms with pi
/// evaluate as (k * pi) / d.
inline double parse_angle(const std::string &text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s.push_back(c);
        }
    }
    const auto pi_at = s.find("pi");
    if (pi_at == std::string::npos) {
        if (auto v = detail::parse_number(s)) {
            return *v;
        }
        throw std::invalid_argument("theta: cannot parse angle '" + text + "'");
    }
    std::string head = s.substr(0, pi_at);
    const std::string tail = s.substr(pi_at + 2);
    if (!head.empty() && head.back() == '*') {
        head.pop_back();
    }
    long long k = 1;
    if (head == "-") {
        k = -1;
    } else if (!head.empty() && head != "+") {
        auto v = detail::parse_integer(head.front() == '+' ? head.substr(1) : head);
        if (!v) {
            throw std::invalid_argument("theta: cannot parse angle '" + text + "'");
        }
        k = *v;
    }
    long long d = 1;
    if (!tail.empty()) {
        auto v = tail.front() == '/' ? detail::parse_integer(tail.substr(1)) : std::nullopt;
        if (!v || *v <= 0) {
            throw std::invalid_argument("theta: cannot parse angle '" + text + "'");
        }
        d = *v;
    }
    return static_cast<double>(k) * std::numbers::pi / static_cast<double>(d);
}

/// Comma-separated numbers ("2,3,4").
inline std::vector<double> parse_number_list(const std::string &text, const std::string &field) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                                 : comma - start);
        auto v = detail::parse_number(item);
        if (!v) {
            throw std::invalid_argument(field + ": cannot parse '" + item + "'");
        }
        out.push_back(*v);
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

inline ProtocolConfig config_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw std::invalid_argument("config: top level must be an object");
    }
    for (const auto &[key, _] : j.items()) {
        if (key != "n_parties" && key != "theta" && key != "alphas" && key != "shared_phase") {
            throw std::invalid_argument(key + ": unknown field");
        }
    }
    ProtocolConfig cfg;
    if (!j.contains("n_parties") || !j["n_parties"].is_number_integer() ||
        j["n_parties"].get<long long>() < 0) {
        throw std::invalid_argument("n_parties: required non-negative integer");
    }
    cfg.n_parties = j["n_parties"].get<std::size_t>();

    if (!j.contains("theta")) {
        throw std::invalid_argument("theta: required");
    }
    if (j["theta"].is_number()) {
        cfg.theta = j["theta"].get<double>();
    } else if (j["theta"].is_string()) {
        cfg.theta = parse_angle(j["theta"].get<std::string>());
    } else {
        throw std::invalid_argument("theta: must be a number or an angle string");
    }

    if (!j.contains("alphas") || !j["alphas"].is_array()) {
        throw std::invalid_argument("alphas: required array of numbers");
    }
    for (const auto &a : j["alphas"]) {
        if (!a.is_number()) {
            throw std::invalid_argument("alphas: every entry must be a number");
        }
        cfg.alphas.push_back(a.get<double>());
    }

    if (j.contains("shared_phase")) {
        const auto &p = j["shared_phase"];
        if (p.is_string() && p.get<std::string>() == "1") {
            cfg.shared_phase = 1.0;
        } else if (p.is_string() && p.get<std::string>() == "i") {
            cfg.shared_phase = Complex{0.0, 1.0};
        } else if (p.is_object() && p.contains("re") && p.contains("im") && p["re"].is_number() &&
                   p["im"].is_number() && p.size() == 2) {
            cfg.shared_phase = Complex{p["re"].get<double>(), p["im"].get<double>()};
        } else {
            throw std::invalid_argument("shared_phase: must be \"1\", \"i\" or {\"re\", \"im\"}");
        }
    }
    return cfg;
}

inline ProtocolConfig parse_config(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(std::string("config: invalid JSON (") + e.what() + ")");
    }
    return config_from_json(j);
}

/// Sorted keys, no whitespace.
inline std::string canonical_json(const nlohmann::json &j) { return j.dump(); }

inline std::string sha256_hex(const std::string &data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest failed");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::string tool_version = kToolVersion;
    std::optional<std::uint64_t> seed;

    static RunManifest make(std::string command, const nlohmann::json &config,
                            std::optional<std::uint64_t> seed = std::nullopt) {
        return {std::move(command), sha256_hex(canonical_json(config)), kToolVersion, seed};
    }

    /// '#'-prefixed header lines for CSV output.
    void write_comment_header(std::ostream &os) const {
        os << "# command: " << command << '\n';
        os << "# config_hash: " << config_hash << '\n';
        os << "# tool_version: " << tool_version << '\n';
        if (seed) {
            os << "# seed: " << *seed << '\n';
        }
    }

    [[nodiscard]] nlohmann::json to_json() const {
        nlohmann::json j{{"command", command}, {"config_hash", config_hash}, {"tool_version", tool_version}};
        if (seed) {
            j["seed"] = *seed;
        }
        return j;
    }
};

} // namespace ico::io
