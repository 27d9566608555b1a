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
 * N-party switch protocol: a GHZ control register shared by the parties,
 * one quantum switch per party ordering R_y(2 theta) and X on that party's
 * target qubit, and a +/- measurement of every control.
 *
 * Register layout for N parties: controls a, b, ... (qubits 0..N-1), then
 * targets A, B, ... (qubits N..2N-1).
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ico/qcore.hpp"

namespace ico {

/// 20 qubits, about one million amplitudes.
inline constexpr std::size_t kDefaultMaxQubits = 20;

struct ProtocolConfig {
    std::size_t n_parties = 2;
    double theta = 0.0;              ///< R_y(2 theta) is the first switched gate
    std::vector<double> alphas;      ///< target I starts in sqrt(a)|0> + sqrt(1-a)|1>
    Complex shared_phase{1.0, 0.0};  ///< weight of the |1...1> control branch
};

inline void validate(const ProtocolConfig &cfg, std::size_t max_qubits = kDefaultMaxQubits) {
    if (cfg.n_parties < 2) {
        throw std::invalid_argument("n_parties: must be at least 2");
    }
    if (2 * cfg.n_parties > max_qubits) {
        throw std::invalid_argument("n_parties: " + std::to_string(cfg.n_parties) +
                                    " parties need " + std::to_string(2 * cfg.n_parties) +
                                    " qubits, above the cap of " + std::to_string(max_qubits));
    }
    if (!std::isfinite(cfg.theta)) {
        throw std::invalid_argument("theta: must be finite");
    }
    if (cfg.alphas.size() != cfg.n_parties) {
        throw std::invalid_argument("alphas: expected " + std::to_string(cfg.n_parties) +
                                    " entries, got " + std::to_string(cfg.alphas.size()));
    }
    for (double a : cfg.alphas) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw std::invalid_argument("alphas: every entry must lie in [0, 1]");
        }
    }
    if (!detail::finite(cfg.shared_phase) || std::abs(std::abs(cfg.shared_phase) - 1.0) > kExactTol) {
        throw std::invalid_argument("shared_phase: must have modulus 1");
    }
}

inline std::string control_label(std::size_t party) {
    return party < 26 ? std::string(1, static_cast<char>('a' + party)) : "c" + std::to_string(party);
}

inline std::string target_label(std::size_t party) {
    return party < 26 ? std::string(1, static_cast<char>('A' + party)) : "T" + std::to_string(party);
}

inline std::vector<std::string> target_labels(std::size_t n_parties) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n_parties; ++i) {
        out.push_back(target_label(i));
    }
    return out;
}

/// sqrt(alpha)|0> + sqrt(1 - alpha)|1>.
inline StateVector target_state(double alpha, std::string label = "q0") {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("target_state: alpha must lie in [0, 1]");
    }
    return StateVector({std::sqrt(alpha), std::sqrt(1.0 - alpha)}, {std::move(label)});
}

inline StateVector target_product(const std::vector<double> &alphas) {
    std::vector<StateVector> parts;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        parts.push_back(target_state(alphas[i], target_label(i)));
    }
    return tensor(parts);
}

/// GHZ control register (x) product of target states.
inline StateVector build_initial(const ProtocolConfig &cfg,
                                 std::size_t max_qubits = kDefaultMaxQubits) {
    validate(cfg, max_qubits);
    std::vector<std::string> controls;
    for (std::size_t i = 0; i < cfg.n_parties; ++i) {
        controls.push_back(control_label(i));
    }
    return tensor({states::ghz(cfg.n_parties, cfg.shared_phase, controls), target_product(cfg.alphas)});
}

/// The gate pair (u1, u2) one party's switch orders.
struct SwitchGates {
    Unitary first;   ///< applied first when the control is |0>
    Unitary second;
};

inline SwitchGates protocol_gates(double theta) { return {gates::ry(2.0 * theta), gates::x()}; }

/// Runs the generic switch network: `initial` must follow the controls-then-
/// targets layout with one (u1, u2) pair per party.
inline std::vector<OutcomeRecord> run_switch_network(const StateVector &initial,
                                                     const std::vector<SwitchGates> &per_party) {
    const std::size_t n = per_party.size();
    if (initial.num_qubits() != 2 * n) {
        throw std::invalid_argument("run_switch_network: register must hold 2 qubits per party");
    }
    StateVector state = initial;
    for (std::size_t i = 0; i < n; ++i) {
        state = apply(state, switch_unitary(per_party[i].first, per_party[i].second), {i, n + i});
    }
    std::vector<std::size_t> controls(n);
    for (std::size_t i = 0; i < n; ++i) {
        controls[i] = i;
    }
    return measure_controls(state, controls, BasisKind::PlusMinus);
}

/// Full simulation: 2^N outcome records in lexicographic +/- order.
inline std::vector<OutcomeRecord> run(const ProtocolConfig &cfg,
                                      std::size_t max_qubits = kDefaultMaxQubits) {
    validate(cfg, max_qubits);
    const std::vector<SwitchGates> per_party(cfg.n_parties, protocol_gates(cfg.theta));
    return run_switch_network(build_initial(cfg, max_qubits), per_party);
}

struct BranchStates {
    std::optional<StateVector> even;
    std::optional<StateVector> odd;
    double even_prob = 0.0;
    double odd_prob = 0.0;
};

/// Closed form: even/odd = (O1 ± phase O2)|psi>/sqrt(2), renormalized, with
/// O1 = (X R)^{(x)N} and O2 = (R X)^{(x)N}.
inline BranchStates branch_states(const ProtocolConfig &cfg,
                                  std::size_t max_qubits = kDefaultMaxQubits) {
    validate(cfg, max_qubits);
    const Matrix r = gates::ry(2.0 * cfg.theta).matrix();
    const Matrix xm = gates::x().matrix();
    const Matrix first = xm * r;
    const Matrix second = r * xm;

    std::vector<Complex> o1{1.0};
    std::vector<Complex> o2{1.0};
    for (double alpha : cfg.alphas) {
        const std::array<Complex, 2> psi{std::sqrt(alpha), std::sqrt(1.0 - alpha)};
        std::vector<Complex> n1(o1.size() * 2);
        std::vector<Complex> n2(o2.size() * 2);
        for (std::size_t i = 0; i < o1.size(); ++i) {
            for (std::size_t b = 0; b < 2; ++b) {
                n1[2 * i + b] = o1[i] * (first(b, 0) * psi[0] + first(b, 1) * psi[1]);
                n2[2 * i + b] = o2[i] * (second(b, 0) * psi[0] + second(b, 1) * psi[1]);
            }
        }
        o1 = std::move(n1);
        o2 = std::move(n2);
    }

    std::vector<Complex> even(o1.size());
    std::vector<Complex> odd(o1.size());
    double even_sq = 0.0;
    double odd_sq = 0.0;
    for (std::size_t i = 0; i < o1.size(); ++i) {
        even[i] = (o1[i] + cfg.shared_phase * o2[i]) / std::numbers::sqrt2;
        odd[i] = (o1[i] - cfg.shared_phase * o2[i]) / std::numbers::sqrt2;
        even_sq += std::norm(even[i]);
        odd_sq += std::norm(odd[i]);
    }

    BranchStates out;
    out.even_prob = even_sq / 2.0;
    out.odd_prob = odd_sq / 2.0;
    const auto labels = target_labels(cfg.n_parties);
    if (out.even_prob >= kNullProbability) {
        out.even.emplace(std::move(even), labels);
    }
    if (out.odd_prob >= kNullProbability) {
        out.odd.emplace(std::move(odd), labels);
    }
    return out;
}

/// Literal evaluation of the explicit two- and three-party amplitude
/// formulas. `*_raw` keep the unnormalized prefactors; `even`/`odd` are the
/// renormalized states (nullopt when the raw vector vanishes).
struct ExplicitBranches {
    std::vector<double> even_raw;
    std::vector<double> odd_raw;
    std::optional<StateVector> even;
    std::optional<StateVector> odd;
};

namespace detail {

inline std::optional<StateVector> normalized_or_null(const std::vector<double> &raw,
                                                     std::vector<std::string> labels) {
    double sq = 0.0;
    for (double v : raw) {
        sq += v * v;
    }
    // Raw vectors carry norm^2 = 2 p, so the null threshold doubles.
    if (sq < 2.0 * kNullProbability) {
        return std::nullopt;
    }
    return StateVector(std::vector<Complex>(raw.begin(), raw.end()), std::move(labels));
}

} // namespace detail

inline ExplicitBranches expected_two_party(double theta, double alpha_a, double alpha_b) {
    for (double a : {alpha_a, alpha_b}) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw std::invalid_argument("expected_two_party: alpha must lie in [0, 1]");
        }
    }
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = std::sin(theta) * std::sin(theta);
    const double p00 = std::sqrt((1 - alpha_a) * (1 - alpha_b));
    const double p01 = std::sqrt((1 - alpha_a) * alpha_b);
    const double p10 = std::sqrt(alpha_a * (1 - alpha_b));
    const double p11 = std::sqrt(alpha_a * alpha_b);

    ExplicitBranches out;
    const double r2 = std::numbers::sqrt2;
    out.even_raw = {r2 * (p00 * c2 + p11 * s2), r2 * (p01 * c2 - p10 * s2),
                    r2 * (p10 * c2 - p01 * s2), r2 * (p11 * c2 + p00 * s2)};

    const double pre = std::sin(2 * theta) / r2;
    const double sym = p10 + p01;
    const double anti = p11 - p00;
    out.odd_raw = {pre * sym, pre * anti, pre * anti, -pre * sym};

    out.even = detail::normalized_or_null(out.even_raw, target_labels(2));
    out.odd = detail::normalized_or_null(out.odd_raw, target_labels(2));
    return out;
}

inline ExplicitBranches expected_three_party(double theta, double alpha_a, double alpha_b,
                                             double alpha_c) {
    for (double a : {alpha_a, alpha_b, alpha_c}) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw std::invalid_argument("expected_three_party: alpha must lie in [0, 1]");
        }
    }
    const double a1 = std::sqrt(alpha_a * alpha_b * alpha_c);
    const double a2 = std::sqrt(alpha_a * alpha_b * (1 - alpha_c));
    const double a3 = std::sqrt(alpha_a * (1 - alpha_b) * alpha_c);
    const double a4 = std::sqrt(alpha_a * (1 - alpha_b) * (1 - alpha_c));
    const double a5 = std::sqrt((1 - alpha_a) * alpha_b * alpha_c);
    const double a6 = std::sqrt((1 - alpha_a) * alpha_b * (1 - alpha_c));
    const double a7 = std::sqrt((1 - alpha_a) * (1 - alpha_b) * alpha_c);
    const double a8 = std::sqrt((1 - alpha_a) * (1 - alpha_b) * (1 - alpha_c));

    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double s2t = std::sin(2 * theta);
    const double t = s * s2t;      // sin(theta) sin(2 theta)
    const double cube = 2 * c * c * c;
    const double u = c * s2t;      // cos(theta) sin(2 theta)
    const double scube = 2 * s * s * s;
    const double k = 1.0 / std::numbers::sqrt2;

    ExplicitBranches out;
    out.even_raw = {
        k * (a2 * t + a3 * t + a5 * t + a8 * cube),
        k * (a1 * t - a4 * t - a6 * t + a7 * cube),
        k * (a1 * t - a4 * t + a6 * cube - a7 * t),
        -k * (a2 * t + a3 * t - a5 * cube - a8 * t),
        k * (a1 * t + a4 * cube - a6 * t - a7 * t),
        -k * (a2 * t - a3 * cube + a5 * t - a8 * t),
        k * (a2 * cube - a3 * t - a5 * t + a8 * t),
        k * (a1 * cube + a4 * t + a6 * t + a7 * t),
    };
    out.odd_raw = {
        k * (a1 * scube + a4 * u + a6 * u + a7 * u),
        -k * (a2 * scube - a3 * u - a5 * u + a8 * u),
        k * (a2 * u - a3 * scube + a5 * u - a8 * u),
        k * (a1 * u - a6 * u + a4 * scube - a7 * u),
        k * (a2 * u + a3 * u - a5 * scube - a8 * u),
        k * (a1 * u - a4 * u + a6 * scube - a7 * u),
        k * (a1 * u - a4 * u - a6 * u + a7 * scube),
        -k * (a2 * u + a3 * u + a5 * u + a8 * scube),
    };
    out.even = detail::normalized_or_null(out.even_raw, target_labels(3));
    out.odd = detail::normalized_or_null(out.odd_raw, target_labels(3));
    return out;
}

} // namespace ico
