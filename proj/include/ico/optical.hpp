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
 * Dual-rail photonic model of the switch protocol. Every photon is a
 * path (x) polarization pair of qubits (H = 0, V = 1); photons are laid out
 * photon-major, so photon k owns path qubit 2k and polarization qubit 2k+1.
 *
 * Jones conventions:
 *   HWP(l) = [[cos 2l, sin 2l], [sin 2l, -cos 2l]]
 *   QWP(l) = R(-l) diag(1, i) R(l)
 *   PBS    = path flip controlled by V (reflection phase +1)
 *   BS     = (1/sqrt 2)[[1, 1], [1, -1]] on the path qubit
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ico/entanglement.hpp"
#include "ico/protocol.hpp"
#include "ico/qcore.hpp"

namespace ico::optical {

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

inline Unitary hwp(double lambda_deg) {
    const double c = std::cos(2.0 * deg_to_rad(lambda_deg));
    const double s = std::sin(2.0 * deg_to_rad(lambda_deg));
    return Unitary(Matrix(2, {c, s, s, -c}));
}

inline Unitary qwp(double lambda_deg) {
    const double c = std::cos(deg_to_rad(lambda_deg));
    const double s = std::sin(deg_to_rad(lambda_deg));
    const Matrix rot(2, {c, s, -s, c});
    const Matrix retard(2, {1.0, 0.0, 0.0, Complex{0.0, 1.0}});
    return Unitary(rot.adjoint() * retard * rot);
}

/// On (path, polarization): |p, H> -> |p, H>, |p, V> -> |1 - p, V>.
inline Unitary pbs() {
    Matrix m(4);
    m(0, 0) = 1.0; // |0H>
    m(3, 1) = 1.0; // |0V> -> |1V>
    m(2, 2) = 1.0; // |1H>
    m(1, 3) = 1.0; // |1V> -> |0V>
    return Unitary(std::move(m));
}

inline Unitary bs() { return gates::h(); }

/// diag(1, e^{i phi}) on the path qubit.
inline Unitary arm_phase(double phi) {
    return Unitary(Matrix(2, {1.0, 0.0, 0.0, std::polar(1.0, phi)}));
}

enum class ElementKind { HWP, QWP, PBS, BS, Phase };

inline const char *to_string(ElementKind k) {
    switch (k) {
    case ElementKind::HWP:
        return "HWP";
    case ElementKind::QWP:
        return "QWP";
    case ElementKind::PBS:
        return "PBS";
    case ElementKind::BS:
        return "BS";
    case ElementKind::Phase:
        return "Phase";
    }
    return "?";
}

/// Which rail a plate sits on.
enum class Rail { Path0, Path1, Both };

struct OpticalElement {
    ElementKind kind = ElementKind::BS;
    double angle = 0.0;     ///< degrees for plates, radians for Phase
    std::size_t photon = 0;
    Rail rail = Rail::Both; ///< plates only
};

/// Two-qubit (path, polarization) unitary of one element.
inline Unitary element_unitary(const OpticalElement &e) {
    const auto on_rail = [&](const Unitary &plate) {
        const Matrix id = Matrix::identity(2);
        Matrix m(4);
        for (std::size_t p = 0; p < 2; ++p) {
            const bool hit = e.rail == Rail::Both || (e.rail == Rail::Path0 && p == 0) ||
                             (e.rail == Rail::Path1 && p == 1);
            const Matrix &blk = hit ? plate.matrix() : id;
            for (std::size_t r = 0; r < 2; ++r) {
                for (std::size_t c = 0; c < 2; ++c) {
                    m(2 * p + r, 2 * p + c) = blk(r, c);
                }
            }
        }
        return Unitary(std::move(m));
    };
    switch (e.kind) {
    case ElementKind::HWP:
        return on_rail(hwp(e.angle));
    case ElementKind::QWP:
        return on_rail(qwp(e.angle));
    case ElementKind::PBS:
        return pbs();
    case ElementKind::BS:
        return kron(bs(), gates::identity());
    case ElementKind::Phase:
        return kron(arm_phase(e.angle), gates::identity());
    }
    throw std::invalid_argument("element_unitary: unknown element");
}

class OpticalCircuit {
  public:
    explicit OpticalCircuit(std::size_t photons) : photons_(photons) {
        if (photons == 0) {
            throw std::invalid_argument("OpticalCircuit: need at least one photon");
        }
    }

    OpticalCircuit &add(OpticalElement e) {
        if (e.photon >= photons_) {
            throw std::invalid_argument("OpticalCircuit: photon index out of range");
        }
        elements_.push_back(e);
        return *this;
    }

    [[nodiscard]] std::size_t photons() const { return photons_; }
    [[nodiscard]] const std::vector<OpticalElement> &elements() const { return elements_; }

    [[nodiscard]] StateVector propagate(StateVector state) const {
        if (state.num_qubits() != 2 * photons_) {
            throw std::invalid_argument("OpticalCircuit: register must hold 2 qubits per photon");
        }
        for (const auto &e : elements_) {
            state = apply(state, element_unitary(e), {2 * e.photon, 2 * e.photon + 1});
        }
        return state;
    }

  private:
    std::size_t photons_;
    std::vector<OpticalElement> elements_;
};

inline std::vector<std::string> photon_labels(std::size_t photons) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < photons; ++k) {
        out.push_back("path" + std::to_string(k));
        out.push_back("pol" + std::to_string(k));
    }
    return out;
}

/// (|H...H> + phase |V...V>)/sqrt(2), every photon on path 0.
inline StateVector polarization_ghz(std::size_t photons, Complex phase = 1.0) {
    std::vector<Complex> amps(std::size_t{1} << (2 * photons));
    std::size_t all_v = 0;
    for (std::size_t k = 0; k < photons; ++k) {
        all_v |= detail::bit_of(2 * photons, 2 * k + 1);
    }
    amps[0] = 1.0;
    amps[all_v] = phase;
    return StateVector(std::move(amps), photon_labels(photons));
}

/// Source stage: one PBS per photon, then HWP(l) on path 0 and HWP(l + 45)
/// on path 1, turning the polarization GHZ into a path GHZ with every
/// photon in cos 2l |H> + sin 2l |V>.
inline void add_blocks(OpticalCircuit &c, const std::vector<double> &lambdas_deg) {
    if (lambdas_deg.size() != c.photons()) {
        throw std::invalid_argument("add_blocks: one angle per photon");
    }
    for (std::size_t k = 0; k < c.photons(); ++k) {
        c.add({ElementKind::PBS, 0.0, k, Rail::Both});
        c.add({ElementKind::HWP, lambdas_deg[k], k, Rail::Path0});
        c.add({ElementKind::HWP, lambdas_deg[k] + 45.0, k, Rail::Path1});
    }
}

/// Switch stage: path 0 sees HWP(0), HWP(theta/2), HWP(45) (X R_y(2 theta));
/// path 1 sees HWP(45), HWP(0), HWP(theta/2) (R_y(2 theta) X). `arm_phase`
/// is applied to path 1 before the BS.
inline void add_switches(OpticalCircuit &c, double theta, double arm_phase_rad = 0.0) {
    const double half = rad_to_deg(theta) / 2.0;
    for (std::size_t k = 0; k < c.photons(); ++k) {
        c.add({ElementKind::HWP, 0.0, k, Rail::Path0});
        c.add({ElementKind::HWP, half, k, Rail::Path0});
        c.add({ElementKind::HWP, 45.0, k, Rail::Path0});
        c.add({ElementKind::HWP, 45.0, k, Rail::Path1});
        c.add({ElementKind::HWP, 0.0, k, Rail::Path1});
        c.add({ElementKind::HWP, half, k, Rail::Path1});
        if (arm_phase_rad != 0.0) {
            c.add({ElementKind::Phase, arm_phase_rad, k, Rail::Both});
        }
        c.add({ElementKind::BS, 0.0, k, Rail::Both});
    }
}

inline OpticalCircuit protocol_circuit(double theta, const std::vector<double> &lambdas_deg,
                                       double arm_phase_rad = 0.0) {
    OpticalCircuit c(lambdas_deg.size());
    add_blocks(c, lambdas_deg);
    add_switches(c, theta, arm_phase_rad);
    return c;
}

/// Photon-major (path, pol) register reordered to paths-then-polarizations.
inline StateVector to_controls_targets(const StateVector &photonic) {
    const std::size_t n = photonic.num_qubits() / 2;
    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < n; ++k) {
        order.push_back(2 * k);
    }
    for (std::size_t k = 0; k < n; ++k) {
        order.push_back(2 * k + 1);
    }
    return permute(photonic, order);
}

/// Path-bit outcomes of an N-photon run; path bit 0 reads as '+'.
inline std::vector<OutcomeRecord> simulate(double theta, const std::vector<double> &lambdas_deg,
                                           double arm_phase_rad = 0.0) {
    const auto c = protocol_circuit(theta, lambdas_deg, arm_phase_rad);
    const StateVector out = c.propagate(polarization_ghz(lambdas_deg.size()));
    std::vector<std::size_t> paths;
    for (std::size_t k = 0; k < lambdas_deg.size(); ++k) {
        paths.push_back(2 * k);
    }
    auto records = measure_controls(out, paths, BasisKind::Computational);
    for (auto &r : records) {
        for (auto &ch : r.outcome) {
            ch = ch == '0' ? '+' : '-';
        }
        if (r.collapsed) {
            r.collapsed = r.collapsed->relabeled(target_labels(lambdas_deg.size()));
        }
    }
    return records;
}

struct CoincidenceOutcome {
    std::string detector_pair;
    std::string outcome;       ///< matching +/- string of the abstract protocol
    double probability = 0.0;
    std::optional<StateVector> polarization_state;
};

inline const char *detector_pair(const std::string &outcome) {
    if (outcome == "++") {
        return "D1-D2";
    }
    if (outcome == "--") {
        return "D3-D4";
    }
    if (outcome == "+-") {
        return "D1-D4";
    }
    if (outcome == "-+") {
        return "D3-D2";
    }
    throw std::invalid_argument("detector_pair: not a two-photon outcome");
}

/// Two-photon interferometer; outcomes in the order D1-D2, D1-D4, D3-D2, D3-D4.
inline std::vector<CoincidenceOutcome> simulate_coincidences(double theta, double lambda1_deg,
                                                     double lambda2_deg, double arm_phase_rad = 0.0) {
    std::vector<CoincidenceOutcome> out;
    for (auto &r : simulate(theta, {lambda1_deg, lambda2_deg}, arm_phase_rad)) {
        out.push_back({detector_pair(r.outcome), r.outcome, r.probability, std::move(r.collapsed)});
    }
    return out;
}

/// alpha = cos^2(2 lambda).
inline double alpha_from_lambda(double lambda_deg) {
    const double c = std::cos(2.0 * deg_to_rad(lambda_deg));
    return std::clamp(c * c, 0.0, 1.0);
}

struct OutcomeComparison {
    std::string detector_pair;
    std::string outcome;
    double optical_probability = 0.0;
    double abstract_probability = 0.0;
    double infidelity = 0.0;   ///< 0 when both sides are null
    bool null_agrees = true;
};

struct VerifyReport {
    double max_infidelity = 0.0;
    double tv_distance = 0.0;
    std::vector<OutcomeComparison> per_outcome;
    bool passed = true;
};

/// Abstract counterpart of the interferometer. With every cos 2l, sin 2l
/// non-negative this is run() at alpha = cos^2 2l; otherwise the switch
/// network runs on the signed targets cos 2l |0> + sin 2l |1>, which the
/// alpha parametrization cannot express.
inline std::vector<OutcomeRecord> abstract_records(double theta, const std::vector<double> &lambdas_deg) {
    ProtocolConfig cfg{lambdas_deg.size(), theta, {}, 1.0};
    bool signed_targets = false;
    std::vector<StateVector> targets;
    for (std::size_t i = 0; i < lambdas_deg.size(); ++i) {
        const double a = 2.0 * deg_to_rad(lambdas_deg[i]);
        cfg.alphas.push_back(alpha_from_lambda(lambdas_deg[i]));
        signed_targets = signed_targets || std::cos(a) < 0.0 || std::sin(a) < 0.0;
        targets.push_back(StateVector({std::cos(a), std::sin(a)}, {target_label(i)}));
    }
    if (!signed_targets) {
        return run(cfg);
    }
    validate(cfg);
    std::vector<std::string> controls;
    for (std::size_t i = 0; i < cfg.n_parties; ++i) {
        controls.push_back(control_label(i));
    }
    const StateVector initial = tensor({states::ghz(cfg.n_parties, 1.0, controls), tensor(targets)});
    return run_switch_network(initial, std::vector<SwitchGates>(cfg.n_parties, protocol_gates(theta)));
}

inline VerifyReport verify_against_abstract(double theta, double lambda1_deg, double lambda2_deg,
                                            double tol = kPipelineTol, double arm_phase_rad = 0.0) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("verify_against_abstract: tol must be positive");
    }
    const auto abstract = abstract_records(theta, {lambda1_deg, lambda2_deg});
    const auto optical = simulate_coincidences(theta, lambda1_deg, lambda2_deg, arm_phase_rad);

    VerifyReport rep;
    double tv = 0.0;
    for (std::size_t i = 0; i < optical.size(); ++i) {
        const auto &o = optical[i];
        const auto &a = abstract[i];
        OutcomeComparison cmp{o.detector_pair, o.outcome, o.probability, a.probability};
        tv += std::abs(o.probability - a.probability);
        cmp.null_agrees = o.polarization_state.has_value() == a.collapsed.has_value();
        if (o.polarization_state && a.collapsed) {
            cmp.infidelity = 1.0 - fidelity(*o.polarization_state, *a.collapsed);
        } else if (!cmp.null_agrees) {
            cmp.infidelity = 1.0;
        }
        rep.max_infidelity = std::max(rep.max_infidelity, cmp.infidelity);
        rep.per_outcome.push_back(cmp);
    }
    rep.tv_distance = tv / 2.0;
    rep.passed = rep.max_infidelity <= tol && rep.tv_distance <= 1e-10;
    for (const auto &c : rep.per_outcome) {
        rep.passed = rep.passed && c.null_agrees;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Analyzer
// ---------------------------------------------------------------------------

enum class AnalyzerBasis { Z, X, Y };

struct AnalyzerSetting {
    double qwp_deg = 0.0;
    double hwp_deg = 0.0;
};

/// QWP then HWP then PBS; transmitted (H) port reads outcome 0.
inline AnalyzerSetting analyzer_setting(AnalyzerBasis b) {
    switch (b) {
    case AnalyzerBasis::Z:
        return {0.0, 0.0};
    case AnalyzerBasis::X:
        return {45.0, 22.5};
    case AnalyzerBasis::Y:
        return {0.0, -22.5};
    }
    return {};
}

inline Unitary analyzer_unitary(const AnalyzerSetting &s) { return hwp(s.hwp_deg) * qwp(s.qwp_deg); }

/// Outcome probabilities {p0, p1} of a polarization analyzer on qubit q.
inline std::array<double, 2> analyze(const StateVector &state, std::size_t q,
                                     const AnalyzerSetting &s) {
    const auto recs = measure_controls(apply(state, analyzer_unitary(s), {q}), {q},
                                       BasisKind::Computational);
    return {recs[0].probability, recs[1].probability};
}

} // namespace ico::optical
