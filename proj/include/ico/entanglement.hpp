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
 * Pure-state entanglement witnesses and the MES / PES / SS / Null classifier.
 *
 * Classification rules, in order:
 *  - Null: no state (vanishing branch).
 *  - SS:   every single-qubit reduction has purity >= 1 - 1e-9.
 *  - MES:  two qubits with concurrence >= 1 - 1e-9, or three or more qubits
 *          whose single-qubit reductions are all I/2 (within 1e-9) and whose
 *          best GHZ fidelity over bit-flip relabelings and one relative phase
 *          is >= 1 - 1e-9.
 *  - PES:  everything else.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ico/qcore.hpp"

namespace ico {

enum class StateClass { MES, PES, SS, Null };

inline const char *to_string(StateClass c) {
    switch (c) {
    case StateClass::MES:
        return "MES";
    case StateClass::PES:
        return "PES";
    case StateClass::SS:
        return "SS";
    case StateClass::Null:
        return "Null";
    }
    return "?";
}

/// Classification thresholds consume end-to-end pipelines.
inline constexpr double kClassifyTol = 1e-9;

class DensityMatrix {
  public:
    /// Throws std::invalid_argument if m is not Hermitian (1e-12), not of unit
    /// trace (1e-12) or has an eigenvalue below -1e-10.
    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
        if (m_.max_abs_diff(m_.adjoint()) > kExactTol) {
            throw std::invalid_argument("DensityMatrix: not Hermitian");
        }
        Complex tr{};
        for (std::size_t i = 0; i < m_.dim(); ++i) {
            tr += m_(i, i);
        }
        if (std::abs(tr - 1.0) > kExactTol) {
            throw std::invalid_argument("DensityMatrix: trace is not 1");
        }
        eigenvalues_ = hermitian_eigenvalues(m_);
        if (!eigenvalues_.empty() && eigenvalues_.back() < -1e-10) {
            throw std::invalid_argument("DensityMatrix: negative eigenvalue");
        }
    }

    [[nodiscard]] const Matrix &matrix() const { return m_; }
    [[nodiscard]] std::size_t dim() const { return m_.dim(); }
    Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    /// Tr(rho^2).
    [[nodiscard]] double purity() const {
        double p = 0.0;
        for (const auto &z : m_.entries()) {
            p += std::norm(z);
        }
        return p;
    }

    /// Eigenvalues in descending order.
    [[nodiscard]] const std::vector<double> &spectrum() const { return eigenvalues_; }

    /// max |rho - I/d| over entries.
    [[nodiscard]] double distance_to_maximally_mixed() const {
        const double d = static_cast<double>(m_.dim());
        return m_.max_abs_diff((1.0 / d) * Matrix::identity(m_.dim()));
    }

  private:
    static std::vector<double> hermitian_eigenvalues(const Matrix &m) {
        Eigen::MatrixXcd e(m.dim(), m.dim());
        for (std::size_t r = 0; r < m.dim(); ++r) {
            for (std::size_t c = 0; c < m.dim(); ++c) {
                e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e, Eigen::EigenvaluesOnly);
        std::vector<double> out(solver.eigenvalues().data(),
                                solver.eigenvalues().data() + solver.eigenvalues().size());
        std::sort(out.begin(), out.end(), std::greater<>());
        return out;
    }

    Matrix m_;
    std::vector<double> eigenvalues_;
};

/// Partial trace onto the listed qubits (in the listed order).
inline DensityMatrix reduce(const StateVector &state, const std::vector<std::size_t> &keep) {
    const std::size_t n = state.num_qubits();
    if (keep.empty()) {
        throw std::invalid_argument("reduce: keep set must be nonempty");
    }
    detail::check_targets(n, keep);

    std::vector<std::size_t> env;
    for (std::size_t q = 0; q < n; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) {
            env.push_back(q);
        }
    }
    const std::size_t dk = std::size_t{1} << keep.size();
    const std::size_t de = std::size_t{1} << env.size();

    // Coefficient matrix psi(k, e); rho = psi psi^dagger.
    std::vector<Complex> coeff(dk * de);
    for (std::size_t idx = 0; idx < state.dim(); ++idx) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < keep.size(); ++j) {
            if (idx & detail::bit_of(n, keep[j])) {
                k |= std::size_t{1} << (keep.size() - 1 - j);
            }
        }
        std::size_t e = 0;
        for (std::size_t j = 0; j < env.size(); ++j) {
            if (idx & detail::bit_of(n, env[j])) {
                e |= std::size_t{1} << (env.size() - 1 - j);
            }
        }
        coeff[k * de + e] = state[idx];
    }

    Matrix rho(dk);
    for (std::size_t r = 0; r < dk; ++r) {
        for (std::size_t c = r; c < dk; ++c) {
            Complex acc{};
            for (std::size_t e = 0; e < de; ++e) {
                acc += coeff[r * de + e] * std::conj(coeff[c * de + e]);
            }
            rho(r, c) = acc;
            rho(c, r) = std::conj(acc);
        }
        rho(r, r) = rho(r, r).real();
    }
    return DensityMatrix(std::move(rho));
}

/// Pure-state spin-flip concurrence 2|a00 a11 - a01 a10|.
inline double concurrence(const StateVector &state) {
    if (state.num_qubits() != 2) {
        throw std::invalid_argument("concurrence: state must have exactly 2 qubits");
    }
    return std::clamp(2.0 * std::abs(state[0] * state[3] - state[1] * state[2]), 0.0, 1.0);
}

/// |<GHZ_N^sign|state>|^2 with GHZ^± = (|0..0> ± |1..1>)/sqrt(2).
inline double ghz_fidelity(const StateVector &state, int sign) {
    if (state.num_qubits() < 2) {
        throw std::invalid_argument("ghz_fidelity: need at least 2 qubits");
    }
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("ghz_fidelity: sign must be +1 or -1");
    }
    const Complex overlap = (state[0] + static_cast<double>(sign) * state[state.dim() - 1]) /
                            std::numbers::sqrt2;
    return std::clamp(std::norm(overlap), 0.0, 1.0);
}

/// max over bit-flip relabelings x and phases phi of
/// |<(|x> + e^{i phi}|~x>)/sqrt(2) | state>|^2.
inline double best_ghz_fidelity(const StateVector &state) {
    const std::size_t mask = state.dim() - 1;
    double best = 0.0;
    for (std::size_t x = 0; x < state.dim() / 2; ++x) {
        const double s = std::abs(state[x]) + std::abs(state[x ^ mask]);
        best = std::max(best, 0.5 * s * s);
    }
    return std::clamp(best, 0.0, 1.0);
}

struct Witness {
    std::optional<double> concurrence;
    std::optional<double> ghz_fidelity;
    double max_reduction_purity_deficit = 0.0;
};

struct Classification {
    StateClass state_class = StateClass::Null;
    Witness witness;
};

inline Classification classify(const std::optional<StateVector> &state) {
    Classification out;
    if (!state) {
        return out;
    }
    const std::size_t n = state->num_qubits();
    bool all_pure = true;
    bool all_max_mixed = true;
    for (std::size_t q = 0; q < n; ++q) {
        const DensityMatrix rho = reduce(*state, {q});
        const double deficit = 1.0 - rho.purity();
        out.witness.max_reduction_purity_deficit =
            std::max(out.witness.max_reduction_purity_deficit, deficit);
        all_pure = all_pure && deficit <= kClassifyTol;
        all_max_mixed = all_max_mixed && rho.distance_to_maximally_mixed() <= kClassifyTol;
    }
    if (n == 2) {
        out.witness.concurrence = concurrence(*state);
    } else if (n >= 3) {
        out.witness.ghz_fidelity = best_ghz_fidelity(*state);
    }

    if (all_pure) {
        out.state_class = StateClass::SS;
    } else if (n == 2 && *out.witness.concurrence >= 1.0 - kClassifyTol) {
        out.state_class = StateClass::MES;
    } else if (n >= 3 && all_max_mixed && *out.witness.ghz_fidelity >= 1.0 - kClassifyTol) {
        out.state_class = StateClass::MES;
    } else {
        out.state_class = StateClass::PES;
    }
    return out;
}

/// Descending eigenvalues of the reduction onto `subset`.
inline std::vector<double> reduction_spectrum(const StateVector &state,
                                              const std::vector<std::size_t> &subset) {
    return reduce(state, subset).spectrum();
}

/// Largest eigenvalue gap between two states' reductions over every
/// bipartition (subsets of size <= n/2; the complement has the same
/// nonzero spectrum).
inline double bipartition_spectra_distance(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("bipartition spectra: qubit count mismatch");
    }
    const std::size_t n = a.num_qubits();
    double worst = 0.0;
    for (std::size_t subset = 1; subset < (std::size_t{1} << n) - 1; ++subset) {
        std::vector<std::size_t> keep;
        for (std::size_t q = 0; q < n; ++q) {
            if (subset & (std::size_t{1} << q)) {
                keep.push_back(q);
            }
        }
        if (2 * keep.size() > n) {
            continue;
        }
        const auto sa = reduction_spectrum(a, keep);
        const auto sb = reduction_spectrum(b, keep);
        for (std::size_t i = 0; i < sa.size(); ++i) {
            worst = std::max(worst, std::abs(sa[i] - sb[i]));
        }
    }
    return worst;
}

} // namespace ico
