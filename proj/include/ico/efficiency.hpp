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
 * Photon-loss efficiency of N-party entanglement generation in fiber.
 *
 *   prior:  eta0^N eta_d exp(-a (N - 1) L)         (chain of swapped pairs)
 *   ours:   eta_d^N exp(-a g(N) L),  g(N) = N / (2 sin(pi / N))
 *   ratio:  eta0^-N eta_d^(N-1) exp(a L (N - 1 - g(N)))
 */

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ico::efficiency {

struct EfficiencyParams {
    double eta0 = 0.96;
    double eta_d = 0.96;
    double attenuation = 1.0 / 22.0;  ///< per km
    double L_km = 0.0;
    unsigned N = 2;
};

inline void validate(const EfficiencyParams &p) {
    if (!(p.eta0 > 0.0 && p.eta0 <= 1.0)) {
        throw std::invalid_argument("eta0: must lie in (0, 1]");
    }
    if (!(p.eta_d > 0.0 && p.eta_d <= 1.0)) {
        throw std::invalid_argument("eta_d: must lie in (0, 1]");
    }
    if (!(p.attenuation >= 0.0) || !std::isfinite(p.attenuation)) {
        throw std::invalid_argument("attenuation: must be finite and >= 0");
    }
    if (!(p.L_km >= 0.0) || !std::isfinite(p.L_km)) {
        throw std::invalid_argument("L_km: must be finite and >= 0");
    }
    if (p.N < 2) {
        throw std::invalid_argument("N: must be at least 2");
    }
}

/// Fiber length factor from a central source to N parties on a regular
/// polygon of side L: N / (2 sin(pi / N)).
inline double geometry_factor(unsigned N) {
    return static_cast<double>(N) / (2.0 * std::sin(std::numbers::pi / static_cast<double>(N)));
}

inline double eta_prior(const EfficiencyParams &p) {
    validate(p);
    return std::pow(p.eta0, p.N) * p.eta_d * std::exp(-p.attenuation * (p.N - 1.0) * p.L_km);
}

inline double eta_ours(const EfficiencyParams &p) {
    validate(p);
    return std::pow(p.eta_d, p.N) * std::exp(-p.attenuation * geometry_factor(p.N) * p.L_km);
}

inline double enhancement(const EfficiencyParams &p) {
    validate(p);
    const double pre = std::pow(p.eta0, -static_cast<double>(p.N)) * std::pow(p.eta_d, p.N - 1.0);
    return pre * std::exp(p.attenuation * p.L_km * (p.N - 1.0 - geometry_factor(p.N)));
}

/// L at which enhancement = 1, or nullopt when enhancement never drops to 1.
inline std::optional<double> crossover_distance(unsigned N, EfficiencyParams p = {}) {
    p.N = N;
    p.L_km = 0.0;
    validate(p);
    const double log_pre = -static_cast<double>(N) * std::log(p.eta0) + (N - 1.0) * std::log(p.eta_d);
    const double slope = p.attenuation * (geometry_factor(N) - N + 1.0);
    if (log_pre <= 0.0 || slope <= 0.0) {
        return std::nullopt;
    }
    return log_pre / slope;
}

struct SweepRow {
    unsigned N = 2;
    double L_km = 0.0;
    double eta_prior = 0.0;
    double eta_ours = 0.0;
    double enhancement = 0.0;
};

inline std::vector<SweepRow> sweep(const std::vector<unsigned> &Ns, const std::vector<double> &Ls,
                                   EfficiencyParams base = {}) {
    if (Ns.empty() || Ls.empty()) {
        throw std::invalid_argument("sweep: grids must be nonempty");
    }
    std::vector<SweepRow> rows;
    rows.reserve(Ns.size() * Ls.size());
    for (unsigned n : Ns) {
        for (double l : Ls) {
            base.N = n;
            base.L_km = l;
            rows.push_back({n, l, eta_prior(base), eta_ours(base), enhancement(base)});
        }
    }
    return rows;
}

/// 0, step, 2 step, ... up to l_max inclusive (within half a step).
inline std::vector<double> distance_grid(double l_max, double step) {
    if (!(step > 0.0) || !(l_max >= 0.0) || !std::isfinite(l_max)) {
        throw std::invalid_argument("distance grid: need step > 0 and l_max >= 0");
    }
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        const double l = static_cast<double>(i) * step;
        if (l > l_max + step / 2.0) {
            break;
        }
        out.push_back(l);
    }
    return out;
}

} // namespace ico::efficiency
