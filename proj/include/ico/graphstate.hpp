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
 * Graph states built from CZ gates and from two-party switch operations
 * ICO+- = [(U2 U1) (x) (U2 U1) +- i (U1 U2) (x) (U1 U2)] / sqrt(2) with
 * U1 = R_z(pi/2), U2 = X. Each ICO+- equals CZ after a fixed local
 * correction:
 *   CZ = e^{-i pi/4} (Y (x) Y) ICO+
 *   CZ = e^{+i pi/4} (X (x) X) ICO-
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ico/entanglement.hpp"
#include "ico/protocol.hpp"
#include "ico/qcore.hpp"

namespace ico::graph {

inline constexpr std::size_t kMaxVertices = 12;

class Graph {
  public:
    using Edge = std::pair<std::size_t, std::size_t>;

    explicit Graph(std::size_t vertex_count) : n_(vertex_count) {}

    Graph(std::size_t vertex_count, const std::vector<Edge> &edges) : n_(vertex_count) {
        for (const auto &[i, j] : edges) {
            add_edge(i, j);
        }
    }

    Graph &add_edge(std::size_t i, std::size_t j) {
        if (i == j) {
            throw std::invalid_argument("Graph: self-loop on vertex " + std::to_string(i));
        }
        if (i >= n_ || j >= n_) {
            throw std::invalid_argument("Graph: edge " + std::to_string(i) + "-" + std::to_string(j) +
                                        " outside " + std::to_string(n_) + " vertices");
        }
        if (!edges_.insert(std::minmax(i, j)).second) {
            throw std::invalid_argument("Graph: duplicate edge " + std::to_string(i) + "-" +
                                        std::to_string(j));
        }
        return *this;
    }

    [[nodiscard]] std::size_t vertex_count() const { return n_; }
    /// Sorted lexicographically, i < j within each pair.
    [[nodiscard]] std::vector<Edge> edges() const { return {edges_.begin(), edges_.end()}; }
    [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }

    /// No vertex touches two edges.
    [[nodiscard]] bool is_matching() const {
        std::vector<int> deg(n_, 0);
        for (const auto &[i, j] : edges_) {
            if (++deg[i] > 1 || ++deg[j] > 1) {
                return false;
            }
        }
        return true;
    }

  private:
    std::size_t n_;
    std::set<Edge> edges_;
};

/// Parses "0-1,1-2". Vertex count defaults to the largest index + 1.
inline Graph parse_graph(const std::string &text, std::size_t vertex_count = 0) {
    std::vector<Graph::Edge> edges;
    std::size_t top = 0;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (item.empty()) {
            continue;
        }
        const auto dash = item.find('-');
        if (dash == std::string::npos || dash == 0 || dash + 1 == item.size()) {
            throw std::invalid_argument("edges: malformed edge '" + item + "'");
        }
        std::size_t i = 0;
        std::size_t j = 0;
        try {
            std::size_t used_i = 0;
            std::size_t used_j = 0;
            i = std::stoul(item.substr(0, dash), &used_i);
            j = std::stoul(item.substr(dash + 1), &used_j);
            if (used_i != dash || used_j != item.size() - dash - 1) {
                throw std::invalid_argument("trailing");
            }
        } catch (const std::exception &) {
            throw std::invalid_argument("edges: malformed edge '" + item + "'");
        }
        edges.emplace_back(i, j);
        top = std::max({top, i + 1, j + 1});
    }
    const std::size_t n = vertex_count ? vertex_count : top;
    return Graph(n, edges);
}

inline Unitary cz() { return Unitary(Matrix(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1})); }

/// Checked for unitarity; throws if the sum is not unitary.
inline Unitary ico_pm(int sign, const Unitary &u1 = gates::rz(std::numbers::pi / 2),
                      const Unitary &u2 = gates::x()) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("ico_pm: sign must be +1 or -1");
    }
    const Matrix a = (u2 * u1).matrix();
    const Matrix b = (u1 * u2).matrix();
    const Complex w{0.0, static_cast<double>(sign)};
    const Matrix sum = kron(a, a) + w * kron(b, b);
    return Unitary((1.0 / std::numbers::sqrt2) * sum, kExactTol);
}

/// Local correction C with C ICO+- = CZ.
inline Unitary correction(int sign) {
    if (sign == 1) {
        return std::polar(1.0, -std::numbers::pi / 4) * kron(gates::y(), gates::y());
    }
    if (sign == -1) {
        return std::polar(1.0, std::numbers::pi / 4) * kron(gates::x(), gates::x());
    }
    throw std::invalid_argument("correction: sign must be +1 or -1");
}

/// max |C ICO+- - CZ| over entries.
inline double identity_residual(int sign) {
    return (correction(sign) * ico_pm(sign)).matrix().max_abs_diff(cz().matrix());
}

inline StateVector plus_register(std::size_t n) {
    std::vector<StateVector> parts(n, states::plus());
    if (n == 0) {
        return StateVector({1.0}, {});
    }
    return tensor(parts);
}

inline void check_size(const Graph &g) {
    if (g.vertex_count() > kMaxVertices) {
        throw std::invalid_argument("graph: at most " + std::to_string(kMaxVertices) + " vertices");
    }
}

/// prod CZ |+>^n over the sorted edge list.
inline StateVector build_graph_state(const Graph &g) {
    check_size(g);
    StateVector s = plus_register(g.vertex_count());
    const Unitary gate = cz();
    for (const auto &[i, j] : g.edges()) {
        s = apply(s, gate, {i, j});
    }
    return s;
}

/// prod ICO+- |+>^n over the sorted edge list; with `interleave` every
/// ICO is followed by its correction.
inline StateVector build_ico_graph_state(const Graph &g, bool interleave = true, int sign = 1) {
    check_size(g);
    StateVector s = plus_register(g.vertex_count());
    const Unitary gate = interleave ? correction(sign) * ico_pm(sign) : ico_pm(sign);
    for (const auto &[i, j] : g.edges()) {
        s = apply(s, gate, {i, j});
    }
    return s;
}

/// One switch pair on |+>|+> with the (|00> + i|11>)/sqrt(2) control: the
/// even-parity target state, which should be ICO+ |++> and the odd one
/// ICO- |++>.
inline std::vector<OutcomeRecord> ico_edge_via_switch() {
    const StateVector initial = tensor({states::ghz(2, Complex{0.0, 1.0}, {"a", "b"}),
                                        states::plus().relabeled({"A"}),
                                        states::plus().relabeled({"B"})});
    const SwitchGates g{gates::rz(std::numbers::pi / 2), gates::x()};
    return run_switch_network(initial, {g, g});
}

struct GraphReport {
    double fidelity_to_graph_state = 0.0;
    double identity_residual = 0.0;
    bool spectra_match = false;
    double spectra_distance = 0.0;
};

inline GraphReport verify(const Graph &g, bool raw, int sign = 1) {
    GraphReport r;
    const StateVector target = build_graph_state(g);
    const StateVector built = build_ico_graph_state(g, !raw, sign);
    r.fidelity_to_graph_state = fidelity(target, built);
    r.identity_residual = identity_residual(sign);
    if (g.vertex_count() >= 2) {
        r.spectra_distance = bipartition_spectra_distance(target, built);
    }
    r.spectra_match = r.spectra_distance <= 1e-10;
    return r;
}

} // namespace ico::graph
