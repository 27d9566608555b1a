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
 * Dense state-vector and unitary kernel.
 *
 * Register convention: the first label is the most significant bit of the
 * amplitude index, so |q0 q1 ... q(n-1)> lives at index sum q_k 2^(n-1-k).
 * Every StateVector handed out by a public function is normalized; vanishing
 * projections are reported as std::nullopt, never as a zero-norm state.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ico {

using Complex = std::complex<double>;

/// Tolerance for exact algebraic identities.
inline constexpr double kExactTol = 1e-12;
/// Tolerance for end-to-end protocol comparisons.
inline constexpr double kPipelineTol = 1e-9;
/// Outcomes below this probability are analytic zeros.
inline constexpr double kNullProbability = 1e-14;

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t log2_exact(std::size_t n) {
    std::size_t q = 0;
    while ((std::size_t{1} << q) < n) {
        ++q;
    }
    return q;
}

inline bool finite(const Complex &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back("q" + std::to_string(k));
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

/// Dense square complex matrix, row-major.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
    Matrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), data_(std::move(entries)) {
        if (data_.size() != dim_ * dim_) {
            throw std::invalid_argument("Matrix: entry count does not match dim*dim");
        }
        for (const auto &z : data_) {
            if (!detail::finite(z)) {
                throw std::invalid_argument("Matrix: non-finite entry");
            }
        }
    }

    static Matrix identity(std::size_t dim) {
        Matrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    [[nodiscard]] std::size_t dim() const { return dim_; }
    Complex operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    [[nodiscard]] std::span<const Complex> entries() const { return data_; }

    [[nodiscard]] Matrix adjoint() const {
        Matrix out(dim_);
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        if (a.dim_ != b.dim_) {
            throw std::invalid_argument("Matrix product: dimension mismatch");
        }
        Matrix out(a.dim_);
        for (std::size_t r = 0; r < a.dim_; ++r) {
            for (std::size_t k = 0; k < a.dim_; ++k) {
                const Complex ark = a(r, k);
                if (ark == Complex{}) {
                    continue;
                }
                for (std::size_t c = 0; c < a.dim_; ++c) {
                    out(r, c) += ark * b(k, c);
                }
            }
        }
        return out;
    }

    friend Matrix operator+(Matrix a, const Matrix &b) {
        if (a.dim_ != b.dim_) {
            throw std::invalid_argument("Matrix sum: dimension mismatch");
        }
        for (std::size_t i = 0; i < a.data_.size(); ++i) {
            a.data_[i] += b.data_[i];
        }
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix &b) {
        if (a.dim_ != b.dim_) {
            throw std::invalid_argument("Matrix difference: dimension mismatch");
        }
        for (std::size_t i = 0; i < a.data_.size(); ++i) {
            a.data_[i] -= b.data_[i];
        }
        return a;
    }

    friend Matrix operator*(Complex s, Matrix a) {
        for (auto &z : a.data_) {
            z *= s;
        }
        return a;
    }

    /// Largest entrywise modulus of (this - other).
    [[nodiscard]] double max_abs_diff(const Matrix &other) const {
        if (dim_ != other.dim_) {
            throw std::invalid_argument("Matrix compare: dimension mismatch");
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
        }
        return worst;
    }

    /// max |U U^dagger - I| over entries.
    [[nodiscard]] double unitarity_residual() const {
        return ((*this) * adjoint()).max_abs_diff(identity(dim_));
    }

  private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

inline Matrix kron(const Matrix &a, const Matrix &b) {
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    Matrix out(da * db);
    for (std::size_t r1 = 0; r1 < da; ++r1) {
        for (std::size_t c1 = 0; c1 < da; ++c1) {
            const Complex s = a(r1, c1);
            for (std::size_t r2 = 0; r2 < db; ++r2) {
                for (std::size_t c2 = 0; c2 < db; ++c2) {
                    out(r1 * db + r2, c1 * db + c2) = s * b(r2, c2);
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Unitary
// ---------------------------------------------------------------------------

/// A Matrix on whole qubits whose unitarity was checked at construction.
class Unitary {
  public:
    /// Throws std::invalid_argument unless dim is a power of two and
    /// max |U U^dagger - I| <= tol.
    explicit Unitary(Matrix m, double tol = 1e-10) : m_(std::move(m)) {
        if (!detail::is_power_of_two(m_.dim())) {
            throw std::invalid_argument("Unitary: dimension must be a power of two");
        }
        const double residual = m_.unitarity_residual();
        if (!(residual <= tol)) {
            throw std::invalid_argument("Unitary: matrix is not unitary (residual " +
                                        std::to_string(residual) + ")");
        }
    }

    [[nodiscard]] const Matrix &matrix() const { return m_; }
    [[nodiscard]] std::size_t dim() const { return m_.dim(); }
    [[nodiscard]] std::size_t num_qubits() const { return detail::log2_exact(m_.dim()); }
    Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    [[nodiscard]] Unitary adjoint() const { return Unitary(m_.adjoint(), Trusted{}); }

    friend Unitary operator*(const Unitary &a, const Unitary &b) {
        return Unitary(a.m_ * b.m_, Trusted{});
    }

    friend Unitary kron(const Unitary &a, const Unitary &b) {
        return Unitary(kron(a.m_, b.m_), Trusted{});
    }

    /// Scaling by a unit-modulus phase keeps unitarity.
    friend Unitary operator*(Complex phase, const Unitary &u) {
        if (std::abs(std::abs(phase) - 1.0) > kExactTol) {
            throw std::invalid_argument("Unitary: scalar must have unit modulus");
        }
        return Unitary(phase * u.m_, Trusted{});
    }

  private:
    struct Trusted {};
    Unitary(Matrix m, Trusted) : m_(std::move(m)) {}

    Matrix m_;
};

namespace gates {

inline Unitary identity(std::size_t num_qubits = 1) {
    return Unitary(Matrix::identity(std::size_t{1} << num_qubits));
}

inline Unitary x() { return Unitary(Matrix(2, {0.0, 1.0, 1.0, 0.0})); }

inline Unitary y() {
    const Complex i{0.0, 1.0};
    return Unitary(Matrix(2, {0.0, -i, i, 0.0}));
}

inline Unitary z() { return Unitary(Matrix(2, {1.0, 0.0, 0.0, -1.0})); }

inline Unitary h() {
    const double r = 1.0 / std::numbers::sqrt2;
    return Unitary(Matrix(2, {r, r, r, -r}));
}

/// R_y(two_theta) = [[cos t, -sin t], [sin t, cos t]] with t = two_theta / 2.
inline Unitary ry(double two_theta) {
    if (!std::isfinite(two_theta)) {
        throw std::invalid_argument("ry: angle must be finite");
    }
    const double c = std::cos(two_theta / 2.0);
    const double s = std::sin(two_theta / 2.0);
    return Unitary(Matrix(2, {c, -s, s, c}));
}

/// R_z(angle) = diag(e^{-i angle/2}, e^{+i angle/2}).
inline Unitary rz(double angle) {
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("rz: angle must be finite");
    }
    const Complex lo = std::polar(1.0, -angle / 2.0);
    const Complex hi = std::polar(1.0, angle / 2.0);
    return Unitary(Matrix(2, {lo, 0.0, 0.0, hi}));
}

} // namespace gates

/// Quantum switch: |0><0| (x) (u2 u1) + |1><1| (x) (u1 u2), control first.
inline Unitary switch_unitary(const Unitary &u1, const Unitary &u2) {
    if (u1.dim() != 2 || u2.dim() != 2) {
        throw std::invalid_argument("switch_unitary: both gates must be single-qubit");
    }
    const Unitary first_then_second = u2 * u1;
    const Unitary second_then_first = u1 * u2;
    Matrix m(4);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            m(r, c) = first_then_second(r, c);
            m(2 + r, 2 + c) = second_then_first(r, c);
        }
    }
    return Unitary(std::move(m));
}

// ---------------------------------------------------------------------------
// StateVector
// ---------------------------------------------------------------------------

class StateVector {
  public:
    /// Normalizes the given amplitudes. Throws std::invalid_argument on a
    /// non-power-of-two length, a label count mismatch, a non-finite entry
    /// or a vanishing norm.
    explicit StateVector(std::vector<Complex> amplitudes, std::vector<std::string> labels = {})
        : amps_(std::move(amplitudes)), labels_(std::move(labels)) {
        if (!detail::is_power_of_two(amps_.size())) {
            throw std::invalid_argument("StateVector: length must be a power of two");
        }
        const std::size_t n = detail::log2_exact(amps_.size());
        if (labels_.empty()) {
            labels_ = detail::default_labels(n);
        }
        if (labels_.size() != n) {
            throw std::invalid_argument("StateVector: label count does not match qubit count");
        }
        double sq = 0.0;
        for (const auto &z : amps_) {
            if (!detail::finite(z)) {
                throw std::invalid_argument("StateVector: non-finite amplitude");
            }
            sq += std::norm(z);
        }
        if (!(sq > 0.0)) {
            throw std::invalid_argument("StateVector: zero vector is not a state");
        }
        const double inv = 1.0 / std::sqrt(sq);
        for (auto &z : amps_) {
            z *= inv;
        }
    }

    static StateVector basis(std::size_t num_qubits, std::size_t index,
                             std::vector<std::string> labels = {}) {
        std::vector<Complex> amps(std::size_t{1} << num_qubits);
        amps.at(index) = 1.0;
        return StateVector(std::move(amps), std::move(labels));
    }

    [[nodiscard]] std::size_t num_qubits() const { return labels_.size(); }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] const std::vector<std::string> &labels() const { return labels_; }

    [[nodiscard]] double norm() const {
        double sq = 0.0;
        for (const auto &z : amps_) {
            sq += std::norm(z);
        }
        return std::sqrt(sq);
    }

    [[nodiscard]] StateVector relabeled(std::vector<std::string> labels) const {
        StateVector out = *this;
        if (labels.size() != labels_.size()) {
            throw std::invalid_argument("relabeled: label count mismatch");
        }
        out.labels_ = std::move(labels);
        return out;
    }

  private:
    std::vector<Complex> amps_;
    std::vector<std::string> labels_;
};

namespace states {

inline StateVector zero() { return StateVector({1.0, 0.0}); }
inline StateVector one() { return StateVector({0.0, 1.0}); }
inline StateVector plus() { return StateVector({1.0, 1.0}); }
inline StateVector minus() { return StateVector({1.0, -1.0}); }

/// (|0...0> + phase |1...1>)/sqrt(2).
inline StateVector ghz(std::size_t num_qubits, Complex phase = 1.0,
                       std::vector<std::string> labels = {}) {
    if (num_qubits == 0) {
        throw std::invalid_argument("ghz: need at least one qubit");
    }
    std::vector<Complex> amps(std::size_t{1} << num_qubits);
    amps.front() = 1.0;
    amps.back() += phase;
    return StateVector(std::move(amps), std::move(labels));
}

} // namespace states

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

namespace detail {

inline std::size_t bit_of(std::size_t num_qubits, std::size_t qubit) {
    return std::size_t{1} << (num_qubits - 1 - qubit);
}

inline void check_targets(std::size_t num_qubits, std::span<const std::size_t> targets) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] >= num_qubits) {
            throw std::invalid_argument("qubit index out of range");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (targets[i] == targets[j]) {
                throw std::invalid_argument("repeated qubit index");
            }
        }
    }
}

/// Applies m to the named qubits of an amplitude buffer; targets[0] is the
/// most significant bit of m's index.
inline void apply_in_place(std::vector<Complex> &amps, std::size_t num_qubits, const Matrix &m,
                           std::span<const std::size_t> targets) {
    const std::size_t k = targets.size();
    if (m.dim() != (std::size_t{1} << k)) {
        throw std::invalid_argument("apply: gate dimension does not match target count");
    }
    check_targets(num_qubits, targets);

    std::vector<std::size_t> offsets(m.dim(), 0);
    std::size_t target_mask = 0;
    for (std::size_t local = 0; local < m.dim(); ++local) {
        for (std::size_t t = 0; t < k; ++t) {
            if (local & (std::size_t{1} << (k - 1 - t))) {
                offsets[local] |= bit_of(num_qubits, targets[t]);
            }
        }
    }
    for (std::size_t t = 0; t < k; ++t) {
        target_mask |= bit_of(num_qubits, targets[t]);
    }

    std::vector<Complex> in(m.dim());
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if (base & target_mask) {
            continue;
        }
        for (std::size_t local = 0; local < m.dim(); ++local) {
            in[local] = amps[base | offsets[local]];
        }
        for (std::size_t r = 0; r < m.dim(); ++r) {
            Complex acc{};
            for (std::size_t c = 0; c < m.dim(); ++c) {
                acc += m(r, c) * in[c];
            }
            amps[base | offsets[r]] = acc;
        }
    }
}

} // namespace detail

/// Product state; labels are concatenated in order.
inline StateVector tensor(const std::vector<StateVector> &parts) {
    if (parts.empty()) {
        throw std::invalid_argument("tensor: empty list");
    }
    std::vector<Complex> amps{1.0};
    std::vector<std::string> labels;
    for (const auto &p : parts) {
        std::vector<Complex> next(amps.size() * p.dim());
        for (std::size_t i = 0; i < amps.size(); ++i) {
            for (std::size_t j = 0; j < p.dim(); ++j) {
                next[i * p.dim() + j] = amps[i] * p[j];
            }
        }
        amps = std::move(next);
        labels.insert(labels.end(), p.labels().begin(), p.labels().end());
    }
    return StateVector(std::move(amps), std::move(labels));
}

inline StateVector apply(const StateVector &state, const Unitary &u,
                         const std::vector<std::size_t> &targets) {
    std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
    detail::apply_in_place(amps, state.num_qubits(), u.matrix(), targets);
    return StateVector(std::move(amps), state.labels());
}

/// Reorders qubits: qubit k of the result is qubit order[k] of the input.
inline StateVector permute(const StateVector &state, const std::vector<std::size_t> &order) {
    const std::size_t n = state.num_qubits();
    if (order.size() != n) {
        throw std::invalid_argument("permute: order must name every qubit");
    }
    detail::check_targets(n, order);
    std::vector<Complex> amps(state.dim());
    std::vector<std::string> labels(n);
    for (std::size_t k = 0; k < n; ++k) {
        labels[k] = state.labels()[order[k]];
    }
    for (std::size_t old_index = 0; old_index < state.dim(); ++old_index) {
        std::size_t new_index = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (old_index & detail::bit_of(n, order[k])) {
                new_index |= detail::bit_of(n, k);
            }
        }
        amps[new_index] = state[old_index];
    }
    return StateVector(std::move(amps), std::move(labels));
}

inline Complex inner(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("inner: dimension mismatch");
    }
    Complex acc{};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

/// |<a|b>|^2, clamped to [0, 1].
inline double fidelity(const StateVector &a, const StateVector &b) {
    return std::clamp(std::norm(inner(a, b)), 0.0, 1.0);
}

/// Phase-sensitive fidelity: (max(0, Re <a|b>))^2. Equals 1 only when the
/// states agree including sign.
inline double strict_fidelity(const StateVector &a, const StateVector &b) {
    const double re = std::max(0.0, inner(a, b).real());
    return std::clamp(re * re, 0.0, 1.0);
}

inline bool global_phase_equal(const StateVector &a, const StateVector &b, double tol = kPipelineTol) {
    return fidelity(a, b) >= 1.0 - tol;
}

enum class BasisKind { Computational, PlusMinus };
enum class Parity { Even, Odd };

inline const char *to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

struct OutcomeRecord {
    std::string outcome;                     ///< one symbol per measured qubit
    double probability = 0.0;
    std::optional<StateVector> collapsed;    ///< nullopt when probability < kNullProbability
    Parity parity = Parity::Even;            ///< count of '-' (or '1') mod 2
    bool feed_forward_applied = false;
};

/// Projects the listed qubits onto every joint outcome, enumerated
/// lexicographically ('+' before '-', '0' before '1'), and returns the
/// renormalized state of the remaining qubits for each.
inline std::vector<OutcomeRecord> measure_controls(const StateVector &state,
                                                   const std::vector<std::size_t> &controls,
                                                   BasisKind basis) {
    const std::size_t n = state.num_qubits();
    detail::check_targets(n, controls);

    std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
    if (basis == BasisKind::PlusMinus) {
        const Matrix had = gates::h().matrix();
        for (std::size_t q : controls) {
            const std::size_t t[] = {q};
            detail::apply_in_place(amps, n, had, t);
        }
    }

    std::vector<std::size_t> rest;
    std::vector<std::string> rest_labels;
    for (std::size_t q = 0; q < n; ++q) {
        if (std::find(controls.begin(), controls.end(), q) == controls.end()) {
            rest.push_back(q);
            rest_labels.push_back(state.labels()[q]);
        }
    }

    const char sym0 = basis == BasisKind::PlusMinus ? '+' : '0';
    const char sym1 = basis == BasisKind::PlusMinus ? '-' : '1';
    const std::size_t m = controls.size();
    const std::size_t rest_dim = std::size_t{1} << rest.size();

    std::vector<OutcomeRecord> records;
    records.reserve(std::size_t{1} << m);
    for (std::size_t outcome = 0; outcome < (std::size_t{1} << m); ++outcome) {
        std::size_t fixed = 0;
        std::string label(m, sym0);
        std::size_t ones = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if (outcome & (std::size_t{1} << (m - 1 - j))) {
                fixed |= detail::bit_of(n, controls[j]);
                label[j] = sym1;
                ++ones;
            }
        }
        std::vector<Complex> slice(rest_dim);
        double prob = 0.0;
        for (std::size_t r = 0; r < rest_dim; ++r) {
            std::size_t index = fixed;
            for (std::size_t j = 0; j < rest.size(); ++j) {
                if (r & (std::size_t{1} << (rest.size() - 1 - j))) {
                    index |= detail::bit_of(n, rest[j]);
                }
            }
            slice[r] = amps[index];
            prob += std::norm(slice[r]);
        }
        OutcomeRecord rec;
        rec.outcome = std::move(label);
        rec.probability = prob;
        rec.parity = (ones % 2 == 0) ? Parity::Even : Parity::Odd;
        if (prob >= kNullProbability) {
            rec.collapsed.emplace(std::move(slice), rest_labels);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace ico
