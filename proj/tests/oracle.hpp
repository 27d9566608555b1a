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

// Brute-force reference implementations used only by tests. Nothing here
// calls the library's gate application, partial trace or witnesses.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Vec = std::vector<C>;

/// Dense row-major square matrix.
struct Mat {
    std::size_t n = 0;
    std::vector<C> a;
    explicit Mat(std::size_t dim = 0) : n(dim), a(dim * dim) {}
    Mat(std::size_t dim, std::vector<C> v) : n(dim), a(std::move(v)) {}
    C &operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
    C operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

inline Mat eye(std::size_t n) {
    Mat m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

inline Mat mul(const Mat &x, const Mat &y) {
    Mat out(x.n);
    for (std::size_t r = 0; r < x.n; ++r) {
        for (std::size_t c = 0; c < x.n; ++c) {
            C acc{};
            for (std::size_t k = 0; k < x.n; ++k) {
                acc += x(r, k) * y(k, c);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

inline Mat kron(const Mat &x, const Mat &y) {
    Mat out(x.n * y.n);
    for (std::size_t i = 0; i < out.n; ++i) {
        for (std::size_t j = 0; j < out.n; ++j) {
            out(i, j) = x(i / y.n, j / y.n) * y(i % y.n, j % y.n);
        }
    }
    return out;
}

inline Vec matvec(const Mat &m, const Vec &v) {
    Vec out(m.n);
    for (std::size_t r = 0; r < m.n; ++r) {
        for (std::size_t c = 0; c < m.n; ++c) {
            out[r] += m(r, c) * v[c];
        }
    }
    return out;
}

inline Vec kron(const Vec &x, const Vec &y) {
    Vec out;
    for (const C &p : x) {
        for (const C &q : y) {
            out.push_back(p * q);
        }
    }
    return out;
}

inline double max_diff(const Mat &x, const Mat &y) {
    double w = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        w = std::max(w, std::abs(x.a[i] - y.a[i]));
    }
    return w;
}

inline double max_diff(const Vec &x, const Vec &y) {
    double w = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        w = std::max(w, std::abs(x[i] - y[i]));
    }
    return w;
}

/// Full 2^n operator that applies `g` (on `targets`, first target = most
/// significant gate bit) and identity elsewhere, built element by element.
inline Mat embed(std::size_t n, const Mat &g, const std::vector<std::size_t> &targets) {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t k = targets.size();
    auto bit = [&](std::size_t idx, std::size_t q) { return (idx >> (n - 1 - q)) & 1U; };
    Mat out(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            bool rest_equal = true;
            for (std::size_t q = 0; q < n; ++q) {
                bool is_target = false;
                for (auto t : targets) {
                    is_target = is_target || t == q;
                }
                if (!is_target && bit(r, q) != bit(c, q)) {
                    rest_equal = false;
                }
            }
            if (!rest_equal) {
                continue;
            }
            std::size_t gr = 0;
            std::size_t gc = 0;
            for (std::size_t j = 0; j < k; ++j) {
                gr = (gr << 1) | bit(r, targets[j]);
                gc = (gc << 1) | bit(c, targets[j]);
            }
            out(r, c) = g(gr, gc);
        }
    }
    return out;
}

/// Reduced density matrix on `keep` (in order) from rho = |psi><psi|,
/// summing over every environment configuration.
inline Mat partial_trace(const Vec &psi, std::size_t n, const std::vector<std::size_t> &keep) {
    const std::size_t dk = std::size_t{1} << keep.size();
    auto bit = [&](std::size_t idx, std::size_t q) { return (idx >> (n - 1 - q)) & 1U; };
    Mat rho(dk);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        for (std::size_t j = 0; j < psi.size(); ++j) {
            bool env_equal = true;
            for (std::size_t q = 0; q < n; ++q) {
                bool kept = false;
                for (auto t : keep) {
                    kept = kept || t == q;
                }
                if (!kept && bit(i, q) != bit(j, q)) {
                    env_equal = false;
                }
            }
            if (!env_equal) {
                continue;
            }
            std::size_t r = 0;
            std::size_t c = 0;
            for (auto t : keep) {
                r = (r << 1) | bit(i, t);
                c = (c << 1) | bit(j, t);
            }
            rho(r, c) += psi[i] * std::conj(psi[j]);
        }
    }
    return rho;
}

inline double trace_of_square(const Mat &m) {
    const Mat sq = mul(m, m);
    C t{};
    for (std::size_t i = 0; i < m.n; ++i) {
        t += sq(i, i);
    }
    return t.real();
}

/// |<psi*| Y (x) Y |psi>| via the explicit 4x4 spin-flip matrix.
inline double spin_flip_concurrence(const Vec &psi) {
    const Mat y(2, {0.0, C{0, -1}, C{0, 1}, 0.0});
    const Mat yy = kron(y, y);
    Vec conj_psi(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        conj_psi[i] = std::conj(psi[i]);
    }
    const Vec flipped = matvec(yy, conj_psi);
    C acc{};
    for (std::size_t i = 0; i < psi.size(); ++i) {
        acc += std::conj(psi[i]) * flipped[i];
    }
    return std::abs(acc);
}

inline Vec normalized(Vec v) {
    double s = 0.0;
    for (const C &z : v) {
        s += std::norm(z);
    }
    s = std::sqrt(s);
    for (C &z : v) {
        z /= s;
    }
    return v;
}

inline Vec random_state(std::mt19937_64 &rng, std::size_t n) {
    std::normal_distribution<double> g;
    Vec v(std::size_t{1} << n);
    for (C &z : v) {
        z = C{g(rng), g(rng)};
    }
    return normalized(v);
}

/// Haar-ish random unitary by Gram-Schmidt on Gaussian columns.
inline Mat random_unitary(std::mt19937_64 &rng, std::size_t dim) {
    std::normal_distribution<double> g;
    std::vector<Vec> cols(dim, Vec(dim));
    for (auto &col : cols) {
        for (C &z : col) {
            z = C{g(rng), g(rng)};
        }
    }
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            C proj{};
            for (std::size_t i = 0; i < dim; ++i) {
                proj += std::conj(cols[j][i]) * cols[k][i];
            }
            for (std::size_t i = 0; i < dim; ++i) {
                cols[k][i] -= proj * cols[j][i];
            }
        }
        cols[k] = normalized(cols[k]);
    }
    Mat m(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            m(r, c) = cols[c][r];
        }
    }
    return m;
}

} // namespace oracle
