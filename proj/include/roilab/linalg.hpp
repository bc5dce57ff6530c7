// Copyright 2026 The roi-lab Authors
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
 * Dense complex matrices for small Hermitian / PSD operators.
 *
 * Every operator in the toolkit (states, effects, Kraus operators, Pauli
 * matrices) is a CMatrix. Dimensions are tiny (2 for the qubit work, up to
 * ~16 for hidden-variable constructions) so everything is stored densely in
 * row-major order and all routines are plain loops.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "roilab/error.hpp"

namespace roilab {

using Complex = std::complex<double>;

/// Slack used for Hermiticity, PSD and effect checks throughout.
inline constexpr double kPsdTol = 1e-10;

class CMatrix {
  public:
    CMatrix() = default;

    /// Zero matrix of the given dimension.
    explicit CMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
        if (dim == 0) {
            throw Error(ErrorCode::InvalidArgument, "matrix dimension must be positive");
        }
    }

    /// Row-major nested initializer, e.g. CMatrix{{1, 0}, {0, -1}}.
    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
        : CMatrix(rows.size()) {
        std::size_t i = 0;
        for (const auto &row : rows) {
            if (row.size() != dim_) {
                throw Error(ErrorCode::DimensionMismatch, "matrix rows must form a square array");
            }
            std::size_t j = 0;
            for (const auto &v : row) {
                (*this)(i, j++) = v;
            }
            ++i;
        }
    }

    static CMatrix identity(std::size_t dim) {
        CMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static CMatrix diagonal(std::span<const double> values) {
        CMatrix m(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            m(i, i) = values[i];
        }
        return m;
    }

    /// |u><v|
    static CMatrix outer(std::span<const Complex> u, std::span<const Complex> v) {
        if (u.size() != v.size()) {
            throw Error(ErrorCode::DimensionMismatch, "outer product of vectors of different length");
        }
        CMatrix m(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            for (std::size_t j = 0; j < v.size(); ++j) {
                m(i, j) = u[i] * std::conj(v[j]);
            }
        }
        return m;
    }

    static CMatrix projector(std::span<const Complex> ket) { return outer(ket, ket); }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] bool empty() const noexcept { return dim_ == 0; }

    Complex &operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const Complex &operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    [[nodiscard]] std::span<const Complex> data() const noexcept { return data_; }

    [[nodiscard]] CMatrix adjoint() const {
        CMatrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                r(j, i) = std::conj((*this)(i, j));
            }
        }
        return r;
    }

    [[nodiscard]] Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    [[nodiscard]] double frobenius_norm() const {
        double s = 0.0;
        for (const auto &v : data_) {
            s += std::norm(v);
        }
        return std::sqrt(s);
    }

    /// (M + M^dagger) / 2, used to scrub rounding asymmetry.
    [[nodiscard]] CMatrix hermitian_part() const {
        CMatrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                r(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
            }
        }
        return r;
    }

    CMatrix &operator+=(const CMatrix &o) {
        require_same_dim(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] += o.data_[k];
        }
        return *this;
    }

    CMatrix &operator-=(const CMatrix &o) {
        require_same_dim(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] -= o.data_[k];
        }
        return *this;
    }

    CMatrix &operator*=(Complex s) {
        for (auto &v : data_) {
            v *= s;
        }
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix &b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix &b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
    friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(CMatrix a, double s) { return a *= Complex(s); }
    friend CMatrix operator*(double s, CMatrix a) { return a *= Complex(s); }
    friend CMatrix operator-(CMatrix a) { return a *= Complex(-1.0); }

    friend CMatrix operator*(const CMatrix &a, const CMatrix &b) {
        a.require_same_dim(b);
        const std::size_t n = a.dim_;
        CMatrix r(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex(0.0)) {
                    continue;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    r(i, j) += aik * b(k, j);
                }
            }
        }
        return r;
    }

    /// Matrix-vector product.
    [[nodiscard]] std::vector<Complex> apply(std::span<const Complex> v) const {
        if (v.size() != dim_) {
            throw Error(ErrorCode::DimensionMismatch, "matrix-vector size mismatch");
        }
        std::vector<Complex> r(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                r[i] += (*this)(i, j) * v[j];
            }
        }
        return r;
    }

    void require_same_dim(const CMatrix &o) const {
        if (dim_ != o.dim_) {
            throw Error(ErrorCode::DimensionMismatch,
                        "dimension " + std::to_string(dim_) + " vs " + std::to_string(o.dim_));
        }
    }

  private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// Frobenius distance ||a - b||_F.
inline double frobenius_distance(const CMatrix &a, const CMatrix &b) {
    return (a - b).frobenius_norm();
}

inline double hermiticity_defect(const CMatrix &m) {
    return frobenius_distance(m, m.adjoint());
}

/// <u|v>
inline Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
    if (u.size() != v.size()) {
        throw Error(ErrorCode::DimensionMismatch, "inner product of vectors of different length");
    }
    Complex s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        s += std::conj(u[i]) * v[i];
    }
    return s;
}

inline double norm(std::span<const Complex> v) { return std::sqrt(std::real(inner(v, v))); }

/// <v|M|v>
inline Complex expectation(const CMatrix &m, std::span<const Complex> v) {
    const auto mv = m.apply(v);
    return inner(v, mv);
}

/// Spectral decomposition of a Hermitian matrix. Eigenvalues ascend and
/// eigenvectors[k] belongs to eigenvalues[k].
struct HermEig {
    std::vector<double> eigenvalues;
    std::vector<std::vector<Complex>> eigenvectors;

    /// sum_k f(lambda_k) |v_k><v_k|
    template <class F>
    [[nodiscard]] CMatrix reconstruct(F &&f) const {
        const std::size_t n = eigenvalues.size();
        CMatrix r(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double w = f(eigenvalues[k]);
            if (w == 0.0) {
                continue;
            }
            const auto &v = eigenvectors[k];
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    r(i, j) += w * v[i] * std::conj(v[j]);
                }
            }
        }
        return r;
    }

    [[nodiscard]] CMatrix reconstruct() const {
        return reconstruct([](double x) { return x; });
    }
};

namespace detail {

// Closed form through the Bloch parametrisation M = c*1 + r.sigma, whose
// eigenvalues are c -+ |r|.
inline HermEig herm_eig_2x2(const CMatrix &m) {
    const double c = 0.5 * (m(0, 0).real() + m(1, 1).real());
    const double rz = 0.5 * (m(0, 0).real() - m(1, 1).real());
    const Complex off = 0.5 * (m(1, 0) + std::conj(m(0, 1)));
    const double rx = off.real();
    const double ry = off.imag();
    const double r = std::sqrt(rx * rx + ry * ry + rz * rz);

    HermEig e;
    e.eigenvalues = {c - r, c + r};
    if (r == 0.0) {
        e.eigenvectors = {{0.0, 1.0}, {1.0, 0.0}};
        return e;
    }
    const double nx = rx / r;
    const double ny = ry / r;
    const double nz = rz / r;
    // +1 eigenvector of n.sigma; pick the row that stays away from 0/0.
    std::vector<Complex> up;
    if (nz >= 0.0) {
        up = {1.0 + nz, Complex(nx, ny)};
    } else {
        up = {Complex(nx, -ny), 1.0 - nz};
    }
    const double nu = norm(up);
    up[0] /= nu;
    up[1] /= nu;
    std::vector<Complex> down = {-std::conj(up[1]), std::conj(up[0])};
    e.eigenvectors = {std::move(down), std::move(up)};
    return e;
}

// Cyclic complex Jacobi. Each rotation first removes the phase of a_pq with
// diag(1, e^{-i phi}) and then applies the real symmetric Jacobi rotation.
inline HermEig herm_eig_jacobi(CMatrix a) {
    const std::size_t n = a.dim();
    CMatrix v = CMatrix::identity(n);
    const double scale = std::max(a.frobenius_norm(), 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += std::norm(a(p, q));
            }
        }
        if (std::sqrt(off) <= 1e-17 * scale) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300) {
                    continue;
                }
                const Complex phase = apq / r; // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // J restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                const Complex jpp = c;
                const Complex jpq = s;
                const Complex jqp = -s * std::conj(phase);
                const Complex jqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) { // A <- A J
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (std::size_t k = 0; k < n; ++k) { // A <- J^dagger A
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) { // V <- V J
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermEig e;
    e.eigenvalues.reserve(n);
    e.eigenvectors.reserve(n);
    for (std::size_t k : order) {
        e.eigenvalues.push_back(a(k, k).real());
        std::vector<Complex> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = v(i, k);
        }
        e.eigenvectors.push_back(std::move(col));
    }
    return e;
}

} // namespace detail

/// Hermitian eigendecomposition: closed form for 2x2, cyclic Jacobi above.
inline HermEig herm_eig(const CMatrix &m) {
    if (m.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty matrix");
    }
    const double defect = hermiticity_defect(m);
    if (defect > kPsdTol) {
        throw Error(ErrorCode::NotHermitian, "||M - M^dagger||_F = " + std::to_string(defect));
    }
    if (m.dim() == 1) {
        return HermEig{{m(0, 0).real()}, {{1.0}}};
    }
    if (m.dim() == 2) {
        return detail::herm_eig_2x2(m);
    }
    return detail::herm_eig_jacobi(m.hermitian_part());
}

inline double min_eigenvalue(const CMatrix &m) { return herm_eig(m).eigenvalues.front(); }
inline double max_eigenvalue(const CMatrix &m) { return herm_eig(m).eigenvalues.back(); }

/// Largest |eigenvalue| of a Hermitian matrix (its operator norm).
inline double spectral_radius(const CMatrix &m) {
    const auto e = herm_eig(m);
    return std::max(std::abs(e.eigenvalues.front()), std::abs(e.eigenvalues.back()));
}

/// Positive square root. Eigenvalues in [-kPsdTol, 0) are clamped to zero.
inline CMatrix psd_sqrt(const CMatrix &m) {
    const auto e = herm_eig(m);
    if (e.eigenvalues.front() < -kPsdTol) {
        throw Error(ErrorCode::NotPsd, "minimum eigenvalue " + std::to_string(e.eigenvalues.front()));
    }
    return e.reconstruct([](double x) { return std::sqrt(std::max(x, 0.0)); }).hermitian_part();
}

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues set to zero).
inline CMatrix psd_projection(const CMatrix &m) {
    const auto e = herm_eig(m.hermitian_part());
    return e.reconstruct([](double x) { return std::max(x, 0.0); }).hermitian_part();
}

/// Entrywise product in the computational basis.
inline CMatrix schur(const CMatrix &m, const CMatrix &n) {
    m.require_same_dim(n);
    CMatrix r(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            r(i, j) = m(i, j) * n(i, j);
        }
    }
    return r;
}

inline bool is_psd(const CMatrix &m, double tol = kPsdTol) {
    return hermiticity_defect(m) <= tol && min_eigenvalue(m) >= -tol;
}

/// 0 <= E <= 1 within tol.
inline bool is_effect(const CMatrix &e, double tol = kPsdTol) {
    if (hermiticity_defect(e) > tol) {
        return false;
    }
    const auto eig = herm_eig(e);
    return eig.eigenvalues.front() >= -tol && eig.eigenvalues.back() <= 1.0 + tol;
}

/// PSD with unit trace within tol.
inline bool is_state(const CMatrix &rho, double tol = kPsdTol) {
    return is_psd(rho, tol) && std::abs(rho.trace() - Complex(1.0)) <= tol;
}

inline void require_effect(const CMatrix &e) {
    if (!is_effect(e)) {
        throw Error(ErrorCode::NotEffect, "operator is not between 0 and 1");
    }
}

inline void require_state(const CMatrix &rho) {
    if (!is_state(rho)) {
        throw Error(ErrorCode::NotState, "operator is not a unit-trace PSD matrix");
    }
}

/// Born rule tr[E rho], clamped into [0, 1].
inline double born_prob(const CMatrix &effect, const CMatrix &rho) {
    effect.require_same_dim(rho);
    require_effect(effect);
    require_state(rho);
    const double p = (effect * rho).trace().real();
    return std::clamp(p, 0.0, 1.0);
}

/// Re tr[A B] without any validation, for hot loops on already-checked data.
inline double trace_product(const CMatrix &a, const CMatrix &b) {
    a.require_same_dim(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t k = 0; k < a.dim(); ++k) {
            s += (a(i, k) * b(k, i)).real();
        }
    }
    return s;
}

} // namespace roilab
