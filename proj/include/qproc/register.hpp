// Copyright 2026 The qproc Authors
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
 * Dense pure states of equal-dimension qudit registers and dense single-qudit
 * operators.
 *
 * Amplitude index convention: an index is read as big-endian base-N digits,
 * so subsystem 1 is the most significant digit. |n>_1 |m>_2 |k>_3 lives at
 * index n*N*N + m*N + k.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qproc {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;

/// Tolerance on the squared norm of anything constructed as a physical state.
inline constexpr double kNormTolerance = 1e-12;

/// Thrown when dimensions, arities or subsystem labels do not fit together.
class ShapeError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a vector that must be a normalized state is not.
class NormalizationError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// One-based subsystem label; position 1 is the most significant digit.
struct Subsystem {
    std::size_t position;
    friend bool operator==(Subsystem, Subsystem) = default;
};

inline std::size_t ipow(std::size_t base, std::size_t exponent) {
    std::size_t result = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        result *= base;
    }
    return result;
}

/// Big-endian digit decomposition of a register index.
inline std::vector<std::size_t> digits_of(std::size_t index, std::size_t dim, std::size_t arity) {
    std::vector<std::size_t> digits(arity);
    for (std::size_t i = arity; i-- > 0;) {
        digits[i] = index % dim;
        index /= dim;
    }
    return digits;
}

inline std::size_t index_of(std::span<const std::size_t> digits, std::size_t dim) {
    std::size_t index = 0;
    for (std::size_t d : digits) {
        if (d >= dim) {
            throw ShapeError("digit " + std::to_string(d) + " out of range for dimension " +
                             std::to_string(dim));
        }
        index = index * dim + d;
    }
    return index;
}

inline double squared_norm(std::span<const Complex> amplitudes) {
    double total = 0.0;
    for (const Complex &a : amplitudes) {
        total += std::norm(a);
    }
    return total;
}

enum class Normalization { Normalized, Unnormalized };

/**
 * Amplitude vector over `arity` qudits of dimension `dim`.
 *
 * The Normalized instantiation checks |<v|v> - 1| <= kNormTolerance on
 * construction; the Unnormalized one holds intermediate results such as
 * projections before renormalization. The two never convert implicitly.
 */
template <Normalization Kind>
class RegisterVector {
  public:
    RegisterVector(std::size_t dim, std::size_t arity, Amplitudes amplitudes)
        : dim_(dim), arity_(arity), amplitudes_(std::move(amplitudes)) {
        if (dim < 2) {
            throw ShapeError("qudit dimension must be at least 2");
        }
        if (arity < 1) {
            throw ShapeError("register needs at least one qudit");
        }
        if (amplitudes_.size() != ipow(dim, arity)) {
            throw ShapeError("amplitude count " + std::to_string(amplitudes_.size()) +
                             " does not equal " + std::to_string(dim) + "^" +
                             std::to_string(arity));
        }
        if constexpr (Kind == Normalization::Normalized) {
            double n2 = qproc::squared_norm(amplitudes_);
            if (!(std::abs(n2 - 1.0) <= kNormTolerance)) {
                throw NormalizationError("state is not normalized (squared norm " +
                                         std::to_string(n2) + ")");
            }
        }
    }

    std::size_t dim() const { return dim_; }
    std::size_t arity() const { return arity_; }
    std::size_t size() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }

    double squared_norm() const { return qproc::squared_norm(amplitudes_); }
    double norm() const { return std::sqrt(squared_norm()); }

    bool same_shape(std::size_t dim, std::size_t arity) const {
        return dim_ == dim && arity_ == arity;
    }

  private:
    std::size_t dim_;
    std::size_t arity_;
    Amplitudes amplitudes_;
};

using QuditRegisterState = RegisterVector<Normalization::Normalized>;
using UnnormalizedVector = RegisterVector<Normalization::Unnormalized>;

template <Normalization Kind>
UnnormalizedVector as_unnormalized(const RegisterVector<Kind> &v) {
    return UnnormalizedVector(v.dim(), v.arity(), Amplitudes(v.amplitudes().begin(), v.amplitudes().end()));
}

/// Rescales to unit norm. Throws NormalizationError for a zero vector.
inline QuditRegisterState normalize(const UnnormalizedVector &v, double zero_cutoff = 0.0) {
    double n = v.norm();
    if (n <= zero_cutoff || n == 0.0) {
        throw NormalizationError("cannot normalize a zero vector");
    }
    Amplitudes out(v.amplitudes().begin(), v.amplitudes().end());
    for (Complex &a : out) {
        a /= n;
    }
    return QuditRegisterState(v.dim(), v.arity(), std::move(out));
}

/// Physical state from amplitudes that are normalized up to accumulated rounding.
/// Removes the rounding; a genuinely unnormalized input still throws.
inline QuditRegisterState renormalized(std::size_t dim, std::size_t arity, Amplitudes amplitudes) {
    UnnormalizedVector v(dim, arity, std::move(amplitudes));
    double n2 = v.squared_norm();
    if (std::abs(n2 - 1.0) > 1e-9) {
        throw NormalizationError("expected a normalized vector, squared norm " + std::to_string(n2));
    }
    return normalize(v);
}

inline UnnormalizedVector operator*(Complex scale, const UnnormalizedVector &v) {
    Amplitudes out(v.amplitudes().begin(), v.amplitudes().end());
    for (Complex &a : out) {
        a *= scale;
    }
    return UnnormalizedVector(v.dim(), v.arity(), std::move(out));
}

inline UnnormalizedVector operator+(const UnnormalizedVector &a, const UnnormalizedVector &b) {
    if (!a.same_shape(b.dim(), b.arity())) {
        throw ShapeError("cannot add vectors of different shape");
    }
    Amplitudes out(a.amplitudes().begin(), a.amplitudes().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += b[i];
    }
    return UnnormalizedVector(a.dim(), a.arity(), std::move(out));
}

inline UnnormalizedVector operator-(const UnnormalizedVector &a, const UnnormalizedVector &b) {
    return a + Complex(-1.0) * b;
}

/// <a|b>, conjugate-linear in `a`.
template <Normalization KA, Normalization KB>
Complex inner_product(const RegisterVector<KA> &a, const RegisterVector<KB> &b) {
    if (!a.same_shape(b.dim(), b.arity())) {
        throw ShapeError("inner product of vectors with different shapes");
    }
    Complex total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += std::conj(a[i]) * b[i];
    }
    return total;
}

/// |<a|b>|^2
template <Normalization KA, Normalization KB>
double fidelity(const RegisterVector<KA> &a, const RegisterVector<KB> &b) {
    return std::norm(inner_product(a, b));
}

template <Normalization KA, Normalization KB>
double max_abs_diff(const RegisterVector<KA> &a, const RegisterVector<KB> &b) {
    if (!a.same_shape(b.dim(), b.arity())) {
        throw ShapeError("comparing vectors with different shapes");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

/// Complex square matrix, row-major, acting on a single qudit of dimension dim().
class DenseOperator {
  public:
    DenseOperator(std::size_t dim, std::vector<Complex> entries, std::string label = {})
        : dim_(dim), entries_(std::move(entries)), label_(std::move(label)) {
        if (dim == 0) {
            throw ShapeError("operator dimension must be positive");
        }
        if (entries_.size() != dim * dim) {
            throw ShapeError("operator needs " + std::to_string(dim * dim) + " entries, got " +
                             std::to_string(entries_.size()));
        }
    }

    static DenseOperator identity(std::size_t dim, std::string label = "identity") {
        std::vector<Complex> e(dim * dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            e[i * dim + i] = 1.0;
        }
        return DenseOperator(dim, std::move(e), std::move(label));
    }

    static DenseOperator zero(std::size_t dim) {
        return DenseOperator(dim, std::vector<Complex>(dim * dim, 0.0));
    }

    static DenseOperator outer(std::span<const Complex> ket, std::span<const Complex> bra) {
        if (ket.size() != bra.size()) {
            throw ShapeError("outer product of vectors with different lengths");
        }
        std::size_t dim = ket.size();
        std::vector<Complex> e(dim * dim);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                e[r * dim + c] = ket[r] * std::conj(bra[c]);
            }
        }
        return DenseOperator(dim, std::move(e));
    }

    std::size_t dim() const { return dim_; }
    const std::string &label() const { return label_; }
    std::span<const Complex> entries() const { return entries_; }

    Complex operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
    Complex &operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }

    DenseOperator with_label(std::string label) const {
        DenseOperator copy = *this;
        copy.label_ = std::move(label);
        return copy;
    }

    DenseOperator adjoint() const {
        std::vector<Complex> e(entries_.size());
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                e[c * dim_ + r] = std::conj(entries_[r * dim_ + c]);
            }
        }
        return DenseOperator(dim_, std::move(e));
    }

    Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            t += entries_[i * dim_ + i];
        }
        return t;
    }

    /// Tr(A^dagger A), the squared Hilbert-Schmidt norm.
    double hs_norm_squared() const { return squared_norm(entries_); }

    Amplitudes apply(std::span<const Complex> v) const {
        if (v.size() != dim_) {
            throw ShapeError("operator/vector dimension mismatch");
        }
        Amplitudes out(dim_, 0.0);
        for (std::size_t r = 0; r < dim_; ++r) {
            Complex acc = 0.0;
            for (std::size_t c = 0; c < dim_; ++c) {
                acc += entries_[r * dim_ + c] * v[c];
            }
            out[r] = acc;
        }
        return out;
    }

    bool is_unitary(double tolerance = 1e-12) const {
        return max_abs_diff(adjoint() * *this, identity(dim_)) <= tolerance;
    }

    friend DenseOperator operator*(const DenseOperator &a, const DenseOperator &b) {
        if (a.dim_ != b.dim_) {
            throw ShapeError("operator product dimension mismatch");
        }
        std::size_t n = a.dim_;
        std::vector<Complex> e(n * n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t k = 0; k < n; ++k) {
                Complex ark = a.entries_[r * n + k];
                if (ark == Complex(0.0)) {
                    continue;
                }
                for (std::size_t c = 0; c < n; ++c) {
                    e[r * n + c] += ark * b.entries_[k * n + c];
                }
            }
        }
        return DenseOperator(n, std::move(e));
    }

    friend DenseOperator operator+(const DenseOperator &a, const DenseOperator &b) {
        if (a.dim_ != b.dim_) {
            throw ShapeError("operator sum dimension mismatch");
        }
        std::vector<Complex> e = a.entries_;
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] += b.entries_[i];
        }
        return DenseOperator(a.dim_, std::move(e));
    }

    friend DenseOperator operator-(const DenseOperator &a, const DenseOperator &b) {
        return a + Complex(-1.0) * b;
    }

    friend DenseOperator operator*(Complex s, const DenseOperator &a) {
        std::vector<Complex> e = a.entries_;
        for (Complex &x : e) {
            x *= s;
        }
        return DenseOperator(a.dim_, std::move(e));
    }

    friend double max_abs_diff(const DenseOperator &a, const DenseOperator &b) {
        if (a.dim_ != b.dim_) {
            throw ShapeError("comparing operators of different dimension");
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < a.entries_.size(); ++i) {
            worst = std::max(worst, std::abs(a.entries_[i] - b.entries_[i]));
        }
        return worst;
    }

  private:
    std::size_t dim_;
    std::vector<Complex> entries_;
    std::string label_;
};

/// Kronecker product; `a` acts on the more significant factor.
inline DenseOperator kron(const DenseOperator &a, const DenseOperator &b) {
    std::size_t na = a.dim();
    std::size_t nb = b.dim();
    std::size_t n = na * nb;
    std::vector<Complex> e(n * n);
    for (std::size_t ra = 0; ra < na; ++ra) {
        for (std::size_t ca = 0; ca < na; ++ca) {
            for (std::size_t rb = 0; rb < nb; ++rb) {
                for (std::size_t cb = 0; cb < nb; ++cb) {
                    e[(ra * nb + rb) * n + ca * nb + cb] = a(ra, ca) * b(rb, cb);
                }
            }
        }
    }
    return DenseOperator(n, std::move(e));
}

inline QuditRegisterState basis_state(std::size_t dim, std::size_t arity,
                                      std::span<const std::size_t> digits) {
    if (digits.size() != arity) {
        throw ShapeError("expected " + std::to_string(arity) + " digits, got " +
                         std::to_string(digits.size()));
    }
    std::size_t index = index_of(digits, dim);
    Amplitudes amps(ipow(dim, arity), 0.0);
    amps[index] = 1.0;
    return QuditRegisterState(dim, arity, std::move(amps));
}

inline QuditRegisterState basis_state(std::size_t dim, std::size_t arity,
                                      std::initializer_list<std::size_t> digits) {
    std::vector<std::size_t> d(digits);
    return basis_state(dim, arity, std::span<const std::size_t>(d));
}

namespace detail {

inline Amplitudes kron_amplitudes(std::span<const Complex> a, std::span<const Complex> b) {
    Amplitudes out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i * b.size() + j] = a[i] * b[j];
        }
    }
    return out;
}

inline void check_subsystem(Subsystem s, std::size_t arity) {
    if (s.position < 1 || s.position > arity) {
        throw ShapeError("subsystem " + std::to_string(s.position) + " out of range 1.." +
                         std::to_string(arity));
    }
}

/// Distance in the flat index between neighbouring digits of subsystem `s`.
inline std::size_t stride_of(Subsystem s, std::size_t dim, std::size_t arity) {
    return ipow(dim, arity - s.position);
}

} // namespace detail

/// Kronecker product of registers; `a`'s qudits become the most significant.
inline QuditRegisterState tensor(const QuditRegisterState &a, const QuditRegisterState &b) {
    if (a.dim() != b.dim()) {
        throw ShapeError("tensor product of registers with different qudit dimension");
    }
    return renormalized(a.dim(), a.arity() + b.arity(),
                        detail::kron_amplitudes(a.amplitudes(), b.amplitudes()));
}

template <Normalization KA, Normalization KB>
UnnormalizedVector tensor_unnormalized(const RegisterVector<KA> &a, const RegisterVector<KB> &b) {
    if (a.dim() != b.dim()) {
        throw ShapeError("tensor product of registers with different qudit dimension");
    }
    return UnnormalizedVector(a.dim(), a.arity() + b.arity(),
                              detail::kron_amplitudes(a.amplitudes(), b.amplitudes()));
}

/// (I x ... x op x ... x I) v with `op` on subsystem `target`.
template <Normalization Kind>
UnnormalizedVector apply_to_subsystem(const DenseOperator &op, Subsystem target,
                                      const RegisterVector<Kind> &v) {
    const std::size_t n = v.dim();
    if (op.dim() != n) {
        throw ShapeError("operator dimension " + std::to_string(op.dim()) +
                         " does not match qudit dimension " + std::to_string(n));
    }
    detail::check_subsystem(target, v.arity());
    const std::size_t stride = detail::stride_of(target, n, v.arity());
    const std::size_t block = stride * n;
    Amplitudes out(v.size(), 0.0);
    for (std::size_t base = 0; base < v.size(); base += block) {
        for (std::size_t low = 0; low < stride; ++low) {
            const std::size_t origin = base + low;
            for (std::size_t r = 0; r < n; ++r) {
                Complex acc = 0.0;
                for (std::size_t c = 0; c < n; ++c) {
                    acc += op(r, c) * v[origin + c * stride];
                }
                out[origin + r * stride] = acc;
            }
        }
    }
    return UnnormalizedVector(n, v.arity(), std::move(out));
}

/// Applies an operator acting on the whole register, op.dim() == dim^arity.
template <Normalization Kind>
UnnormalizedVector apply_to_register(const DenseOperator &op, const RegisterVector<Kind> &v) {
    if (op.dim() != v.size()) {
        throw ShapeError("register operator must have dimension dim^arity");
    }
    return UnnormalizedVector(v.dim(), v.arity(), op.apply(v.amplitudes()));
}

/// Applies an operator of dimension dim^2 to the ordered pair (first, second).
template <Normalization Kind>
UnnormalizedVector apply_to_pair(const DenseOperator &op, Subsystem first, Subsystem second,
                                 const RegisterVector<Kind> &v) {
    const std::size_t n = v.dim();
    if (op.dim() != n * n) {
        throw ShapeError("two-qudit operator must have dimension dim^2");
    }
    detail::check_subsystem(first, v.arity());
    detail::check_subsystem(second, v.arity());
    if (first == second) {
        throw ShapeError("two-qudit operator needs two distinct subsystems");
    }
    const std::size_t s1 = detail::stride_of(first, n, v.arity());
    const std::size_t s2 = detail::stride_of(second, n, v.arity());
    Amplitudes out(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t d1 = (i / s1) % n;
        const std::size_t d2 = (i / s2) % n;
        const std::size_t origin = i - d1 * s1 - d2 * s2;
        Complex acc = 0.0;
        for (std::size_t c1 = 0; c1 < n; ++c1) {
            for (std::size_t c2 = 0; c2 < n; ++c2) {
                acc += op(d1 * n + d2, c1 * n + c2) * v[origin + c1 * s1 + c2 * s2];
            }
        }
        out[i] = acc;
    }
    return UnnormalizedVector(n, v.arity(), std::move(out));
}

} // namespace qproc
