#pragma once

// Dense small-matrix linear algebra over a real or complex scalar field.
//
// Matrices here are tiny (state dimensions up to a few dozen), so everything
// is kept simple: row-major storage, Gaussian elimination with partial
// pivoting for inverse/solve, and a shifted Hessenberg QR iteration for the
// spectral radius. One generic kernel serves both fields; instantiating with
// double gives the real fast path.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <type_traits>
#include <vector>

#include "rmts/errors.hpp"

namespace rmts {

using Complex = std::complex<double>;

template <typename T>
inline constexpr bool is_complex_v = false;
template <>
inline constexpr bool is_complex_v<Complex> = true;

template <typename T>
concept Scalar = std::is_same_v<T, double> || std::is_same_v<T, Complex>;

// |x|^2. For real scalars this is the plain square.
inline double modulus_sq(double x) { return x * x; }
inline double modulus_sq(const Complex& z) { return std::norm(z); }

inline double abs_val(double x) { return std::abs(x); }
inline double abs_val(const Complex& z) { return std::abs(z); }

template <Scalar T>
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t dim, T fill = T{}) : data_(dim, fill) {}
    Vector(std::initializer_list<T> init) : data_(init) {}

    std::size_t dim() const { return data_.size(); }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    bool operator==(const Vector&) const = default;

private:
    std::vector<T> data_;
};

template <Scalar T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_)
                throw ShapeError("matrix initializer has ragged rows");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealVector = Vector<double>;
using RealMatrix = Matrix<double>;
using ComplexVector = Vector<Complex>;
using ComplexMatrix = Matrix<Complex>;

namespace detail {

inline void require(bool cond, const char* msg) {
    if (!cond) throw ShapeError(msg);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Elementwise arithmetic

template <Scalar T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
    detail::require(a.rows() == b.rows() && a.cols() == b.cols(),
                    "matrix addition: dimension mismatch");
    Matrix<T> out = a;
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

template <Scalar T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
    detail::require(a.rows() == b.rows() && a.cols() == b.cols(),
                    "matrix subtraction: dimension mismatch");
    Matrix<T> out = a;
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

template <Scalar T>
Matrix<T> operator*(const T& c, const Matrix<T>& a) {
    Matrix<T> out = a;
    for (auto& x : out.data()) x *= c;
    return out;
}

inline ComplexMatrix operator*(double c, const ComplexMatrix& a) {
    return Complex(c, 0.0) * a;
}

template <Scalar T>
Vector<T> operator+(const Vector<T>& a, const Vector<T>& b) {
    detail::require(a.dim() == b.dim(), "vector addition: dimension mismatch");
    Vector<T> out = a;
    for (std::size_t i = 0; i < out.dim(); ++i) out[i] += b[i];
    return out;
}

template <Scalar T>
Vector<T> operator-(const Vector<T>& a, const Vector<T>& b) {
    detail::require(a.dim() == b.dim(), "vector subtraction: dimension mismatch");
    Vector<T> out = a;
    for (std::size_t i = 0; i < out.dim(); ++i) out[i] -= b[i];
    return out;
}

template <Scalar T>
Vector<T> operator*(const T& c, const Vector<T>& v) {
    Vector<T> out = v;
    for (auto& x : out.data()) x *= c;
    return out;
}

inline ComplexVector operator*(double c, const ComplexVector& v) {
    return Complex(c, 0.0) * v;
}

// ---------------------------------------------------------------------------
// Products

template <Scalar T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    detail::require(a.cols() == b.rows(), "matrix product: inner dimensions differ");
    Matrix<T> out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            T acc{};
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

// Row accumulation runs left to right; simulation replay relies on this
// order being stable.
template <Scalar T>
Vector<T> operator*(const Matrix<T>& a, const Vector<T>& v) {
    detail::require(a.cols() == v.dim(), "matrix-vector product: dimension mismatch");
    Vector<T> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        T acc{};
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Norms and predicates

template <Scalar T>
double max_norm(const Matrix<T>& a) {
    double m = 0.0;
    for (const auto& x : a.data()) m = std::max(m, abs_val(x));
    return m;
}

template <Scalar T>
double max_norm(const Vector<T>& v) {
    double m = 0.0;
    for (const auto& x : v.data()) m = std::max(m, abs_val(x));
    return m;
}

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

template <Scalar T>
bool all_finite(const Vector<T>& v) {
    return std::all_of(v.data().begin(), v.data().end(),
                       [](const T& x) { return is_finite(x); });
}

template <Scalar T>
bool all_finite(const Matrix<T>& m) {
    return std::all_of(m.data().begin(), m.data().end(),
                       [](const T& x) { return is_finite(x); });
}

template <Scalar T>
Matrix<T> transpose(const Matrix<T>& a) {
    Matrix<T> out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

inline ComplexMatrix conjugate_transpose(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

// ---------------------------------------------------------------------------
// Hadamard modulus-square: every entry replaced by |entry|^2. The result is
// real for either field.

template <Scalar T>
RealMatrix hadamard_modsq(const Matrix<T>& a) {
    RealMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.data().size(); ++i)
        out.data()[i] = modulus_sq(a.data()[i]);
    return out;
}

template <Scalar T>
RealVector hadamard_modsq(const Vector<T>& v) {
    RealVector out(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) out[i] = modulus_sq(v[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Gaussian elimination with partial pivoting.

// Pivots smaller than this are treated as numerically singular.
inline constexpr double kSingularPivot = 1e-12;

namespace detail {

// In-place elimination solving a * x = rhs for several right-hand sides
// stored as columns of rhs.
template <Scalar T>
void gauss_solve_in_place(Matrix<T> a, Matrix<T>& rhs) {
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = abs_val(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double cand = abs_val(a(r, col));
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best < kSingularPivot)
            throw SingularMatrixError("matrix is numerically singular (pivot " +
                                      std::to_string(best) + " at column " +
                                      std::to_string(col) + ")");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            for (std::size_t j = 0; j < rhs.cols(); ++j) std::swap(rhs(col, j), rhs(pivot, j));
        }
        const T inv_pivot = T{1} / a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const T factor = a(r, col) * inv_pivot;
            if (factor == T{}) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
            for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(r, j) -= factor * rhs(col, j);
        }
    }
    // back substitution
    for (std::size_t col = n; col-- > 0;) {
        const T inv_pivot = T{1} / a(col, col);
        for (std::size_t j = 0; j < rhs.cols(); ++j) {
            T acc = rhs(col, j);
            for (std::size_t k = col + 1; k < n; ++k) acc -= a(col, k) * rhs(k, j);
            rhs(col, j) = acc * inv_pivot;
        }
    }
}

} // namespace detail

template <Scalar T>
Matrix<T> inverse(const Matrix<T>& a) {
    detail::require(a.square(), "inverse: matrix must be square");
    Matrix<T> rhs = Matrix<T>::identity(a.rows());
    detail::gauss_solve_in_place(a, rhs);
    return rhs;
}

template <Scalar T>
Vector<T> solve(const Matrix<T>& a, const Vector<T>& rhs) {
    detail::require(a.square(), "solve: matrix must be square");
    detail::require(a.rows() == rhs.dim(), "solve: right-hand side dimension mismatch");
    Matrix<T> b(rhs.dim(), 1);
    for (std::size_t i = 0; i < rhs.dim(); ++i) b(i, 0) = rhs[i];
    detail::gauss_solve_in_place(a, b);
    Vector<T> out(rhs.dim());
    for (std::size_t i = 0; i < rhs.dim(); ++i) out[i] = b(i, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Spectral radius via complex Hessenberg QR iteration with Wilkinson shifts.
// Eigenvectors are never needed, so only the Schur diagonal is produced.

namespace detail {

inline std::pair<Complex, Complex> eig_2x2(const Complex& a, const Complex& b,
                                           const Complex& c, const Complex& d) {
    const Complex tr = a + d;
    const Complex det = a * d - b * c;
    const Complex disc = std::sqrt(tr * tr - 4.0 * det);
    Complex l1 = 0.5 * (tr + disc);
    Complex l2 = 0.5 * (tr - disc);
    // keep the larger root first; recompute the smaller one from the
    // determinant when possible to avoid cancellation
    if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
    if (std::abs(l1) > 0.0) l2 = det / l1;
    return {l1, l2};
}

// Householder similarity reduction to upper Hessenberg form, in place.
inline void hessenberg_reduce(ComplexMatrix& h) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    std::vector<Complex> v(n);
    for (std::size_t col = 0; col + 2 < n; ++col) {
        double norm_sq = 0.0;
        for (std::size_t i = col + 1; i < n; ++i) norm_sq += std::norm(h(i, col));
        const double norm = std::sqrt(norm_sq);
        if (norm == 0.0) continue;
        const Complex x0 = h(col + 1, col);
        const Complex phase = (x0 == Complex{}) ? Complex{1.0} : x0 / std::abs(x0);
        const Complex alpha = -phase * norm;
        double v_norm_sq = 0.0;
        for (std::size_t i = col + 1; i < n; ++i) {
            v[i] = h(i, col);
            if (i == col + 1) v[i] -= alpha;
            v_norm_sq += std::norm(v[i]);
        }
        if (v_norm_sq == 0.0) continue;
        const double inv = 2.0 / v_norm_sq;
        // left update: H <- H - inv * v (v^H H) on rows col+1..n-1
        for (std::size_t j = col; j < n; ++j) {
            Complex dot{};
            for (std::size_t i = col + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
            dot *= inv;
            for (std::size_t i = col + 1; i < n; ++i) h(i, j) -= v[i] * dot;
        }
        // right update: H <- H - inv * (H v) v^H on cols col+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot{};
            for (std::size_t j = col + 1; j < n; ++j) dot += h(i, j) * v[j];
            dot *= inv;
            for (std::size_t j = col + 1; j < n; ++j) h(i, j) -= dot * std::conj(v[j]);
        }
        h(col + 1, col) = alpha;
        for (std::size_t i = col + 2; i < n; ++i) h(i, col) = Complex{};
    }
}

// Givens rotation [c s; -conj(s) c] with real c that maps (a, b) to (r, 0).
inline void givens(const Complex& a, const Complex& b, double& c, Complex& s) {
    const double bb = std::abs(b);
    if (bb == 0.0) {
        c = 1.0;
        s = Complex{};
        return;
    }
    const double aa = std::abs(a);
    const double r = std::hypot(aa, bb);
    if (aa == 0.0) {
        c = 0.0;
        s = std::conj(b) / bb;
        return;
    }
    c = aa / r;
    s = (a / aa) * (std::conj(b) / r);
}

// Eigenvalues of an upper Hessenberg matrix; h is destroyed.
inline std::vector<Complex> hessenberg_eigenvalues(ComplexMatrix& h) {
    const std::size_t n = h.rows();
    std::vector<Complex> eig;
    eig.reserve(n);
    if (n == 0) return eig;

    const double scale = std::max(max_norm(h), 1e-300);
    const double eps = 1e-14;
    long upper = static_cast<long>(n) - 1;
    long its = 0;
    const long max_its = 80 * static_cast<long>(n) + 200;
    long total_its = 0;

    auto negligible = [&](long i) {
        const double bound = eps * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i)));
        return std::abs(h(i, i - 1)) <= std::max(bound, eps * scale * 1e-3);
    };

    while (upper >= 0) {
        if (upper == 0) {
            eig.push_back(h(0, 0));
            --upper;
            continue;
        }
        // find the start of the active unreduced block
        long lo = upper;
        while (lo > 0 && !negligible(lo)) --lo;
        if (lo == upper) {
            eig.push_back(h(upper, upper));
            --upper;
            its = 0;
            continue;
        }
        if (lo == upper - 1) {
            auto [l1, l2] = eig_2x2(h(upper - 1, upper - 1), h(upper - 1, upper),
                                    h(upper, upper - 1), h(upper, upper));
            eig.push_back(l1);
            eig.push_back(l2);
            upper -= 2;
            its = 0;
            continue;
        }
        if (++total_its > max_its) {
            double partial = 0.0;
            for (const auto& l : eig) partial = std::max(partial, std::abs(l));
            for (long i = lo; i <= upper; ++i) partial = std::max(partial, std::abs(h(i, i)));
            throw NumericError("spectral radius: QR iteration exhausted its budget", partial);
        }

        // Wilkinson shift from the trailing 2x2 block; an occasional
        // exceptional shift breaks symmetric cycling
        Complex shift;
        if (++its % 12 == 0) {
            shift = h(upper, upper) +
                    Complex(0.75 * std::abs(h(upper, upper - 1)), 0.0);
        } else {
            auto [l1, l2] = eig_2x2(h(upper - 1, upper - 1), h(upper - 1, upper),
                                    h(upper, upper - 1), h(upper, upper));
            shift = (std::abs(l1 - h(upper, upper)) < std::abs(l2 - h(upper, upper))) ? l1 : l2;
        }

        for (long i = lo; i <= upper; ++i) h(i, i) -= shift;

        // QR step restricted to the active block
        std::vector<double> cs(static_cast<std::size_t>(upper - lo));
        std::vector<Complex> ss(static_cast<std::size_t>(upper - lo));
        for (long i = lo; i < upper; ++i) {
            double c;
            Complex s;
            givens(h(i, i), h(i + 1, i), c, s);
            cs[static_cast<std::size_t>(i - lo)] = c;
            ss[static_cast<std::size_t>(i - lo)] = s;
            for (long j = i; j <= upper; ++j) {
                const Complex hi = h(i, j);
                const Complex hk = h(i + 1, j);
                h(i, j) = c * hi + s * hk;
                h(i + 1, j) = -std::conj(s) * hi + c * hk;
            }
            h(i + 1, i) = Complex{};
        }
        for (long i = lo; i < upper; ++i) {
            const double c = cs[static_cast<std::size_t>(i - lo)];
            const Complex s = ss[static_cast<std::size_t>(i - lo)];
            const long row_end = std::min(i + 1, upper);
            for (long r = lo; r <= row_end; ++r) {
                const Complex hi = h(r, i);
                const Complex hk = h(r, i + 1);
                h(r, i) = c * hi + std::conj(s) * hk;
                h(r, i + 1) = -s * hi + c * hk;
            }
        }
        for (long i = lo; i <= upper; ++i) h(i, i) += shift;
    }
    return eig;
}

} // namespace detail

template <Scalar T>
double spectral_radius(const Matrix<T>& a) {
    detail::require(a.square(), "spectral_radius: matrix must be square");
    const std::size_t n = a.rows();
    if (n == 0) return 0.0;
    if (n == 1) return abs_val(a(0, 0));
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = Complex(a(i, j));
    detail::hessenberg_reduce(h);
    const auto eig = detail::hessenberg_eigenvalues(h);
    double rho = 0.0;
    for (const auto& l : eig) rho = std::max(rho, std::abs(l));
    return rho;
}

} // namespace rmts
