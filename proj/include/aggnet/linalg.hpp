#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aggnet/errors.hpp"
#include "aggnet/rational.hpp"

namespace aggnet {

// Minimal dense matrix; row-major.
template <typename T>
struct Matrix {
    int rows = 0, cols = 0;
    std::vector<T> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c)) {}

    T& operator()(int i, int j) { return a[size_t(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[size_t(i) * cols + j]; }
};

namespace detail {

// Augmented integer matrix [A | b] with each row scaled by the lcm of its
// denominators. Row scaling leaves the solution unchanged and lets the
// elimination stay fraction-free.
inline Matrix<mpz_class> clear_denominators(const Matrix<Rational>& A,
                                            const std::vector<Rational>& b) {
    int n = A.rows;
    Matrix<mpz_class> M(n, n + 1);
    for (int i = 0; i < n; ++i) {
        mpz_class l = 1;
        for (int j = 0; j < n; ++j)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), A(i, j).get_den_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), b[size_t(i)].get_den_mpz_t());
        for (int j = 0; j < n; ++j) {
            Rational s = A(i, j) * l;
            M(i, j) = s.get_num(); // denominator is 1 after scaling
        }
        Rational s = b[size_t(i)] * l;
        M(i, n) = s.get_num();
    }
    return M;
}

// Fraction-free (Bareiss) elimination on the augmented matrix. Every division
// is exact by the Bareiss minor identity. With spd = true no rows are swapped
// and each pivot must be strictly positive (leading principal minors of a
// positive definite matrix, up to positive row scales); otherwise the first
// nonzero candidate below the diagonal is swapped in.
inline std::vector<Rational> bareiss_solve(Matrix<mpz_class>& M, bool spd,
                                           const char* context) {
    int n = M.rows;
    mpz_class prev = 1;
    for (int k = 0; k < n; ++k) {
        if (spd) {
            if (M(k, k) <= 0)
                throw NumericError(std::string(context) +
                                   ": system not positive definite");
        } else if (M(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (M(i, k) != 0) {
                    p = i;
                    break;
                }
            if (p < 0)
                throw NumericError(std::string(context) + ": singular system");
            for (int j = k; j <= n; ++j)
                std::swap(M(k, j), M(p, j));
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j <= n; ++j) {
                mpz_class t = M(k, k) * M(i, j) - M(i, k) * M(k, j);
                mpz_divexact(M(i, j).get_mpz_t(), t.get_mpz_t(),
                             prev.get_mpz_t());
            }
            M(i, k) = 0;
        }
        prev = M(k, k);
    }
    std::vector<Rational> x;
    x.resize(size_t(n));
    for (int i = n - 1; i >= 0; --i) {
        Rational acc(M(i, n));
        for (int j = i + 1; j < n; ++j)
            acc -= Rational(M(i, j)) * x[size_t(j)];
        x[size_t(i)] = acc / Rational(M(i, i));
    }
    return x;
}

} // namespace detail

// Exact solve of an SPD system; throws NumericError when a pivot fails.
inline std::vector<Rational> solve_spd_exact(const Matrix<Rational>& A,
                                             const std::vector<Rational>& b,
                                             const char* context = "solve_spd_exact") {
    if (A.rows == 0)
        return {};
    auto M = detail::clear_denominators(A, b);
    return detail::bareiss_solve(M, true, context);
}

// Exact solve of a general square system with row swaps.
inline std::vector<Rational> solve_exact(const Matrix<Rational>& A,
                                         const std::vector<Rational>& b,
                                         const char* context = "solve_exact") {
    if (A.rows == 0)
        return {};
    auto M = detail::clear_denominators(A, b);
    return detail::bareiss_solve(M, false, context);
}

struct FloatSolve {
    std::vector<double> x;
    bool degenerate = false; // minimum-norm fallback was taken
};

// Float SPD solve by Cholesky. A failed factorization or a bad residual means
// the system is (numerically) singular: either fall back to the minimum-norm
// least-squares solution with a flag, or throw.
inline FloatSolve solve_spd_float(const Matrix<double>& A,
                                  const std::vector<double>& b,
                                  bool allow_min_norm,
                                  const char* context = "solve_spd_float") {
    int n = A.rows;
    FloatSolve out;
    if (n == 0)
        return out;
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        rhs(i) = b[size_t(i)];
        for (int j = 0; j < n; ++j)
            M(i, j) = A(i, j);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    bool ok = llt.info() == Eigen::Success;
    Eigen::VectorXd x;
    if (ok) {
        x = llt.solve(rhs);
        double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
        ok = (M * x - rhs).lpNorm<Eigen::Infinity>() <= 1e-6 * scale;
    }
    if (!ok) {
        if (!allow_min_norm)
            throw NumericError(std::string(context) +
                               ": system not positive definite");
        x = M.completeOrthogonalDecomposition().solve(rhs);
        out.degenerate = true;
    }
    out.x.assign(x.data(), x.data() + n);
    return out;
}

} // namespace aggnet
