#ifndef TOTPOS_SYMFUNC_HPP
#define TOTPOS_SYMFUNC_HPP

#include "totpos/bigfloat.hpp"
#include "totpos/matrix.hpp"
#include "totpos/rational.hpp"

#include <stdexcept>
#include <vector>

namespace totpos {

/// Memoized table of Stirling numbers of the second kind, built eagerly
/// so concurrent reads never contend.
class StirlingTriangle {
public:
    explicit StirlingTriangle(long k_max = 64) : k_max_(k_max) {
        if (k_max < 0) throw std::invalid_argument("StirlingTriangle: k_max must be >= 0");
        table_.resize(k_max + 1);
        table_[0] = {Integer(1)};
        for (long k = 1; k <= k_max; ++k) {
            table_[k].assign(k + 1, Integer(0));
            for (long m = 1; m <= k; ++m) {
                Integer below = table_[k - 1].size() > static_cast<std::size_t>(m)
                                    ? table_[k - 1][m] : Integer(0);
                table_[k][m] = m * below + table_[k - 1][m - 1];
            }
        }
    }

    long k_max() const { return k_max_; }

    Integer operator()(long k, long m) const {
        if (k < 0 || m < 0) throw std::invalid_argument("stirling2: negative arguments");
        if (m > k) return Integer(0);
        if (k > k_max_) throw std::invalid_argument("stirling2: k exceeds table size");
        return table_[k][m];
    }

private:
    long k_max_;
    std::vector<std::vector<Integer>> table_;
};

/// S(k, m) via the shared default triangle (k <= 64).
inline Integer stirling2(long k, long m) {
    static const StirlingTriangle triangle(64);
    return triangle(k, m);
}

/// Coefficient list of the Bell polynomial B_k(u) = sum_m S(k,m) u^m,
/// lowest degree first; B_0 = 1.
inline std::vector<Integer> bell_poly(long k) {
    if (k < 0) throw std::invalid_argument("bell_poly: requires k >= 0");
    std::vector<Integer> coeffs(k + 1, Integer(0));
    if (k == 0) { coeffs[0] = 1; return coeffs; }
    for (long m = 1; m <= k; ++m) coeffs[m] = stirling2(k, m);
    return coeffs;
}

inline BigScalar bell_poly_eval(long k, const BigScalar& u) {
    const PrecisionContext ctx = u.context();
    auto coeffs = bell_poly(k);
    BigScalar sum = make_scalar(0L, ctx);
    BigScalar u_pow = make_scalar(1L, ctx);
    for (const auto& c : coeffs) {
        sum += to_scalar(c, ctx) * u_pow;
        u_pow *= u;
    }
    return sum;
}

/// Poisson-moment route to B_k(u): partial sum of
/// sum_m e^{-u} u^m m^k / m!  (B_k(u) = E U^k, U ~ Poisson(u)).
inline BigScalar bell_eval_poisson(long k, const BigScalar& u, long terms) {
    if (k < 0) throw std::invalid_argument("bell_eval_poisson: requires k >= 0");
    const PrecisionContext ctx = u.context();
    if (!(u > make_scalar(0L, ctx)))
        throw std::domain_error("bell_eval_poisson: requires u > 0");
    BigScalar sum = make_scalar(0L, ctx);
    BigScalar pmf = exp(-u);  // e^{-u} u^m / m!, starting at m = 0
    for (long m = 0; m < terms; ++m) {
        BigScalar mk = (m == 0 && k == 0) ? make_scalar(1L, ctx)
                                          : pow(make_scalar(m, ctx), k);
        sum += pmf * mk;
        pmf *= u / make_scalar(m + 1, ctx);
    }
    return sum;
}

/// Reversed-coefficient companion Btilde_k(lambda) = lambda^k B_k(1/lambda)
/// = sum_{m=0}^{k-1} S(k, k-m) lambda^m for k >= 1; Btilde_0 = 1.
inline BigScalar btilde(long k, const BigScalar& lambda, const StirlingTriangle& triangle) {
    if (k < 0) throw std::invalid_argument("btilde: requires k >= 0");
    const PrecisionContext ctx = lambda.context();
    if (!(lambda > make_scalar(0L, ctx))) throw std::domain_error("btilde: requires lambda > 0");
    if (k == 0) return make_scalar(1L, ctx);
    BigScalar sum = make_scalar(0L, ctx);
    BigScalar l_pow = make_scalar(1L, ctx);
    for (long m = 0; m <= k - 1; ++m) {
        sum += to_scalar(triangle(k, k - m), ctx) * l_pow;
        l_pow *= lambda;
    }
    return sum;
}

inline BigScalar btilde(long k, const BigScalar& lambda) {
    static const StirlingTriangle triangle(96);  // generating-function checks go past 64
    return btilde(k, lambda, triangle);
}

/// Weakly decreasing list of nonnegative integers.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<long> parts) : parts_(std::move(parts)) {
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] < 0) throw std::invalid_argument("Partition: parts must be >= 0");
            if (i > 0 && parts_[i] > parts_[i - 1])
                throw std::invalid_argument("Partition: parts must be weakly decreasing");
        }
    }

    std::size_t size() const { return parts_.size(); }
    long operator[](std::size_t i) const { return parts_.at(i); }
    const std::vector<long>& parts() const { return parts_; }

    long weight() const {
        long w = 0;
        for (long p : parts_) w += p;
        return w;
    }

private:
    std::vector<long> parts_;
};

/// Schur function via the bialternant quotient
/// det(t_j^{theta_i + m - i}) / prod_{i<j} (t_i - t_j).
/// Arguments must be positive and pairwise well separated; confluent
/// points are rejected, not regularized.
inline BigScalar schur(const Partition& theta, const std::vector<BigScalar>& t) {
    const std::size_t m = theta.size();
    if (t.size() != m) throw std::invalid_argument("schur: length mismatch");
    if (m == 0) throw std::invalid_argument("schur: empty partition");
    const PrecisionContext ctx = t[0].context();
    const BigScalar zero = make_scalar(0L, ctx);
    const BigScalar spread_tol = pow10(-(ctx.digits() / 4), ctx);
    for (std::size_t i = 0; i < m; ++i) {
        check_same_context(t[0], t[i]);
        if (!(t[i] > zero)) throw std::domain_error("schur: arguments must be positive");
        for (std::size_t j = i + 1; j < m; ++j)
            if (abs(t[i] - t[j]) < spread_tol)
                throw std::domain_error("schur: arguments too close (confluent bialternant)");
    }
    Grid num(m, std::vector<BigScalar>());
    for (std::size_t i = 0; i < m; ++i) {
        long e = theta[i] + static_cast<long>(m) - static_cast<long>(i) - 1;
        for (std::size_t j = 0; j < m; ++j) num[i].push_back(pow(t[j], e));
    }
    BigScalar denom = make_scalar(1L, ctx);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) denom *= t[i] - t[j];
    return det(num) / denom;
}

/// Matrix with entries lambda_i^{x_j}; its determinant is positive for any
/// strictly descending positive lambda grid and descending x grid.
inline KernelMatrix power_matrix(const DescendingTuple& lambdas, const DescendingTuple& xs) {
    if (lambdas.size() == 0) throw std::invalid_argument("power_matrix: empty grid");
    const PrecisionContext ctx = lambdas[0].context();
    const BigScalar zero = make_scalar(0L, ctx);
    for (const auto& l : lambdas)
        if (!(l > zero)) throw std::domain_error("power_matrix: lambdas must be positive");
    Grid entries(lambdas.size(), std::vector<BigScalar>());
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j)
            entries[i].push_back(exp(xs[j] * log(lambdas[i])));
    return KernelMatrix(lambdas, xs, std::move(entries));
}

/// Exact discrete Binet-Cauchy identity:
///   det( sum_m A[i][m] B[m][j] nu[m] ) =
///   sum_{m_1 < ... < m_n} det(A columns m) det(B rows m) prod nu,
/// verified in rational arithmetic.  A is n x p, B is p x n, p >= n.
inline bool binet_cauchy_discrete_check(const RationalGrid& a, const RationalGrid& b,
                                        const std::vector<Rational>& nu) {
    const std::size_t n = a.size();
    if (n == 0) throw std::invalid_argument("binet_cauchy: empty A");
    const std::size_t p = a.front().size();
    if (p < n) throw std::invalid_argument("binet_cauchy: requires p >= n");
    if (b.size() != p || nu.size() != p)
        throw std::invalid_argument("binet_cauchy: dimension mismatch");
    for (const auto& row : a)
        if (row.size() != p) throw std::invalid_argument("binet_cauchy: ragged A");
    for (const auto& row : b)
        if (row.size() != n) throw std::invalid_argument("binet_cauchy: ragged B");

    RationalGrid composite(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t m = 0; m < p; ++m)
                composite[i][j] += a[i][m] * b[m][j] * nu[m];
    Rational lhs = rational_det(composite);

    Rational rhs = 0;
    std::vector<std::size_t> all_rows(n);
    for (std::size_t i = 0; i < n; ++i) all_rows[i] = i;
    for (const auto& sel : index_subsets(p, n)) {
        RationalGrid a_minor(n, std::vector<Rational>());
        RationalGrid b_minor;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t m : sel) a_minor[i].push_back(a[i][m]);
        for (std::size_t m : sel) b_minor.push_back(b[m]);
        Rational nu_prod = 1;
        for (std::size_t m : sel) nu_prod *= nu[m];
        rhs += rational_det(a_minor) * rational_det(b_minor) * nu_prod;
    }
    return lhs == rhs;
}

}  // namespace totpos

#endif  // TOTPOS_SYMFUNC_HPP
