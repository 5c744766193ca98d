#ifndef TOTPOS_RATIONAL_HPP
#define TOTPOS_RATIONAL_HPP

#include "totpos/bigfloat.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <vector>

namespace totpos {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

using RationalGrid = std::vector<std::vector<Rational>>;

/// Exact determinant by fraction-free (Bareiss) elimination.  Used as the
/// oracle for the big-float determinant and inside the exact
/// Binet-Cauchy check.
inline Rational rational_det(const RationalGrid& m) {
    const std::size_t n = m.size();
    if (n == 0) throw std::invalid_argument("rational_det: empty matrix");
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("rational_det: matrix must be square");

    RationalGrid a = m;
    Rational result = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) return Rational(0);
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            result = -result;
        }
        result *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            Rational factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    return result;
}

inline Rational rational_minor(const RationalGrid& m, const std::vector<std::size_t>& rows,
                               const std::vector<std::size_t>& cols) {
    if (rows.size() != cols.size())
        throw std::invalid_argument("rational_minor: index lists must have equal length");
    RationalGrid sub;
    sub.reserve(rows.size());
    for (std::size_t r : rows) {
        std::vector<Rational> row;
        row.reserve(cols.size());
        for (std::size_t c : cols) row.push_back(m.at(r).at(c));
        sub.push_back(std::move(row));
    }
    return rational_det(sub);
}

/// Round an exact rational into a precision context (one rounding).
inline BigScalar to_scalar(const Rational& q, const PrecisionContext& ctx) {
    BigScalar r(ctx);
    mpfr_set_q(r.raw(), q.backend().data(), MPFR_RNDN);
    return r;
}

inline BigScalar to_scalar(const Integer& z, const PrecisionContext& ctx) {
    BigScalar r(ctx);
    mpfr_set_z(r.raw(), z.backend().data(), MPFR_RNDN);
    return r;
}

}  // namespace totpos

#endif  // TOTPOS_RATIONAL_HPP
