#ifndef TOTPOS_MATRIX_HPP
#define TOTPOS_MATRIX_HPP

#include "totpos/bigfloat.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace totpos {

using Grid = std::vector<std::vector<BigScalar>>;

/// Strictly decreasing finite sequence of scalars; the lambda / x grids
/// every kernel determinant is built on.  Strictness is enforced at
/// construction: callers wanting ties must perturb explicitly.
class DescendingTuple {
public:
    DescendingTuple() = default;

    explicit DescendingTuple(std::vector<BigScalar> values) : values_(std::move(values)) {
        for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
            check_same_context(values_[i], values_[i + 1]);
            if (!(values_[i] > values_[i + 1]))
                throw std::invalid_argument("DescendingTuple: values must be strictly decreasing");
        }
    }

    std::size_t size() const { return values_.size(); }
    const BigScalar& operator[](std::size_t i) const { return values_.at(i); }
    const std::vector<BigScalar>& values() const { return values_; }

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

private:
    std::vector<BigScalar> values_;
};

/// r x s grid with entries[i][j] = w(lambda_i, x_j) on descending grids.
struct KernelMatrix {
    DescendingTuple lambdas;
    DescendingTuple xs;
    Grid entries;

    KernelMatrix() = default;
    KernelMatrix(DescendingTuple l, DescendingTuple x, Grid e)
        : lambdas(std::move(l)), xs(std::move(x)), entries(std::move(e)) {
        if (entries.size() != lambdas.size())
            throw std::invalid_argument("KernelMatrix: row count mismatch");
        for (const auto& row : entries)
            if (row.size() != xs.size())
                throw std::invalid_argument("KernelMatrix: column count mismatch");
    }

    std::size_t rows() const { return entries.size(); }
    std::size_t cols() const { return entries.empty() ? 0 : entries.front().size(); }
};

enum class Sign { Negative, Zero, Positive };

inline const char* to_string(Sign s) {
    switch (s) {
        case Sign::Negative: return "negative";
        case Sign::Zero: return "zero";
        default: return "positive";
    }
}

/// Relative zero classification: a value is Zero when it is smaller than
/// 10^(-sign_tol_exponent) times the supplied magnitude reference.
inline Sign sign_classify(const BigScalar& v, const BigScalar& scale,
                          const PrecisionContext& ctx) {
    if (!(scale > make_scalar(0L, scale.context())))
        throw std::invalid_argument("sign_classify: scale must be positive");
    BigScalar threshold = scale * pow10(-ctx.sign_tol_exponent(), scale.context());
    if (abs(v) < threshold) return Sign::Zero;
    return v.is_negative() ? Sign::Negative : Sign::Positive;
}

/// Determinant by pivoted Gaussian elimination in the ambient precision.
/// Deterministic for a fixed context and input.
inline BigScalar det(const Grid& m) {
    const std::size_t n = m.size();
    if (n == 0) throw std::invalid_argument("det: empty matrix");
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("det: matrix must be square");

    Grid a = m;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) check_same_context(a[0][0], a[i][j]);

    const PrecisionContext ctx = a[0][0].context();
    BigScalar result = make_scalar(1L, ctx);
    bool negate = false;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (abs(a[r][col]) > abs(a[pivot][col])) pivot = r;
        if (a[pivot][col].is_zero()) return make_scalar(0L, ctx);
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            negate = !negate;
        }
        result *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col].is_zero()) continue;
            BigScalar factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    return negate ? -result : result;
}

inline BigScalar det(const KernelMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: kernel matrix must be square");
    return det(m.entries);
}

/// Determinant of the submatrix selected by strictly increasing index lists.
inline BigScalar minor_det(const Grid& m, const std::vector<std::size_t>& row_indices,
                           const std::vector<std::size_t>& col_indices) {
    if (row_indices.size() != col_indices.size())
        throw std::invalid_argument("minor: index lists must have equal length");
    if (row_indices.empty()) throw std::invalid_argument("minor: empty index lists");
    auto check_indices = [](const std::vector<std::size_t>& idx, std::size_t bound) {
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] >= bound) throw std::invalid_argument("minor: index out of range");
            if (i > 0 && idx[i] <= idx[i - 1])
                throw std::invalid_argument("minor: index lists must be strictly increasing");
        }
    };
    check_indices(row_indices, m.size());
    check_indices(col_indices, m.empty() ? 0 : m.front().size());

    Grid sub;
    sub.reserve(row_indices.size());
    for (std::size_t r : row_indices) {
        std::vector<BigScalar> row;
        row.reserve(col_indices.size());
        for (std::size_t c : col_indices) row.push_back(m[r][c]);
        sub.push_back(std::move(row));
    }
    return det(sub);
}

/// Hadamard-style magnitude reference for a minor: product over selected
/// rows of the Euclidean norm of the row restricted to selected columns.
inline BigScalar minor_scale(const Grid& m, const std::vector<std::size_t>& row_indices,
                             const std::vector<std::size_t>& col_indices,
                             const PrecisionContext& ctx) {
    BigScalar scale = make_scalar(1L, ctx);
    for (std::size_t r : row_indices) {
        BigScalar s = make_scalar(0L, ctx);
        for (std::size_t c : col_indices) s += m[r][c] * m[r][c];
        scale *= sqrt(s);
    }
    return scale;
}

struct MinorRecord {
    std::vector<std::size_t> row_set;
    std::vector<std::size_t> col_set;
    BigScalar value;
    Sign sign;        // sign of the (possibly RR-flipped) value
    Sign raw_sign;    // sign of the determinant itself
};

/// Minor-by-minor sign classification of a kernel matrix.  When rr_signed
/// is set, each size-s minor is compared after multiplication by
/// (-1)^(s(s-1)/2), the reverse-rule sign convention.
struct SignReport {
    Grid entries;
    std::vector<MinorRecord> minors;
    bool rr_signed = false;
};

inline std::vector<std::vector<std::size_t>> index_subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

inline bool rr_sign_flips(std::size_t s) { return (s * (s - 1) / 2) % 2 == 1; }

/// Evaluate and classify every minor of sizes 1..max_order of a square grid.
inline SignReport classify_all_minors(const Grid& m, const PrecisionContext& ctx,
                                      bool rr_signed, std::size_t max_order = 0) {
    const std::size_t n = m.size();
    if (max_order == 0) max_order = n;
    SignReport report;
    report.entries = m;
    report.rr_signed = rr_signed;
    const BigScalar zero = make_scalar(0L, ctx);
    for (std::size_t s = 1; s <= max_order; ++s) {
        auto rows = index_subsets(n, s);
        auto cols = index_subsets(m.front().size(), s);
        for (const auto& rs : rows) {
            for (const auto& cs : cols) {
                BigScalar value = minor_det(m, rs, cs);
                BigScalar scale = minor_scale(m, rs, cs, ctx);
                Sign raw = (scale > zero) ? sign_classify(value, scale, ctx) : Sign::Zero;
                Sign adjusted = raw;
                if (rr_signed && rr_sign_flips(s)) {
                    if (raw == Sign::Positive) adjusted = Sign::Negative;
                    else if (raw == Sign::Negative) adjusted = Sign::Positive;
                }
                report.minors.push_back({rs, cs, value, adjusted, raw});
            }
        }
    }
    return report;
}

}  // namespace totpos

#endif  // TOTPOS_MATRIX_HPP
