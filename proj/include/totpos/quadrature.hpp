#ifndef TOTPOS_QUADRATURE_HPP
#define TOTPOS_QUADRATURE_HPP

#include "totpos/bigfloat.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace totpos {

/// Gauss-Legendre nodes and weights on [-1, 1], computed at the working
/// precision by Newton iteration on P_n, cached per (digits, n).
struct GLRule {
    std::vector<BigScalar> nodes;
    std::vector<BigScalar> weights;
};

namespace detail {

inline BigScalar cos_scalar(const BigScalar& x) { return detail::unary(x, mpfr_cos); }

inline BigScalar pi(const PrecisionContext& ctx) {
    BigScalar r(ctx);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
}

/// Legendre P_n(x) and its derivative by the three-term recurrence.
inline std::pair<BigScalar, BigScalar> legendre(const BigScalar& x, unsigned n) {
    const PrecisionContext ctx = x.context();
    BigScalar p0 = make_scalar(1L, ctx);
    BigScalar p1 = x;
    for (unsigned k = 2; k <= n; ++k) {
        BigScalar k_s = make_scalar(static_cast<long>(k), ctx);
        BigScalar p2 = ((make_scalar(static_cast<long>(2 * k - 1), ctx) * x * p1) -
                        make_scalar(static_cast<long>(k - 1), ctx) * p0) /
                       k_s;
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    BigScalar n_s = make_scalar(static_cast<long>(n), ctx);
    BigScalar one = make_scalar(1L, ctx);
    BigScalar deriv = n_s * (x * p1 - p0) / (x * x - one);
    return {p1, deriv};
}

inline GLRule build_gl_rule(unsigned n, const PrecisionContext& ctx) {
    GLRule rule;
    rule.nodes.reserve(n);
    rule.weights.reserve(n);
    const BigScalar one = make_scalar(1L, ctx);
    const BigScalar two = make_scalar(2L, ctx);
    const BigScalar tol = pow10(-(ctx.digits() - 5), ctx);
    const BigScalar pi_v = pi(ctx);
    for (unsigned i = 1; i <= n; ++i) {
        // Chebyshev initial guess, then Newton to convergence.
        BigScalar x = cos_scalar(pi_v * (make_scalar(static_cast<long>(i), ctx) -
                                         make_scalar(0.25, ctx)) /
                                 (make_scalar(static_cast<long>(n), ctx) + make_scalar(0.5, ctx)));
        for (int it = 0; it < 200; ++it) {
            auto [p, dp] = legendre(x, n);
            BigScalar dx = p / dp;
            x -= dx;
            if (abs(dx) < tol) break;
        }
        auto [p, dp] = legendre(x, n);
        (void)p;
        BigScalar w = two / ((one - x * x) * dp * dp);
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
    }
    return rule;
}

inline const GLRule& gl_rule(unsigned n, const PrecisionContext& ctx) {
    static std::map<std::pair<int, unsigned>, GLRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(ctx.digits(), n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_gl_rule(n, ctx)).first;
    return it->second;
}

}  // namespace detail

using Integrand = std::function<BigScalar(const BigScalar&)>;

/// Single Gauss-Legendre panel over [a, b].
inline BigScalar gl_panel(const Integrand& f, const BigScalar& a, const BigScalar& b,
                          unsigned n, const PrecisionContext& ctx) {
    const GLRule& rule = detail::gl_rule(n, ctx);
    BigScalar half = make_scalar(0.5, ctx);
    BigScalar mid = (a + b) * half;
    BigScalar rad = (b - a) * half;
    BigScalar sum = make_scalar(0L, ctx);
    for (unsigned i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + rad * rule.nodes[i]);
    return sum * rad;
}

struct QuadratureOptions {
    unsigned order = 32;        // nodes per panel
    int max_depth = 40;         // bisection depth limit
    int tol_digits = 0;         // 0 -> digits/2
};

namespace detail {

inline BigScalar integrate_rec(const Integrand& f, const BigScalar& a, const BigScalar& b,
                               const BigScalar& whole, const BigScalar& abs_tol,
                               unsigned order, int depth, const PrecisionContext& ctx) {
    BigScalar mid = (a + b) * make_scalar(0.5, ctx);
    BigScalar left = gl_panel(f, a, mid, order, ctx);
    BigScalar right = gl_panel(f, mid, b, order, ctx);
    BigScalar refined = left + right;
    if (depth <= 0 || abs(refined - whole) < abs_tol) return refined;
    BigScalar half_tol = abs_tol * make_scalar(0.5, ctx);
    return integrate_rec(f, a, mid, left, half_tol, order, depth - 1, ctx) +
           integrate_rec(f, mid, b, right, half_tol, order, depth - 1, ctx);
}

}  // namespace detail

/// Adaptive Gauss-Legendre integration of f over [a, b].  The absolute
/// tolerance is 10^(-tol_digits) scaled by a first-pass magnitude
/// estimate, so the result carries roughly tol_digits correct digits.
inline BigScalar integrate(const Integrand& f, const BigScalar& a, const BigScalar& b,
                           const PrecisionContext& ctx, QuadratureOptions opts = {}) {
    check_same_context(a, b);
    if (!(b > a)) {
        if (a == b) return make_scalar(0L, ctx);
        throw std::invalid_argument("integrate: requires a < b");
    }
    int tol_digits = opts.tol_digits > 0 ? opts.tol_digits : ctx.digits() / 2;
    BigScalar whole = gl_panel(f, a, b, opts.order, ctx);
    BigScalar scale = max(abs(whole), make_scalar(1L, ctx));
    BigScalar abs_tol = scale * pow10(-(tol_digits + 10), ctx);
    return detail::integrate_rec(f, a, b, whole, abs_tol, opts.order, opts.max_depth, ctx);
}

/// Integration with interior breakpoints placed on panel boundaries
/// (discontinuous integrands such as indicator weights).
inline BigScalar integrate_piecewise(const Integrand& f, const BigScalar& a, const BigScalar& b,
                                     const std::vector<BigScalar>& breaks,
                                     const PrecisionContext& ctx, QuadratureOptions opts = {}) {
    std::vector<BigScalar> pts;
    pts.push_back(a);
    for (const auto& p : breaks)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end(), [](const BigScalar& x, const BigScalar& y) { return x < y; });
    BigScalar total = make_scalar(0L, ctx);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i + 1] > pts[i])) continue;
        total += integrate(f, pts[i], pts[i + 1], ctx, opts);
    }
    return total;
}

}  // namespace totpos

#endif  // TOTPOS_QUADRATURE_HPP
