#ifndef TOTPOS_GAMMA_HPP
#define TOTPOS_GAMMA_HPP

#include "totpos/bigfloat.hpp"
#include "totpos/matrix.hpp"

#include <stdexcept>
#include <utility>

namespace totpos {

namespace detail {

// Internal evaluations run with guard digits and are rounded back into
// the caller's context on return.
constexpr int kGammaGuardDigits = 20;

/// Lower regularized series:  P(u,v) = v^u e^{-v} / Gamma(u) * sum_n v^n / (u (u+1)...(u+n)).
/// Reliable for v < u + 1.
inline BigScalar lower_gamma_series(const BigScalar& u, const BigScalar& v) {
    const PrecisionContext ctx = u.context();
    BigScalar term = make_scalar(1L, ctx) / u;
    BigScalar sum = term;
    BigScalar ap = u;
    const BigScalar eps = pow10(-(ctx.digits() + 5), ctx);
    const BigScalar one = make_scalar(1L, ctx);
    for (int n = 0; n < 100000; ++n) {
        ap += one;
        term *= v / ap;
        sum += term;
        if (abs(term) < abs(sum) * eps) break;
    }
    // gamma_lower(u,v) = v^u e^{-v} * sum
    return exp(u * log(v) - v) * sum;
}

/// Legendre continued fraction for the upper incomplete gamma, evaluated
/// by the modified Lentz algorithm.  Reliable for v >= u + 1.
inline BigScalar upper_gamma_cf(const BigScalar& u, const BigScalar& v) {
    const PrecisionContext ctx = u.context();
    const BigScalar one = make_scalar(1L, ctx);
    const BigScalar two = make_scalar(2L, ctx);
    const BigScalar tiny = pow10(-(2 * ctx.digits()), ctx);
    const BigScalar eps = pow10(-(ctx.digits() + 5), ctx);

    BigScalar b = v + one - u;
    BigScalar c = one / tiny;
    BigScalar d = one / b;
    BigScalar h = d;
    for (long i = 1; i < 200000; ++i) {
        BigScalar i_s = make_scalar(i, ctx);
        BigScalar an = -i_s * (i_s - u);
        b += two;
        d = an * d + b;
        if (abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (abs(c) < tiny) c = tiny;
        d = one / d;
        BigScalar del = d * c;
        h *= del;
        if (abs(del - one) < eps) break;
    }
    return exp(u * log(v) - v) * h;
}

}  // namespace detail

/// Upper incomplete gamma Gamma(u, v) = integral_v^inf x^{u-1} e^{-x} dx.
inline BigScalar upper_gamma(const BigScalar& u, const BigScalar& v) {
    check_same_context(u, v);
    const PrecisionContext ctx = u.context();
    if (!(u > make_scalar(0L, ctx))) throw std::domain_error("upper_gamma: requires u > 0");
    if (v.is_negative()) throw std::domain_error("upper_gamma: requires v >= 0");

    const PrecisionContext work = ctx.with_extra_digits(detail::kGammaGuardDigits);
    BigScalar uw = to_context(u, work);
    BigScalar vw = to_context(v, work);
    BigScalar result(work);
    if (vw.is_zero()) {
        result = tgamma(uw);
    } else if (vw < uw + make_scalar(1L, work)) {
        result = tgamma(uw) - detail::lower_gamma_series(uw, vw);
    } else {
        result = detail::upper_gamma_cf(uw, vw);
    }
    return to_context(result, ctx);
}

/// Lower incomplete gamma integral_0^v x^{u-1} e^{-x} dx.
inline BigScalar lower_gamma(const BigScalar& u, const BigScalar& v) {
    check_same_context(u, v);
    const PrecisionContext ctx = u.context();
    if (!(u > make_scalar(0L, ctx))) throw std::domain_error("lower_gamma: requires u > 0");
    if (v.is_negative()) throw std::domain_error("lower_gamma: requires v >= 0");
    if (v.is_zero()) return make_scalar(0L, ctx);

    const PrecisionContext work = ctx.with_extra_digits(detail::kGammaGuardDigits);
    BigScalar uw = to_context(u, work);
    BigScalar vw = to_context(v, work);
    BigScalar result(work);
    if (vw < uw + make_scalar(1L, work)) {
        result = detail::lower_gamma_series(uw, vw);
    } else {
        result = tgamma(uw) - detail::upper_gamma_cf(uw, vw);
    }
    return to_context(result, ctx);
}

/// Survival form Q(u, v) = Gamma(u, v) / Gamma(u), values in (0, 1].
inline BigScalar q(const BigScalar& u, const BigScalar& v) {
    const PrecisionContext work = u.context().with_extra_digits(detail::kGammaGuardDigits);
    BigScalar r = upper_gamma(to_context(u, work), to_context(v, work)) /
                  tgamma(to_context(u, work));
    return to_context(r, u.context());
}

/// Lower regularized form P(u, v) = 1 - Q(u, v), computed through the
/// lower integral so the q / p routes stay independent.
inline BigScalar p_lower(const BigScalar& u, const BigScalar& v) {
    const PrecisionContext work = u.context().with_extra_digits(detail::kGammaGuardDigits);
    BigScalar r = lower_gamma(to_context(u, work), to_context(v, work)) /
                  tgamma(to_context(u, work));
    return to_context(r, u.context());
}

namespace detail {

/// Shared quantile solver: finds v with F(v) = target where F is Q
/// (decreasing) or P (increasing), by doubling bracket, bisection, and
/// Newton polish on the residual.
template <typename F>
BigScalar gamma_quantile(const BigScalar& u, const BigScalar& target, F&& fn, bool decreasing) {
    const PrecisionContext ctx = u.context();
    const PrecisionContext work = ctx.with_extra_digits(kGammaGuardDigits);
    BigScalar uw = to_context(u, work);
    BigScalar tw = to_context(target, work);
    const BigScalar zero = make_scalar(0L, work);
    const BigScalar one = make_scalar(1L, work);
    const BigScalar two = make_scalar(2L, work);

    // Bracket [lo, hi] with fn(lo) and fn(hi) straddling the target.
    BigScalar lo = zero;
    BigScalar hi = max(one, uw * two);
    for (int i = 0; i < 4000; ++i) {
        BigScalar f = fn(uw, hi);
        bool past = decreasing ? (f < tw) : (f > tw);
        if (past) break;
        hi *= two;
    }

    // Bisection until the interval is small enough for Newton.
    const BigScalar coarse = pow10(-30, work);
    for (int i = 0; i < 2000; ++i) {
        BigScalar mid = (lo + hi) / two;
        BigScalar f = fn(uw, mid);
        bool go_right = decreasing ? (f > tw) : (f < tw);
        if (go_right) lo = mid; else hi = mid;
        if (hi - lo < coarse * max(one, hi)) break;
    }

    // Newton on the residual; |F'(v)| = v^{u-1} e^{-v} / Gamma(u).
    BigScalar v = (lo + hi) / two;
    const BigScalar log_gamma_u = log(tgamma(uw));
    const BigScalar tol = pow10(-(ctx.digits() - 15) - kGammaGuardDigits / 2, work);
    for (int i = 0; i < 200; ++i) {
        BigScalar f = fn(uw, v);
        BigScalar resid = f - tw;
        if (abs(resid) < tol) break;
        BigScalar density = exp((uw - one) * log(v) - v - log_gamma_u);
        BigScalar step = resid / density;   // magnitude of the correction
        if (decreasing) v += step; else v -= step;
        // Newton may legitimately step past a bracket endpoint when the
        // root sits on one (the bisection can land exactly on it); only
        // guard against leaving the domain.
        if (!(v > zero)) v = (lo + hi) / two;
    }
    return to_context(v, ctx);
}

}  // namespace detail

/// Quantile of Q in v: the v >= 0 with Q(u, v) = p.
inline BigScalar q_inverse(const BigScalar& u, const BigScalar& p) {
    check_same_context(u, p);
    const PrecisionContext ctx = u.context();
    const BigScalar zero = make_scalar(0L, ctx);
    const BigScalar one = make_scalar(1L, ctx);
    if (!(p > zero) || p > one) throw std::domain_error("q_inverse: requires 0 < p <= 1");
    if (p == one) return zero;
    return detail::gamma_quantile(u, p, [](const BigScalar& uu, const BigScalar& vv) {
        return q(uu, vv);
    }, /*decreasing=*/true);
}

/// Quantile of the lower regularized form: the v with P(u, v) = p.
inline BigScalar p_inverse(const BigScalar& u, const BigScalar& p) {
    check_same_context(u, p);
    const PrecisionContext ctx = u.context();
    const BigScalar zero = make_scalar(0L, ctx);
    const BigScalar one = make_scalar(1L, ctx);
    if (!(p > zero) || p >= one) throw std::domain_error("p_inverse: requires 0 < p < 1");
    return detail::gamma_quantile(u, p, [](const BigScalar& uu, const BigScalar& vv) {
        return p_lower(uu, vv);
    }, /*decreasing=*/false);
}

/// R_c(u, v) = Gamma(c + u, v) / Gamma(u, v).
inline BigScalar ratio_R(const BigScalar& c, const BigScalar& u, const BigScalar& v) {
    check_same_context(c, u);
    const PrecisionContext ctx = u.context();
    if (!(c > make_scalar(0L, ctx))) throw std::domain_error("ratio_R: requires c > 0");
    return upper_gamma(c + u, v) / upper_gamma(u, v);
}

/// C_c(u, v) = Q(c + u, Q^{-1}(u, v)).
inline BigScalar ratio_C(const BigScalar& c, const BigScalar& u, const BigScalar& v) {
    check_same_context(c, u);
    const PrecisionContext ctx = u.context();
    const BigScalar zero = make_scalar(0L, ctx);
    const BigScalar one = make_scalar(1L, ctx);
    if (!(c > zero)) throw std::domain_error("ratio_C: requires c > 0");
    if (v.is_negative() || v > one) throw std::domain_error("ratio_C: requires 0 <= v <= 1");
    if (v.is_zero()) return zero;     // limiting convention: Q^{-1}(u,0+) -> infinity
    if (v == one) return one;
    return q(c + u, q_inverse(u, v));
}

/// Independent route for C_c(u, v):  1 - F_{c+u}(F_u^{-1}(1 - v)), built
/// from the lower-gamma series and the P-quantile only.
inline BigScalar ratio_C_cdf_route(const BigScalar& c, const BigScalar& u, const BigScalar& v) {
    check_same_context(c, u);
    const PrecisionContext ctx = u.context();
    const BigScalar zero = make_scalar(0L, ctx);
    const BigScalar one = make_scalar(1L, ctx);
    if (!(c > zero)) throw std::domain_error("ratio_C: requires c > 0");
    if (v.is_negative() || v > one) throw std::domain_error("ratio_C: requires 0 <= v <= 1");
    if (v.is_zero()) return zero;
    if (v == one) return one;
    BigScalar t = p_inverse(u, one - v);
    return one - p_lower(c + u, t);
}

// --- determinant wrappers reporting minor signs --------------------------

namespace detail {

inline std::pair<BigScalar, SignReport> graded_det(const Grid& g, const PrecisionContext& ctx,
                                                   bool rr_signed) {
    SignReport report = classify_all_minors(g, ctx, rr_signed);
    return {det(g), std::move(report)};
}

}  // namespace detail

/// det(R_{c_i}(u_j, v)) over descending c and u grids at fixed v.
inline std::pair<BigScalar, SignReport> r_det(const DescendingTuple& c_tuple,
                                              const DescendingTuple& u_tuple,
                                              const BigScalar& v) {
    if (c_tuple.size() != u_tuple.size())
        throw std::invalid_argument("r_det: tuple length mismatch");
    const PrecisionContext ctx = v.context();
    Grid g(c_tuple.size(), std::vector<BigScalar>());
    for (std::size_t i = 0; i < c_tuple.size(); ++i)
        for (std::size_t j = 0; j < u_tuple.size(); ++j)
            g[i].push_back(ratio_R(c_tuple[i], u_tuple[j], v));
    return detail::graded_det(g, ctx, /*rr_signed=*/false);
}

/// det(R_c(u_i, v_j)) over descending u and v grids at fixed c.
/// Lengths 1..3 only; the sign is reported, not asserted.
inline std::pair<BigScalar, SignReport> r_det_uv(const BigScalar& c,
                                                 const DescendingTuple& u_tuple,
                                                 const DescendingTuple& v_tuple) {
    if (u_tuple.size() != v_tuple.size())
        throw std::invalid_argument("r_det_uv: tuple length mismatch");
    if (u_tuple.size() > 3)
        throw std::invalid_argument("r_det_uv: lengths above 3 unsupported");
    const PrecisionContext ctx = c.context();
    Grid g(u_tuple.size(), std::vector<BigScalar>());
    for (std::size_t i = 0; i < u_tuple.size(); ++i)
        for (std::size_t j = 0; j < v_tuple.size(); ++j)
            g[i].push_back(ratio_R(c, u_tuple[i], v_tuple[j]));
    return detail::graded_det(g, ctx, /*rr_signed=*/true);
}

/// det(C_{c_i}(u, v_j)) over descending c and v grids at fixed u.
inline std::pair<BigScalar, SignReport> c_det(const DescendingTuple& c_tuple,
                                              const BigScalar& u,
                                              const DescendingTuple& v_tuple) {
    if (c_tuple.size() != v_tuple.size())
        throw std::invalid_argument("c_det: tuple length mismatch");
    const PrecisionContext ctx = u.context();
    Grid g(c_tuple.size(), std::vector<BigScalar>());
    for (std::size_t i = 0; i < c_tuple.size(); ++i)
        for (std::size_t j = 0; j < v_tuple.size(); ++j)
            g[i].push_back(ratio_C(c_tuple[i], u, v_tuple[j]));
    return detail::graded_det(g, ctx, /*rr_signed=*/true);
}

/// 2x2 det(C_{c_i}(u_j, v)) at fixed v; sign reported without assertion.
inline std::pair<BigScalar, SignReport> c_det_cu(const DescendingTuple& c_tuple,
                                                 const DescendingTuple& u_tuple,
                                                 const BigScalar& v) {
    if (c_tuple.size() != 2 || u_tuple.size() != 2)
        throw std::invalid_argument("c_det_cu: 2x2 only");
    const PrecisionContext ctx = v.context();
    Grid g(2, std::vector<BigScalar>());
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            g[i].push_back(ratio_C(c_tuple[i], u_tuple[j], v));
    return detail::graded_det(g, ctx, /*rr_signed=*/false);
}

}  // namespace totpos

#endif  // TOTPOS_GAMMA_HPP
