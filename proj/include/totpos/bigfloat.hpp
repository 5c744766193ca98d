#ifndef TOTPOS_BIGFLOAT_HPP
#define TOTPOS_BIGFLOAT_HPP

#include <mpfr.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace totpos {

class precision_mismatch : public std::logic_error {
public:
    explicit precision_mismatch(const std::string& what) : std::logic_error(what) {}
};

namespace detail {
inline void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}
}  // namespace detail

/// Requested decimal precision plus the tolerance used to classify
/// near-zero determinants.  Threaded through every numeric operation.
class PrecisionContext {
public:
    explicit PrecisionContext(int digits = 120, int sign_tol_exponent = 0)
        : digits_(digits),
          sign_tol_exponent_(sign_tol_exponent == 0 ? digits / 2 : sign_tol_exponent) {
        detail::require(digits_ >= 50, "PrecisionContext: digits must be >= 50");
        detail::require(sign_tol_exponent_ > 0 && sign_tol_exponent_ < digits_,
                        "PrecisionContext: sign_tol_exponent must lie in (0, digits)");
    }

    int digits() const { return digits_; }
    int sign_tol_exponent() const { return sign_tol_exponent_; }

    mpfr_prec_t prec_bits() const {
        // 3.322 bits per decimal digit, plus slack so decimal rounding is clean.
        return static_cast<mpfr_prec_t>(std::ceil(digits_ * 3.3219280948873623)) + 32;
    }

    PrecisionContext with_extra_digits(int extra) const {
        return PrecisionContext(digits_ + extra,
                                std::min(sign_tol_exponent_, digits_ + extra - 1));
    }

    bool operator==(const PrecisionContext& o) const {
        return digits_ == o.digits_ && sign_tol_exponent_ == o.sign_tol_exponent_;
    }

private:
    int digits_;
    int sign_tol_exponent_;
};

/// Arbitrary-precision real bound to the decimal digit count of the
/// context it was created under.  Mixing values from contexts with
/// different digit counts throws precision_mismatch rather than silently
/// downgrading.
class BigScalar {
public:
    BigScalar() : digits_(0) { mpfr_init2(v_, MPFR_PREC_MIN); mpfr_set_nan(v_); }

    explicit BigScalar(const PrecisionContext& ctx) : digits_(ctx.digits()) {
        mpfr_init2(v_, ctx.prec_bits());
        mpfr_set_zero(v_, 1);
    }

    BigScalar(const BigScalar& o) : digits_(o.digits_) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    BigScalar(BigScalar&& o) noexcept : digits_(o.digits_) {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }

    BigScalar& operator=(const BigScalar& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
            digits_ = o.digits_;
        }
        return *this;
    }

    BigScalar& operator=(BigScalar&& o) noexcept {
        if (this != &o) {
            mpfr_swap(v_, o.v_);
            digits_ = o.digits_;
        }
        return *this;
    }

    ~BigScalar() { mpfr_clear(v_); }

    int digits() const { return digits_; }
    bool bound() const { return digits_ > 0; }

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_negative() const { return mpfr_sgn(v_) < 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    int sgn() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    std::string str(int sig_digits = 0) const {
        int n = sig_digits > 0 ? sig_digits : digits_;
        if (n <= 0) n = 17;
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*Rg", n, v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    friend void check_same_context(const BigScalar& a, const BigScalar& b) {
        if (!a.bound() || !b.bound())
            throw precision_mismatch("BigScalar: operation on unbound value");
        if (a.digits_ != b.digits_)
            throw precision_mismatch(
                "BigScalar: mixing values from contexts with " +
                std::to_string(a.digits_) + " and " + std::to_string(b.digits_) +
                " digits");
    }

    friend BigScalar operator+(const BigScalar& a, const BigScalar& b) {
        check_same_context(a, b);
        BigScalar r = a.like();
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigScalar operator-(const BigScalar& a, const BigScalar& b) {
        check_same_context(a, b);
        BigScalar r = a.like();
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigScalar operator*(const BigScalar& a, const BigScalar& b) {
        check_same_context(a, b);
        BigScalar r = a.like();
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigScalar operator/(const BigScalar& a, const BigScalar& b) {
        check_same_context(a, b);
        BigScalar r = a.like();
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigScalar operator-(const BigScalar& a) {
        BigScalar r = a.like();
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    BigScalar& operator+=(const BigScalar& b) { return *this = *this + b; }
    BigScalar& operator-=(const BigScalar& b) { return *this = *this - b; }
    BigScalar& operator*=(const BigScalar& b) { return *this = *this * b; }
    BigScalar& operator/=(const BigScalar& b) { return *this = *this / b; }

    friend bool operator<(const BigScalar& a, const BigScalar& b) {
        check_same_context(a, b);
        return mpfr_less_p(a.v_, b.v_) != 0;
    }
    friend bool operator>(const BigScalar& a, const BigScalar& b) { return b < a; }
    friend bool operator<=(const BigScalar& a, const BigScalar& b) {
        check_same_context(a, b);
        return mpfr_lessequal_p(a.v_, b.v_) != 0;
    }
    friend bool operator>=(const BigScalar& a, const BigScalar& b) { return b <= a; }
    friend bool operator==(const BigScalar& a, const BigScalar& b) {
        check_same_context(a, b);
        return mpfr_equal_p(a.v_, b.v_) != 0;
    }
    friend bool operator!=(const BigScalar& a, const BigScalar& b) { return !(a == b); }

    /// Fresh zero with this value's precision binding.
    BigScalar like() const {
        if (!bound()) throw precision_mismatch("BigScalar: operation on unbound value");
        BigScalar r;
        mpfr_set_prec(r.v_, mpfr_get_prec(v_));
        mpfr_set_zero(r.v_, 1);
        r.digits_ = digits_;
        return r;
    }

    PrecisionContext context() const {
        if (!bound()) throw precision_mismatch("BigScalar: unbound value has no context");
        return PrecisionContext(digits_);
    }

private:
    mpfr_t v_;
    int digits_;
};

// --- constructors from primitive values ---------------------------------

inline BigScalar make_scalar(long v, const PrecisionContext& ctx) {
    BigScalar r(ctx);
    mpfr_set_si(r.raw(), v, MPFR_RNDN);
    return r;
}

inline BigScalar make_scalar(int v, const PrecisionContext& ctx) {
    return make_scalar(static_cast<long>(v), ctx);
}

inline BigScalar make_scalar(double v, const PrecisionContext& ctx) {
    BigScalar r(ctx);
    mpfr_set_d(r.raw(), v, MPFR_RNDN);
    return r;
}

/// Parse a decimal string at full context precision.  This is the
/// recommended entry point for configuration values: the decimal text is
/// rounded once, directly into the working precision.
inline BigScalar parse_scalar(std::string_view text, const PrecisionContext& ctx) {
    BigScalar r(ctx);
    std::string s(text);
    char* end = nullptr;
    mpfr_strtofr(r.raw(), s.c_str(), &end, 10, MPFR_RNDN);
    if (end == s.c_str() || *end != '\0')
        throw std::invalid_argument("parse_scalar: not a valid decimal number: " + s);
    return r;
}

/// Explicit precision conversion.  The one sanctioned way to move a value
/// between contexts.
inline BigScalar to_context(const BigScalar& x, const PrecisionContext& ctx) {
    BigScalar r(ctx);
    mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

// --- elementary functions -----------------------------------------------

namespace detail {
template <typename F>
BigScalar unary(const BigScalar& x, F&& f) {
    BigScalar r = x.like();
    f(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
}  // namespace detail

inline BigScalar abs(const BigScalar& x) { return detail::unary(x, mpfr_abs); }
inline BigScalar exp(const BigScalar& x) { return detail::unary(x, mpfr_exp); }
inline BigScalar expm1(const BigScalar& x) { return detail::unary(x, mpfr_expm1); }
inline BigScalar log(const BigScalar& x) { return detail::unary(x, mpfr_log); }
inline BigScalar log1p(const BigScalar& x) { return detail::unary(x, mpfr_log1p); }
inline BigScalar sqrt(const BigScalar& x) { return detail::unary(x, mpfr_sqrt); }
inline BigScalar floor(const BigScalar& x) {
    BigScalar r = x.like();
    mpfr_floor(r.raw(), x.raw());
    return r;
}
inline BigScalar tgamma(const BigScalar& x) { return detail::unary(x, mpfr_gamma); }

inline BigScalar pow(const BigScalar& base, const BigScalar& e) {
    check_same_context(base, e);
    BigScalar r = base.like();
    mpfr_pow(r.raw(), base.raw(), e.raw(), MPFR_RNDN);
    return r;
}

inline BigScalar pow(const BigScalar& base, long e) {
    BigScalar r = base.like();
    mpfr_pow_si(r.raw(), base.raw(), e, MPFR_RNDN);
    return r;
}

/// 10^e in the given context.
inline BigScalar pow10(long e, const PrecisionContext& ctx) {
    BigScalar r(ctx);
    mpfr_ui_pow_ui(r.raw(), 10u, static_cast<unsigned long>(e >= 0 ? e : -e), MPFR_RNDN);
    if (e < 0) mpfr_si_div(r.raw(), 1, r.raw(), MPFR_RNDN);
    return r;
}

inline BigScalar max(const BigScalar& a, const BigScalar& b) { return a < b ? b : a; }
inline BigScalar min(const BigScalar& a, const BigScalar& b) { return a < b ? a : b; }

}  // namespace totpos

#endif  // TOTPOS_BIGFLOAT_HPP
