#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

namespace pqspecial::oracle::detail {

// Owning MPFR value. Arithmetic results take the larger operand precision and
// are rounded to nearest.
class HpReal {
   public:
    explicit HpReal(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
    HpReal(double d, mpfr_prec_t bits) : HpReal(bits) { mpfr_set_d(v_, d, MPFR_RNDN); }
    static HpReal from_int(long long i, mpfr_prec_t bits) {
        HpReal r(bits);
        mpfr_set_sj(r.v_, static_cast<intmax_t>(i), MPFR_RNDN);
        return r;
    }

    HpReal(const HpReal& o) : HpReal(mpfr_get_prec(o.v_)) { mpfr_set(v_, o.v_, MPFR_RNDN); }
    HpReal(HpReal&& o) noexcept : HpReal(mpfr_get_prec(o.v_)) { mpfr_swap(v_, o.v_); }
    HpReal& operator=(const HpReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    HpReal& operator=(HpReal&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~HpReal() { mpfr_clear(v_); }

    [[nodiscard]] mpfr_prec_t bits() const { return mpfr_get_prec(v_); }
    [[nodiscard]] mpfr_ptr get() { return v_; }
    [[nodiscard]] mpfr_srcptr get() const { return v_; }
    [[nodiscard]] double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    [[nodiscard]] int sign() const { return mpfr_sgn(v_); }

    HpReal& operator+=(const HpReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    HpReal& operator-=(const HpReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    HpReal& operator*=(const HpReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    HpReal& operator/=(const HpReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend HpReal operator+(HpReal a, const HpReal& b) { return a += b; }
    friend HpReal operator-(HpReal a, const HpReal& b) { return a -= b; }
    friend HpReal operator*(HpReal a, const HpReal& b) { return a *= b; }
    friend HpReal operator/(HpReal a, const HpReal& b) { return a /= b; }
    friend HpReal operator-(HpReal a) { mpfr_neg(a.v_, a.v_, MPFR_RNDN); return a; }
    friend bool operator<(const HpReal& a, const HpReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }

   private:
    mpfr_t v_;
};

#define PQSPECIAL_HP_UNARY(name, fn)                  \
    inline HpReal name(const HpReal& x) {             \
        HpReal r(x.bits());                           \
        fn(r.get(), x.get(), MPFR_RNDN);              \
        return r;                                     \
    }
PQSPECIAL_HP_UNARY(log, mpfr_log)
PQSPECIAL_HP_UNARY(exp, mpfr_exp)
PQSPECIAL_HP_UNARY(log1p, mpfr_log1p)
PQSPECIAL_HP_UNARY(expm1, mpfr_expm1)
PQSPECIAL_HP_UNARY(abs, mpfr_abs)
PQSPECIAL_HP_UNARY(digamma, mpfr_digamma)
#undef PQSPECIAL_HP_UNARY

inline HpReal pow_int(const HpReal& x, long n) {
    HpReal r(x.bits());
    mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
    return r;
}

inline HpReal pow(const HpReal& x, const HpReal& y) {
    HpReal r(x.bits());
    mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
    return r;
}

inline HpReal zeta_ui(unsigned long s, mpfr_prec_t bits) {
    HpReal r(bits);
    mpfr_zeta_ui(r.get(), s, MPFR_RNDN);
    return r;
}

inline HpReal pi(mpfr_prec_t bits) {
    HpReal r(bits);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}

// Scientific notation rounded to `digits` significant digits, e.g. "-6.93147e-1".
inline std::string to_scientific(const HpReal& x, int digits) {
    if (mpfr_zero_p(x.get()) != 0) {
        return "0";
    }
    mpfr_exp_t exponent = 0;
    char* raw = mpfr_get_str(nullptr, &exponent, 10, static_cast<std::size_t>(digits), x.get(), MPFR_RNDN);
    std::string mantissa(raw);
    mpfr_free_str(raw);
    std::string out;
    if (!mantissa.empty() && mantissa[0] == '-') {
        out.push_back('-');
        mantissa.erase(0, 1);
    }
    out.push_back(mantissa[0]);
    if (mantissa.size() > 1) {
        out.push_back('.');
        out.append(mantissa, 1, std::string::npos);
    }
    out += "e" + std::to_string(static_cast<long long>(exponent) - 1);
    return out;
}

}  // namespace pqspecial::oracle::detail
