#pragma once
#include <mpfr.h>

#include <stdexcept>
#include <string>
#include <utility>

// Thin RAII wrapper over MPFR arbitrary-precision reals. Only the operations
// the numerical Laplace inversion needs are exposed. Precision is a
// thread-local default captured at construction; PrecisionGuard scopes a
// temporary change.

namespace tmodes::big {

class Big;

inline mpfr_prec_t& default_precision() {
  thread_local mpfr_prec_t prec = 256;
  return prec;
}

class PrecisionGuard {
 public:
  explicit PrecisionGuard(mpfr_prec_t bits) : saved_(default_precision()) {
    if (bits < MPFR_PREC_MIN || bits > 1 << 24)
      throw std::domain_error("PrecisionGuard: unreasonable precision " +
                              std::to_string(bits));
    default_precision() = bits;
  }
  ~PrecisionGuard() { default_precision() = saved_; }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  mpfr_prec_t saved_;
};

class Big {
 public:
  Big() { mpfr_init2(v_, default_precision()); mpfr_set_zero(v_, 1); }
  explicit Big(double x) { mpfr_init2(v_, default_precision()); mpfr_set_d(v_, x, MPFR_RNDN); }
  explicit Big(long x) { mpfr_init2(v_, default_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
  explicit Big(unsigned long x) { mpfr_init2(v_, default_precision()); mpfr_set_ui(v_, x, MPFR_RNDN); }

  Big(const Big& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Big(Big&& o) noexcept { mpfr_init2(v_, MPFR_PREC_MIN); mpfr_swap(v_, o.v_); }
  Big& operator=(Big o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~Big() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  friend Big operator+(const Big& a, const Big& b) { Big r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Big operator-(const Big& a, const Big& b) { Big r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Big operator*(const Big& a, const Big& b) { Big r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Big operator/(const Big& a, const Big& b) { Big r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Big operator-(const Big& a) { Big r; mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r; }

  friend Big operator+(const Big& a, double b) { Big r; mpfr_add_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Big operator-(const Big& a, double b) { Big r; mpfr_sub_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Big operator*(const Big& a, double b) { Big r; mpfr_mul_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Big operator/(const Big& a, double b) { Big r; mpfr_div_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Big operator+(double a, const Big& b) { return b + a; }
  friend Big operator*(double a, const Big& b) { return b * a; }
  friend Big operator-(double a, const Big& b) { Big r; mpfr_d_sub(r.v_, a, b.v_, MPFR_RNDN); return r; }
  friend Big operator/(double a, const Big& b) { Big r; mpfr_d_div(r.v_, a, b.v_, MPFR_RNDN); return r; }

  Big& operator+=(const Big& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Big& operator-=(const Big& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Big& operator*=(const Big& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Big& operator/=(const Big& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend bool operator<(const Big& a, const Big& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Big& a, const Big& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Big& a, const Big& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Big& a, const Big& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Big& a, const Big& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  friend Big exp(const Big& a) { Big r; mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Big log(const Big& a) { Big r; mpfr_log(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Big sqrt(const Big& a) { Big r; mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Big abs(const Big& a) { Big r; mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r; }

 private:
  mpfr_t v_;
};

inline Big factorial(unsigned long n) {
  Big r;
  mpfr_fac_ui(r.raw(), n, MPFR_RNDN);
  return r;
}

inline Big ui_pow_ui(unsigned long base, unsigned long e) {
  Big r;
  mpfr_ui_pow_ui(r.raw(), base, e, MPFR_RNDN);
  return r;
}

inline Big ln2() {
  Big r;
  mpfr_const_log2(r.raw(), MPFR_RNDN);
  return r;
}

}  // namespace tmodes::big
