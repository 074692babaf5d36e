#include "invbinom/real.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "invbinom/errors.hpp"

namespace invbinom {

int guard_digits(int digits) { return 10 + (digits + 9) / 10; }

int working_digits(int digits) { return digits + guard_digits(digits); }

mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}

Real::Real(long value, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_si(v_, value, MPFR_RNDN);
}

Real::Real(const mpz_class& value, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const mpq_class& value, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const Real& other, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real Real::parse(std::string_view text, mpfr_prec_t bits) {
  Real r(bits);
  std::string s(text);
  char* end = nullptr;
  if (!s.empty()) mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (s.empty() || end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  }
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(v_, other.precision());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(v_, other.precision());
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

long Real::exponent2() const {
  if (!mpfr_number_p(v_) || mpfr_zero_p(v_)) return std::numeric_limits<long>::min() / 2;
  return mpfr_get_exp(v_);
}

mpz_class Real::round_to_integer() const {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
  return z;
}

std::string Real::to_decimal(int significant) const {
  if (significant < 1) significant = 1;
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(v_)) return "0";
  mpfr_exp_t e10 = 0;
  std::unique_ptr<char, void (*)(char*)> raw(
      mpfr_get_str(nullptr, &e10, 10, static_cast<size_t>(significant), v_, MPFR_RNDN), mpfr_free_str);
  std::string digits(raw.get());
  std::string sign;
  if (!digits.empty() && digits[0] == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  // value = 0.d1d2d3... * 10^e10
  if (e10 > 6) {
    std::string out = sign + digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    return out + "e+" + std::to_string(e10 - 1);
  }
  if (e10 <= 0) {
    return sign + "0." + std::string(static_cast<size_t>(-e10), '0') + digits;
  }
  auto int_len = static_cast<size_t>(e10);
  if (digits.size() <= int_len) return sign + digits + std::string(int_len - digits.size(), '0');
  return sign + digits.substr(0, int_len) + "." + digits.substr(int_len);
}

std::string Real::to_scientific(int significant) const {
  if (significant < 1) significant = 1;
  if (mpfr_nan_p(v_) || mpfr_inf_p(v_) || mpfr_zero_p(v_)) return to_decimal(significant);
  mpfr_exp_t e10 = 0;
  std::unique_ptr<char, void (*)(char*)> raw(
      mpfr_get_str(nullptr, &e10, 10, static_cast<size_t>(significant), v_, MPFR_RNDN), mpfr_free_str);
  std::string digits(raw.get());
  std::string sign;
  if (digits[0] == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  std::string out = sign + digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  const long e = static_cast<long>(e10) - 1;
  return out + (e < 0 ? "e-" : "e+") + std::to_string(e < 0 ? -e : e);
}

#define INVBINOM_COMPOUND(op, fn)                                   \
  Real& Real::operator op(const Real& rhs) {                        \
    if (rhs.precision() > precision()) mpfr_prec_round(v_, rhs.precision(), MPFR_RNDN); \
    fn(v_, v_, rhs.v_, MPFR_RNDN);                                  \
    return *this;                                                   \
  }
INVBINOM_COMPOUND(+=, mpfr_add)
INVBINOM_COMPOUND(-=, mpfr_sub)
INVBINOM_COMPOUND(*=, mpfr_mul)
INVBINOM_COMPOUND(/=, mpfr_div)
#undef INVBINOM_COMPOUND

Real& Real::operator+=(long rhs) {
  mpfr_add_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(long rhs) {
  mpfr_sub_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(long rhs) {
  mpfr_mul_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(long rhs) {
  mpfr_div_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const mpz_class& rhs) {
  mpfr_mul_z(v_, v_, rhs.get_mpz_t(), MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const mpz_class& rhs) {
  mpfr_div_z(v_, v_, rhs.get_mpz_t(), MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

namespace {
mpfr_prec_t max_prec(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }
}  // namespace

Real operator+(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator+(const Real& a, long b) { return Real(a) += b; }
Real operator-(const Real& a, long b) { return Real(a) -= b; }
Real operator*(const Real& a, long b) { return Real(a) *= b; }
Real operator/(const Real& a, long b) { return Real(a) /= b; }
Real operator+(long a, const Real& b) { return Real(b) += a; }
Real operator-(long a, const Real& b) {
  Real r(b.precision());
  mpfr_si_sub(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}
Real operator*(long a, const Real& b) { return Real(b) *= a; }
Real operator/(long a, const Real& b) {
  Real r(b.precision());
  mpfr_si_div(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.get(), b.get())) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.get(), b.get());
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const Real& a, long b) {
  if (mpfr_nan_p(a.get())) return std::partial_ordering::unordered;
  int c = mpfr_cmp_si(a.get(), b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

#define INVBINOM_UNARY(name, fn)                \
  Real name(const Real& x) {                    \
    Real r(x.precision());                      \
    fn(r.get(), x.get(), MPFR_RNDN);            \
    return r;                                   \
  }
INVBINOM_UNARY(abs, mpfr_abs)
INVBINOM_UNARY(sqrt, mpfr_sqrt)
INVBINOM_UNARY(log, mpfr_log)
INVBINOM_UNARY(exp, mpfr_exp)
INVBINOM_UNARY(sin, mpfr_sin)
INVBINOM_UNARY(cos, mpfr_cos)
#undef INVBINOM_UNARY

Real atan2(const Real& y, const Real& x) {
  Real r(max_prec(x, y));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, unsigned long n) {
  Real r(x.precision());
  mpfr_pow_ui(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r(max_prec(x, y));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

Real pi(mpfr_prec_t bits) {
  Real r(bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

Real ln2(mpfr_prec_t bits) {
  Real r(bits);
  mpfr_const_log2(r.get(), MPFR_RNDN);
  return r;
}

Real ten_to_minus(int digits, mpfr_prec_t bits) {
  Real r(10, bits);
  mpfr_pow_si(r.get(), r.get(), -digits, MPFR_RNDN);
  return r;
}

BigReal::BigReal(Real v, int d) : value(std::move(v)), digits(d) {
  if (d < 10) throw DomainError("BigReal requires at least 10 digits, got " + std::to_string(d));
}

std::string BigReal::str() const {
  if (abs(value) < ten_to_minus(digits, value.precision())) return "0";
  return value.to_decimal(digits);
}

}  // namespace invbinom
