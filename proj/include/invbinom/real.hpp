#pragma once

// RAII wrapper around an MPFR floating-point value plus the precision
// bookkeeping shared by every evaluator in the library.

#include <mpfr.h>
#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace invbinom {

/// Guard digits added on top of a requested accuracy: 10 + ceil(digits/10).
int guard_digits(int digits);

/// digits + guard_digits(digits).
int working_digits(int digits);

/// Binary precision that represents `digits` decimal digits, plus a few spare bits.
mpfr_prec_t bits_for_digits(int digits);

class Real {
 public:
  explicit Real(mpfr_prec_t bits = 64);
  Real(long value, mpfr_prec_t bits);
  Real(const mpz_class& value, mpfr_prec_t bits);
  Real(const mpq_class& value, mpfr_prec_t bits);
  Real(const Real& other, mpfr_prec_t bits);

  /// Parses a decimal literal ("3.14", "-1e-5"). Throws std::invalid_argument.
  static Real parse(std::string_view text, mpfr_prec_t bits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  /// Binary exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero.
  long exponent2() const;

  /// Nearest integer (ties to even).
  mpz_class round_to_integer() const;

  /// Decimal rendering with `significant` digits, round-half-even. Fixed
  /// notation below magnitude 1e6, scientific above.
  std::string to_decimal(int significant) const;
  /// Always scientific: "1.23e-57".
  std::string to_scientific(int significant) const;

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator+=(long rhs);
  Real& operator-=(long rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);
  Real& operator*=(const mpz_class& rhs);
  Real& operator/=(const mpz_class& rhs);

  Real operator-() const;

 private:
  mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator+(const Real& a, long b);
Real operator-(const Real& a, long b);
Real operator*(const Real& a, long b);
Real operator/(const Real& a, long b);
Real operator+(long a, const Real& b);
Real operator-(long a, const Real& b);
Real operator*(long a, const Real& b);
Real operator/(long a, const Real& b);

bool operator==(const Real& a, const Real& b);
std::partial_ordering operator<=>(const Real& a, const Real& b);
std::partial_ordering operator<=>(const Real& a, long b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real log(const Real& x);
Real exp(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, unsigned long n);
Real pow(const Real& x, const Real& y);
/// x * 2^e, exact.
Real ldexp(const Real& x, long e);

Real pi(mpfr_prec_t bits);
Real ln2(mpfr_prec_t bits);
/// 10^(-digits) at the given precision.
Real ten_to_minus(int digits, mpfr_prec_t bits);

/// A real value together with the number of decimal digits it is
/// guaranteed to: |value - exact| < 10^(-digits).
struct BigReal {
  Real value;
  int digits;

  BigReal(Real v, int d);

  /// `digits` significant digits; prints "0" when |value| < 10^(-digits).
  std::string str() const;
};

}  // namespace invbinom
