#pragma once

#include <gmpxx.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace veering {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Q(theta) for a real root theta of an irreducible integer polynomial.
// Immutable once built; share through FieldPtr.
class FieldContext {
 public:
  // min_poly is ascending: min_poly[i] is the coefficient of x^i.
  FieldContext(std::vector<mpz_class> min_poly, mpq_class lo, mpq_class hi);

  int degree() const { return static_cast<int>(poly_.size()) - 1; }
  const std::vector<mpz_class>& min_poly() const { return poly_; }
  const mpq_class& interval_lo() const { return lo_; }
  const mpq_class& interval_hi() const { return hi_; }
  double approx_root() const { return approx_; }

  bool same_as(const FieldContext& o) const;
  // theta^(degree + k) reduced to the power basis
  const std::vector<mpq_class>& reduction(int k) const { return powers_[k]; }

 private:
  friend class Scalar;

  std::vector<mpz_class> poly_;
  mpq_class lo_, hi_;
  // monic reduction: theta^(d+k) as a vector of length d, for k in [0, d-1)
  std::vector<std::vector<mpq_class>> powers_;
  // refined isolating interval used by the general sign path
  mpq_class ref_lo_, ref_hi_;
  double approx_ = 0;
  std::vector<double> approx_pows_;  // theta^i, i < degree
  // quadratic case: theta = qa + qb * sqrt(qd)
  bool quadratic_ = false;
  mpq_class qa_, qb_, qd_;
};

using FieldPtr = std::shared_ptr<const FieldContext>;

FieldPtr make_field(std::vector<mpz_class> min_poly, mpq_class lo, mpq_class hi);

// Element of Q(theta) stored as rational coefficients of 1, theta, theta^2, ...
// Trailing zero coefficients are trimmed, so equality is syntactic. A scalar
// with no field is a plain rational and mixes freely with any field.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : c_{mpq_class(v)} { trim(); }  // NOLINT(google-explicit-constructor)
  Scalar(int v) : Scalar(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  explicit Scalar(mpq_class v) : c_{std::move(v)} { trim(); }
  Scalar(FieldPtr f, std::vector<mpq_class> coeffs);

  static Scalar rational(long num, long den = 1);
  static Scalar generator(FieldPtr f);

  const FieldPtr& field() const { return f_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  mpq_class coeff(int i) const;
  bool is_zero() const { return c_.empty(); }
  bool is_rational() const { return c_.size() <= 1; }

  int sign() const;
  double to_double() const;
  Scalar inverse() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator<(const Scalar& a, const Scalar& b) { return (a - b).sign() < 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return !(a < b); }

  // Lexicographic order on coefficient vectors; used for canonical keys only.
  static int key_compare(const Scalar& a, const Scalar& b);

  // Largest integer n with n <= value.
  mpz_class floor() const;

  std::string to_string() const;

 private:
  void trim();
  const FieldPtr& join(const Scalar& o) const;

  FieldPtr f_;
  std::vector<mpq_class> c_;
};

Scalar abs(const Scalar& a);
inline const Scalar& min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }
inline const Scalar& max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }

// "[1/2, 3]" -> 1/2 + 3 theta. A single entry gives a rational.
Scalar parse_scalar(std::string_view text, const FieldPtr& f);

}  // namespace veering
