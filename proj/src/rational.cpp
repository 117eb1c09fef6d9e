#include "evsim/rational.hpp"

#include <numeric>
#include <stdexcept>

namespace evsim {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
  return r;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = checked_mul(num, -1);
    den = checked_mul(den, -1);
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::to_string() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t g = std::gcd(a.den_, b.den_);
  const std::int64_t lhs = checked_mul(a.num_, b.den_ / g);
  const std::int64_t rhs = checked_mul(b.num_, a.den_ / g);
  return {checked_add(lhs, rhs), checked_mul(a.den_ / g, b.den_)};
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  // Cross-reduce first to keep intermediates small.
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  const std::int64_t d1 = g1 == 0 ? 1 : g1;
  const std::int64_t d2 = g2 == 0 ? 1 : g2;
  return {checked_mul(a.num_ / d1, b.num_ / d2), checked_mul(a.den_ / d2, b.den_ / d1)};
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return a * Rational(b.den_, b.num_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = checked_mul(num_, -1);
  r.den_ = den_;
  return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const Rational diff = a - b;
  return diff.num_ <=> 0;
}

}  // namespace evsim
