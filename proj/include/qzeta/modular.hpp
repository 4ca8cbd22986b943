#pragma once

#include <cstdint>

#include "qzeta/numtheory.hpp"

namespace qzeta {

/// Arithmetic in Z/qZ for 2 <= q < 2^63. Products go through 64-bit
/// registers when q < 2^32 and through 128-bit ones otherwise.
class Modulus {
 public:
  explicit Modulus(std::uint64_t q);

  std::uint64_t value() const { return q_; }
  bool is_word_sized() const { return small_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + q_ - b; }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    if (small_) return (a * b) % q_;
    return static_cast<std::uint64_t>((u128(a) * b) % q_);
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t e) const;

  /// Inverse of a modulo q; throws std::domain_error if gcd(a, q) != 1.
  std::uint64_t inverse(std::uint64_t a) const;

  std::uint64_t reduce(std::int64_t a) const;
  std::uint64_t reduce(const Integer& a) const;
  /// Reduces a rational whose denominator is a unit modulo q.
  std::uint64_t reduce(const Rational& a) const;

 private:
  std::uint64_t q_;
  bool small_;
};

/// Largest e >= 1 with p^e < 2^62.
unsigned max_prime_power_exponent(std::uint64_t p);

std::uint64_t int_pow(std::uint64_t base, unsigned e);

/// v_p of a residue r modulo p^e: exact when r != 0, otherwise the result is
/// capped at e and `capped` is set.
struct ResidueValuation {
  int value;
  bool capped;
};
ResidueValuation residue_valuation(std::uint64_t r, std::uint64_t p, unsigned e);

}  // namespace qzeta
