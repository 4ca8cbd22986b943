#pragma once

// Integer and character primitives: Kronecker symbol, fundamental
// discriminants, odd primes, divisor-sum sieves and p-adic valuations.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace qzeta {

using Integer = mpz_class;
using Rational = mpq_class;
using i128 = __int128;
using u128 = unsigned __int128;

/// Kronecker symbol (d/n) for n >= 0. (d/0) is 1 for |d| = 1 and 0 otherwise.
int kronecker(std::int64_t d, std::uint64_t n);

bool is_squarefree(std::uint64_t n);

/// True iff d is the discriminant of a real quadratic field:
/// d = 1 (mod 4) squarefree, or d = 4m with m = 2, 3 (mod 4) squarefree; d > 1.
bool is_fundamental_discriminant(std::int64_t d);

class FundamentalDiscriminant {
 public:
  /// Throws std::invalid_argument if `value` is not a positive fundamental
  /// discriminant.
  explicit FundamentalDiscriminant(std::int64_t value);

  static std::optional<FundamentalDiscriminant> make(std::int64_t value);

  std::int64_t value() const { return value_; }

  friend auto operator<=>(const FundamentalDiscriminant&,
                          const FundamentalDiscriminant&) = default;

 private:
  struct Unchecked {};
  FundamentalDiscriminant(std::int64_t value, Unchecked) : value_(value) {}
  friend std::vector<FundamentalDiscriminant> enumerate_fundamental_discriminants(
      std::int64_t, std::int64_t);

  std::int64_t value_;
};

/// chi_D(a) = (D/a), tabulated over one period.
class QuadraticCharacter {
 public:
  explicit QuadraticCharacter(FundamentalDiscriminant disc);

  FundamentalDiscriminant discriminant() const { return disc_; }
  std::uint64_t period() const { return period_; }

  int operator()(std::uint64_t a) const { return values_[a % period_]; }

  /// values()[a] = chi(a) for 0 <= a < D.
  std::span<const std::int8_t> values() const { return values_; }

 private:
  FundamentalDiscriminant disc_;
  std::uint64_t period_;
  std::vector<std::int8_t> values_;
};

/// Ascending fundamental discriminants d with lo <= d < hi. Uses a segmented
/// squarefree sieve.
std::vector<FundamentalDiscriminant> enumerate_fundamental_discriminants(
    std::int64_t lo, std::int64_t hi);

/// Odd primes p < x, ascending.
std::vector<std::uint64_t> odd_primes_below(std::uint64_t x);

bool is_prime(std::uint64_t n);

/// sigma_k(n) for 1 <= n <= limit, k in {1, 3}. Immutable once built.
class SigmaTable {
 public:
  SigmaTable() = default;
  SigmaTable(int exponent, std::uint64_t limit, std::vector<u128> entries)
      : exponent_(exponent), limit_(limit), entries_(std::move(entries)) {}

  int exponent() const { return exponent_; }
  std::uint64_t limit() const { return limit_; }

  /// 1 <= n <= limit.
  u128 operator[](std::uint64_t n) const { return entries_[n]; }

 private:
  int exponent_ = 1;
  std::uint64_t limit_ = 0;
  std::vector<u128> entries_;  // index 0 unused
};

/// Sieve of sigma_k over [1, limit]. Throws std::invalid_argument for
/// k not in {1, 3}, limit == 0, or a limit whose entries could overflow
/// 128 bits.
SigmaTable divisor_sigma_sieve(int k, std::uint64_t limit);

/// Exponent of a prime in a rational; +infinity for zero.
class PValuation {
 public:
  constexpr PValuation() = default;
  constexpr explicit PValuation(int value) : value_(value) {}

  static constexpr PValuation infinity() {
    PValuation v;
    v.infinite_ = true;
    return v;
  }

  constexpr bool is_infinite() const { return infinite_; }
  /// Undefined for the infinite valuation.
  constexpr int value() const { return value_; }

  friend constexpr bool operator==(PValuation a, PValuation b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(PValuation a, PValuation b) {
    if (a.infinite_ || b.infinite_) {
      return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
    }
    return a.value_ <=> b.value_;
  }
  friend constexpr PValuation operator+(PValuation a, PValuation b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return PValuation(a.value_ + b.value_);
  }

 private:
  int value_ = 0;
  bool infinite_ = false;
};

PValuation p_adic_valuation(const Integer& n, std::uint64_t p);
PValuation p_adic_valuation(const Rational& q, std::uint64_t p);
PValuation p_adic_valuation(i128 n, std::uint64_t p);

Integer to_integer(i128 v);

}  // namespace qzeta
