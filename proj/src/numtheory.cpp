#include "qzeta/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qzeta {

namespace {

// Jacobi symbol (a/n) for odd n > 0 and 0 <= a < n.
int jacobi(std::uint64_t a, std::uint64_t n) {
  int t = 1;
  while (a != 0) {
    const int z = __builtin_ctzll(a);
    a >>= z;
    if ((z & 1) && ((n & 7) == 3 || (n & 7) == 5)) t = -t;
    if ((a & 3) == 3 && (n & 3) == 3) t = -t;
    std::swap(a, n);
    a %= n;
  }
  return n == 1 ? t : 0;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

int kronecker(std::int64_t d, std::uint64_t n) {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  const bool d_even = (d & 1) == 0;
  const int twos = __builtin_ctzll(n);
  if (twos > 0 && d_even) return 0;
  n >>= twos;
  int sign = 1;
  if (twos & 1) {
    const auto r = static_cast<std::uint64_t>(((d % 8) + 8) % 8);
    if (r == 3 || r == 5) sign = -1;
  }
  if (n == 1) return sign;
  const auto nn = static_cast<std::int64_t>(n);
  const auto a = static_cast<std::uint64_t>(((d % nn) + nn) % nn);
  return sign * jacobi(a, n);
}

bool is_squarefree(std::uint64_t n) {
  if (n == 0) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      n /= q;
      if (n % q == 0) return false;
    }
  }
  return true;
}

bool is_fundamental_discriminant(std::int64_t d) {
  if (d <= 1) return false;
  const auto u = static_cast<std::uint64_t>(d);
  if ((u & 3) == 1) return is_squarefree(u);
  if ((u & 3) == 0) {
    const std::uint64_t m = u >> 2;
    return ((m & 3) == 2 || (m & 3) == 3) && is_squarefree(m);
  }
  return false;
}

FundamentalDiscriminant::FundamentalDiscriminant(std::int64_t value) : value_(value) {
  if (!is_fundamental_discriminant(value)) {
    throw std::invalid_argument(std::to_string(value) +
                                " is not a positive fundamental discriminant");
  }
}

std::optional<FundamentalDiscriminant> FundamentalDiscriminant::make(std::int64_t value) {
  if (!is_fundamental_discriminant(value)) return std::nullopt;
  return FundamentalDiscriminant(value, Unchecked{});
}

QuadraticCharacter::QuadraticCharacter(FundamentalDiscriminant disc)
    : disc_(disc), period_(static_cast<std::uint64_t>(disc.value())) {
  values_.resize(period_);
  for (std::uint64_t a = 0; a < period_; ++a) {
    values_[a] = static_cast<std::int8_t>(kronecker(disc.value(), a));
  }
}

std::vector<FundamentalDiscriminant> enumerate_fundamental_discriminants(std::int64_t lo,
                                                                         std::int64_t hi) {
  std::vector<FundamentalDiscriminant> out;
  lo = std::max<std::int64_t>(lo, 2);
  if (lo >= hi) return out;

  // Squarefree flags over [base, hi): covers both d and d/4.
  const auto base = static_cast<std::uint64_t>(lo / 4);
  const auto top = static_cast<std::uint64_t>(hi);
  std::vector<bool> squarefree(top - base, true);
  const std::uint64_t root = isqrt(top);
  for (std::uint64_t q : odd_primes_below(root + 1)) {
    const std::uint64_t sq = q * q;
    for (std::uint64_t k = (base + sq - 1) / sq * sq; k < top; k += sq) squarefree[k - base] = false;
  }
  for (std::uint64_t k = (base + 3) / 4 * 4; k < top; k += 4) squarefree[k - base] = false;
  if (base == 0) squarefree[0] = false;

  for (auto d = static_cast<std::uint64_t>(lo); d < top; ++d) {
    bool ok = false;
    if ((d & 3) == 1) {
      ok = squarefree[d - base];
    } else if ((d & 3) == 0) {
      const std::uint64_t m = d >> 2;
      ok = ((m & 3) == 2 || (m & 3) == 3) && squarefree[m - base];
    }
    if (ok) out.push_back(FundamentalDiscriminant(static_cast<std::int64_t>(d),
                                                  FundamentalDiscriminant::Unchecked{}));
  }
  return out;
}

std::vector<std::uint64_t> odd_primes_below(std::uint64_t x) {
  std::vector<std::uint64_t> primes;
  if (x <= 3) return primes;
  std::vector<bool> composite(x, false);
  for (std::uint64_t i = 3; i < x; i += 2) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j < x; j += 2 * i) composite[j] = true;
  }
  return primes;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t q = 3; q * q <= n; q += 2) {
    if (n % q == 0) return false;
  }
  return true;
}

SigmaTable divisor_sigma_sieve(int k, std::uint64_t limit) {
  if (k != 1 && k != 3) throw std::invalid_argument("sigma exponent must be 1 or 3");
  if (limit == 0) throw std::invalid_argument("sigma table limit must be positive");
  // sigma_k(n) < zeta(k) n^k (k = 3) and < n (1 + ln n) (k = 1). Leave
  // room for Siegel sums of ~sqrt(4 limit) entries on top.
  const long double n = static_cast<long double>(limit);
  const long double bound = (k == 1 ? n * (2 + std::log(n)) : 1.21L * n * n * n) *
                            (4 * std::sqrt(n) + 4);
  if (bound >= std::ldexp(1.0L, 126)) {
    throw std::invalid_argument("sigma table limit " + std::to_string(limit) +
                                " overflows 128-bit accumulation");
  }

  std::vector<u128> entries(limit + 1, 0);
  for (std::uint64_t d = 1; d <= limit; ++d) {
    const u128 dk = k == 1 ? u128(d) : u128(d) * d * d;
    for (std::uint64_t m = d; m <= limit; m += d) entries[m] += dk;
  }
  return SigmaTable(k, limit, std::move(entries));
}

PValuation p_adic_valuation(const Integer& n, std::uint64_t p) {
  if (n == 0) return PValuation::infinity();
  Integer rest;
  const Integer prime(static_cast<unsigned long>(p));
  const auto count = mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t());
  return PValuation(static_cast<int>(count));
}

PValuation p_adic_valuation(const Rational& q, std::uint64_t p) {
  if (q == 0) return PValuation::infinity();
  const auto num = p_adic_valuation(Integer(q.get_num()), p);
  const auto den = p_adic_valuation(Integer(q.get_den()), p);
  return PValuation(num.value() - den.value());
}

PValuation p_adic_valuation(i128 n, std::uint64_t p) {
  if (n == 0) return PValuation::infinity();
  u128 m = n < 0 ? u128(-n) : u128(n);
  int count = 0;
  while (m % p == 0) {
    m /= p;
    ++count;
  }
  return PValuation(count);
}

Integer to_integer(i128 v) {
  const bool negative = v < 0;
  u128 m = negative ? u128(-v) : u128(v);
  Integer hi(static_cast<unsigned long>(m >> 64));
  Integer lo(static_cast<unsigned long>(m & 0xFFFFFFFFFFFFFFFFULL));
  Integer out = (hi << 64) + lo;
  return negative ? Integer(-out) : out;
}

}  // namespace qzeta
