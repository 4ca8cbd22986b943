#include "qzeta/modular.hpp"

#include <stdexcept>
#include <string>

namespace qzeta {

Modulus::Modulus(std::uint64_t q) : q_(q), small_(q < (std::uint64_t{1} << 32)) {
  if (q < 2 || q >= (std::uint64_t{1} << 63)) {
    throw std::invalid_argument("modulus out of range: " + std::to_string(q));
  }
}

std::uint64_t Modulus::pow(std::uint64_t base, std::uint64_t e) const {
  std::uint64_t result = 1 % q_;
  base %= q_;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::uint64_t Modulus::inverse(std::uint64_t a) const {
  i128 old_r = static_cast<i128>(a % q_), r = static_cast<i128>(q_);
  i128 old_s = 1, s = 0;
  while (r != 0) {
    const i128 quotient = old_r / r;
    i128 tmp = old_r - quotient * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quotient * s;
    old_s = s;
    s = tmp;
  }
  // old_r = gcd(a, q); old_s * a = old_r (mod q).
  if (old_r != 1) {
    throw std::domain_error(std::to_string(a) + " is not invertible modulo " + std::to_string(q_));
  }
  i128 inv = old_s % static_cast<i128>(q_);
  if (inv < 0) inv += q_;
  return static_cast<std::uint64_t>(inv);
}

std::uint64_t Modulus::reduce(std::int64_t a) const {
  const auto q = static_cast<i128>(q_);
  i128 r = static_cast<i128>(a) % q;
  if (r < 0) r += q;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t Modulus::reduce(const Integer& a) const {
  Integer r;
  const Integer q(static_cast<unsigned long>(q_));
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t());
  return r.get_ui();
}

std::uint64_t Modulus::reduce(const Rational& a) const {
  return mul(reduce(Integer(a.get_num())), inverse(reduce(Integer(a.get_den()))));
}

std::uint64_t int_pow(std::uint64_t base, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

unsigned max_prime_power_exponent(std::uint64_t p) {
  unsigned e = 1;
  u128 power = p;
  while (power * p < (u128(1) << 62)) {
    power *= p;
    ++e;
  }
  return e;
}

ResidueValuation residue_valuation(std::uint64_t r, std::uint64_t p, unsigned e) {
  if (r == 0) return {static_cast<int>(e), true};
  int v = 0;
  while (r % p == 0) {
    r /= p;
    ++v;
  }
  return {v, false};
}

}  // namespace qzeta
