#include "qzeta/bernoulli.hpp"

#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>

namespace qzeta {

namespace {

// Grows on demand under an exclusive lock; readers copy values out.
class BernoulliCache {
 public:
  Rational get(unsigned n) {
    {
      std::shared_lock lock(mutex_);
      if (n < values_.size()) return values_[n];
    }
    std::unique_lock lock(mutex_);
    extend(n);
    return values_[n];
  }

  std::vector<Rational> range(unsigned n_max) {
    {
      std::shared_lock lock(mutex_);
      if (n_max < values_.size()) return {values_.begin(), values_.begin() + n_max + 1};
    }
    std::unique_lock lock(mutex_);
    extend(n_max);
    return {values_.begin(), values_.begin() + n_max + 1};
  }

 private:
  // row_ holds C(values_.size(), j) on entry.
  void extend(unsigned n_max) {
    if (values_.empty()) {
      values_.emplace_back(1);
      row_ = {Integer(1), Integer(1)};
    }
    while (values_.size() <= n_max) {
      const unsigned n = static_cast<unsigned>(values_.size());
      // Advance row_ from C(n, .) to C(n+1, .).
      row_.emplace_back(1);
      for (unsigned j = n; j >= 1; --j) row_[j] += row_[j - 1];
      if (n >= 3 && (n & 1)) {
        values_.emplace_back(0);
        continue;
      }
      Rational sum(0);
      for (unsigned j = 0; j < n; ++j) {
        if (j >= 3 && (j & 1)) continue;
        sum += Rational(row_[j]) * values_[j];
      }
      Rational value = -sum / Rational(Integer(n + 1));
      value.canonicalize();
      values_.push_back(std::move(value));
    }
  }

  std::shared_mutex mutex_;
  std::vector<Rational> values_;
  std::vector<Integer> row_;
};

BernoulliCache& cache() {
  static BernoulliCache instance;
  return instance;
}

// row[j] <- C(r, j) given row[j] = C(r-1, j), row sized > r.
void advance_pascal_row(std::vector<std::uint64_t>& row, std::uint64_t r, const Modulus& mod) {
  row[r] = 1 % mod.value();
  for (std::uint64_t j = r - 1; j >= 1; --j) row[j] = mod.add(row[j], row[j - 1]);
}

// sum_k a[k] * b[k] mod q over the given index pairs, accumulating raw
// products when q fits a word.
class Accumulator {
 public:
  explicit Accumulator(const Modulus& mod) : mod_(mod) {}

  void add_product(std::uint64_t a, std::uint64_t b) {
    if (mod_.is_word_sized()) {
      wide_ += u128(a * b);
    } else {
      narrow_ = mod_.add(narrow_, mod_.mul(a, b));
    }
  }

  std::uint64_t value() const {
    if (mod_.is_word_sized()) return static_cast<std::uint64_t>(wide_ % mod_.value());
    return narrow_;
  }

 private:
  const Modulus& mod_;
  u128 wide_ = 0;
  std::uint64_t narrow_ = 0;
};

}  // namespace

Rational bernoulli_exact(unsigned n) { return cache().get(n); }

std::vector<Rational> bernoulli_exact_range(unsigned n_max) { return cache().range(n_max); }

ModularBernoulliTable::ModularBernoulliTable(std::uint64_t p, unsigned exponent)
    : p_(p), exponent_(exponent), mod_(int_pow(p, exponent)) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("modulus must be an odd prime");
  if (exponent == 0 || exponent > max_prime_power_exponent(p)) {
    throw std::invalid_argument("prime power exponent out of range");
  }
  const std::uint64_t top = p - 2;
  residues_.assign(top + 1, 0);
  residues_[0] = 1;
  residues_[1] = mod_.neg(mod_.inverse(2));  // B_1 = -1/2

  // row = C(r, .) for r = n + 1 at the top of each iteration.
  std::vector<std::uint64_t> row(top + 2, 0);
  row[0] = 1;
  row[1] = 2;
  row[2] = 1;
  for (std::uint64_t n = 2; n <= top; ++n) {
    advance_pascal_row(row, n + 1, mod_);
    if (n & 1) continue;
    Accumulator acc(mod_);
    acc.add_product(row[0], residues_[0]);
    acc.add_product(row[1], residues_[1]);
    for (std::uint64_t j = 2; j < n; j += 2) acc.add_product(row[j], residues_[j]);
    residues_[n] = mod_.neg(mod_.mul(acc.value(), mod_.inverse(n + 1)));
  }
}

std::uint64_t ModularBernoulliTable::operator[](std::uint64_t n) const {
  if (n >= residues_.size()) {
    throw std::out_of_range("B_" + std::to_string(n) + " is not p-integral for p = " +
                            std::to_string(p_) + " or lies outside the table");
  }
  return residues_[n];
}

ModularBernoulliTable bernoulli_mod_table(std::uint64_t p, unsigned exponent) {
  return ModularBernoulliTable(p, exponent);
}

CharacterPowerSums character_power_sums(FundamentalDiscriminant disc, unsigned k_max,
                                        std::optional<std::uint64_t> modulus) {
  CharacterPowerSums sums{disc, k_max, modulus, {}, {}};
  const QuadraticCharacter chi(disc);
  const auto d = static_cast<std::uint64_t>(disc.value());
  if (modulus) {
    const Modulus mod(*modulus);
    sums.residues.assign(k_max + 1, 0);
    for (std::uint64_t a = 1; a <= d; ++a) {
      const int c = chi(a);
      if (c == 0) continue;
      const std::uint64_t base = a % mod.value();
      std::uint64_t power = 1 % mod.value();
      for (unsigned k = 0; k <= k_max; ++k) {
        sums.residues[k] = c > 0 ? mod.add(sums.residues[k], power) : mod.sub(sums.residues[k], power);
        power = mod.mul(power, base);
      }
    }
    return sums;
  }
  sums.exact.assign(k_max + 1, Integer(0));
  Integer power;
  for (std::uint64_t a = 1; a <= d; ++a) {
    const int c = chi(a);
    if (c == 0) continue;
    power = 1;
    for (unsigned k = 0; k <= k_max; ++k) {
      if (c > 0) {
        sums.exact[k] += power;
      } else {
        sums.exact[k] -= power;
      }
      mpz_mul_ui(power.get_mpz_t(), power.get_mpz_t(), static_cast<unsigned long>(a));
    }
  }
  return sums;
}

std::vector<Rational> generalized_bernoulli_exact_range(FundamentalDiscriminant disc,
                                                        unsigned n_max) {
  const auto sums = character_power_sums(disc, n_max);
  const auto bern = bernoulli_exact_range(n_max);
  const Integer d(static_cast<long>(disc.value()));

  std::vector<Integer> d_powers(n_max + 1);
  d_powers[0] = 1;
  for (unsigned j = 1; j <= n_max; ++j) d_powers[j] = d_powers[j - 1] * d;

  std::vector<Rational> out(n_max + 1);
  std::vector<Integer> row{Integer(1)};  // C(n, .)
  for (unsigned n = 0; n <= n_max; ++n) {
    if (n > 0) {
      row.emplace_back(1);
      for (unsigned j = n - 1; j >= 1; --j) row[j] += row[j - 1];
    }
    Rational sum(0);
    for (unsigned j = 0; j <= n; ++j) {
      if (bern[j] == 0 || sums.exact[n - j] == 0) continue;
      sum += Rational(row[j] * d_powers[j] * sums.exact[n - j]) * bern[j];
    }
    out[n] = sum / Rational(d);
    out[n].canonicalize();
  }
  return out;
}

Rational generalized_bernoulli_exact(FundamentalDiscriminant disc, unsigned n) {
  return generalized_bernoulli_exact_range(disc, n)[n];
}

GeneralizedBernoulliModTable::GeneralizedBernoulliModTable(FundamentalDiscriminant disc,
                                                           std::uint64_t p, unsigned exponent)
    : disc_(disc), bernoulli_(p, exponent) {
  const auto d = static_cast<std::uint64_t>(disc.value());
  if (d % p == 0) {
    throw std::invalid_argument("p = " + std::to_string(p) + " divides D = " +
                                std::to_string(d) + "; use the exact path");
  }
  const Modulus& mod = bernoulli_.modulus();
  const std::uint64_t top = p - 1;
  const auto sums = character_power_sums(disc, static_cast<unsigned>(top), mod.value());
  const auto& s = sums.residues;

  // bd[j] = B_j D^j for j <= p-2.
  std::vector<std::uint64_t> bd(top, 0);
  std::uint64_t d_power = 1 % mod.value();
  const std::uint64_t d_mod = d % mod.value();
  for (std::uint64_t j = 0; j + 1 <= top; ++j) {
    bd[j] = mod.mul(bernoulli_[j], d_power);
    d_power = mod.mul(d_power, d_mod);
  }
  const std::uint64_t d_inv = mod.inverse(d_mod);

  residues_.assign(top + 1, 0);
  std::vector<std::uint64_t> row(top + 1, 0);  // C(n, .)
  row[0] = 1;
  for (std::uint64_t n = 1; n <= top; ++n) {
    advance_pascal_row(row, n, mod);
    if (n & 1) continue;
    Accumulator acc(mod);
    acc.add_product(mod.mul(row[0], bd[0]), s[n]);
    acc.add_product(mod.mul(row[1], bd[1]), s[n - 1]);
    for (std::uint64_t j = 2; j < n; j += 2) acc.add_product(mod.mul(row[j], bd[j]), s[n - j]);
    residues_[n] = mod.mul(acc.value(), d_inv);
  }
}

std::uint64_t GeneralizedBernoulliModTable::operator[](std::uint64_t n) const {
  if (n < 2 || n >= residues_.size() || (n & 1)) {
    throw std::out_of_range("B_{n,chi} residue requested outside even 2 <= n <= p-1");
  }
  return residues_[n];
}

std::uint64_t generalized_bernoulli_mod(FundamentalDiscriminant disc, unsigned n,
                                        std::uint64_t p) {
  const auto d = static_cast<std::uint64_t>(disc.value());
  if (d % p == 0) throw std::invalid_argument("p divides D; use the exact path");
  if (n > p - 1) throw std::invalid_argument("n exceeds p - 1");
  if (n == 0) return 0;  // B_{0,chi} = S_0 / D = 0

  const ModularBernoulliTable bern(p);
  const Modulus& mod = bern.modulus();
  const auto s = character_power_sums(disc, n, p).residues;
  std::vector<std::uint64_t> row(n + 1, 0);
  row[0] = 1;
  for (std::uint64_t r = 1; r <= n; ++r) advance_pascal_row(row, r, mod);

  std::uint64_t sum = 0, d_power = 1;
  for (unsigned j = 0; j < n; ++j) {  // j = n carries S_0 = 0
    const std::uint64_t term = mod.mul(mod.mul(row[j], bern[j]), mod.mul(d_power, s[n - j]));
    sum = mod.add(sum, term);
    d_power = mod.mul(d_power, d % p);
  }
  return mod.mul(sum, mod.inverse(d % p));
}

}  // namespace qzeta
