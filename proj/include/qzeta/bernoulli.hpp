#pragma once

// Exact and modular Bernoulli numbers B_n, character power sums and the
// generalized Bernoulli numbers B_{n,chi} of real quadratic characters.
//
// Convention: B_1 = -1/2. All B_n come from the recurrence
//   sum_{j=0}^{n} C(n+1, j) B_j = 0,  B_0 = 1,
// with binomial coefficients produced row by row.

#include <cstdint>
#include <optional>
#include <vector>

#include "qzeta/modular.hpp"
#include "qzeta/numtheory.hpp"

namespace qzeta {

/// B_n, memoized. Safe to call concurrently.
Rational bernoulli_exact(unsigned n);

/// B_0 ... B_{n_max}.
std::vector<Rational> bernoulli_exact_range(unsigned n_max);

/// Residues of B_n modulo p^e for 0 <= n <= p-2. Every division in the
/// recurrence is by n+1 <= p-2, a unit modulo p^e.
class ModularBernoulliTable {
 public:
  ModularBernoulliTable(std::uint64_t p, unsigned exponent = 1);

  std::uint64_t prime() const { return p_; }
  unsigned exponent() const { return exponent_; }
  const Modulus& modulus() const { return mod_; }

  /// Largest index with a p-integral residue (p - 2).
  std::uint64_t max_index() const { return residues_.size() - 1; }

  /// Throws std::out_of_range for n > p - 2 (B_{p-1} has p in its denominator).
  std::uint64_t operator[](std::uint64_t n) const;

 private:
  std::uint64_t p_;
  unsigned exponent_;
  Modulus mod_;
  std::vector<std::uint64_t> residues_;
};

ModularBernoulliTable bernoulli_mod_table(std::uint64_t p, unsigned exponent = 1);

/// S_k = sum_{a=1}^{D} chi_D(a) a^k for 0 <= k <= k_max, exactly or reduced
/// modulo a given modulus.
struct CharacterPowerSums {
  FundamentalDiscriminant disc;
  unsigned k_max;
  std::optional<std::uint64_t> modulus;
  std::vector<Integer> exact;            // filled when modulus is empty
  std::vector<std::uint64_t> residues;   // filled when modulus is set
};

CharacterPowerSums character_power_sums(FundamentalDiscriminant disc, unsigned k_max,
                                        std::optional<std::uint64_t> modulus = std::nullopt);

/// B_{n,chi} = (1/D) sum_{j=0}^{n} C(n,j) B_j D^j S_{n-j}.
Rational generalized_bernoulli_exact(FundamentalDiscriminant disc, unsigned n);

/// B_{0,chi} ... B_{n_max,chi}, sharing one set of power sums.
std::vector<Rational> generalized_bernoulli_exact_range(FundamentalDiscriminant disc,
                                                        unsigned n_max);

/// Residues of B_{n,chi} modulo p^e for every even n in [2, p-1]; p must not
/// divide D. The j = n term of the expansion carries S_0 = 0, so B_{p-1}
/// is never needed.
class GeneralizedBernoulliModTable {
 public:
  GeneralizedBernoulliModTable(FundamentalDiscriminant disc, std::uint64_t p,
                               unsigned exponent = 1);

  FundamentalDiscriminant disc() const { return disc_; }
  std::uint64_t prime() const { return bernoulli_.prime(); }
  const Modulus& modulus() const { return bernoulli_.modulus(); }
  const ModularBernoulliTable& bernoulli() const { return bernoulli_; }

  /// n even, 2 <= n <= p-1.
  std::uint64_t operator[](std::uint64_t n) const;

 private:
  FundamentalDiscriminant disc_;
  ModularBernoulliTable bernoulli_;
  std::vector<std::uint64_t> residues_;  // index n; odd entries unused
};

/// B_{n,chi} mod p. Throws std::invalid_argument when p | D or n > p-1.
std::uint64_t generalized_bernoulli_mod(FundamentalDiscriminant disc, unsigned n,
                                        std::uint64_t p);

}  // namespace qzeta
