#pragma once

// Special values at negative odd integers:
//   zeta(1-2m)      = -B_{2m} / 2m
//   L(1-2m, chi_D)  = -B_{2m,chi} / 2m
//   zeta_D(1-2m)    = zeta(1-2m) L(1-2m, chi_D)
// plus the batch path for m in {1, 2}, which evaluates zeta_D(-1) and
// zeta_D(-3) as divisor sums
//   zeta_D(-1) = (1/60)  sum_b sigma_1((D - b^2)/4)
//   zeta_D(-3) = (1/120) sum_b sigma_3((D - b^2)/4)
// over all integers b with b^2 < D and b = D (mod 2).

#include <cstdint>
#include <vector>

#include "qzeta/bernoulli.hpp"
#include "qzeta/numtheory.hpp"

namespace qzeta {

enum class ValueKind { riemann, l_chi, zeta_d };

struct SpecialValue {
  ValueKind kind;
  std::int64_t disc;  // 0 for riemann
  unsigned m;
  Rational value;
};

Rational riemann_zeta_neg(unsigned m);
Rational l_chi_exact(FundamentalDiscriminant disc, unsigned m);
Rational zeta_d_exact(FundamentalDiscriminant disc, unsigned m);

/// L(1-2m, chi_D) mod p. Throws std::invalid_argument when p | D or 2m > p-1.
std::uint64_t l_chi_mod(FundamentalDiscriminant disc, unsigned m, std::uint64_t p);

/// zeta_D(1-2m) mod p (the Riemann factor needs 2m <= p-3).
std::uint64_t zeta_d_mod(FundamentalDiscriminant disc, unsigned m, std::uint64_t p);

/// L(1-2m, chi_D) for m = 1 ... m_max, sharing one power-sum pass.
class LValueSeries {
 public:
  LValueSeries(FundamentalDiscriminant disc, unsigned m_max);

  FundamentalDiscriminant disc() const { return disc_; }
  unsigned m_max() const { return static_cast<unsigned>(values_.size()); }
  const Rational& operator()(unsigned m) const { return values_.at(m - 1); }

 private:
  FundamentalDiscriminant disc_;
  std::vector<Rational> values_;
};

/// Residues of L(1-2m, chi_D) modulo p^e for every 2 <= 2m <= p-1 (p not
/// dividing D).
class LValueModSeries {
 public:
  LValueModSeries(FundamentalDiscriminant disc, std::uint64_t p, unsigned exponent = 1);

  std::uint64_t prime() const { return table_.prime(); }
  unsigned exponent() const { return table_.bernoulli().exponent(); }
  std::uint64_t two_m_max() const { return prime() - 1; }
  /// Residue of L(1-2m, chi) for even 2 <= two_m <= p-1.
  std::uint64_t at_two_m(std::uint64_t two_m) const;
  /// Residue of zeta(1-2m) for even 2 <= two_m <= p-3.
  std::uint64_t riemann_at_two_m(std::uint64_t two_m) const;

 private:
  GeneralizedBernoulliModTable table_;
};

/// Sum of sigma_k((D - b^2)/4) over b^2 < D, b = D (mod 2), with k = 2m-1.
/// Throws std::out_of_range if the table does not cover (D-1)/4.
i128 siegel_divisor_sum(std::int64_t disc, const SigmaTable& sigma);

struct SiegelValue {
  FundamentalDiscriminant disc;
  Rational zeta_d;
};

/// zeta_D(1-2m) for every fundamental D in [lo, hi), ascending. m in {1, 2};
/// sigma must have exponent 2m-1 and cover floor((hi-1)/4).
std::vector<SiegelValue> siegel_batch(unsigned m, std::int64_t lo, std::int64_t hi,
                                      const SigmaTable& sigma);

/// Valuation-only variant: v_p(zeta_D(1-2m)) from the divisor sums taken
/// modulo p^depth. Valuations whose residue vanishes are reported capped.
struct SiegelValuation {
  FundamentalDiscriminant disc;
  PValuation valuation;
  bool capped;
};
std::vector<SiegelValuation> siegel_valuation_batch(unsigned m, std::int64_t lo, std::int64_t hi,
                                                    const SigmaTable& sigma, std::uint64_t p,
                                                    unsigned depth);

/// L(-1, chi) = -12 zeta_D(-1), L(-3, chi) = 120 zeta_D(-3).
Rational l_from_siegel(FundamentalDiscriminant disc, unsigned m, const Rational& zeta_d);

}  // namespace qzeta
