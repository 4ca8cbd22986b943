#pragma once

// Indices of irregularity for a real quadratic field Q(sqrt D) and an odd
// prime p.
//
// delta = p-1, or (p-1)/2 when D = p. The tested values are
//   chi-index: L(1-2m, chi) for 2 <= 2m <= delta-2, then the delta term,
//              which is L(1-delta, chi) for D != p and p L(1-delta, chi)
//              for D = p.
//   D-index:   zeta_D(1-2m) for 2 <= 2m <= delta-2, then p zeta_D(1-delta).
//   classical: B_{2m} for 2 <= 2m <= p-3.
// A tested value is a hit when p divides it (v_p >= 1).

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qzeta/lvalues.hpp"
#include "qzeta/numtheory.hpp"

namespace qzeta {

enum class IndexKind { chi, d, classical };

/// divides: v_p >= 1 is a hit. strict: any v_p != 0 is a hit (sensitivity
/// analysis only).
enum class HitRule { divides, strict };

unsigned delta(FundamentalDiscriminant disc, std::uint64_t p);

struct RegularityContext {
  std::int64_t disc;  // 0 for the classical (rational) case
  std::uint64_t p;
  unsigned delta;
};

struct Hit {
  unsigned two_m;
  PValuation valuation;  // of the tested quantity

  friend bool operator==(const Hit&, const Hit&) = default;
};

struct IndexRecord {
  std::int64_t disc;
  std::uint64_t p;
  unsigned delta;
  IndexKind kind;
  std::vector<Hit> hits;  // ascending two_m

  std::size_t index() const { return hits.size(); }
  RegularityContext context() const { return {disc, p, delta}; }

  friend bool operator==(const IndexRecord&, const IndexRecord&) = default;
};

struct IrregularPair {
  std::uint64_t p;
  unsigned two_m;
  std::int64_t disc;
  int valuation;
};

IndexRecord chi_irregularity_index(FundamentalDiscriminant disc, std::uint64_t p,
                                   HitRule rule = HitRule::divides);
IndexRecord d_irregularity_index(FundamentalDiscriminant disc, std::uint64_t p,
                                 HitRule rule = HitRule::divides);
IndexRecord classical_irregularity_index(std::uint64_t p);

/// chi-index from precomputed exact values L(1-2m, chi), m <= series.m_max().
IndexRecord chi_index_from_series(const LValueSeries& series, std::uint64_t p,
                                  HitRule rule = HitRule::divides);

/// chi-index records for every odd prime p in [p_lo, p_hi), ascending.
std::vector<IndexRecord> scan_fixed_disc_range(FundamentalDiscriminant disc, std::uint64_t p_lo,
                                               std::uint64_t p_hi, unsigned workers = 1);

/// chi-index records for every odd prime p < p_max.
inline std::vector<IndexRecord> scan_fixed_disc(FundamentalDiscriminant disc,
                                                std::uint64_t p_max, unsigned workers = 1) {
  return scan_fixed_disc_range(disc, 3, p_max, workers);
}

/// full:   every tested value from exact generalized Bernoulli numbers.
/// table3: primes in {3, 5}; L(-1, chi) and L(-3, chi) from the divisor-sum
///         batch path.
enum class ScanMode { full, table3 };

struct SiegelTables {
  SigmaTable sigma1;
  SigmaTable sigma3;
};
SiegelTables make_siegel_tables(std::int64_t d_hi);

/// One chi-index record per (D, p) for fundamental D in [lo, hi) and the
/// given odd primes, ordered by (D, p). Throws std::invalid_argument for
/// table3 mode with primes outside {3, 5}. `tables` may be shared across
/// calls in table3 mode; it is built on demand otherwise.
std::vector<IndexRecord> scan_fixed_primes(std::int64_t lo, std::int64_t hi,
                                           std::span<const std::uint64_t> primes, ScanMode mode,
                                           unsigned workers = 1,
                                           const SiegelTables* tables = nullptr);

struct ValuationSurvey {
  int max_valuation = 0;
  std::vector<std::pair<std::int64_t, unsigned>> attained;  // (D, two_m)
};

/// Largest finite hit valuation among records with prime p.
ValuationSurvey high_valuation_survey(std::span<const IndexRecord> records, std::uint64_t p);

struct IndexExtremes {
  std::size_t max_index = 0;
  std::size_t count = 0;
};
IndexExtremes index_extremes(std::span<const IndexRecord> records);

std::vector<IrregularPair> irregular_pairs(std::span<const IndexRecord> records);

}  // namespace qzeta
