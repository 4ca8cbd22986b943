#pragma once

// Predicted index distributions, grouped chi-squared tests and their
// significance levels, and the uniformity reports built on index records.
// Floating point is confined to this module.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qzeta/irregularity.hpp"
#include "qzeta/numtheory.hpp"

namespace qzeta {

/// (1/2)^r e^{-1/2} / r!: limiting probability of index r as p grows.
double limit_fraction(unsigned r);

/// Binomial law of the index when each of T = delta/2 tested values is
/// divisible by p with probability 1/p. Exact rationals; sums to 1.
std::vector<Rational> exact_index_distribution(std::uint64_t p, bool disc_equals_p);
/// One term of that law; cheap for large p.
Rational exact_index_probability(std::uint64_t p, bool disc_equals_p, unsigned r);

/// Regularized upper incomplete gamma Q(a, x): series below x = a + 1,
/// continued fraction above.
double regularized_gamma_q(double a, double x);

/// Upper-tail probability of chi-squared with `df` degrees of freedom.
double significance(double statistic, unsigned df);

struct ChiSquared {
  double statistic = 0;
  unsigned df = 0;
};

/// sum (obs - exp)^2 / exp over the given categories; df = size - 1.
/// Throws std::invalid_argument on a non-positive expected count.
ChiSquared chi_squared_statistic(std::span<const double> observed,
                                 std::span<const double> expected);

/// An index class: the singleton {lo}, or {r >= lo} when `tail`.
struct IndexCategory {
  unsigned lo;
  bool tail;
};
using Grouping = std::vector<IndexCategory>;

/// {0}, {1}, {2}, {>= 3}.
Grouping wagstaff_grouping();
/// {0}, {1}, ..., {max_r}.
Grouping singleton_grouping(unsigned max_r);

std::string category_label(const IndexCategory& c);

enum class Population { primes_fixed_disc, pairs_varying_disc, residue_classes, residues };

struct DistributionRow {
  std::string label;
  std::int64_t key;  // index r, residue class, ...
  double observed;
  double expected;
  double fraction;
};

struct DistributionTable {
  Population population = Population::primes_fixed_disc;
  double population_size = 0;
  std::vector<DistributionRow> rows;    // one per index value / class
  std::vector<DistributionRow> groups;  // chi-squared categories
  double chi_squared = 0;
  unsigned df = 0;
  double significance = 1.0;
};

enum class Prediction { limit, exact_small_p };

/// How exact_small_p treats records with D = p. `generic` predicts every
/// record from T = (p-1)/2 tests; `per_record` uses the record's own delta.
enum class ExceptionalDelta { generic, per_record };

struct PredictionPolicy {
  Prediction prediction = Prediction::limit;
  ExceptionalDelta exceptional = ExceptionalDelta::generic;
};

/// Observed counts by index, expected counts under the chosen prediction,
/// and the chi-squared test over `grouping`. Empty input yields an all-zero
/// table with significance 1. Throws std::invalid_argument when an observed
/// index is not covered by the grouping.
DistributionTable build_distribution(std::span<const IndexRecord> records,
                                     PredictionPolicy policy, const Grouping& grouping);

struct AggregateReport {
  DistributionTable totals;
  /// Per-discriminant means of observed and expected counts, with the
  /// chi-squared computed on those means. Heuristic.
  DistributionTable averages;
  std::size_t discriminants = 0;
};

AggregateReport aggregate_across_discriminants(std::span<const IndexRecord> records,
                                               PredictionPolicy policy, const Grouping& grouping);

/// Residue classes modulo n: the units, plus classes of primes dividing n
/// that occur among `all_primes`. Expected irregular count per class is the
/// irregular total times the class's share of all primes. Classes that hold
/// no prime at all are omitted. Both arguments are multisets.
DistributionTable residue_class_report(std::span<const std::uint64_t> irregular_primes,
                                       std::span<const std::uint64_t> all_primes, std::uint64_t n);

struct RatioReport {
  std::size_t count = 0;
  std::vector<std::size_t> histogram;  // equal-width bins on (0, 1)
  ChiSquared chi_squared;
  double significance = 1.0;
  double ks = 0;  // Kolmogorov-Smirnov distance to the uniform law
};

/// Uniformity of 2m/p over irregular pairs. Throws std::invalid_argument on
/// an empty pair set or bins < 2.
RatioReport ratio_uniformity_report(std::span<const IrregularPair> pairs, unsigned bins);

/// Counts per residue 0..p-1 against the uniform expectation N/p.
/// Throws std::invalid_argument on empty input.
DistributionTable residue_histogram(std::span<const std::uint64_t> values, std::uint64_t p);

}  // namespace qzeta
