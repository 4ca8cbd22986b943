#include "qzeta/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qzeta {

namespace {

constexpr int kMaxIterations = 1000;
constexpr double kEpsilon = 1e-15;

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Above this bound the rational binomial law is replaced by its double
// evaluation, truncated once the terms fall below double range.
constexpr std::uint64_t kExactRationalBound = 1000;

std::uint64_t test_count(std::uint64_t p, bool disc_equals_p) {
  return (disc_equals_p ? (p - 1) / 2 : p - 1) / 2;
}

std::vector<double> binomial_pmf(std::uint64_t p, bool disc_equals_p) {
  const auto tests = static_cast<double>(test_count(p, disc_equals_p));
  const double log_hit = -std::log(static_cast<double>(p));
  const double log_miss = std::log1p(-1.0 / static_cast<double>(p));
  std::vector<double> out;
  for (double r = 0; r <= tests; r += 1) {
    const double log_term = std::lgamma(tests + 1) - std::lgamma(r + 1) - std::lgamma(tests - r + 1) +
                            r * log_hit + (tests - r) * log_miss;
    const double term = std::exp(log_term);
    if (term < 1e-300 && r > tests / static_cast<double>(p)) break;
    out.push_back(term);
  }
  return out;
}

// Probability of index r for one record under the chosen prediction.
class RecordPredictor {
 public:
  explicit RecordPredictor(PredictionPolicy policy) : policy_(policy) {}

  const std::vector<double>& exact(const IndexRecord& rec) {
    const bool exceptional = policy_.exceptional == ExceptionalDelta::per_record &&
                             static_cast<std::uint64_t>(rec.disc) == rec.p;
    auto key = std::make_pair(rec.p, exceptional);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      std::vector<double> probs;
      if (rec.p < kExactRationalBound) {
        for (const auto& q : exact_index_distribution(rec.p, exceptional)) probs.push_back(q.get_d());
      } else {
        probs = binomial_pmf(rec.p, exceptional);
      }
      it = cache_.emplace(key, std::move(probs)).first;
    }
    return it->second;
  }

 private:
  PredictionPolicy policy_;
  std::map<std::pair<std::uint64_t, bool>, std::vector<double>> cache_;
};

unsigned max_singleton(const Grouping& grouping) {
  unsigned top = 0;
  for (const auto& c : grouping) top = std::max(top, c.lo);
  return top;
}

bool covers(const Grouping& grouping, std::size_t r) {
  return std::any_of(grouping.begin(), grouping.end(), [r](const IndexCategory& c) {
    return c.tail ? r >= c.lo : r == c.lo;
  });
}

void finish(DistributionTable& table) {
  if (table.population_size == 0) {
    table.chi_squared = 0;
    table.df = table.groups.empty() ? 0 : static_cast<unsigned>(table.groups.size() - 1);
    table.significance = 1.0;
    return;
  }
  std::vector<double> obs, exp;
  for (const auto& g : table.groups) {
    obs.push_back(g.observed);
    exp.push_back(g.expected);
  }
  const auto chi = chi_squared_statistic(obs, exp);
  table.chi_squared = chi.statistic;
  table.df = chi.df;
  table.significance = chi.df == 0 ? 1.0 : significance(chi.statistic, chi.df);
}

}  // namespace

double limit_fraction(unsigned r) {
  return std::exp(-0.5 - r * std::log(2.0) - std::lgamma(r + 1.0));
}

Rational exact_index_probability(std::uint64_t p, bool disc_equals_p, unsigned r) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
  const auto tests = static_cast<unsigned long>(test_count(p, disc_equals_p));
  if (r > tests) return Rational(0);
  // C(T, r) (p-1)^(T-r) / p^T
  Integer num, miss_power, den;
  mpz_bin_uiui(num.get_mpz_t(), tests, r);
  mpz_ui_pow_ui(miss_power.get_mpz_t(), static_cast<unsigned long>(p - 1), tests - r);
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(p), tests);
  Rational prob(num * miss_power, den);
  prob.canonicalize();
  return prob;
}

std::vector<Rational> exact_index_distribution(std::uint64_t p, bool disc_equals_p) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
  const auto tests = static_cast<unsigned>(test_count(p, disc_equals_p));
  std::vector<Rational> out;
  for (unsigned r = 0; r <= tests; ++r) out.push_back(exact_index_probability(p, disc_equals_p, r));
  return out;
}

double regularized_gamma_q(double a, double x) {
  if (a <= 0) throw std::invalid_argument("gamma shape must be positive");
  if (x <= 0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double significance(double statistic, unsigned df) {
  if (df == 0) throw std::invalid_argument("degrees of freedom must be positive");
  if (statistic <= 0) return 1.0;
  return std::clamp(regularized_gamma_q(df / 2.0, statistic / 2.0), 0.0, 1.0);
}

ChiSquared chi_squared_statistic(std::span<const double> observed,
                                 std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::invalid_argument("observed and expected must be nonempty and equally sized");
  }
  double stat = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0)) {
      throw std::invalid_argument("expected count must be positive in every category");
    }
    const double diff = observed[i] - expected[i];
    stat += diff * diff / expected[i];
  }
  return {stat, static_cast<unsigned>(observed.size() - 1)};
}

Grouping wagstaff_grouping() { return {{0, false}, {1, false}, {2, false}, {3, true}}; }

Grouping singleton_grouping(unsigned max_r) {
  Grouping g;
  for (unsigned r = 0; r <= max_r; ++r) g.push_back({r, false});
  return g;
}

std::string category_label(const IndexCategory& c) {
  return c.tail ? ">=" + std::to_string(c.lo) : std::to_string(c.lo);
}

DistributionTable build_distribution(std::span<const IndexRecord> records,
                                     PredictionPolicy policy, const Grouping& grouping) {
  DistributionTable table;
  table.population = Population::primes_fixed_disc;
  if (!records.empty()) {
    const auto first = records.front().disc;
    const bool one_disc = std::all_of(records.begin(), records.end(),
                                      [first](const IndexRecord& r) { return r.disc == first; });
    if (!one_disc) table.population = Population::pairs_varying_disc;
  }
  const auto n = static_cast<double>(records.size());
  table.population_size = n;

  std::vector<double> observed;
  for (const auto& rec : records) {
    if (!covers(grouping, rec.index())) {
      throw std::invalid_argument("index " + std::to_string(rec.index()) +
                                  " is not covered by the grouping");
    }
    if (observed.size() <= rec.index()) observed.resize(rec.index() + 1, 0.0);
    observed[rec.index()] += 1;
  }

  // expected_by_r[r] for r up to the last displayed index; tail_beyond is
  // the probability mass past it.
  std::vector<double> expected;
  std::size_t top = std::max<std::size_t>(observed.size(), max_singleton(grouping) + 1);
  if (policy.prediction == Prediction::limit) {
    expected.resize(top);
    for (std::size_t r = 0; r < top; ++r) expected[r] = n * limit_fraction(static_cast<unsigned>(r));
  } else {
    RecordPredictor predictor(policy);
    for (const auto& rec : records) {
      const auto& probs = predictor.exact(rec);
      if (expected.size() < probs.size()) expected.resize(probs.size(), 0.0);
      for (std::size_t r = 0; r < probs.size(); ++r) expected[r] += probs[r];
    }
    top = std::max(top, expected.size());
    expected.resize(top, 0.0);
  }
  observed.resize(top, 0.0);

  for (std::size_t r = 0; r < top; ++r) {
    table.rows.push_back({std::to_string(r), static_cast<std::int64_t>(r), observed[r], expected[r],
                          n > 0 ? expected[r] / n : 0.0});
  }

  for (const auto& cat : grouping) {
    double obs = 0, exp = 0;
    if (cat.tail) {
      for (std::size_t r = cat.lo; r < top; ++r) obs += observed[r];
      if (policy.prediction == Prediction::limit) {
        // Untruncated tail: everything not claimed by smaller indices.
        double below = 0;
        for (unsigned r = 0; r < cat.lo; ++r) below += limit_fraction(r);
        exp = n * (1.0 - below);
      } else {
        for (std::size_t r = cat.lo; r < top; ++r) exp += expected[r];
      }
    } else {
      obs = observed[cat.lo];
      exp = expected[cat.lo];
    }
    table.groups.push_back({category_label(cat), static_cast<std::int64_t>(cat.lo), obs, exp,
                            n > 0 ? exp / n : 0.0});
  }
  finish(table);
  return table;
}

AggregateReport aggregate_across_discriminants(std::span<const IndexRecord> records,
                                               PredictionPolicy policy, const Grouping& grouping) {
  AggregateReport report;
  report.totals = build_distribution(records, policy, grouping);
  std::set<std::int64_t> discs;
  for (const auto& rec : records) discs.insert(rec.disc);
  report.discriminants = discs.size();

  report.averages = report.totals;
  if (discs.empty()) return report;
  const auto count = static_cast<double>(discs.size());
  report.averages.population_size = report.totals.population_size / count;
  for (auto* rows : {&report.averages.rows, &report.averages.groups}) {
    for (auto& row : *rows) {
      row.observed /= count;
      row.expected /= count;
    }
  }
  finish(report.averages);
  return report;
}

DistributionTable residue_class_report(std::span<const std::uint64_t> irregular_primes,
                                       std::span<const std::uint64_t> all_primes, std::uint64_t n) {
  if (n < 3) throw std::invalid_argument("modulus must be at least 3");
  if (all_primes.empty()) throw std::invalid_argument("prime set must be nonempty");

  std::map<std::uint64_t, std::pair<double, double>> classes;  // residue -> (all, irregular)
  for (std::uint64_t r = 1; r < n; ++r) {
    if (std::gcd(r, n) == 1) classes[r] = {0, 0};
  }
  for (auto p : all_primes) classes[p % n].first += 1;
  for (auto p : irregular_primes) {
    auto it = classes.find(p % n);
    if (it == classes.end() || it->second.first == 0) {
      throw std::invalid_argument("irregular prime outside the prime set");
    }
    it->second.second += 1;
  }

  const auto total_all = static_cast<double>(all_primes.size());
  const auto total_irregular = static_cast<double>(irregular_primes.size());
  DistributionTable table;
  table.population = Population::residue_classes;
  table.population_size = total_irregular;
  for (const auto& [residue, counts] : classes) {
    if (counts.first == 0) continue;
    const double share = counts.first / total_all;
    table.rows.push_back({std::to_string(residue) + " mod " + std::to_string(n),
                          static_cast<std::int64_t>(residue), counts.second,
                          total_irregular * share, share});
  }
  table.groups = table.rows;
  if (total_irregular > 0 && table.groups.size() > 1) {
    finish(table);
  } else {
    table.df = table.groups.empty() ? 0 : static_cast<unsigned>(table.groups.size() - 1);
  }
  return table;
}

RatioReport ratio_uniformity_report(std::span<const IrregularPair> pairs, unsigned bins) {
  if (pairs.empty()) throw std::invalid_argument("no irregular pairs");
  if (bins < 2) throw std::invalid_argument("need at least two bins");
  RatioReport report;
  report.count = pairs.size();
  report.histogram.assign(bins, 0);

  std::vector<double> u;
  u.reserve(pairs.size());
  for (const auto& pair : pairs) {
    const double x = static_cast<double>(pair.two_m) / static_cast<double>(pair.p);
    u.push_back(x);
    const auto bin = std::min<std::size_t>(bins - 1, static_cast<std::size_t>(x * bins));
    ++report.histogram[bin];
  }

  const double n = static_cast<double>(u.size());
  std::vector<double> obs(report.histogram.begin(), report.histogram.end());
  std::vector<double> exp(bins, n / bins);
  report.chi_squared = chi_squared_statistic(obs, exp);
  report.significance = significance(report.chi_squared.statistic, report.chi_squared.df);

  std::sort(u.begin(), u.end());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - u[i];
    const double below = u[i] - static_cast<double>(i) / n;
    report.ks = std::max({report.ks, above, below});
  }
  return report;
}

DistributionTable residue_histogram(std::span<const std::uint64_t> values, std::uint64_t p) {
  if (values.empty()) throw std::invalid_argument("no residues");
  if (p < 2) throw std::invalid_argument("modulus must be at least 2");
  std::vector<double> counts(p, 0.0);
  for (auto v : values) counts[v % p] += 1;
  const double n = static_cast<double>(values.size());
  DistributionTable table;
  table.population = Population::residues;
  table.population_size = n;
  for (std::uint64_t r = 0; r < p; ++r) {
    table.rows.push_back({std::to_string(r), static_cast<std::int64_t>(r), counts[r], n / p,
                          1.0 / static_cast<double>(p)});
  }
  table.groups = table.rows;
  finish(table);
  return table;
}

}  // namespace qzeta
