#include "qzeta/irregularity.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "qzeta/modular.hpp"
#include "qzeta/parallel.hpp"

namespace qzeta {

namespace {

bool is_hit(PValuation v, HitRule rule) {
  if (v.is_infinite()) return true;
  return rule == HitRule::divides ? v.value() >= 1 : v.value() != 0;
}

void require_odd_prime(std::uint64_t p) {
  if (p < 3 || !is_prime(p)) {
    throw std::invalid_argument(std::to_string(p) + " is not an odd prime");
  }
}

// Walks 2m = 2, 4, ..., last and keeps the hits of `tested`.
template <class Tested>
IndexRecord classify(RegularityContext ctx, IndexKind kind, unsigned last, HitRule rule,
                     Tested&& tested) {
  IndexRecord rec{ctx.disc, ctx.p, ctx.delta, kind, {}};
  for (unsigned two_m = 2; two_m <= last; two_m += 2) {
    const PValuation v = tested(two_m);
    if (is_hit(v, rule)) rec.hits.push_back({two_m, v});
  }
  return rec;
}

// v_p(zeta(1-2m)) for 2 <= 2m <= p-1. The residue mod p settles v = 0; a
// zero residue is refined modulo the largest word-sized power of p, then
// exactly if that power still divides.
class RiemannValuations {
 public:
  explicit RiemannValuations(std::uint64_t p) : p_(p), base_(p) {}

  PValuation operator()(unsigned two_m) {
    if (two_m == p_ - 1) return PValuation(-1);  // von Staudt-Clausen
    if (base_[two_m] != 0) return PValuation(0);
    const unsigned e = max_prime_power_exponent(p_);
    if (!deep_) deep_.emplace(p_, e);
    const auto rv = residue_valuation((*deep_)[two_m], p_, e);
    if (!rv.capped) return PValuation(rv.value);
    return p_adic_valuation(riemann_zeta_neg(two_m / 2), p_);
  }

 private:
  std::uint64_t p_;
  ModularBernoulliTable base_;
  std::optional<ModularBernoulliTable> deep_;
};

// v_p(L(1-2m, chi_D)) for 2 <= 2m <= delta. Exact when p | D; otherwise the
// modular series, refined like RiemannValuations. For p not dividing D every
// such value is p-integral, so the residue mod p decides v = 0 vs v >= 1.
class ChiValuations {
 public:
  ChiValuations(FundamentalDiscriminant disc, std::uint64_t p, unsigned delta)
      : disc_(disc), p_(p) {
    if (static_cast<std::uint64_t>(disc.value()) % p == 0) {
      exact_.emplace(disc, delta / 2);
    } else {
      base_.emplace(disc, p, 1);
    }
  }

  PValuation operator()(unsigned two_m) {
    if (exact_) return p_adic_valuation((*exact_)(two_m / 2), p_);
    if (base_->at_two_m(two_m) != 0) return PValuation(0);
    const unsigned e = max_prime_power_exponent(p_);
    if (!deep_) deep_.emplace(disc_, p_, e);
    const auto rv = residue_valuation(deep_->at_two_m(two_m), p_, e);
    if (!rv.capped) return PValuation(rv.value);
    return p_adic_valuation(l_chi_exact(disc_, two_m / 2), p_);
  }

 private:
  FundamentalDiscriminant disc_;
  std::uint64_t p_;
  std::optional<LValueSeries> exact_;
  std::optional<LValueModSeries> base_;
  std::optional<LValueModSeries> deep_;
};

// Shared by every chi-index path: the tested quantity is L itself except for
// the delta term when D = p, which carries the factor p.
template <class LValuation>
IndexRecord classify_chi(std::int64_t disc, std::uint64_t p, unsigned dlt, HitRule rule,
                         LValuation&& l_valuation) {
  const bool exceptional = static_cast<std::uint64_t>(disc) == p;
  return classify({disc, p, dlt}, IndexKind::chi, dlt, rule, [&](unsigned two_m) {
    const PValuation v = l_valuation(two_m);
    return (exceptional && two_m == dlt) ? v + PValuation(1) : v;
  });
}

std::vector<std::uint64_t> sorted_primes(std::span<const std::uint64_t> primes) {
  std::vector<std::uint64_t> out(primes.begin(), primes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (auto p : out) require_odd_prime(p);
  return out;
}

}  // namespace

unsigned delta(FundamentalDiscriminant disc, std::uint64_t p) {
  require_odd_prime(p);
  const auto full = static_cast<unsigned>(p - 1);
  return static_cast<std::uint64_t>(disc.value()) == p ? full / 2 : full;
}

IndexRecord chi_irregularity_index(FundamentalDiscriminant disc, std::uint64_t p, HitRule rule) {
  const unsigned dlt = delta(disc, p);
  ChiValuations l(disc, p, dlt);
  return classify_chi(disc.value(), p, dlt, rule, l);
}

IndexRecord d_irregularity_index(FundamentalDiscriminant disc, std::uint64_t p, HitRule rule) {
  const unsigned dlt = delta(disc, p);
  ChiValuations l(disc, p, dlt);
  RiemannValuations z(p);
  return classify({disc.value(), p, dlt}, IndexKind::d, dlt, rule, [&](unsigned two_m) {
    const PValuation v = z(two_m) + l(two_m);
    return two_m == dlt ? v + PValuation(1) : v;
  });
}

IndexRecord classical_irregularity_index(std::uint64_t p) {
  require_odd_prime(p);
  const auto dlt = static_cast<unsigned>(p - 1);
  RiemannValuations z(p);
  // 2m < p-1, so v_p(zeta(1-2m)) = v_p(B_2m).
  return classify({0, p, dlt}, IndexKind::classical, dlt - 2, HitRule::divides, z);
}

IndexRecord chi_index_from_series(const LValueSeries& series, std::uint64_t p, HitRule rule) {
  const unsigned dlt = delta(series.disc(), p);
  if (dlt / 2 > series.m_max()) {
    throw std::invalid_argument("L-value series too short for p = " + std::to_string(p));
  }
  return classify_chi(series.disc().value(), p, dlt, rule, [&](unsigned two_m) {
    return p_adic_valuation(series(two_m / 2), p);
  });
}

std::vector<IndexRecord> scan_fixed_disc_range(FundamentalDiscriminant disc, std::uint64_t p_lo,
                                               std::uint64_t p_hi, unsigned workers) {
  std::vector<std::uint64_t> primes;
  for (auto p : odd_primes_below(p_hi)) {
    if (p >= p_lo) primes.push_back(p);
  }
  // Largest primes first keeps the tail of the schedule short.
  const std::size_t n = primes.size();
  auto records = parallel_map(n, workers, [&](std::size_t i) {
    return chi_irregularity_index(disc, primes[n - 1 - i]);
  });
  std::reverse(records.begin(), records.end());
  return records;
}

SiegelTables make_siegel_tables(std::int64_t d_hi) {
  const auto limit = static_cast<std::uint64_t>(std::max<std::int64_t>(1, (d_hi - 1) / 4));
  return {divisor_sigma_sieve(1, limit), divisor_sigma_sieve(3, limit)};
}

std::vector<IndexRecord> scan_fixed_primes(std::int64_t lo, std::int64_t hi,
                                           std::span<const std::uint64_t> primes_in,
                                           ScanMode mode, unsigned workers,
                                           const SiegelTables* tables) {
  const auto primes = sorted_primes(primes_in);
  const auto discs = enumerate_fundamental_discriminants(lo, hi);
  std::vector<std::vector<IndexRecord>> per_disc;

  if (mode == ScanMode::table3) {
    for (auto p : primes) {
      if (p != 3 && p != 5) {
        throw std::invalid_argument("table3 mode supports only p = 3 and p = 5");
      }
    }
    std::optional<SiegelTables> owned;
    if (tables == nullptr) {
      owned = make_siegel_tables(hi);
      tables = &*owned;
    }
    per_disc = parallel_map(discs.size(), workers, [&](std::size_t i) {
      const auto disc = discs[i];
      const Rational zeta1(to_integer(siegel_divisor_sum(disc.value(), tables->sigma1)),
                           Integer(60));
      const Rational zeta3(to_integer(siegel_divisor_sum(disc.value(), tables->sigma3)),
                           Integer(120));
      Rational l_values[2] = {l_from_siegel(disc, 1, zeta1), l_from_siegel(disc, 2, zeta3)};
      std::vector<IndexRecord> out;
      for (auto p : primes) {
        out.push_back(classify_chi(disc.value(), p, delta(disc, p), HitRule::divides,
                                   [&](unsigned two_m) {
                                     return p_adic_valuation(l_values[two_m / 2 - 1], p);
                                   }));
      }
      return out;
    });
  } else {
    if (primes.empty()) return {};
    const auto m_max = static_cast<unsigned>((primes.back() - 1) / 2);
    bernoulli_exact_range(2 * m_max);  // warm the shared cache before fanning out
    per_disc = parallel_map(discs.size(), workers, [&](std::size_t i) {
      const LValueSeries series(discs[i], m_max);
      std::vector<IndexRecord> out;
      for (auto p : primes) out.push_back(chi_index_from_series(series, p));
      return out;
    });
  }

  std::vector<IndexRecord> records;
  records.reserve(discs.size() * primes.size());
  for (auto& block : per_disc) {
    for (auto& rec : block) records.push_back(std::move(rec));
  }
  return records;
}

ValuationSurvey high_valuation_survey(std::span<const IndexRecord> records, std::uint64_t p) {
  ValuationSurvey survey;
  for (const auto& rec : records) {
    if (rec.p != p) continue;
    for (const auto& hit : rec.hits) {
      if (hit.valuation.is_infinite()) continue;
      const int v = hit.valuation.value();
      if (v > survey.max_valuation) {
        survey.max_valuation = v;
        survey.attained.clear();
      }
      if (v == survey.max_valuation && v > 0) survey.attained.emplace_back(rec.disc, hit.two_m);
    }
  }
  std::sort(survey.attained.begin(), survey.attained.end());
  return survey;
}

IndexExtremes index_extremes(std::span<const IndexRecord> records) {
  IndexExtremes ext;
  for (const auto& rec : records) {
    if (rec.index() > ext.max_index) {
      ext.max_index = rec.index();
      ext.count = 0;
    }
    if (rec.index() == ext.max_index) ++ext.count;
  }
  return ext;
}

std::vector<IrregularPair> irregular_pairs(std::span<const IndexRecord> records) {
  std::vector<IrregularPair> pairs;
  for (const auto& rec : records) {
    for (const auto& hit : rec.hits) {
      if (hit.valuation.is_infinite() || hit.valuation.value() < 1) continue;
      pairs.push_back({rec.p, hit.two_m, rec.disc, hit.valuation.value()});
    }
  }
  return pairs;
}

}  // namespace qzeta
