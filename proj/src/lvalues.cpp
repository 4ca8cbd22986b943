#include "qzeta/lvalues.hpp"

#include <stdexcept>
#include <string>

#include "qzeta/modular.hpp"

namespace qzeta {

namespace {

void check_siegel_args(unsigned m, std::int64_t hi, const SigmaTable& sigma) {
  if (m != 1 && m != 2) {
    throw std::invalid_argument("divisor-sum batch path exists only for m = 1, 2");
  }
  if (sigma.exponent() != static_cast<int>(2 * m - 1)) {
    throw std::invalid_argument("sigma table exponent must be 2m-1");
  }
  if (hi > 1 && static_cast<std::uint64_t>((hi - 1) / 4) > sigma.limit()) {
    throw std::out_of_range("sigma table limit " + std::to_string(sigma.limit()) +
                            " does not cover discriminants below " + std::to_string(hi));
  }
}

// zeta_D(1-2m) = divisor sum / siegel_denominator(m).
long siegel_denominator(unsigned m) { return m == 1 ? 60 : 120; }

}  // namespace

Rational riemann_zeta_neg(unsigned m) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  Rational v = -bernoulli_exact(2 * m) / Rational(2 * m);
  v.canonicalize();
  return v;
}

Rational l_chi_exact(FundamentalDiscriminant disc, unsigned m) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  Rational v = -generalized_bernoulli_exact(disc, 2 * m) / Rational(2 * m);
  v.canonicalize();
  return v;
}

Rational zeta_d_exact(FundamentalDiscriminant disc, unsigned m) {
  Rational v = riemann_zeta_neg(m) * l_chi_exact(disc, m);
  v.canonicalize();
  return v;
}

std::uint64_t l_chi_mod(FundamentalDiscriminant disc, unsigned m, std::uint64_t p) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  if (2ULL * m > p - 1) throw std::invalid_argument("2m exceeds p - 1");
  const Modulus mod(p);
  const std::uint64_t b = generalized_bernoulli_mod(disc, 2 * m, p);
  return mod.neg(mod.mul(b, mod.inverse(2 * m)));
}

std::uint64_t zeta_d_mod(FundamentalDiscriminant disc, unsigned m, std::uint64_t p) {
  if (2ULL * m + 3 > p) throw std::invalid_argument("2m exceeds p - 3");
  const Modulus mod(p);
  const auto bern = bernoulli_mod_table(p);
  const std::uint64_t riemann = mod.neg(mod.mul(bern[2 * m], mod.inverse(2 * m)));
  return mod.mul(riemann, l_chi_mod(disc, m, p));
}

LValueSeries::LValueSeries(FundamentalDiscriminant disc, unsigned m_max) : disc_(disc) {
  const auto gb = generalized_bernoulli_exact_range(disc, 2 * m_max);
  values_.reserve(m_max);
  for (unsigned m = 1; m <= m_max; ++m) {
    Rational v = -gb[2 * m] / Rational(2 * m);
    v.canonicalize();
    values_.push_back(std::move(v));
  }
}

LValueModSeries::LValueModSeries(FundamentalDiscriminant disc, std::uint64_t p,
                                 unsigned exponent)
    : table_(disc, p, exponent) {}

std::uint64_t LValueModSeries::at_two_m(std::uint64_t two_m) const {
  const Modulus& mod = table_.modulus();
  return mod.neg(mod.mul(table_[two_m], mod.inverse(two_m)));
}

std::uint64_t LValueModSeries::riemann_at_two_m(std::uint64_t two_m) const {
  const Modulus& mod = table_.modulus();
  return mod.neg(mod.mul(table_.bernoulli()[two_m], mod.inverse(two_m)));
}

i128 siegel_divisor_sum(std::int64_t disc, const SigmaTable& sigma) {
  if (static_cast<std::uint64_t>((disc - 1) / 4) > sigma.limit()) {
    throw std::out_of_range("sigma table does not cover D = " + std::to_string(disc));
  }
  // Terms for b and -b coincide; b = 0 occurs only for even D.
  i128 sum = 0;
  std::int64_t b = disc & 1;
  if (b == 0) {
    sum += static_cast<i128>(sigma[static_cast<std::uint64_t>(disc / 4)]);
    b = 2;
  }
  for (; b * b < disc; b += 2) {
    sum += 2 * static_cast<i128>(sigma[static_cast<std::uint64_t>((disc - b * b) / 4)]);
  }
  return sum;
}

std::vector<SiegelValue> siegel_batch(unsigned m, std::int64_t lo, std::int64_t hi,
                                      const SigmaTable& sigma) {
  check_siegel_args(m, hi, sigma);
  std::vector<SiegelValue> out;
  for (const auto disc : enumerate_fundamental_discriminants(lo, hi)) {
    Rational v(to_integer(siegel_divisor_sum(disc.value(), sigma)),
               Integer(siegel_denominator(m)));
    v.canonicalize();
    out.push_back({disc, std::move(v)});
  }
  return out;
}

std::vector<SiegelValuation> siegel_valuation_batch(unsigned m, std::int64_t lo, std::int64_t hi,
                                                    const SigmaTable& sigma, std::uint64_t p,
                                                    unsigned depth) {
  check_siegel_args(m, hi, sigma);
  const std::uint64_t q = int_pow(p, depth);
  const auto shift = p_adic_valuation(Integer(siegel_denominator(m)), p).value();
  std::vector<SiegelValuation> out;
  for (const auto disc : enumerate_fundamental_discriminants(lo, hi)) {
    const std::int64_t d = disc.value();
    u128 sum = 0;
    std::int64_t b = d & 1;
    if (b == 0) {
      sum += sigma[static_cast<std::uint64_t>(d / 4)] % q;
      b = 2;
    }
    for (; b * b < d; b += 2) sum += 2 * (sigma[static_cast<std::uint64_t>((d - b * b) / 4)] % q);
    const auto rv = residue_valuation(static_cast<std::uint64_t>(sum % q), p, depth);
    out.push_back({disc, PValuation(rv.value - shift), rv.capped});
  }
  return out;
}

Rational l_from_siegel(FundamentalDiscriminant, unsigned m, const Rational& zeta_d) {
  if (m != 1 && m != 2) throw std::invalid_argument("m must be 1 or 2");
  Rational v = zeta_d * (m == 1 ? Rational(-12) : Rational(120));
  v.canonicalize();
  return v;
}

}  // namespace qzeta
