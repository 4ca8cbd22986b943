#include "qzeta/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <vector>

#include "qzeta/statistics.hpp"

namespace qzeta::report {

using nlohmann::json;

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Two decimals, or three for small nonzero values (e.g. 0.005).
std::string average_text(double v) { return (v != 0 && std::fabs(v) < 0.01) ? fixed(v, 3) : fixed(v, 2); }

std::string population_name(Population p) {
  switch (p) {
    case Population::primes_fixed_disc: return "primes_fixed_disc";
    case Population::pairs_varying_disc: return "pairs_varying_disc";
    case Population::residue_classes: return "residue_classes";
    case Population::residues: return "residues";
  }
  return "?";
}

std::string join(const std::vector<std::string>& cells, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += sep;
    out += cells[i];
  }
  return out;
}

std::string text_row(const std::vector<std::string>& cells) { return join(cells, " & ") + '\n'; }
std::string csv_row(const std::vector<std::string>& cells) { return join(cells, ",") + '\n'; }

std::string chi_line(std::string_view prefix, double statistic, unsigned df, double sig) {
  return std::string(prefix) + "chi-squared " + fixed(statistic, 2) + ", df " + std::to_string(df) +
         ", significance " + bare_fraction(sig, 3) + '\n';
}

json table_json(const DistributionTable& t, std::string_view key_name) {
  json cats = json::array();
  for (const auto& row : t.rows) {
    cats.push_back({{std::string(key_name), row.key},
                    {"observed", row.observed},
                    {"expected", row.expected},
                    {"fraction", row.fraction}});
  }
  json groups = json::array();
  for (const auto& g : t.groups) {
    groups.push_back({{"label", g.label}, {"observed", g.observed}, {"expected", g.expected}});
  }
  return {{"population", population_name(t.population)},
          {"population_size", t.population_size},
          {"categories", cats},
          {"groups", groups},
          {"chi_squared", t.chi_squared},
          {"df", t.df},
          {"significance", t.significance}};
}

std::string dump(const json& j) { return j.dump(2) + '\n'; }

std::uint64_t single_disc(std::span<const IndexRecord> records) {
  if (records.empty()) return 0;
  const auto d = records.front().disc;
  for (const auto& rec : records) {
    if (rec.disc != d) throw std::invalid_argument("table1 needs records of a single discriminant");
  }
  return static_cast<std::uint64_t>(d);
}

std::string render_table1(std::span<const IndexRecord> records, const ReportOptions& opt) {
  const auto disc = single_disc(records);
  const PredictionPolicy policy{};
  const auto grouping = wagstaff_grouping();
  const auto table = build_distribution(records, policy, grouping);

  std::uint64_t bound = opt.p_bound;
  if (bound == 0) {
    for (const auto& rec : records) bound = std::max(bound, rec.p + 1);
  }
  struct Point {
    std::uint64_t x;
    DistributionTable t;
  };
  std::vector<Point> series;
  for (std::uint64_t x = 1000; x <= bound; x += 1000) {
    std::vector<IndexRecord> below;
    for (const auto& rec : records) {
      if (rec.p < x) below.push_back(rec);
    }
    series.push_back({x, build_distribution(below, policy, grouping)});
  }

  switch (opt.format) {
    case Format::json: {
      json j = table_json(table, "r");
      j["disc"] = disc;
      j["p_bound"] = bound;
      json s = json::array();
      for (const auto& pt : series) {
        s.push_back({{"x", pt.x},
                     {"population_size", pt.t.population_size},
                     {"chi_squared", pt.t.chi_squared},
                     {"df", pt.t.df},
                     {"significance", pt.t.significance}});
      }
      j["series"] = s;
      return dump(j);
    }
    case Format::csv: {
      std::string out = "r,observed,expected,fraction\n";
      if (table.population_size == 0) return out;
      for (const auto& row : table.rows) {
        out += csv_row({std::to_string(row.key), shortest(row.observed), shortest(row.expected),
                        shortest(row.fraction)});
      }
      return out;
    }
    case Format::text: break;
  }
  std::string out = "D=" + std::to_string(disc) + ", p<" + std::to_string(bound) + ": " +
                    std::to_string(records.size()) + " primes\n";
  out += text_row({"r", "number", "predicted number", "predicted fraction"});
  for (const auto& row : table.rows) {
    out += text_row({std::to_string(row.key), fixed(row.observed, 0), fixed(row.expected, 2),
                     bare_fraction(row.fraction, 6)});
  }
  out += chi_line("", table.chi_squared, table.df, table.significance);
  for (const auto& pt : series) {
    out += chi_line("x=" + std::to_string(pt.x) + ": ", pt.t.chi_squared, pt.t.df, pt.t.significance);
  }
  return out;
}

// Shared by tables 2 and 3, which differ in prediction and number style.
std::string render_aggregate(std::span<const IndexRecord> records, const ReportOptions& opt,
                             PredictionPolicy policy, const Grouping& grouping, bool six_digit) {
  const auto agg = aggregate_across_discriminants(records, policy, grouping);
  const auto& totals = agg.totals;
  const auto& avg = agg.averages;

  switch (opt.format) {
    case Format::json: {
      json j = table_json(totals, "r");
      j["discriminants"] = agg.discriminants;
      j["averages"] = table_json(avg, "r");
      j["averages"]["heuristic"] = true;
      return dump(j);
    }
    case Format::csv: {
      std::string out = "r,observed,expected,average_observed,average_expected,fraction\n";
      if (totals.population_size == 0) return out;
      for (std::size_t i = 0; i < totals.rows.size(); ++i) {
        const auto& row = totals.rows[i];
        out += csv_row({std::to_string(row.key), shortest(row.observed), shortest(row.expected),
                        shortest(avg.rows[i].observed), shortest(avg.rows[i].expected),
                        shortest(row.fraction)});
      }
      return out;
    }
    case Format::text: break;
  }
  std::string out = std::to_string(agg.discriminants) + " discriminants, " +
                    std::to_string(records.size()) + " pairs (D, p)\n";
  out += text_row({"r", "total number", "predicted total", "average number", "predicted average",
                   "predicted fraction"});
  for (std::size_t i = 0; i < totals.rows.size(); ++i) {
    const auto& row = totals.rows[i];
    const auto& a = avg.rows[i];
    out += text_row({std::to_string(row.key), fixed(row.observed, 0), fixed(row.expected, 2),
                     six_digit ? fixed(a.observed, 6) : average_text(a.observed),
                     six_digit ? fixed(a.expected, 6) : average_text(a.expected),
                     six_digit ? fixed(row.fraction, 6) : bare_fraction(row.fraction, 6)});
  }
  out += chi_line("totals: ", totals.chi_squared, totals.df, totals.significance);
  out += "averages (heuristic): chi-squared " + fixed(avg.chi_squared, 3) + ", df " +
         std::to_string(avg.df) + ", significance " + bare_fraction(avg.significance, 3) + '\n';
  return out;
}

std::string render_classes(std::span<const IndexRecord> records, const ReportOptions& opt) {
  std::vector<std::uint64_t> all, irregular;
  for (const auto& rec : records) {
    all.push_back(rec.p);
    if (rec.index() > 0) irregular.push_back(rec.p);
  }
  const auto table = residue_class_report(irregular, all, opt.classes_mod);
  switch (opt.format) {
    case Format::json: {
      json j = table_json(table, "class");
      j["modulus"] = opt.classes_mod;
      return dump(j);
    }
    case Format::csv: {
      std::string out = "class,observed,expected,share\n";
      for (const auto& row : table.rows) {
        out += csv_row({std::to_string(row.key), shortest(row.observed), shortest(row.expected),
                        shortest(row.fraction)});
      }
      return out;
    }
    case Format::text: break;
  }
  std::string out = std::to_string(irregular.size()) + " irregular of " + std::to_string(all.size()) +
                    " primes, classes mod " + std::to_string(opt.classes_mod) + '\n';
  out += text_row({"class", "irregular", "expected", "share of primes"});
  for (const auto& row : table.rows) {
    out += text_row({row.label, fixed(row.observed, 0), fixed(row.expected, 2),
                     bare_fraction(row.fraction, 6)});
  }
  out += chi_line("", table.chi_squared, table.df, table.significance);
  return out;
}

std::string render_ratios(std::span<const IndexRecord> records, const ReportOptions& opt) {
  const auto pairs = irregular_pairs(records);
  const auto rep = ratio_uniformity_report(pairs, opt.bins);
  const double expected = static_cast<double>(rep.count) / opt.bins;
  switch (opt.format) {
    case Format::json: {
      json bins = json::array();
      for (std::size_t i = 0; i < rep.histogram.size(); ++i) {
        bins.push_back({{"bin", i}, {"observed", rep.histogram[i]}, {"expected", expected}});
      }
      return dump({{"population", "irregular_pairs"},
                   {"population_size", rep.count},
                   {"categories", bins},
                   {"chi_squared", rep.chi_squared.statistic},
                   {"df", rep.chi_squared.df},
                   {"significance", rep.significance},
                   {"ks", rep.ks}});
    }
    case Format::csv: {
      std::string out = "bin,lo,hi,observed,expected\n";
      for (std::size_t i = 0; i < rep.histogram.size(); ++i) {
        out += csv_row({std::to_string(i), shortest(static_cast<double>(i) / opt.bins),
                        shortest(static_cast<double>(i + 1) / opt.bins),
                        std::to_string(rep.histogram[i]), shortest(expected)});
      }
      return out;
    }
    case Format::text: break;
  }
  std::string out = std::to_string(rep.count) + " irregular pairs, 2m/p in " +
                    std::to_string(opt.bins) + " bins\n";
  out += text_row({"bin", "observed", "expected"});
  for (std::size_t i = 0; i < rep.histogram.size(); ++i) {
    out += text_row({"[" + fixed(static_cast<double>(i) / opt.bins, 3) + "," +
                         fixed(static_cast<double>(i + 1) / opt.bins, 3) + ")",
                     std::to_string(rep.histogram[i]), fixed(expected, 2)});
  }
  out += chi_line("", rep.chi_squared.statistic, rep.chi_squared.df, rep.significance);
  out += "ks " + fixed(rep.ks, 4) + '\n';
  return out;
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "text") return Format::text;
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + std::string(name) + "'");
}

TableKind parse_table(std::string_view name) {
  if (name == "1" || name == "table1") return TableKind::table1;
  if (name == "2" || name == "table2") return TableKind::table2;
  if (name == "3" || name == "table3") return TableKind::table3;
  if (name == "residues") return TableKind::residues;
  if (name == "ratios") return TableKind::ratios;
  if (name == "histogram") return TableKind::histogram;
  throw std::invalid_argument("unknown table '" + std::string(name) + "'");
}

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string s(buf);
  if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) {
    if (s.front() == '-') s.erase(0, 1);
  }
  return s;
}

std::string bare_fraction(double value, int digits) {
  std::string s = fixed(value, digits);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  else if (s.rfind("-0.", 0) == 0) s.erase(1, 1);
  return s;
}

std::string render_records(TableKind table, std::span<const IndexRecord> records,
                           const ReportOptions& options) {
  switch (table) {
    case TableKind::table1: return render_table1(records, options);
    case TableKind::table2:
      return render_aggregate(records, options, PredictionPolicy{}, wagstaff_grouping(), false);
    case TableKind::table3: {
      for (const auto& rec : records) {
        if (rec.p != 3 && rec.p != 5) throw std::invalid_argument("table3 needs records with p in {3, 5}");
      }
      const PredictionPolicy policy{Prediction::exact_small_p, ExceptionalDelta::generic};
      return render_aggregate(records, options, policy, singleton_grouping(2), true);
    }
    case TableKind::residues: return render_classes(records, options);
    case TableKind::ratios: return render_ratios(records, options);
    case TableKind::histogram:
      throw std::invalid_argument("the histogram report reads residue rows, not index records");
  }
  return {};
}

std::string render_histogram(std::span<const io::ResidueRow> rows, const ReportOptions& options) {
  std::map<std::uint64_t, std::vector<std::uint64_t>> by_prime;
  for (const auto& row : rows) by_prime[row.p].push_back(row.residue);

  json all = json::array();
  std::string out = options.format == Format::csv ? "p,residue,observed,expected\n" : "";
  for (const auto& [p, values] : by_prime) {
    const auto table = residue_histogram(values, p);
    switch (options.format) {
      case Format::json: {
        json j = table_json(table, "residue");
        j["p"] = p;
        all.push_back(j);
        break;
      }
      case Format::csv:
        for (const auto& row : table.rows) {
          out += csv_row({std::to_string(p), std::to_string(row.key), shortest(row.observed),
                          shortest(row.expected)});
        }
        break;
      case Format::text:
        out += "p=" + std::to_string(p) + ": " + std::to_string(values.size()) + " values\n";
        out += text_row({"residue", "observed", "expected"});
        for (const auto& row : table.rows) {
          out += text_row({std::to_string(row.key), fixed(row.observed, 0), fixed(row.expected, 2)});
        }
        out += chi_line("", table.chi_squared, table.df, table.significance);
        break;
    }
  }
  return options.format == Format::json ? dump(all) : out;
}

std::string render_survey(std::span<const IndexRecord> records, std::uint64_t p, Format format) {
  const auto survey = high_valuation_survey(records, p);
  const auto extremes = index_extremes(records);
  if (format == Format::json) {
    json attained = json::array();
    for (const auto& [d, two_m] : survey.attained) attained.push_back({{"D", d}, {"two_m", two_m}});
    return dump({{"p", p},
                 {"max_valuation", survey.max_valuation},
                 {"attained", attained},
                 {"largest_index", extremes.max_index},
                 {"largest_index_count", extremes.count}});
  }
  if (format == Format::csv) {
    std::string out = "D,two_m,valuation\n";
    for (const auto& [d, two_m] : survey.attained) {
      out += csv_row({std::to_string(d), std::to_string(two_m), std::to_string(survey.max_valuation)});
    }
    return out;
  }
  std::string out = "p=" + std::to_string(p) + " max " + std::to_string(survey.max_valuation) + '\n';
  for (const auto& [d, two_m] : survey.attained) {
    out += "attained D=" + std::to_string(d) + " two_m=" + std::to_string(two_m) + '\n';
  }
  out += "largest index " + std::to_string(extremes.max_index) + ", count " +
         std::to_string(extremes.count) + '\n';
  return out;
}

}  // namespace qzeta::report
