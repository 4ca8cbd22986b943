// qzeta: special values of real quadratic zeta functions, irregularity scans
// and the statistical reports built on them.
//
// Exit codes: 0 success, 2 usage or validation error, 3 incomplete input.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qzeta/irregularity.hpp"
#include "qzeta/lvalues.hpp"
#include "qzeta/report.hpp"
#include "qzeta/scan_io.hpp"

namespace fs = std::filesystem;
using namespace qzeta;

namespace {

constexpr int kUsageError = 2;
constexpr int kIncompleteInput = 3;

struct Options {
  std::int64_t disc = 0;
  unsigned m = 0;
  std::uint64_t mod = 0;
  std::int64_t dmax = 0;
  std::uint64_t pmax = 0;
  std::vector<std::uint64_t> primes;
  std::string kind = "fixed-disc";
  std::string out;
  std::string in;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  bool resume = false;
  std::string format = "text";
  std::string table;
  unsigned bins = 10;
  std::uint64_t classes_mod = 4;
  bool allow_partial = false;
};

FundamentalDiscriminant require_disc(std::int64_t d) {
  if (!is_fundamental_discriminant(d)) {
    throw std::invalid_argument(std::to_string(d) + " is not a positive fundamental discriminant");
  }
  return FundamentalDiscriminant(d);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    io::write_file_atomic(out_path, text);
  }
}

std::vector<std::uint64_t> primes_from(const Options& o) {
  if (o.mod != 0) return {o.mod};
  if (!o.primes.empty()) return o.primes;
  if (o.pmax != 0) return odd_primes_below(o.pmax);
  throw std::invalid_argument("give --mod, --primes or --pmax");
}

int cmd_value(const Options& o, bool zeta) {
  const auto disc = require_disc(o.disc);
  if (o.m == 0) throw std::invalid_argument("--m must be positive");
  if (o.mod != 0) {
    const auto r = zeta ? zeta_d_mod(disc, o.m, o.mod) : l_chi_mod(disc, o.m, o.mod);
    std::printf("%llu\n", static_cast<unsigned long long>(r));
  } else {
    const Rational v = zeta ? zeta_d_exact(disc, o.m) : l_chi_exact(disc, o.m);
    std::printf("%s\n", v.get_str().c_str());
  }
  return 0;
}

int cmd_index(const Options& o) {
  const auto disc = require_disc(o.disc);
  std::string out(io::kRecordHeader);
  out += '\n';
  for (auto p : primes_from(o)) {
    out += io::format_record(chi_irregularity_index(disc, p));
    out += '\n';
  }
  emit(out, "");
  return 0;
}

int cmd_scan(const Options& o) {
  if (o.out.empty()) throw std::invalid_argument("--out is required");
  io::ScanParameters params;
  params.kind = io::parse_scan_kind(o.kind);
  params.disc = o.disc;
  params.dmax = o.dmax;
  params.pmax = o.pmax;
  params.primes = o.primes;
  const auto summary = io::run_scan(params, o.out, o.workers, o.resume);
  std::printf("%zu rows in %zu shards (%zu computed, %zu resumed)\n", summary.rows,
              summary.manifest.shards.size(), summary.computed, summary.skipped);
  return 0;
}

int cmd_report(const Options& o) {
  if (o.in.empty()) throw std::invalid_argument("--in is required");
  report::ReportOptions ropt;
  ropt.format = report::parse_format(o.format);
  ropt.bins = o.bins;
  ropt.classes_mod = o.classes_mod;
  const auto table = report::parse_table(o.table);

  if (table == report::TableKind::histogram) {
    const fs::path file = fs::path(o.in) / io::kResidueFileName;
    if (!fs::exists(file)) throw io::IncompleteInput("no " + file.string() + "; run stats first");
    const auto rows = io::parse_residues_csv(io::read_file(file));
    emit(report::render_histogram(rows, ropt), "");
    return 0;
  }
  const auto scan = io::load_scan(o.in, o.allow_partial);
  if (scan.manifest.params.kind == io::ScanKind::fixed_disc) ropt.p_bound = scan.manifest.params.pmax;
  emit(report::render_records(table, scan.records, ropt), "");
  return 0;
}

int cmd_survey(const Options& o) {
  if (o.in.empty()) throw std::invalid_argument("--in is required");
  const auto scan = io::load_scan(o.in, o.allow_partial);
  if (!scan.valuations_refined) throw std::invalid_argument("shards carry no valuations");
  const std::uint64_t p = o.mod != 0 ? o.mod : 3;
  emit(report::render_survey(scan.records, p, report::parse_format(o.format)), "");
  return 0;
}

// Residues of L(1-2m, chi_D) mod p for 2 <= 2m <= p-1 over primes not dividing D.
int cmd_stats(const Options& o) {
  const auto disc = require_disc(o.disc);
  std::vector<io::ResidueRow> rows;
  for (auto p : primes_from(o)) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not an odd prime");
    if (static_cast<std::uint64_t>(o.disc) % p == 0) continue;
    const LValueModSeries series(disc, p);
    for (unsigned two_m = 2; two_m <= p - 1; two_m += 2) {
      rows.push_back({o.disc, two_m, p, series.at_two_m(two_m)});
    }
  }
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    io::write_file_atomic(fs::path(o.out) / io::kResidueFileName, io::format_residues_csv(rows));
  }
  report::ReportOptions ropt;
  ropt.format = report::parse_format(o.format);
  emit(report::render_histogram(rows, ropt), "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Special values of real quadratic zeta functions and irregular primes"};
  app.require_subcommand(1);
  Options o;

  auto* lvalue = app.add_subcommand("lvalue", "L(1-2m, chi_D), exact or mod p");
  auto* zeta = app.add_subcommand("zeta", "zeta_D(1-2m) = zeta(1-2m) L(1-2m, chi_D)");
  for (auto* sub : {lvalue, zeta}) {
    sub->add_option("--disc", o.disc, "fundamental discriminant D > 1")->required();
    sub->add_option("--m", o.m, "m >= 1")->required();
    sub->add_option("--mod", o.mod, "reduce modulo this odd prime");
  }

  auto* index = app.add_subcommand("index", "chi-irregularity index records for one D");
  index->add_option("--disc", o.disc)->required();
  index->add_option("--mod", o.mod, "a single prime");
  index->add_option("--primes", o.primes)->delimiter(',');
  index->add_option("--pmax", o.pmax, "all odd primes below this bound");

  auto* scan = app.add_subcommand("scan", "checkpointed scan into CSV shards");
  scan->add_option("--kind", o.kind)->check(CLI::IsMember({"fixed-disc", "grid", "million"}));
  scan->add_option("--disc", o.disc);
  scan->add_option("--dmax", o.dmax);
  scan->add_option("--pmax", o.pmax);
  scan->add_option("--primes", o.primes)->delimiter(',');
  scan->add_option("--out", o.out, "output directory")->required();
  scan->add_option("--workers", o.workers)->check(CLI::Range(1u, 1024u));
  scan->add_flag("--resume", o.resume, "skip shards already complete");

  auto* report = app.add_subcommand("report", "render a table from scan shards");
  report->add_option("--in", o.in, "scan directory")->required();
  report->add_option("--table", o.table, "1, 2, 3, residues, ratios or histogram")->required();
  report->add_option("--format", o.format);
  report->add_option("--bins", o.bins)->check(CLI::Range(2u, 100000u));
  report->add_option("--classes-mod", o.classes_mod)->check(CLI::Range(3ull, 1000000ull));
  report->add_flag("--allow-partial", o.allow_partial);

  auto* survey = app.add_subcommand("survey", "valuation and index extremes");
  survey->add_option("--in", o.in, "scan directory")->required();
  survey->add_option("--mod", o.mod, "prime whose valuations are surveyed (default 3)");
  survey->add_option("--format", o.format);
  survey->add_flag("--allow-partial", o.allow_partial);

  auto* stats = app.add_subcommand("stats", "residues of L(1-2m, chi_D) mod p and their histogram");
  stats->add_option("--disc", o.disc)->required();
  stats->add_option("--mod", o.mod);
  stats->add_option("--primes", o.primes)->delimiter(',');
  stats->add_option("--pmax", o.pmax);
  stats->add_option("--out", o.out, "directory receiving residues.csv");
  stats->add_option("--format", o.format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*lvalue) return cmd_value(o, false);
    if (*zeta) return cmd_value(o, true);
    if (*index) return cmd_index(o);
    if (*scan) return cmd_scan(o);
    if (*report) return cmd_report(o);
    if (*survey) return cmd_survey(o);
    if (*stats) return cmd_stats(o);
  } catch (const io::IncompleteInput& e) {
    std::fprintf(stderr, "qzeta: incomplete input: %s\n", e.what());
    return kIncompleteInput;
  } catch (const io::FormatError& e) {
    std::fprintf(stderr, "qzeta: malformed input: %s\n", e.what());
    return kIncompleteInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "qzeta: %s\n", e.what());
    return kUsageError;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "qzeta: %s\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qzeta: %s\n", e.what());
    return 1;
  }
  return 0;
}
