#pragma once

// Renderers for the scan reports in text, CSV and JSON.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "qzeta/irregularity.hpp"
#include "qzeta/scan_io.hpp"

namespace qzeta::report {

enum class Format { text, csv, json };
enum class TableKind { table1, table2, table3, residues, ratios, histogram };

/// Both throw std::invalid_argument on an unknown name.
Format parse_format(std::string_view name);
TableKind parse_table(std::string_view name);

/// Fixed-point text, rounded half-to-even on exact ties.
std::string fixed(double value, int digits);
/// Like fixed(), without the leading zero of values in (-1, 1): ".606531".
std::string bare_fraction(double value, int digits);

struct ReportOptions {
  Format format = Format::text;
  unsigned bins = 10;
  std::uint64_t classes_mod = 4;
  /// Exclusive prime bound of a fixed-discriminant scan; 0 means one past the
  /// largest prime present. Sets the cutoffs of the table1 series.
  std::uint64_t p_bound = 0;
};

/// table1 (one discriminant, limit prediction, series at x = 1000, 2000, ...),
/// table2 (limit prediction, totals and per-discriminant averages),
/// table3 (exact small-p prediction, categories 0..2), residues (irregular
/// primes by class mod classes_mod), ratios (2m/p uniformity).
/// Throws std::invalid_argument when the records do not suit the table.
std::string render_records(TableKind table, std::span<const IndexRecord> records,
                           const ReportOptions& options);

/// Residue histograms, one per prime present.
std::string render_histogram(std::span<const io::ResidueRow> rows, const ReportOptions& options);

/// Largest valuation at p among recorded hits with its (D, 2m) list, and the
/// largest index with its multiplicity.
std::string render_survey(std::span<const IndexRecord> records, std::uint64_t p, Format format);

}  // namespace qzeta::report
