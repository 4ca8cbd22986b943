#pragma once

// Persistent scan results: CSV shards, the plain-text manifest that tracks
// them, and the checkpointed scan driver.
//
// Index-record CSV:   D,p,delta,index,hits   hits = "2m:v;2m:v;..." (empty when index 0)
// Irregular pairs:    p,two_m,D,valuation
// Residue values:     D,two_m,p,residue

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qzeta/irregularity.hpp"

namespace qzeta::io {

inline constexpr std::string_view kRecordHeader = "D,p,delta,index,hits";
inline constexpr std::string_view kPairHeader = "p,two_m,D,valuation";
inline constexpr std::string_view kResidueHeader = "D,two_m,p,residue";
inline constexpr std::string_view kManifestName = "manifest.txt";
inline constexpr std::string_view kResidueFileName = "residues.csv";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input exists but is not a complete scan.
class IncompleteInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_record(const IndexRecord& rec);
std::string format_records_csv(std::span<const IndexRecord> records);

struct ParsedRecords {
  std::vector<IndexRecord> records;
  bool valuations_refined = true;  // false if some hit lacks ":v"
};
/// Throws FormatError on a wrong header or malformed row.
ParsedRecords parse_records_csv(std::string_view text);

std::string format_pairs_csv(std::span<const IrregularPair> pairs);

struct ResidueRow {
  std::int64_t disc;
  unsigned two_m;
  std::uint64_t p;
  std::uint64_t residue;
};
std::string format_residues_csv(std::span<const ResidueRow> rows);
std::vector<ResidueRow> parse_residues_csv(std::string_view text);

enum class ScanKind { fixed_disc, grid, million };

std::string_view to_string(ScanKind kind);
ScanKind parse_scan_kind(std::string_view name);

struct ScanParameters {
  ScanKind kind = ScanKind::fixed_disc;
  std::int64_t disc = 0;   // fixed_disc
  std::int64_t dmin = 2;   // grid, million
  std::int64_t dmax = 0;   // grid, million: D < dmax
  std::uint64_t pmax = 0;  // fixed_disc, grid: p < pmax
  std::vector<std::uint64_t> primes;  // grid (overrides pmax), million

  /// Fills defaults and throws std::invalid_argument on inconsistent input.
  void validate();
  /// Primes a grid or million scan evaluates.
  std::vector<std::uint64_t> scan_primes() const;

  friend bool operator==(const ScanParameters&, const ScanParameters&) = default;
};

struct ShardEntry {
  std::size_t id = 0;
  std::int64_t lo = 0;  // D range, or p range for fixed_disc
  std::int64_t hi = 0;
  std::string file;
  std::size_t rows = 0;
  std::string digest;
  bool complete = false;
};

struct ScanManifest {
  ScanParameters params;
  std::vector<ShardEntry> shards;

  bool complete() const;
};

std::string format_manifest(const ScanManifest& manifest);
ScanManifest parse_manifest(std::string_view text);

/// Shard layout: 10^3 primes per shard (fixed_disc), 10^3 discriminants
/// (grid), 10^4 discriminants (million); boundaries on multiples of the
/// block size.
std::vector<ShardEntry> plan_shards(const ScanParameters& params);

/// 64-bit FNV-1a, rendered "fnv1a64:<16 hex digits>".
std::string content_digest(std::string_view data);

std::string read_file(const std::filesystem::path& path);
/// Writes via a temporary sibling and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Records of one shard; deterministic for any worker count.
std::vector<IndexRecord> compute_shard(const ScanParameters& params, const ShardEntry& shard,
                                       unsigned workers, const SiegelTables* tables);

struct ScanSummary {
  ScanManifest manifest;
  std::size_t computed = 0;
  std::size_t skipped = 0;
  std::size_t rows = 0;
};

/// Runs (or with `resume`, continues) a scan into out_dir. A resumed shard is
/// skipped when the manifest marks it complete and its file digest matches.
/// Throws std::invalid_argument when resuming a scan with other parameters.
ScanSummary run_scan(ScanParameters params, const std::filesystem::path& out_dir,
                     unsigned workers, bool resume,
                     const std::function<void(const ShardEntry&)>& on_shard = {});

struct LoadedScan {
  ScanManifest manifest;
  std::vector<IndexRecord> records;  // sorted by (D, p)
  bool valuations_refined = true;
};

/// Reads every shard listed in dir's manifest. Throws IncompleteInput when a
/// shard is missing, unfinished or corrupt, unless allow_partial (then such
/// shards are skipped).
LoadedScan load_scan(const std::filesystem::path& dir, bool allow_partial);

}  // namespace qzeta::io
