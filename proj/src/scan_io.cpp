#include "qzeta/scan_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

namespace qzeta::io {

namespace fs = std::filesystem;

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

template <class T>
T parse_number(std::string_view s, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("bad " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

std::string join_primes(const std::vector<std::uint64_t>& primes) {
  std::string out;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(primes[i]);
  }
  return out;
}

std::int64_t block_size(ScanKind kind) { return kind == ScanKind::million ? 10000 : 1000; }

}  // namespace

std::string format_record(const IndexRecord& rec) {
  std::string out = std::to_string(rec.disc) + ',' + std::to_string(rec.p) + ',' +
                    std::to_string(rec.delta) + ',' + std::to_string(rec.index()) + ',';
  for (std::size_t i = 0; i < rec.hits.size(); ++i) {
    if (i) out += ';';
    const auto& hit = rec.hits[i];
    out += std::to_string(hit.two_m) + ':' +
           (hit.valuation.is_infinite() ? std::string("inf") : std::to_string(hit.valuation.value()));
  }
  return out;
}

std::string format_records_csv(std::span<const IndexRecord> records) {
  std::string out(kRecordHeader);
  out += '\n';
  for (const auto& rec : records) {
    out += format_record(rec);
    out += '\n';
  }
  return out;
}

ParsedRecords parse_records_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != kRecordHeader) {
    throw FormatError("index-record CSV must start with header " + std::string(kRecordHeader));
  }
  ParsedRecords parsed;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != 5) throw FormatError("expected 5 fields: " + std::string(lines[i]));
    IndexRecord rec{parse_number<std::int64_t>(fields[0], "D"),
                    parse_number<std::uint64_t>(fields[1], "p"),
                    parse_number<unsigned>(fields[2], "delta"), IndexKind::chi, {}};
    const auto index = parse_number<std::size_t>(fields[3], "index");
    if (!fields[4].empty()) {
      for (auto token : split(fields[4], ';')) {
        const auto colon = token.find(':');
        Hit hit{parse_number<unsigned>(token.substr(0, colon), "two_m"), PValuation(0)};
        if (colon == std::string_view::npos) {
          parsed.valuations_refined = false;
        } else if (token.substr(colon + 1) == "inf") {
          hit.valuation = PValuation::infinity();
        } else {
          hit.valuation = PValuation(parse_number<int>(token.substr(colon + 1), "valuation"));
        }
        rec.hits.push_back(hit);
      }
    }
    if (rec.index() != index) throw FormatError("index disagrees with hits: " + std::string(lines[i]));
    parsed.records.push_back(std::move(rec));
  }
  return parsed;
}

std::string format_pairs_csv(std::span<const IrregularPair> pairs) {
  std::string out(kPairHeader);
  out += '\n';
  for (const auto& pair : pairs) {
    out += std::to_string(pair.p) + ',' + std::to_string(pair.two_m) + ',' +
           std::to_string(pair.disc) + ',' + std::to_string(pair.valuation) + '\n';
  }
  return out;
}

std::string format_residues_csv(std::span<const ResidueRow> rows) {
  std::string out(kResidueHeader);
  out += '\n';
  for (const auto& row : rows) {
    out += std::to_string(row.disc) + ',' + std::to_string(row.two_m) + ',' +
           std::to_string(row.p) + ',' + std::to_string(row.residue) + '\n';
  }
  return out;
}

std::vector<ResidueRow> parse_residues_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != kResidueHeader) {
    throw FormatError("residue CSV must start with header " + std::string(kResidueHeader));
  }
  std::vector<ResidueRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 4) throw FormatError("expected 4 fields: " + std::string(lines[i]));
    rows.push_back({parse_number<std::int64_t>(f[0], "D"), parse_number<unsigned>(f[1], "two_m"),
                    parse_number<std::uint64_t>(f[2], "p"),
                    parse_number<std::uint64_t>(f[3], "residue")});
  }
  return rows;
}

std::string_view to_string(ScanKind kind) {
  switch (kind) {
    case ScanKind::fixed_disc: return "fixed-disc";
    case ScanKind::grid: return "grid";
    case ScanKind::million: return "million";
  }
  return "?";
}

ScanKind parse_scan_kind(std::string_view name) {
  if (name == "fixed-disc") return ScanKind::fixed_disc;
  if (name == "grid") return ScanKind::grid;
  if (name == "million") return ScanKind::million;
  throw std::invalid_argument("unknown scan kind '" + std::string(name) + "'");
}

void ScanParameters::validate() {
  switch (kind) {
    case ScanKind::fixed_disc:
      if (!is_fundamental_discriminant(disc)) {
        throw std::invalid_argument("--disc must be a positive fundamental discriminant");
      }
      if (pmax < 4) throw std::invalid_argument("--pmax must exceed 3");
      dmin = dmax = 0;
      primes.clear();
      break;
    case ScanKind::grid:
      if (primes.empty()) {
        if (pmax < 4) throw std::invalid_argument("grid scan needs --pmax > 3 or --primes");
        primes = odd_primes_below(pmax);
      }
      pmax = 0;
      disc = 0;
      break;
    case ScanKind::million:
      if (primes.empty()) primes = {3, 5};
      for (auto p : primes) {
        if (p != 3 && p != 5) throw std::invalid_argument("million scan supports only p = 3, 5");
      }
      pmax = 0;
      disc = 0;
      break;
  }
  if (kind != ScanKind::fixed_disc) {
    if (dmax <= dmin) throw std::invalid_argument("--dmax must exceed the lower D bound");
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (auto p : primes) {
      if (p < 3 || !is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not an odd prime");
    }
  }
}

std::vector<std::uint64_t> ScanParameters::scan_primes() const { return primes; }

bool ScanManifest::complete() const {
  return std::all_of(shards.begin(), shards.end(), [](const ShardEntry& s) { return s.complete; });
}

std::string format_manifest(const ScanManifest& m) {
  std::ostringstream out;
  const auto& p = m.params;
  out << "format=qzeta-scan/1\n"
      << "kind=" << to_string(p.kind) << '\n'
      << "disc=" << p.disc << '\n'
      << "dmin=" << p.dmin << '\n'
      << "dmax=" << p.dmax << '\n'
      << "pmax=" << p.pmax << '\n'
      << "primes=" << join_primes(p.primes) << '\n'
      << "mode=" << (p.kind == ScanKind::million ? "table3" : "full") << '\n'
      << "shard_count=" << m.shards.size() << '\n';
  for (const auto& s : m.shards) {
    out << "shard=" << s.id << " lo=" << s.lo << " hi=" << s.hi << " file=" << s.file
        << " rows=" << s.rows << " digest=" << (s.digest.empty() ? "-" : s.digest)
        << " complete=" << (s.complete ? 1 : 0) << '\n';
  }
  return out.str();
}

ScanManifest parse_manifest(std::string_view text) {
  ScanManifest m;
  std::map<std::string, std::string> keys;
  std::size_t declared = 0;
  for (auto line : lines_of(text)) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError("manifest line without '=': " + std::string(line));
    const auto key = line.substr(0, eq);
    if (key != "shard") {
      keys[std::string(key)] = std::string(line.substr(eq + 1));
      continue;
    }
    ShardEntry s;
    for (auto field : split(line, ' ')) {
      const auto feq = field.find('=');
      if (feq == std::string_view::npos) throw FormatError("bad shard field: " + std::string(field));
      const auto k = field.substr(0, feq);
      const auto v = field.substr(feq + 1);
      if (k == "shard") s.id = parse_number<std::size_t>(v, "shard id");
      else if (k == "lo") s.lo = parse_number<std::int64_t>(v, "lo");
      else if (k == "hi") s.hi = parse_number<std::int64_t>(v, "hi");
      else if (k == "file") s.file = std::string(v);
      else if (k == "rows") s.rows = parse_number<std::size_t>(v, "rows");
      else if (k == "digest") s.digest = v == "-" ? std::string() : std::string(v);
      else if (k == "complete") s.complete = v == "1";
      else throw FormatError("unknown shard field: " + std::string(k));
    }
    m.shards.push_back(std::move(s));
  }
  if (keys["format"] != "qzeta-scan/1") throw FormatError("unsupported manifest format");
  try {
    m.params.kind = parse_scan_kind(keys["kind"]);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  m.params.disc = parse_number<std::int64_t>(keys["disc"], "disc");
  m.params.dmin = parse_number<std::int64_t>(keys["dmin"], "dmin");
  m.params.dmax = parse_number<std::int64_t>(keys["dmax"], "dmax");
  m.params.pmax = parse_number<std::uint64_t>(keys["pmax"], "pmax");
  if (!keys["primes"].empty()) {
    for (auto p : split(keys["primes"], ',')) m.params.primes.push_back(parse_number<std::uint64_t>(p, "prime"));
  }
  declared = parse_number<std::size_t>(keys["shard_count"], "shard_count");
  if (declared != m.shards.size()) throw FormatError("manifest shard count mismatch");
  return m;
}

std::vector<ShardEntry> plan_shards(const ScanParameters& params) {
  const std::int64_t block = block_size(params.kind);
  std::int64_t lo, hi;
  if (params.kind == ScanKind::fixed_disc) {
    lo = 3;
    hi = static_cast<std::int64_t>(params.pmax);
  } else {
    lo = params.dmin;
    hi = params.dmax;
  }
  std::vector<ShardEntry> shards;
  while (lo < hi) {
    const std::int64_t next = std::min(hi, (lo / block + 1) * block);
    ShardEntry s;
    s.id = shards.size();
    s.lo = lo;
    s.hi = next;
    char name[32];
    std::snprintf(name, sizeof name, "shard-%05zu.csv", s.id);
    s.file = name;
    shards.push_back(std::move(s));
    lo = next;
  }
  return shards;
}

std::string content_digest(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<IndexRecord> compute_shard(const ScanParameters& params, const ShardEntry& shard,
                                       unsigned workers, const SiegelTables* tables) {
  switch (params.kind) {
    case ScanKind::fixed_disc:
      return scan_fixed_disc_range(FundamentalDiscriminant(params.disc),
                                   static_cast<std::uint64_t>(shard.lo),
                                   static_cast<std::uint64_t>(shard.hi), workers);
    case ScanKind::grid:
      return scan_fixed_primes(shard.lo, shard.hi, params.primes, ScanMode::full, workers);
    case ScanKind::million:
      return scan_fixed_primes(shard.lo, shard.hi, params.primes, ScanMode::table3, workers, tables);
  }
  return {};
}

ScanSummary run_scan(ScanParameters params, const fs::path& out_dir, unsigned workers,
                     bool resume, const std::function<void(const ShardEntry&)>& on_shard) {
  params.validate();
  fs::create_directories(out_dir);
  const fs::path manifest_path = out_dir / kManifestName;

  ScanSummary summary;
  summary.manifest.params = params;
  summary.manifest.shards = plan_shards(params);

  if (resume && fs::exists(manifest_path)) {
    const auto previous = parse_manifest(read_file(manifest_path));
    if (!(previous.params == params)) {
      throw std::invalid_argument("existing scan in " + out_dir.string() +
                                  " was run with different parameters");
    }
    for (auto& shard : summary.manifest.shards) {
      for (const auto& old : previous.shards) {
        if (old.id != shard.id || old.lo != shard.lo || old.hi != shard.hi || !old.complete) continue;
        const fs::path file = out_dir / old.file;
        if (fs::exists(file) && content_digest(read_file(file)) == old.digest) shard = old;
      }
    }
  }

  std::optional<SiegelTables> tables;
  if (params.kind == ScanKind::million) tables = make_siegel_tables(params.dmax);

  for (auto& shard : summary.manifest.shards) {
    if (shard.complete) {
      ++summary.skipped;
      summary.rows += shard.rows;
      continue;
    }
    const auto records = compute_shard(params, shard, workers, tables ? &*tables : nullptr);
    const auto csv = format_records_csv(records);
    write_file_atomic(out_dir / shard.file, csv);
    shard.rows = records.size();
    shard.digest = content_digest(csv);
    shard.complete = true;
    write_file_atomic(manifest_path, format_manifest(summary.manifest));
    ++summary.computed;
    summary.rows += shard.rows;
    if (on_shard) on_shard(shard);
  }
  // Also covers the all-skipped and zero-shard cases.
  write_file_atomic(manifest_path, format_manifest(summary.manifest));
  return summary;
}

LoadedScan load_scan(const fs::path& dir, bool allow_partial) {
  const fs::path manifest_path = dir / kManifestName;
  if (!fs::exists(manifest_path)) throw IncompleteInput("no manifest in " + dir.string());
  LoadedScan loaded;
  loaded.manifest = parse_manifest(read_file(manifest_path));
  for (const auto& shard : loaded.manifest.shards) {
    const fs::path file = dir / shard.file;
    std::string problem;
    std::string contents;
    if (!shard.complete) {
      problem = "shard " + shard.file + " is not complete";
    } else if (!fs::exists(file)) {
      problem = "shard " + shard.file + " is missing";
    } else {
      contents = read_file(file);
      if (content_digest(contents) != shard.digest) problem = "shard " + shard.file + " fails its digest";
    }
    if (!problem.empty()) {
      if (allow_partial) continue;
      throw IncompleteInput(problem);
    }
    auto parsed = parse_records_csv(contents);
    loaded.valuations_refined = loaded.valuations_refined && parsed.valuations_refined;
    for (auto& rec : parsed.records) loaded.records.push_back(std::move(rec));
  }
  std::stable_sort(loaded.records.begin(), loaded.records.end(),
                   [](const IndexRecord& a, const IndexRecord& b) {
                     return std::tie(a.disc, a.p) < std::tie(b.disc, b.p);
                   });
  return loaded;
}

}  // namespace qzeta::io
