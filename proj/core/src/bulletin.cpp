#include "laocoon/bulletin.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace laocoon::bulletin {

namespace {

constexpr std::array<std::string_view, 6> kPhaseNames = {"setup", "dispatch", "cast", "open", "tally", "audit"};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
  throw BoardError(BoardError::Code::kMalformedFile, "line " + std::to_string(line) + ": " + why, line);
}

Entry parse_line(std::string_view line, std::size_t line_no) {
  auto fields = split(line, '\t');
  if (fields.size() != 6) malformed(line_no, "expected 6 tab-separated fields");
  Entry e;
  auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), e.seq);
  if (ec != std::errc() || ptr != fields[0].data() + fields[0].size()) malformed(line_no, "bad seq");
  auto phase = parse_phase(fields[1]);
  if (!phase) malformed(line_no, "unknown phase '" + std::string(fields[1]) + "'");
  e.phase = *phase;
  if (fields[2].empty()) malformed(line_no, "empty kind");
  e.kind = std::string(fields[2]);
  try {
    e.payload = from_hex(fields[3]);
    e.prev_hash = digest_from_hex(fields[4]);
    e.entry_hash = digest_from_hex(fields[5]);
  } catch (const DecodeError& err) {
    malformed(line_no, err.what());
  }
  return e;
}

}  // namespace

std::string_view to_string(Phase p) { return kPhaseNames.at(static_cast<std::size_t>(p)); }

std::optional<Phase> parse_phase(std::string_view s) {
  for (std::size_t i = 0; i < kPhaseNames.size(); ++i) {
    if (kPhaseNames[i] == s) return static_cast<Phase>(i);
  }
  return std::nullopt;
}

Digest genesis_hash() { return sha256(std::string_view("laocoon-bulletin-genesis-v1")); }

Digest compute_entry_hash(std::uint64_t seq, Phase phase, std::string_view kind, ByteView payload,
                          const Digest& prev_hash) {
  ByteWriter w;
  w.u64(seq).u8(static_cast<std::uint8_t>(phase)).str(kind).blob(payload).raw(prev_hash);
  return sha256(w.bytes());
}

ChainCheck verify_chain(const std::vector<Entry>& entries) {
  Digest prev = genesis_hash();
  std::optional<Phase> last_phase;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.seq != i) return ChainCheck::reject(i, "sequence number is not dense");
    if (e.prev_hash != prev) return ChainCheck::reject(i, "prev_hash does not match the previous entry");
    if (compute_entry_hash(e.seq, e.phase, e.kind, e.payload, e.prev_hash) != e.entry_hash) {
      return ChainCheck::reject(i, "entry_hash does not match the entry contents");
    }
    if (last_phase && e.phase < *last_phase) return ChainCheck::reject(i, "phase regression");
    last_phase = e.phase;
    prev = e.entry_hash;
  }
  return ChainCheck::accept();
}

std::vector<Entry> parse_entries(std::string_view text) {
  std::vector<Entry> out;
  if (text.empty()) return out;
  auto lines = split(text, '\n');
  if (lines.back().empty()) {
    lines.pop_back();
  } else {
    malformed(lines.size(), "truncated record (missing newline)");
  }
  if (lines.empty() || lines.front() != kFileHeader) malformed(1, "missing or unsupported header");
  for (std::size_t i = 1; i < lines.size(); ++i) out.push_back(parse_line(lines[i], i + 1));
  return out;
}

std::vector<Entry> read_entries(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BoardError(BoardError::Code::kIo, "cannot open board file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_entries(ss.str());
}

BulletinBoard::BulletinBoard(const BulletinBoard& o) {
  std::lock_guard lock(o.mu_);
  entries_ = o.entries_;
}

BulletinBoard& BulletinBoard::operator=(const BulletinBoard& o) {
  if (this != &o) {
    auto copy = o.snapshot();
    std::lock_guard lock(mu_);
    entries_ = std::move(copy);
  }
  return *this;
}

std::uint64_t BulletinBoard::append(Phase phase, std::string_view kind, ByteView payload) {
  if (kind.empty()) throw BoardError(BoardError::Code::kEmptyKind, "append: empty kind");
  if (payload.size() > kMaxPayload) {
    throw BoardError(BoardError::Code::kPayloadTooLarge,
                     "append: payload of " + std::to_string(payload.size()) + " bytes exceeds 1 MiB");
  }
  std::lock_guard lock(mu_);
  if (!entries_.empty() && phase < entries_.back().phase) {
    throw BoardError(BoardError::Code::kPhaseRegression,
                     "append: phase " + std::string(to_string(phase)) + " after " +
                         std::string(to_string(entries_.back().phase)));
  }
  Entry e;
  e.seq = entries_.size();
  e.phase = phase;
  e.kind = std::string(kind);
  e.payload.assign(payload.begin(), payload.end());
  e.prev_hash = entries_.empty() ? genesis_hash() : entries_.back().entry_hash;
  e.entry_hash = compute_entry_hash(e.seq, e.phase, e.kind, e.payload, e.prev_hash);
  entries_.push_back(std::move(e));
  return entries_.back().seq;
}

std::vector<Entry> BulletinBoard::query(std::optional<Phase> phase, std::optional<std::string_view> kind) const {
  std::lock_guard lock(mu_);
  std::vector<Entry> out;
  for (const auto& e : entries_) {
    if (phase && e.phase != *phase) continue;
    if (kind && e.kind != *kind) continue;
    out.push_back(e);
  }
  return out;
}

std::vector<Entry> BulletinBoard::snapshot() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::vector<Entry> BulletinBoard::since(std::uint64_t from_seq, std::optional<std::string_view> kind) const {
  std::lock_guard lock(mu_);
  std::vector<Entry> out;
  for (std::size_t i = from_seq; i < entries_.size(); ++i) {
    if (kind && entries_[i].kind != *kind) continue;
    out.push_back(entries_[i]);
  }
  return out;
}

std::size_t BulletinBoard::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

Digest BulletinBoard::head_hash() const {
  std::lock_guard lock(mu_);
  return entries_.empty() ? genesis_hash() : entries_.back().entry_hash;
}

std::optional<Phase> BulletinBoard::current_phase() const {
  std::lock_guard lock(mu_);
  if (entries_.empty()) return std::nullopt;
  return entries_.back().phase;
}

ChainCheck BulletinBoard::verify() const { return verify_chain(snapshot()); }

std::string BulletinBoard::serialize() const {
  std::lock_guard lock(mu_);
  std::string out(kFileHeader);
  out.push_back('\n');
  for (const auto& e : entries_) {
    out += std::to_string(e.seq);
    out.push_back('\t');
    out += to_string(e.phase);
    out.push_back('\t');
    out += e.kind;
    out.push_back('\t');
    out += to_hex(e.payload);
    out.push_back('\t');
    out += to_hex(e.prev_hash);
    out.push_back('\t');
    out += to_hex(e.entry_hash);
    out.push_back('\n');
  }
  return out;
}

void BulletinBoard::persist(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw BoardError(BoardError::Code::kIo, "cannot write board file " + path.string());
  out << serialize();
  if (!out) throw BoardError(BoardError::Code::kIo, "write failed for " + path.string());
}

BulletinBoard BulletinBoard::parse(std::string_view text) {
  auto entries = parse_entries(text);
  auto check = verify_chain(entries);
  if (!check.ok) {
    // Entry seq n sits on line n + 2 (line 1 is the header).
    auto line = static_cast<std::size_t>(check.first_bad_seq) + 2;
    throw BoardError(BoardError::Code::kChainInvalid,
                     "line " + std::to_string(line) + ": chain check failed at seq " +
                         std::to_string(check.first_bad_seq) + ": " + check.reason,
                     line);
  }
  BulletinBoard b;
  b.entries_ = std::move(entries);
  return b;
}

BulletinBoard BulletinBoard::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BoardError(BoardError::Code::kIo, "cannot open board file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace laocoon::bulletin
