#include "laocoon/protocol/tally.hpp"

#include <algorithm>
#include <string>

namespace laocoon::protocol {

using bulletin::Entry;
using bulletin::Phase;
namespace kind = bulletin::kind;

TallyReport compute_tally(const std::vector<Entry>& entries, TallyInputs* inputs) {
  auto setup = PublicSetup::from_entries(entries);
  const auto& ctx = setup.ctx;

  bool triggered = std::any_of(entries.begin(), entries.end(),
                               [](const Entry& e) { return e.kind == kind::kTallyTrigger; });
  if (!triggered) throw ProtocolError("tally", "tally-not-triggered");

  TallyInputs local;
  std::vector<std::pair<std::size_t, Scalar>> keys;  // candidate position, x_C
  std::vector<bool> have(setup.candidates.size(), false);
  for (const auto& e : entries) {
    if (e.kind != kind::kCandidateSecret) continue;
    CandidateSecretRecord rec;
    try {
      rec = CandidateSecretRecord::decode(e.payload);
    } catch (const DecodeError&) {
      continue;
    }
    auto it = std::find_if(setup.candidates.begin(), setup.candidates.end(),
                           [&](const CandidateKeyRecord& c) { return c.name == rec.name; });
    if (it == setup.candidates.end()) continue;
    auto pos = static_cast<std::size_t>(it - setup.candidates.begin());
    if (have[pos]) continue;
    if (G1Point::generator().pow(rec.sk2) != it->pk.pk2) {
      local.invalid_secrets.push_back(rec.name);
      continue;
    }
    have[pos] = true;
    keys.emplace_back(pos, rec.sk2);
  }
  local.published_secrets = keys.size();
  for (std::size_t i = 0; i < have.size(); ++i) {
    if (!have[i]) local.withheld.push_back(setup.candidates[i].name);
  }

  TallyReport report;
  std::vector<std::uint64_t> counts(setup.candidates.size(), 0);
  for (const auto& e : entries) {
    if (e.kind == kind::kRejectionSummary) {
      report.rejected = RejectionSummary::decode(e.payload).counts;
      continue;
    }
    if (e.kind != kind::kTransaction) continue;
    ++report.transactions;
    VotingTransaction tx;
    try {
      tx = VotingTransaction::decode(e.payload);
    } catch (const DecodeError&) {
      ++report.unopened;
      continue;
    }
    auto expected = ctx.encode_timestamp(tx.stp);
    std::optional<std::size_t> owner;
    for (const auto& [pos, sk2] : keys) {
      if (pre::dec1(sk2, tx.delta) != expected) continue;
      if (owner) throw ProtocolError("tally", "ambiguous-transaction", "seq " + std::to_string(e.seq));
      owner = pos;
    }
    if (owner) {
      ++counts[*owner];
      ++report.total_valid;
    } else {
      ++report.unopened;
    }
  }
  for (std::size_t i = 0; i < counts.size(); ++i) report.counts.emplace_back(setup.candidates[i].name, counts[i]);
  if (inputs != nullptr) *inputs = std::move(local);
  return report;
}

TallyReport run_tally(bulletin::BulletinBoard& board) {
  auto report = compute_tally(board.snapshot());
  board.append(Phase::kTally, kind::kTallyResult, as_bytes(report.to_json()));
  return report;
}

std::optional<TallyReport> published_tally(const std::vector<Entry>& entries) {
  std::optional<TallyReport> out;
  for (const auto& e : entries) {
    if (e.kind != kind::kTallyResult) continue;
    out = TallyReport::from_json(std::string(e.payload.begin(), e.payload.end()));
  }
  return out;
}

AuditSummary summarize_audit(const std::vector<Entry>& entries) {
  AuditSummary s;
  for (const auto& e : entries) {
    if (e.kind == kind::kCommitKey) {
      s.key_published = true;
    } else if (e.kind == kind::kClaim) {
      ++s.claims;
    } else if (e.kind == kind::kTransaction) {
      try {
        if (VotingTransaction::decode(e.payload).commitment) ++s.commitments;
      } catch (const DecodeError&) {
      }
    }
  }
  return s;
}

}  // namespace laocoon::protocol
