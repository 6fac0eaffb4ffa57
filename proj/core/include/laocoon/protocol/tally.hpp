#pragma once

// The tallying script and the board-side audit checks. Both read nothing but
// board entries, so any observer can re-run them.

#include <cstdint>
#include <string>
#include <vector>

#include "laocoon/bulletin.hpp"
#include "laocoon/protocol/entities.hpp"
#include "laocoon/protocol/messages.hpp"

namespace laocoon::protocol {

struct TallyInputs {
  std::size_t published_secrets = 0;
  std::vector<std::string> invalid_secrets;  // names whose x_C does not match y_C
  std::vector<std::string> withheld;         // candidates with no published secret
};

// Recount from entries alone. Requires a tally-trigger entry; throws
// ProtocolError("tally", "ambiguous-transaction") if two keys open the same
// transaction. A secret that does not match its published key is ignored.
TallyReport compute_tally(const std::vector<bulletin::Entry>& entries, TallyInputs* inputs = nullptr);

// compute_tally over the board, then publishes the report in phase tally.
TallyReport run_tally(bulletin::BulletinBoard& board);

// Latest published tally-result, if any.
std::optional<TallyReport> published_tally(const std::vector<bulletin::Entry>& entries);

struct AuditSummary {
  std::uint64_t commitments = 0;  // transactions carrying a commitment
  std::uint64_t claims = 0;
  bool key_published = false;
};

AuditSummary summarize_audit(const std::vector<bulletin::Entry>& entries);

}  // namespace laocoon::protocol
