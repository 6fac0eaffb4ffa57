#include "laocoon/protocol/entities.hpp"

#include <algorithm>
#include <numeric>

namespace laocoon::protocol {

using bulletin::BulletinBoard;
using bulletin::Phase;
namespace kind = bulletin::kind;

namespace {

std::string format_error(const std::string& step, const std::string& code, const std::string& detail) {
  std::string out = step + ": " + code;
  if (!detail.empty()) out += ": " + detail;
  return out;
}

}  // namespace

ProtocolError::ProtocolError(std::string step, std::string code, const std::string& detail)
    : std::runtime_error(format_error(step, code, detail)), step_(std::move(step)), code_(std::move(code)) {}

// ---- public setup --------------------------------------------------------

const CandidateKeyRecord* PublicSetup::candidate(std::string_view name) const {
  for (const auto& c : candidates) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

PublicSetup PublicSetup::read(const BulletinBoard& board) { return from_entries(board.query(Phase::kSetup)); }

PublicSetup PublicSetup::from_entries(const std::vector<bulletin::Entry>& entries) {
  PublicSetup s;
  bool have_params = false, have_cert = false, have_roll = false;
  try {
    for (const auto& e : entries) {
      if (e.phase != Phase::kSetup) continue;
      if (e.kind == kind::kParams) {
        s.ctx = GroupContext::decode(e.payload);
        have_params = true;
      } else if (e.kind == kind::kHashSpec) {
        if (std::string(e.payload.begin(), e.payload.end()) != kHashSpec) {
          throw ProtocolError("S1", "unsupported-hash");
        }
      } else if (e.kind == kind::kAdminCert) {
        s.admin = AdminCert::decode(e.payload);
        have_cert = true;
      } else if (e.kind == kind::kVoterRoll) {
        s.roll = VoterRoll::decode(e.payload);
        have_roll = true;
      } else if (e.kind == kind::kRekeyList) {
        auto rec = RekeyRecord::decode(e.payload);
        s.rekeys[rec.voter_index] = rec.rk;
      } else if (e.kind == kind::kCandidateKey) {
        auto rec = CandidateKeyRecord::decode(e.payload);
        if (s.candidate(rec.name) != nullptr) throw ProtocolError("S2", "duplicate-candidate", rec.name);
        s.candidates.push_back(std::move(rec));
      }
    }
  } catch (const DecodeError& e) {
    throw ProtocolError("S1", "malformed-setup-entry", e.what());
  }
  if (!have_params || !have_cert || !have_roll) throw ProtocolError("S1", "incomplete-setup");
  if (!s.admin.verify(s.ctx)) throw ProtocolError("S1", "invalid-admin-certificate");
  return s;
}

bool verify_credential(const PublicSetup& setup, const Credential& credential) {
  mdvs::Ring expected;
  try {
    expected = credential_ring(setup.admin.dv, setup.roll, credential.verifier_indices);
  } catch (const DecodeError&) {
    return false;
  }
  if (credential.sig.ring.size() != expected.size() ||
      !std::equal(expected.begin(), expected.end(), credential.sig.ring.begin())) {
    return false;
  }
  return mdvs::verify(setup.ctx, credential.sig, credential.pk.encode());
}

BallotMessage make_ballot(const PublicSetup& setup, const pre::KeyPair& sk, ByteView credential_bytes,
                          std::string_view candidate, RandomSource& rng) {
  const auto* c = setup.candidate(candidate);
  if (c == nullptr) throw ProtocolError("B3", "unknown-candidate", std::string(candidate));
  BallotMessage bm;
  bm.ballot = pre::rekeygen(setup.ctx, sk, c->pk, rng);
  bm.cred_hash = sha256(credential_bytes);
  return bm;
}

// ---- administrator -------------------------------------------------------

Administrator::Administrator(GroupContext ctx, std::unique_ptr<RandomSource> rng)
    : ctx_(std::move(ctx)),
      rng_(std::move(rng)),
      enc_(pre::keygen(ctx_, *rng_)),
      dv_(mdvs::DvKeyPair::generate(ctx_, *rng_)) {}

void Administrator::setup(BulletinBoard& board, const ElectionConfig& cfg, const VoterRoll& roll) {
  if (!board.empty()) throw ProtocolError("S1", "duplicate-setup");
  cfg.validate();
  if (roll.voters.size() != cfg.num_voters) throw ProtocolError("S1", "voter-roll-size-mismatch");
  cfg_ = cfg;
  roll_ = roll;

  AdminCert cert{enc_.pub, dv_.y, mdvs::certify(ctx_, dv_, AdminCert::signed_message(ctx_, enc_.pub, dv_.y), *rng_)};
  board.append(Phase::kSetup, kind::kParams, ctx_.encode());
  board.append(Phase::kSetup, kind::kHashSpec, as_bytes(kHashSpec));
  board.append(Phase::kSetup, kind::kAdminCert, cert.encode());
  board.append(Phase::kSetup, kind::kVoterRoll, roll.encode());
  for (std::uint32_t j = 0; j < roll.voters.size(); ++j) {
    RekeyRecord rec{j, pre::rekeygen(ctx_, enc_, roll.voters[j].enc, *rng_)};
    board.append(Phase::kSetup, kind::kRekeyList, rec.encode());
  }
}

void Administrator::open_phase(BulletinBoard& board, Phase phase) {
  board.append(phase, kind::kPhaseOpen, encode_phase_marker(phase));
}

void Administrator::trigger_tally(BulletinBoard& board) {
  board.append(Phase::kOpen, kind::kTallyTrigger, as_bytes(cfg_.tally_date));
}

Administrator::Issued Administrator::issue_credential() {
  auto pseudonym = pre::keygen(ctx_, *rng_);  // C1

  std::vector<std::uint32_t> verifiers(roll_.voters.size());
  std::iota(verifiers.begin(), verifiers.end(), 0u);
  if (cfg_.ring_cap != 0 && cfg_.ring_cap < verifiers.size()) {
    rng_->shuffle(std::span(verifiers));
    verifiers.resize(cfg_.ring_cap);
    std::sort(verifiers.begin(), verifiers.end());
  }
  Credential cred;
  cred.pk = pseudonym.pub;
  cred.verifier_indices = verifiers;
  cred.sig = mdvs::sign(ctx_, dv_.x, credential_ring(dv_.y, roll_, verifiers), cred.pk.encode(), *rng_);  // C2

  CredentialBundle bundle{pseudonym.encode_secret(), cred.encode()};
  Issued out;
  out.serial = next_serial_++;
  out.envelope = envelope::hybrid_enc(ctx_, enc_.pub, bundle.encode(), *rng_);  // C3
  live_.emplace(out.serial, std::move(bundle.credential));
  return out;
}

void Administrator::discard(std::uint64_t serial) { live_.erase(serial); }

envelope::HybridCiphertext Administrator::seal_credential_list(const pre::PublicKey& proxy) const {
  std::vector<Bytes> list;
  list.reserve(live_.size());
  for (const auto& [_, c] : live_) list.push_back(c);
  return envelope::hybrid_enc(ctx_, proxy, encode_credential_list(list), *rng_);
}

// ---- credential table ----------------------------------------------------

void CredentialTable::insert(const Digest& hash, CredentialRow row) { rows_.insert_or_assign(hash, std::move(row)); }

const CredentialRow* CredentialTable::find(const Digest& hash) const {
  auto it = rows_.find(hash);
  return it == rows_.end() ? nullptr : &it->second;
}

void CredentialTable::mark_used(const Digest& hash) {
  auto it = rows_.find(hash);
  if (it == rows_.end()) throw std::logic_error("mark_used: unknown credential");
  if (it->second.used) throw std::logic_error("mark_used: credential already used");
  it->second.used = true;
}

std::size_t CredentialTable::used_count() const {
  return static_cast<std::size_t>(
      std::count_if(rows_.begin(), rows_.end(), [](const auto& kv) { return kv.second.used; }));
}

// ---- proxy ---------------------------------------------------------------

Proxy::Proxy(GroupContext ctx, std::unique_ptr<RandomSource> rng, bool audit_enabled)
    : ctx_(std::move(ctx)), rng_(std::move(rng)), enc_(pre::keygen(ctx_, *rng_)) {
  if (audit_enabled) commit_key_ = envelope::random_commit_key(*rng_);
}

void Proxy::load_setup(const PublicSetup& setup, const ElectionConfig& cfg) {
  rekeys_ = setup.rekeys;
  unused_.clear();
  for (std::uint32_t j = 0; j < setup.roll.voters.size(); ++j) {
    if (!rekeys_.contains(j)) throw ProtocolError("C5", "missing-rekey", "voter " + std::to_string(j));
    for (std::uint32_t k = 0; k < cfg.credentials_per_voter; ++k) unused_.push_back(j);
  }
}

Expected<Proxy::Delivery, Proxy::DispatchFailure> Proxy::forward_credential(const envelope::HybridCiphertext& c) {
  if (unused_.empty()) throw ProtocolError("C5", "exhausted-index");
  // C5: draw an unused index uniformly; C6: re-encrypt under rk_{A->V_j}.
  auto pick = rng_->uniform_index(unused_.size());
  auto j = unused_[pick];
  auto out = envelope::hybrid_reenc(ctx_, rekeys_.at(j), c, *rng_);
  if (!out) return DispatchFailure::kReencReject;
  unused_[pick] = unused_.back();
  unused_.pop_back();
  assignments_.push_back(j);
  return Delivery{j, std::move(*out)};  // C7
}

void Proxy::load_credential_table(const envelope::HybridCiphertext& sealed) {
  auto plain = envelope::hybrid_dec(ctx_, enc_, sealed);
  if (!plain) throw ProtocolError("C7", "credential-list-undecryptable", std::string(to_string(plain.error())));
  try {
    for (auto& bytes : decode_credential_list(*plain)) {
      // PK_i is the leading field of sigma_i; the table is keyed by H(sigma_i).
      auto pk = pre::PublicKey::decode(ByteView(bytes).first(std::min(bytes.size(), pre::PublicKey::kEncodedSize)));
      if (!pk) throw DecodeError("credential without a valid pseudonym key");
      auto h = sha256(bytes);
      table_.insert(h, CredentialRow{std::move(bytes), *pk, false});
    }
  } catch (const DecodeError& e) {
    throw ProtocolError("C7", "malformed-credential-list", e.what());
  }
}

Expected<std::uint64_t, RejectReason> Proxy::process_ballot(BulletinBoard& board, ByteView ballot_payload,
                                                            LogicalClock& clock) {
  auto reject = [&](const Digest& h, RejectReason r) -> Expected<std::uint64_t, RejectReason> {
    rejections_.push_back({h, r});
    return r;
  };

  BallotMessage bm;
  try {
    bm = BallotMessage::decode(ballot_payload);
  } catch (const DecodeError&) {
    Digest h{};
    if (ballot_payload.size() >= 32) std::copy_n(ballot_payload.end() - 32, 32, h.begin());
    return reject(h, RejectReason::kInvalidBallot);
  }

  // B6
  const auto* row = table_.find(bm.cred_hash);
  if (row == nullptr) return reject(bm.cred_hash, RejectReason::kUnknownCredential);
  if (row->used) return reject(bm.cred_hash, RejectReason::kUsedCredential);
  if (misbehavior.drop_ballots.contains(bm.cred_hash)) {
    table_.mark_used(bm.cred_hash);
    return RejectReason::kInvalidBallot;  // dropped without a trace
  }

  // B7
  auto stp = clock.tick();
  auto delta = pre::enc2(ctx_, row->pk, ctx_.encode_timestamp(stp), *rng_);
  // B8
  auto delta_prime = pre::reenc(ctx_, bm.ballot, delta, *rng_);
  if (!delta_prime) return reject(bm.cred_hash, RejectReason::kInvalidBallot);

  VotingTransaction tx;
  tx.delta = *delta_prime;
  tx.stp = stp;
  if (commit_key_) tx.commitment = envelope::commit(*commit_key_, row->credential);
  table_.mark_used(bm.cred_hash);
  // B9
  return board.append(Phase::kCast, kind::kTransaction, tx.encode());
}

void Proxy::close_casting(BulletinBoard& board) {
  RejectionSummary summary;
  for (const auto& r : rejections_) ++summary.counts[std::string(to_string(r.reason))];
  board.append(Phase::kCast, kind::kRejectionSummary, summary.encode());
}

void Proxy::publish_commit_key(BulletinBoard& board) {
  if (!commit_key_) throw ProtocolError("audit", "audit-disabled");
  auto k = *commit_key_;
  if (misbehavior.publish_wrong_commit_key) k[0] ^= 0x01;
  board.append(Phase::kAudit, kind::kCommitKey, k);
}

// ---- voter ---------------------------------------------------------------

std::string_view to_string(ReceiveError e) {
  switch (e) {
    case ReceiveError::kKemInvalid:
      return "kem-invalid";
    case ReceiveError::kDemAuthFailed:
      return "dem-auth-failed";
    case ReceiveError::kMalformed:
      return "malformed-credential";
    case ReceiveError::kInvalidCredential:
      return "invalid-credential";
  }
  return "unknown";
}

Voter::Voter(std::uint32_t index, GroupContext ctx, std::unique_ptr<RandomSource> rng)
    : index_(index),
      ctx_(std::move(ctx)),
      rng_(std::move(rng)),
      enc_(pre::keygen(ctx_, *rng_)),
      dv_(mdvs::DvKeyPair::generate(ctx_, *rng_)) {}

Expected<std::size_t, ReceiveError> Voter::receive(const PublicSetup& setup, const envelope::HybridCiphertext& c) {
  // B1
  auto plain = envelope::hybrid_dec(ctx_, enc_, c);
  if (!plain) {
    return plain.error() == envelope::OpenError::kKemInvalid ? ReceiveError::kKemInvalid
                                                             : ReceiveError::kDemAuthFailed;
  }
  Held held;
  try {
    auto bundle = CredentialBundle::decode(*plain);
    held.credential = decode_credential(bundle.credential, setup.admin.dv, setup.roll);
    held.sk = pre::KeyPair::from_secret(held.credential.pk, bundle.secret);
    held.credential_bytes = std::move(bundle.credential);
  } catch (const DecodeError& e) {
    denunciations_.push_back(std::string("B1: ") + e.what());
    return ReceiveError::kMalformed;
  }
  // B2
  if (!verify_credential(setup, held.credential)) {
    denunciations_.push_back("B2: credential signature does not verify");
    return ReceiveError::kInvalidCredential;
  }
  held_.push_back(std::move(held));
  return held_.size() - 1;
}

BallotMessage Voter::cast(const PublicSetup& setup, std::string_view candidate, std::size_t which) {
  if (which >= held_.size()) throw ProtocolError("B3", "no-credential");
  auto& h = held_[which];
  auto bm = make_ballot(setup, h.sk, h.credential_bytes, candidate, *rng_);
  h.cast = true;
  h.last_ballot = bm.encode();
  return bm;
}

Voter::FakeCredential Voter::forge_credential(const PublicSetup& setup, std::size_t which) {
  if (which >= held_.size()) throw ProtocolError("coercion", "no-credential");
  const auto& genuine = held_[which].credential;
  auto it = std::find(genuine.verifier_indices.begin(), genuine.verifier_indices.end(), index_);
  if (it == genuine.verifier_indices.end()) throw ProtocolError("coercion", "not-a-designated-verifier");
  auto position = static_cast<std::size_t>(it - genuine.verifier_indices.begin()) + 1;

  auto fake_sk = pre::keygen(ctx_, *rng_);
  Credential fake;
  fake.pk = fake_sk.pub;
  fake.verifier_indices = genuine.verifier_indices;
  fake.sig = mdvs::forge(ctx_, dv_.x, position, genuine.sig.ring, fake.pk.encode(), *rng_);
  (void)setup;
  return FakeCredential{std::move(fake_sk), fake.encode()};
}

std::vector<Verdict> Voter::audit(BulletinBoard& board) {
  auto keys = board.query(Phase::kAudit, kind::kCommitKey);
  if (keys.empty()) throw ProtocolError("audit", "no-commit-key");
  const auto& payload = keys.back().payload;
  if (payload.size() != 32) throw ProtocolError("audit", "malformed-commit-key");
  envelope::CommitKey k{};
  std::copy(payload.begin(), payload.end(), k.begin());

  std::set<Digest> published;
  for (const auto& e : board.query(Phase::kCast, kind::kTransaction)) {
    if (auto c = VotingTransaction::peek_commitment(e.payload)) published.insert(c->digest);
  }

  std::vector<Verdict> verdicts;
  for (const auto& h : held_) {
    if (!h.cast) continue;
    auto expected = envelope::commit(k, h.credential_bytes);
    if (published.contains(expected.digest)) {
      verdicts.push_back(Verdict::kVerified);
    } else {
      verdicts.push_back(Verdict::kMissing);
      board.append(Phase::kAudit, kind::kClaim, Claim{expected, "ballot-not-found"}.encode());
    }
  }
  return verdicts;
}

// ---- candidate -----------------------------------------------------------

Candidate::Candidate(std::string name, GroupContext ctx, std::unique_ptr<RandomSource> rng)
    : name_(std::move(name)), ctx_(std::move(ctx)), enc_(pre::keygen(ctx_, *rng)) {}

void Candidate::publish_key(BulletinBoard& board) const {
  board.append(Phase::kSetup, kind::kCandidateKey, CandidateKeyRecord{name_, enc_.pub}.encode());
}

std::uint64_t Candidate::scan(const BulletinBoard& board) {
  auto fresh = board.since(next_seq_);
  for (const auto& e : fresh) {
    next_seq_ = e.seq + 1;
    if (e.kind != kind::kTransaction) continue;
    ++scanned_;
    VotingTransaction tx;
    try {
      tx = VotingTransaction::decode(e.payload);
    } catch (const DecodeError&) {
      continue;
    }
    if (pre::dec1(ctx_, enc_, tx.delta) == ctx_.encode_timestamp(tx.stp)) opened_.push_back(e.seq);
  }
  return running_count();
}

void Candidate::publish_secret(BulletinBoard& board) const {
  if (board.query(Phase::kOpen, kind::kTallyTrigger).empty()) throw ProtocolError("open", "tally-not-triggered");
  board.append(Phase::kOpen, kind::kCandidateSecret, CandidateSecretRecord{name_, enc_.sk2}.encode());
}

// ---- mix channel ---------------------------------------------------------

MixChannel::MixChannel(std::uint32_t window, std::unique_ptr<RandomSource> rng)
    : window_(std::max<std::uint32_t>(window, 1)), rng_(std::move(rng)) {}

std::vector<Bytes> MixChannel::submit(Bytes ballot_payload) {
  queue_.push_back(std::move(ballot_payload));
  if (queue_.size() < window_) return {};
  return flush();
}

std::vector<Bytes> MixChannel::flush() {
  std::vector<Bytes> out;
  out.swap(queue_);
  rng_->shuffle(std::span(out));
  return out;
}

}  // namespace laocoon::protocol
