#include "laocoon/protocol/messages.hpp"

#include "json.hpp"

namespace laocoon::protocol {

namespace {

template <typename Element>
Element read_element(ByteReader& r) {
  auto e = Element::decode(r.raw(Element::kEncodedSize));
  if (!e) throw DecodeError("invalid group element");
  return *e;
}

pre::PublicKey read_pre_key(ByteReader& r) {
  auto pk = pre::PublicKey::decode(r.raw(pre::PublicKey::kEncodedSize));
  if (!pk) throw DecodeError("invalid PRE public key");
  return *pk;
}

constexpr std::size_t kMaxListLength = 1u << 20;

}  // namespace

Bytes VoterRoll::encode() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(voters.size()));
  for (const auto& v : voters) w.raw(v.enc.encode()).raw(v.dv.encode());
  return w.take();
}

VoterRoll VoterRoll::decode(ByteView b) {
  ByteReader r(b);
  auto n = r.u32();
  if (n > r.remaining() / (pre::PublicKey::kEncodedSize + G1Point::kEncodedSize)) {
    throw DecodeError("voter roll length exceeds payload");
  }
  VoterRoll roll;
  roll.voters.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    VoterPublic v{read_pre_key(r), read_element<G1Point>(r)};
    roll.voters.push_back(std::move(v));
  }
  r.expect_done();
  return roll;
}

Bytes AdminCert::signed_message(const GroupContext& ctx, const pre::PublicKey& enc, const G1Point& dv) {
  ByteWriter w;
  w.str("laocoon-admin-cert-v1").str(ctx.tag()).raw(enc.encode()).raw(dv.encode());
  return w.take();
}

Bytes AdminCert::encode() const {
  ByteWriter w;
  w.raw(enc.encode()).raw(dv.encode()).blob(self_sig.encode());
  return w.take();
}

AdminCert AdminCert::decode(ByteView b) {
  ByteReader r(b);
  AdminCert c;
  c.enc = read_pre_key(r);
  c.dv = read_element<G1Point>(r);
  auto sig = mdvs::Signature::decode(r.blob(), mdvs::Ring{c.dv});
  if (!sig) throw DecodeError("invalid admin self-signature encoding");
  c.self_sig = *sig;
  r.expect_done();
  return c;
}

bool AdminCert::verify(const GroupContext& ctx) const {
  return self_sig.ring.size() == 1 && self_sig.ring[0] == dv &&
         mdvs::verify_certificate(ctx, self_sig, signed_message(ctx, enc, dv));
}

Bytes RekeyRecord::encode() const {
  ByteWriter w;
  w.u32(voter_index).raw(rk.encode());
  return w.take();
}

RekeyRecord RekeyRecord::decode(ByteView b) {
  ByteReader r(b);
  RekeyRecord rec;
  rec.voter_index = r.u32();
  auto rk = pre::ReKey::decode(r.raw(pre::ReKey::kEncodedSize));
  if (!rk) throw DecodeError("invalid re-encryption key");
  rec.rk = *rk;
  r.expect_done();
  return rec;
}

Bytes CandidateKeyRecord::encode() const {
  ByteWriter w;
  w.str(name).raw(pk.encode());
  return w.take();
}

CandidateKeyRecord CandidateKeyRecord::decode(ByteView b) {
  ByteReader r(b);
  CandidateKeyRecord rec;
  rec.name = r.str();
  rec.pk = read_pre_key(r);
  r.expect_done();
  return rec;
}

Bytes CandidateSecretRecord::encode() const {
  ByteWriter w;
  w.str(name).raw(sk2.encode());
  return w.take();
}

CandidateSecretRecord CandidateSecretRecord::decode(ByteView b) {
  ByteReader r(b);
  CandidateSecretRecord rec;
  rec.name = r.str();
  auto s = Scalar::decode(r.raw(Scalar::kEncodedSize));
  if (!s || s->is_zero()) throw DecodeError("invalid candidate secret");
  rec.sk2 = *s;
  r.expect_done();
  return rec;
}

Bytes Credential::encode() const {
  ByteWriter w;
  w.raw(pk.encode()).u32(static_cast<std::uint32_t>(verifier_indices.size()));
  for (auto i : verifier_indices) w.u32(i);
  w.raw(sig.encode());
  return w.take();
}

mdvs::Ring credential_ring(const G1Point& admin_dv, const VoterRoll& roll,
                           const std::vector<std::uint32_t>& verifier_indices) {
  mdvs::Ring ring;
  ring.reserve(verifier_indices.size() + 1);
  ring.push_back(admin_dv);
  for (auto i : verifier_indices) {
    if (i >= roll.voters.size()) throw DecodeError("verifier index outside the voter roll");
    ring.push_back(roll.voters[i].dv);
  }
  return ring;
}

Credential decode_credential(ByteView b, const G1Point& admin_dv, const VoterRoll& roll) {
  ByteReader r(b);
  Credential c;
  c.pk = read_pre_key(r);
  auto n = r.u32();
  if (n > r.remaining() / 4) throw DecodeError("verifier list exceeds payload");
  c.verifier_indices.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) c.verifier_indices.push_back(r.u32());
  auto ring = credential_ring(admin_dv, roll, c.verifier_indices);
  auto sig = mdvs::Signature::decode(r.raw(r.remaining()), ring);
  if (!sig) throw DecodeError("invalid credential signature encoding");
  c.sig = std::move(*sig);
  return c;
}

Bytes CredentialBundle::encode() const {
  ByteWriter w;
  w.blob(secret).blob(credential);
  return w.take();
}

CredentialBundle CredentialBundle::decode(ByteView b) {
  ByteReader r(b);
  CredentialBundle out;
  auto s = r.blob();
  auto c = r.blob();
  r.expect_done();
  out.secret.assign(s.begin(), s.end());
  out.credential.assign(c.begin(), c.end());
  return out;
}

Bytes encode_credential_list(const std::vector<Bytes>& credentials) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(credentials.size()));
  for (const auto& c : credentials) w.blob(c);
  return w.take();
}

std::vector<Bytes> decode_credential_list(ByteView b) {
  ByteReader r(b);
  auto n = r.u32();
  if (n > kMaxListLength) throw DecodeError("credential list too long");
  std::vector<Bytes> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    auto c = r.blob();
    out.emplace_back(c.begin(), c.end());
  }
  r.expect_done();
  return out;
}

Bytes BallotMessage::encode() const {
  ByteWriter w;
  w.raw(ballot.encode()).raw(cred_hash);
  return w.take();
}

BallotMessage BallotMessage::decode(ByteView b) {
  ByteReader r(b);
  BallotMessage m;
  auto rk = pre::ReKey::decode(r.raw(pre::ReKey::kEncodedSize));
  if (!rk) throw DecodeError("invalid ballot");
  m.ballot = *rk;
  m.cred_hash = digest_from_bytes(r.raw(32));
  r.expect_done();
  return m;
}

Bytes VotingTransaction::encode() const {
  ByteWriter w;
  w.raw(delta.encode()).u64(stp).u8(commitment ? 1 : 0);
  if (commitment) w.raw(commitment->digest);
  return w.take();
}

VotingTransaction VotingTransaction::decode(ByteView b) {
  ByteReader r(b);
  VotingTransaction t;
  auto d = pre::CiphertextL1::decode(r.raw(pre::CiphertextL1::kEncodedSize));
  if (!d) throw DecodeError("invalid transaction ciphertext");
  t.delta = *d;
  t.stp = r.u64();
  auto flag = r.u8();
  if (flag > 1) throw DecodeError("invalid commitment flag");
  if (flag == 1) t.commitment = envelope::Commitment{digest_from_bytes(r.raw(32))};
  r.expect_done();
  return t;
}

std::optional<envelope::Commitment> VotingTransaction::peek_commitment(ByteView b) {
  constexpr auto head = pre::CiphertextL1::kEncodedSize + 8;
  if (b.size() != head + 1 + 32 || b[head] != 1) return std::nullopt;
  return envelope::Commitment{digest_from_bytes(b.subspan(head + 1))};
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kUnknownCredential:
      return "reject-unknown-credential";
    case RejectReason::kUsedCredential:
      return "reject-used-credential";
    case RejectReason::kInvalidBallot:
      return "reject-invalid-ballot";
  }
  return "reject-unknown";
}

std::optional<RejectReason> parse_reject_reason(std::string_view s) {
  for (auto r : {RejectReason::kUnknownCredential, RejectReason::kUsedCredential, RejectReason::kInvalidBallot}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

Bytes RejectionSummary::encode() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(counts.size()));
  for (const auto& [reason, n] : counts) w.str(reason).u64(n);
  return w.take();
}

RejectionSummary RejectionSummary::decode(ByteView b) {
  ByteReader r(b);
  RejectionSummary s;
  auto n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    auto reason = r.str();
    s.counts[reason] = r.u64();
  }
  r.expect_done();
  return s;
}

std::uint64_t TallyReport::count_for(std::string_view candidate) const {
  for (const auto& [name, n] : counts) {
    if (name == candidate) return n;
  }
  return 0;
}

std::uint64_t TallyReport::rejected_total() const {
  std::uint64_t total = 0;
  for (const auto& [_, n] : rejected) total += n;
  return total;
}

std::string TallyReport::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = 1;
  auto& c = j["counts"] = nlohmann::ordered_json::array();
  for (const auto& [name, n] : counts) c.push_back({{"candidate", name}, {"votes", n}});
  j["total_valid"] = total_valid;
  j["rejected"] = nlohmann::ordered_json::object();
  for (const auto& [reason, n] : rejected) j["rejected"][reason] = n;
  j["unopened"] = unopened;
  j["transactions"] = transactions;
  return j.dump();
}

TallyReport TallyReport::from_json(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != 1) throw DecodeError("unsupported tally report version");
    TallyReport t;
    for (const auto& c : j.at("counts")) {
      t.counts.emplace_back(c.at("candidate").get<std::string>(), c.at("votes").get<std::uint64_t>());
    }
    t.total_valid = j.at("total_valid").get<std::uint64_t>();
    for (const auto& [reason, n] : j.at("rejected").items()) t.rejected[reason] = n.get<std::uint64_t>();
    t.unopened = j.at("unopened").get<std::uint64_t>();
    t.transactions = j.at("transactions").get<std::uint64_t>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("tally report: ") + e.what());
  }
}

Bytes Claim::encode() const {
  ByteWriter w;
  w.raw(expected.digest).str(reason);
  return w.take();
}

Claim Claim::decode(ByteView b) {
  ByteReader r(b);
  Claim c;
  c.expected.digest = digest_from_bytes(r.raw(32));
  c.reason = r.str();
  r.expect_done();
  return c;
}

Bytes encode_phase_marker(bulletin::Phase p) { return to_bytes(bulletin::to_string(p)); }

}  // namespace laocoon::protocol
