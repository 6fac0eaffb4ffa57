#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "laocoon/bulletin.hpp"

using namespace laocoon;
using namespace laocoon::bulletin;

namespace {

BulletinBoard board_of(std::size_t n) {
  BulletinBoard b;
  for (std::size_t i = 0; i < n; ++i) {
    auto phase = static_cast<Phase>(std::min<std::size_t>(i * 6 / std::max<std::size_t>(n, 1), 5));
    b.append(phase, i % 3 == 0 ? kind::kTransaction : kind::kBallot, to_bytes("payload-" + std::to_string(i)));
  }
  return b;
}

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "laocoon-bulletin-test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Bulletin, FirstAppend) {
  BulletinBoard b;
  EXPECT_EQ(b.append(Phase::kSetup, kind::kParams, to_bytes("p")), 0u);
  auto e = b.snapshot().at(0);
  EXPECT_EQ(e.prev_hash, genesis_hash());
  EXPECT_EQ(e.entry_hash, compute_entry_hash(0, Phase::kSetup, "params", to_bytes("p"), genesis_hash()));
  EXPECT_EQ(b.head_hash(), e.entry_hash);
}

TEST(Bulletin, TwoAppendsVerify) {
  BulletinBoard b;
  b.append(Phase::kSetup, kind::kParams, to_bytes("a"));
  b.append(Phase::kSetup, kind::kHashSpec, to_bytes("b"));
  EXPECT_TRUE(b.verify().ok);
  auto s = b.snapshot();
  EXPECT_EQ(s[1].prev_hash, s[0].entry_hash);
}

TEST(Bulletin, PhaseRegression) {
  BulletinBoard b;
  b.append(Phase::kCast, kind::kTransaction, to_bytes("t"));
  b.append(Phase::kTally, kind::kTallyResult, to_bytes("r"));
  try {
    b.append(Phase::kCast, kind::kTransaction, to_bytes("late"));
    FAIL() << "expected phase regression";
  } catch (const BoardError& e) {
    EXPECT_EQ(e.code(), BoardError::Code::kPhaseRegression);
  }
  EXPECT_EQ(b.size(), 2u);
}

TEST(Bulletin, PayloadLimits) {
  BulletinBoard b;
  EXPECT_NO_THROW(b.append(Phase::kSetup, "big", Bytes(BulletinBoard::kMaxPayload, 1)));
  try {
    b.append(Phase::kSetup, "big", Bytes(BulletinBoard::kMaxPayload + 1, 1));
    FAIL();
  } catch (const BoardError& e) {
    EXPECT_EQ(e.code(), BoardError::Code::kPayloadTooLarge);
  }
  EXPECT_THROW(b.append(Phase::kSetup, "", to_bytes("x")), BoardError);
}

TEST(Bulletin, UntamperedHundredEntries) {
  auto b = board_of(100);
  EXPECT_TRUE(verify_chain(b.snapshot()).ok);
}

TEST(Bulletin, PayloadFlipAtSeven) {
  auto entries = board_of(100).snapshot();
  entries[7].payload[0] ^= 0x01;
  auto check = verify_chain(entries);
  EXPECT_FALSE(check.ok);
  EXPECT_EQ(check.first_bad_seq, 7u);
}

TEST(Bulletin, ReorderDetected) {
  auto entries = board_of(20).snapshot();
  std::swap(entries[4], entries[5]);
  auto check = verify_chain(entries);
  EXPECT_FALSE(check.ok);
  EXPECT_EQ(check.first_bad_seq, 4u);
}

TEST(Bulletin, TruncationOnlyVisibleAgainstHead) {
  auto b = board_of(30);
  auto head = b.head_hash();
  auto entries = b.snapshot();
  entries.pop_back();
  EXPECT_TRUE(verify_chain(entries).ok);
  EXPECT_NE(entries.back().entry_hash, head);
}

TEST(Bulletin, Query) {
  BulletinBoard b;
  b.append(Phase::kSetup, kind::kParams, to_bytes("p"));
  for (int i = 0; i < 3; ++i) {
    b.append(Phase::kCast, kind::kTransaction, to_bytes("t" + std::to_string(i)));
    b.append(Phase::kCast, kind::kBallot, to_bytes("b"));
  }
  auto tx = b.query(std::nullopt, kind::kTransaction);
  ASSERT_EQ(tx.size(), 3u);
  EXPECT_LT(tx[0].seq, tx[1].seq);
  EXPECT_LT(tx[1].seq, tx[2].seq);
  EXPECT_EQ(tx[2].payload, to_bytes("t2"));
  EXPECT_EQ(b.query().size(), b.size());
  EXPECT_TRUE(b.query(std::nullopt, std::string_view("nonexistent")).empty());
  EXPECT_EQ(b.query(Phase::kSetup).size(), 1u);
  EXPECT_EQ(b.since(3).size(), 4u);
}

TEST(Bulletin, DenseSeq) {
  auto entries = board_of(50).snapshot();
  for (std::size_t i = 0; i < entries.size(); ++i) EXPECT_EQ(entries[i].seq, i);
}

TEST(Bulletin, PersistRoundTrip) {
  auto b = board_of(40);
  auto p = temp_file("roundtrip.board");
  b.persist(p);
  auto loaded = BulletinBoard::load(p);
  EXPECT_EQ(loaded.snapshot(), b.snapshot());
  auto p2 = temp_file("roundtrip2.board");
  loaded.persist(p2);
  EXPECT_EQ(slurp(p), slurp(p2));
  EXPECT_EQ(b.serialize(), b.serialize());
}

TEST(Bulletin, CorruptedLineNamed) {
  auto text = board_of(10).serialize();
  // Line 5 holds seq 3.
  std::istringstream in(text);
  std::string out, line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (n == 5) line = "3\tcast\tballot\tnot-hex";
    out += line + "\n";
  }
  try {
    BulletinBoard::parse(out);
    FAIL() << "expected a load error";
  } catch (const BoardError& e) {
    EXPECT_EQ(e.code(), BoardError::Code::kMalformedFile);
    EXPECT_EQ(e.line(), 5u);
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
  }
}

TEST(Bulletin, ChainInvalidFileRejected) {
  auto text = board_of(10).serialize();
  // Alter one payload hex digit on the line of seq 6 (line 8).
  std::istringstream in(text);
  std::string out, line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (n == 8) {
      auto tab = line.find('\t', line.find('\t', line.find('\t') + 1) + 1) + 1;
      line[tab] = line[tab] == '0' ? '1' : '0';
    }
    out += line + "\n";
  }
  try {
    BulletinBoard::parse(out);
    FAIL();
  } catch (const BoardError& e) {
    EXPECT_EQ(e.code(), BoardError::Code::kChainInvalid);
    EXPECT_EQ(e.line(), 8u);
  }
}

TEST(Bulletin, TruncatedFileRejected) {
  auto text = board_of(5).serialize();
  EXPECT_THROW(BulletinBoard::parse(text.substr(0, text.size() - 10)), BoardError);
}

TEST(Bulletin, EmptyFileIsEmptyBoard) {
  auto p = temp_file("empty.board");
  { std::ofstream(p, std::ios::trunc); }
  EXPECT_TRUE(BulletinBoard::load(p).empty());
  EXPECT_TRUE(BulletinBoard::parse("").empty());
}

TEST(Bulletin, MissingFile) {
  try {
    BulletinBoard::load(temp_file("does-not-exist.board"));
    FAIL();
  } catch (const BoardError& e) {
    EXPECT_EQ(e.code(), BoardError::Code::kIo);
  }
}

TEST(Bulletin, PhaseNames) {
  for (int p = 0; p <= 5; ++p) {
    auto ph = static_cast<Phase>(p);
    EXPECT_EQ(parse_phase(to_string(ph)), ph);
  }
  EXPECT_FALSE(parse_phase("voting").has_value());
}
