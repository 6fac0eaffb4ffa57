#include "laocoon/group.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "laocoon/hash.hpp"

namespace laocoon {

namespace {

constexpr std::size_t kScalarBits = 255;
constexpr std::string_view kGeneratorDst = "LAOCOON-V1-H-GENERATOR_BLS12381G2_XMD:SHA-256_SSWU_RO_";

thread_local OpCounter* t_innermost = nullptr;
thread_local int t_suspended = 0;

blst_fr to_fr(const blst_scalar& s) {
  blst_fr f;
  blst_fr_from_scalar(&f, &s);
  return f;
}

blst_scalar from_fr(const blst_fr& f) {
  blst_scalar s;
  blst_scalar_from_fr(&s, &f);
  return s;
}

void cyclotomic_pow(blst_fp12& out, const blst_fp12& base, const blst_scalar& k) {
  std::array<blst_fp12, 16> table;
  table[0] = *blst_fp12_one();
  table[1] = base;
  for (std::size_t i = 2; i < table.size(); ++i) blst_fp12_mul(&table[i], &table[i - 1], &base);

  blst_fp12 acc = *blst_fp12_one();
  bool started = false;
  for (int byte = 31; byte >= 0; --byte) {
    for (int half = 1; half >= 0; --half) {
      unsigned nibble = (k.b[byte] >> (4 * half)) & 0x0f;
      if (started) {
        for (int s = 0; s < 4; ++s) blst_fp12_cyclotomic_sqr(&acc, &acc);
      }
      if (nibble != 0) {
        blst_fp12_mul(&acc, &acc, &table[nibble]);
        started = true;
      }
    }
  }
  out = acc;
}

}  // namespace

// ---- op counting ---------------------------------------------------------

void count_operation(std::uint64_t OpCounts::*field) {
  const bool primitive = field == &OpCounts::exp_g || field == &OpCounts::exp_gt ||
                         field == &OpCounts::pairings;
  if (primitive && t_suspended > 0) return;
  for (auto* c = t_innermost; c != nullptr; c = c->parent_) ++(c->counts_.*field);
}

OpCounter::OpCounter() : parent_(t_innermost) { t_innermost = this; }

OpCounter::~OpCounter() { t_innermost = parent_; }

UncountedScope::UncountedScope() { ++t_suspended; }

UncountedScope::~UncountedScope() { --t_suspended; }

OpCounts& OpCounts::operator+=(const OpCounts& o) {
  exp_g += o.exp_g;
  exp_gt += o.exp_gt;
  pairings += o.pairings;
  sigs += o.sigs;
  vfys += o.vfys;
  return *this;
}

OpCounts OpCounts::operator+(const OpCounts& o) const {
  OpCounts r = *this;
  r += o;
  return r;
}

OpCounts OpCounts::operator-(const OpCounts& o) const {
  return {exp_g - o.exp_g, exp_gt - o.exp_gt, pairings - o.pairings, sigs - o.sigs, vfys - o.vfys};
}

std::string to_string(const OpCounts& c) {
  std::ostringstream os;
  os << c.exp_g << "E1 + " << c.exp_gt << "E2 + " << c.pairings << "P + " << c.sigs << "Sig + "
     << c.vfys << "Vfy";
  return os.str();
}

// ---- Scalar --------------------------------------------------------------

Scalar::Scalar() { std::memset(&v_, 0, sizeof(v_)); }

Scalar Scalar::from_u64(std::uint64_t v) {
  Scalar s;
  const std::uint64_t limbs[4] = {v, 0, 0, 0};
  blst_scalar_from_uint64(&s.v_, limbs);
  return s;
}

Scalar Scalar::from_wide_bytes(ByteView be) {
  Scalar s;
  if (!be.empty()) blst_scalar_from_be_bytes(&s.v_, be.data(), be.size());
  return s;
}

Scalar Scalar::random(RandomSource& rng) {
  std::uint8_t wide[64];
  rng.fill(wide);
  return from_wide_bytes(wide);
}

Scalar Scalar::random_nonzero(RandomSource& rng) {
  for (;;) {
    Scalar s = random(rng);
    if (!s.is_zero()) return s;
  }
}

std::optional<Scalar> Scalar::decode(ByteView be) {
  if (be.size() != kEncodedSize) return std::nullopt;
  Scalar s;
  blst_scalar_from_bendian(&s.v_, be.data());
  if (!s.is_zero() && !blst_scalar_fr_check(&s.v_)) return std::nullopt;
  return s;
}

Bytes Scalar::encode() const {
  Bytes out(kEncodedSize);
  blst_bendian_from_scalar(out.data(), &v_);
  return out;
}

bool Scalar::is_zero() const {
  return std::all_of(std::begin(v_.b), std::end(v_.b), [](auto b) { return b == 0; });
}

Scalar Scalar::operator+(const Scalar& o) const {
  blst_fr a = to_fr(v_), b = to_fr(o.v_), r;
  blst_fr_add(&r, &a, &b);
  Scalar s;
  s.v_ = from_fr(r);
  return s;
}

Scalar Scalar::operator-(const Scalar& o) const {
  blst_fr a = to_fr(v_), b = to_fr(o.v_), r;
  blst_fr_sub(&r, &a, &b);
  Scalar s;
  s.v_ = from_fr(r);
  return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
  blst_fr a = to_fr(v_), b = to_fr(o.v_), r;
  blst_fr_mul(&r, &a, &b);
  Scalar s;
  s.v_ = from_fr(r);
  return s;
}

Scalar Scalar::operator-() const { return Scalar{} - *this; }

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero scalar");
  blst_fr a = to_fr(v_), r;
  blst_fr_eucl_inverse(&r, &a);
  Scalar s;
  s.v_ = from_fr(r);
  return s;
}

bool Scalar::operator==(const Scalar& o) const {
  return std::memcmp(v_.b, o.v_.b, sizeof(v_.b)) == 0;
}

Scalar hash_to_scalar(ByteView data) {
  std::array<std::uint8_t, 64> wide{};
  for (std::uint8_t i = 0; i < 2; ++i) {
    Sha256 h;
    h.update("laocoon-hash-to-scalar-v1");
    std::uint8_t ctr = i;
    h.update(ByteView(&ctr, 1));
    h.update(data);
    auto d = h.finish();
    std::copy(d.begin(), d.end(), wide.begin() + 32 * i);
  }
  return Scalar::from_wide_bytes(wide);
}

// ---- G1 ------------------------------------------------------------------

G1Point::G1Point() { std::memset(&p_, 0, sizeof(p_)); }

G1Point G1Point::generator() {
  G1Point g;
  g.p_ = *blst_p1_generator();
  return g;
}

G1Point G1Point::pow(const Scalar& k) const {
  count_operation(&OpCounts::exp_g);
  G1Point r;
  blst_p1_mult(&r.p_, &p_, k.raw().b, kScalarBits);
  return r;
}

G1Point G1Point::operator*(const G1Point& o) const {
  G1Point r;
  blst_p1_add_or_double(&r.p_, &p_, &o.p_);
  return r;
}

bool G1Point::is_identity() const { return blst_p1_is_inf(&p_); }

bool G1Point::operator==(const G1Point& o) const { return blst_p1_is_equal(&p_, &o.p_); }

Bytes G1Point::encode() const {
  Bytes out(kEncodedSize);
  blst_p1_compress(out.data(), &p_);
  return out;
}

std::optional<G1Point> G1Point::decode(ByteView b) {
  if (b.size() != kEncodedSize) return std::nullopt;
  blst_p1_affine a;
  if (blst_p1_uncompress(&a, b.data()) != BLST_SUCCESS) return std::nullopt;
  if (!blst_p1_affine_in_g1(&a)) return std::nullopt;
  G1Point p;
  blst_p1_from_affine(&p.p_, &a);
  auto again = p.encode();
  if (!std::equal(again.begin(), again.end(), b.begin())) return std::nullopt;
  return p;
}

blst_p1_affine G1Point::affine() const {
  blst_p1_affine a;
  blst_p1_to_affine(&a, &p_);
  return a;
}

// ---- G2 ------------------------------------------------------------------

G2Point::G2Point() { std::memset(&p_, 0, sizeof(p_)); }

G2Point G2Point::generator() {
  G2Point g;
  g.p_ = *blst_p2_generator();
  return g;
}

G2Point G2Point::hash_to_group(ByteView msg, std::string_view dst) {
  G2Point r;
  auto d = as_bytes(dst);
  blst_hash_to_g2(&r.p_, msg.data(), msg.size(), d.data(), d.size(), nullptr, 0);
  return r;
}

G2Point G2Point::pow(const Scalar& k) const {
  count_operation(&OpCounts::exp_g);
  G2Point r;
  blst_p2_mult(&r.p_, &p_, k.raw().b, kScalarBits);
  return r;
}

G2Point G2Point::operator*(const G2Point& o) const {
  G2Point r;
  blst_p2_add_or_double(&r.p_, &p_, &o.p_);
  return r;
}

bool G2Point::is_identity() const { return blst_p2_is_inf(&p_); }

bool G2Point::operator==(const G2Point& o) const { return blst_p2_is_equal(&p_, &o.p_); }

Bytes G2Point::encode() const {
  Bytes out(kEncodedSize);
  blst_p2_compress(out.data(), &p_);
  return out;
}

std::optional<G2Point> G2Point::decode(ByteView b) {
  if (b.size() != kEncodedSize) return std::nullopt;
  blst_p2_affine a;
  if (blst_p2_uncompress(&a, b.data()) != BLST_SUCCESS) return std::nullopt;
  if (!blst_p2_affine_in_g2(&a)) return std::nullopt;
  G2Point p;
  blst_p2_from_affine(&p.p_, &a);
  auto again = p.encode();
  if (!std::equal(again.begin(), again.end(), b.begin())) return std::nullopt;
  return p;
}

blst_p2_affine G2Point::affine() const {
  blst_p2_affine a;
  blst_p2_to_affine(&a, &p_);
  return a;
}

// ---- GT ------------------------------------------------------------------

GtElement::GtElement() : f_(*blst_fp12_one()) {}

GtElement GtElement::pow(const Scalar& k) const {
  count_operation(&OpCounts::exp_gt);
  GtElement r;
  cyclotomic_pow(r.f_, f_, k.raw());
  return r;
}

GtElement GtElement::operator*(const GtElement& o) const {
  GtElement r;
  blst_fp12_mul(&r.f_, &f_, &o.f_);
  return r;
}

GtElement GtElement::inverse() const {
  // Elements of the order-q subgroup are unitary, so the inverse is the
  // conjugate.
  GtElement r = *this;
  blst_fp12_conjugate(&r.f_);
  return r;
}

GtElement GtElement::operator/(const GtElement& o) const { return *this * o.inverse(); }

bool GtElement::is_one() const { return blst_fp12_is_one(&f_); }

bool GtElement::operator==(const GtElement& o) const { return blst_fp12_is_equal(&f_, &o.f_); }

Bytes GtElement::encode() const {
  Bytes out(kEncodedSize);
  blst_bendian_from_fp12(out.data(), &f_);
  return out;
}

std::optional<GtElement> GtElement::decode(ByteView b) {
  if (b.size() != kEncodedSize) return std::nullopt;
  GtElement e;
  const std::uint8_t* p = b.data();
  // Mirrors blst_bendian_from_fp12's coefficient order.
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        blst_fp_from_bendian(&e.f_.fp6[j].fp2[i].fp[k], p);
        p += 48;
      }
    }
  }
  auto again = e.encode();
  if (!std::equal(again.begin(), again.end(), b.begin())) return std::nullopt;
  if (!blst_fp12_in_group(&e.f_)) return std::nullopt;
  return e;
}

GtElement pairing(const G1Point& p, const G2Point& q) {
  count_operation(&OpCounts::pairings);
  auto pa = p.affine();
  auto qa = q.affine();
  GtElement r;
  if (p.is_identity() || q.is_identity()) return r;
  blst_fp12 ml;
  blst_miller_loop(&ml, &qa, &pa);
  blst_final_exp(&r.f_, &ml);
  return r;
}

// ---- GroupContext --------------------------------------------------------

struct GroupContext::Data {
  std::string tag;
  G1Point g;
  G2Point h;
  GtElement z;
  std::array<GtElement, kTimestampBits> z_squares;
};

GroupContext GroupContext::setup(std::string_view security_tag) {
  if (security_tag.empty()) throw std::invalid_argument("setup_group: empty security tag");
  auto d = std::make_shared<Data>();
  d->tag = std::string(security_tag);
  d->g = G1Point::generator();
  d->h = G2Point::hash_to_group(as_bytes(security_tag), kGeneratorDst);
  {
    UncountedScope quiet;
    d->z = pairing(d->g, d->h);
  }
  d->z_squares[0] = d->z;
  for (std::size_t i = 1; i < kTimestampBits; ++i) {
    blst_fp12_cyclotomic_sqr(&d->z_squares[i].f_, &d->z_squares[i - 1].f_);
  }
  return GroupContext(std::move(d));
}

const std::string& GroupContext::tag() const { return d_->tag; }
const G1Point& GroupContext::g() const { return d_->g; }
const G2Point& GroupContext::h() const { return d_->h; }
const GtElement& GroupContext::z() const { return d_->z; }

GtElement GroupContext::encode_timestamp(std::uint64_t t) const {
  GtElement acc;
  for (std::size_t i = 0; i < kTimestampBits; ++i) {
    if ((t >> i) & 1u) acc = acc * d_->z_squares[i];
  }
  return acc;
}

Bytes GroupContext::encode() const {
  ByteWriter w;
  w.str(kCurveName).str(d_->tag).raw(d_->g.encode()).raw(d_->h.encode()).raw(d_->z.encode());
  return w.take();
}

GroupContext GroupContext::decode(ByteView b) {
  ByteReader r(b);
  if (r.str() != kCurveName) throw DecodeError("params: unsupported curve");
  auto tag = r.str();
  auto g = r.raw(G1Point::kEncodedSize);
  auto h = r.raw(G2Point::kEncodedSize);
  auto z = r.raw(GtElement::kEncodedSize);
  r.expect_done();
  if (tag.empty()) throw DecodeError("params: empty tag");
  auto ctx = setup(tag);
  if (!std::ranges::equal(ctx.g().encode(), g) || !std::ranges::equal(ctx.h().encode(), h) ||
      !std::ranges::equal(ctx.z().encode(), z)) {
    throw DecodeError("params: published generators do not match the tag");
  }
  return ctx;
}

bool GroupContext::operator==(const GroupContext& o) const {
  return d_ == o.d_ || (d_->tag == o.d_->tag && d_->g == o.d_->g && d_->h == o.d_->h && d_->z == o.d_->z);
}

}  // namespace laocoon
