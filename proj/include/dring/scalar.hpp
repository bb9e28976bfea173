// Division-ring scalars: exact rationals, prime fields GF(p), and quaternions
// with rational components, all behind one ring-context interface.
//
// A ring object carries whatever runtime state the ring needs (the modulus for
// GF(p)) and exposes the arithmetic as methods; matrices and algorithms are
// templated on the ring type and never touch representation details. The
// involution `conj` is the identity on the two fields and quaternion
// conjugation on H(Q), so conjugate-transpose code is ring-agnostic.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dring/errors.hpp"

namespace dring {

using Rational = mpq_class;

// ---------------------------------------------------------------------------
// Rational helpers (canonical lowest terms, positive denominator — maintained
// by GMP's canonical form; we canonicalize after every raw construction).
// ---------------------------------------------------------------------------

inline std::string_view trim_view(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Strict "num" or "num/den" with optional leading '-' on the numerator.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = trim_view(text);
  if (!s.empty() && (s.front() == '"' || s.front() == '\'')) {
    if (s.size() < 2 || s.back() != s.front())
      throw ParseError("unbalanced quotes in rational '" + std::string(text) + "'");
    s = trim_view(s.substr(1, s.size() - 2));
  }
  auto digits_only = [](std::string_view d) {
    if (d.empty()) return false;
    for (char c : d)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string_view num = s, den = "1";
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num = trim_view(s.substr(0, slash));
    den = trim_view(s.substr(slash + 1));
  }
  bool neg = false;
  if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
    neg = num.front() == '-';
    num.remove_prefix(1);
  }
  if (!digits_only(num) || !digits_only(den))
    throw ParseError("malformed rational '" + std::string(text) + "'");
  mpz_class n(std::string(num), 10), d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in rational '" + std::string(text) + "'");
  if (neg) n = -n;
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline std::string rational_str(const Rational& r) { return r.get_str(); }

// ---------------------------------------------------------------------------
// Quaternion over the rationals: w + x*i + y*j + z*k.
// ---------------------------------------------------------------------------

struct Quaternion {
  Rational w, x, y, z;

  friend bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

// ---------------------------------------------------------------------------
// Ring descriptors (runtime dispatch handle shared by CLI and serialization).
// ---------------------------------------------------------------------------

enum class RingKind { rationals, prime_field, rational_quaternions };

struct RingDescriptor {
  RingKind kind = RingKind::rationals;
  std::uint64_t modulus = 0;  // meaningful iff kind == prime_field

  friend bool operator==(const RingDescriptor& a, const RingDescriptor& b) {
    return a.kind == b.kind && (a.kind != RingKind::prime_field || a.modulus == b.modulus);
  }
};

inline std::string ring_kind_name(RingKind k) {
  switch (k) {
    case RingKind::rationals: return "rationals";
    case RingKind::prime_field: return "prime_field";
    case RingKind::rational_quaternions: return "rational_quaternions";
  }
  throw InternalInconsistency("unknown ring kind");
}

inline RingKind ring_kind_from_name(std::string_view name) {
  if (name == "rationals") return RingKind::rationals;
  if (name == "prime_field") return RingKind::prime_field;
  if (name == "rational_quaternions") return RingKind::rational_quaternions;
  throw ParseError("unknown ring '" + std::string(name) +
                   "' (expected rationals, prime_field, or rational_quaternions)");
}

// ---------------------------------------------------------------------------
// The three concrete rings.
// ---------------------------------------------------------------------------

class RationalRing {
public:
  using Elem = Rational;

  Elem zero() const { return Rational(0); }
  Elem one() const { return Rational(1); }
  Elem from_int(std::int64_t v) const { return Rational(static_cast<long>(v)); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const {
    if (a == 0) throw ZeroInverse("rational inverse of 0");
    return Rational(1) / a;
  }
  Elem conj(const Elem& a) const { return a; }
  bool is_zero(const Elem& a) const { return a == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  std::uint64_t characteristic() const { return 0; }
  bool char_two() const { return false; }
  std::string str(const Elem& a) const { return rational_str(a); }
  Elem parse(std::string_view s) const { return parse_rational(s); }
  RingDescriptor descriptor() const { return {RingKind::rationals, 0}; }
  std::string name() const { return "rationals"; }
};

class PrimeField {
public:
  using Elem = std::uint64_t;  // residue in [0, p)

  // Moduli are capped below 2^31 so products fit in 64 bits exactly.
  static constexpr std::uint64_t kMaxModulus = (std::uint64_t{1} << 31) - 1;

  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (p < 2 || p > kMaxModulus)
      throw InvalidModulus("modulus " + std::to_string(p) + " out of range [2, 2^31-1]");
    if (!is_prime(p)) throw InvalidModulus("modulus " + std::to_string(p) + " is not prime");
  }

  static bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    if (p % 2 == 0) return p == 2;
    for (std::uint64_t d = 3; d * d <= p; d += 2)
      if (p % d == 0) return false;
    return true;
  }

  std::uint64_t modulus() const { return p_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1 % p_; }
  Elem from_int(std::int64_t v) const {
    std::int64_t m = static_cast<std::int64_t>(p_);
    std::int64_t r = v % m;
    if (r < 0) r += m;
    return static_cast<Elem>(r);
  }
  Elem add(Elem a, Elem b) const { return (a + b) % p_; }
  Elem sub(Elem a, Elem b) const { return (a + p_ - b) % p_; }
  Elem mul(Elem a, Elem b) const { return (a * b) % p_; }
  Elem neg(Elem a) const { return (p_ - a) % p_; }
  Elem inv(Elem a) const {
    if (a == 0) throw ZeroInverse("GF(" + std::to_string(p_) + ") inverse of 0");
    // Extended Euclid on signed 64-bit (p < 2^31 keeps everything in range).
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p_), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (r != 1) throw InternalInconsistency("gcd(a, p) != 1 in prime field inverse");
    if (t < 0) t += static_cast<std::int64_t>(p_);
    return static_cast<Elem>(t);
  }
  Elem conj(Elem a) const { return a; }
  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }
  std::uint64_t characteristic() const { return p_; }
  bool char_two() const { return p_ == 2; }
  std::string str(Elem a) const { return std::to_string(a); }
  Elem parse(std::string_view s) const {
    std::string_view t = trim_view(s);
    if (!t.empty() && (t.front() == '"' || t.front() == '\'')) {
      if (t.size() < 2 || t.back() != t.front())
        throw ParseError("unbalanced quotes in residue '" + std::string(s) + "'");
      t = trim_view(t.substr(1, t.size() - 2));
    }
    bool neg = false;
    if (!t.empty() && (t.front() == '-' || t.front() == '+')) {
      neg = t.front() == '-';
      t.remove_prefix(1);
    }
    if (t.empty()) throw ParseError("empty residue literal");
    for (char c : t)
      if (c < '0' || c > '9')
        throw ParseError("malformed residue '" + std::string(s) + "'");
    mpz_class big(std::string(t), 10);
    if (neg) big = -big;
    mpz_class m(static_cast<unsigned long>(p_));
    mpz_class r = big % m;
    if (r < 0) r += m;
    return static_cast<Elem>(r.get_ui());
  }
  RingDescriptor descriptor() const { return {RingKind::prime_field, p_}; }
  std::string name() const { return "prime_field"; }

private:
  std::uint64_t p_;
};

class QuaternionRing {
public:
  using Elem = Quaternion;

  Elem zero() const { return {Rational(0), Rational(0), Rational(0), Rational(0)}; }
  Elem one() const { return {Rational(1), Rational(0), Rational(0), Rational(0)}; }
  Elem from_int(std::int64_t v) const {
    return {Rational(static_cast<long>(v)), Rational(0), Rational(0), Rational(0)};
  }
  Elem add(const Elem& a, const Elem& b) const {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  Elem sub(const Elem& a, const Elem& b) const {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  Elem mul(const Elem& a, const Elem& b) const {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  Elem neg(const Elem& a) const { return {-a.w, -a.x, -a.y, -a.z}; }
  Elem inv(const Elem& a) const {
    Rational n = a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z;
    if (n == 0) throw ZeroInverse("quaternion inverse of 0");
    return {a.w / n, -a.x / n, -a.y / n, -a.z / n};
  }
  Elem conj(const Elem& a) const { return {a.w, -a.x, -a.y, -a.z}; }
  bool is_zero(const Elem& a) const { return a.w == 0 && a.x == 0 && a.y == 0 && a.z == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  std::uint64_t characteristic() const { return 0; }
  bool char_two() const { return false; }
  std::string str(const Elem& a) const {
    return "[" + rational_str(a.w) + "," + rational_str(a.x) + "," + rational_str(a.y) + "," +
           rational_str(a.z) + "]";
  }
  Elem parse(std::string_view s) const {
    std::string_view t = trim_view(s);
    if (t.empty()) throw ParseError("empty quaternion literal");
    if (t.front() != '[') {
      Rational w = parse_rational(t);
      return {w, Rational(0), Rational(0), Rational(0)};
    }
    if (t.back() != ']') throw ParseError("unterminated quaternion '" + std::string(s) + "'");
    t = t.substr(1, t.size() - 2);
    std::vector<std::string_view> pieces;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = t.find(',', pos);
      if (comma == std::string_view::npos) {
        pieces.push_back(t.substr(pos));
        break;
      }
      pieces.push_back(t.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (pieces.size() != 4)
      throw ParseError("quaternion needs exactly 4 components: '" + std::string(s) + "'");
    return {parse_rational(pieces[0]), parse_rational(pieces[1]), parse_rational(pieces[2]),
            parse_rational(pieces[3])};
  }
  RingDescriptor descriptor() const { return {RingKind::rational_quaternions, 0}; }
  std::string name() const { return "rational_quaternions"; }
};

// ---------------------------------------------------------------------------
// Ring concept: everything matrices and solvers require of a scalar ring.
// ---------------------------------------------------------------------------

template <class R>
concept Ring = requires(const R r, const typename R::Elem a, const typename R::Elem b) {
  typename R::Elem;
  { r.zero() } -> std::same_as<typename R::Elem>;
  { r.one() } -> std::same_as<typename R::Elem>;
  { r.from_int(std::int64_t{}) } -> std::same_as<typename R::Elem>;
  { r.add(a, b) } -> std::same_as<typename R::Elem>;
  { r.sub(a, b) } -> std::same_as<typename R::Elem>;
  { r.mul(a, b) } -> std::same_as<typename R::Elem>;
  { r.neg(a) } -> std::same_as<typename R::Elem>;
  { r.inv(a) } -> std::same_as<typename R::Elem>;
  { r.conj(a) } -> std::same_as<typename R::Elem>;
  { r.is_zero(a) } -> std::same_as<bool>;
  { r.eq(a, b) } -> std::same_as<bool>;
  { r.char_two() } -> std::same_as<bool>;
  { r.characteristic() } -> std::same_as<std::uint64_t>;
  { r.str(a) } -> std::same_as<std::string>;
  { r.parse(std::string_view{}) } -> std::same_as<typename R::Elem>;
  { r.descriptor() } -> std::same_as<RingDescriptor>;
  { r.name() } -> std::same_as<std::string>;
};

static_assert(Ring<RationalRing>);
static_assert(Ring<PrimeField>);
static_assert(Ring<QuaternionRing>);

// ---------------------------------------------------------------------------
// Base-field coordinates: each ring viewed as a module over its base field.
// The two fields are 1-dimensional over themselves; H(Q) is 4-dimensional
// over Q with basis (1, i, j, k). This powers the linearization oracle.
// ---------------------------------------------------------------------------

template <Ring R>
struct ScalarCoords;

template <>
struct ScalarCoords<RationalRing> {
  using Base = RationalRing;
  static constexpr int dim = 1;
  static Base base_ring(const RationalRing& r) { return r; }
  static void to_coords(const RationalRing&, const Rational& a, Rational* out) { out[0] = a; }
  static Rational from_coords(const RationalRing&, const Rational* in) { return in[0]; }
};

template <>
struct ScalarCoords<PrimeField> {
  using Base = PrimeField;
  static constexpr int dim = 1;
  static Base base_ring(const PrimeField& r) { return r; }
  static void to_coords(const PrimeField&, std::uint64_t a, std::uint64_t* out) { out[0] = a; }
  static std::uint64_t from_coords(const PrimeField&, const std::uint64_t* in) { return in[0]; }
};

template <>
struct ScalarCoords<QuaternionRing> {
  using Base = RationalRing;
  static constexpr int dim = 4;
  static Base base_ring(const QuaternionRing&) { return RationalRing{}; }
  static void to_coords(const QuaternionRing&, const Quaternion& a, Rational* out) {
    out[0] = a.w;
    out[1] = a.x;
    out[2] = a.y;
    out[3] = a.z;
  }
  static Quaternion from_coords(const QuaternionRing&, const Rational* in) {
    return {in[0], in[1], in[2], in[3]};
  }
};

}  // namespace dring
