// Randomized instance generation, exhaustive small-field ground truth, and
// fuzz campaigns with persisted counterexamples.
//
// Determinism contract: every generator draws from an explicitly seeded Rng,
// and the campaign derives one independent stream per (check, ring, instance
// index) from the campaign seed, so reruns produce byte-identical reports and
// counterexample files regardless of machine or evaluation order. Wall-clock
// time is measured but never serialized.
#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dring/canon.hpp"
#include "dring/errors.hpp"
#include "dring/json_io.hpp"
#include "dring/matrix.hpp"
#include "dring/scalar.hpp"
#include "dring/sylvester.hpp"

namespace dring {

// ---------------------------------------------------------------------------
// Deterministic random numbers.
// ---------------------------------------------------------------------------

// std::mt19937_64 output is fully specified by the standard; reduction is by
// plain modulo (the slight bias is irrelevant here and keeps the draw count
// per element fixed, which the reproducibility contract relies on).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }
  int range(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

private:
  std::mt19937_64 eng_;
};

// Derives an independent 64-bit stream seed from (campaign seed, stream id,
// instance index) with a splitmix-style finalizer.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = seed;
  z += 0x9E3779B97F4A7C15ull * (stream + 1);
  z += 0xBF58476D1CE4E5B9ull * (index + 1);
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// ---------------------------------------------------------------------------
// Element and matrix generators.
// ---------------------------------------------------------------------------

// Small magnitudes keep exact arithmetic fast: numerators in [-3, 3],
// denominators in {1, 2, 3}.
inline Rational gen_small_rational(Rng& g) {
  Rational q(g.range(-3, 3), g.range(1, 3));
  q.canonicalize();
  return q;
}

inline RationalRing::Elem gen_elem(const RationalRing&, Rng& g) { return gen_small_rational(g); }
inline PrimeField::Elem gen_elem(const PrimeField& F, Rng& g) { return g.below(F.modulus()); }
inline QuaternionRing::Elem gen_elem(const QuaternionRing&, Rng& g) {
  return Quaternion{gen_small_rational(g), gen_small_rational(g), gen_small_rational(g),
                    gen_small_rational(g)};
}

template <Ring R>
Matrix<R> gen_matrix(const R& ring, int rows, int cols, Rng& g) {
  Matrix<R> out(ring, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out.at(i, j) = gen_elem(ring, g);
  return out;
}

template <Ring R>
Matrix<R> gen_nonsingular(const R& ring, int n, Rng& g) {
  for (;;) {
    Matrix<R> cand = gen_matrix(ring, n, n, g);
    if (rank(cand) == n) return cand;
  }
}

// Random H = H*; the diagonal is projected onto its self-conjugate part, so
// the ring must not have characteristic 2.
template <Ring R>
Matrix<R> gen_hermitian(const R& ring, int n, Rng& g) {
  if (ring.char_two()) throw CharacteristicTwo("gen_hermitian over a characteristic-2 ring");
  auto half = ring.inv(ring.from_int(2));
  Matrix<R> out(ring, n, n);
  for (int i = 0; i < n; ++i) {
    auto d = gen_elem(ring, g);
    out.at(i, i) = ring.mul(half, ring.add(d, ring.conj(d)));
    for (int j = i + 1; j < n; ++j) {
      out.at(i, j) = gen_elem(ring, g);
      out.at(j, i) = ring.conj(out.at(i, j));
    }
  }
  return out;
}

template <Ring R>
std::array<Matrix<R>, 4> gen_quaternity(const R& ring, const QuaternityDims& d, Rng& g) {
  return {gen_matrix(ring, d.m, d.p, g), gen_matrix(ring, d.m, d.q, g),
          gen_matrix(ring, d.s, d.p, g), gen_matrix(ring, d.t, d.p, g)};
}

template <Ring R>
std::array<Matrix<R>, 4> gen_dual_array(const R& ring, const DualDims& d, Rng& g) {
  return {gen_matrix(ring, d.p1, d.m1, g), gen_matrix(ring, d.p1, d.s1, g),
          gen_matrix(ring, d.p1, d.t1, g), gen_matrix(ring, d.q1, d.m1, g)};
}

// ---------------------------------------------------------------------------
// System-instance generators.
// ---------------------------------------------------------------------------

struct DimBounds {
  int m = 3, p = 3, q = 3, s = 3, t = 3;
  int p1 = 3, q1 = 3, s1 = 3, t1 = 3, m1 = 3;
  static DimBounds uniform(int b) { return {b, b, b, b, b, b, b, b, b, b}; }
};

inline SystemDims gen_system_dims(SystemKind k, const DimBounds& b, Rng& g) {
  SystemDims d;
  d.m = g.range(0, b.m);
  d.p = g.range(0, b.p);
  d.q = g.range(0, b.q);
  d.s = g.range(0, b.s);
  d.t = g.range(0, b.t);
  if (!is_hermitian_kind(k)) {
    d.p1 = g.range(0, b.p1);
    d.q1 = g.range(0, b.q1);
    d.s1 = g.range(0, b.s1);
    d.t1 = g.range(0, b.t1);
    d.m1 = g.range(0, b.m1);
  }
  if (k == SystemKind::classical_triple) {
    d.q = 0;
    d.q1 = 0;
  }
  return d;
}

// Coefficient matrices of the kind's template with zero right-hand sides.
template <Ring R>
SystemInstance<R> gen_coefficients(SystemKind k, const R& ring, const SystemDims& d, Rng& g) {
  SystemInstance<R> inst(ring, k);
  inst.A = gen_matrix(ring, d.m, d.p, g);
  inst.B = gen_matrix(ring, d.m, d.q, g);
  inst.C = gen_matrix(ring, d.s, d.p, g);
  switch (k) {
    case SystemKind::two_unknown:
    case SystemKind::three_unknown:
    case SystemKind::classical_triple:
      inst.D = gen_matrix(ring, d.t, d.p, g);
      inst.E = gen_matrix(ring, d.p1, d.m1, g);
      inst.F = gen_matrix(ring, d.p1, d.s1, g);
      inst.G = gen_matrix(ring, d.p1, d.t1, g);
      inst.H = gen_matrix(ring, d.q1, d.m1, g);
      inst.Phi = zeros(ring, d.m, d.m1);
      inst.Psi = zeros(ring, d.s, d.s1);
      inst.Omega = zeros(ring, d.t, d.t1);
      break;
    case SystemKind::hermitian_3_4:
    case SystemKind::hermitian_3_7:
      inst.D = gen_matrix(ring, d.t, d.p, g);
      inst.Phi = zeros(ring, d.m, d.m);
      inst.Psi = zeros(ring, d.s, d.s);
      inst.Omega = zeros(ring, d.t, d.t);
      break;
    case SystemKind::hermitian_3_5:
    case SystemKind::hermitian_3_8:
      inst.D = gen_matrix(ring, d.p, d.t, g);
      inst.Phi = zeros(ring, d.m, d.m);
      inst.Omega = zeros(ring, d.s, d.t);
      break;
  }
  return inst;
}

// Arbitrary right-hand sides of the template's shapes (Hermitian where the
// kind demands it for well-formedness). Usually inconsistent.
template <Ring R>
SystemInstance<R> gen_instance(SystemKind k, const R& ring, const SystemDims& d, Rng& g) {
  SystemInstance<R> inst = gen_coefficients(k, ring, d, g);
  switch (k) {
    case SystemKind::two_unknown:
    case SystemKind::three_unknown:
    case SystemKind::classical_triple:
      inst.Phi = gen_matrix(ring, d.m, d.m1, g);
      inst.Psi = gen_matrix(ring, d.s, d.s1, g);
      inst.Omega = gen_matrix(ring, d.t, d.t1, g);
      break;
    case SystemKind::hermitian_3_4:
    case SystemKind::hermitian_3_7:
      inst.Phi = gen_hermitian(ring, d.m, g);
      inst.Psi = gen_hermitian(ring, d.s, g);
      inst.Omega = gen_hermitian(ring, d.t, g);
      break;
    case SystemKind::hermitian_3_5:
    case SystemKind::hermitian_3_8:
      inst.Phi = gen_hermitian(ring, d.m, g);
      inst.Omega = gen_matrix(ring, d.s, d.t, g);
      break;
  }
  return inst;
}

// Samples the unknowns first (Hermitian-symmetrized where the kind demands)
// and computes the right-hand sides by substitution, so the instance is
// solvable by construction.
template <Ring R>
SystemInstance<R> gen_solvable_instance(SystemKind k, const R& ring, const SystemDims& d, Rng& g) {
  SystemInstance<R> inst = gen_coefficients(k, ring, d, g);
  std::vector<Matrix<R>> vals;
  for (const auto& sp : unknown_specs(inst))
    vals.push_back(sp.hermitian ? gen_hermitian(ring, sp.rows, g)
                                : gen_matrix(ring, sp.rows, sp.cols, g));
  auto st = [](const Matrix<R>& x) { return conjugate_transpose(x); };
  switch (k) {
    case SystemKind::two_unknown:
    case SystemKind::classical_triple:
      inst.Phi = add(mul(mul(inst.A, vals[0]), inst.E), mul(mul(inst.B, vals[1]), inst.H));
      inst.Psi = mul(mul(inst.C, vals[0]), inst.F);
      inst.Omega = mul(mul(inst.D, vals[0]), inst.G);
      break;
    case SystemKind::three_unknown:
      inst.Phi =
          add(add(mul(mul(inst.A, vals[0]), inst.E), mul(inst.B, vals[1])), mul(vals[2], inst.H));
      inst.Psi = mul(mul(inst.C, vals[0]), inst.F);
      inst.Omega = mul(mul(inst.D, vals[0]), inst.G);
      break;
    case SystemKind::hermitian_3_4:
      inst.Phi = add(mul(mul(inst.A, vals[0]), st(inst.A)), mul(mul(inst.B, vals[1]), st(inst.B)));
      inst.Psi = mul(mul(inst.C, vals[0]), st(inst.C));
      inst.Omega = mul(mul(inst.D, vals[0]), st(inst.D));
      break;
    case SystemKind::hermitian_3_5:
      inst.Phi = add(mul(mul(inst.A, vals[0]), st(inst.A)), mul(mul(inst.B, vals[1]), st(inst.B)));
      inst.Omega = mul(mul(inst.C, vals[0]), inst.D);
      break;
    case SystemKind::hermitian_3_7: {
      Matrix<R> by = mul(inst.B, vals[1]);
      inst.Phi = add(mul(mul(inst.A, vals[0]), st(inst.A)), add(by, st(by)));
      inst.Psi = mul(mul(inst.C, vals[0]), st(inst.C));
      inst.Omega = mul(mul(inst.D, vals[0]), st(inst.D));
      break;
    }
    case SystemKind::hermitian_3_8: {
      Matrix<R> by = mul(inst.B, vals[1]);
      inst.Phi = add(mul(mul(inst.A, vals[0]), st(inst.A)), add(by, st(by)));
      inst.Omega = mul(mul(inst.C, vals[0]), inst.D);
      break;
    }
  }
  if (!satisfies(inst, vals))
    throw InternalInconsistency("gen_solvable_instance produced an unsatisfied instance");
  return inst;
}

// ---------------------------------------------------------------------------
// Exhaustive ground truth over small prime fields.
// ---------------------------------------------------------------------------

namespace detail {
inline int independent_entries(const std::vector<UnknownSpec>& specs) {
  int total = 0;
  for (const auto& sp : specs)
    total += sp.hermitian ? sp.rows * (sp.rows + 1) / 2 : sp.rows * sp.cols;
  return total;
}
}  // namespace detail

// Enumerates every assignment of the unknowns (independent entries only for
// Hermitian unknowns) and reports whether any satisfies all equations.
inline bool exhaustive_solvability(const SystemInstance<PrimeField>& inst) {
  auto specs = unknown_specs(inst);
  const PrimeField& F = inst.A.ring();
  std::uint64_t p = F.modulus();
  if (p > 3)
    throw TooLarge("exhaustive enumeration requires p <= 3, got p = " + std::to_string(p));
  int total = detail::independent_entries(specs);
  if (total > 16)
    throw TooLarge("exhaustive enumeration requires at most 16 unknown entries, got " +
                   std::to_string(total));
  std::vector<Matrix<PrimeField>> vals;
  for (const auto& sp : specs) vals.emplace_back(F, sp.rows, sp.cols);
  std::vector<std::uint64_t> digits(static_cast<std::size_t>(total), 0);
  for (;;) {
    int d = 0;
    for (std::size_t u = 0; u < specs.size(); ++u) {
      const auto& sp = specs[u];
      Matrix<PrimeField>& M = vals[u];
      if (sp.hermitian) {
        for (int i = 0; i < sp.rows; ++i)
          for (int j = i; j < sp.cols; ++j) {
            M.at(i, j) = digits[d];
            M.at(j, i) = F.conj(digits[d]);
            ++d;
          }
      } else {
        for (int i = 0; i < sp.rows; ++i)
          for (int j = 0; j < sp.cols; ++j) M.at(i, j) = digits[d++];
      }
    }
    if (satisfies(inst, vals)) return true;
    int k = 0;
    while (k < total && ++digits[k] == p) digits[k++] = 0;
    if (k == total) return false;
  }
}

// Whether the enumeration both meets the hard precondition and is cheap
// enough to use as a differential check inside a campaign (at most `work_cap`
// assignments).
inline bool enumeration_in_bounds(const SystemInstance<PrimeField>& inst,
                                  std::uint64_t work_cap = std::uint64_t{1} << 16) {
  const PrimeField& F = inst.A.ring();
  if (F.modulus() > 3) return false;
  int total = detail::independent_entries(unknown_specs(inst));
  if (total > 16) return false;
  std::uint64_t work = 1;
  for (int i = 0; i < total; ++i) {
    work *= F.modulus();
    if (work > work_cap) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Campaigns.
// ---------------------------------------------------------------------------

struct CampaignConfig {
  std::uint64_t seed = 0;
  std::vector<RingDescriptor> rings;
  DimBounds dim_bounds;
  int instance_count = 1;
  // "consistency", "decomposition", or a system kind name.
  std::vector<std::string> kinds;
};

struct CampaignTally {
  std::string kind;
  std::string ring;
  int pass = 0;
  int fail = 0;
};

struct CampaignReport {
  std::vector<CampaignTally> tallies;
  std::vector<std::string> counterexamples;  // file paths, in generation order
  double wall_seconds = 0.0;                 // never serialized
};

inline std::string ring_file_tag(const RingDescriptor& d) {
  switch (d.kind) {
    case RingKind::rationals: return "rationals";
    case RingKind::prime_field: return "gf" + std::to_string(d.modulus);
    case RingKind::rational_quaternions: return "quaternions";
  }
  throw InternalInconsistency("unknown ring kind");
}

inline bool is_campaign_kind(const std::string& name) {
  if (name == "consistency" || name == "decomposition") return true;
  for (SystemKind k : all_system_kinds())
    if (name == system_kind_name(k)) return true;
  return false;
}

inline ojson dim_bounds_to_json(const DimBounds& b) {
  ojson j = ojson::object();
  j["m"] = b.m;
  j["p"] = b.p;
  j["q"] = b.q;
  j["s"] = b.s;
  j["t"] = b.t;
  j["p1"] = b.p1;
  j["q1"] = b.q1;
  j["s1"] = b.s1;
  j["t1"] = b.t1;
  j["m1"] = b.m1;
  return j;
}

inline DimBounds dim_bounds_from_json(const ojson& j, const std::string& ctx) {
  if (j.is_number_integer()) {
    std::int64_t b = j.get<std::int64_t>();
    if (b < 0 || b > 64) throw ParseError(ctx + ": dimension bound out of range");
    return DimBounds::uniform(static_cast<int>(b));
  }
  if (!j.is_object()) throw ParseError(ctx + ": expected an integer or an object");
  DimBounds b;
  auto read = [&](const char* key, int& slot) {
    if (!j.contains(key)) return;
    const ojson& v = j.at(key);
    if (!v.is_number_integer())
      throw ParseError(ctx + ": \"" + key + "\" must be an integer");
    std::int64_t n = v.get<std::int64_t>();
    if (n < 0 || n > 64) throw ParseError(ctx + ": \"" + key + "\" out of range");
    slot = static_cast<int>(n);
  };
  read("m", b.m);
  read("p", b.p);
  read("q", b.q);
  read("s", b.s);
  read("t", b.t);
  read("p1", b.p1);
  read("q1", b.q1);
  read("s1", b.s1);
  read("t1", b.t1);
  read("m1", b.m1);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    static const char* known[] = {"m", "p", "q", "s", "t", "p1", "q1", "s1", "t1", "m1"};
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ParseError(ctx + ": unknown dimension \"" + key + "\"");
  }
  return b;
}

inline ojson campaign_config_to_json(const CampaignConfig& c) {
  ojson j = ojson::object();
  j["seed"] = c.seed;
  ojson rings = ojson::array();
  for (const RingDescriptor& d : c.rings) {
    ojson r = ojson::object();
    write_ring_fields(r, d);
    rings.push_back(std::move(r));
  }
  j["rings"] = std::move(rings);
  j["dim_bounds"] = dim_bounds_to_json(c.dim_bounds);
  j["instance_count"] = c.instance_count;
  j["kinds"] = c.kinds;
  return j;
}

inline CampaignConfig campaign_config_from_json(const ojson& j, const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": expected a JSON object");
  CampaignConfig c;
  if (!j.contains("seed")) throw ParseError(ctx + ": missing \"seed\" field");
  if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned())
    throw ParseError(ctx + ": \"seed\" must be an integer");
  if (j.at("seed").is_number_unsigned())
    c.seed = j.at("seed").get<std::uint64_t>();
  else {
    std::int64_t s = j.at("seed").get<std::int64_t>();
    if (s < 0) throw ParseError(ctx + ": \"seed\" must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (!j.contains("rings")) throw ParseError(ctx + ": missing \"rings\" field");
  if (!j.at("rings").is_array()) throw ParseError(ctx + ": \"rings\" must be an array");
  for (std::size_t i = 0; i < j.at("rings").size(); ++i)
    c.rings.push_back(
        read_ring_fields(j.at("rings")[i], ctx + ".rings[" + std::to_string(i) + "]"));
  if (j.contains("dim_bounds"))
    c.dim_bounds = dim_bounds_from_json(j.at("dim_bounds"), ctx + ".dim_bounds");
  if (!j.contains("instance_count")) throw ParseError(ctx + ": missing \"instance_count\" field");
  if (!j.at("instance_count").is_number_integer())
    throw ParseError(ctx + ": \"instance_count\" must be an integer");
  std::int64_t n = j.at("instance_count").get<std::int64_t>();
  if (n < 1) throw ParseError(ctx + ": \"instance_count\" must be at least 1");
  if (n > 1000000) throw ParseError(ctx + ": \"instance_count\" is implausibly large");
  c.instance_count = static_cast<int>(n);
  if (!j.contains("kinds")) throw ParseError(ctx + ": missing \"kinds\" field");
  if (!j.at("kinds").is_array()) throw ParseError(ctx + ": \"kinds\" must be an array");
  for (const ojson& k : j.at("kinds")) {
    if (!k.is_string()) throw ParseError(ctx + ": \"kinds\" entries must be strings");
    std::string name = k.get<std::string>();
    if (!is_campaign_kind(name))
      throw ParseError(ctx + ": unknown check kind \"" + name +
                       "\" (expected consistency, decomposition, or a system kind)");
    c.kinds.push_back(std::move(name));
  }
  return c;
}

inline ojson campaign_report_to_json(const CampaignReport& r) {
  ojson j = ojson::object();
  ojson tallies = ojson::array();
  for (const auto& t : r.tallies) {
    ojson e = ojson::object();
    e["kind"] = t.kind;
    e["ring"] = t.ring;
    e["pass"] = t.pass;
    e["fail"] = t.fail;
    tallies.push_back(std::move(e));
  }
  j["tallies"] = std::move(tallies);
  j["counterexamples"] = r.counterexamples;
  return j;
}

namespace detail {

// One consistency check: random quaternity, recomputed-rank identity report.
template <Ring R>
bool campaign_consistency_step(const R& ring, const DimBounds& b, Rng& g, ojson& failure) {
  QuaternityDims qd{g.range(0, b.m), g.range(0, b.p), g.range(0, b.q), g.range(0, b.s),
                    g.range(0, b.t)};
  auto [A, B, C, D] = gen_quaternity(ring, qd, g);
  auto inv = quaternity_invariants(A, B, C, D);
  auto rep = verify_consistency(A, B, C, D, inv);
  if (rep.all_ok) return true;
  failure = ojson::object();
  failure["kind"] = "consistency";
  failure["quaternity"] = quaternity_to_json(A, B, C, D);
  failure["invariants"] = invariants_to_json(inv);
  failure["report"] = consistency_to_json(rep);
  return false;
}

// One decomposition check: quaternity and dual certificates, both verified
// against their defining products and invertibility probes.
template <Ring R>
bool campaign_decomposition_step(const R& ring, const DimBounds& b, Rng& g, ojson& failure) {
  QuaternityDims qd{g.range(0, b.m), g.range(0, b.p), g.range(0, b.q), g.range(0, b.s),
                    g.range(0, b.t)};
  auto [A, B, C, D] = gen_quaternity(ring, qd, g);
  std::string note;
  try {
    auto dec = decompose_quaternity(A, B, C, D);
    bool ok = matrix_eq(mul(mul(dec.M, A), dec.P), dec.canonical.S_a) &&
              matrix_eq(mul(mul(dec.M, B), dec.Q), dec.canonical.S_b) &&
              matrix_eq(mul(mul(dec.S, C), dec.P), dec.canonical.S_c) &&
              matrix_eq(mul(mul(dec.T, D), dec.P), dec.canonical.S_d);
    for (const Matrix<R>* tr : {&dec.M, &dec.P, &dec.Q, &dec.S, &dec.T})
      ok = ok && matrix_eq(mul(invert_matrix(*tr), *tr), identity(ring, tr->rows()));
    if (!ok) note = "certificate products or invertibility probes failed";
  } catch (const Error& e) {
    note = e.what();
  }
  if (note.empty()) {
    DualDims dd{g.range(0, b.p1), g.range(0, b.q1), g.range(0, b.s1), g.range(0, b.t1),
                g.range(0, b.m1)};
    auto [E, F, G, H] = gen_dual_array(ring, dd, g);
    try {
      auto dec = decompose_dual(E, F, G, H);
      bool ok = matrix_eq(mul(mul(dec.P1, E), dec.M1), dec.canonical.S_e) &&
                matrix_eq(mul(mul(dec.P1, F), dec.S1), dec.canonical.S_f) &&
                matrix_eq(mul(mul(dec.P1, G), dec.T1), dec.canonical.S_g) &&
                matrix_eq(mul(mul(dec.Q1, H), dec.M1), dec.canonical.S_h);
      for (const Matrix<R>* tr : {&dec.M1, &dec.P1, &dec.Q1, &dec.S1, &dec.T1})
        ok = ok && matrix_eq(mul(invert_matrix(*tr), *tr), identity(ring, tr->rows()));
      if (!ok) note = "dual certificate products or invertibility probes failed";
    } catch (const Error& e) {
      note = e.what();
    }
    if (!note.empty()) {
      failure = ojson::object();
      failure["kind"] = "decomposition";
      ojson arr = ojson::object();
      arr["E"] = matrix_to_json(E);
      arr["F"] = matrix_to_json(F);
      arr["G"] = matrix_to_json(G);
      arr["H"] = matrix_to_json(H);
      failure["dual_array"] = std::move(arr);
      failure["note"] = note;
      return false;
    }
    return true;
  }
  failure = ojson::object();
  failure["kind"] = "decomposition";
  failure["quaternity"] = quaternity_to_json(A, B, C, D);
  failure["note"] = note;
  return false;
}

// One solvability check: alternate constructed-solvable and arbitrary
// right-hand sides; cross-check checker vs. oracle, and, where the
// enumeration is in bounds over a small prime field, against ground truth.
template <Ring R>
bool campaign_solvability_step(SystemKind k, const R& ring, const DimBounds& b, int index, Rng& g,
                               ojson& failure) {
  SystemDims d = gen_system_dims(k, b, g);
  bool constructed = index % 2 == 0;
  SystemInstance<R> inst =
      constructed ? gen_solvable_instance(k, ring, d, g) : gen_instance(k, ring, d, g);
  AgreementRecord<R> rec = cross_check(inst);
  bool ok = rec.agree;
  if (constructed) ok = ok && rec.checker.verdict && rec.oracle_feasible;
  ojson enumeration = nullptr;
  if constexpr (std::is_same_v<R, PrimeField>) {
    if (enumeration_in_bounds(inst)) {
      bool truth = exhaustive_solvability(inst);
      enumeration = truth;
      ok = ok && truth == rec.oracle_feasible && truth == rec.checker.verdict;
    }
  }
  if (ok) return true;
  failure = ojson::object();
  failure["kind"] = system_kind_name(k);
  failure["constructed_solvable"] = constructed;
  failure["instance"] = instance_to_json(inst);
  failure["agreement"] = agreement_to_json(rec);
  failure["enumeration"] = enumeration;
  return false;
}

}  // namespace detail

// Runs every configured check over every configured ring. Each failing
// instance is persisted to `out_dir` as one JSON file named by check kind,
// ring, campaign seed, and instance index; the report lists the files and the
// per-combination tallies. Hermitian kinds are skipped over GF(2).
inline CampaignReport run_campaign(const CampaignConfig& cfg, const std::string& out_dir) {
  auto t0 = std::chrono::steady_clock::now();
  CampaignReport rep;
  std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
  std::filesystem::create_directories(dir);
  for (std::size_t ki = 0; ki < cfg.kinds.size(); ++ki) {
    const std::string& kind_name = cfg.kinds[ki];
    if (!is_campaign_kind(kind_name))
      throw ParseError("unknown check kind \"" + kind_name + "\"");
    bool is_system = kind_name != "consistency" && kind_name != "decomposition";
    for (std::size_t ri = 0; ri < cfg.rings.size(); ++ri) {
      const RingDescriptor& rd = cfg.rings[ri];
      if (is_system && is_hermitian_kind(system_kind_from_name(kind_name)) &&
          rd.kind == RingKind::prime_field && rd.modulus == 2)
        continue;  // characteristic 2 is outside the Hermitian theorems
      CampaignTally row{kind_name, ring_file_tag(rd), 0, 0};
      AnyRing ar = make_ring(rd);
      std::visit(
          [&](const auto& ring) {
            for (int idx = 0; idx < cfg.instance_count; ++idx) {
              Rng g(mix_seed(cfg.seed, (static_cast<std::uint64_t>(ki) << 20) + ri,
                             static_cast<std::uint64_t>(idx)));
              ojson failure;
              bool ok;
              if (kind_name == "consistency")
                ok = detail::campaign_consistency_step(ring, cfg.dim_bounds, g, failure);
              else if (kind_name == "decomposition")
                ok = detail::campaign_decomposition_step(ring, cfg.dim_bounds, g, failure);
              else
                ok = detail::campaign_solvability_step(system_kind_from_name(kind_name), ring,
                                                       cfg.dim_bounds, idx, g, failure);
              if (ok) {
                ++row.pass;
                continue;
              }
              ++row.fail;
              failure["seed"] = cfg.seed;
              failure["index"] = idx;
              std::filesystem::path file =
                  dir / ("cex_" + kind_name + "_" + ring_file_tag(rd) + "_" +
                         std::to_string(cfg.seed) + "_" + std::to_string(idx) + ".json");
              std::ofstream out(file);
              out << failure.dump(2) << "\n";
              rep.counterexamples.push_back(file.string());
            }
          },
          ar);
      rep.tallies.push_back(std::move(row));
    }
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace dring
