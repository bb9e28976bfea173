// JSON interchange for matrices, quaternities, invariants, decomposition
// certificates, equation-system instances, and reports.
//
// Every document is self-describing: a "ring" field ("rationals",
// "prime_field", "rational_quaternions") plus "p" for prime fields. Entry
// encodings follow the scalar text forms: rationals as strings "num/den"
// (denominator omitted when 1), prime-field residues as decimal numbers,
// quaternions as arrays of four rational strings [w, x, y, z]. Writing always
// emits canonical forms, so write -> read -> write is byte-stable.
//
// Output key order is fixed (nlohmann::ordered_json preserves insertion
// order); reports generated from the same inputs serialize identically.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "dring/canon.hpp"
#include "dring/errors.hpp"
#include "dring/matrix.hpp"
#include "dring/scalar.hpp"
#include "dring/sylvester.hpp"

namespace dring {

using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Rings.
// ---------------------------------------------------------------------------

using AnyRing = std::variant<RationalRing, PrimeField, QuaternionRing>;

inline AnyRing make_ring(const RingDescriptor& d) {
  switch (d.kind) {
    case RingKind::rationals: return RationalRing{};
    case RingKind::prime_field: return PrimeField(d.modulus);
    case RingKind::rational_quaternions: return QuaternionRing{};
  }
  throw InternalInconsistency("unknown ring kind");
}

inline void write_ring_fields(ojson& j, const RingDescriptor& d) {
  j["ring"] = ring_kind_name(d.kind);
  if (d.kind == RingKind::prime_field) j["p"] = d.modulus;
}

inline RingDescriptor read_ring_fields(const ojson& j, const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": expected a JSON object");
  if (!j.contains("ring")) throw ParseError(ctx + ": missing \"ring\" field");
  if (!j.at("ring").is_string()) throw ParseError(ctx + ": \"ring\" must be a string");
  RingDescriptor d;
  d.kind = ring_kind_from_name(j.at("ring").get<std::string>());
  if (d.kind == RingKind::prime_field) {
    if (!j.contains("p")) throw ParseError(ctx + ": missing \"p\" field for a prime field");
    const ojson& p = j.at("p");
    if (p.is_number_unsigned()) {
      d.modulus = p.get<std::uint64_t>();
    } else if (p.is_number_integer()) {
      std::int64_t v = p.get<std::int64_t>();
      if (v <= 0) throw ParseError(ctx + ": \"p\" must be a positive integer");
      d.modulus = static_cast<std::uint64_t>(v);
    } else {
      throw ParseError(ctx + ": \"p\" must be an integer");
    }
  }
  return d;
}

// Parses a whole JSON text; malformed input becomes ParseError, never a crash.
inline ojson parse_json_text(const std::string& text, const std::string& ctx) {
  ojson j = ojson::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError(ctx + ": malformed JSON");
  return j;
}

// ---------------------------------------------------------------------------
// Scalar entries.
// ---------------------------------------------------------------------------

inline ojson entry_to_json(const RationalRing& ring, const Rational& a) { return ring.str(a); }
inline ojson entry_to_json(const PrimeField&, PrimeField::Elem a) { return a; }
inline ojson entry_to_json(const QuaternionRing&, const Quaternion& a) {
  return ojson::array(
      {rational_str(a.w), rational_str(a.x), rational_str(a.y), rational_str(a.z)});
}

inline Rational entry_from_json(const RationalRing& ring, const ojson& e, const std::string& ctx) {
  if (e.is_string()) return ring.parse(e.get<std::string>());
  if (e.is_number_integer()) return Rational(static_cast<long>(e.get<std::int64_t>()));
  throw ParseError(ctx + ": rational entries are strings like \"-5/2\" or integers");
}

inline PrimeField::Elem entry_from_json(const PrimeField& ring, const ojson& e,
                                        const std::string& ctx) {
  std::uint64_t p = ring.modulus();
  if (e.is_number_unsigned()) return e.get<std::uint64_t>() % p;
  if (e.is_number_integer()) {
    std::int64_t v = e.get<std::int64_t>();
    std::int64_t r = v % static_cast<std::int64_t>(p);
    if (r < 0) r += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(r);
  }
  if (e.is_string()) return ring.parse(e.get<std::string>());
  throw ParseError(ctx + ": prime-field entries are decimal numbers");
}

inline Quaternion entry_from_json(const QuaternionRing& ring, const ojson& e,
                                  const std::string& ctx) {
  if (e.is_string()) return ring.parse(e.get<std::string>());
  if (e.is_number_integer())
    return Quaternion{Rational(static_cast<long>(e.get<std::int64_t>())), Rational(0), Rational(0),
                      Rational(0)};
  if (e.is_array()) {
    if (e.size() != 4)
      throw ParseError(ctx + ": quaternion entries are arrays of exactly 4 components");
    Rational c[4];
    for (int k = 0; k < 4; ++k) {
      const ojson& comp = e[static_cast<std::size_t>(k)];
      if (comp.is_string())
        c[k] = parse_rational(comp.get<std::string>());
      else if (comp.is_number_integer())
        c[k] = Rational(static_cast<long>(comp.get<std::int64_t>()));
      else
        throw ParseError(ctx + ": quaternion components are rational strings or integers");
    }
    return Quaternion{c[0], c[1], c[2], c[3]};
  }
  throw ParseError(ctx + ": quaternion entries are arrays [w, x, y, z]");
}

// ---------------------------------------------------------------------------
// Matrices.
// ---------------------------------------------------------------------------

template <Ring R>
ojson matrix_to_json(const Matrix<R>& a) {
  ojson j = ojson::object();
  write_ring_fields(j, a.ring().descriptor());
  j["rows"] = a.rows();
  j["cols"] = a.cols();
  ojson data = ojson::array();
  for (int i = 0; i < a.rows(); ++i) {
    ojson row = ojson::array();
    for (int k = 0; k < a.cols(); ++k) row.push_back(entry_to_json(a.ring(), a.at(i, k)));
    data.push_back(std::move(row));
  }
  j["data"] = std::move(data);
  return j;
}

namespace detail {
inline int read_dim(const ojson& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw ParseError(ctx + ": missing \"" + key + "\" field");
  const ojson& v = j.at(key);
  if (!v.is_number_integer()) throw ParseError(ctx + ": \"" + key + "\" must be an integer");
  std::int64_t n = v.get<std::int64_t>();
  if (n < 0) throw ParseError(ctx + ": \"" + key + "\" must be nonnegative");
  if (n > 4096) throw ParseError(ctx + ": \"" + key + "\" is implausibly large");
  return static_cast<int>(n);
}
}  // namespace detail

// Reads a matrix object over a known ring. A "ring" field inside the object,
// when present, must agree with the given ring.
template <Ring R>
Matrix<R> matrix_from_json(const R& ring, const ojson& j, const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": expected a matrix object");
  if (j.contains("ring")) {
    RingDescriptor d = read_ring_fields(j, ctx);
    if (!(d == ring.descriptor()))
      throw ParseError(ctx + ": \"ring\" disagrees with the enclosing document");
  }
  int rows = detail::read_dim(j, "rows", ctx);
  int cols = detail::read_dim(j, "cols", ctx);
  if (!j.contains("data")) throw ParseError(ctx + ": missing \"data\" field");
  const ojson& data = j.at("data");
  if (!data.is_array()) throw ParseError(ctx + ": \"data\" must be an array of rows");
  if (static_cast<int>(data.size()) != rows)
    throw ParseError(ctx + ": \"data\" has " + std::to_string(data.size()) +
                     " rows, header says " + std::to_string(rows));
  Matrix<R> out(ring, rows, cols);
  for (int i = 0; i < rows; ++i) {
    const ojson& row = data[static_cast<std::size_t>(i)];
    if (!row.is_array())
      throw ParseError(ctx + ".data[" + std::to_string(i) + "]: expected an array");
    if (static_cast<int>(row.size()) != cols)
      throw ParseError(ctx + ".data[" + std::to_string(i) + "]: has " +
                       std::to_string(row.size()) + " entries, header says " +
                       std::to_string(cols));
    for (int k = 0; k < cols; ++k)
      out.at(i, k) = entry_from_json(
          ring, row[static_cast<std::size_t>(k)],
          ctx + ".data[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  }
  return out;
}

// Ring of a document: an explicit top-level "ring" field, or the first listed
// fallback key whose matrix object carries one.
inline RingDescriptor document_ring(const ojson& j, std::initializer_list<const char*> fallbacks,
                                    const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": expected a JSON object");
  if (j.contains("ring")) return read_ring_fields(j, ctx);
  for (const char* key : fallbacks)
    if (j.contains(key) && j.at(key).is_object() && j.at(key).contains("ring"))
      return read_ring_fields(j.at(key), ctx + "." + key);
  throw ParseError(ctx + ": no \"ring\" field found");
}

// ---------------------------------------------------------------------------
// Quaternities and dual arrays.
// ---------------------------------------------------------------------------

template <Ring R>
ojson quaternity_to_json(const Matrix<R>& A, const Matrix<R>& B, const Matrix<R>& C,
                         const Matrix<R>& D) {
  ojson j = ojson::object();
  j["A"] = matrix_to_json(A);
  j["B"] = matrix_to_json(B);
  j["C"] = matrix_to_json(C);
  j["D"] = matrix_to_json(D);
  return j;
}

template <Ring R>
std::array<Matrix<R>, 4> four_matrices_from_json(const R& ring, const ojson& j,
                                                 const std::array<const char*, 4>& keys,
                                                 const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": expected a JSON object");
  for (const char* key : keys)
    if (!j.contains(key)) throw ParseError(ctx + ": missing matrix \"" + key + "\"");
  return {matrix_from_json(ring, j.at(keys[0]), ctx + "." + keys[0]),
          matrix_from_json(ring, j.at(keys[1]), ctx + "." + keys[1]),
          matrix_from_json(ring, j.at(keys[2]), ctx + "." + keys[2]),
          matrix_from_json(ring, j.at(keys[3]), ctx + "." + keys[3])};
}

template <Ring R>
std::array<Matrix<R>, 4> quaternity_from_json(const R& ring, const ojson& j,
                                              const std::string& ctx) {
  return four_matrices_from_json(ring, j, {"A", "B", "C", "D"}, ctx);
}

template <Ring R>
std::array<Matrix<R>, 4> dual_array_from_json(const R& ring, const ojson& j,
                                              const std::string& ctx) {
  return four_matrices_from_json(ring, j, {"E", "F", "G", "H"}, ctx);
}

// ---------------------------------------------------------------------------
// Invariants, consistency reports, certificates.
// ---------------------------------------------------------------------------

inline ojson invariants_to_json(const QuaternityInvariants& inv) {
  ojson j = ojson::object();
  for (const auto& [name, value] : inv.named_values()) j[name] = value;
  j["dims"] = {inv.dims.m, inv.dims.p, inv.dims.q, inv.dims.s, inv.dims.t};
  return j;
}

inline ojson dual_invariants_to_json(const DualInvariants& inv) {
  ojson j = ojson::object();
  for (const auto& [name, value] : inv.named_values()) j[name] = value;
  j["dims"] = {inv.dims.p1, inv.dims.q1, inv.dims.s1, inv.dims.t1, inv.dims.m1};
  return j;
}

inline ojson consistency_to_json(const ConsistencyReport& rep) {
  ojson j = ojson::object();
  j["all_ok"] = rep.all_ok;
  ojson checks = ojson::array();
  for (const auto& c : rep.checks) {
    ojson e = ojson::object();
    e["label"] = c.label;
    e["lhs"] = c.lhs;
    e["rhs"] = c.rhs;
    e["ok"] = c.ok;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j;
}

template <Ring R>
ojson decomposition_to_json(const QuaternityDecomposition<R>& dec) {
  ojson j = ojson::object();
  j["invariants"] = invariants_to_json(dec.inv);
  j["M"] = matrix_to_json(dec.M);
  j["P"] = matrix_to_json(dec.P);
  j["Q"] = matrix_to_json(dec.Q);
  j["S"] = matrix_to_json(dec.S);
  j["T"] = matrix_to_json(dec.T);
  j["S_a"] = matrix_to_json(dec.canonical.S_a);
  j["S_b"] = matrix_to_json(dec.canonical.S_b);
  j["S_c"] = matrix_to_json(dec.canonical.S_c);
  j["S_d"] = matrix_to_json(dec.canonical.S_d);
  return j;
}

template <Ring R>
ojson dual_decomposition_to_json(const DualDecomposition<R>& dec) {
  ojson j = ojson::object();
  j["invariants"] = dual_invariants_to_json(dec.inv);
  j["M1"] = matrix_to_json(dec.M1);
  j["P1"] = matrix_to_json(dec.P1);
  j["Q1"] = matrix_to_json(dec.Q1);
  j["S1"] = matrix_to_json(dec.S1);
  j["T1"] = matrix_to_json(dec.T1);
  j["S_e"] = matrix_to_json(dec.canonical.S_e);
  j["S_f"] = matrix_to_json(dec.canonical.S_f);
  j["S_g"] = matrix_to_json(dec.canonical.S_g);
  j["S_h"] = matrix_to_json(dec.canonical.S_h);
  return j;
}

// ---------------------------------------------------------------------------
// Equation-system instances.
// ---------------------------------------------------------------------------

namespace detail {

// The eleven instance slots, with the Greek aliases accepted on input for the
// right-hand sides (ASCII names are what gets written).
struct SlotName {
  const char* ascii;
  const char* alias;  // UTF-8 Greek alias or nullptr
};
inline const std::array<SlotName, 11>& instance_slots() {
  static const std::array<SlotName, 11> slots = {{{"A", nullptr},
                                                  {"B", nullptr},
                                                  {"C", nullptr},
                                                  {"D", nullptr},
                                                  {"E", nullptr},
                                                  {"F", nullptr},
                                                  {"G", nullptr},
                                                  {"H", nullptr},
                                                  {"Phi", "\xCE\xA6"},
                                                  {"Psi", "\xCE\xA8"},
                                                  {"Omega", "\xCE\xA9"}}};
  return slots;
}

}  // namespace detail

// Which slots an instance of this kind uses (everything else must be empty).
inline std::vector<std::string> used_slots(SystemKind k) {
  switch (k) {
    case SystemKind::two_unknown:
    case SystemKind::three_unknown:
    case SystemKind::classical_triple:
      return {"A", "B", "C", "D", "E", "F", "G", "H", "Phi", "Psi", "Omega"};
    case SystemKind::hermitian_3_4:
    case SystemKind::hermitian_3_7:
      return {"A", "B", "C", "D", "Phi", "Psi", "Omega"};
    case SystemKind::hermitian_3_5:
    case SystemKind::hermitian_3_8:
      return {"A", "B", "C", "D", "Phi", "Omega"};
  }
  throw InternalInconsistency("unhandled system kind");
}

template <Ring R>
ojson instance_to_json(const SystemInstance<R>& inst) {
  ojson j = ojson::object();
  j["kind"] = system_kind_name(inst.kind);
  write_ring_fields(j, inst.A.ring().descriptor());
  ojson ms = ojson::object();
  auto put = [&](const char* name, const Matrix<R>& mtx) { ms[name] = matrix_to_json(mtx); };
  for (const std::string& slot : used_slots(inst.kind)) {
    if (slot == "A") put("A", inst.A);
    else if (slot == "B") put("B", inst.B);
    else if (slot == "C") put("C", inst.C);
    else if (slot == "D") put("D", inst.D);
    else if (slot == "E") put("E", inst.E);
    else if (slot == "F") put("F", inst.F);
    else if (slot == "G") put("G", inst.G);
    else if (slot == "H") put("H", inst.H);
    else if (slot == "Phi") put("Phi", inst.Phi);
    else if (slot == "Psi") put("Psi", inst.Psi);
    else if (slot == "Omega") put("Omega", inst.Omega);
  }
  j["matrices"] = std::move(ms);
  return j;
}

// Reads an instance over a known ring. Absent slots are inferred as empty
// matrices of the shapes the kind's template dictates, with each dimension
// taken from the first present matrix that determines it (0 otherwise).
template <Ring R>
SystemInstance<R> instance_from_json(const R& ring, const ojson& j, const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": expected a JSON object");
  if (!j.contains("kind")) throw ParseError(ctx + ": missing \"kind\" field");
  if (!j.at("kind").is_string()) throw ParseError(ctx + ": \"kind\" must be a string");
  SystemKind kind = system_kind_from_name(j.at("kind").get<std::string>());
  SystemInstance<R> inst(ring, kind);
  std::optional<Matrix<R>> slot[11];
  if (j.contains("matrices")) {
    const ojson& ms = j.at("matrices");
    if (!ms.is_object()) throw ParseError(ctx + ": \"matrices\" must be an object");
    for (const auto& [key, value] : ms.items()) {
      int found = -1;
      for (int k = 0; k < 11; ++k) {
        const auto& name = detail::instance_slots()[static_cast<std::size_t>(k)];
        if (key == name.ascii || (name.alias != nullptr && key == name.alias)) {
          found = k;
          break;
        }
      }
      if (found < 0) throw ParseError(ctx + ": unknown matrix \"" + key + "\"");
      if (slot[found].has_value())
        throw ParseError(ctx + ": matrix \"" +
                         detail::instance_slots()[static_cast<std::size_t>(found)].ascii +
                         "\" given twice (alias collision)");
      slot[found] = matrix_from_json(ring, value, ctx + ".matrices." + key);
    }
  }
  const Matrix<R>*A = slot[0] ? &*slot[0] : nullptr, *B = slot[1] ? &*slot[1] : nullptr,
            *C = slot[2] ? &*slot[2] : nullptr, *D = slot[3] ? &*slot[3] : nullptr,
            *E = slot[4] ? &*slot[4] : nullptr, *F = slot[5] ? &*slot[5] : nullptr,
            *G = slot[6] ? &*slot[6] : nullptr, *H = slot[7] ? &*slot[7] : nullptr,
            *Ph = slot[8] ? &*slot[8] : nullptr, *Ps = slot[9] ? &*slot[9] : nullptr,
            *Om = slot[10] ? &*slot[10] : nullptr;
  auto dim = [](std::initializer_list<std::pair<const Matrix<R>*, bool>> candidates) {
    // bool true = take rows, false = take cols
    for (const auto& [ptr, use_rows] : candidates)
      if (ptr != nullptr) return use_rows ? ptr->rows() : ptr->cols();
    return 0;
  };
  bool herm = is_hermitian_kind(kind);
  bool d_transposed = kind == SystemKind::hermitian_3_5 || kind == SystemKind::hermitian_3_8;
  int m = dim({{A, true}, {B, true}, {Ph, true}});
  int p = dim({{A, false}, {C, false}, {D, d_transposed}});
  int q = dim({{B, false}});
  int s = d_transposed ? dim({{C, true}, {Om, true}}) : dim({{C, true}, {Ps, true}});
  int t = 0, p1 = 0, q1 = 0, s1 = 0, t1 = 0, m1 = 0;
  if (!herm) {
    t = dim({{D, true}, {Om, true}});
    p1 = dim({{E, true}, {F, true}, {G, true}});
    q1 = dim({{H, true}});
    s1 = dim({{F, false}, {Ps, false}});
    t1 = dim({{G, false}, {Om, false}});
    m1 = dim({{E, false}, {H, false}, {Ph, false}});
  } else if (d_transposed) {
    t = dim({{D, false}, {Om, false}});
  } else {
    t = dim({{D, true}, {Om, true}});
  }
  auto fill = [&](const Matrix<R>* given, int rows, int cols) {
    return given != nullptr ? *given : zeros(ring, rows, cols);
  };
  inst.A = fill(A, m, p);
  inst.B = fill(B, m, q);
  inst.C = fill(C, s, p);
  inst.D = d_transposed ? fill(D, p, t) : fill(D, t, p);
  if (!herm) {
    inst.E = fill(E, p1, m1);
    inst.F = fill(F, p1, s1);
    inst.G = fill(G, p1, t1);
    inst.H = fill(H, q1, m1);
    inst.Phi = fill(Ph, m, m1);
    inst.Psi = fill(Ps, s, s1);
    inst.Omega = fill(Om, t, t1);
  } else {
    inst.E = fill(E, 0, 0);
    inst.F = fill(F, 0, 0);
    inst.G = fill(G, 0, 0);
    inst.H = fill(H, 0, 0);
    inst.Phi = fill(Ph, m, m);
    if (d_transposed) {
      inst.Psi = fill(Ps, 0, 0);
      inst.Omega = fill(Om, s, t);
    } else {
      inst.Psi = fill(Ps, s, s);
      inst.Omega = fill(Om, t, t);
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Reports, solutions, agreement records.
// ---------------------------------------------------------------------------

inline ojson report_to_json(const SolvabilityReport& rep) {
  ojson j = ojson::object();
  j["verdict"] = rep.verdict;
  ojson conds = ojson::array();
  for (const auto& c : rep.conditions) {
    ojson e = ojson::object();
    e["label"] = c.label;
    e["lhs_matrix_recipe"] = c.lhs_matrix_recipe;
    e["lhs_rank"] = c.lhs_rank;
    e["rhs_rank_expression"] = c.rhs_rank_expression;
    e["rhs_rank"] = c.rhs_rank;
    e["holds"] = c.holds;
    conds.push_back(std::move(e));
  }
  j["conditions"] = std::move(conds);
  return j;
}

template <Ring R>
ojson solution_to_json(const Solution<R>& sol) {
  ojson j = ojson::object();
  ojson unknowns = ojson::object();
  for (const auto& [name, value] : sol.unknowns) unknowns[name] = matrix_to_json(value);
  j["unknowns"] = std::move(unknowns);
  j["hermitian_unknowns"] = sol.hermitian_unknowns;
  return j;
}

template <Ring R>
ojson agreement_to_json(const AgreementRecord<R>& rec) {
  ojson j = ojson::object();
  j["agree"] = rec.agree;
  j["checker"] = report_to_json(rec.checker);
  j["oracle_feasible"] = rec.oracle_feasible;
  j["witness"] = rec.witness ? solution_to_json(*rec.witness) : ojson(nullptr);
  return j;
}

}  // namespace dring
