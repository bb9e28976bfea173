// Acceptance gate: seven independent criteria covering relation identities,
// invariant nonnegativity, equivalence invariance, certified decomposition,
// solvability differential testing, necessity on constructed-solvable
// systems, and campaign determinism. One pass/fail line per criterion; exit 0
// iff all pass. Every comparison is exact — no tolerances anywhere.
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "dring/canon.hpp"
#include "dring/errors.hpp"
#include "dring/harness.hpp"
#include "dring/json_io.hpp"
#include "dring/matrix.hpp"
#include "dring/scalar.hpp"
#include "dring/sylvester.hpp"

namespace {

using namespace dring;

constexpr std::uint64_t kSeed = 20260822;

struct Criterion {
  int number;
  std::string description;
  bool pass = true;
  int checked = 0;
  std::string detail;  // first failure, for the log

  Criterion(int n, std::string d) : number(n), description(std::move(d)) {}

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// The five acceptance rings with their per-ring dimension caps for the shared
// quaternity campaign of criteria 1 and 2.
struct RingUnderTest {
  RingDescriptor desc;
  int dim_cap;
};

std::vector<RingUnderTest> acceptance_rings(int field_cap, int quaternion_cap) {
  return {{RingDescriptor{RingKind::prime_field, 2}, field_cap},
          {RingDescriptor{RingKind::prime_field, 3}, field_cap},
          {RingDescriptor{RingKind::prime_field, 7}, field_cap},
          {RingDescriptor{RingKind::rationals, 0}, field_cap},
          {RingDescriptor{RingKind::rational_quaternions, 0}, quaternion_cap}};
}

template <Ring R>
QuaternityDims random_quaternity_dims(int cap, Rng& g, const R&) {
  return {g.range(0, cap), g.range(0, cap), g.range(0, cap), g.range(0, cap), g.range(0, cap)};
}

// ---------------------------------------------------------------------------
// Criteria 1 and 2 share one 500-instances-per-ring quaternity campaign.
// ---------------------------------------------------------------------------

void run_criteria_1_2(Criterion& c1, Criterion& c2) {
  std::uint64_t stream = 0;
  for (const RingUnderTest& rut : acceptance_rings(6, 4)) {
    AnyRing ar = make_ring(rut.desc);
    std::visit(
        [&](const auto& ring) {
          for (int i = 0; i < 500; ++i) {
            Rng g(mix_seed(kSeed, stream, static_cast<std::uint64_t>(i)));
            QuaternityDims qd = random_quaternity_dims(rut.dim_cap, g, ring);
            auto [A, B, C, D] = gen_quaternity(ring, qd, g);
            auto inv = quaternity_invariants(A, B, C, D);

            // Criterion 1: the eight recomputed-rank identities, exactly.
            auto rep = verify_consistency(A, B, C, D, inv);
            ++c1.checked;
            if (!rep.all_ok)
              c1.fail("consistency failed over " + ring_file_tag(rut.desc) + " at instance " +
                      std::to_string(i));
            if (rep.checks.size() != 8)
              c1.fail("expected exactly eight identities, saw " +
                      std::to_string(rep.checks.size()));

            // Criterion 2: every stored invariant and derived block width is
            // nonnegative, and both canonical forms assemble without error.
            ++c2.checked;
            auto require_nonneg = [&](const std::string& name, long long value) {
              if (value < 0)
                c2.fail(name + " = " + std::to_string(value) + " over " +
                        ring_file_tag(rut.desc) + " at instance " + std::to_string(i));
            };
            for (const auto& [name, value] : inv.named_values()) require_nonneg(name, value);
            require_nonneg("r1-r5", inv.r1 - inv.r5);
            require_nonneg("r2-r4", inv.r2 - inv.r4);
            require_nonneg("r9-r13", inv.r9 - inv.r13);
            require_nonneg("r4-r9", inv.r4 - inv.r9);
            require_nonneg("r7-r12-r14", inv.r7 - inv.r12 - inv.r14);
            require_nonneg("r3-r7", inv.r3 - inv.r7);
            DualInvariants dual = duality_transport(A, B, C, D);
            for (const auto& [name, value] : dual.named_values()) require_nonneg(name, value);
            try {
              build_canonical_quaternity(ring, inv);
              build_canonical_dual(ring, dual);
            } catch (const Error& e) {
              c2.fail(std::string("canonical assembly threw: ") + e.what());
            }
          }
        },
        ar);
    ++stream;
  }
}

// ---------------------------------------------------------------------------
// Criterion 3: invariance under the coupled equivalence transformations.
// ---------------------------------------------------------------------------

void run_criterion_3(Criterion& c) {
  std::uint64_t stream = 100;
  for (const RingUnderTest& rut : acceptance_rings(4, 3)) {
    AnyRing ar = make_ring(rut.desc);
    std::visit(
        [&](const auto& ring) {
          for (int i = 0; i < 20; ++i) {
            Rng g(mix_seed(kSeed, stream, static_cast<std::uint64_t>(i)));
            QuaternityDims qd = random_quaternity_dims(rut.dim_cap, g, ring);
            auto [A, B, C, D] = gen_quaternity(ring, qd, g);
            auto before = quaternity_invariants(A, B, C, D);

            // (A,B,C,D) -> (U A X, U B V, W C X, Y D X) with all five
            // transforms nonsingular.
            auto U = gen_nonsingular(ring, qd.m, g);
            auto V = gen_nonsingular(ring, qd.q, g);
            auto W = gen_nonsingular(ring, qd.s, g);
            auto X = gen_nonsingular(ring, qd.p, g);
            auto Y = gen_nonsingular(ring, qd.t, g);
            auto after = quaternity_invariants(mul(mul(U, A), X), mul(mul(U, B), V),
                                               mul(mul(W, C), X), mul(mul(Y, D), X));

            ++c.checked;
            int mismatches = 0;
            auto b = before.named_values(), a = after.named_values();
            for (std::size_t k = 0; k < b.size(); ++k)
              if (b[k].second != a[k].second) ++mismatches;
            if (mismatches != 0)
              c.fail(std::to_string(mismatches) + " stored values changed over " +
                     ring_file_tag(rut.desc) + " at instance " + std::to_string(i));
          }
        },
        ar);
    ++stream;
  }
}

// ---------------------------------------------------------------------------
// Criterion 4: decomposition certificates, primal and dual.
// ---------------------------------------------------------------------------

void run_criterion_4(Criterion& c) {
  std::uint64_t stream = 200;
  for (const RingUnderTest& rut : acceptance_rings(5, 4)) {
    AnyRing ar = make_ring(rut.desc);
    std::visit(
        [&](const auto& ring) {
          using Mat = Matrix<std::decay_t<decltype(ring)>>;
          for (int i = 0; i < 100; ++i) {
            Rng g(mix_seed(kSeed, stream, static_cast<std::uint64_t>(i)));
            ++c.checked;
            try {
              QuaternityDims qd = random_quaternity_dims(rut.dim_cap, g, ring);
              auto [A, B, C, D] = gen_quaternity(ring, qd, g);
              auto dec = decompose_quaternity(A, B, C, D);
              bool products = matrix_eq(mul(mul(dec.M, A), dec.P), dec.canonical.S_a) &&
                              matrix_eq(mul(mul(dec.M, B), dec.Q), dec.canonical.S_b) &&
                              matrix_eq(mul(mul(dec.S, C), dec.P), dec.canonical.S_c) &&
                              matrix_eq(mul(mul(dec.T, D), dec.P), dec.canonical.S_d);
              if (!products)
                c.fail("certificate product mismatch over " + ring_file_tag(rut.desc));
              for (const Mat* tr : {&dec.M, &dec.P, &dec.Q, &dec.S, &dec.T})
                if (!matrix_eq(mul(invert_matrix(*tr), *tr), identity(ring, tr->rows())))
                  c.fail("transform failed inversion over " + ring_file_tag(rut.desc));

              DualDims dd{g.range(0, rut.dim_cap), g.range(0, rut.dim_cap),
                          g.range(0, rut.dim_cap), g.range(0, rut.dim_cap),
                          g.range(0, rut.dim_cap)};
              auto [E, F, G, H] = gen_dual_array(ring, dd, g);
              auto dual = decompose_dual(E, F, G, H);
              bool dual_products =
                  matrix_eq(mul(mul(dual.P1, E), dual.M1), dual.canonical.S_e) &&
                  matrix_eq(mul(mul(dual.P1, F), dual.S1), dual.canonical.S_f) &&
                  matrix_eq(mul(mul(dual.P1, G), dual.T1), dual.canonical.S_g) &&
                  matrix_eq(mul(mul(dual.Q1, H), dual.M1), dual.canonical.S_h);
              if (!dual_products)
                c.fail("dual certificate product mismatch over " + ring_file_tag(rut.desc));
              for (const Mat* tr : {&dual.M1, &dual.P1, &dual.Q1, &dual.S1, &dual.T1})
                if (!matrix_eq(mul(invert_matrix(*tr), *tr), identity(ring, tr->rows())))
                  c.fail("dual transform failed inversion over " + ring_file_tag(rut.desc));
            } catch (const Error& e) {
              c.fail(std::string("decomposition threw over ") + ring_file_tag(rut.desc) + ": " +
                     e.what());
            }
          }
        },
        ar);
    ++stream;
  }
}

// ---------------------------------------------------------------------------
// Criterion 5: checker vs. linearization oracle vs. exhaustive enumeration.
// ---------------------------------------------------------------------------

template <Ring R>
void differential_battery(Criterion& c, const R& ring, const std::string& tag, SystemKind kind,
                          int count, int dim_cap, std::uint64_t stream) {
  for (int i = 0; i < count; ++i) {
    Rng g(mix_seed(kSeed, stream, static_cast<std::uint64_t>(i)));
    SystemDims d = gen_system_dims(kind, DimBounds::uniform(dim_cap), g);
    SystemInstance<R> inst = i % 2 == 1 ? gen_solvable_instance(kind, ring, d, g)
                                        : gen_instance(kind, ring, d, g);
    ++c.checked;
    AgreementRecord<R> rec = cross_check(inst);
    if (!rec.agree) {
      c.fail("checker/oracle disagreement: " + std::string(system_kind_name(kind)) + " over " +
             tag + " at instance " + std::to_string(i));
      continue;
    }
    if constexpr (std::is_same_v<R, PrimeField>) {
      if (ring.modulus() == 2 && !is_hermitian_kind(kind) &&
          detail::independent_entries(unknown_specs(inst)) <= 16) {
        bool truth = exhaustive_solvability(inst);
        if (truth != rec.checker.verdict)
          c.fail("enumeration disagreement: " + std::string(system_kind_name(kind)) +
                 " at instance " + std::to_string(i));
      }
    }
  }
}

void run_criterion_5(Criterion& c) {
  PrimeField F2(2), F3(3);
  QuaternionRing H;
  std::uint64_t stream = 300;
  for (SystemKind kind : all_system_kinds()) {
    if (!is_hermitian_kind(kind))
      differential_battery(c, F2, "gf2", kind, 500, 3, stream + 0);
    differential_battery(c, F3, "gf3", kind, 500, 3, stream + 1);
    differential_battery(c, H, "quaternions", kind, 100, 2, stream + 2);
    stream += 10;
  }
}

// ---------------------------------------------------------------------------
// Criterion 6: necessity — constructed-solvable instances check out, and
// Hermitian witnesses really are Hermitian.
// ---------------------------------------------------------------------------

template <Ring R>
void necessity_battery(Criterion& c, const R& ring, const std::string& tag, SystemKind kind,
                       int count, int dim_cap, std::uint64_t stream) {
  for (int i = 0; i < count; ++i) {
    Rng g(mix_seed(kSeed, stream, static_cast<std::uint64_t>(i)));
    SystemDims d = gen_system_dims(kind, DimBounds::uniform(dim_cap), g);
    SystemInstance<R> inst = gen_solvable_instance(kind, ring, d, g);
    ++c.checked;
    if (!check_instance(inst).verdict) {
      c.fail("constructed-solvable instance got verdict false: " +
             std::string(system_kind_name(kind)) + " over " + tag);
      continue;
    }
    try {
      Solution<R> sol = solve_linearized(inst);
      for (const std::string& name : sol.hermitian_unknowns)
        for (const auto& [unknown, value] : sol.unknowns)
          if (unknown == name && !is_hermitian(value))
            c.fail("witness " + name + " is not Hermitian: " +
                   std::string(system_kind_name(kind)) + " over " + tag);
    } catch (const Infeasible&) {
      c.fail("oracle declared a constructed-solvable instance infeasible: " +
             std::string(system_kind_name(kind)) + " over " + tag);
    }
  }
}

void run_criterion_6(Criterion& c) {
  PrimeField F2(2), F3(3), F7(7);
  RationalRing Q;
  QuaternionRing H;
  std::uint64_t stream = 500;
  for (SystemKind kind : all_system_kinds()) {
    if (is_hermitian_kind(kind)) {
      // 200 per kind, split across the two mandated rings.
      necessity_battery(c, H, "quaternions", kind, 100, 2, stream + 0);
      necessity_battery(c, F3, "gf3", kind, 100, 3, stream + 1);
    } else {
      necessity_battery(c, F2, "gf2", kind, 40, 3, stream + 0);
      necessity_battery(c, F3, "gf3", kind, 40, 3, stream + 1);
      necessity_battery(c, F7, "gf7", kind, 40, 3, stream + 2);
      necessity_battery(c, Q, "rationals", kind, 40, 3, stream + 3);
      necessity_battery(c, H, "quaternions", kind, 40, 2, stream + 4);
    }
    stream += 10;
  }
}

// ---------------------------------------------------------------------------
// Criterion 7: campaign determinism, byte for byte.
// ---------------------------------------------------------------------------

void run_criterion_7(Criterion& c) {
  CampaignConfig cfg;
  cfg.seed = kSeed;
  cfg.rings = {RingDescriptor{RingKind::prime_field, 2}, RingDescriptor{RingKind::prime_field, 3},
               RingDescriptor{RingKind::rationals, 0},
               RingDescriptor{RingKind::rational_quaternions, 0}};
  cfg.dim_bounds = DimBounds::uniform(2);
  cfg.instance_count = 10;
  cfg.kinds = {"consistency", "decomposition"};
  for (SystemKind kind : all_system_kinds()) cfg.kinds.push_back(system_kind_name(kind));

  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() / "dring_acceptance_campaign";
  fs::remove_all(base);
  fs::create_directories(base / "run1");
  fs::create_directories(base / "run2");

  CampaignReport r1 = run_campaign(cfg, (base / "run1").string());
  CampaignReport r2 = run_campaign(cfg, (base / "run1").string());  // same directory: same paths
  ++c.checked;
  if (campaign_report_to_json(r1).dump(2) != campaign_report_to_json(r2).dump(2))
    c.fail("rerun with the same seed produced a different JSON report");
  for (const auto& t : r1.tallies) {
    ++c.checked;
    if (t.fail != 0)
      c.fail(t.kind + " over " + t.ring + " recorded " + std::to_string(t.fail) + " failures");
  }
  // A different out_dir must change nothing but the (empty) counterexample
  // paths; with zero failures the serialized reports stay identical too.
  CampaignReport r3 = run_campaign(cfg, (base / "run2").string());
  ++c.checked;
  if (campaign_report_to_json(r3).dump(2) != campaign_report_to_json(r1).dump(2))
    c.fail("report content depended on the output directory");
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "relation identities hold exactly on 500 random quaternities per ring"},
      {2, "all stored invariants and derived block widths are nonnegative"},
      {3, "invariants are unchanged under random nonsingular equivalence transforms"},
      {4, "decomposition certificates multiply out exactly and transforms invert"},
      {5, "rank checker, linearization oracle, and GF(2) enumeration agree"},
      {6, "constructed-solvable systems verify, with exactly Hermitian witnesses"},
      {7, "campaigns are byte-identical under a fixed seed"},
  };

  auto t_all = std::chrono::steady_clock::now();
  {
    auto t0 = std::chrono::steady_clock::now();
    run_criteria_1_2(criteria[0], criteria[1]);
    double dt = seconds_since(t0);
    criteria[0].description += " [" + std::to_string(dt).substr(0, 5) + "s shared]";
    criteria[1].description += " [" + std::to_string(dt).substr(0, 5) + "s shared]";
  }
  for (auto [index, runner] :
       {std::pair<int, void (*)(Criterion&)>{2, run_criterion_3},
        {3, run_criterion_4},
        {4, run_criterion_5},
        {5, run_criterion_6},
        {6, run_criterion_7}}) {
    auto t0 = std::chrono::steady_clock::now();
    runner(criteria[static_cast<std::size_t>(index)]);
    criteria[static_cast<std::size_t>(index)].description +=
        " [" + std::to_string(seconds_since(t0)).substr(0, 5) + "s]";
  }

  bool all_pass = true;
  for (const Criterion& c : criteria) {
    all_pass = all_pass && c.pass;
    std::printf("criterion %d: %s — %s (%d checks)%s%s\n", c.number, c.pass ? "PASS" : "FAIL",
                c.description.c_str(), c.checked, c.pass ? "" : " — ",
                c.pass ? "" : c.detail.c_str());
  }
  std::printf("acceptance: %s in %.1fs\n", all_pass ? "ALL CRITERIA PASS" : "FAILURES PRESENT",
              seconds_since(t_all));
  return all_pass ? 0 : 1;
}
