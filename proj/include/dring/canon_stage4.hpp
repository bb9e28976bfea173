// Stage 4 of the quaternity decomposition: reduce D to S_d while preserving
// the already-canonical S_a, S_b, S_c. Included by canon.hpp only.
//
// Column blocks over p = r5 + (r1-r5) + r4 + (r2-r4) + r3 + rest:
//   d1 = alpha pivots of C, d2 = rest of the A-bottom identity,
//   d3 = beta pivots of C, d4 = rest of the A-top identity,
//   d5 = gamma pivots of C, d6 = free columns.
// Allowed column moves (besides within-block ones): d2->d1, d3->d1,
// d4->{d1,d2,d3}, d5->{d1,d3}, d6->{d1..d5}. Everything else would disturb
// S_a or S_c beyond repair by row operations of the permitted shapes.
//
// Row groups carved out of D, with their target row blocks and unit columns:
//   delta (rank r6)  -> h9,  units in g17 (front of d6)
//   eps   (rank r7)  -> h5+h6+h7, units in g13..g15 (front of d5)
//   psi   (rank r8)  -> h8,  units in g10 (front of d4)
//   eta   (rank r12) -> h5,  units in g11 (second slice of d4)
//   kappa (rank r9)  -> h3+h4, units in g7+g8 (front of d3)
//   mu    (rank r10) -> h2,  units in g3 (front of d2)
//   h3    (rank r13) -> h3,  units in g4 (second slice of d2)
//   theta (rank r14) -> h6,  units in g5 (third slice of d2)
//   h1    (rank r11) -> h1,  units in g1 (front of d1)
#pragma once

#include "dring/matrix.hpp"

namespace dring {
namespace detail {

template <Ring R>
void DecomposeEngine<R>::stage4() {
  const int r1 = inv_.r1, r2 = inv_.r2, r3 = inv_.r3, r4 = inv_.r4, r5 = inv_.r5;
  const int p = A_.cols(), t = D_.rows(), rb = inv_.rank_b, s = C_.rows();
  const int d1_0 = 0, d2_0 = r5, d3_0 = r1, d4_0 = r1 + r4, d5_0 = r1 + r2, d6_0 = r1 + r2 + r3;
  const int d1_w = r5, d2_w = r1 - r5, d3_w = r4, d4_w = r2 - r4, d5_w = r3, d6_w = p - d6_0;
  (void)d6_w;
  auto dblock = [=](int col) {
    if (col < d2_0) return 1;
    if (col < d3_0) return 2;
    if (col < d4_0) return 3;
    if (col < d5_0) return 4;
    if (col < d6_0) return 5;
    return 6;
  };
  col_allowed_ = [dblock](int src, int tgt) {
    int sb = dblock(src), tb = dblock(tgt);
    if (sb == tb) return true;
    switch (sb) {
      case 2:
      case 3:
        return tb == 1;
      case 4:
        return tb <= 3;
      case 5:
        return tb == 1 || tb == 3;
      case 6:
        return true;
      default:
        return false;
    }
  };
  Plocal_ = identity(ring_, p);

  auto is_piv = [](const std::vector<std::pair<int, int>>& piv, int col) {
    for (auto [pr, pc] : piv)
      if (pc == col) return true;
    return false;
  };
  // Clear the entries of pivot row `pr` across the column range [lo, hi),
  // skipping the pivot family's own columns, using its globally-unit pivot
  // column `pc` as the source.
  auto clear_row_range = [&](int pr, int pc, int lo, int hi,
                             const std::vector<std::pair<int, int>>* skip) {
    for (int j = lo; j < hi; ++j) {
      if (skip && is_piv(*skip, j)) continue;
      if (j == pc) continue;
      if (!ring_.is_zero(D_.at(pr, j))) pcol_addmul(j, pc, ring_.neg(D_.at(pr, j)));
    }
  };
  // Apply an invertible transform to the columns [lo, lo+w) of every
  // P-tracked matrix (an in-block GL move).
  auto pcol_apply_gl = [&](int lo, int w, const Mat& G) {
    if (w == 0) return;
    for (Mat* x : {&A_, &C_, &D_, &P_, &Plocal_})
      set_block(*x, 0, lo, mul(block(*x, 0, lo, x->rows(), w), G));
  };
  // Reorder the columns of block [lo, lo+w) so the columns currently at the
  // positions listed in `front` come first, in that order.
  auto pcol_front_perm = [&](int lo, int w, const std::vector<int>& front) {
    std::vector<int> label(p);
    for (int i = 0; i < p; ++i) label[i] = i;
    int pos = lo;
    for (int want : front) {
      int at = -1;
      for (int j = lo; j < lo + w; ++j)
        if (label[j] == want) {
          at = j;
          break;
        }
      if (at < 0) throw InternalInconsistency("stage 4: lost track of a pivot column");
      if (at != pos) {
        pcol_swap(pos, at);
        std::swap(label[pos], label[at]);
      }
      ++pos;
    }
  };

  std::vector<int> all = range_list(0, t);

  // ---- d6: the delta rows (h9) ----
  auto piv6 = restricted_rref(Rows::D, all, range_list(d6_0, p));
  expect_rank("stage 4", "D on the free columns", static_cast<int>(piv6.size()), inv_.r6);
  std::vector<int> delta;
  for (auto [pr, pc] : piv6) delta.push_back(pr);
  for (auto [pr, pc] : piv6) {
    clear_row_range(pr, pc, d6_0, p, &piv6);  // within-d6 residues
    clear_row_range(pr, pc, 0, d6_0, nullptr);  // d6 -> d1..d5
  }
  {
    std::vector<int> front;
    for (auto [pr, pc] : piv6) front.push_back(pc);
    pcol_front_perm(d6_0, p - d6_0, front);
  }

  // ---- d5: the eps rows (h5+h6+h7) ----
  std::vector<int> W1 = minus(all, delta);
  auto piv5 = restricted_rref(Rows::D, W1, range_list(d5_0, d6_0));
  expect_rank("stage 4", "D on the gamma columns", static_cast<int>(piv5.size()), inv_.r7);
  std::vector<int> eps;
  for (auto [pr, pc] : piv5) eps.push_back(pr);

  // ---- d4: the psi rows (h8) and eta rows (h5) ----
  std::vector<int> Wr = minus(W1, eps);
  auto pivpsi = restricted_rref(Rows::D, Wr, range_list(d4_0, d5_0));
  expect_rank("stage 4", "D on the upper identity columns", static_cast<int>(pivpsi.size()),
              inv_.r8);
  std::vector<int> psi;
  for (auto [pr, pc] : pivpsi) psi.push_back(pr);
  // Decouple the eps rows from the psi pivot columns by row operations; the
  // psi rows are zero on d5 and d6, so the eps structure there survives.
  for (int e : eps)
    for (auto [pr, pc] : pivpsi)
      if (!ring_.is_zero(D_.at(e, pc))) row_addmul(Rows::D, e, pr, ring_.neg(D_.at(e, pc)));
  std::vector<int> d4_rest;
  for (int j = d4_0; j < d5_0; ++j)
    if (!is_piv(pivpsi, j)) d4_rest.push_back(j);
  auto piveta = restricted_rref(Rows::D, eps, d4_rest);
  expect_rank("stage 4", "D of the eps rows on the remaining upper identity columns",
              static_cast<int>(piveta.size()), inv_.r12);
  std::vector<int> eta;
  for (auto [pr, pc] : piveta) eta.push_back(pr);
  // psi-row entries sitting in eta pivot columns (the psi pivot columns are
  // globally unit after the decoupling above).
  for (auto [epr, epc] : piveta)
    for (auto [ppr, ppc] : pivpsi)
      if (!ring_.is_zero(D_.at(ppr, epc))) pcol_addmul(epc, ppc, ring_.neg(D_.at(ppr, epc)));
  // psi rows: clear within-d4 residues and their d1, d2, d3 content.
  for (auto [ppr, ppc] : pivpsi) {
    for (int j : d4_rest)
      if (!is_piv(piveta, j) && !ring_.is_zero(D_.at(ppr, j)))
        pcol_addmul(j, ppc, ring_.neg(D_.at(ppr, j)));
    clear_row_range(ppr, ppc, 0, d4_0, nullptr);
  }
  // eta rows likewise (their pivot columns are globally unit now).
  for (auto [epr, epc] : piveta) {
    for (int j : d4_rest)
      if (!is_piv(piveta, j) && !ring_.is_zero(D_.at(epr, j)))
        pcol_addmul(j, epc, ring_.neg(D_.at(epr, j)));
    clear_row_range(epr, epc, 0, d4_0, nullptr);
  }
  {
    std::vector<int> front;
    for (auto [pr, pc] : pivpsi) front.push_back(pc);
    for (auto [pr, pc] : piveta) front.push_back(pc);
    pcol_front_perm(d4_0, d4_w, front);
  }
  // After the permutation the unit column of eta row k is d4_0 + r8 + k.
  auto eta_unit = [&](int k) { return d4_0 + inv_.r8 + k; };

  // ---- d3: the kappa rows (h3+h4) ----
  // First clear the eps rows on d3 so the kappa pivot columns come out
  // globally unit. The eps rows are mixed, so a batched move through their
  // full-row-rank d5 part is used: d3 += d5 * Z with E5 * Z = -E3.
  auto eps_batched_clear = [&](int lo, int w) {
    if (eps.empty() || w == 0) return;
    int k = static_cast<int>(eps.size());
    Mat E5(ring_, k, d5_w);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < d5_w; ++j) E5.at(i, j) = D_.at(eps[i], d5_0 + j);
    auto cr = col_reduce_tracked(E5);
    if (cr.rank != k)
      throw DecompositionFailure("stage 4: the eps rows lost full row rank on the gamma columns");
    Mat Rinv = block(cr.transform, 0, 0, d5_w, k);
    if (!matrix_eq(mul(E5, Rinv), identity(ring_, k)))
      throw DecompositionFailure("stage 4: no right inverse for the eps gamma block");
    Mat Et(ring_, k, w);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < w; ++j) Et.at(i, j) = D_.at(eps[i], lo + j);
    Mat Z = neg(mul(Rinv, Et));
    for (int j = 0; j < w; ++j)
      for (int i = 0; i < d5_w; ++i)
        if (!ring_.is_zero(Z.at(i, j))) pcol_addmul(lo + j, d5_0 + i, Z.at(i, j));
  };
  eps_batched_clear(d3_0, d3_w);
  std::vector<int> W2 = minus(Wr, psi);
  auto pivkap = restricted_rref(Rows::D, W2, range_list(d3_0, d4_0));
  expect_rank("stage 4", "D on the beta columns", static_cast<int>(pivkap.size()), inv_.r9);
  std::vector<int> kappa;
  for (auto [pr, pc] : pivkap) kappa.push_back(pr);

  // ---- d2: the mu rows (h2), h3 rows, theta rows (h6) ----
  std::vector<int> W3 = minus(W2, kappa);
  auto pivmu = restricted_rref(Rows::D, W3, range_list(d2_0, d3_0));
  expect_rank("stage 4", "D on the lower identity columns", static_cast<int>(pivmu.size()),
              inv_.r10);
  std::vector<int> mu;
  for (auto [pr, pc] : pivmu) mu.push_back(pr);
  // Decouple kappa and eps rows from the mu pivot columns. The mu rows carry
  // content only on d1 and d2, so nothing else is disturbed.
  for (int k : kappa)
    for (auto [pr, pc] : pivmu)
      if (!ring_.is_zero(D_.at(k, pc))) row_addmul(Rows::D, k, pr, ring_.neg(D_.at(k, pc)));
  for (int e : eps)
    for (auto [pr, pc] : pivmu)
      if (!ring_.is_zero(D_.at(e, pc))) row_addmul(Rows::D, e, pr, ring_.neg(D_.at(e, pc)));
  std::vector<int> d2_rest;
  for (int j = d2_0; j < d3_0; ++j)
    if (!is_piv(pivmu, j)) d2_rest.push_back(j);
  auto pivh3 = restricted_rref(Rows::D, kappa, d2_rest);
  expect_rank("stage 4", "D of the kappa rows on the remaining lower identity columns",
              static_cast<int>(pivh3.size()), inv_.r13);
  std::vector<int> h3rows;
  for (auto [pr, pc] : pivh3) h3rows.push_back(pr);
  // mu-row entries in h3 pivot columns (mu pivot columns are globally unit).
  for (auto [hpr, hpc] : pivh3)
    for (auto [mpr, mpc] : pivmu)
      if (!ring_.is_zero(D_.at(mpr, hpc))) pcol_addmul(hpc, mpc, ring_.neg(D_.at(mpr, hpc)));
  // Decouple eps rows from the h3 pivot columns (the h3 rows are zero on d4,
  // d5, d6 — their d1/d3 content pollutes eps and is re-cleared below).
  for (int e : eps)
    for (auto [pr, pc] : pivh3)
      if (!ring_.is_zero(D_.at(e, pc))) row_addmul(Rows::D, e, pr, ring_.neg(D_.at(e, pc)));
  std::vector<int> epsrest = minus(eps, eta);
  std::vector<int> d2_rest2;
  for (int j : d2_rest)
    if (!is_piv(pivh3, j)) d2_rest2.push_back(j);
  auto pivth = restricted_rref(Rows::D, epsrest, d2_rest2);
  expect_rank("stage 4", "D of the eps rows on the remaining lower identity columns",
              static_cast<int>(pivth.size()), inv_.r14);
  std::vector<int> theta;
  for (auto [pr, pc] : pivth) theta.push_back(pr);
  // Stray entries in the theta pivot columns: mu rows, h3 rows, eta rows.
  for (auto [tpr, tpc] : pivth) {
    for (auto [mpr, mpc] : pivmu)
      if (!ring_.is_zero(D_.at(mpr, tpc))) pcol_addmul(tpc, mpc, ring_.neg(D_.at(mpr, tpc)));
    for (auto [hpr, hpc] : pivh3)
      if (!ring_.is_zero(D_.at(hpr, tpc))) pcol_addmul(tpc, hpc, ring_.neg(D_.at(hpr, tpc)));
    for (std::size_t k = 0; k < eta.size(); ++k)
      if (!ring_.is_zero(D_.at(eta[k], tpc)))
        pcol_addmul(tpc, eta_unit(static_cast<int>(k)), ring_.neg(D_.at(eta[k], tpc)));
  }
  // Remaining d2 columns (the future g6 block) must end globally zero.
  for (int j : d2_rest2) {
    if (is_piv(pivth, j)) continue;
    for (auto [mpr, mpc] : pivmu)
      if (!ring_.is_zero(D_.at(mpr, j))) pcol_addmul(j, mpc, ring_.neg(D_.at(mpr, j)));
    for (auto [hpr, hpc] : pivh3)
      if (!ring_.is_zero(D_.at(hpr, j))) pcol_addmul(j, hpc, ring_.neg(D_.at(hpr, j)));
    for (auto [tpr, tpc] : pivth)
      if (!ring_.is_zero(D_.at(tpr, j))) pcol_addmul(j, tpc, ring_.neg(D_.at(tpr, j)));
    for (std::size_t k = 0; k < eta.size(); ++k)
      if (!ring_.is_zero(D_.at(eta[k], j)))
        pcol_addmul(j, eta_unit(static_cast<int>(k)), ring_.neg(D_.at(eta[k], j)));
  }
  {
    std::vector<int> front;
    for (auto [pr, pc] : pivmu) front.push_back(pc);
    for (auto [pr, pc] : pivh3) front.push_back(pc);
    for (auto [pr, pc] : pivth) front.push_back(pc);
    pcol_front_perm(d2_0, d2_w, front);
  }
  auto mu_unit = [&](int k) { return d2_0 + k; };

  // ---- d5 and d3 unit repairs, then the d1 block ----
  // One in-block GL move maps the eps stack (ordered eta, theta, rest) to
  // [I 0] on d5.
  std::vector<int> h7rows = minus(epsrest, theta);
  std::vector<int> eps_ordered;
  for (int i : eta) eps_ordered.push_back(i);
  for (int i : theta) eps_ordered.push_back(i);
  for (int i : h7rows) eps_ordered.push_back(i);
  if (d5_w > 0) {
    int k = static_cast<int>(eps_ordered.size());
    Mat E5(ring_, k, d5_w);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < d5_w; ++j) E5.at(i, j) = D_.at(eps_ordered[i], d5_0 + j);
    auto cr = col_reduce_tracked(E5);
    if (cr.rank != k || !matrix_eq(cr.reduced, hcat<R>({identity(ring_, k), zeros(ring_, k, d5_w - k)})))
      throw DecompositionFailure("stage 4: the eps stack does not reduce to [I 0] on d5");
    pcol_apply_gl(d5_0, d5_w, cr.transform);
  }
  // With unit d5 columns in hand, restore the zeros of the eps rows on d1 and
  // d3 (polluted by the decoupling row moves above).
  for (std::size_t k = 0; k < eps_ordered.size(); ++k) {
    int er = eps_ordered[k], ec = d5_0 + static_cast<int>(k);
    for (int j = 0; j < d2_0; ++j)
      if (!ring_.is_zero(D_.at(er, j))) pcol_addmul(j, ec, ring_.neg(D_.at(er, j)));
    for (int j = d3_0; j < d4_0; ++j)
      if (!ring_.is_zero(D_.at(er, j))) pcol_addmul(j, ec, ring_.neg(D_.at(er, j)));
  }
  // Same treatment for the kappa stack (ordered h3, h4) on d3.
  std::vector<int> h4rows = minus(kappa, h3rows);
  std::vector<int> kappa_ordered;
  for (int i : h3rows) kappa_ordered.push_back(i);
  for (int i : h4rows) kappa_ordered.push_back(i);
  if (d3_w > 0) {
    int k = static_cast<int>(kappa_ordered.size());
    Mat K3(ring_, k, d3_w);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < d3_w; ++j) K3.at(i, j) = D_.at(kappa_ordered[i], d3_0 + j);
    auto cr = col_reduce_tracked(K3);
    if (cr.rank != k || !matrix_eq(cr.reduced, hcat<R>({identity(ring_, k), zeros(ring_, k, d3_w - k)})))
      throw DecompositionFailure("stage 4: the kappa stack does not reduce to [I 0] on d3");
    pcol_apply_gl(d3_0, d3_w, cr.transform);
  }
  // kappa d1 entries via the fresh d3 units, mu d1 entries via the d2 units.
  for (std::size_t k = 0; k < kappa_ordered.size(); ++k) {
    int kr = kappa_ordered[k], kc = d3_0 + static_cast<int>(k);
    for (int j = 0; j < d2_0; ++j)
      if (!ring_.is_zero(D_.at(kr, j))) pcol_addmul(j, kc, ring_.neg(D_.at(kr, j)));
  }
  for (std::size_t k = 0; k < mu.size(); ++k) {
    int mr = mu[k], mc = mu_unit(static_cast<int>(k));
    for (int j = 0; j < d2_0; ++j)
      if (!ring_.is_zero(D_.at(mr, j))) pcol_addmul(j, mc, ring_.neg(D_.at(mr, j)));
  }
  // ---- d1: the h1 rows ----
  std::vector<int> W4 = minus(W3, mu);
  auto pivh1 = restricted_rref(Rows::D, W4, range_list(d1_0, d2_0));
  expect_rank("stage 4", "D on the alpha columns", static_cast<int>(pivh1.size()), inv_.r11);
  std::vector<int> h1rows;
  for (auto [pr, pc] : pivh1) h1rows.push_back(pr);
  for (auto [pr, pc] : pivh1) clear_row_range(pr, pc, d1_0, d2_0, &pivh1);
  {
    std::vector<int> front;
    for (auto [pr, pc] : pivh1) front.push_back(pc);
    pcol_front_perm(d1_0, d1_w, front);
  }
  // Whatever is left must be zero rows.
  std::vector<int> h10rows = minus(W4, h1rows);
  for (int i : h10rows)
    for (int j = 0; j < p; ++j)
      if (!ring_.is_zero(D_.at(i, j)))
        throw DecompositionFailure("stage 4: residual D row " + std::to_string(i) +
                                   " is nonzero");

  // ---- final row order h1..h10 ----
  std::vector<int> order;
  for (int i : h1rows) order.push_back(i);
  for (int i : mu) order.push_back(i);
  for (int i : h3rows) order.push_back(i);
  for (int i : h4rows) order.push_back(i);
  for (int i : eta) order.push_back(i);
  for (int i : theta) order.push_back(i);
  for (int i : h7rows) order.push_back(i);
  for (int i : psi) order.push_back(i);
  for (int i : delta) order.push_back(i);
  for (int i : h10rows) order.push_back(i);
  D_ = permute_rows(D_, order);
  T_ = permute_rows(T_, order);

  // ---- repair A, B, C from the recorded column transform ----
  auto PL = [&](int r0, int c0, int h, int w) { return block(Plocal_, r0, c0, h, w); };
  // The receive table forces these blocks of the recorded transform to be
  // zero; a violation means an illegal column move slipped through.
  const int forb[][4] = {
      {d1_0, d2_0, d1_w, d2_w}, {d1_0, d3_0, d1_w, d3_w}, {d1_0, d4_0, d1_w, d4_w},
      {d1_0, d5_0, d1_w, d5_w}, {d1_0, d6_0, d1_w, p - d6_0},
      {d2_0, d3_0, d2_w, d3_w}, {d2_0, d4_0, d2_w, d4_w}, {d2_0, d5_0, d2_w, d5_w},
      {d2_0, d6_0, d2_w, p - d6_0},
      {d3_0, d2_0, d3_w, d2_w}, {d3_0, d4_0, d3_w, d4_w}, {d3_0, d5_0, d3_w, d5_w},
      {d3_0, d6_0, d3_w, p - d6_0},
      {d4_0, d5_0, d4_w, d5_w}, {d4_0, d6_0, d4_w, p - d6_0},
      {d5_0, d2_0, d5_w, d2_w}, {d5_0, d4_0, d5_w, d4_w}, {d5_0, d6_0, d5_w, p - d6_0},
  };
  for (auto& f : forb)
    if (!is_zero_matrix(PL(f[0], f[1], f[2], f[3])))
      throw InternalInconsistency("stage 4: recorded column transform violates the receive table");
  Mat X11 = PL(d1_0, d1_0, d1_w, d1_w), X21 = PL(d2_0, d1_0, d2_w, d1_w);
  Mat X22 = PL(d2_0, d2_0, d2_w, d2_w), X31 = PL(d3_0, d1_0, d3_w, d1_w);
  Mat X33 = PL(d3_0, d3_0, d3_w, d3_w), X41 = PL(d4_0, d1_0, d4_w, d1_w);
  Mat X42 = PL(d4_0, d2_0, d4_w, d2_w), X43 = PL(d4_0, d3_0, d4_w, d3_w);
  Mat X44 = PL(d4_0, d4_0, d4_w, d4_w), X51 = PL(d5_0, d1_0, d5_w, d1_w);
  Mat X53 = PL(d5_0, d3_0, d5_w, d3_w), X55 = PL(d5_0, d5_0, d5_w, d5_w);
  // Row map induced on S_a: top rows [0, r2) split (d3, d4), pivot rows of
  // the lower identity [rb, rb + r1) split (d1, d2).
  Mat Mp = identity(ring_, A_.rows());
  set_block(Mp, 0, 0, X33);
  set_block(Mp, r4, 0, X43);
  set_block(Mp, r4, r4, X44);
  set_block(Mp, 0, rb, X31);
  set_block(Mp, r4, rb, X41);
  set_block(Mp, r4, rb + r5, X42);
  set_block(Mp, rb, rb, X11);
  set_block(Mp, rb + r5, rb, X21);
  set_block(Mp, rb + r5, rb + r5, X22);
  Mat Minv = invert_matrix(Mp);
  A_ = mul(Minv, A_);
  B_ = mul(Minv, B_);
  M_ = mul(Minv, M_);
  repair_b("stage 4");
  // Row map induced on S_c: rows (alpha, beta, gamma) = (r5, r4, r3).
  Mat K = identity(ring_, s);
  set_block(K, 0, 0, X11);
  set_block(K, r5, 0, X31);
  set_block(K, r5, r5, X33);
  set_block(K, r5 + r4, 0, X51);
  set_block(K, r5 + r4, r5, X53);
  set_block(K, r5 + r4, r5 + r4, X55);
  Mat Kinv = invert_matrix(K);
  C_ = mul(Kinv, C_);
  S_ = mul(Kinv, S_);
  if (!matrix_eq(A_, target_->S_a)) throw DecompositionFailure("stage 4: A is not S_a");
  if (!matrix_eq(C_, target_->S_c)) throw DecompositionFailure("stage 4: C is not S_c");
  if (!matrix_eq(D_, target_->S_d)) throw DecompositionFailure("stage 4: D is not S_d");
}

}  // namespace detail
}  // namespace dring
