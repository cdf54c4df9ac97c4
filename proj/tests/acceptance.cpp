// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "flowknot/flowcat.hpp"
#include "flowknot/gridflow.hpp"
#include "flowknot/khovanov.hpp"

using namespace flowknot;

namespace {

int failures = 0;
std::vector<std::string> notes;

void expect(bool cond, const std::string& what) {
  if (!cond) notes.push_back(what);
}

void run(int id, const std::string& label, const std::function<void()>& body,
         double limit_seconds = 0.0) {
  notes.clear();
  auto start = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    notes.push_back(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds)
    notes.push_back("runtime " + std::to_string(secs) + " s exceeds " +
                    std::to_string(limit_seconds) + " s");
  bool pass = notes.empty();
  if (!pass) ++failures;
  std::printf("criterion %2d %s (%.3f s) %s\n", id, pass ? "PASS" : "FAIL", secs, label.c_str());
  for (const auto& n : notes) std::printf("              - %s\n", n.c_str());
}

kh::LinkDiagram clasp() { return kh::parse_pd("PD[X(2,3,4,1), X(4,3,2,1)]"); }
kh::LinkDiagram kinked_clasp() { return kh::parse_pd("PD[X(2,3,5,1), X(4,3,2,1), X(6,6,5,4)]"); }

grid::GridDiagram unknot2() { return {2, {0, 1}, {1, 0}}; }
grid::GridDiagram unknot3() { return {3, {0, 1, 2}, {1, 2, 0}}; }
grid::GridDiagram unknot3b() { return {3, {0, 1, 2}, {2, 0, 1}}; }
grid::GridDiagram unknot4() { return {4, {0, 1, 2, 3}, {1, 2, 3, 0}}; }
grid::GridDiagram torus4() { return {4, {0, 1, 2, 3}, {2, 3, 0, 1}}; }
grid::GridDiagram trefoil5() { return {5, {0, 1, 2, 3, 4}, {2, 3, 4, 0, 1}}; }

// Independent brute-force rank of the tilde differential over the field with
// two elements: own state enumeration, own rectangle conditions, dense
// elimination. The total homology rank is #states - 2 rank(d).
long long oracle_tilde_rank(const grid::GridDiagram& g) {
  const int n = g.n;
  std::vector<std::vector<int>> states;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    states.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  auto rank_of = [&](const std::vector<int>& s) {
    long long r = 0, f = 1;
    for (int i = n - 2; i >= 0; --i) {
      f *= n - 1 - i;
      int smaller = 0;
      for (int j = i + 1; j < n; ++j)
        if (s[j] < s[i]) ++smaller;
      r += smaller * f;
    }
    return r;
  };

  std::vector<std::vector<int>> matrix(states.size(), std::vector<int>(states.size(), 0));
  for (const auto& x : states) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        // candidate rectangle leaving the state-point of column i eastwards
        // to the column j point: SW corner (i, x[i]), NE corner (j, x[j])
        int width = (j - i + n) % n;
        int height = (x[j] - x[i] + n) % n;
        bool ok = true;
        for (int a = 1; a < width && ok; ++a) {
          int c = (i + a) % n;
          int dr = (x[c] - x[i] + n) % n;
          if (0 < dr && dr < height) ok = false;  // interior state point
        }
        for (int a = 0; a < width && ok; ++a) {
          int c = (i + a) % n;
          if ((g.O[c] - x[i] + n) % n < height) ok = false;
          if ((g.X[c] - x[i] + n) % n < height) ok = false;
        }
        if (!ok) continue;
        std::vector<int> y = x;
        std::swap(y[i], y[j]);
        matrix[rank_of(y)][rank_of(x)] ^= 1;
      }
  }
  long long rank = 0;
  std::size_t row = 0;
  const std::size_t count = states.size();
  for (std::size_t col = 0; col < count && row < count; ++col) {
    std::size_t sel = row;
    while (sel < count && matrix[sel][col] == 0) ++sel;
    if (sel == count) continue;
    std::swap(matrix[sel], matrix[row]);
    for (std::size_t i = 0; i < count; ++i) {
      if (i == row) continue;
      if (matrix[i][col])
        for (std::size_t j = col; j < count; ++j) matrix[i][j] ^= matrix[row][j];
    }
    ++row;
    ++rank;
  }
  return static_cast<long long>(count) - 2 * rank;
}

void criterion1() {
  kh::CubeModel cube = kh::build_cube(clasp());
  expect(cube.gens.size() == 12, "expected 12 generators");
  expect(verify_d_squared(cube.cx), "d^2 != 0");
  HomologyTable h = homology(cube.cx);
  expect(h.total_rank() == 4, "total rank != 4");
  for (const auto& [g, grp] : h.groups)
    expect(grp.torsion.empty(), "torsion in grading " + std::to_string(g));
  kh::LinkDiagram unlink;
  unlink.unknots = 2;
  expect(kh::khovanov_homology(unlink).total_rank() == 4, "crossingless unlink rank != 4");
}

void criterion2() {
  // letters: a,b,c,d the arrows out of 1_11 (to 1x_10, x1_10, 1x_01, x1_01),
  // e,f,g,h the arrows from those generators into x_00; the broken flowline
  // through 1x_10 is named ea, and so on.
  const std::vector<std::pair<std::string, std::string>> letter_of_mid = {
      {"1x_10", "ea"}, {"x1_10", "fb"}, {"1x_01", "gc"}, {"x1_01", "hd"}};
  auto flowlines = [&](fc::LadybugPolicy policy) {
    fc::FlowCategory cat = fc::ls_category(clasp(), policy);
    int y = cat.index_of("1_11"), z = cat.index_of("x_00");
    std::set<std::string> boundary;
    std::set<std::set<std::string>> pairing;
    for (const auto& iv : cat.intervals.at({y, z})) {
      std::set<std::string> ends;
      for (int m : iv.end_mids)
        for (const auto& [mid, name] : letter_of_mid)
          if (cat.objects[m].id == mid) {
            boundary.insert(name);
            ends.insert(name);
          }
      pairing.insert(ends);
    }
    return std::make_pair(boundary, pairing);
  };

  auto [bound_r, right] = flowlines(fc::LadybugPolicy::right);
  expect(bound_r == std::set<std::string>{"ea", "fb", "gc", "hd"},
         "boundary set is not {ea, fb, gc, hd}");
  expect(right == std::set<std::set<std::string>>{{"ea", "gc"}, {"fb", "hd"}},
         "right policy did not produce {ea-gc, fb-hd}");

  auto [bound_l, left] = flowlines(fc::LadybugPolicy::left);
  expect(bound_l == std::set<std::string>{"ea", "fb", "gc", "hd"},
         "left boundary set is not {ea, fb, gc, hd}");
  expect(left == std::set<std::set<std::string>>{{"ea", "hd"}, {"fb", "gc"}},
         "left policy did not produce {ea-hd, fb-gc}");
}

void criterion3() {
  for (auto policy : {fc::LadybugPolicy::right, fc::LadybugPolicy::left}) {
    fc::FlowCategory cat = fc::ls_category(kinked_clasp(), policy);
    bool found = false;
    for (const auto& [key, polys] : cat.polygons) {
      std::size_t vertices = 0;
      for (const auto& p : polys) vertices += p.vertices.size();
      if (vertices != 12) continue;
      found = true;
      expect(polys.size() == 2, "12 flowlines did not split into two cycles");
      for (const auto& p : polys)
        expect(p.vertices.size() == 6, "cycle length " + std::to_string(p.vertices.size()) +
                                           " instead of 6");
    }
    expect(found, "no index-3 pair with 12 fully broken flowlines");
  }
}

void criterion4() {
  fc::FlowCategory c2 = fc::hypercube_category(2);
  auto iv = c2.intervals.at({c2.index_of("11"), c2.index_of("00")});
  expect(iv.size() == 1, "Mod(11,00) is not a single interval");
  std::set<std::string> ends;
  for (int m : iv[0].end_mids) ends.insert(c2.objects[m].id);
  expect(ends == std::set<std::string>{"10", "01"},
         "interval endpoints are not the broken flowlines ab, cd");

  fc::FlowCategory c3 = fc::hypercube_category(3);
  auto polys = c3.polygons.at({c3.index_of("111"), c3.index_of("000")});
  expect(polys.size() == 1 && polys[0].vertices.size() == 6, "Mod(111,000) is not a hexagon");
  fc::Permutohedron p3 = fc::permutohedron(3);
  expect(fc::hexagon_boundary_cycle(p3).size() == 6, "permutohedron Pi^2 boundary is not a 6-cycle");

  for (int n = 2; n <= 4; ++n) {
    kh::SignAssignment sa = kh::standard_sign_assignment(n);
    for (unsigned u = 0; u < (1u << n); ++u)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          if (!(u >> i & 1) || !(u >> j & 1)) continue;
          int neg =
              sa.s(u, i) + sa.s(u, j) + sa.s(u & ~(1u << i), j) + sa.s(u & ~(1u << j), i);
          expect(neg % 2 == 1, "face without an odd number of positive edges");
        }
  }
}

void criterion5() {
  fc::CWData cw = fc::cjs_realize(fc::hypercube_category(2), 2);
  std::multiset<int> dims;
  for (const auto& cell : cw.cells) dims.insert(cell.dim);
  expect(dims == std::multiset<int>{2, 3, 3, 4}, "square category cells are not 2,3,3,4");
  HomologyTable h = homology(fc::cw_complex(cw));
  expect(h.total_rank() == 0, "square realization is not acyclic");

  const int shift = 2;
  for (const auto& d : {clasp(), kinked_clasp(), kh::parse_pd("PD[X(1,2,2,1)]")}) {
    HomologyTable kh_h = kh::khovanov_homology(d);
    for (auto policy : {fc::LadybugPolicy::right, fc::LadybugPolicy::left}) {
      fc::FlowCategory cat = fc::ls_category(d, policy);
      HomologyTable cw_h = homology(fc::cw_complex(fc::cjs_realize(cat, shift)));
      expect(cw_h.same_as(kh_h.shifted(shift)),
             "cellular homology does not match the shifted Khovanov homology");
    }
  }
}

void criterion6() {
  grid::GridDiagram g = trefoil5();
  auto states = grid::enumerate_states(g);
  expect(states.size() == 120, "trefoil grid does not have 120 states");

  for (const auto& x : states)
    for (const auto& y : states) {
      int diff = 0;
      for (int c = 0; c < g.n; ++c)
        if (x[c] != y[c]) ++diff;
      std::size_t count = grid::rectangles(g, x, y).size();
      if (diff == 2)
        expect(count == 2, "two-column pair without exactly 2 rectangles");
      else
        expect(count == 0, "rectangles between states not differing in two columns");
    }

  // index pins: empty rectangle 1, L-shape 2, marked rectangle 3, annulus 2
  grid::GridState x0 = {0, 1, 2};
  grid::GridDiagram g3 = unknot3();
  grid::GridRect first{0, 0, 1, 1, 0, 0, 0};
  expect(grid::maslov_index(g3, grid::rect_domain(g3, x0, first)) == 1,
         "empty rectangle index != 1");

  grid::GridDiagram g6{6, {0, 1, 2, 3, 4, 5}, {1, 2, 3, 4, 5, 0}};
  grid::GridState x6 = {0, 5, 4, 3, 2, 1};
  grid::GridDomain ell = grid::zero_domain(g6, x6);
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 2; ++r) ell.mult[c][r] = 1;
  for (int c = 0; c < 2; ++c)
    for (int r = 2; r < 4; ++r) ell.mult[c][r] = 1;
  ell.to = {4, 5, 2, 3, 0, 1};
  expect(grid::domain_boundary_ok(g6, ell), "L-shape boundary conditions fail");
  expect(grid::maslov_index(g6, ell) == 2, "L-shape index != 2");

  grid::GridDomain marked = grid::zero_domain(g3, x0);
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 2; ++r) marked.mult[c][r] = 1;
  marked.to = {2, 1, 0};
  expect(grid::maslov_index(g3, marked) == 3, "marked rectangle index != 3");

  grid::GridDomain annulus = grid::zero_domain(g3, x0);
  for (int c = 0; c < 3; ++c) annulus.mult[c][0] = 1;
  expect(grid::maslov_index(g3, annulus) == 2, "annulus index != 2");
}

void criterion7() {
  // the oracle runs first and must agree with the frozen expected ranks
  expect(oracle_tilde_rank(unknot2()) == 2, "oracle rank of the 2x2 unknot != 2");
  expect(oracle_tilde_rank(unknot3()) == 4, "oracle rank of the 3x3 unknot != 4");
  expect(oracle_tilde_rank(trefoil5()) == 48, "oracle rank of the trefoil grid != 48");

  for (const auto& g : {unknot2(), unknot3(), unknot3b(), unknot4(), torus4()}) {
    expect(verify_d_squared_mod2(grid::tilde_complex(g, grid::Coeff::gf2)),
           "d^2 != 0 over the two-element field");
    grid::SignAssignmentGrid s = grid::solve_sign_assignment(g);
    expect(verify_d_squared(grid::tilde_complex(g, grid::Coeff::integral, &s)),
           "d^2 != 0 over Z with solved signs");
  }

  expect(grid::grid_homology(unknot2(), grid::Coeff::gf2).total_rank() == 2,
         "2x2 tilde rank != 2");
  expect(grid::grid_homology(unknot3(), grid::Coeff::gf2).total_rank() == 4,
         "3x3 tilde rank != 4");
  expect(grid::grid_homology(trefoil5(), grid::Coeff::gf2).total_rank() == 48,
         "trefoil tilde rank != 48");
}

void criterion8() {
  using gridflow::decompositions;
  {
    grid::GridDiagram g{4, {1, 3, 0, 2}, {3, 2, 1, 0}};
    grid::GridState x = {0, 1, 2, 3};
    grid::GridDomain d = grid::zero_domain(g, x);
    d.mult[0][0] = d.mult[2][2] = 1;
    d.to = {1, 0, 3, 2};
    expect(decompositions(g, d).size() == 2, "disjoint rectangles: decompositions != 2");
  }
  {
    grid::GridDiagram g{6, {0, 1, 2, 3, 4, 5}, {1, 2, 3, 4, 5, 0}};
    grid::GridState x = {0, 5, 4, 3, 2, 1};
    grid::GridDomain d = grid::zero_domain(g, x);
    for (int c = 0; c < 4; ++c)
      for (int r = 0; r < 2; ++r) d.mult[c][r] = 1;
    for (int c = 0; c < 2; ++c)
      for (int r = 2; r < 4; ++r) d.mult[c][r] = 1;
    d.to = {4, 5, 2, 3, 0, 1};
    expect(decompositions(g, d).size() == 2, "L-shape: decompositions != 2");
  }
  {
    grid::GridDiagram g{6, {1, 0, 3, 2, 5, 4}, {2, 3, 4, 5, 0, 1}};
    grid::GridState x = {0, 1, 2, 3, 4, 5};
    grid::GridDomain d = grid::zero_domain(g, x);
    d.mult[0][0] = d.mult[2][2] = d.mult[4][4] = 1;
    d.to = {1, 0, 3, 2, 5, 4};
    expect(decompositions(g, d).size() == 6, "three independent rectangles: decompositions != 6");
  }
  {
    grid::GridDiagram g{4, {1, 3, 0, 2}, {3, 2, 1, 0}};
    grid::GridState x = {0, 2, 1, 3};
    grid::GridDomain d = grid::zero_domain(g, x);
    d.mult[0][0] = d.mult[0][1] = 1;
    d.mult[1][0] = d.mult[1][1] = d.mult[1][2] = 1;
    d.mult[2][1] = d.mult[2][2] = 1;
    d.to = {2, 3, 0, 1};
    expect(decompositions(g, d).size() == 8, "staircase domain: decompositions != 8");
  }
  {
    grid::GridDiagram g = unknot3();
    grid::GridState x = {0, 1, 2};
    grid::GridDomain d = grid::zero_domain(g, x);
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < 2; ++r) d.mult[c][r] = 1;
    d.to = {2, 1, 0};
    expect(decompositions(g, d).size() == 4, "non-empty rectangle: decompositions != 4");
  }
  for (const auto& g : {unknot3(), unknot3b()}) {
    auto states = grid::enumerate_states(g);
    for (const auto& x : states)
      for (const auto& y : states)
        for (const auto& d : gridflow::enumerate_positive_domains(g, x, y, 2)) {
          if (d.is_zero() || grid::maslov_index(g, d) != 2) continue;
          std::size_t ends = gridflow::decompositions(g, d).size() +
                             gridflow::detect_bubble_ends(g, d).size();
          expect(ends == 2, "a mu = 2 domain whose ends do not add to 2");
        }
  }
}

void criterion9() {
  for (const auto& g : {unknot2(), unknot3(), unknot3b()}) {
    grid::SignAssignmentGrid signs = grid::solve_sign_assignment(g);
    gridflow::ObstructionComplex oc = gridflow::obstruction_complex(g, 3, signs);
    expect(verify_d_squared(oc.cx), "obstruction d^2 != 0");
    HomologyTable h = gridflow::cd_homology(g, 3);
    expect(h.groups.at(0).betti == 1 && h.groups.at(0).torsion.empty(),
           "H_0 of the obstruction complex is not Z");
    expect(h.groups.at(1).betti == 0 && h.groups.at(1).torsion.empty(),
           "H_1 of the obstruction complex is not 0");
  }
}

void criterion10() {
  for (const auto& g : {unknot2(), unknot3(), unknot4(), torus4(), trefoil5()}) {
    auto pairs = gridflow::pair_strips(g);
    expect(static_cast<int>(pairs.size()) == g.n, "strip pair count != n");
    std::set<int> keys;
    for (const auto& p : pairs) {
      expect(p.h_row == g.O[p.o_column] && p.v_col == p.o_column,
             "strip pair not keyed by its O marking");
      keys.insert(p.o_column);
    }
    expect(static_cast<int>(keys.size()) == g.n, "strip pairs do not cover all O markings");
  }
}

}  // namespace

int main() {
  run(1, "unlink clasp: 12 generators, d^2 = 0, rank-4 torsion-free homology", criterion1, 1.0);
  run(2, "ladybug pinning: boundary {ea,fb,gc,hd}; right {ea-gc, fb-hd}, left {ea-hd, fb-gc}",
      criterion2);
  run(3, "two hexagons: a 12-flowline pair splits into two 6-cycles under either uniform policy",
      criterion3);
  run(4, "hypercube: Mod(11,00) interval {ab,cd}; Mod(111,000) hexagon; odd positive faces",
      criterion4);
  run(5, "cjs realization: square gives cells 2,3,3,4 and a point; corpus matches shifted homology",
      criterion5);
  run(6, "grid basics: 120 states, 2 rectangles per pair, indices 1/2/3/2", criterion6);
  run(7, "grid homology: d^2 = 0 across the corpus; ranks 2, 4, 48 against the oracle",
      criterion7, 10.0);
  run(8, "decomposition counts 2/2/6/8/4 and two ends for every mu = 2 domain", criterion8);
  run(9, "obstruction complex: d^2 = 0, homology Z in grading 0 and zero in grading 1",
      criterion9, 30.0);
  run(10, "strip pairing: n horizontal/vertical pairs keyed by the O markings", criterion10);

  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  else std::printf("all 10 criteria passed\n");
  return failures ? 1 : 0;
}
