#include "flowknot/gridflow.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace flowknot::gridflow {

using grid::add;
using grid::count_o;
using grid::count_x;
using grid::domain_boundary_ok;
using grid::enumerate_states;
using grid::maslov_index;
using grid::rect_domain;
using grid::rectangles;
using grid::rectangles_from;
using grid::state_name;
using grid::state_rank;
using grid::zero_domain;

namespace {

// Any domain from x to y: compose rectangles fixing one column at a time.
GridDomain base_domain(const GridDiagram& g, const GridState& x, const GridState& y) {
  GridDomain d = zero_domain(g, x);
  GridState cur = x;
  while (cur != y) {
    int c = 0;
    while (cur[c] == y[c]) ++c;
    int c2 = c + 1;
    while (cur[c2] != y[c]) ++c2;
    GridState next = cur;
    std::swap(next[c], next[c2]);
    auto rects = rectangles(g, cur, next);
    d = add(d, rect_domain(g, cur, rects.at(0)));
    cur = next;
  }
  d.to = y;
  return d;
}

// Subtract periodic row/column multiples until every row and column of cells
// touches zero. Keeps positivity and the boundary conditions.
void reduce(GridDomain& d) {
  const int n = static_cast<int>(d.mult.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (int r = 0; r < n; ++r) {
      int m = d.mult[0][r];
      for (int c = 1; c < n; ++c) m = std::min(m, d.mult[c][r]);
      if (m != 0) {
        for (int c = 0; c < n; ++c) d.mult[c][r] -= m;
        changed = true;
      }
    }
    for (int c = 0; c < n; ++c) {
      int m = *std::min_element(d.mult[c].begin(), d.mult[c].end());
      if (m != 0) {
        for (int r = 0; r < n; ++r) d.mult[c][r] -= m;
        changed = true;
      }
    }
  }
}

}  // namespace

std::vector<GridDomain> enumerate_positive_domains(const GridDiagram& g, const GridState& x,
                                                   const GridState& y, int mu_max) {
  grid::validate(g);
  if (mu_max > 4 || g.n > 5)
    throw std::invalid_argument("positive-domain enumeration is desk scale: mu <= 4, n <= 5");

  GridDomain base = base_domain(g, x, y);
  reduce(base);
  const int n = g.n;
  const int mu0 = maslov_index(g, base);
  // D = base + sum a_r Row_r + sum b_c Col_c with min_c b_c = 0; the budget
  // bounds sum a + sum b since every annulus adds 2 to the index.
  const int budget = (mu_max - mu0) / 2 - ((mu_max - mu0) % 2 != 0 && mu_max < mu0 ? 1 : 0);

  std::vector<GridDomain> out;
  std::vector<int> b(n, 0), a(n, 0);

  std::function<void(int)> choose_a = [&](int r) {
    if (r == n) {
      GridDomain d = base;
      d.from = x;
      d.to = y;
      for (int c = 0; c < n; ++c)
        for (int rr = 0; rr < n; ++rr) d.mult[c][rr] += a[rr] + b[c];
      if (!d.positive()) return;
      int mu = maslov_index(g, d);
      if (mu <= mu_max) out.push_back(std::move(d));
      return;
    }
    auto row_low = [&](int rr) {
      int l = -(base.mult[0][rr] + b[0]);
      for (int c = 1; c < n; ++c) l = std::max(l, -(base.mult[c][rr] + b[c]));
      return l;
    };
    int lo = row_low(r);
    int used = 0;
    for (int rr = 0; rr < r; ++rr) used += a[rr];
    for (int c = 0; c < n; ++c) used += b[c];
    // Remaining rows can each contribute at least their own lower bound.
    int reserve = 0;
    for (int rr = r + 1; rr < n; ++rr) reserve += row_low(rr);
    for (a[r] = lo; used + a[r] + reserve <= budget; ++a[r]) choose_a(r + 1);
    a[r] = 0;
  };

  std::function<void(int)> choose_b = [&](int c) {
    if (c == n) {
      if (*std::min_element(b.begin(), b.end()) != 0) return;
      choose_a(0);
      return;
    }
    int used = 0;
    for (int cc = 0; cc < c; ++cc) used += b[cc];
    // Rows can absorb index at most down to their positivity bound, which is
    // never below -max entry; a loose but safe cap on each b.
    int max_entry = 0;
    for (const auto& col : base.mult)
      for (int v : col) max_entry = std::max(max_entry, v);
    int cap = budget + n * max_entry;
    for (b[c] = 0; b[c] <= cap - used; ++b[c]) choose_b(c + 1);
    b[c] = 0;
  };

  if (budget >= -n * n) choose_b(0);

  std::sort(out.begin(), out.end(),
            [](const GridDomain& p, const GridDomain& q) { return p.mult < q.mult; });
  return out;
}

std::vector<Decomposition> decompositions(const GridDiagram& g, const GridDomain& d) {
  if (!d.positive()) throw std::invalid_argument("decompositions need a positive domain");
  if (!domain_boundary_ok(g, d)) throw std::invalid_argument("not a domain");

  std::vector<Decomposition> out;
  Decomposition cur;
  cur.states.push_back(d.from);

  std::function<void(const GridState&, const GridDomain&)> rec = [&](const GridState& at,
                                                                     const GridDomain& rest) {
    if (rest.is_zero()) {
      if (at == d.to) out.push_back(cur);
      return;
    }
    for (const auto& [r, y] : rectangles_from(g, at)) {
      if (!r.empty()) continue;
      GridDomain rd = rect_domain(g, at, r);
      bool fits = true;
      for (int c = 0; c < g.n && fits; ++c)
        for (int rr = 0; rr < g.n && fits; ++rr)
          if (rd.mult[c][rr] > rest.mult[c][rr]) fits = false;
      if (!fits) continue;
      GridDomain next = rest;
      next.from = y;
      for (int c = 0; c < g.n; ++c)
        for (int rr = 0; rr < g.n; ++rr) next.mult[c][rr] -= rd.mult[c][rr];
      cur.rects.push_back(r);
      cur.states.push_back(y);
      rec(y, next);
      cur.rects.pop_back();
      cur.states.pop_back();
    }
  };

  GridDomain rest = d;
  rec(d.from, rest);
  return out;
}

std::vector<BubbleEnd> detect_bubble_ends(const GridDiagram& g, const GridDomain& d) {
  if (!d.positive()) throw std::invalid_argument("bubble ends need a positive domain");
  std::vector<BubbleEnd> out;

  auto complement_decomposable = [&](const GridDomain& rest) {
    if (rest.is_zero()) return rest.from == rest.to;
    return !decompositions(g, rest).empty();
  };

  for (int r = 0; r < g.n; ++r) {
    bool contained = true;
    for (int c = 0; c < g.n && contained; ++c)
      if (d.mult[c][r] < 1) contained = false;
    if (!contained) continue;
    GridDomain rest = d;
    for (int c = 0; c < g.n; ++c) rest.mult[c][r] -= 1;
    if (complement_decomposable(rest)) {
      int oc = 0;
      while (g.O[oc] != r) ++oc;
      out.push_back({'H', r, oc});
    }
  }
  for (int c = 0; c < g.n; ++c) {
    bool contained = true;
    for (int r = 0; r < g.n && contained; ++r)
      if (d.mult[c][r] < 1) contained = false;
    if (!contained) continue;
    GridDomain rest = d;
    for (int r = 0; r < g.n; ++r) rest.mult[c][r] -= 1;
    if (complement_decomposable(rest)) out.push_back({'V', c, c});
  }
  return out;
}

std::vector<StripPair> pair_strips(const GridDiagram& g) {
  grid::validate(g);
  std::vector<StripPair> out;
  for (int c = 0; c < g.n; ++c) out.push_back({c, g.O[c], c});
  return out;
}

ModuliShape moduli_shape(const GridDiagram& g, const GridDomain& d) {
  if (!d.positive()) throw std::invalid_argument("moduli shapes need a positive domain");
  int mu = maslov_index(g, d);
  if (mu < 1 || mu > 3) throw std::invalid_argument("moduli shape catalog covers mu = 1, 2, 3");

  ModuliShape shape;
  shape.decs = decompositions(g, d);
  shape.bubbles = detect_bubble_ends(g, d);

  if (mu == 1) {
    if (shape.decs.size() == 1 && shape.bubbles.empty()) shape.kind = ModuliShape::point;
    return shape;
  }
  if (mu == 2) {
    if (shape.decs.size() + shape.bubbles.size() == 2) shape.kind = ModuliShape::interval;
    return shape;
  }
  // mu == 3: hexagon, octagon or the square of the non-empty rectangle
  if (shape.bubbles.empty() &&
      (shape.decs.size() == 4 || shape.decs.size() == 6 || shape.decs.size() == 8))
    shape.kind = ModuliShape::polygon;
  return shape;
}

namespace {

std::string domain_id(const GridDomain& d) {
  std::string id = state_name(d.from) + ":" + state_name(d.to) + ":";
  for (const auto& col : d.mult)
    for (int v : col) id += std::to_string(v) + ",";
  return id;
}

}  // namespace

ObstructionComplex obstruction_complex(const GridDiagram& g, int mu_max,
                                       const SignAssignmentGrid& signs) {
  grid::validate(g);
  if (g.n > 3) throw std::invalid_argument("obstruction complex is desk scale: n <= 3");

  ObstructionComplex oc;
  oc.mu_max = mu_max;
  std::vector<GridState> states = enumerate_states(g);
  std::map<std::string, int> gen_of;

  for (const auto& x : states)
    for (const auto& y : states)
      for (const auto& d : enumerate_positive_domains(g, x, y, mu_max)) {
        ObstructionComplex::Gen gen;
        gen.from = x;
        gen.to = y;
        gen.domain = d;
        gen.mu = maslov_index(g, d);
        gen.id = domain_id(d);
        gen_of[gen.id] = static_cast<int>(oc.gens.size());
        oc.gens.push_back(std::move(gen));
      }

  for (const auto& gen : oc.gens) oc.cx.add_generator(gen.id, gen.mu);

  for (const auto& gen : oc.gens) {
    std::vector<std::pair<std::string, long long>> terms;
    const GridDomain& d = gen.domain;

    // strip an empty rectangle off the left: d = R * E
    for (const auto& [r, w] : rectangles_from(g, gen.from)) {
      if (!r.empty()) continue;
      GridDomain rd = rect_domain(g, gen.from, r);
      GridDomain rest = d;
      rest.from = w;
      bool ok = true;
      for (int c = 0; c < g.n && ok; ++c)
        for (int rr = 0; rr < g.n && ok; ++rr) {
          rest.mult[c][rr] -= rd.mult[c][rr];
          if (rest.mult[c][rr] < 0) ok = false;
        }
      if (!ok) continue;
      terms.emplace_back(domain_id(rest), signs.sign(state_rank(gen.from), r));
    }

    // strip an empty rectangle off the right: d = E * R
    long long k_sign = (gen.mu % 2 == 0) ? 1 : -1;
    for (const auto& w : states) {
      for (const auto& [r, to] : rectangles_from(g, w)) {
        if (to != gen.to || !r.empty()) continue;
        GridDomain rd = rect_domain(g, w, r);
        GridDomain rest = d;
        rest.to = w;
        bool ok = true;
        for (int c = 0; c < g.n && ok; ++c)
          for (int rr = 0; rr < g.n && ok; ++rr) {
            rest.mult[c][rr] -= rd.mult[c][rr];
            if (rest.mult[c][rr] < 0) ok = false;
          }
        if (!ok) continue;
        terms.emplace_back(domain_id(rest), k_sign * signs.sign(state_rank(w), r));
      }
    }

    oc.cx.set_boundary(gen.id, terms);
  }
  return oc;
}

HomologyTable cd_homology(const GridDiagram& g, int mu_max) {
  if (mu_max < 2) throw std::invalid_argument("cd homology needs mu_max >= 2");
  SignAssignmentGrid signs = grid::solve_sign_assignment(g);
  ObstructionComplex oc = obstruction_complex(g, mu_max, signs);
  if (!verify_d_squared(oc.cx))
    throw std::runtime_error("obstruction complex differential does not square to zero");
  HomologyTable full = homology(oc.cx);
  HomologyTable out;
  for (const auto& [grading, grp] : full.groups)
    if (grading < mu_max) out.groups[grading] = grp;
  return out;
}

}  // namespace flowknot::gridflow
