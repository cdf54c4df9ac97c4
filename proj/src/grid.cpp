#include "flowknot/grid.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace flowknot::grid {

void validate(const GridDiagram& g) {
  if (g.n < 2) throw std::invalid_argument("grid size must be at least 2");
  auto check_perm = [&](const std::vector<int>& p, const char* name) {
    if (static_cast<int>(p.size()) != g.n)
      throw std::invalid_argument(std::string(name) + " has wrong length");
    std::vector<bool> seen(g.n, false);
    for (int v : p) {
      if (v < 0 || v >= g.n || seen[v])
        throw std::invalid_argument(std::string(name) + " is not a permutation");
      seen[v] = true;
    }
  };
  check_perm(g.X, "X");
  check_perm(g.O, "O");
  for (int i = 0; i < g.n; ++i)
    if (g.X[i] == g.O[i])
      throw std::invalid_argument("O and X share a cell in column " + std::to_string(i));
}

GridDiagram parse_grid(const std::string& text) {
  GridDiagram g;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw std::invalid_argument("empty grid input");
  if (text[first] == '{') {
    Json j = Json::parse(text);
    g.n = j.at("n").get<int>();
    g.X = j.at("X").get<std::vector<int>>();
    g.O = j.at("O").get<std::vector<int>>();
    validate(g);
    return g;
  }
  std::istringstream in(text);
  std::string line;
  bool have_n = false;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (!have_n) {
      g.n = std::stoi(head);
      have_n = true;
      continue;
    }
    std::vector<int>* target = nullptr;
    if (head == "X:" || head == "X")
      target = &g.X;
    else if (head == "O:" || head == "O")
      target = &g.O;
    else
      throw std::invalid_argument("unexpected grid line: " + line);
    int v;
    while (ls >> v) target->push_back(v);
  }
  validate(g);
  return g;
}

std::vector<GridState> enumerate_states(const GridDiagram& g) {
  GridState s(g.n);
  std::iota(s.begin(), s.end(), 0);
  std::vector<GridState> out;
  do {
    out.push_back(s);
  } while (std::next_permutation(s.begin(), s.end()));
  return out;
}

long long state_rank(const GridState& s) {
  const int n = static_cast<int>(s.size());
  long long rank = 0, fact = 1;
  for (int i = n - 2; i >= 0; --i) {
    fact *= n - 1 - i;
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (s[j] < s[i]) ++smaller;
    rank += smaller * fact;
  }
  return rank;
}

std::string state_name(const GridState& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(s[i]);
  }
  return out;
}

namespace {

GridRect annotate(const GridDiagram& g, const GridState& x, GridRect r) {
  const int n = g.n;
  r.interior_points = 0;
  for (int a = 1; a < r.width; ++a) {
    int c = (r.col + a) % n;
    int dr = (x[c] - r.row + n) % n;
    if (0 < dr && dr < r.height) ++r.interior_points;
  }
  r.o_count = r.x_count = 0;
  for (int a = 0; a < r.width; ++a) {
    int c = (r.col + a) % n;
    if ((g.O[c] - r.row + n) % n < r.height) ++r.o_count;
    if ((g.X[c] - r.row + n) % n < r.height) ++r.x_count;
  }
  return r;
}

}  // namespace

std::vector<GridRect> rectangles(const GridDiagram& g, const GridState& x, const GridState& y) {
  const int n = g.n;
  std::vector<int> diff;
  for (int c = 0; c < n; ++c)
    if (x[c] != y[c]) diff.push_back(c);
  if (diff.size() != 2) return {};
  int i = diff[0], j = diff[1];
  if (y[i] != x[j] || y[j] != x[i]) return {};

  GridRect r1{i, x[i], j - i, (x[j] - x[i] + n) % n, 0, 0, 0};
  GridRect r2{j, x[j], n - (j - i), (x[i] - x[j] + n) % n, 0, 0, 0};
  return {annotate(g, x, r1), annotate(g, x, r2)};
}

std::vector<OutgoingRect> rectangles_from(const GridDiagram& g, const GridState& x) {
  std::vector<OutgoingRect> out;
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) {
      GridState y = x;
      std::swap(y[i], y[j]);
      for (const GridRect& r : rectangles(g, x, y)) out.push_back({r, y});
    }
  return out;
}

bool GridDomain::positive() const {
  for (const auto& col : mult)
    for (int v : col)
      if (v < 0) return false;
  return true;
}

bool GridDomain::is_zero() const {
  for (const auto& col : mult)
    for (int v : col)
      if (v != 0) return false;
  return true;
}

GridDomain zero_domain(const GridDiagram& g, const GridState& x) {
  return {x, x, std::vector<std::vector<int>>(g.n, std::vector<int>(g.n, 0))};
}

GridDomain rect_domain(const GridDiagram& g, const GridState& x, const GridRect& r) {
  GridDomain d = zero_domain(g, x);
  for (int a = 0; a < r.width; ++a)
    for (int b = 0; b < r.height; ++b) d.mult[(r.col + a) % g.n][(r.row + b) % g.n] += 1;
  // the moved columns are the rectangle's left and right edges
  int cl = r.col, cr = (r.col + r.width) % g.n;
  std::swap(d.to[cl], d.to[cr]);
  return d;
}

GridDomain add(const GridDomain& a, const GridDomain& b) {
  if (a.to != b.from) throw std::invalid_argument("domains are not composable");
  GridDomain out = a;
  out.to = b.to;
  for (std::size_t c = 0; c < out.mult.size(); ++c)
    for (std::size_t r = 0; r < out.mult[c].size(); ++r) out.mult[c][r] += b.mult[c][r];
  return out;
}

bool domain_boundary_ok(const GridDiagram& g, const GridDomain& d) {
  const int n = g.n;
  // d(d_v D) = from - to at every lattice point; the horizontal condition is
  // then automatic since the boundary of a boundary vanishes.
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      int sw = d.mult[(c + n - 1) % n][(r + n - 1) % n];
      int se = d.mult[c][(r + n - 1) % n];
      int nw = d.mult[(c + n - 1) % n][r];
      int ne = d.mult[c][r];
      int expected = (d.from[c] == r ? 1 : 0) - (d.to[c] == r ? 1 : 0);
      if (sw - se - nw + ne != expected) return false;
    }
  return true;
}

int count_o(const GridDiagram& g, const GridDomain& d) {
  int total = 0;
  for (int c = 0; c < g.n; ++c) total += d.mult[c][g.O[c]];
  return total;
}

int count_x(const GridDiagram& g, const GridDomain& d) {
  int total = 0;
  for (int c = 0; c < g.n; ++c) total += d.mult[c][g.X[c]];
  return total;
}

int maslov_index(const GridDiagram& g, const GridDomain& d) {
  const int n = g.n;
  long long num = 0;
  auto corner_sum = [&](int c, int r) {
    return d.mult[(c + n - 1) % n][(r + n - 1) % n] + d.mult[c][(r + n - 1) % n] +
           d.mult[(c + n - 1) % n][r] + d.mult[c][r];
  };
  for (int c = 0; c < n; ++c) num += corner_sum(c, d.from[c]) + corner_sum(c, d.to[c]);
  if (num % 4 != 0)
    throw std::invalid_argument("point measure is not an integer: invalid domain");
  return static_cast<int>(num / 4);
}

Gradings relative_gradings(const GridDiagram& g) {
  std::vector<GridState> states = enumerate_states(g);
  const std::size_t count = states.size();
  Gradings out;
  out.maslov.assign(count, 0);
  out.alexander.assign(count, 0);
  std::vector<bool> known(count, false);
  known[0] = true;  // base state: the lexicographically least one

  std::vector<std::size_t> queue = {0};
  while (!queue.empty()) {
    std::size_t at = queue.back();
    queue.pop_back();
    for (const auto& [r, y] : rectangles_from(g, states[at])) {
      std::size_t yi = static_cast<std::size_t>(state_rank(y));
      // M(x) - M(y) = mu(R) - 2 #O(R), with mu(R) = 1 + 2 (interior points)
      int dm = 1 + 2 * r.interior_points - 2 * r.o_count;
      int da = r.x_count - r.o_count;  // A(x) - A(y)
      if (!known[yi]) {
        known[yi] = true;
        out.maslov[yi] = out.maslov[at] - dm;
        out.alexander[yi] = out.alexander[at] - da;
        queue.push_back(yi);
      }
    }
  }
  // Every connecting rectangle must tell the same story; rows and columns
  // change neither expression, so this pins well-definedness.
  for (std::size_t at = 0; at < count; ++at)
    for (const auto& [r, y] : rectangles_from(g, states[at])) {
      std::size_t yi = static_cast<std::size_t>(state_rank(y));
      if (out.maslov[at] - out.maslov[yi] != 1 + 2 * r.interior_points - 2 * r.o_count ||
          out.alexander[at] - out.alexander[yi] != r.x_count - r.o_count)
        throw std::runtime_error("relative gradings are inconsistent");
    }
  return out;
}

int SignAssignmentGrid::sign(long long state, const GridRect& r) const {
  auto it = signs.find({state, r.col, r.row, r.width, r.height});
  if (it == signs.end()) throw std::invalid_argument("no sign for this rectangle");
  return it->second;
}

void SignAssignmentGrid::flip(long long state, const GridRect& r) {
  auto it = signs.find({state, r.col, r.row, r.width, r.height});
  if (it == signs.end()) throw std::invalid_argument("no sign for this rectangle");
  it->second = -it->second;
}

namespace {

struct Gf2System {
  std::size_t vars = 0;
  std::vector<std::vector<std::uint64_t>> rows;  // variable bits, augmented bit last
  void add(const std::vector<std::size_t>& support, int rhs) {
    std::vector<std::uint64_t> row((vars + 1 + 63) / 64, 0);
    for (std::size_t v : support) row[v / 64] ^= std::uint64_t(1) << (v % 64);
    if (rhs) row[vars / 64] ^= std::uint64_t(1) << (vars % 64);
    rows.push_back(std::move(row));
  }
  // Solution with free variables zero; throws when inconsistent.
  std::vector<int> solve() {
    const std::size_t words = (vars + 1 + 63) / 64;
    std::vector<std::size_t> pivot_of_row;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < vars && rank < rows.size(); ++col) {
      std::size_t sel = rank;
      while (sel < rows.size() && !(rows[sel][col / 64] >> (col % 64) & 1)) ++sel;
      if (sel == rows.size()) continue;
      std::swap(rows[sel], rows[rank]);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == rank) continue;
        if (rows[i][col / 64] >> (col % 64) & 1)
          for (std::size_t w = 0; w < words; ++w) rows[i][w] ^= rows[rank][w];
      }
      pivot_of_row.push_back(col);
      ++rank;
    }
    for (std::size_t i = rank; i < rows.size(); ++i)
      if (rows[i][vars / 64] >> (vars % 64) & 1)
        throw std::runtime_error("sign assignment system is unsatisfiable");
    std::vector<int> sol(vars, 0);
    for (std::size_t i = 0; i < rank; ++i)
      sol[pivot_of_row[i]] = static_cast<int>(rows[i][vars / 64] >> (vars % 64) & 1);
    return sol;
  }
};

// 'h' for a height-1 row annulus, 'v' for a width-1 column annulus, 0 else.
char annulus_kind(const GridDiagram& g, const std::vector<int>& flat) {
  for (int r = 0; r < g.n; ++r) {
    bool row = true;
    for (int c = 0; c < g.n && row; ++c)
      for (int rr = 0; rr < g.n && row; ++rr)
        if (flat[c * g.n + rr] != (rr == r ? 1 : 0)) row = false;
    if (row) return 'h';
  }
  for (int c = 0; c < g.n; ++c) {
    bool col = true;
    for (int cc = 0; cc < g.n && col; ++cc)
      for (int r = 0; r < g.n && col; ++r)
        if (flat[cc * g.n + r] != (cc == c ? 1 : 0)) col = false;
    if (col) return 'v';
  }
  return 0;
}

}  // namespace

SignAssignmentGrid solve_sign_assignment(const GridDiagram& g, AnnulusConvention conv) {
  validate(g);
  std::vector<GridState> states = enumerate_states(g);

  using Key = std::tuple<long long, int, int, int, int>;
  std::map<Key, std::size_t> var_of;
  std::vector<std::vector<std::pair<GridRect, GridState>>> empty_rects(states.size());
  for (std::size_t s = 0; s < states.size(); ++s)
    for (const auto& [r, y] : rectangles_from(g, states[s])) {
      if (!r.empty()) continue;
      var_of[Key{static_cast<long long>(s), r.col, r.row, r.width, r.height}] = 0;
      empty_rects[s].push_back({r, y});
    }
  std::size_t next = 0;
  std::vector<Key> keys;
  for (auto& [k, v] : var_of) {
    v = next++;
    keys.push_back(k);
  }

  Gf2System sys;
  sys.vars = next;
  auto var = [&](long long s, const GridRect& r) {
    return var_of.at(Key{s, r.col, r.row, r.width, r.height});
  };

  for (std::size_t s = 0; s < states.size(); ++s) {
    // Group the composable pairs of empty rectangles by their total domain.
    std::map<std::pair<long long, std::vector<int>>,
             std::vector<std::pair<std::size_t, std::size_t>>>
        by_domain;
    for (const auto& [r1, w] : empty_rects[s]) {
      long long wr = state_rank(w);
      GridDomain d1 = rect_domain(g, states[s], r1);
      for (const auto& [r2, z] : empty_rects[static_cast<std::size_t>(wr)]) {
        GridDomain d = add(d1, rect_domain(g, w, r2));
        std::vector<int> flat;
        flat.reserve(g.n * g.n);
        for (const auto& col : d.mult) flat.insert(flat.end(), col.begin(), col.end());
        by_domain[{state_rank(z), std::move(flat)}].push_back({var(s, r1), var(wr, r2)});
      }
    }
    for (const auto& [key, decs] : by_domain) {
      if (decs.size() == 2) {
        // square rule: the two products must be opposite
        sys.add({decs[0].first, decs[0].second, decs[1].first, decs[1].second}, 1);
      } else if (decs.size() == 1) {
        char kind = annulus_kind(g, key.second);
        if (!kind)
          throw std::runtime_error("single-decomposition domain that is not a thin annulus");
        int product = (kind == 'v') ? conv.vertical : conv.horizontal;
        sys.add({decs[0].first, decs[0].second}, product == -1 ? 1 : 0);
      } else {
        throw std::runtime_error("a two-rectangle domain decomposed " +
                                 std::to_string(decs.size()) + " ways");
      }
    }
  }

  std::vector<int> sol = sys.solve();
  SignAssignmentGrid out;
  out.n = g.n;
  for (std::size_t v = 0; v < keys.size(); ++v) out.signs[keys[v]] = sol[v] ? -1 : 1;
  return out;
}

GradedChainComplex tilde_complex(const GridDiagram& g, Coeff coeff,
                                 const SignAssignmentGrid* signs) {
  validate(g);
  if (coeff == Coeff::integral && signs == nullptr)
    throw std::invalid_argument("integral tilde complex needs a sign assignment");

  std::vector<GridState> states = enumerate_states(g);
  Gradings gr = relative_gradings(g);

  GradedChainComplex cx;
  for (std::size_t s = 0; s < states.size(); ++s)
    cx.add_generator(state_name(states[s]), gr.maslov[s]);

  for (std::size_t s = 0; s < states.size(); ++s) {
    std::map<std::string, long long> acc;
    for (const auto& [r, y] : rectangles_from(g, states[s])) {
      if (!r.empty() || !r.marking_free()) continue;
      long long c = (coeff == Coeff::integral) ? signs->sign(static_cast<long long>(s), r) : 1;
      acc[state_name(y)] += c;
    }
    std::vector<std::pair<std::string, long long>> terms;
    for (const auto& [id, c] : acc) {
      long long v = (coeff == Coeff::gf2) ? c % 2 : c;
      if (v != 0) terms.emplace_back(id, v);
    }
    cx.set_boundary(state_name(states[s]), terms);
  }
  return cx;
}

HomologyTable grid_homology(const GridDiagram& g, Coeff coeff) {
  if (coeff == Coeff::gf2) return homology_gf2(tilde_complex(g, Coeff::gf2));
  SignAssignmentGrid signs = solve_sign_assignment(g);
  return homology(tilde_complex(g, Coeff::integral, &signs));
}

}  // namespace flowknot::grid
