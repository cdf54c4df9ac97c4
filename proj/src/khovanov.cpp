#include "flowknot/khovanov.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <climits>
#include <set>
#include <stdexcept>

namespace flowknot::kh {

namespace {

int popcount(unsigned v) { return std::popcount(v); }

std::string vertex_bits(unsigned v, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if (v >> i & 1) s[i] = '1';
  return s;
}

}  // namespace

void validate(const LinkDiagram& d) {
  if (d.unknots < 0) throw std::invalid_argument("negative unknot count");
  std::map<int, int> uses;
  for (const auto& t : d.crossings)
    for (int a : t) ++uses[a];
  for (const auto& [arc, k] : uses)
    if (k != 2)
      throw std::invalid_argument("arc label " + std::to_string(arc) + " used " +
                                  std::to_string(k) + " times, expected 2");
}

LinkDiagram parse_pd(const std::string& text) {
  LinkDiagram d;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw std::invalid_argument("empty PD input");

  if (text[first] == '[' || text[first] == '{') {
    Json j = Json::parse(text);
    const Json* pd = &j;
    if (j.is_object()) {
      if (j.contains("unknots")) d.unknots = j.at("unknots").get<int>();
      pd = &j.at("pd");
    }
    for (const auto& t : *pd) {
      if (!t.is_array() || t.size() != 4)
        throw std::invalid_argument("malformed PD tuple: expected 4 arc labels");
      d.crossings.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), t[3].get<int>()});
    }
    validate(d);
    return d;
  }

  // Text form: PD[X(a,b,c,d), ...] with optional `unknots=k` lines.
  auto upos = text.find("unknots");
  if (upos != std::string::npos) {
    auto eq = text.find('=', upos);
    if (eq == std::string::npos) throw std::invalid_argument("malformed unknots field");
    d.unknots = std::stoi(text.substr(eq + 1));
  }
  auto pd_at = text.find("PD[");
  if (pd_at == std::string::npos) throw std::invalid_argument("no PD[...] block found");
  std::size_t i = pd_at + 3;
  while (i < text.size() && text[i] != ']') {
    if (text[i] == '(' || (text[i] == '[' && i > pd_at + 2)) {
      char close = text[i] == '(' ? ')' : ']';
      ++i;
      std::array<int, 4> tuple{};
      for (int k = 0; k < 4; ++k) {
        while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
          ++i;
        std::size_t used = 0;
        tuple[k] = std::stoi(text.substr(i), &used);
        if (used == 0) throw std::invalid_argument("malformed PD tuple");
        i += used;
      }
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      if (i >= text.size() || text[i] != close) throw std::invalid_argument("malformed PD tuple");
      ++i;
      d.crossings.push_back(tuple);
    } else {
      ++i;
    }
  }
  validate(d);
  return d;
}

int Circle::min_arc() const { return arcs.empty() ? INT_MAX : arcs.front(); }

std::vector<int> Circle::arc_set() const {
  std::vector<int> s = arcs;
  std::sort(s.begin(), s.end());
  return s;
}

Resolution resolve(const LinkDiagram& d, unsigned vertex) {
  validate(d);
  const int n = d.n();
  if (n > 0 && vertex >> n) throw std::invalid_argument("vertex code out of range");

  // The two slot positions of each arc, lexicographically ordered.
  std::map<int, std::vector<std::pair<int, int>>> slots;
  for (int c = 0; c < n; ++c)
    for (int p = 0; p < 4; ++p) slots[d.crossings[c][p]].push_back({c, p});

  auto partner = [&](int c, int p) {
    static const int join0[4] = {1, 0, 3, 2};  // smoothing 0: (0,1),(2,3)
    static const int join1[4] = {3, 2, 1, 0};  // smoothing 1: (1,2),(3,0)
    return (vertex >> c & 1) ? join1[p] : join0[p];
  };
  auto is_forward = [&](int c, int p, int q) {
    if (vertex >> c & 1) return (p == 1 && q == 2) || (p == 3 && q == 0);
    return (p == 0 && q == 1) || (p == 2 && q == 3);
  };
  auto arc_at = [&](int c, int p) { return d.crossings[c][p]; };
  auto other_slot = [&](int arc, int c, int p) {
    const auto& s = slots.at(arc);
    return (s[0] == std::make_pair(c, p)) ? s[1] : s[0];
  };

  Resolution r;
  r.vertex = vertex;
  std::set<int> visited;
  for (const auto& [start, ss] : slots) {
    if (visited.count(start)) continue;
    Circle circ;
    int arc = start;
    auto [c, p] = ss[1];  // traverse the start arc towards its later slot
    while (true) {
      visited.insert(arc);
      circ.arcs.push_back(arc);
      int q = partner(c, p);
      circ.passages.push_back({c, is_forward(c, p, q)});
      int next = arc_at(c, q);
      if (next == start) break;
      auto exit = other_slot(next, c, q);
      arc = next;
      c = exit.first;
      p = exit.second;
    }
    // Rotate so the minimal arc comes first; passages ride along.
    std::size_t k = std::min_element(circ.arcs.begin(), circ.arcs.end()) - circ.arcs.begin();
    std::rotate(circ.arcs.begin(), circ.arcs.begin() + k, circ.arcs.end());
    std::rotate(circ.passages.begin(), circ.passages.begin() + k, circ.passages.end());
    r.circles.push_back(std::move(circ));
  }
  std::sort(r.circles.begin(), r.circles.end(),
            [](const Circle& a, const Circle& b) { return a.min_arc() < b.min_arc(); });
  for (int u = 1; u <= d.unknots; ++u) {
    Circle circ;
    circ.unknot_id = u;
    r.circles.push_back(std::move(circ));
  }
  return r;
}

int SignAssignment::s(unsigned u, int c) const {
  if (c < 0 || c >= n || !(u >> c & 1)) throw std::invalid_argument("not a downward edge");
  return popcount(u & ((1u << c) - 1)) % 2;
}

SignAssignment standard_sign_assignment(int n) {
  if (n < 0) throw std::invalid_argument("negative cube dimension");
  return SignAssignment{n};
}

namespace {

// Key identifying a circle across neighbouring resolutions.
std::vector<int> circle_key(const Circle& c) {
  if (c.arcs.empty()) return {-c.unknot_id};
  return c.arc_set();
}

}  // namespace

EdgeMap edge_map(const Resolution& from, const Resolution& to) {
  unsigned diff = from.vertex ^ to.vertex;
  if (popcount(diff) != 1 || !(from.vertex & diff))
    throw std::invalid_argument("edge_map: vertices not adjacent (need u -> v dropping one bit)");

  const std::size_t nf = from.circles.size(), nt = to.circles.size();
  std::map<std::vector<int>, int> to_index;
  for (std::size_t j = 0; j < nt; ++j) to_index[circle_key(to.circles[j])] = static_cast<int>(j);

  std::vector<int> ident(nf, -1);
  std::vector<int> from_odd, to_odd;
  std::vector<bool> matched_to(nt, false);
  for (std::size_t i = 0; i < nf; ++i) {
    auto it = to_index.find(circle_key(from.circles[i]));
    if (it != to_index.end()) {
      ident[i] = it->second;
      matched_to[it->second] = true;
    } else {
      from_odd.push_back(static_cast<int>(i));
    }
  }
  for (std::size_t j = 0; j < nt; ++j)
    if (!matched_to[j]) to_odd.push_back(static_cast<int>(j));

  EdgeMap em;
  em.images.resize(std::size_t(1) << nf);
  if (from_odd.size() == 2 && to_odd.size() == 1) {
    // Merge: m(1,1)=1, m(1,x)=m(x,1)=x, m(x,x)=0.
    for (unsigned mask = 0; mask < em.images.size(); ++mask) {
      bool a = mask >> from_odd[0] & 1, b = mask >> from_odd[1] & 1;
      if (a && b) continue;
      unsigned out = 0;
      for (std::size_t i = 0; i < nf; ++i)
        if (ident[i] >= 0 && (mask >> i & 1)) out |= 1u << ident[i];
      if (a || b) out |= 1u << to_odd[0];
      em.images[mask].push_back(out);
    }
  } else if (from_odd.size() == 1 && to_odd.size() == 2) {
    // Split: Delta(1) = 1x + x1, Delta(x) = xx.
    for (unsigned mask = 0; mask < em.images.size(); ++mask) {
      unsigned base = 0;
      for (std::size_t i = 0; i < nf; ++i)
        if (ident[i] >= 0 && (mask >> i & 1)) base |= 1u << ident[i];
      if (mask >> from_odd[0] & 1) {
        em.images[mask].push_back(base | 1u << to_odd[0] | 1u << to_odd[1]);
      } else {
        em.images[mask].push_back(base | 1u << to_odd[1]);
        em.images[mask].push_back(base | 1u << to_odd[0]);
      }
    }
  } else {
    throw std::invalid_argument("edge_map: smoothing change is neither a merge nor a split");
  }
  return em;
}

int CubeModel::gen_at(unsigned vertex, unsigned labels) const {
  return vertex_first_gen[vertex] + static_cast<int>(labels);
}

CubeModel build_cube(const LinkDiagram& d) {
  validate(d);
  const int n = d.n();
  if (n > 16) throw std::invalid_argument("diagram too large for the cube builder");

  CubeModel cube;
  cube.diagram = d;
  cube.n = n;
  const unsigned verts = 1u << n;
  cube.res.reserve(verts);
  for (unsigned v = 0; v < verts; ++v) cube.res.push_back(resolve(d, v));

  cube.vertex_first_gen.assign(verts, 0);
  for (unsigned v = 0; v < verts; ++v) {
    cube.vertex_first_gen[v] = static_cast<int>(cube.gens.size());
    const std::size_t k = cube.res[v].circles.size();
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      std::string labels(k, '1');
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1) labels[i] = 'x';
      std::string id = n > 0 ? labels + "_" + vertex_bits(v, n) : labels;
      cube.gens.push_back({v, mask, id});
      cube.gen_index[id] = static_cast<int>(cube.gens.size()) - 1;
      cube.cx.add_generator(id, popcount(v));
    }
  }

  SignAssignment sa = standard_sign_assignment(n);
  std::vector<std::vector<std::pair<std::string, long long>>> terms(cube.gens.size());
  for (unsigned u = 0; u < verts; ++u) {
    for (int c = 0; c < n; ++c) {
      if (!(u >> c & 1)) continue;
      unsigned v = u & ~(1u << c);
      EdgeMap em = edge_map(cube.res[u], cube.res[v]);
      long long sign = sa.s(u, c) ? -1 : 1;
      for (unsigned mask = 0; mask < em.images.size(); ++mask) {
        int src = cube.gen_at(u, mask);
        for (unsigned out : em.images[mask])
          terms[src].emplace_back(cube.gens[cube.gen_at(v, out)].id, sign);
      }
    }
  }
  for (std::size_t g = 0; g < cube.gens.size(); ++g)
    cube.cx.set_boundary(cube.gens[g].id, terms[g]);
  return cube;
}

GradedChainComplex khovanov_complex(const LinkDiagram& d) { return build_cube(d).cx; }

HomologyTable khovanov_homology(const LinkDiagram& d) { return homology(build_cube(d).cx); }

int quantum_grading(const CubeModel& cube, int gen) {
  const auto& g = cube.gens.at(gen);
  int k = static_cast<int>(cube.res[g.vertex].circles.size());
  int xs = popcount(g.labels);
  return popcount(g.vertex) + (k - xs) - xs;
}

namespace {

// Positions of the two strand passages of crossing c, all on one circle, or
// circle -1 if they sit on different circles.
struct CrossingOnCircle {
  int circle = -1;
  std::vector<std::size_t> pos;
  bool forward = false;
};

CrossingOnCircle locate(const Resolution& r, int crossing) {
  CrossingOnCircle out;
  for (std::size_t ci = 0; ci < r.circles.size(); ++ci) {
    const auto& ps = r.circles[ci].passages;
    for (std::size_t k = 0; k < ps.size(); ++k) {
      if (ps[k].crossing != crossing) continue;
      if (out.pos.empty()) {
        out.circle = static_cast<int>(ci);
        out.forward = ps[k].forward;
      } else if (out.circle != static_cast<int>(ci)) {
        out.circle = -1;
        return out;
      } else if (ps[k].forward != out.forward) {
        throw std::runtime_error("inconsistent surgery-arc side; PD code is not planar");
      }
      out.pos.push_back(k);
    }
    if (out.pos.size() == 2) break;
  }
  return out;
}

bool interleaved(std::size_t a1, std::size_t a2, std::size_t b1, std::size_t b2) {
  // One endpoint of b strictly between a1 < a2, the other outside.
  auto inside = [&](std::size_t x) { return a1 < x && x < a2; };
  return inside(b1) != inside(b2);
}

}  // namespace

std::array<CirclePair, 2> ladybug_circle_matching(const Resolution& corner, int ci, int cj,
                                                  bool right) {
  if (!(corner.vertex >> ci & 1) || !(corner.vertex >> cj & 1))
    throw std::invalid_argument("ladybug corner must have both crossings 1-smoothed");
  CrossingOnCircle a = locate(corner, ci), b = locate(corner, cj);
  if (a.circle < 0 || b.circle < 0 || a.circle != b.circle)
    throw std::invalid_argument("not a ladybug configuration: endpoints on several circles");
  const Circle& z = corner.circles[a.circle];
  if (!interleaved(std::min(a.pos[0], a.pos[1]), std::max(a.pos[0], a.pos[1]), b.pos[0], b.pos[1]))
    throw std::invalid_argument("not a ladybug configuration: arcs not interleaved");
  if (a.forward == b.forward)
    throw std::runtime_error("surgery arcs on the same side of the circle; PD code is not planar");

  // The four endpoints in stored cyclic order. The stored traversal is the
  // positively oriented boundary of the side holding the arc whose passages
  // run forward; the right matching joins the surgered circles that overlap
  // along the spans running from an endpoint of the other arc to an endpoint
  // of that one.
  struct Endpoint {
    std::size_t pos;
    bool of_ci;
  };
  std::vector<Endpoint> ends = {{a.pos[0], true}, {a.pos[1], true}, {b.pos[0], false}, {b.pos[1], false}};
  std::sort(ends.begin(), ends.end(), [](const Endpoint& l, const Endpoint& r) { return l.pos < r.pos; });

  const std::size_t len = z.arcs.size();
  auto span_arcs = [&](std::size_t from_pos, std::size_t to_pos) {
    std::vector<int> arcs;
    for (std::size_t k = (from_pos + 1) % len; ; k = (k + 1) % len) {
      arcs.push_back(z.arcs[k]);
      if (k == to_pos) break;
    }
    std::sort(arcs.begin(), arcs.end());
    return arcs;
  };
  auto halves = [&](bool of_ci) {
    std::vector<std::size_t> ps;
    for (const auto& e : ends)
      if (e.of_ci == of_ci) ps.push_back(e.pos);
    return std::array<std::vector<int>, 2>{span_arcs(ps[0], ps[1]), span_arcs(ps[1], ps[0])};
  };
  auto ci_halves = halves(true);
  auto cj_halves = halves(false);

  const bool ci_is_a = a.forward;  // the arc whose side the orientation bounds
  std::array<CirclePair, 2> matching;
  int found = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    const Endpoint& from = ends[k];
    const Endpoint& to = ends[(k + 1) % 4];
    // span from a B-endpoint to an A-endpoint
    if (from.of_ci == ci_is_a || to.of_ci != ci_is_a) continue;
    int probe = span_arcs(from.pos, to.pos).front();
    auto contains = [&](const std::vector<int>& s) {
      return std::binary_search(s.begin(), s.end(), probe);
    };
    CirclePair pair;
    pair.first = contains(ci_halves[0]) ? ci_halves[0] : ci_halves[1];
    pair.second = contains(cj_halves[0]) ? cj_halves[0] : cj_halves[1];
    matching[found++] = pair;
  }
  if (found != 2) throw std::runtime_error("ladybug matching did not produce two spans");

  if (!right) {  // complementary pairing
    std::swap(matching[0].second, matching[1].second);
  }
  if (matching[1].first < matching[0].first) std::swap(matching[0], matching[1]);
  return matching;
}

std::vector<LadybugFace> detect_ladybugs(const LinkDiagram& d) {
  const int n = d.n();
  std::vector<LadybugFace> out;
  if (n < 2) return out;
  CubeModel cube = build_cube(d);

  auto broken_count = [&](int y, int z) {
    int count = 0;
    for (const auto& [mid, a] : cube.cx.boundary_of(y)) {
      (void)a;
      for (const auto& [tgt, b] : cube.cx.boundary_of(mid)) {
        (void)b;
        if (tgt == static_cast<std::size_t>(z)) ++count;
      }
    }
    return count;
  };

  for (int ci = 0; ci < n; ++ci)
    for (int cj = ci + 1; cj < n; ++cj)
      for (unsigned u = 0; u < (1u << n); ++u) {
        if (!(u >> ci & 1) || !(u >> cj & 1)) continue;
        const Resolution& r = cube.res[u];
        CrossingOnCircle a = locate(r, ci), b = locate(r, cj);
        if (a.circle < 0 || b.circle < 0 || a.circle != b.circle) continue;
        if (!interleaved(std::min(a.pos[0], a.pos[1]), std::max(a.pos[0], a.pos[1]), b.pos[0],
                         b.pos[1]))
          continue;

        // The index-2 pair over this face: 1 on the ladybug circle upstairs,
        // x on the re-merged circle downstairs, everything else untouched.
        unsigned w = u & ~(1u << ci) & ~(1u << cj);
        const Resolution& rw = cube.res[w];
        const auto z_arcs = r.circles[a.circle].arc_set();
        int merged = -1;
        for (std::size_t k = 0; k < rw.circles.size(); ++k) {
          auto s = rw.circles[k].arc_set();
          if (std::includes(s.begin(), s.end(), z_arcs.begin(), z_arcs.end())) {
            merged = static_cast<int>(k);
            break;
          }
        }
        if (merged < 0) continue;
        int y = cube.gen_at(u, 0);                        // 1 on every circle
        int z = cube.gen_at(w, 1u << merged);             // x on the merged circle
        if (broken_count(y, z) == 4) out.push_back({ci, cj, u});
      }
  return out;
}

}  // namespace flowknot::kh
