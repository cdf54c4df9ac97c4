#include "flowknot/flowcat.hpp"

#include <algorithm>
#include <bit>
#include <memory>
#include <set>
#include <stdexcept>

namespace flowknot::fc {

namespace {

std::string bits_string(unsigned v, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if (v >> i & 1) s[i] = '1';
  return s;
}

void ordered_partitions(std::vector<int> rest, std::vector<std::vector<int>>& prefix,
                        std::vector<OrderedPartition>& out) {
  if (rest.empty()) {
    out.push_back({prefix});
    return;
  }
  // First block = any nonempty subset of rest containing rest[0] is wrong;
  // blocks are ordered, so the first block may be any nonempty subset.
  const std::size_t m = rest.size();
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> block, remain;
    for (std::size_t i = 0; i < m; ++i)
      (mask >> i & 1 ? block : remain).push_back(rest[i]);
    prefix.push_back(block);
    ordered_partitions(remain, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

Permutohedron permutohedron(int n) {
  if (n < 1) throw std::invalid_argument("permutohedron needs n >= 1");
  if (n > 6) throw std::invalid_argument("permutohedron face lattice too large");
  std::vector<int> ground(n);
  for (int i = 0; i < n; ++i) ground[i] = i + 1;
  std::vector<OrderedPartition> all;
  std::vector<std::vector<int>> prefix;
  ordered_partitions(ground, prefix, all);

  Permutohedron p;
  p.n = n;
  p.faces_by_dim.resize(n);
  for (auto& f : all) p.faces_by_dim[n - f.blocks.size()].push_back(f);
  for (auto& dim : p.faces_by_dim) std::sort(dim.begin(), dim.end());
  return p;
}

std::vector<std::size_t> Permutohedron::f_vector() const {
  std::vector<std::size_t> f;
  for (const auto& d : faces_by_dim) f.push_back(d.size());
  return f;
}

namespace {

// v (a chain of singletons) lies on face f iff f's blocks are unions of
// consecutive blocks of v.
bool vertex_on_face(const OrderedPartition& v, const OrderedPartition& f) {
  std::size_t i = 0;
  for (const auto& block : f.blocks) {
    std::set<int> want(block.begin(), block.end());
    while (!want.empty()) {
      if (i >= v.blocks.size()) return false;
      int x = v.blocks[i][0];
      if (!want.count(x)) return false;
      want.erase(x);
      ++i;
    }
  }
  return i == v.blocks.size();
}

}  // namespace

std::vector<OrderedPartition> hexagon_boundary_cycle(const Permutohedron& p) {
  if (p.n != 3) throw std::invalid_argument("hexagon boundary cycle is for n = 3");
  const auto& verts = p.faces_by_dim[0];
  const auto& edges = p.faces_by_dim[1];
  std::vector<std::vector<int>> incident(verts.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    for (std::size_t v = 0; v < verts.size(); ++v)
      if (vertex_on_face(verts[v], edges[e])) incident[v].push_back(static_cast<int>(e));
  for (const auto& inc : incident)
    if (inc.size() != 2) throw std::runtime_error("permutohedron boundary is not 2-regular");

  std::vector<OrderedPartition> cycle;
  std::size_t at = 0;
  int via = incident[0][0];
  for (std::size_t step = 0; step < verts.size(); ++step) {
    cycle.push_back(verts[at]);
    int next_edge = (incident[at][0] == via) ? incident[at][1] : incident[at][0];
    std::size_t nxt = verts.size();
    for (std::size_t v = 0; v < verts.size(); ++v)
      if (v != at && vertex_on_face(verts[v], edges[next_edge])) nxt = v;
    if (nxt == verts.size()) throw std::runtime_error("open edge in permutohedron boundary");
    via = next_edge;
    at = nxt;
  }
  if (at != 0) throw std::runtime_error("permutohedron boundary is not a single cycle");
  return cycle;
}

void FlowCategory::add_object(const std::string& id, int grading) {
  if (object_index.count(id)) throw std::invalid_argument("duplicate object id: " + id);
  object_index[id] = static_cast<int>(objects.size());
  objects.push_back({id, grading});
}

int FlowCategory::index_of(const std::string& id) const {
  auto it = object_index.find(id);
  if (it == object_index.end()) throw std::invalid_argument("unknown object id: " + id);
  return it->second;
}

int FlowCategory::point_sign(int y, int z) const {
  auto it = points.find({y, z});
  return it == points.end() ? 0 : it->second;
}

FlowCategory build_moduli_dim0(const GradedChainComplex& c) {
  FlowCategory cat;
  for (std::size_t i = 0; i < c.size(); ++i) cat.add_object(c.id_of(i), c.grading_of(i));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (const auto& [tgt, coeff] : c.boundary_of(i)) {
      if (coeff != 1 && coeff != -1)
        throw std::invalid_argument("differential coefficient outside {-1,0,1} at " + c.id_of(i));
      cat.points[{static_cast<int>(i), static_cast<int>(tgt)}] = static_cast<int>(coeff);
    }
  cat.built_dim = 0;
  return cat;
}

void build_moduli_dim1(FlowCategory& cat, const FourFlowMatcher& matcher) {
  if (cat.built_dim < 0) throw std::invalid_argument("dimension-0 moduli not built");
  const int count = static_cast<int>(cat.objects.size());
  for (int y = 0; y < count; ++y)
    for (int z = 0; z < count; ++z) {
      if (cat.objects[y].grading != cat.objects[z].grading + 2) continue;
      std::vector<int> mids;
      for (int m = 0; m < count; ++m)
        if (cat.point_sign(y, m) != 0 && cat.point_sign(m, z) != 0) mids.push_back(m);
      if (mids.empty()) continue;
      if (mids.size() == 2) {
        cat.intervals[{y, z}].push_back({{mids[0], mids[1]}});
      } else if (mids.size() == 4) {
        if (!matcher)
          throw std::invalid_argument("four broken flowlines need a ladybug matching");
        auto pairs = matcher(y, z, {mids[0], mids[1], mids[2], mids[3]});
        cat.intervals[{y, z}].push_back({pairs[0]});
        cat.intervals[{y, z}].push_back({pairs[1]});
      } else {
        throw std::invalid_argument("broken flowline count " + std::to_string(mids.size()) +
                                    " is not 0, 2 or 4");
      }
    }
  cat.built_dim = std::max(cat.built_dim, 1);
}

void build_moduli_dim2(FlowCategory& cat) {
  if (cat.built_dim < 1) throw std::invalid_argument("dimension-1 moduli not built");
  const int count = static_cast<int>(cat.objects.size());
  for (int y = 0; y < count; ++y)
    for (int z = 0; z < count; ++z) {
      if (cat.objects[y].grading != cat.objects[z].grading + 3) continue;

      // Boundary graph: vertices are composable triples, edges are products
      // of an interval with a point on either side.
      std::vector<std::pair<int, int>> triples;
      for (int m1 = 0; m1 < count; ++m1) {
        if (cat.point_sign(y, m1) == 0) continue;
        for (int m2 = 0; m2 < count; ++m2)
          if (cat.point_sign(m1, m2) != 0 && cat.point_sign(m2, z) != 0)
            triples.emplace_back(m1, m2);
      }
      if (triples.empty()) continue;
      std::sort(triples.begin(), triples.end());
      auto triple_id = [&](int m1, int m2) {
        auto it = std::lower_bound(triples.begin(), triples.end(), std::make_pair(m1, m2));
        if (it == triples.end() || *it != std::make_pair(m1, m2))
          throw std::runtime_error("boundary edge endpoint is not a composable triple");
        return static_cast<int>(it - triples.begin());
      };

      struct Edge {
        PolyEdge label;
        int a, b;
      };
      std::vector<Edge> edges;
      for (int m = 0; m < count; ++m) {
        if (cat.point_sign(m, z) != 0) {
          auto it = cat.intervals.find({y, m});
          if (it != cat.intervals.end())
            for (std::size_t t = 0; t < it->second.size(); ++t) {
              const auto& ends = it->second[t].end_mids;
              edges.push_back({{false, m, static_cast<int>(t)},
                               triple_id(ends[0], m), triple_id(ends[1], m)});
            }
        }
        if (cat.point_sign(y, m) != 0) {
          auto it = cat.intervals.find({m, z});
          if (it != cat.intervals.end())
            for (std::size_t t = 0; t < it->second.size(); ++t) {
              const auto& ends = it->second[t].end_mids;
              edges.push_back({{true, m, static_cast<int>(t)},
                               triple_id(m, ends[0]), triple_id(m, ends[1])});
            }
        }
      }

      std::vector<std::vector<int>> incident(triples.size());
      for (std::size_t e = 0; e < edges.size(); ++e) {
        incident[edges[e].a].push_back(static_cast<int>(e));
        incident[edges[e].b].push_back(static_cast<int>(e));
      }
      for (const auto& inc : incident)
        if (inc.size() != 2) throw std::runtime_error("moduli boundary graph is not 2-regular");

      std::vector<bool> seen(triples.size(), false);
      for (std::size_t start = 0; start < triples.size(); ++start) {
        if (seen[start]) continue;
        Polygon poly;
        int at = static_cast<int>(start);
        int via = incident[start][0];
        do {
          seen[at] = true;
          poly.vertices.push_back(triples[at]);
          poly.edges.push_back(edges[via].label);
          at = (edges[via].a == at) ? edges[via].b : edges[via].a;
          via = (incident[at][0] == via) ? incident[at][1] : incident[at][0];
        } while (at != static_cast<int>(start));
        if (poly.vertices.size() < 4 || poly.vertices.size() % 2 != 0)
          throw std::runtime_error("boundary cycle of length " +
                                   std::to_string(poly.vertices.size()) +
                                   " cannot bound a polygon");
        cat.polygons[{y, z}].push_back(std::move(poly));
      }
    }
  cat.built_dim = std::max(cat.built_dim, 2);
}

bool check_boundary_coherence(const FlowCategory& cat, int dim) {
  if (dim > cat.built_dim) throw std::invalid_argument("moduli not built to this dimension");
  const int count = static_cast<int>(cat.objects.size());

  if (dim >= 1) {
    std::map<std::pair<int, int>, std::multiset<int>> interval_ends;
    for (const auto& [key, ivs] : cat.intervals)
      for (const auto& iv : ivs) {
        interval_ends[key].insert(iv.end_mids[0]);
        interval_ends[key].insert(iv.end_mids[1]);
      }
    for (int y = 0; y < count; ++y)
      for (int z = 0; z < count; ++z) {
        if (cat.objects[y].grading != cat.objects[z].grading + 2) continue;
        std::multiset<int> expected;
        for (int m = 0; m < count; ++m)
          if (cat.point_sign(y, m) != 0 && cat.point_sign(m, z) != 0) expected.insert(m);
        if (interval_ends[{y, z}] != expected) return false;
        interval_ends.erase({y, z});
      }
    for (const auto& [key, ends] : interval_ends)
      if (!ends.empty()) return false;
  }

  if (dim >= 2) {
    for (int y = 0; y < count; ++y)
      for (int z = 0; z < count; ++z) {
        if (cat.objects[y].grading != cat.objects[z].grading + 3) continue;
        std::multiset<std::pair<int, int>> expected_vertices;
        for (int m1 = 0; m1 < count; ++m1)
          for (int m2 = 0; m2 < count; ++m2)
            if (cat.point_sign(y, m1) != 0 && cat.point_sign(m1, m2) != 0 &&
                cat.point_sign(m2, z) != 0)
              expected_vertices.insert({m1, m2});

        std::multiset<std::tuple<bool, int, int>> expected_edges;
        for (int m = 0; m < count; ++m) {
          if (cat.point_sign(m, z) != 0) {
            auto it = cat.intervals.find({y, m});
            if (it != cat.intervals.end())
              for (std::size_t t = 0; t < it->second.size(); ++t)
                expected_edges.insert({false, m, static_cast<int>(t)});
          }
          if (cat.point_sign(y, m) != 0) {
            auto it = cat.intervals.find({m, z});
            if (it != cat.intervals.end())
              for (std::size_t t = 0; t < it->second.size(); ++t)
                expected_edges.insert({true, m, static_cast<int>(t)});
          }
        }

        std::multiset<std::pair<int, int>> got_vertices;
        std::multiset<std::tuple<bool, int, int>> got_edges;
        auto it = cat.polygons.find({y, z});
        if (it != cat.polygons.end())
          for (const auto& poly : it->second) {
            for (const auto& v : poly.vertices) got_vertices.insert(v);
            for (const auto& e : poly.edges) got_edges.insert({e.point_first, e.mid, e.interval_index});
          }
        if (got_vertices != expected_vertices || got_edges != expected_edges) return false;
      }
  }
  return true;
}

FlowCategory hypercube_category(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("hypercube category supports 1 <= n <= 4");
  FlowCategory cat;
  for (unsigned v = 0; v < (1u << n); ++v) cat.add_object(bits_string(v, n), std::popcount(v));
  kh::SignAssignment sa = kh::standard_sign_assignment(n);
  for (unsigned u = 0; u < (1u << n); ++u)
    for (int c = 0; c < n; ++c)
      if (u >> c & 1) {
        unsigned v = u & ~(1u << c);
        cat.points[{cat.index_of(bits_string(u, n)), cat.index_of(bits_string(v, n))}] =
            sa.s(u, c) ? -1 : 1;
      }
  cat.built_dim = 0;
  build_moduli_dim1(cat);
  build_moduli_dim2(cat);
  return cat;
}

FlowCategory ls_category(const kh::LinkDiagram& d, LadybugPolicy policy) {
  auto cube = std::make_shared<kh::CubeModel>(kh::build_cube(d));
  FlowCategory cat = build_moduli_dim0(cube->cx);

  FourFlowMatcher matcher = [cube, policy](int y, int z, const std::array<int, 4>& mids) {
    const auto& gy = cube->gens[y];
    const auto& gz = cube->gens[z];
    unsigned diff = gy.vertex ^ gz.vertex;
    if (std::popcount(diff) != 2 || (gy.vertex & diff) != diff)
      throw std::runtime_error("four broken flowlines outside a 2-face");
    int ci = std::countr_zero(diff);
    int cj = std::countr_zero(diff & (diff - 1));
    auto match = kh::ladybug_circle_matching(cube->res[gy.vertex], ci, cj,
                                             policy == LadybugPolicy::right);

    // Row of the matching carrying each intermediate generator's x-circle.
    auto row_of = [&](int mid) {
      const auto& gm = cube->gens[mid];
      unsigned flipped = gy.vertex ^ gm.vertex;
      bool is_ci = flipped == (1u << ci);
      const auto& res = cube->res[gm.vertex];
      int k0 = -1, k1 = -1;
      for (std::size_t k = 0; k < res.circles.size(); ++k) {
        auto s = res.circles[k].arc_set();
        if (s == (is_ci ? match[0].first : match[0].second)) k0 = static_cast<int>(k);
        if (s == (is_ci ? match[1].first : match[1].second)) k1 = static_cast<int>(k);
      }
      if (k0 < 0 || k1 < 0) throw std::runtime_error("surgered circles not found in resolution");
      bool x_on_row0 = gm.labels >> k0 & 1;
      bool x_on_row1 = gm.labels >> k1 & 1;
      if (x_on_row0 == x_on_row1)
        throw std::runtime_error("intermediate generator does not split the ladybug circle");
      return std::make_pair(is_ci, x_on_row0 ? 0 : 1);
    };

    std::array<std::array<int, 2>, 2> out{{{-1, -1}, {-1, -1}}};
    for (int m : mids) {
      auto [is_ci, row] = row_of(m);
      out[row][is_ci ? 0 : 1] = m;
    }
    for (const auto& pair : out)
      if (pair[0] < 0 || pair[1] < 0)
        throw std::runtime_error("ladybug flowlines do not split two against two");
    return out;
  };

  build_moduli_dim1(cat, matcher);
  build_moduli_dim2(cat);
  return cat;
}

CWData cjs_realize(const FlowCategory& cat, int shift) {
  if (cat.built_dim < 1) throw std::invalid_argument("moduli must be built through dimension 1");
  if (cat.objects.empty()) throw std::invalid_argument("cannot realize an empty category");
  int min_grading = cat.objects[0].grading;
  for (const auto& o : cat.objects) min_grading = std::min(min_grading, o.grading);
  if (min_grading + shift < 2)
    throw std::invalid_argument("shift too small: cells must have dimension >= 2");

  CWData cw;
  for (const auto& o : cat.objects)
    cw.cells.push_back({"C(" + o.id + ")", o.grading + shift, o.id});
  for (const auto& [key, sign] : cat.points) cw.degrees[key] = sign;

  if (!verify_d_squared(cw_complex(cw)))
    throw std::runtime_error("cellular boundary does not square to zero");
  return cw;
}

GradedChainComplex cw_complex(const CWData& cw) {
  GradedChainComplex c;
  for (const auto& cell : cw.cells) c.add_generator(cell.id, cell.dim);
  std::vector<std::vector<std::pair<std::string, long long>>> terms(cw.cells.size());
  for (const auto& [key, deg] : cw.degrees)
    terms[key.first].emplace_back(cw.cells[key.second].id, deg);
  for (std::size_t i = 0; i < cw.cells.size(); ++i) c.set_boundary(cw.cells[i].id, terms[i]);
  return c;
}

namespace {

std::string point_name(const FlowCategory& cat, int from, int to) {
  return cat.objects[from].id + ">" + cat.objects[to].id;
}

}  // namespace

Json to_json(const FlowCategory& cat) {
  Json objs = Json::array();
  for (const auto& o : cat.objects) objs.push_back({{"id", o.id}, {"grading", o.grading}});
  Json dim0 = Json::array();
  for (const auto& [key, sign] : cat.points)
    dim0.push_back({{"from", cat.objects[key.first].id},
                    {"to", cat.objects[key.second].id},
                    {"sign", sign}});
  Json dim1 = Json::array();
  for (const auto& [key, ivs] : cat.intervals)
    for (const auto& iv : ivs) {
      Json ends = Json::array();
      for (int m : iv.end_mids)
        ends.push_back(Json::array(
            {point_name(cat, key.first, m), point_name(cat, m, key.second)}));
      dim1.push_back(
          {{"from", cat.objects[key.first].id}, {"to", cat.objects[key.second].id}, {"endpoints", ends}});
    }
  Json dim2 = Json::array();
  for (const auto& [key, polys] : cat.polygons)
    for (const auto& poly : polys) {
      Json cycle = Json::array();
      for (const auto& [m1, m2] : poly.vertices)
        cycle.push_back(Json::array({point_name(cat, key.first, m1), point_name(cat, m1, m2),
                                     point_name(cat, m2, key.second)}));
      dim2.push_back(
          {{"from", cat.objects[key.first].id}, {"to", cat.objects[key.second].id}, {"cycle", cycle}});
    }
  return Json{{"objects", objs}, {"dim0", dim0}, {"dim1", dim1}, {"dim2", dim2}};
}

Json to_json(const CWData& cw) {
  Json cells = Json::array();
  for (const auto& c : cw.cells)
    cells.push_back({{"id", c.id}, {"dimension", c.dim}, {"object", c.object}});
  Json degrees = Json::object();
  for (const auto& [key, deg] : cw.degrees) {
    const std::string& id = cw.cells[key.first].id;
    if (!degrees.contains(id)) degrees[id] = Json::array();
    degrees[id].push_back(Json::array({cw.cells[key.second].id, deg}));
  }
  return Json{{"cells", cells}, {"degrees", degrees}};
}

}  // namespace flowknot::fc
