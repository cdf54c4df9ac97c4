#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "flowknot/flowcat.hpp"
#include "oracles.hpp"

using namespace flowknot;
using namespace flowknot::fc;

static kh::LinkDiagram clasp() { return kh::parse_pd("PD[X(2,3,4,1), X(4,3,2,1)]"); }
static kh::LinkDiagram kinked_clasp() {
  return kh::parse_pd("PD[X(2,3,5,1), X(4,3,2,1), X(6,6,5,4)]");
}

TEST_CASE("permutohedron face counts") {
  Permutohedron p2 = permutohedron(2);
  CHECK(p2.f_vector() == std::vector<std::size_t>{2, 1});  // interval

  Permutohedron p3 = permutohedron(3);
  CHECK(p3.f_vector() == std::vector<std::size_t>{6, 6, 1});  // hexagon
  auto cycle = hexagon_boundary_cycle(p3);
  CHECK(cycle.size() == 6);
  std::set<OrderedPartition> distinct(cycle.begin(), cycle.end());
  CHECK(distinct.size() == 6);

  Permutohedron p4 = permutohedron(4);
  CHECK(p4.f_vector() == std::vector<std::size_t>{24, 36, 14, 1});

  CHECK_THROWS_AS(permutohedron(0), std::invalid_argument);
}

TEST_CASE("hypercube category: points, intervals, hexagon") {
  FlowCategory c1 = hypercube_category(1);
  CHECK(c1.point_sign(c1.index_of("1"), c1.index_of("0")) == 1);

  FlowCategory c2 = hypercube_category(2);
  int top = c2.index_of("11"), bot = c2.index_of("00");
  // four index-1 moduli, each one signed point
  CHECK(c2.points.size() == 4);
  auto iv = c2.intervals.at({top, bot});
  REQUIRE(iv.size() == 1);
  std::set<int> ends(iv[0].end_mids.begin(), iv[0].end_mids.end());
  CHECK(ends == std::set<int>{c2.index_of("10"), c2.index_of("01")});

  FlowCategory c3 = hypercube_category(3);
  auto polys = c3.polygons.at({c3.index_of("111"), c3.index_of("000")});
  REQUIRE(polys.size() == 1);
  CHECK(polys[0].vertices.size() == 6);  // hexagon
  CHECK(check_boundary_coherence(c3, 2));

  FlowCategory c4 = hypercube_category(4);
  CHECK(check_boundary_coherence(c4, 2));
  CHECK_THROWS_AS(hypercube_category(5), std::invalid_argument);
}

TEST_CASE("dim-0 moduli from a complex, coefficient validation") {
  GradedChainComplex c;
  c.add_generator("a", 1);
  c.add_generator("b", 0);
  c.set_boundary("a", {{"b", 2}});
  CHECK_THROWS_AS(build_moduli_dim0(c), std::invalid_argument);

  c.set_boundary("a", {{"b", -1}});
  FlowCategory cat = build_moduli_dim0(c);
  CHECK(cat.point_sign(0, 1) == -1);
  CHECK(cat.point_sign(1, 0) == 0);
}

TEST_CASE("ladybug pinning on the clasp: right and left intervals") {
  for (bool right : {true, false}) {
    FlowCategory cat =
        ls_category(clasp(), right ? LadybugPolicy::right : LadybugPolicy::left);
    int y = cat.index_of("1_11");
    int z = cat.index_of("x_00");

    // boundary of Mod(1_11, x_00) = four broken flowlines through the four
    // intermediate generators
    std::set<std::string> mids;
    for (const auto& iv : cat.intervals.at({y, z}))
      for (int m : iv.end_mids) mids.insert(cat.objects[m].id);
    CHECK(mids == std::set<std::string>{"1x_10", "x1_10", "1x_01", "x1_01"});

    auto paired_with = [&](const std::string& id) {
      int m = cat.index_of(id);
      for (const auto& iv : cat.intervals.at({y, z})) {
        if (iv.end_mids[0] == m) return cat.objects[iv.end_mids[1]].id;
        if (iv.end_mids[1] == m) return cat.objects[iv.end_mids[0]].id;
      }
      throw std::runtime_error("mid not found");
    };
    if (right) {
      CHECK(paired_with("1x_10") == "1x_01");
      CHECK(paired_with("x1_10") == "x1_01");
    } else {
      CHECK(paired_with("1x_10") == "x1_01");
      CHECK(paired_with("x1_10") == "1x_01");
    }
  }
}

TEST_CASE("coherence of the Lipshitz-Sarkar category of the clasp") {
  FlowCategory cat = ls_category(clasp(), LadybugPolicy::right);
  CHECK(check_boundary_coherence(cat, 1));
  CHECK(check_boundary_coherence(cat, 2));

  // mutation: removing an interval endpoint must break coherence
  FlowCategory broken = cat;
  auto& ivs = broken.intervals.begin()->second;
  ivs.pop_back();
  if (ivs.empty()) broken.intervals.erase(broken.intervals.begin());
  CHECK_FALSE(check_boundary_coherence(broken, 1));
}

TEST_CASE("two hexagons for the kinked clasp under both uniform policies") {
  for (auto policy : {LadybugPolicy::right, LadybugPolicy::left}) {
    FlowCategory cat = ls_category(kinked_clasp(), policy);
    CHECK(check_boundary_coherence(cat, 2));

    bool found_twelve = false;
    for (const auto& [key, polys] : cat.polygons) {
      std::size_t vertices = 0;
      for (const auto& p : polys) vertices += p.vertices.size();
      if (vertices == 12) {
        found_twelve = true;
        REQUIRE(polys.size() == 2);
        CHECK(polys[0].vertices.size() == 6);
        CHECK(polys[1].vertices.size() == 6);
      }
      for (const auto& p : polys) {
        CHECK(p.vertices.size() % 2 == 0);
        CHECK(p.vertices.size() >= 4);
      }
    }
    CHECK(found_twelve);
  }
}

TEST_CASE("homology does not depend on the ladybug policy") {
  // The chain complex never sees the matching; realizations agree.
  for (const auto& d : {clasp(), kinked_clasp()}) {
    CWData right = cjs_realize(ls_category(d, LadybugPolicy::right), 2);
    CWData left = cjs_realize(ls_category(d, LadybugPolicy::left), 2);
    CHECK(homology(cw_complex(right)).same_as(homology(cw_complex(left))));
  }
}

TEST_CASE("cjs realization of the square category") {
  FlowCategory c2 = hypercube_category(2);
  CWData cw = cjs_realize(c2, 2);
  std::multiset<int> dims;
  for (const auto& cell : cw.cells) dims.insert(cell.dim);
  CHECK(dims == std::multiset<int>{2, 3, 3, 4});

  HomologyTable h = homology(cw_complex(cw));
  CHECK(h.total_rank() == 0);  // reduced homology of a point
  for (const auto& [g, grp] : h.groups) CHECK(grp.torsion.empty());

  CHECK_THROWS_AS(cjs_realize(c2, 1), std::invalid_argument);  // 0 + 1 < 2
}

TEST_CASE("cjs realization of a one-object category") {
  GradedChainComplex c;
  c.add_generator("pt", 3);
  FlowCategory cat = build_moduli_dim0(c);
  build_moduli_dim1(cat);
  CWData cw = cjs_realize(cat, 2);
  REQUIRE(cw.cells.size() == 1);
  CHECK(cw.cells[0].dim == 5);
  HomologyTable h = homology(cw_complex(cw));
  CHECK(h.groups.at(5).betti == 1);
  CHECK(h.total_rank() == 1);
}

TEST_CASE("cjs of the 3-cube is acyclic") {
  FlowCategory c3 = hypercube_category(3);
  HomologyTable h = homology(cw_complex(cjs_realize(c3, 2)));
  CHECK(h.total_rank() == 0);
}

TEST_CASE("cellular homology of realizations matches khovanov homology shifted") {
  for (const auto& d : {clasp(), kinked_clasp()}) {
    const int shift = 2;
    HomologyTable kh_h = kh::khovanov_homology(d);
    FlowCategory cat = ls_category(d, LadybugPolicy::right);
    HomologyTable cw_h = homology(cw_complex(cjs_realize(cat, shift)));
    CHECK(cw_h.same_as(kh_h.shifted(shift)));
  }
}

TEST_CASE("flow category json dump shape") {
  FlowCategory c2 = hypercube_category(2);
  Json j = to_json(c2);
  CHECK(j["objects"].size() == 4);
  CHECK(j["dim0"].size() == 4);
  REQUIRE(j["dim1"].size() == 1);
  CHECK(j["dim1"][0]["endpoints"].size() == 2);
  CHECK(j["dim1"][0]["endpoints"][0].size() == 2);
  CHECK(j["dim2"].empty());
}
