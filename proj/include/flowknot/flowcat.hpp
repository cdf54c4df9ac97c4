#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "flowknot/complexes.hpp"
#include "flowknot/khovanov.hpp"

namespace flowknot::fc {

// A face of the permutohedron Pi^{n-1} is an ordered partition of {1..n};
// its dimension is n minus the number of blocks.
struct OrderedPartition {
  std::vector<std::vector<int>> blocks;  // blocks sorted internally
  bool operator==(const OrderedPartition&) const = default;
  bool operator<(const OrderedPartition& o) const { return blocks < o.blocks; }
};

struct Permutohedron {
  int n = 0;
  std::vector<std::vector<OrderedPartition>> faces_by_dim;  // index = dimension
  int dim() const { return n - 1; }
  std::vector<std::size_t> f_vector() const;
};

Permutohedron permutohedron(int n);

// Vertex cycle of the hexagon Pi^2 along its six edges.
std::vector<OrderedPartition> hexagon_boundary_cycle(const Permutohedron& p);

// Combinatorial framed flow category, moduli stored through dimension 2.
// Dimension-0 moduli are signed points, at most one per object pair; a broken
// flowline through an intermediate object is named by that object.
struct FlowObject {
  std::string id;
  int grading = 0;
};

struct Interval {
  std::array<int, 2> end_mids;  // the two broken flowlines bounding it
};

struct PolyEdge {
  bool point_first = false;  // true: (point y->mid) o (interval in Mod(mid,z))
  int mid = -1;
  int interval_index = -1;  // index into the moduli of the 1-dimensional factor
};

struct Polygon {
  std::vector<std::pair<int, int>> vertices;  // fully broken flowlines (m1, m2)
  std::vector<PolyEdge> edges;                // edges[k] joins vertices[k], vertices[k+1]
};

struct FlowCategory {
  std::vector<FlowObject> objects;
  std::map<std::string, int> object_index;
  std::map<std::pair<int, int>, int> points;                  // sign of the single point
  std::map<std::pair<int, int>, std::vector<Interval>> intervals;
  std::map<std::pair<int, int>, std::vector<Polygon>> polygons;
  int built_dim = -1;

  void add_object(const std::string& id, int grading);
  int index_of(const std::string& id) const;
  int point_sign(int y, int z) const;  // 0 when the moduli space is empty
};

// Moduli of the cube flow category: one signed point per edge, an interval
// per square, a hexagon boundary per 3-face. n <= 4; moduli of dimension >= 3
// (they are permutohedra) are not stored.
FlowCategory hypercube_category(int n);

// Dimension-0 moduli from a based complex: one signed point per +-1
// coefficient. Coefficients outside {-1,0,1} are rejected.
FlowCategory build_moduli_dim0(const GradedChainComplex& c);

// Resolves an index-2 pair with four broken flowlines into two intervals.
// Returns the two matched pairs of intermediate objects.
using FourFlowMatcher =
    std::function<std::array<std::array<int, 2>, 2>(int y, int z, const std::array<int, 4>& mids)>;

void build_moduli_dim1(FlowCategory& cat, const FourFlowMatcher& matcher = {});
void build_moduli_dim2(FlowCategory& cat);

// True iff every interval endpoint and every polygon vertex/edge corresponds
// bijectively to a product of lower moduli.
bool check_boundary_coherence(const FlowCategory& cat, int dim);

enum class LadybugPolicy { right, left };

// The Lipshitz-Sarkar framed flow category of a link diagram, with moduli
// built through dimension 2 under a uniform ladybug policy.
FlowCategory ls_category(const kh::LinkDiagram& d, LadybugPolicy policy);

// Cohen-Jones-Segal cell data: one cell per object of dimension grading+shift,
// attaching degrees given by the signed counts of 0-dimensional moduli.
struct CWCell {
  std::string id;
  int dim = 0;
  std::string object;
};

struct CWData {
  std::vector<CWCell> cells;
  std::map<std::pair<int, int>, long long> degrees;  // (cell, cell one dim lower)
};

CWData cjs_realize(const FlowCategory& cat, int shift);

// Cellular chain complex of the cell data, graded by dimension.
GradedChainComplex cw_complex(const CWData& cw);

Json to_json(const FlowCategory& cat);
Json to_json(const CWData& cw);

}  // namespace flowknot::fc
