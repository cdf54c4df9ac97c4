#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "flowknot/complexes.hpp"

namespace flowknot::kh {

// Planar diagram code: each crossing lists its four arc labels in
// counterclockwise order starting from an incoming under-arc. Crossingless
// unknot components cannot be expressed in PD form and ride along as a count.
struct LinkDiagram {
  std::vector<std::array<int, 4>> crossings;
  int unknots = 0;
  int n() const { return static_cast<int>(crossings.size()); }
};

// Accepts `PD[X(a,b,c,d), ...]`, a bare JSON array of 4-tuples, or a JSON
// object {"pd": [...], "unknots": k}. An `unknots=k` line works in text form.
LinkDiagram parse_pd(const std::string& text);
void validate(const LinkDiagram& d);  // throws std::invalid_argument

// One step of a circle traversal through a smoothed crossing. `forward` is
// true when the strand is traversed in the counterclockwise sense of the PD
// tuple; the surgery arc of that crossing then lies to the left of travel.
struct Passage {
  int crossing = -1;
  bool forward = false;
};

struct Circle {
  std::vector<int> arcs;          // traversal order; arcs[0] is the minimum
  std::vector<Passage> passages;  // passages[i] joins arcs[i] to arcs[i+1 mod size]
  int unknot_id = 0;              // > 0 marks a crossingless extra circle
  int min_arc() const;
  std::vector<int> arc_set() const;  // sorted
};

// The complete resolution D_v: smoothing 0 joins tuple slots (0,1),(2,3),
// smoothing 1 joins (1,2),(3,0). Circles are ordered by smallest arc id,
// crossingless unknot circles last.
struct Resolution {
  unsigned vertex = 0;  // bit i = smoothing of crossing i
  std::vector<Circle> circles;
};

Resolution resolve(const LinkDiagram& d, unsigned vertex);

// Standard sign assignment on the hypercube: s(u, u - e_c) counts the 1-bits
// of u before coordinate c, mod 2. Every square face ends up with one or
// three positive edges.
struct SignAssignment {
  int n = 0;
  int s(unsigned u, int c) const;  // 0 or 1 for the edge flipping bit c of u
};
SignAssignment standard_sign_assignment(int n);

// Unsigned edge map on standard generators for one cube edge u -> v (v = u
// with one bit cleared): merge applies m, split applies Delta, all other
// tensor factors are carried by the circle identification. Generators are
// encoded as label bitmasks (bit k set = circle k labelled x).
struct EdgeMap {
  std::vector<std::vector<unsigned>> images;  // images[src mask] = target masks, coeff +1
};
EdgeMap edge_map(const Resolution& from, const Resolution& to);

// The whole cube: resolutions, the generator catalogue and the signed complex.
struct CubeModel {
  LinkDiagram diagram;
  int n = 0;
  std::vector<Resolution> res;  // indexed by vertex code, size 2^n
  struct Gen {
    unsigned vertex = 0;
    unsigned labels = 0;  // bit k = circle k carries x
    std::string id;
  };
  std::vector<Gen> gens;
  std::map<std::string, int> gen_index;
  std::vector<int> vertex_first_gen;  // offset of each vertex's generator block
  GradedChainComplex cx;

  int gen_at(unsigned vertex, unsigned labels) const;
};

CubeModel build_cube(const LinkDiagram& d);
GradedChainComplex khovanov_complex(const LinkDiagram& d);
HomologyTable khovanov_homology(const LinkDiagram& d);

// Second grading |v| + #(circles labelled 1) - #(circles labelled x);
// reported alongside, never used by the homological machinery.
int quantum_grading(const CubeModel& cube, int gen);

// A 2-face of the cube whose (1,1)-corner shows the ladybug configuration:
// both surgery arcs end on a single circle with interleaved endpoints, and the
// index-2 generator pair over the face has four broken flowlines.
struct LadybugFace {
  int ci = 0, cj = 0;   // crossings spanning the face, ci < cj
  unsigned corner = 0;  // vertex code of the corner with both bits set
};
std::vector<LadybugFace> detect_ladybugs(const LinkDiagram& d);

// For a ladybug corner: the matching between the two circles created by
// surgery on ci and the two created by surgery on cj, as pairs of sorted arc
// sets. `right` selects the Lipshitz-Sarkar convention, computed from the
// cyclic endpoint order on the circle and the sides of the two arcs.
using CirclePair = std::pair<std::vector<int>, std::vector<int>>;
std::array<CirclePair, 2> ladybug_circle_matching(const Resolution& corner, int ci, int cj,
                                                  bool right);

}  // namespace flowknot::kh
