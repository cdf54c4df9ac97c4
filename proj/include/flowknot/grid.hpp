#pragma once

#include <map>
#include <string>
#include <vector>

#include "flowknot/complexes.hpp"

namespace flowknot::grid {

// Toroidal grid diagram: O and X are permutations column -> row, never in the
// same cell. All coordinates below wrap mod n.
struct GridDiagram {
  int n = 0;
  std::vector<int> X, O;
};

GridDiagram parse_grid(const std::string& text);
void validate(const GridDiagram& g);  // throws std::invalid_argument

// A grid state places one point on each vertical circle: column i at height
// sigma(i).
using GridState = std::vector<int>;

std::vector<GridState> enumerate_states(const GridDiagram& g);  // lexicographic, n! states
long long state_rank(const GridState& s);                       // lexicographic rank
std::string state_name(const GridState& s);

// An embedded rectangle on the torus from one state to another, stored by its
// southwest corner and extents; the from-state sits at the SW and NE corners.
struct GridRect {
  int col = 0, row = 0, width = 0, height = 0;
  int interior_points = 0;        // coordinates of the from-state strictly inside
  int o_count = 0, x_count = 0;   // markings among the covered cells
  bool empty() const { return interior_points == 0; }
  bool marking_free() const { return o_count == 0 && x_count == 0; }
  bool operator==(const GridRect&) const = default;
};

// The two rectangles from x to y when the states differ in exactly two
// columns; empty otherwise.
std::vector<GridRect> rectangles(const GridDiagram& g, const GridState& x, const GridState& y);

// All rectangles leaving x, annotated; targets returned alongside.
struct OutgoingRect {
  GridRect rect;
  GridState to;
};
std::vector<OutgoingRect> rectangles_from(const GridDiagram& g, const GridState& x);

// A domain from x to y: multiplicities of the n^2 small squares subject to
// the horizontal/vertical boundary conditions.
struct GridDomain {
  GridState from, to;
  std::vector<std::vector<int>> mult;  // mult[col][row]
  bool positive() const;
  bool is_zero() const;
};

GridDomain zero_domain(const GridDiagram& g, const GridState& x);
GridDomain rect_domain(const GridDiagram& g, const GridState& x, const GridRect& r);
GridDomain add(const GridDomain& a, const GridDomain& b);  // compose a then b

// True iff d(d_h D) = to - from and d(d_v D) = from - to hold at every
// lattice point.
bool domain_boundary_ok(const GridDiagram& g, const GridDomain& d);

// Counts of markings covered by a domain, with multiplicity.
int count_o(const GridDiagram& g, const GridDomain& d);
int count_x(const GridDiagram& g, const GridDomain& d);

// Maslov index via the point measure: the sum over the corners of both
// states of the average multiplicity of the four adjacent squares. Throws
// when the result is not an integer.
int maslov_index(const GridDiagram& g, const GridDomain& d);

// Relative Maslov and Alexander gradings against the lexicographically least
// state, computed by rectangle moves and checked for consistency on the way.
struct Gradings {
  std::vector<int> maslov, alexander;  // indexed by state rank
};
Gradings relative_gradings(const GridDiagram& g);

// Sign assignment on empty rectangles, keyed by the state they leave.
struct SignAssignmentGrid {
  int n = 0;
  std::map<std::tuple<long long, int, int, int, int>, int> signs;
  int sign(long long state, const GridRect& r) const;  // +1 or -1
  void flip(long long state, const GridRect& r);
};

// Convention for the unordered product of the two rectangle signs composing a
// thin annulus; the square rule fixes everything else up to gauge.
struct AnnulusConvention {
  int vertical = +1;
  int horizontal = -1;
};

// Solves the square rule (opposite products over the two decompositions of a
// non-annular two-rectangle domain) together with the annulus convention over
// the field with two elements.
SignAssignmentGrid solve_sign_assignment(const GridDiagram& g, AnnulusConvention conv = {});

enum class Coeff { gf2, integral };

// The tilde complex: generators are the grid states graded by relative Maslov
// grading; the differential counts empty rectangles avoiding every O and X.
// Over the integers a sign assignment is required.
GradedChainComplex tilde_complex(const GridDiagram& g, Coeff coeff,
                                 const SignAssignmentGrid* signs = nullptr);

HomologyTable grid_homology(const GridDiagram& g, Coeff coeff);

}  // namespace flowknot::grid
