#pragma once

#include <string>
#include <vector>

#include "flowknot/complexes.hpp"
#include "flowknot/grid.hpp"

namespace flowknot::gridflow {

using grid::GridDiagram;
using grid::GridDomain;
using grid::GridRect;
using grid::GridState;
using grid::SignAssignmentGrid;

// All positive domains from x to y with Maslov index <= mu_max. A base domain
// is reduced by periodic shifts, then row/column multiples are searched with
// positivity and index-budget pruning (each added annulus raises mu by 2).
std::vector<GridDomain> enumerate_positive_domains(const GridDiagram& g, const GridState& x,
                                                   const GridState& y, int mu_max);

// A factorization of a domain into composable empty rectangles; emptiness is
// judged against the intermediate state reached at each step.
struct Decomposition {
  std::vector<GridRect> rects;
  std::vector<GridState> states;  // states.size() == rects.size() + 1
};

std::vector<Decomposition> decompositions(const GridDiagram& g, const GridDomain& d);

// A way of splitting a thin annulus off a domain so that the rest still
// factors into rectangles; the open end of the moduli space.
struct BubbleEnd {
  char orientation = 0;  // 'H' row annulus, 'V' column annulus
  int line = 0;          // the row or column of the strip
  int o_column = 0;      // column of the O-marking the strip passes through
  bool operator==(const BubbleEnd&) const = default;
};

std::vector<BubbleEnd> detect_bubble_ends(const GridDiagram& g, const GridDomain& d);

// The horizontal and vertical strip through each O-marking; n pairs.
struct StripPair {
  int o_column = 0;  // key: the O in column o_column at row O[o_column]
  int h_row = 0;     // row of the horizontal strip
  int v_col = 0;     // column of the vertical strip
};

std::vector<StripPair> pair_strips(const GridDiagram& g);

// The catalogued shape of Mod(D) for positive domains of Maslov index 1 to 3:
// a point, an interval whose ends are decompositions or a bubble, or a
// polygon with one vertex per decomposition. Uncatalogued configurations are
// reported, never guessed.
struct ModuliShape {
  enum Kind { point, interval, polygon, outside_catalog } kind = outside_catalog;
  std::vector<Decomposition> decs;
  std::vector<BubbleEnd> bubbles;
  int vertex_count() const { return static_cast<int>(decs.size()); }
};

ModuliShape moduli_shape(const GridDiagram& g, const GridDomain& d);

// The obstruction complex: free on triples (x, y, positive domain) graded by
// Maslov index, the differential stripping an empty rectangle off the left
// with weight s(R) or off the right with weight (-1)^k s(R).
struct ObstructionComplex {
  struct Gen {
    GridState from, to;
    GridDomain domain;
    int mu = 0;
    std::string id;
  };
  std::vector<Gen> gens;
  GradedChainComplex cx;
  int mu_max = 0;
};

ObstructionComplex obstruction_complex(const GridDiagram& g, int mu_max,
                                       const SignAssignmentGrid& signs);

// Homology of the obstruction complex in gradings 0..mu_max-1 (the gradings
// the truncation cannot affect).
HomologyTable cd_homology(const GridDiagram& g, int mu_max);

}  // namespace flowknot::gridflow
