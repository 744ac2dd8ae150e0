#pragma once

#include <optional>

#include "wgcat/simplex.hpp"

namespace wgcat {

// An explicit, re-checkable witness that the comparison into the iterated
// pullback at one tuple/direction is invertible.
struct SegalWitness {
    int dir = 0;
    IndexTuple at;
    FinFunctor mu;
    FinFunctor mu_inv;
};

Report verify_segal_witness(const MultiGrid& g, const SegalWitness& w,
                            const Limits& lim = default_limits());

// Certificate that a grid lies in the image of the nerve-in-all-but-one
// directions embedding: all directional Segal comparisons are isomorphisms.
struct NFoldCert {
    int n = 1;  // dirs + 1
    std::vector<SegalWitness> segal;
};

struct NFoldOutcome {
    std::optional<NFoldCert> cert;
    Report report;
    bool ok() const { return cert.has_value(); }
};

// grid functoriality + entry axioms + every directional Segal comparison an
// isomorphism; the failure report names the first failing (tuple, direction)
NFoldOutcome validate_nfold(const MultiGrid& g, const Limits& lim = default_limits());

// the two inverse views of a grid as an internal category along a direction
SimplicialOfGrids xi_swap(const MultiGrid& x, int dir);
GridPtr xi_unswap(const SimplicialOfGrids& s);

// nerve in the given direction: the levelwise data of xi_swap
SimplicialOfGrids nerve_direction(const MultiGrid& x, int dir);

// discrete inclusion in a new last direction: the category direction is
// nerve-ized into chains of discrete entries
GridPtr discrete_inclusion(const MultiGrid& y, const Limits& lim = default_limits());

// every entry equal and discrete, every structure map the identity
bool is_discrete_nfold(const MultiGrid& g);

// Reconstruction of the category direction from a grid of discrete entries:
// the left inverse of discrete_inclusion / multinerve. The last direction
// must satisfy the nerve conditions entrywise.
struct ReconstructOutcome {
    GridPtr grid;  // one fewer direction; set on success
    Report report;
    bool ok() const { return grid != nullptr; }
};
ReconstructOutcome reconstruct_last_direction(GridPtr z, const Limits& lim = default_limits());

// The double fiber of the level-1 slice over a pair of classes of the
// level-0 discretization: objects whose two direction-1 faces land in the
// classes (a, b) in that face order.
struct HomFiber {
    GridPtr grid;            // full sub-grid of the level-1 slice
    GridMorphism inclusion;  // into slice(x, 0, 1)
};

// cls0: per linear entry index of slice(x,0,0), object -> class
HomFiber hom_fiber(const MultiGrid& x, GridPtr slice1, GridPtr slice0,
                   const std::vector<std::vector<int>>& cls0, int a, int b);

}  // namespace wgcat
