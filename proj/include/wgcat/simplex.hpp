#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wgcat/fincat.hpp"

namespace wgcat {

// ---- the truncated simplex category ------------------------------------------

// A monotone map [dom] -> [cod] between finite ordinals, stored by its values.
struct SimplexMap {
    int dom = 0;
    int cod = 0;
    std::vector<int> v;  // size dom+1, nondecreasing, values in [0, cod]

    static SimplexMap identity(int k);
    static SimplexMap delta(int k, int j);     // [k-1] -> [k], injective, misses j
    static SimplexMap sigma(int k, int j);     // [k+1] -> [k], hits j twice
    static SimplexMap vertex(int k, int j);    // [0] -> [k], 0 |-> j
    static SimplexMap interval(int k, int j);  // [1] -> [k], 0 |-> j-1, 1 |-> j

    SimplexMap then(const SimplexMap& g) const;  // g . this
    bool valid() const;
    bool is_identity() const;
    bool operator==(const SimplexMap& o) const { return dom == o.dom && cod == o.cod && v == o.v; }
    bool operator<(const SimplexMap& o) const {
        return std::tie(dom, cod, v) < std::tie(o.dom, o.cod, o.v);
    }
    std::string to_string() const;
};

std::vector<SimplexMap> all_monotone(int dom, int cod);

// The truncated simplex category as an explicit FinCat (for audits and hom
// counting); objects [0]..[m], arrows all monotone maps.
CatPtr trunc_delta(int m);

// ---- multi-indices ------------------------------------------------------------

using IndexTuple = std::vector<int>;

std::string tuple_id(const IndexTuple& t);
IndexTuple parse_tuple(const std::string& s);
std::vector<IndexTuple> all_tuples(int dirs, int m);
int linear_index(const IndexTuple& t, int m);
IndexTuple corner(const IndexTuple& k, int dir, int value);  // k with k[dir] replaced

class MultiGrid;
using GridPtr = std::shared_ptr<const MultiGrid>;

// A strictly functorial assignment of a finite category to every index tuple
// in {0..m}^dirs and of a functor to every index arrow, presented (and
// serialized) by its face/degeneracy generators. Raising a level goes
// against the underlying monotone map: the stored functors follow the op
// category of the truncated multi-simplex category.
class MultiGrid {
public:
    MultiGrid() = default;
    MultiGrid(int dirs, int m);

    int dirs() const { return dirs_; }
    int m() const { return m_; }
    int n_entries() const { return static_cast<int>(entries_.size()); }

    void set_entry(const IndexTuple& t, CatPtr c);
    CatPtr entry(const IndexTuple& t) const;
    CatPtr entry_linear(int i) const { return entries_[i]; }

    // face: entry(k) -> entry(k - e_dir), defined when k[dir] >= 1, 0 <= j <= k[dir]
    void set_face(const IndexTuple& k, int dir, int j, FinFunctor f);
    const FinFunctor& face(const IndexTuple& k, int dir, int j) const;
    // degeneracy: entry(k) -> entry(k + e_dir), defined when k[dir] < m, 0 <= j <= k[dir]
    void set_degeneracy(const IndexTuple& k, int dir, int j, FinFunctor f);
    const FinFunctor& degeneracy(const IndexTuple& k, int dir, int j) const;

    // action of an arbitrary index op-arrow: the functor entry(from) ->
    // entry(to) induced by the monotone maps mono[d] : [to[d]] -> [from[d]]
    FinFunctor action(const IndexTuple& from, const std::vector<SimplexMap>& mono) const;
    // single-direction convenience (other components identity)
    FinFunctor action1(const IndexTuple& from, int dir, const SimplexMap& f) const;

    // entries present, generator typing, per-entry axioms, simplicial
    // relations within and across directions; the relations on generators
    // imply functoriality on all composites
    Report validate(bool validate_entries = true) const;
    // literal check on every composable pair of index op-arrows; quadratic
    // in the index category, for small grids and audits
    Report validate_all_composites() const;

    bool structurally_equal(const MultiGrid& o) const;

    std::vector<std::pair<std::string, const FinFunctor*>> generator_list() const;

private:
    int dirs_ = 0;
    int m_ = 0;
    std::vector<CatPtr> entries_;
    std::map<std::string, FinFunctor> gens_;  // key: tuple|d<dir>.<j> or tuple|s<dir>.<j>

    std::string gen_key(const IndexTuple& k, int dir, bool face, int j) const;
    FinFunctor apply_dir(IndexTuple& cur, int dir, const SimplexMap& f, FinFunctor acc) const;
};

GridPtr share(MultiGrid&& g);

bool cats_structurally_equal(const FinCat& a, const FinCat& b);

// A levelwise map of grids commuting with all index actions.
struct GridMorphism {
    GridPtr dom;
    GridPtr cod;
    std::vector<FinFunctor> component;  // by linear entry index

    const FinFunctor& at(const IndexTuple& t) const;
    Report validate() const;  // componentwise functors + generator squares
};

GridMorphism identity_morphism(GridPtr g);
GridMorphism compose_morphisms(const GridMorphism& g, const GridMorphism& f);

// ---- slicing / reindexing -------------------------------------------------------

// entry(t') = entry(t' with `level` inserted at position dir)
GridPtr slice(const MultiGrid& g, int dir, int level);

// The view of a grid as a simplicial object of one-lower-dimensional grids
// along the given direction; levels plus generator morphisms.
struct SimplicialOfGrids {
    int dir = 0;
    int m = 0;
    std::vector<GridPtr> level;
    // face[k][j] : level[k] -> level[k-1]; degen[k][j] : level[k] -> level[k+1]
    std::vector<std::vector<GridMorphism>> face;
    std::vector<std::vector<GridMorphism>> degen;
};

SimplicialOfGrids reindex(const MultiGrid& g, int dir);
GridPtr reindex_inverse(const SimplicialOfGrids& s);

// ---- Segal maps ------------------------------------------------------------------

struct SegalMapData {
    PullbackResult pullback;
    FinFunctor mu;     // entry at level k -> pullback
    bool iso = false;  // mu bijective on objects and arrows
};

// the canonical comparison at tuple k in the given direction (k[dir] >= 2)
SegalMapData segal_at(const MultiGrid& g, int dir, const IndexTuple& k,
                      const Limits& lim = default_limits());

// Induced Segal map: the comparison into the pullback taken over a discrete
// replacement of the level-0 entry; gamma0 : entry(k(0,dir)) -> discrete.
SegalMapData induced_segal_at(const MultiGrid& g, int dir, const IndexTuple& k,
                              const FinFunctor& gamma0, const Limits& lim = default_limits());

// simplicial-object versions (dirs == 1 grids)
SegalMapData segal_map(const MultiGrid& x, int k, const Limits& lim = default_limits());
SegalMapData induced_segal_map(const MultiGrid& x, const FinFunctor& gamma0, int k,
                               const Limits& lim = default_limits());

// ---- nerves ---------------------------------------------------------------------

// nerve of a finite category: the truncated simplicial set of composable
// chains, as a grid of discrete categories
GridPtr nerve(const FinCat& c, int m, const Limits& lim = default_limits());
CatPtr chain_level(const FinCat& c, int k, const Limits& lim = default_limits());

// Internal-category data in the category of (dirs)-grids; for dirs = 0 the
// grids are single categories and this is an internal category in Cat.
struct InternalSpan {
    GridPtr objects;   // X0
    GridPtr arrows;    // X1
    GridMorphism d0;   // target face X1 -> X0
    GridMorphism d1;   // source face X1 -> X0
    GridMorphism unit; // X0 -> X1
    // composition on the explicit pullback X1 x_X0 X1, built by nerve_internal
    std::function<GridMorphism(GridPtr pb, const GridMorphism& pr1, const GridMorphism& pr2)> compose;
};

// nerve of an internal category presented by span data; axioms of the span
// are verified and violations raise Precondition errors
GridPtr nerve_internal(const InternalSpan& span, int m, const Limits& lim = default_limits());

struct NerveRecon {
    bool ok = false;
    Report why;
    CatPtr category;  // set when ok
};

// true iff all Segal maps of the discrete-entry simplicial grid are
// bijections; reconstructs the category from levels 0..2 and checks the
// whole truncation matches its nerve
NerveRecon is_nerve(const MultiGrid& x, const Limits& lim = default_limits());

// nerve-ize the category direction: a (dirs)-grid of categories becomes a
// (dirs+1)-grid of discrete entries whose new last direction is the chain
// level
GridPtr multinerve(const MultiGrid& g, const Limits& lim = default_limits());

// Segal bijections of the full multinerve in every direction
Report is_multinerve(const MultiGrid& g, const Limits& lim = default_limits());

// ---- levelwise application --------------------------------------------------------

struct LevelwiseQuotient {
    GridPtr grid;                   // discrete entries: one object per class
    GridMorphism proj;              // entrywise projection from the source grid
    std::vector<Quotient> classes;  // by linear entry index
};

// \bar p (iso classes) or \bar q (path components) applied entrywise
LevelwiseQuotient apply_levelwise_p(GridPtr g);
LevelwiseQuotient apply_levelwise_q(GridPtr g);

bool all_entries_discrete(const MultiGrid& g);

// entrywise pullback of grids over cospans of grid morphisms
struct GridPullback {
    GridPtr grid;
    std::vector<GridMorphism> projections;
};
GridPullback grid_iterated_pullback(
    const std::vector<GridPtr>& factors,
    const std::vector<std::pair<const GridMorphism*, const GridMorphism*>>& cospans,
    const Limits& lim = default_limits());

}  // namespace wgcat
