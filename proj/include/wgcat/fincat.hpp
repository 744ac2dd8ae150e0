#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wgcat/common.hpp"

namespace wgcat {

class FinCat;
using CatPtr = std::shared_ptr<const FinCat>;

// A finite category as explicit tables: object ids, arrow records, an
// identity arrow per object and a composition table keyed by composable
// pairs. Everything is validated exhaustively; values are immutable once
// sealed and shared via CatPtr.
class FinCat {
public:
    struct Arrow {
        std::string id;
        int src = -1;
        int tgt = -1;
    };

    FinCat() = default;

    int add_object(std::string id);
    int add_arrow(std::string id, int src, int tgt);
    void set_identity(int obj, int arrow);
    // stores compose(g after f) = gf; non-composable entries are stored too
    // so the validator can name them
    void set_compose(int g, int f, int gf);
    void seal();  // builds lookup indices; call once after filling tables

    bool sealed() const { return sealed_; }
    int n_objects() const { return static_cast<int>(objects_.size()); }
    int n_arrows() const { return static_cast<int>(arrows_.size()); }
    const std::string& object_id(int i) const { return objects_[i]; }
    const std::string& arrow_id(int a) const { return arrows_[a].id; }
    int src(int a) const { return arrows_[a].src; }
    int tgt(int a) const { return arrows_[a].tgt; }
    int identity(int obj) const { return identity_[obj]; }
    bool is_identity(int a) const { return identity_[arrows_[a].src] == a; }

    std::optional<int> object_index(std::string_view id) const;
    std::optional<int> arrow_index(std::string_view id) const;

    std::optional<int> compose_opt(int g, int f) const;
    int compose(int g, int f) const;  // throws WgError(Structural) if absent
    const std::vector<int>& hom(int x, int y) const;

    // -1 when the arrow has no two-sided inverse
    int inverse(int a) const { return inverse_[a]; }
    bool is_invertible(int a) const { return inverse_[a] >= 0; }

    bool is_discrete() const;
    bool is_groupoid() const;

    // Structural errors (dangling ids, missing identities) are reported
    // distinctly from axiom violations; the first failing unit/pair/triple
    // is named in the report.
    Report validate() const;

    const std::unordered_map<std::uint64_t, int>& compose_table() const { return comp_; }

private:
    std::vector<std::string> objects_;
    std::vector<Arrow> arrows_;
    std::vector<int> identity_;
    std::unordered_map<std::uint64_t, int> comp_;
    std::unordered_map<std::string, int> obj_ix_;
    std::unordered_map<std::string, int> arr_ix_;
    std::unordered_map<std::uint64_t, std::vector<int>> hom_;
    std::vector<std::vector<int>> out_;  // arrows by source object
    std::vector<std::vector<int>> in_;   // arrows by target object
    std::vector<int> inverse_;
    bool sealed_ = false;

    friend CatPtr seal_cat(FinCat&& c);

public:
    const std::vector<int>& arrows_from(int x) const { return out_[x]; }
    const std::vector<int>& arrows_into(int y) const { return in_[y]; }
};

CatPtr seal_cat(FinCat&& c);

// ---- functors -------------------------------------------------------------

struct FinFunctor {
    CatPtr dom;
    CatPtr cod;
    std::vector<int> obj_map;
    std::vector<int> arr_map;

    int on_obj(int x) const { return obj_map[x]; }
    int on_arr(int a) const { return arr_map[a]; }

    Report validate() const;  // preserves src/tgt, identities, composition

    bool same_tables(const FinFunctor& o) const { return obj_map == o.obj_map && arr_map == o.arr_map; }
    bool is_isomorphism() const;
    FinFunctor inverted() const;  // precondition: is_isomorphism()

    static FinFunctor identity(CatPtr c);
    static FinFunctor compose(const FinFunctor& g, const FinFunctor& f);  // g after f
};

// ---- natural transformations ----------------------------------------------

struct NatTransf {
    FinFunctor dom;  // F
    FinFunctor cod;  // G, parallel to F
    std::vector<int> component;  // object of F.dom -> arrow of F.cod

    Report validate() const;     // typing + naturality, exhaustively
    bool all_components_invertible() const;
    static NatTransf identity(const FinFunctor& f);  // F => F
};

// ---- quotients (components, iso classes) -----------------------------------

struct Quotient {
    int n_classes = 0;
    std::vector<int> class_of;             // object -> class
    std::vector<std::string> class_ids;    // lexicographic-least member id
    std::vector<int> representative;       // class -> object index

    bool same_partition(const Quotient& o) const { return class_of == o.class_of; }
};

// connected components of the underlying graph (zig-zag closure)
Quotient q_components(const FinCat& c);
// objects identified when an invertible arrow exists between them
Quotient p_isoclasses(const FinCat& c);

// maximal subgroupoid: same objects, only the invertible arrows
CatPtr m_maxgroupoid(const FinCat& c);

// discrete category on a finite set of ids
CatPtr d_discrete(const std::vector<std::string>& ids);
CatPtr discrete_of(const Quotient& q);
FinFunctor quotient_projection(CatPtr c, const Quotient& q, CatPtr target);

// ---- limits ---------------------------------------------------------------

struct PullbackResult {
    CatPtr cat;
    std::vector<FinFunctor> projections;
};

// pullback C x_E D over a discrete foot E; refuses non-discrete feet
PullbackResult pullback_over_discrete(const FinFunctor& f, const FinFunctor& g,
                                      const Limits& lim = default_limits());

// One cospan in a wide pullback chain: left : factor_i -> foot,
// right : factor_{i+1} -> foot.
struct Cospan {
    FinFunctor left;
    FinFunctor right;
};

// Wide pullback of factors[0] -> foot <- factors[1] -> foot <- ... computed
// as a sub-product. cospans.size() must equal factors.size() - 1; with a
// single factor the result is that category.
PullbackResult iterated_pullback(const std::vector<CatPtr>& factors,
                                 const std::vector<Cospan>& cospans,
                                 const Limits& lim = default_limits());

CatPtr product(const FinCat& a, const FinCat& b, const Limits& lim = default_limits());
CatPtr coproduct(const FinCat& a, const FinCat& b);

// full subcategory on the given objects (sorted unique indices)
struct SubcatResult {
    CatPtr cat;
    FinFunctor inclusion;
};
SubcatResult full_subcategory(CatPtr c, const std::vector<int>& objects);

// ---- equivalences ----------------------------------------------------------

// Re-checkable equivalence witness: explicit hom-set bijections for the
// nonempty hom pairs (empty pairs are re-verified as empty on both sides)
// plus an essential-surjectivity witness per codomain object.
struct EquivCertificate {
    FinFunctor functor;

    struct FFEntry {
        int x = -1, y = -1;                        // domain objects
        std::vector<std::pair<int, int>> pairs;    // dom arrow <-> cod arrow
    };
    struct EsoEntry {
        int cod_obj = -1;
        int dom_obj = -1;
        int iso = -1;  // invertible arrow functor(dom_obj) -> cod_obj
    };
    std::vector<FFEntry> ff_witness;
    std::vector<EsoEntry> eso_witness;

    // verifies the certificate against the stored functor without re-searching
    Report reverify() const;
};

struct EquivalenceOutcome {
    std::optional<EquivCertificate> certificate;
    Report report;
    bool ok() const { return certificate.has_value(); }
};

EquivalenceOutcome check_equivalence(const FinFunctor& f);

// ---- bo/ff factorization ----------------------------------------------------

// f = g . v with v bijective on objects and g fully faithful. The middle
// category keeps the domain's objects and borrows hom-sets from the codomain.
struct BoFfResult {
    CatPtr mid;
    FinFunctor v;  // dom -> mid, identity on objects
    FinFunctor g;  // mid -> cod, fully faithful
};
BoFfResult bo_ff_factorize(const FinFunctor& f, const Limits& lim = default_limits());

// every arrow invertible and every hom-set has at most one element
bool is_equivalence_relation_cat(const FinCat& c);

// brute force isomorphism search; intended for small instances in tests
std::optional<FinFunctor> find_isomorphism(CatPtr a, CatPtr b, std::uint64_t node_budget = 2000000);

// deterministic id for tuples in pullbacks/products: "(a|b|c)"
std::string join_ids(const std::vector<std::string>& parts);

}  // namespace wgcat
