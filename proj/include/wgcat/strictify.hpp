#pragma once

#include "wgcat/pseudo.hpp"

namespace wgcat {

// The free strict grid on the underlying entries of a pseudo-functor: at
// each tuple the coproduct, over all index arrows into it, of the source
// entries, together with the structure map folding each component through
// the pseudo-functor's action.
struct FreeGrid {
    GridPtr grid;
    struct Component {
        IndexArrow f;        // the tagging arrow; source entry f.from
        int obj_offset = 0;  // first object of the component in the entry
        int arr_offset = 0;
    };
    std::vector<std::vector<Component>> components;  // by linear entry index
    std::vector<FinFunctor> structure;               // per entry: free -> H

    // locate the component of a given tagging arrow
    const Component& component_of(const IndexTuple& at, const std::string& arrow_key, int m) const;
};

FreeGrid build_free(const PseudoGrid& h, const Limits& lim = default_limits());

// the two induced boundary functors on the free grid at (k, dir, j) and the
// commutation of the structure-map square into the discrete corner
Report boundary_functors(const FreeGrid& free, const PseudoGrid& h, const IndexTuple& k1, int dir,
                         const Limits& lim = default_limits());

// the free grid's Segal comparison at (k, dir) is an isomorphism realized by
// the interval decomposition of index arrows; verified by enumeration
Report free_segal_iso(const FreeGrid& free, const PseudoGrid& h, const IndexTuple& k, int dir,
                      const Limits& lim = default_limits());

// the structure map at k decomposes componentwise through the Segal
// comparisons on both sides
Report structure_map_decomposition(const FreeGrid& free, const PseudoGrid& h, const IndexTuple& k,
                                   int dir, const Limits& lim = default_limits());

struct StrictificationResult {
    FreeGrid free;
    GridPtr strict_grid;                    // L
    std::vector<FinFunctor> v;              // per entry: free -> L, bijective on objects
    std::vector<FinFunctor> g;              // per entry: L -> H, fully faithful
    NFoldCert nfold_cert;
    std::shared_ptr<WGCert> wg_cert;
    std::vector<EquivCertificate> g_certs;  // per entry
};

// The full strictification: levelwise bo/ff factorization of the structure
// map, the induced strict action, and machine verification that the result
// is a weakly globular structure with levelwise equivalences back to the
// input. Failures of the verified statements raise theorem violations;
// precondition failures are ordinary errors.
StrictificationResult strictify(const PseudoGrid& h, const Limits& lim = default_limits());

// when every entry is an equivalence relation and the truncation is
// homotopically discrete, the strictification is homotopically discrete
struct HdVariantOutcome {
    Report report;
    std::shared_ptr<HDCert> derived;
};
HdVariantOutcome verify_hd_variant(const PseudoGrid& h, const Limits& lim = default_limits());

}  // namespace wgcat
