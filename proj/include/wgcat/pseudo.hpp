#pragma once

#include <map>
#include <optional>

#include "wgcat/wg.hpp"

namespace wgcat {

// An arrow of the (op of the) truncated multi-simplex index category: the
// action direction runs from entry `from` to entry `to`, against the
// underlying monotone maps mono[d] : [to[d]] -> [from[d]].
struct IndexArrow {
    IndexTuple from;
    IndexTuple to;
    std::vector<SimplexMap> mono;

    bool is_identity() const;
    std::string key() const;

    static IndexArrow identity(const IndexTuple& t);
    // single-direction arrow, identity elsewhere
    static IndexArrow in_direction(const IndexTuple& from, int dir, const SimplexMap& f);
};

IndexArrow compose_index(const IndexArrow& g, const IndexArrow& f);  // g after f
std::vector<IndexArrow> all_index_arrows(int dirs, int m);
std::vector<IndexArrow> index_arrows_into(int dirs, int m, const IndexTuple& to);

// A pseudo-functor on the truncated index category: a category per tuple, a
// functor per index arrow, an invertible comparison 2-cell per composable
// pair and a unit 2-cell per tuple. Comparison cells for composable pairs on
// which the actions literally agree may be left unstored; they default to
// the identity cell (validation still checks every pair).
class PseudoGrid {
public:
    PseudoGrid() = default;
    PseudoGrid(int dirs, int m);

    int dirs() const { return dirs_; }
    int m() const { return m_; }
    int n_entries() const { return static_cast<int>(entries_.size()); }

    void set_entry(const IndexTuple& t, CatPtr c);
    CatPtr entry(const IndexTuple& t) const;
    CatPtr entry_linear(int i) const { return entries_[i]; }

    void set_action(const IndexArrow& a, FinFunctor f);
    const FinFunctor& action(const IndexArrow& a) const;
    bool has_action(const IndexArrow& a) const;

    void set_phi(const IndexArrow& g, const IndexArrow& f, NatTransf cell);
    // the comparison H(g)H(f) => H(g.f); identity by default
    NatTransf phi(const IndexArrow& g, const IndexArrow& f) const;
    bool phi_stored(const IndexArrow& g, const IndexArrow& f) const;

    void set_unit(const IndexTuple& t, NatTransf cell);
    const NatTransf& unit(const IndexTuple& t) const;

    // exhaustive validation: entries, actions, units, comparison typing and
    // invertibility, the cocycle on composable triples and both unit laws
    Report validate(const Limits& lim = default_limits()) const;

    const std::map<std::string, FinFunctor>& actions() const { return action_; }
    const std::map<std::string, NatTransf>& stored_phis() const { return phi_; }

private:
    int dirs_ = 0;
    int m_ = 0;
    std::vector<CatPtr> entries_;
    std::map<std::string, FinFunctor> action_;
    std::map<std::string, NatTransf> phi_;
    std::vector<std::optional<NatTransf>> unit_;
};

using PseudoPtr = std::shared_ptr<const PseudoGrid>;
PseudoPtr share_pseudo(PseudoGrid&& h);

// the comparison into the iterated pullback over a discrete corner; refuses
// when the corner entry is not discrete
SegalMapData segal_maps_pseudo(const PseudoGrid& h, int dir, const IndexTuple& k,
                               const Limits& lim = default_limits());

struct SegalicCert {
    std::vector<IndexTuple> discrete_corners;
    std::vector<SegalWitness> segal;
    GridPtr barp;                    // the levelwise iso-class grid (strict)
    GridPtr truncation;              // reconstructed along the last direction
    std::shared_ptr<WGCert> wg;      // certificate for the truncation
};

struct SegalicOutcome {
    std::optional<SegalicCert> cert;
    Report report;
    bool ok() const { return cert.has_value(); }
};

SegalicOutcome check_segalic(const PseudoGrid& h, const Limits& lim = default_limits());

// levelwise iso classes of a pseudo-functor: a strict grid (strictness is
// verified, not assumed)
struct BarP {
    GridPtr grid;
    std::vector<Quotient> classes;
};
BarP bar_p(const PseudoGrid& h, const Limits& lim = default_limits());

// restriction along the first direction at level j
PseudoGrid restrict_level(const PseudoGrid& h, int j);

}  // namespace wgcat
