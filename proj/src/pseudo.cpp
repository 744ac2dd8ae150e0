#include "wgcat/pseudo.hpp"

#include <algorithm>

namespace wgcat {

// ---- index arrows ---------------------------------------------------------------

bool IndexArrow::is_identity() const {
    if (from != to) return false;
    for (const auto& f : mono)
        if (!f.is_identity()) return false;
    return true;
}

std::string IndexArrow::key() const {
    std::string s = tuple_id(from) + ">" + tuple_id(to) + ":";
    for (size_t d = 0; d < mono.size(); ++d) {
        if (d) s += "x";
        s += mono[d].to_string();
    }
    return s;
}

IndexArrow IndexArrow::identity(const IndexTuple& t) {
    IndexArrow a;
    a.from = t;
    a.to = t;
    for (int lv : t) a.mono.push_back(SimplexMap::identity(lv));
    return a;
}

IndexArrow IndexArrow::in_direction(const IndexTuple& from, int dir, const SimplexMap& f) {
    IndexArrow a;
    a.from = from;
    a.to = corner(from, dir, f.dom);
    for (size_t d = 0; d < from.size(); ++d)
        a.mono.push_back(static_cast<int>(d) == dir ? f : SimplexMap::identity(from[d]));
    return a;
}

IndexArrow compose_index(const IndexArrow& g, const IndexArrow& f) {
    if (f.to != g.from) fail_precondition("compose_index: mismatch");
    IndexArrow r;
    r.from = f.from;
    r.to = g.to;
    for (size_t d = 0; d < f.mono.size(); ++d) r.mono.push_back(g.mono[d].then(f.mono[d]));
    return r;
}

std::vector<IndexArrow> all_index_arrows(int dirs, int m) {
    std::vector<IndexArrow> out;
    for (const auto& from : all_tuples(dirs, m))
        for (const auto& to : all_tuples(dirs, m)) {
            std::vector<std::vector<SimplexMap>> comps(dirs);
            for (int d = 0; d < dirs; ++d) comps[d] = all_monotone(to[d], from[d]);
            std::vector<size_t> ix(dirs, 0);
            while (true) {
                IndexArrow a;
                a.from = from;
                a.to = to;
                for (int d = 0; d < dirs; ++d) a.mono.push_back(comps[d][ix[d]]);
                out.push_back(std::move(a));
                int d = 0;
                while (d < dirs && ++ix[d] == comps[d].size()) ix[d++] = 0;
                if (d == dirs) break;
                if (dirs == 0) break;
            }
            if (dirs == 0) break;
        }
    return out;
}

std::vector<IndexArrow> index_arrows_into(int dirs, int m, const IndexTuple& to) {
    std::vector<IndexArrow> out;
    for (const auto& a : all_index_arrows(dirs, m))
        if (a.to == to) out.push_back(a);
    return out;
}

// ---- PseudoGrid -------------------------------------------------------------------

PseudoGrid::PseudoGrid(int dirs, int m) : dirs_(dirs), m_(m) {
    int n = 1;
    for (int d = 0; d < dirs; ++d) n *= (m + 1);
    entries_.resize(n);
    unit_.resize(n);
}

PseudoPtr share_pseudo(PseudoGrid&& h) { return std::make_shared<const PseudoGrid>(std::move(h)); }

void PseudoGrid::set_entry(const IndexTuple& t, CatPtr c) { entries_[linear_index(t, m_)] = std::move(c); }

CatPtr PseudoGrid::entry(const IndexTuple& t) const { return entries_[linear_index(t, m_)]; }

void PseudoGrid::set_action(const IndexArrow& a, FinFunctor f) { action_[a.key()] = std::move(f); }

const FinFunctor& PseudoGrid::action(const IndexArrow& a) const {
    auto it = action_.find(a.key());
    if (it == action_.end()) fail_structural("missing action at " + a.key());
    return it->second;
}

bool PseudoGrid::has_action(const IndexArrow& a) const { return action_.count(a.key()) > 0; }

void PseudoGrid::set_phi(const IndexArrow& g, const IndexArrow& f, NatTransf cell) {
    phi_[g.key() + "|" + f.key()] = std::move(cell);
}

bool PseudoGrid::phi_stored(const IndexArrow& g, const IndexArrow& f) const {
    return phi_.count(g.key() + "|" + f.key()) > 0;
}

NatTransf PseudoGrid::phi(const IndexArrow& g, const IndexArrow& f) const {
    auto it = phi_.find(g.key() + "|" + f.key());
    if (it != phi_.end()) return it->second;
    // default: the identity comparison; only valid when the composite action
    // literally equals the composed actions
    const FinFunctor& hg = action(g);
    const FinFunctor& hf = action(f);
    const FinFunctor& hgf = action(compose_index(g, f));
    FinFunctor both = FinFunctor::compose(hg, hf);
    if (!both.same_tables(hgf))
        fail_structural("no comparison cell stored at " + g.key() + "|" + f.key() +
                        " and the actions do not agree");
    NatTransf cell;
    cell.dom = both;
    cell.cod = hgf;
    cell.component.resize(hf.dom->n_objects());
    for (int x = 0; x < hf.dom->n_objects(); ++x)
        cell.component[x] = hgf.cod->identity(hgf.on_obj(x));
    return cell;
}

void PseudoGrid::set_unit(const IndexTuple& t, NatTransf cell) {
    unit_[linear_index(t, m_)] = std::move(cell);
}

const NatTransf& PseudoGrid::unit(const IndexTuple& t) const {
    const auto& u = unit_[linear_index(t, m_)];
    if (!u) fail_structural("missing unit cell at (" + tuple_id(t) + ")");
    return *u;
}

Report PseudoGrid::validate(const Limits& lim) const {
    (void)lim;
    for (const auto& t : all_tuples(dirs_, m_)) {
        CatPtr e = entry(t);
        if (!e) return Report::fail("pseudo", "missing entry at (" + tuple_id(t) + ")");
        if (auto r = e->validate(); !r)
            return Report::fail("pseudo-entry(" + tuple_id(t) + ")", r.where + ": " + r.detail);
    }
    std::vector<IndexArrow> arrows = all_index_arrows(dirs_, m_);
    for (const auto& a : arrows) {
        auto it = action_.find(a.key());
        if (it == action_.end()) return Report::fail("pseudo", "missing action at " + a.key());
        const FinFunctor& f = it->second;
        if (f.dom != entry(a.from) || f.cod != entry(a.to))
            return Report::fail("pseudo", "action mistyped at " + a.key());
        if (auto r = f.validate(); !r) return Report::fail("pseudo-action(" + a.key() + ")", r.detail);
    }
    // units
    for (const auto& t : all_tuples(dirs_, m_)) {
        const auto& u = unit_[linear_index(t, m_)];
        if (!u) return Report::fail("pseudo", "missing unit at (" + tuple_id(t) + ")");
        if (!u->dom.same_tables(FinFunctor::identity(entry(t))) || u->dom.dom != entry(t))
            return Report::fail("pseudo", "unit domain is not the identity at (" + tuple_id(t) + ")");
        if (!u->cod.same_tables(action(IndexArrow::identity(t))))
            return Report::fail("pseudo", "unit codomain is not the identity action at (" + tuple_id(t) + ")");
        if (auto r = u->validate(); !r) return Report::fail("pseudo-unit(" + tuple_id(t) + ")", r.detail);
        if (!u->all_components_invertible())
            return Report::fail("pseudo-unit(" + tuple_id(t) + ")", "a component is not invertible");
    }
    // comparison cells on all composable pairs
    for (const auto& g : arrows)
        for (const auto& f : arrows) {
            if (f.to != g.from) continue;
            NatTransf cell;
            try {
                cell = phi(g, f);
            } catch (const WgError& e) {
                return Report::fail("pseudo-phi(" + g.key() + "|" + f.key() + ")", e.what());
            }
            const FinFunctor& hg = action(g);
            const FinFunctor& hf = action(f);
            FinFunctor both = FinFunctor::compose(hg, hf);
            if (!cell.dom.same_tables(both) || !cell.cod.same_tables(action(compose_index(g, f))))
                return Report::fail("pseudo-phi(" + g.key() + "|" + f.key() + ")", "cell mistyped");
            if (auto r = cell.validate(); !r)
                return Report::fail("pseudo-phi(" + g.key() + "|" + f.key() + ")", r.detail);
            if (!cell.all_components_invertible())
                return Report::fail("pseudo-phi(" + g.key() + "|" + f.key() + ")",
                                    "a component is not invertible");
        }
    // cocycle on composable triples; triples whose four cells are identities
    // hold tautologically and are skipped
    auto phi_trivial = [&](const IndexArrow& g, const IndexArrow& f) {
        return !phi_stored(g, f);
    };
    for (const auto& h : arrows)
        for (const auto& g : arrows) {
            if (g.to != h.from) continue;
            IndexArrow hg = compose_index(h, g);
            for (const auto& f : arrows) {
                if (f.to != g.from) continue;
                IndexArrow gf = compose_index(g, f);
                if (phi_trivial(h, g) && phi_trivial(hg, f) && phi_trivial(g, f) && phi_trivial(h, gf))
                    continue;
                NatTransf c_hg = phi(h, g);
                NatTransf c_hg_f = phi(hg, f);
                NatTransf c_gf = phi(g, f);
                NatTransf c_h_gf = phi(h, gf);
                const FinFunctor& hf = action(f);
                const FinFunctor& hh = action(h);
                const FinCat& tgt = *entry(h.to);
                for (int x = 0; x < hf.dom->n_objects(); ++x) {
                    int lhs = tgt.compose(c_hg_f.component[x], c_hg.component[hf.on_obj(x)]);
                    int rhs = tgt.compose(c_h_gf.component[x], hh.on_arr(c_gf.component[x]));
                    if (lhs != rhs)
                        return Report::fail("pseudo-cocycle",
                                            "triple " + h.key() + "|" + g.key() + "|" + f.key() +
                                                " at object '" + hf.dom->object_id(x) + "'");
                }
            }
        }
    // unit laws
    for (const auto& f : arrows) {
        const FinFunctor& hf = action(f);
        const FinCat& tgt = *entry(f.to);
        const NatTransf& usrc = unit(f.from);
        const NatTransf& utgt = unit(f.to);
        NatTransf right = phi(f, IndexArrow::identity(f.from));
        NatTransf left = phi(IndexArrow::identity(f.to), f);
        for (int x = 0; x < hf.dom->n_objects(); ++x) {
            int r1 = tgt.compose(right.component[x], hf.on_arr(usrc.component[x]));
            if (r1 != tgt.identity(hf.on_obj(x)))
                return Report::fail("pseudo-unit-law", "right unit fails at " + f.key() + " object '" +
                                                           hf.dom->object_id(x) + "'");
            int l1 = tgt.compose(left.component[x], utgt.component[hf.on_obj(x)]);
            if (l1 != tgt.identity(hf.on_obj(x)))
                return Report::fail("pseudo-unit-law", "left unit fails at " + f.key() + " object '" +
                                                           hf.dom->object_id(x) + "'");
        }
    }
    return Report::pass();
}

// ---- Segal maps -------------------------------------------------------------------

SegalMapData segal_maps_pseudo(const PseudoGrid& h, int dir, const IndexTuple& k, const Limits& lim) {
    int ki = k[dir];
    if (ki < 2) fail_precondition("segal_maps_pseudo: level must be >= 2");
    IndexTuple k1 = corner(k, dir, 1);
    IndexTuple k0 = corner(k, dir, 0);
    if (!h.entry(k0)->is_discrete())
        fail_precondition("segal_maps_pseudo: corner (" + tuple_id(k0) +
                          ") is not discrete; the comparison diagram does not commute");
    FinFunctor d0 = h.action(IndexArrow::in_direction(k1, dir, SimplexMap::vertex(1, 1)));
    FinFunctor d1 = h.action(IndexArrow::in_direction(k1, dir, SimplexMap::vertex(1, 0)));
    std::vector<FinFunctor> nus;
    for (int j = 1; j <= ki; ++j)
        nus.push_back(h.action(IndexArrow::in_direction(k, dir, SimplexMap::interval(ki, j))));
    // the legs must agree into the discrete corner
    for (int j = 0; j + 1 < ki; ++j) {
        FinFunctor a = FinFunctor::compose(d0, nus[j]);
        FinFunctor b = FinFunctor::compose(d1, nus[j + 1]);
        if (!a.same_tables(b))
            fail_structural("segal_maps_pseudo: adjacent legs disagree into the discrete corner");
    }
    std::vector<CatPtr> factors(ki, h.entry(k1));
    std::vector<Cospan> cospans;
    for (int j = 0; j + 1 < ki; ++j) cospans.push_back(Cospan{d0, d1});
    SegalMapData out{iterated_pullback(factors, cospans, lim), {}, false};
    // assemble mu by ids
    CatPtr level = h.entry(k);
    FinFunctor mu;
    mu.dom = level;
    mu.cod = out.pullback.cat;
    mu.obj_map.resize(level->n_objects());
    mu.arr_map.resize(level->n_arrows());
    for (int o = 0; o < level->n_objects(); ++o) {
        std::vector<std::string> parts;
        for (const auto& nu : nus) parts.push_back(nu.cod->object_id(nu.on_obj(o)));
        auto ix = out.pullback.cat->object_index(join_ids(parts));
        if (!ix) fail_structural("segal_maps_pseudo: comparison misses the pullback");
        mu.obj_map[o] = *ix;
    }
    for (int a = 0; a < level->n_arrows(); ++a) {
        std::vector<std::string> parts;
        for (const auto& nu : nus) parts.push_back(nu.cod->arrow_id(nu.on_arr(a)));
        auto ix = out.pullback.cat->arrow_index(join_ids(parts));
        if (!ix) fail_structural("segal_maps_pseudo: comparison misses the pullback");
        mu.arr_map[a] = *ix;
    }
    out.mu = std::move(mu);
    out.iso = out.mu.is_isomorphism();
    return out;
}

// ---- levelwise iso classes -----------------------------------------------------------

BarP bar_p(const PseudoGrid& h, const Limits& lim) {
    BarP out;
    MultiGrid g(h.dirs(), h.m());
    out.classes.resize(h.n_entries());
    for (const auto& t : all_tuples(h.dirs(), h.m())) {
        Quotient q = p_isoclasses(*h.entry(t));
        g.set_entry(t, discrete_of(q));
        out.classes[linear_index(t, h.m())] = std::move(q);
    }
    for (const auto& t : all_tuples(h.dirs(), h.m())) {
        const Quotient& q = out.classes[linear_index(t, h.m())];
        auto induced = [&](const IndexArrow& a) {
            const FinFunctor& base = h.action(a);
            const Quotient& q2 = out.classes[linear_index(a.to, h.m())];
            std::vector<int> omap(q.n_classes, -1);
            for (int x = 0; x < base.dom->n_objects(); ++x) {
                int c = q.class_of[x];
                int img = q2.class_of[base.on_obj(x)];
                if (omap[c] >= 0 && omap[c] != img)
                    fail_structural("bar_p: induced map not well defined");
                omap[c] = img;
            }
            CatPtr dome = g.entry(t);
            CatPtr code = g.entry(a.to);
            FinFunctor f;
            f.dom = dome;
            f.cod = code;
            f.obj_map = std::move(omap);
            f.arr_map.resize(dome->n_arrows());
            for (int r = 0; r < dome->n_arrows(); ++r)
                f.arr_map[r] = code->identity(f.obj_map[dome->src(r)]);
            return f;
        };
        for (int d = 0; d < h.dirs(); ++d) {
            if (t[d] >= 1)
                for (int j = 0; j <= t[d]; ++j)
                    g.set_face(t, d, j,
                               induced(IndexArrow::in_direction(t, d, SimplexMap::delta(t[d], j))));
            if (t[d] < h.m())
                for (int j = 0; j <= t[d]; ++j)
                    g.set_degeneracy(t, d, j,
                                     induced(IndexArrow::in_direction(t, d, SimplexMap::sigma(t[d], j))));
        }
    }
    out.grid = share(std::move(g));
    // strict functoriality of the collapsed grid is a claim, not a given
    if (auto r = out.grid->validate(false); !r)
        fail_structural("bar_p: collapsed grid is not strictly functorial: " + r.where + ": " + r.detail);
    (void)lim;
    return out;
}

// ---- Segalic check ---------------------------------------------------------------------

SegalicOutcome check_segalic(const PseudoGrid& h, const Limits& lim) {
    SegalicOutcome out;
    if (auto r = h.validate(lim); !r) {
        out.report = Report::fail("precondition", r.where + ": " + r.detail);
        return out;
    }
    SegalicCert cert;
    // (a) discreteness: every tuple with a zero coordinate
    for (const auto& t : all_tuples(h.dirs(), h.m())) {
        bool is_corner = std::any_of(t.begin(), t.end(), [](int v) { return v == 0; });
        if (!is_corner) continue;
        if (!h.entry(t)->is_discrete()) {
            out.report = Report::fail("(a) discreteness", "corner (" + tuple_id(t) + ") is not discrete");
            return out;
        }
        cert.discrete_corners.push_back(t);
    }
    // (b) Segal comparisons
    for (int d = 0; d < h.dirs(); ++d)
        for (const auto& t : all_tuples(h.dirs(), h.m())) {
            if (t[d] < 2) continue;
            SegalMapData s = segal_maps_pseudo(h, d, t, lim);
            if (!s.iso) {
                out.report = Report::fail("(b) segal", "comparison not invertible in direction " +
                                                           std::to_string(d + 1) + " at (" + tuple_id(t) + ")");
                return out;
            }
            cert.segal.push_back(SegalWitness{d, t, s.mu, s.mu.inverted()});
        }
    // (c) the levelwise iso-class grid is the multinerve of a weakly globular
    // structure one dimension down
    BarP bp = bar_p(h, lim);
    cert.barp = bp.grid;
    ReconstructOutcome rec = reconstruct_last_direction(bp.grid, lim);
    if (!rec.ok()) {
        out.report = Report::fail("(c) truncation", rec.report.where + ": " + rec.report.detail);
        return out;
    }
    cert.truncation = rec.grid;
    WGOutcome wg = check_wg(rec.grid, h.dirs(), lim);
    if (!wg.ok()) {
        out.report = Report::fail("(c) truncation", wg.report.where + ": " + wg.report.detail);
        return out;
    }
    cert.wg = wg.cert;
    out.cert = std::move(cert);
    out.report = Report::pass();
    return out;
}

// ---- restriction ----------------------------------------------------------------------

PseudoGrid restrict_level(const PseudoGrid& h, int j) {
    if (h.dirs() < 2) fail_precondition("restrict_level: needs at least two directions");
    PseudoGrid r(h.dirs() - 1, h.m());
    auto lift_tuple = [&](const IndexTuple& t) {
        IndexTuple full = t;
        full.insert(full.begin(), j);
        return full;
    };
    auto lift_arrow = [&](const IndexArrow& a) {
        IndexArrow b;
        b.from = lift_tuple(a.from);
        b.to = lift_tuple(a.to);
        b.mono.push_back(SimplexMap::identity(j));
        for (const auto& f : a.mono) b.mono.push_back(f);
        return b;
    };
    for (const auto& t : all_tuples(r.dirs(), r.m())) r.set_entry(t, h.entry(lift_tuple(t)));
    for (const auto& a : all_index_arrows(r.dirs(), r.m())) r.set_action(a, h.action(lift_arrow(a)));
    for (const auto& a : all_index_arrows(r.dirs(), r.m()))
        for (const auto& b : all_index_arrows(r.dirs(), r.m())) {
            if (b.to != a.from) continue;
            if (h.phi_stored(lift_arrow(a), lift_arrow(b)))
                r.set_phi(a, b, h.phi(lift_arrow(a), lift_arrow(b)));
        }
    for (const auto& t : all_tuples(r.dirs(), r.m())) r.set_unit(t, h.unit(lift_tuple(t)));
    return r;
}

}  // namespace wgcat
