#include "wgcat/strictify.hpp"

#include <algorithm>

namespace wgcat {

namespace {

std::string comp_obj_id(int comp, const std::string& inner) {
    return "c" + std::to_string(comp) + ":" + inner;
}

}  // namespace

const FreeGrid::Component& FreeGrid::component_of(const IndexTuple& at, const std::string& arrow_key,
                                                  int m) const {
    for (const auto& c : components[linear_index(at, m)])
        if (c.f.key() == arrow_key) return c;
    fail_structural("free grid: no component tagged " + arrow_key);
}

FreeGrid build_free(const PseudoGrid& h, const Limits& lim) {
    FreeGrid out;
    int dirs = h.dirs();
    int m = h.m();
    MultiGrid g(dirs, m);
    out.components.resize(1);
    out.components.resize(static_cast<size_t>(1) << 0);  // resized properly below
    std::vector<IndexArrow> arrows = all_index_arrows(dirs, m);
    std::sort(arrows.begin(), arrows.end(),
              [](const IndexArrow& a, const IndexArrow& b) { return a.key() < b.key(); });
    int n_entries = 1;
    for (int d = 0; d < dirs; ++d) n_entries *= (m + 1);
    out.components.assign(n_entries, {});
    out.structure.resize(n_entries);

    // entries: coproducts of the source entries of all arrows into the tuple
    for (const auto& k : all_tuples(dirs, m)) {
        int li = linear_index(k, m);
        std::uint64_t total_arrows = 0;
        for (const auto& f : arrows)
            if (f.to == k) total_arrows += h.entry(f.from)->n_arrows();
        if (total_arrows > lim.max_free_arrows)
            fail_size_cap("build_free: level (" + tuple_id(k) + ") would have " +
                          std::to_string(total_arrows) + " arrows (cap " +
                          std::to_string(lim.max_free_arrows) + ")");
        FinCat cat;
        int comp_ix = 0;
        for (const auto& f : arrows) {
            if (f.to != k) continue;
            CatPtr src = h.entry(f.from);
            FreeGrid::Component comp;
            comp.f = f;
            comp.obj_offset = cat.n_objects();
            comp.arr_offset = cat.n_arrows();
            for (int o = 0; o < src->n_objects(); ++o)
                cat.add_object(comp_obj_id(comp_ix, src->object_id(o)));
            for (int a = 0; a < src->n_arrows(); ++a)
                cat.add_arrow(comp_obj_id(comp_ix, src->arrow_id(a)), comp.obj_offset + src->src(a),
                              comp.obj_offset + src->tgt(a));
            for (int o = 0; o < src->n_objects(); ++o)
                cat.set_identity(comp.obj_offset + o, comp.arr_offset + src->identity(o));
            for (int a = 0; a < src->n_arrows(); ++a)
                for (int b : src->arrows_from(src->tgt(a)))
                    cat.set_compose(comp.arr_offset + b, comp.arr_offset + a,
                                    comp.arr_offset + src->compose(b, a));
            out.components[li].push_back(std::move(comp));
            ++comp_ix;
        }
        g.set_entry(k, seal_cat(std::move(cat)));
    }
    // generator actions: relabel components along composition with the
    // generator arrow
    for (const auto& k : all_tuples(dirs, m)) {
        int li = linear_index(k, m);
        auto relabel = [&](const IndexArrow& a) {
            int lj = linear_index(a.to, m);
            CatPtr dome = g.entry(k);
            CatPtr code = g.entry(a.to);
            FinFunctor fun;
            fun.dom = dome;
            fun.cod = code;
            fun.obj_map.resize(dome->n_objects());
            fun.arr_map.resize(dome->n_arrows());
            for (const auto& comp : out.components[li]) {
                IndexArrow target = compose_index(a, comp.f);
                const FreeGrid::Component* tc = nullptr;
                for (const auto& c2 : out.components[lj])
                    if (c2.f.key() == target.key()) {
                        tc = &c2;
                        break;
                    }
                if (!tc) fail_structural("build_free: missing relabeled component");
                CatPtr src = h.entry(comp.f.from);
                for (int o = 0; o < src->n_objects(); ++o)
                    fun.obj_map[comp.obj_offset + o] = tc->obj_offset + o;
                for (int r = 0; r < src->n_arrows(); ++r)
                    fun.arr_map[comp.arr_offset + r] = tc->arr_offset + r;
            }
            return fun;
        };
        for (int d = 0; d < dirs; ++d) {
            if (k[d] >= 1)
                for (int j = 0; j <= k[d]; ++j)
                    g.set_face(k, d, j,
                               relabel(IndexArrow::in_direction(k, d, SimplexMap::delta(k[d], j))));
            if (k[d] < m)
                for (int j = 0; j <= k[d]; ++j)
                    g.set_degeneracy(k, d, j,
                                     relabel(IndexArrow::in_direction(k, d, SimplexMap::sigma(k[d], j))));
        }
    }
    out.grid = share(std::move(g));
    // structure maps: fold each component through the action of its tag
    for (const auto& k : all_tuples(dirs, m)) {
        int li = linear_index(k, m);
        CatPtr dome = out.grid->entry(k);
        CatPtr code = h.entry(k);
        FinFunctor fold;
        fold.dom = dome;
        fold.cod = code;
        fold.obj_map.resize(dome->n_objects());
        fold.arr_map.resize(dome->n_arrows());
        for (const auto& comp : out.components[li]) {
            const FinFunctor& act = h.action(comp.f);
            CatPtr src = h.entry(comp.f.from);
            for (int o = 0; o < src->n_objects(); ++o)
                fold.obj_map[comp.obj_offset + o] = act.on_obj(o);
            for (int r = 0; r < src->n_arrows(); ++r)
                fold.arr_map[comp.arr_offset + r] = act.on_arr(r);
        }
        if (auto r = fold.validate(); !r)
            fail_structural("build_free: structure map invalid at (" + tuple_id(k) + "): " + r.detail);
        out.structure[li] = std::move(fold);
    }
    return out;
}

Report boundary_functors(const FreeGrid& free, const PseudoGrid& h, const IndexTuple& k1, int dir,
                         const Limits& lim) {
    (void)lim;
    if (k1[dir] != 1) return Report::fail("boundary", "expected a level-1 tuple in the direction");
    IndexTuple k0 = corner(k1, dir, 0);
    if (!h.entry(k0)->is_discrete())
        return Report::fail("boundary", "corner (" + tuple_id(k0) + ") is not discrete");
    int m = h.m();
    for (int j = 0; j <= 1; ++j) {
        const FinFunctor& del = free.grid->face(k1, dir, j);
        const FinFunctor& hk1 = free.structure[linear_index(k1, m)];
        const FinFunctor& hk0 = free.structure[linear_index(k0, m)];
        FinFunctor dij = h.action(IndexArrow::in_direction(k1, dir, SimplexMap::vertex(1, 1 - j)));
        FinFunctor lhs = FinFunctor::compose(hk0, del);
        FinFunctor rhs = FinFunctor::compose(dij, hk1);
        if (!lhs.same_tables(rhs))
            return Report::fail("boundary",
                                "structure square does not commute at (" + tuple_id(k1) + ") face " +
                                    std::to_string(j));
    }
    return Report::pass();
}

Report free_segal_iso(const FreeGrid& free, const PseudoGrid& h, const IndexTuple& k, int dir,
                      const Limits& lim) {
    int ki = k[dir];
    if (ki < 2) return Report::fail("free-segal", "level must be >= 2");
    int m = h.m();
    // hom-set decomposition, by enumeration: arrows into k correspond to
    // compatible tuples of arrows into k(1,dir) over k(0,dir)
    IndexTuple kup = corner(k, dir, 1);
    IndexTuple kdn = corner(k, dir, 0);
    std::vector<IndexArrow> into_k = index_arrows_into(h.dirs(), m, k);
    std::vector<IndexArrow> into_up = index_arrows_into(h.dirs(), m, kup);
    // group by source tuple
    auto group = [&](const std::vector<IndexArrow>& v) {
        std::map<std::string, std::vector<IndexArrow>> g2;
        for (const auto& a : v) g2[tuple_id(a.from)].push_back(a);
        return g2;
    };
    auto gk = group(into_k);
    auto gup = group(into_up);
    std::vector<IndexArrow> nu;
    for (int t = 1; t <= ki; ++t)
        nu.push_back(IndexArrow::in_direction(k, dir, SimplexMap::interval(ki, t)));
    IndexArrow d0 = IndexArrow::in_direction(kup, dir, SimplexMap::vertex(1, 1));
    IndexArrow d1 = IndexArrow::in_direction(kup, dir, SimplexMap::vertex(1, 0));
    for (const auto& [srcid, fs] : gk) {
        // enumerate compatible tuples over this source
        const auto& ups = gup.count(srcid) ? gup.at(srcid) : std::vector<IndexArrow>{};
        std::vector<std::vector<const IndexArrow*>> tuples;
        std::vector<const IndexArrow*> cur(ki, nullptr);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == ki) {
                tuples.push_back(cur);
                return;
            }
            for (const auto& cand : ups) {
                if (pos > 0) {
                    IndexArrow left = compose_index(d0, *cur[pos - 1]);
                    IndexArrow right = compose_index(d1, cand);
                    if (!(left.key() == right.key())) continue;
                }
                cur[pos] = &cand;
                rec(pos + 1);
            }
        };
        rec(0);
        if (tuples.size() != fs.size())
            return Report::fail("free-segal", "hom decomposition count mismatch over source (" + srcid +
                                                  "): " + std::to_string(fs.size()) + " arrows vs " +
                                                  std::to_string(tuples.size()) + " tuples");
        // the decomposition map is injective on arrows into k
        std::set<std::string> seen;
        for (const auto& f : fs) {
            std::string sig;
            for (int t = 0; t < ki; ++t) sig += compose_index(nu[t], f).key() + ";";
            if (!seen.insert(sig).second)
                return Report::fail("free-segal", "interval decomposition is not injective");
        }
    }
    // the grid-level comparison must be an isomorphism
    SegalMapData s = segal_at(*free.grid, dir, k, lim);
    if (!s.iso) return Report::fail("free-segal", "grid comparison not invertible at (" + tuple_id(k) + ")");
    return Report::pass();
}

Report structure_map_decomposition(const FreeGrid& free, const PseudoGrid& h, const IndexTuple& k,
                                   int dir, const Limits& lim) {
    (void)lim;
    int ki = k[dir];
    if (ki < 2) return Report::fail("decomposition", "level must be >= 2");
    int m = h.m();
    IndexTuple kup = corner(k, dir, 1);
    const FinFunctor& hk = free.structure[linear_index(k, m)];
    const FinFunctor& hup = free.structure[linear_index(kup, m)];
    for (int t = 1; t <= ki; ++t) {
        IndexArrow nut = IndexArrow::in_direction(k, dir, SimplexMap::interval(ki, t));
        FinFunctor lhs = FinFunctor::compose(h.action(nut), hk);
        FinFunctor rhs = FinFunctor::compose(hup, free.grid->action1(k, dir, SimplexMap::interval(ki, t)));
        if (!lhs.same_tables(rhs))
            return Report::fail("decomposition", "component " + std::to_string(t) + " differs at (" +
                                                     tuple_id(k) + ")");
    }
    return Report::pass();
}

StrictificationResult strictify(const PseudoGrid& h, const Limits& lim) {
    SegalicOutcome seg = check_segalic(h, lim);
    if (!seg.ok())
        fail_precondition("strictify: input is not Segalic: " + seg.report.where + ": " +
                          seg.report.detail);
    StrictificationResult out;
    out.free = build_free(h, lim);
    int dirs = h.dirs();
    int m = h.m();
    int n_entries = out.free.grid->n_entries();
    // levelwise bo/ff factorization of the structure map
    std::vector<BoFfResult> fact(n_entries);
    for (int i = 0; i < n_entries; ++i) fact[i] = bo_ff_factorize(out.free.structure[i], lim);
    // the strict action on the middle: relabel objects like the free grid,
    // transport arrows through the comparison cells of the pseudo-functor
    MultiGrid L(dirs, m);
    for (const auto& k : all_tuples(dirs, m)) L.set_entry(k, fact[linear_index(k, m)].mid);
    auto strict_action = [&](const IndexTuple& k, const IndexArrow& a) {
        int li = linear_index(k, m);
        int lj = linear_index(a.to, m);
        CatPtr dome = fact[li].mid;
        CatPtr code = fact[lj].mid;
        const FinFunctor& relabel = out.free.grid->action1(k, a.mono[0].dom == k[0] ? 0 : 0, a.mono[0]);
        (void)relabel;
        FinFunctor freeact;
        {
            std::vector<SimplexMap> mono = a.mono;
            freeact = out.free.grid->action(k, mono);
        }
        const FinFunctor& hact = h.action(a);
        FinFunctor fun;
        fun.dom = dome;
        fun.cod = code;
        fun.obj_map = freeact.obj_map;  // objects of the middle are the free objects
        fun.arr_map.resize(dome->n_arrows());
        // an arrow of the middle from x to y is an arrow of H_k between the
        // folded images; transport by H(a) and conjugate with the comparison
        // cells phi_{a, f_x}, phi_{a, f_y}
        const FinFunctor& gk = fact[li].g;
        const FinCat& hk_cat = *h.entry(k);
        (void)hk_cat;
        const FinCat& hto = *h.entry(a.to);
        // per free object: its tagging arrow and inner object
        std::vector<const FreeGrid::Component*> comp_of_obj(dome->n_objects());
        std::vector<int> inner_of_obj(dome->n_objects());
        for (const auto& comp : out.free.components[li]) {
            CatPtr src = h.entry(comp.f.from);
            for (int o = 0; o < src->n_objects(); ++o) {
                comp_of_obj[comp.obj_offset + o] = &comp;
                inner_of_obj[comp.obj_offset + o] = o;
            }
        }
        for (int r = 0; r < dome->n_arrows(); ++r) {
            int x = dome->src(r), y = dome->tgt(r);
            int beta = gk.on_arr(r);  // arrow of H_k
            int hbeta = hact.on_arr(beta);
            NatTransf phix = h.phi(a, comp_of_obj[x]->f);
            NatTransf phiy = h.phi(a, comp_of_obj[y]->f);
            int cx = phix.component[inner_of_obj[x]];
            int cy = phiy.component[inner_of_obj[y]];
            int cxinv = hto.inverse(cx);
            if (cxinv < 0) fail_structural("strictify: comparison component not invertible");
            int transported = hto.compose(cy, hto.compose(hbeta, cxinv));
            // locate the middle arrow of the target with this underlying arrow
            int tx = fun.obj_map[x], ty = fun.obj_map[y];
            int found = -1;
            for (int cand : code->hom(tx, ty))
                if (fact[lj].g.on_arr(cand) == transported) {
                    found = cand;
                    break;
                }
            if (found < 0) fail_structural("strictify: transported arrow missing in the middle");
            fun.arr_map[r] = found;
        }
        return fun;
    };
    for (const auto& k : all_tuples(dirs, m)) {
        for (int d = 0; d < dirs; ++d) {
            if (k[d] >= 1)
                for (int j = 0; j <= k[d]; ++j)
                    L.set_face(k, d, j,
                               strict_action(k, IndexArrow::in_direction(k, d, SimplexMap::delta(k[d], j))));
            if (k[d] < m)
                for (int j = 0; j <= k[d]; ++j)
                    L.set_degeneracy(
                        k, d, j, strict_action(k, IndexArrow::in_direction(k, d, SimplexMap::sigma(k[d], j))));
        }
    }
    out.strict_grid = share(std::move(L));
    for (int i = 0; i < n_entries; ++i) {
        FinFunctor v = fact[i].v;
        v.cod = out.strict_grid->entry_linear(i);
        out.v.push_back(std::move(v));
        FinFunctor g = fact[i].g;
        g.dom = out.strict_grid->entry_linear(i);
        out.g.push_back(std::move(g));
    }
    // the boundary ladder: v and g intertwine the free/strict/pseudo faces
    // into discrete corners
    for (const auto& k : all_tuples(dirs, m)) {
        for (int d = 0; d < dirs; ++d) {
            if (k[d] != 1) continue;
            IndexTuple k0 = corner(k, d, 0);
            for (int j = 0; j <= 1; ++j) {
                const FinFunctor& dtilde = out.strict_grid->face(k, d, j);
                FinFunctor lhs = FinFunctor::compose(dtilde, out.v[linear_index(k, m)]);
                FinFunctor rhs =
                    FinFunctor::compose(out.v[linear_index(k0, m)], out.free.grid->face(k, d, j));
                if (!lhs.same_tables(rhs)) fail_theorem("strictify: v does not intertwine the boundaries");
                FinFunctor lhs2 = FinFunctor::compose(out.g[linear_index(k0, m)], dtilde);
                FinFunctor rhs2 = FinFunctor::compose(
                    h.action(IndexArrow::in_direction(k, d, SimplexMap::vertex(1, 1 - j))),
                    out.g[linear_index(k, m)]);
                if (!lhs2.same_tables(rhs2)) fail_theorem("strictify: g does not intertwine the boundaries");
            }
        }
    }
    // verified statements: the strictification is an n-fold structure, is
    // weakly globular, and maps back by levelwise equivalences
    NFoldOutcome nf = validate_nfold(*out.strict_grid, lim);
    if (!nf.ok())
        fail_theorem("strictify: the strictification is not an n-fold structure: " + nf.report.where +
                     ": " + nf.report.detail);
    out.nfold_cert = std::move(*nf.cert);
    WGOutcome wg = check_wg(out.strict_grid, dirs + 1, lim);
    if (!wg.ok())
        fail_theorem("strictify: the strictification is not weakly globular: " + wg.report.where + ": " +
                     wg.report.detail);
    out.wg_cert = wg.cert;
    for (int i = 0; i < n_entries; ++i) {
        EquivalenceOutcome eq = check_equivalence(out.g[i]);
        if (!eq.ok())
            fail_theorem("strictify: a comparison functor is not an equivalence: " + eq.report.where +
                         ": " + eq.report.detail);
        out.g_certs.push_back(std::move(*eq.certificate));
    }
    return out;
}

HdVariantOutcome verify_hd_variant(const PseudoGrid& h, const Limits& lim) {
    HdVariantOutcome out;
    for (const auto& t : all_tuples(h.dirs(), h.m()))
        if (!is_equivalence_relation_cat(*h.entry(t))) {
            out.report = Report::fail("precondition",
                                      "entry (" + tuple_id(t) + ") is not an equivalence relation");
            return out;
        }
    SegalicOutcome seg = check_segalic(h, lim);
    if (!seg.ok()) {
        out.report = Report::fail("precondition", "input is not Segalic: " + seg.report.where);
        return out;
    }
    HDOutcome hp = check_hd(seg.cert->truncation, h.dirs(), lim);
    if (!hp.ok()) {
        out.report = Report::fail("precondition", "truncation is not homotopically discrete");
        return out;
    }
    StrictificationResult sr = strictify(h, lim);
    HDOutcome hd = check_hd(sr.strict_grid, h.dirs() + 1, lim);
    if (!hd.ok())
        fail_theorem("hd variant: the strictification failed the homotopically-discrete check: " +
                     hd.report.where + ": " + hd.report.detail);
    out.report = Report::pass();
    out.derived = hd.cert;
    return out;
}

}  // namespace wgcat
