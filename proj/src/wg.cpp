#include "wgcat/wg.hpp"

#include <algorithm>

namespace wgcat {

namespace {

void require_dims(const GridPtr& x, int n, const char* who) {
    if (!x) fail_precondition(std::string(who) + ": null grid");
    if (x->dirs() != n - 1)
        fail_precondition(std::string(who) + ": grid has " + std::to_string(x->dirs()) +
                          " directions, expected " + std::to_string(n - 1));
}

// constant grid on a discrete category
GridPtr constant_grid(int dirs, int m, CatPtr c) {
    MultiGrid g(dirs, m);
    for (const auto& t : all_tuples(dirs, m)) g.set_entry(t, c);
    FinFunctor idc = FinFunctor::identity(c);
    for (const auto& t : all_tuples(dirs, m))
        for (int d = 0; d < dirs; ++d) {
            if (t[d] >= 1)
                for (int j = 0; j <= t[d]; ++j) g.set_face(t, d, j, idc);
            if (t[d] < m)
                for (int j = 0; j <= t[d]; ++j) g.set_degeneracy(t, d, j, idc);
        }
    return share(std::move(g));
}

// comparison morphism into an entrywise pullback, assembled by ids
GridMorphism build_grid_mu(GridPtr level, const GridPullback& pb,
                           const std::vector<GridMorphism>& nus) {
    GridMorphism mu;
    mu.dom = level;
    mu.cod = pb.grid;
    int dirs = level->dirs();
    int m = level->m();
    mu.component.resize(level->n_entries());
    for (const auto& t : all_tuples(dirs, m)) {
        CatPtr dom = level->entry(t);
        CatPtr cod = pb.grid->entry(t);
        FinFunctor f;
        f.dom = dom;
        f.cod = cod;
        f.obj_map.resize(dom->n_objects());
        f.arr_map.resize(dom->n_arrows());
        for (int o = 0; o < dom->n_objects(); ++o) {
            std::vector<std::string> parts;
            for (const auto& nu : nus)
                parts.push_back(nu.at(t).cod->object_id(nu.at(t).on_obj(o)));
            auto ix = cod->object_index(join_ids(parts));
            if (!ix) fail_structural("grid comparison misses the pullback on objects");
            f.obj_map[o] = *ix;
        }
        for (int a = 0; a < dom->n_arrows(); ++a) {
            std::vector<std::string> parts;
            for (const auto& nu : nus)
                parts.push_back(nu.at(t).cod->arrow_id(nu.at(t).on_arr(a)));
            auto ix = cod->arrow_index(join_ids(parts));
            if (!ix) fail_structural("grid comparison misses the pullback on arrows");
            f.arr_map[a] = *ix;
        }
        mu.component[linear_index(t, m)] = std::move(f);
    }
    return mu;
}

}  // namespace

// ---- homotopically discrete ----------------------------------------------------

HDOutcome check_hd(GridPtr x, int n, const Limits& lim) {
    require_dims(x, n, "check_hd");
    HDOutcome out;
    if (n == 1) {
        if (!is_equivalence_relation_cat(*x->entry({}))) {
            out.report = Report::fail("eqrel", "the category is not an equivalence relation");
            return out;
        }
        out.cert = std::make_shared<HDCert>();
        out.cert->n = 1;
        out.report = Report::pass();
        return out;
    }
    // the category direction must be groupoidal
    for (int i = 0; i < x->n_entries(); ++i) {
        CatPtr e = x->entry_linear(i);
        for (int a = 0; a < e->n_arrows(); ++a)
            if (!e->is_invertible(a)) {
                out.report = Report::fail("groupoidal",
                                          "entry " + std::to_string(i) + " has a non-invertible arrow '" +
                                              e->arrow_id(a) + "'");
                return out;
            }
    }
    auto cert = std::make_shared<HDCert>();
    cert->n = n;
    SimplicialOfGrids rx = reindex(*x, 0);
    for (int s = 0; s <= x->m(); ++s) {
        HDOutcome lv = check_hd(rx.level[s], n - 1, lim);
        if (!lv.ok()) {
            out.report = Report::fail("level " + std::to_string(s), lv.report.where + ": " + lv.report.detail);
            return out;
        }
        cert->levels.push_back(lv.cert);
    }
    for (const auto& t : all_tuples(x->dirs(), x->m())) {
        if (t[0] < 2) continue;
        SegalMapData s = segal_at(*x, 0, t, lim);
        if (!s.iso) {
            out.report = Report::fail("segal", "comparison not invertible at (" + tuple_id(t) + ")");
            return out;
        }
        cert->segal.push_back(SegalWitness{0, t, s.mu, s.mu.inverted()});
    }
    TruncationOutcome tr = p_truncate(x, lim);
    if (!tr.ok()) {
        out.report = Report::fail("truncation", tr.report.where + ": " + tr.report.detail);
        return out;
    }
    HDOutcome pc = check_hd(tr.grid, n - 1, lim);
    if (!pc.ok()) {
        out.report = Report::fail("truncation", pc.report.where + ": " + pc.report.detail);
        return out;
    }
    cert->p_cert = pc.cert;
    cert->p_grid = tr.grid;
    out.cert = cert;
    out.report = Report::pass();
    return out;
}

Report recheck_hd(GridPtr x, const HDCert& cert, const Limits& lim) {
    if (cert.n == 1) {
        if (x->dirs() != 0) return Report::fail("recheck-hd", "dimension mismatch");
        if (!is_equivalence_relation_cat(*x->entry({})))
            return Report::fail("recheck-hd", "not an equivalence relation");
        return Report::pass();
    }
    if (x->dirs() != cert.n - 1) return Report::fail("recheck-hd", "dimension mismatch");
    for (const auto& w : cert.segal)
        if (auto r = verify_segal_witness(*x, w, lim); !r) return r;
    if (static_cast<int>(cert.levels.size()) != x->m() + 1)
        return Report::fail("recheck-hd", "level certificate count mismatch");
    SimplicialOfGrids rx = reindex(*x, 0);
    for (int s = 0; s <= x->m(); ++s) {
        if (!cert.levels[s]) return Report::fail("recheck-hd", "missing level certificate");
        if (auto r = recheck_hd(rx.level[s], *cert.levels[s], lim); !r) return r;
    }
    TruncationOutcome tr = p_truncate(x, lim);
    if (!tr.ok()) return Report::fail("recheck-hd", "truncation does not reconstruct");
    if (!cert.p_grid || !tr.grid->structurally_equal(*cert.p_grid))
        return Report::fail("recheck-hd", "stored truncation differs");
    if (!cert.p_cert) return Report::fail("recheck-hd", "missing truncation certificate");
    return recheck_hd(tr.grid, *cert.p_cert, lim);
}

// ---- truncation -------------------------------------------------------------------

TruncationOutcome p_truncate(GridPtr x, const Limits& lim) {
    TruncationOutcome out;
    if (x->dirs() < 1) fail_precondition("p_truncate: nothing to truncate at dimension 1");
    out.barp = apply_levelwise_p(x);
    ReconstructOutcome rec = reconstruct_last_direction(out.barp.grid, lim);
    if (!rec.ok()) {
        out.report = rec.report;
        return out;
    }
    out.grid = rec.grid;
    out.report = Report::pass();
    return out;
}

// ---- discretization ------------------------------------------------------------------

DiscretizeOutcome discretize(GridPtr x, int n, const Limits& lim) {
    require_dims(x, n, "discretize");
    DiscretizeOutcome out;
    Discretization d;
    if (n == 1) {
        CatPtr e = x->entry({});
        Quotient q = p_isoclasses(*e);
        for (int a = 0; a < e->n_arrows(); ++a)
            if (q.class_of[e->src(a)] != q.class_of[e->tgt(a)]) {
                out.report = Report::fail("discretize", "an arrow crosses iso-classes; input is not "
                                                        "homotopically discrete");
                return out;
            }
        d.class_ids = q.class_ids;
        d.cls.push_back(q.class_of);
        CatPtr dS = discrete_of(q);
        d.xd = constant_grid(0, x->m(), dS);
        GridMorphism gamma;
        gamma.dom = x;
        gamma.cod = d.xd;
        gamma.component.push_back(quotient_projection(e, q, dS));
        d.gamma = gamma;
        d.dp_grid = d.xd;
        d.gamma_n = std::move(gamma);
        out.disc = std::move(d);
        out.report = Report::pass();
        return out;
    }
    TruncationOutcome tr = p_truncate(x, lim);
    if (!tr.ok()) {
        out.report = Report::fail("discretize", tr.report.where + ": " + tr.report.detail);
        return out;
    }
    DiscretizeOutcome rec = discretize(tr.grid, n - 1, lim);
    if (!rec.ok()) {
        out.report = Report::fail("discretize", rec.report.where + ": " + rec.report.detail);
        return out;
    }
    d.class_ids = rec.disc->class_ids;
    int D = x->dirs();
    int m = x->m();
    d.cls.resize(x->n_entries());
    for (const auto& t : all_tuples(D, m)) {
        int li = linear_index(t, m);
        IndexTuple u(t.begin(), t.end() - 1);
        int r = t.back();
        // walk the quotient element down to the level-0 vertex, then through
        // the reconstructed truncation's classes
        FinFunctor tovertex = tr.barp.grid->action1(t, D - 1, SimplexMap::vertex(r, 0));
        CatPtr pg_entry = tr.grid->entry(u);
        const std::vector<int>& inner = rec.disc->cls[linear_index(u, m)];
        const Quotient& q = tr.barp.classes[li];
        CatPtr e = x->entry(t);
        d.cls[li].resize(e->n_objects());
        for (int o = 0; o < e->n_objects(); ++o) {
            int c = q.class_of[o];
            int v = tovertex.on_obj(c);
            auto ix = pg_entry->object_index(tovertex.cod->object_id(v));
            if (!ix) fail_structural("discretize: vertex class missing in the truncation");
            d.cls[li][o] = inner[*ix];
        }
    }
    CatPtr dS = d_discrete(d.class_ids);
    d.xd = constant_grid(D, m, dS);
    GridMorphism gamma;
    gamma.dom = x;
    gamma.cod = d.xd;
    gamma.component.resize(x->n_entries());
    for (const auto& t : all_tuples(D, m)) {
        int li = linear_index(t, m);
        CatPtr e = x->entry(t);
        FinFunctor f;
        f.dom = e;
        f.cod = dS;
        f.obj_map = d.cls[li];
        f.arr_map.resize(e->n_arrows());
        for (int a = 0; a < e->n_arrows(); ++a) {
            if (d.cls[li][e->src(a)] != d.cls[li][e->tgt(a)]) {
                out.report = Report::fail("discretize", "an arrow crosses classes at (" + tuple_id(t) +
                                                            "); input is not homotopically discrete");
                return out;
            }
            f.arr_map[a] = dS->identity(d.cls[li][e->src(a)]);
        }
        gamma.component[li] = std::move(f);
    }
    if (auto r = gamma.validate(); !r) {
        out.report = Report::fail("discretize", "collapse is not natural: " + r.where + ": " + r.detail);
        return out;
    }
    d.gamma = std::move(gamma);
    d.dp_grid = tr.barp.grid;
    d.gamma_n = tr.barp.proj;
    out.disc = std::move(d);
    out.report = Report::pass();
    return out;
}

// ---- n-equivalences ----------------------------------------------------------------------

NEquivOutcome check_nequiv(const GridMorphism& f, int n, const Limits& lim) {
    NEquivOutcome out;
    if (!f.dom || !f.cod) {
        out.report = Report::fail("nequiv", "missing dom/cod");
        return out;
    }
    if (f.dom->dirs() != n - 1) {
        out.report = Report::fail("nequiv", "dimension mismatch");
        return out;
    }
    if (n == 1) {
        EquivalenceOutcome eq = check_equivalence(f.component[0]);
        if (!eq.ok()) {
            out.report = eq.report;
            return out;
        }
        out.cert = std::make_shared<NEquivCert>();
        out.cert->n = 1;
        out.cert->base = std::move(*eq.certificate);
        out.report = Report::pass();
        return out;
    }
    GridPtr X = f.dom;
    GridPtr Y = f.cod;
    int m = X->m();
    SimplicialOfGrids rX = reindex(*X, 0);
    SimplicialOfGrids rY = reindex(*Y, 0);
    DiscretizeOutcome dx = discretize(rX.level[0], n - 1, lim);
    if (!dx.ok()) {
        out.report = Report::fail("nequiv", "source level 0 does not discretize: " + dx.report.detail);
        return out;
    }
    DiscretizeOutcome dy = discretize(rY.level[0], n - 1, lim);
    if (!dy.ok()) {
        out.report = Report::fail("nequiv", "target level 0 does not discretize: " + dy.report.detail);
        return out;
    }
    // induced map on the underlying sets
    int nx = static_cast<int>(dx.disc->class_ids.size());
    std::vector<int> fmap(nx, -1);
    for (const auto& t : all_tuples(X->dirs() - 1, m)) {
        IndexTuple full = t;
        full.insert(full.begin(), 0);
        const FinFunctor& comp = f.at(full);
        const std::vector<int>& cx = dx.disc->cls[linear_index(t, m)];
        const std::vector<int>& cy = dy.disc->cls[linear_index(t, m)];
        for (size_t o = 0; o < cx.size(); ++o) {
            int a = cx[o];
            int fa = cy[comp.on_obj(static_cast<int>(o))];
            if (fmap[a] >= 0 && fmap[a] != fa) {
                out.report = Report::fail("nequiv", "the map does not descend to the underlying sets");
                return out;
            }
            fmap[a] = fa;
        }
    }
    auto cert = std::make_shared<NEquivCert>();
    cert->n = n;
    // fibers over pairs of classes
    for (int a = 0; a < nx; ++a)
        for (int b = 0; b < nx; ++b) {
            HomFiber FX = hom_fiber(*X, rX.level[1], rX.level[0], dx.disc->cls, a, b);
            if (fmap[a] < 0 || fmap[b] < 0) {
                // class not inhabited at level 0 of any entry: skip empty fiber
                continue;
            }
            HomFiber FY = hom_fiber(*Y, rY.level[1], rY.level[0], dy.disc->cls, fmap[a], fmap[b]);
            GridMorphism fab;
            fab.dom = FX.grid;
            fab.cod = FY.grid;
            fab.component.resize(FX.grid->n_entries());
            bool escaped = false;
            for (const auto& t : all_tuples(X->dirs() - 1, m)) {
                IndexTuple full = t;
                full.insert(full.begin(), 1);
                const FinFunctor& comp = f.at(full);
                CatPtr dome = FX.grid->entry(t);
                CatPtr code = FY.grid->entry(t);
                FinFunctor g;
                g.dom = dome;
                g.cod = code;
                g.obj_map.resize(dome->n_objects());
                g.arr_map.resize(dome->n_arrows());
                const FinFunctor& incx = FX.inclusion.at(t);
                for (int o = 0; o < dome->n_objects() && !escaped; ++o) {
                    int img = comp.on_obj(incx.on_obj(o));
                    auto ix = code->object_index(comp.cod->object_id(img));
                    if (!ix) {
                        escaped = true;
                        break;
                    }
                    g.obj_map[o] = *ix;
                }
                for (int r = 0; r < dome->n_arrows() && !escaped; ++r) {
                    int img = comp.on_arr(incx.on_arr(r));
                    auto ix = code->arrow_index(comp.cod->arrow_id(img));
                    if (!ix) {
                        escaped = true;
                        break;
                    }
                    g.arr_map[r] = *ix;
                }
                if (escaped) break;
                fab.component[linear_index(t, m)] = std::move(g);
            }
            if (escaped) {
                out.report = Report::fail("nequiv", "the fiber over (" + dx.disc->class_ids[a] + "," +
                                                        dx.disc->class_ids[b] +
                                                        ") is not preserved by the map");
                return out;
            }
            NEquivOutcome sub = check_nequiv(fab, n - 1, lim);
            if (!sub.ok()) {
                out.report = Report::fail("nequiv fiber (" + dx.disc->class_ids[a] + "," +
                                              dx.disc->class_ids[b] + ")",
                                          sub.report.where + ": " + sub.report.detail);
                return out;
            }
            cert->fibers.push_back(NEquivCert::Fiber{dx.disc->class_ids[a], dx.disc->class_ids[b],
                                                     dy.disc->class_ids[fmap[a]],
                                                     dy.disc->class_ids[fmap[b]], sub.cert});
        }
    // truncated map
    TruncationOutcome tx = p_truncate(X, lim);
    TruncationOutcome ty = p_truncate(Y, lim);
    if (!tx.ok() || !ty.ok()) {
        out.report = Report::fail("nequiv", "a truncation does not reconstruct");
        return out;
    }
    GridMorphism pf;
    pf.dom = tx.grid;
    pf.cod = ty.grid;
    pf.component.resize(tx.grid->n_entries());
    for (const auto& u : all_tuples(X->dirs() - 1, m)) {
        IndexTuple u0 = u, u1 = u;
        u0.push_back(0);
        u1.push_back(1);
        CatPtr dome = tx.grid->entry(u);
        CatPtr code = ty.grid->entry(u);
        const Quotient& qx0 = tx.barp.classes[linear_index(u0, m)];
        const Quotient& qy0 = ty.barp.classes[linear_index(u0, m)];
        const Quotient& qx1 = tx.barp.classes[linear_index(u1, m)];
        const Quotient& qy1 = ty.barp.classes[linear_index(u1, m)];
        FinFunctor g;
        g.dom = dome;
        g.cod = code;
        g.obj_map.assign(dome->n_objects(), -1);
        g.arr_map.assign(dome->n_arrows(), -1);
        const FinFunctor& f0 = f.at(u0);
        const FinFunctor& f1 = f.at(u1);
        for (int o = 0; o < f0.dom->n_objects(); ++o) {
            int c = qx0.class_of[o];
            int img = qy0.class_of[f0.on_obj(o)];
            auto ix = dome->object_index(qx0.class_ids[c]);
            auto iy = code->object_index(qy0.class_ids[img]);
            if (!ix || !iy) fail_structural("nequiv: truncation object classes misaligned");
            if (g.obj_map[*ix] >= 0 && g.obj_map[*ix] != *iy) {
                out.report = Report::fail("nequiv", "truncated map not well defined on objects");
                return out;
            }
            g.obj_map[*ix] = *iy;
        }
        for (int aarr = 0; aarr < f1.dom->n_objects(); ++aarr) {
            int c = qx1.class_of[aarr];
            int img = qy1.class_of[f1.on_obj(aarr)];
            auto ix = dome->arrow_index(qx1.class_ids[c]);
            auto iy = code->arrow_index(qy1.class_ids[img]);
            if (!ix || !iy) fail_structural("nequiv: truncation arrow classes misaligned");
            if (g.arr_map[*ix] >= 0 && g.arr_map[*ix] != *iy) {
                out.report = Report::fail("nequiv", "truncated map not well defined on arrows");
                return out;
            }
            g.arr_map[*ix] = *iy;
        }
        pf.component[linear_index(u, m)] = std::move(g);
    }
    if (auto r = pf.validate(); !r) {
        out.report = Report::fail("nequiv", "truncated map is not a morphism: " + r.where + ": " + r.detail);
        return out;
    }
    NEquivOutcome psub = check_nequiv(pf, n - 1, lim);
    if (!psub.ok()) {
        out.report =
            Report::fail("nequiv truncation", psub.report.where + ": " + psub.report.detail);
        return out;
    }
    cert->p_cert = psub.cert;
    out.cert = cert;
    out.report = Report::pass();
    return out;
}

// ---- weak globularity --------------------------------------------------------------------

WGOutcome check_wg(GridPtr x, int n, const Limits& lim) {
    require_dims(x, n, "check_wg");
    WGOutcome out;
    if (n == 1) {
        out.cert = std::make_shared<WGCert>();
        out.cert->n = 1;
        out.report = Report::pass();
        return out;
    }
    auto cert = std::make_shared<WGCert>();
    cert->n = n;
    int m = x->m();
    SimplicialOfGrids rx = reindex(*x, 0);
    // levels lie one dimension down
    for (int s = 0; s <= m; ++s) {
        WGOutcome lv = check_wg(rx.level[s], n - 1, lim);
        if (!lv.ok()) {
            out.report = Report::fail("level " + std::to_string(s), lv.report.where + ": " + lv.report.detail);
            return out;
        }
        cert->levels.push_back(lv.cert);
    }
    // (a) weak globularity: level 0 homotopically discrete
    HDOutcome hd0 = check_hd(rx.level[0], n - 1, lim);
    if (!hd0.ok()) {
        out.report = Report::fail("(a) level 0", hd0.report.where + ": " + hd0.report.detail);
        return out;
    }
    cert->hd0 = hd0.cert;
    // (b) Segal condition in direction 1
    for (const auto& t : all_tuples(x->dirs(), m)) {
        if (t[0] < 2) continue;
        SegalMapData s = segal_at(*x, 0, t, lim);
        if (!s.iso) {
            out.report = Report::fail("(b) segal", "comparison not invertible at (" + tuple_id(t) + ")");
            return out;
        }
        cert->segal.push_back(SegalWitness{0, t, s.mu, s.mu.inverted()});
    }
    // (c) induced Segal maps are equivalences one dimension down
    DiscretizeOutcome d0 = discretize(rx.level[0], n - 1, lim);
    if (!d0.ok()) {
        out.report = Report::fail("(c) discretize", d0.report.detail);
        return out;
    }
    GridMorphism leg0 = compose_morphisms(d0.disc->gamma, rx.face[1][0]);
    GridMorphism leg1 = compose_morphisms(d0.disc->gamma, rx.face[1][1]);
    for (int k = 2; k <= m; ++k) {
        std::vector<GridPtr> factors(k, rx.level[1]);
        std::vector<std::pair<const GridMorphism*, const GridMorphism*>> cospans;
        for (int j = 0; j + 1 < k; ++j) cospans.emplace_back(&leg0, &leg1);
        GridPullback P = grid_iterated_pullback(factors, cospans, lim);
        std::vector<GridMorphism> nus;
        for (int j = 1; j <= k; ++j) {
            GridMorphism nu;
            nu.dom = rx.level[k];
            nu.cod = rx.level[1];
            nu.component.resize(rx.level[k]->n_entries());
            for (const auto& t : all_tuples(x->dirs() - 1, m)) {
                IndexTuple full = t;
                full.insert(full.begin(), k);
                nu.component[linear_index(t, m)] = x->action1(full, 0, SimplexMap::interval(k, j));
            }
            nus.push_back(std::move(nu));
        }
        GridMorphism mu = build_grid_mu(rx.level[k], P, nus);
        WGOutcome pw = check_wg(P.grid, n - 1, lim);
        if (!pw.ok()) {
            out.report = Report::fail("(c) pullback closure at k=" + std::to_string(k),
                                      pw.report.where + ": " + pw.report.detail);
            return out;
        }
        NEquivOutcome nq = check_nequiv(mu, n - 1, lim);
        if (!nq.ok()) {
            out.report = Report::fail("(c) induced segal at k=" + std::to_string(k),
                                      nq.report.where + ": " + nq.report.detail);
            return out;
        }
        cert->induced.push_back(WGCert::Induced{k, P.grid, pw.cert, nq.cert});
    }
    // (d) the truncation reconstructs and is itself weakly globular
    TruncationOutcome tr = p_truncate(x, lim);
    if (!tr.ok()) {
        out.report = Report::fail("(d) truncation", tr.report.where + ": " + tr.report.detail);
        return out;
    }
    WGOutcome pw = check_wg(tr.grid, n - 1, lim);
    if (!pw.ok()) {
        out.report = Report::fail("(d) truncation", pw.report.where + ": " + pw.report.detail);
        return out;
    }
    cert->p_cert = pw.cert;
    cert->p_grid = tr.grid;
    out.cert = cert;
    out.report = Report::pass();
    return out;
}

Report recheck_wg(GridPtr x, const WGCert& cert, const Limits& lim) {
    if (cert.n == 1) {
        if (x->dirs() != 0) return Report::fail("recheck-wg", "dimension mismatch");
        return Report::pass();
    }
    if (x->dirs() != cert.n - 1) return Report::fail("recheck-wg", "dimension mismatch");
    SimplicialOfGrids rx = reindex(*x, 0);
    if (!cert.hd0) return Report::fail("recheck-wg", "missing level-0 certificate");
    if (auto r = recheck_hd(rx.level[0], *cert.hd0, lim); !r) return r;
    for (const auto& w : cert.segal)
        if (auto r = verify_segal_witness(*x, w, lim); !r) return r;
    if (static_cast<int>(cert.levels.size()) != x->m() + 1)
        return Report::fail("recheck-wg", "level certificate count mismatch");
    for (int s = 0; s <= x->m(); ++s) {
        if (!cert.levels[s]) return Report::fail("recheck-wg", "missing level certificate");
        if (auto r = recheck_wg(rx.level[s], *cert.levels[s], lim); !r) return r;
    }
    // induced parts: certificates must be internally valid; the stored
    // pullbacks must match a deterministic rebuild
    DiscretizeOutcome d0 = discretize(rx.level[0], cert.n - 1, lim);
    if (!d0.ok()) return Report::fail("recheck-wg", "level 0 no longer discretizes");
    GridMorphism leg0 = compose_morphisms(d0.disc->gamma, rx.face[1][0]);
    GridMorphism leg1 = compose_morphisms(d0.disc->gamma, rx.face[1][1]);
    for (const auto& ind : cert.induced) {
        std::vector<GridPtr> factors(ind.k, rx.level[1]);
        std::vector<std::pair<const GridMorphism*, const GridMorphism*>> cospans;
        for (int j = 0; j + 1 < ind.k; ++j) cospans.emplace_back(&leg0, &leg1);
        GridPullback P = grid_iterated_pullback(factors, cospans, lim);
        if (!ind.pullback || !P.grid->structurally_equal(*ind.pullback))
            return Report::fail("recheck-wg", "stored induced pullback differs at k=" + std::to_string(ind.k));
    }
    if (!cert.p_grid) return Report::fail("recheck-wg", "missing truncation grid");
    TruncationOutcome tr = p_truncate(x, lim);
    if (!tr.ok() || !tr.grid->structurally_equal(*cert.p_grid))
        return Report::fail("recheck-wg", "stored truncation differs");
    if (!cert.p_cert) return Report::fail("recheck-wg", "missing truncation certificate");
    return recheck_wg(tr.grid, *cert.p_cert, lim);
}

// ---- verified statements ----------------------------------------------------------------

VerifyOutcome verify_nequiv_to_hd(const GridMorphism& f, int n, const Limits& lim) {
    VerifyOutcome out;
    NEquivOutcome nq = check_nequiv(f, n, lim);
    if (!nq.ok()) {
        out.report = Report::fail("precondition", "f is not an n-equivalence: " + nq.report.where + ": " +
                                                      nq.report.detail);
        return out;
    }
    HDOutcome hy = check_hd(f.cod, n, lim);
    if (!hy.ok()) {
        out.report = Report::fail("precondition", "target is not homotopically discrete: " +
                                                      hy.report.where + ": " + hy.report.detail);
        return out;
    }
    HDOutcome hx = check_hd(f.dom, n, lim);
    if (!hx.ok())
        fail_theorem("a source n-equivalent to a homotopically discrete target failed the check: " +
                     hx.report.where + ": " + hx.report.detail);
    out.report = Report::pass();
    out.derived = hx.cert;
    return out;
}

VerifyOutcome verify_hd_criterion(GridPtr x, int n, const Limits& lim) {
    VerifyOutcome out;
    WGOutcome wg = check_wg(x, n, lim);
    if (!wg.ok()) {
        out.report = Report::fail("precondition", "input is not weakly globular: " + wg.report.where);
        return out;
    }
    SimplicialOfGrids rx = reindex(*x, 0);
    HDOutcome h1 = check_hd(rx.level[1], n - 1, lim);
    if (!h1.ok()) {
        out.report = Report::fail("precondition", "level 1 is not homotopically discrete");
        return out;
    }
    TruncationOutcome tr = p_truncate(x, lim);
    if (!tr.ok()) {
        out.report = Report::fail("precondition", "truncation does not reconstruct");
        return out;
    }
    HDOutcome hp = check_hd(tr.grid, n - 1, lim);
    if (!hp.ok()) {
        out.report = Report::fail("precondition", "truncation is not homotopically discrete");
        return out;
    }
    HDOutcome hx = check_hd(x, n, lim);
    if (!hx.ok())
        fail_theorem("weakly globular input with homotopically discrete level 1 and truncation "
                     "failed the homotopically-discrete check: " +
                     hx.report.where + ": " + hx.report.detail);
    out.report = Report::pass();
    out.derived = hx.cert;
    return out;
}

CriterionOutcome criterion_wg(GridPtr x, int n, const Limits& lim) {
    require_dims(x, n, "criterion_wg");
    CriterionOutcome out;
    if (n < 2) fail_precondition("criterion_wg: needs dimension at least 2");
    SimplicialOfGrids rx = reindex(*x, 0);
    HDOutcome hd0 = check_hd(rx.level[0], n - 1, lim);
    if (!hd0.ok()) {
        out.hypothesis_report =
            Report::fail("hypothesis (i)", "level 0 is not homotopically discrete: " + hd0.report.where);
        return out;
    }
    if (n >= 3) {
        for (int s = 0; s <= x->m(); ++s) {
            GridPtr xs0 = slice(*rx.level[s], 0, 0);
            HDOutcome h = check_hd(xs0, n - 2, lim);
            if (!h.ok()) {
                out.hypothesis_report = Report::fail(
                    "hypothesis (i)", "level (" + std::to_string(s) + ",0) is not homotopically discrete");
                return out;
            }
        }
    }
    LevelwiseQuotient pq = apply_levelwise_p(x);
    ReconstructOutcome rec = reconstruct_last_direction(pq.grid, lim);
    if (!rec.ok()) {
        out.hypothesis_report = Report::fail(
            "hypothesis (ii)", "the levelwise iso-class grid is not a multinerve: " + rec.report.detail);
        return out;
    }
    WGOutcome wgr = check_wg(rec.grid, n - 1, lim);
    if (!wgr.ok()) {
        out.hypothesis_report =
            Report::fail("hypothesis (ii)", "the reconstructed truncation is not weakly globular: " +
                                                wgr.report.where);
        return out;
    }
    out.hypotheses_hold = true;
    out.hypothesis_report = Report::pass();
    WGOutcome wg = check_wg(x, n, lim);
    if (!wg.ok())
        fail_theorem("criterion hypotheses hold but the weak-globularity check failed: " +
                     wg.report.where + ": " + wg.report.detail);
    out.cert = wg.cert;
    return out;
}

Report nerve_dir2_wg(GridPtr x, int n, const Limits& lim) {
    require_dims(x, n, "nerve_dir2_wg");
    WGOutcome wg = check_wg(x, n, lim);
    if (!wg.ok()) return Report::fail("precondition", "input is not weakly globular");
    if (n == 2) return Report::pass();  // levels are plain categories
    for (int k = 0; k <= x->m(); ++k) {
        GridPtr lv = slice(*x, 1, k);
        WGOutcome w = check_wg(lv, n - 1, lim);
        if (!w.ok())
            return Report::fail("level " + std::to_string(k),
                                "direction-2 level is not weakly globular: " + w.report.where);
    }
    return Report::pass();
}

}  // namespace wgcat
