#include "wgcat/nfold.hpp"

#include <algorithm>

namespace wgcat {

Report verify_segal_witness(const MultiGrid& g, const SegalWitness& w, const Limits& lim) {
    SegalMapData s = segal_at(g, w.dir, w.at, lim);
    if (!s.mu.same_tables(w.mu))
        return Report::fail("segal-witness", "stored comparison differs at (" + tuple_id(w.at) + ")");
    if (w.mu_inv.dom != s.pullback.cat || w.mu_inv.cod != w.mu.dom)
        return Report::fail("segal-witness", "inverse mistyped at (" + tuple_id(w.at) + ")");
    FinFunctor left = FinFunctor::compose(w.mu_inv, w.mu);
    FinFunctor right = FinFunctor::compose(w.mu, w.mu_inv);
    if (!left.same_tables(FinFunctor::identity(w.mu.dom)) ||
        !right.same_tables(FinFunctor::identity(s.pullback.cat)))
        return Report::fail("segal-witness", "stored inverse does not invert at (" + tuple_id(w.at) + ")");
    return Report::pass();
}

NFoldOutcome validate_nfold(const MultiGrid& g, const Limits& lim) {
    NFoldOutcome out;
    if (auto r = g.validate(); !r) {
        out.report = r;
        return out;
    }
    NFoldCert cert;
    cert.n = g.dirs() + 1;
    for (int d = 0; d < g.dirs(); ++d)
        for (const auto& t : all_tuples(g.dirs(), g.m())) {
            if (t[d] < 2) continue;
            SegalMapData s = segal_at(g, d, t, lim);
            if (!s.iso) {
                out.report = Report::fail("segal", "direction " + std::to_string(d + 1) + " at (" +
                                                       tuple_id(t) + "): comparison is not invertible");
                return out;
            }
            cert.segal.push_back(SegalWitness{d, t, s.mu, s.mu.inverted()});
        }
    out.report = Report::pass();
    out.cert = std::move(cert);
    return out;
}

SimplicialOfGrids xi_swap(const MultiGrid& x, int dir) { return reindex(x, dir); }

GridPtr xi_unswap(const SimplicialOfGrids& s) { return reindex_inverse(s); }

SimplicialOfGrids nerve_direction(const MultiGrid& x, int dir) { return reindex(x, dir); }

GridPtr discrete_inclusion(const MultiGrid& y, const Limits& lim) { return multinerve(y, lim); }

bool is_discrete_nfold(const MultiGrid& g) {
    CatPtr first = g.entry_linear(0);
    if (!first || !first->is_discrete()) return false;
    for (int i = 0; i < g.n_entries(); ++i) {
        CatPtr e = g.entry_linear(i);
        if (!e || !cats_structurally_equal(*first, *e)) return false;
    }
    for (const auto& [key, f] : g.generator_list()) {
        (void)key;
        for (size_t o = 0; o < f->obj_map.size(); ++o)
            if (f->dom->object_id(static_cast<int>(o)) != f->cod->object_id(f->obj_map[o]))
                return false;
    }
    return true;
}

ReconstructOutcome reconstruct_last_direction(GridPtr z, const Limits& lim) {
    ReconstructOutcome out;
    if (z->dirs() < 1) {
        out.report = Report::fail("reconstruct", "no direction to reconstruct");
        return out;
    }
    if (!all_entries_discrete(*z)) {
        out.report = Report::fail("reconstruct", "entries are not discrete");
        return out;
    }
    int D = z->dirs();
    int m = z->m();
    MultiGrid g(D - 1, m);
    for (const auto& u : all_tuples(D - 1, m)) {
        // the simplicial line along the last direction must be a nerve
        MultiGrid line(1, m);
        for (int r = 0; r <= m; ++r) {
            IndexTuple full = u;
            full.push_back(r);
            line.set_entry({r}, z->entry(full));
        }
        for (int r = 0; r <= m; ++r) {
            IndexTuple full = u;
            full.push_back(r);
            if (r >= 1)
                for (int j = 0; j <= r; ++j) line.set_face({r}, 0, j, z->face(full, D - 1, j));
            if (r < m)
                for (int j = 0; j <= r; ++j) line.set_degeneracy({r}, 0, j, z->degeneracy(full, D - 1, j));
        }
        NerveRecon rec = is_nerve(line, lim);
        if (!rec.ok) {
            out.report =
                Report::fail("reconstruct(" + tuple_id(u) + ")", rec.why.where + ": " + rec.why.detail);
            return out;
        }
        g.set_entry(u, rec.category);
    }
    // induced structure maps in the remaining directions: objects move like
    // the level-0 entries, arrows like the level-1 entries
    for (const auto& u : all_tuples(D - 1, m)) {
        CatPtr dom = g.entry(u);
        IndexTuple u0 = u, u1 = u;
        u0.push_back(0);
        u1.push_back(1);
        for (int d = 0; d < D - 1; ++d) {
            auto induced = [&](bool isface, int j) {
                IndexTuple to = corner(u, d, isface ? u[d] - 1 : u[d] + 1);
                CatPtr cod = g.entry(to);
                const FinFunctor& f0 = isface ? z->face(u0, d, j) : z->degeneracy(u0, d, j);
                const FinFunctor& f1 = isface ? z->face(u1, d, j) : z->degeneracy(u1, d, j);
                FinFunctor f;
                f.dom = dom;
                f.cod = cod;
                f.obj_map.resize(dom->n_objects());
                f.arr_map.resize(dom->n_arrows());
                for (int o = 0; o < dom->n_objects(); ++o) {
                    auto ix = cod->object_index(f0.cod->object_id(f0.on_obj(o)));
                    if (!ix) fail_structural("reconstruct: object image missing");
                    f.obj_map[o] = *ix;
                }
                for (int a = 0; a < dom->n_arrows(); ++a) {
                    auto ix = cod->arrow_index(f1.cod->object_id(f1.on_obj(a)));
                    if (!ix) fail_structural("reconstruct: arrow image missing");
                    f.arr_map[a] = *ix;
                }
                return f;
            };
            if (u[d] >= 1)
                for (int j = 0; j <= u[d]; ++j) g.set_face(u, d, j, induced(true, j));
            if (u[d] < m)
                for (int j = 0; j <= u[d]; ++j) g.set_degeneracy(u, d, j, induced(false, j));
        }
    }
    GridPtr result = share(std::move(g));
    if (auto r = result->validate(); !r) {
        out.report = Report::fail("reconstruct", r.where + ": " + r.detail);
        return out;
    }
    out.grid = result;
    out.report = Report::pass();
    return out;
}

HomFiber hom_fiber(const MultiGrid& x, GridPtr slice1, GridPtr slice0,
                   const std::vector<std::vector<int>>& cls0, int a, int b) {
    (void)slice0;
    int D = x.dirs();
    int m = x.m();
    MultiGrid fib(D - 1, m);
    std::vector<SubcatResult> subs(slice1->n_entries());
    for (const auto& t : all_tuples(D - 1, m)) {
        IndexTuple full1 = t;
        full1.insert(full1.begin(), 1);
        const FinFunctor& d0 = x.face(full1, 0, 0);
        const FinFunctor& d1 = x.face(full1, 0, 1);
        const std::vector<int>& cls = cls0[linear_index(t, m)];
        std::vector<int> keep;
        CatPtr e = slice1->entry(t);
        for (int o = 0; o < e->n_objects(); ++o)
            if (cls[d0.on_obj(o)] == a && cls[d1.on_obj(o)] == b) keep.push_back(o);
        subs[linear_index(t, m)] = full_subcategory(e, keep);
        fib.set_entry(t, subs[linear_index(t, m)].cat);
    }
    for (const auto& t : all_tuples(D - 1, m)) {
        const SubcatResult& sub = subs[linear_index(t, m)];
        for (int d = 0; d < D - 1; ++d) {
            auto restricted = [&](bool isface, int j) {
                IndexTuple to = corner(t, d, isface ? t[d] - 1 : t[d] + 1);
                const SubcatResult& sub2 = subs[linear_index(to, m)];
                const FinFunctor& base = isface ? slice1->face(t, d, j) : slice1->degeneracy(t, d, j);
                FinFunctor f;
                f.dom = sub.cat;
                f.cod = sub2.cat;
                f.obj_map.resize(sub.cat->n_objects());
                f.arr_map.resize(sub.cat->n_arrows());
                for (int o = 0; o < sub.cat->n_objects(); ++o) {
                    int img = base.on_obj(sub.inclusion.on_obj(o));
                    auto ix = sub2.cat->object_index(base.cod->object_id(img));
                    if (!ix) fail_structural("hom_fiber: restriction escapes the fiber");
                    f.obj_map[o] = *ix;
                }
                for (int r = 0; r < sub.cat->n_arrows(); ++r) {
                    int img = base.on_arr(sub.inclusion.on_arr(r));
                    auto ix = sub2.cat->arrow_index(base.cod->arrow_id(img));
                    if (!ix) fail_structural("hom_fiber: restriction escapes the fiber");
                    f.arr_map[r] = *ix;
                }
                return f;
            };
            if (t[d] >= 1)
                for (int j = 0; j <= t[d]; ++j) fib.set_face(t, d, j, restricted(true, j));
            if (t[d] < m)
                for (int j = 0; j <= t[d]; ++j) fib.set_degeneracy(t, d, j, restricted(false, j));
        }
    }
    HomFiber out;
    out.grid = share(std::move(fib));
    out.inclusion.dom = out.grid;
    out.inclusion.cod = slice1;
    out.inclusion.component.resize(out.grid->n_entries());
    for (const auto& t : all_tuples(D - 1, m)) {
        FinFunctor inc = subs[linear_index(t, m)].inclusion;
        inc.dom = out.grid->entry(t);
        out.inclusion.component[linear_index(t, m)] = std::move(inc);
    }
    return out;
}

}  // namespace wgcat
