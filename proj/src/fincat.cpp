#include "wgcat/fincat.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>

namespace wgcat {

namespace {
const std::vector<int> kEmptyHom;
}

int FinCat::add_object(std::string id) {
    if (sealed_) fail_structural("add_object on sealed category");
    if (obj_ix_.count(id)) fail_structural("duplicate object id '" + id + "'");
    int ix = n_objects();
    obj_ix_.emplace(id, ix);
    objects_.push_back(std::move(id));
    identity_.push_back(-1);
    return ix;
}

int FinCat::add_arrow(std::string id, int src, int tgt) {
    if (sealed_) fail_structural("add_arrow on sealed category");
    if (arr_ix_.count(id)) fail_structural("duplicate arrow id '" + id + "'");
    if (src < 0 || src >= n_objects() || tgt < 0 || tgt >= n_objects())
        fail_structural("arrow '" + id + "' has dangling src/tgt");
    int ix = n_arrows();
    arr_ix_.emplace(id, ix);
    arrows_.push_back(Arrow{std::move(id), src, tgt});
    return ix;
}

void FinCat::set_identity(int obj, int arrow) {
    if (obj < 0 || obj >= n_objects() || arrow < 0 || arrow >= n_arrows())
        fail_structural("set_identity out of range");
    identity_[obj] = arrow;
}

void FinCat::set_compose(int g, int f, int gf) {
    if (g < 0 || g >= n_arrows() || f < 0 || f >= n_arrows() || gf < 0 || gf >= n_arrows())
        fail_structural("set_compose out of range");
    comp_[pair_key(g, f)] = gf;
}

void FinCat::seal() {
    if (sealed_) return;
    out_.assign(n_objects(), {});
    in_.assign(n_objects(), {});
    for (int a = 0; a < n_arrows(); ++a) {
        out_[arrows_[a].src].push_back(a);
        in_[arrows_[a].tgt].push_back(a);
        hom_[pair_key(arrows_[a].src, arrows_[a].tgt)].push_back(a);
    }
    // two-sided inverses
    inverse_.assign(n_arrows(), -1);
    for (int f = 0; f < n_arrows(); ++f) {
        if (inverse_[f] >= 0) continue;
        int x = arrows_[f].src, y = arrows_[f].tgt;
        for (int g : hom(y, x)) {
            auto gf = compose_opt(g, f);
            auto fg = compose_opt(f, g);
            if (gf && *gf == identity_[x] && fg && *fg == identity_[y]) {
                inverse_[f] = g;
                inverse_[g] = f;
                break;
            }
        }
    }
    sealed_ = true;
}

std::optional<int> FinCat::object_index(std::string_view id) const {
    auto it = obj_ix_.find(std::string(id));
    if (it == obj_ix_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> FinCat::arrow_index(std::string_view id) const {
    auto it = arr_ix_.find(std::string(id));
    if (it == arr_ix_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> FinCat::compose_opt(int g, int f) const {
    auto it = comp_.find(pair_key(g, f));
    if (it == comp_.end()) return std::nullopt;
    return it->second;
}

int FinCat::compose(int g, int f) const {
    auto r = compose_opt(g, f);
    if (!r)
        fail_structural("missing composite " + arrows_[g].id + " after " + arrows_[f].id);
    return *r;
}

const std::vector<int>& FinCat::hom(int x, int y) const {
    auto it = hom_.find(pair_key(x, y));
    if (it == hom_.end()) return kEmptyHom;
    return it->second;
}

bool FinCat::is_discrete() const {
    for (int a = 0; a < n_arrows(); ++a)
        if (!is_identity(a)) return false;
    return true;
}

bool FinCat::is_groupoid() const {
    for (int a = 0; a < n_arrows(); ++a)
        if (inverse_[a] < 0) return false;
    return true;
}

Report FinCat::validate() const {
    if (!sealed_) fail_structural("validate on unsealed category");
    // structural layer
    for (int a = 0; a < n_arrows(); ++a) {
        if (arrows_[a].src < 0 || arrows_[a].src >= n_objects() ||
            arrows_[a].tgt < 0 || arrows_[a].tgt >= n_objects())
            return Report::fail("structure", "arrow '" + arrows_[a].id + "' has dangling endpoints");
    }
    for (int x = 0; x < n_objects(); ++x) {
        if (identity_[x] < 0 || identity_[x] >= n_arrows())
            return Report::fail("structure", "object '" + objects_[x] + "' lacks an identity arrow");
        const Arrow& e = arrows_[identity_[x]];
        if (e.src != x || e.tgt != x)
            return Report::fail("structure", "identity of '" + objects_[x] + "' is not an endo-arrow");
    }
    for (const auto& [key, gf] : comp_) {
        int g = static_cast<int>(key >> 32), f = static_cast<int>(key & 0xffffffffu);
        if (g >= n_arrows() || f >= n_arrows() || gf < 0 || gf >= n_arrows())
            return Report::fail("structure", "composition table references unknown arrows");
        if (arrows_[g].src != arrows_[f].tgt)
            return Report::fail("compose-typing", "compose(" + arrows_[g].id + "," + arrows_[f].id +
                                                      ") defined on a non-composable pair");
        if (arrows_[gf].src != arrows_[f].src || arrows_[gf].tgt != arrows_[g].tgt)
            return Report::fail("compose-typing", "compose(" + arrows_[g].id + "," + arrows_[f].id +
                                                      ") = " + arrows_[gf].id + " has wrong endpoints");
    }
    // totality on composable pairs
    for (int f = 0; f < n_arrows(); ++f)
        for (int g : out_[arrows_[f].tgt])
            if (!comp_.count(pair_key(g, f)))
                return Report::fail("compose-total", "missing compose(" + arrows_[g].id + "," + arrows_[f].id + ")");
    // unit laws
    for (int f = 0; f < n_arrows(); ++f) {
        int ls = identity_[arrows_[f].tgt], rs = identity_[arrows_[f].src];
        if (compose(ls, f) != f)
            return Report::fail("unit", "id after " + arrows_[f].id + " != " + arrows_[f].id);
        if (compose(f, rs) != f)
            return Report::fail("unit", arrows_[f].id + " after id != " + arrows_[f].id);
    }
    // associativity on all composable triples
    for (int f = 0; f < n_arrows(); ++f) {
        for (int g : out_[arrows_[f].tgt]) {
            int gf = compose(g, f);
            for (int h : out_[arrows_[g].tgt]) {
                int hg = compose(h, g);
                if (compose(h, gf) != compose(hg, f))
                    return Report::fail("associativity", "(" + arrows_[h].id + "," + arrows_[g].id + "," +
                                                             arrows_[f].id + ")");
            }
        }
    }
    return Report::pass();
}

CatPtr seal_cat(FinCat&& c) {
    c.seal();
    return std::make_shared<const FinCat>(std::move(c));
}

// ---- functors ---------------------------------------------------------------

Report FinFunctor::validate() const {
    if (!dom || !cod) return Report::fail("functor", "missing dom/cod");
    if (static_cast<int>(obj_map.size()) != dom->n_objects() ||
        static_cast<int>(arr_map.size()) != dom->n_arrows())
        return Report::fail("functor", "map tables have wrong size");
    for (int x = 0; x < dom->n_objects(); ++x)
        if (obj_map[x] < 0 || obj_map[x] >= cod->n_objects())
            return Report::fail("functor", "object image out of range for '" + dom->object_id(x) + "'");
    for (int a = 0; a < dom->n_arrows(); ++a) {
        int fa = arr_map[a];
        if (fa < 0 || fa >= cod->n_arrows())
            return Report::fail("functor", "arrow image out of range for '" + dom->arrow_id(a) + "'");
        if (cod->src(fa) != obj_map[dom->src(a)] || cod->tgt(fa) != obj_map[dom->tgt(a)])
            return Report::fail("functor", "src/tgt not preserved at '" + dom->arrow_id(a) + "'");
    }
    for (int x = 0; x < dom->n_objects(); ++x)
        if (arr_map[dom->identity(x)] != cod->identity(obj_map[x]))
            return Report::fail("functor", "identity not preserved at '" + dom->object_id(x) + "'");
    for (int f = 0; f < dom->n_arrows(); ++f)
        for (int g : dom->arrows_from(dom->tgt(f))) {
            int lhs = arr_map[dom->compose(g, f)];
            auto rhs = cod->compose_opt(arr_map[g], arr_map[f]);
            if (!rhs || lhs != *rhs)
                return Report::fail("functor", "composition not preserved at (" + dom->arrow_id(g) + "," +
                                                   dom->arrow_id(f) + ")");
        }
    return Report::pass();
}

bool FinFunctor::is_isomorphism() const {
    if (dom->n_objects() != cod->n_objects() || dom->n_arrows() != cod->n_arrows()) return false;
    std::vector<char> oseen(cod->n_objects(), 0), aseen(cod->n_arrows(), 0);
    for (int x : obj_map) {
        if (oseen[x]) return false;
        oseen[x] = 1;
    }
    for (int a : arr_map) {
        if (aseen[a]) return false;
        aseen[a] = 1;
    }
    return true;
}

FinFunctor FinFunctor::inverted() const {
    if (!is_isomorphism()) fail_precondition("inverted() on a non-isomorphism");
    FinFunctor r;
    r.dom = cod;
    r.cod = dom;
    r.obj_map.assign(cod->n_objects(), -1);
    r.arr_map.assign(cod->n_arrows(), -1);
    for (int x = 0; x < dom->n_objects(); ++x) r.obj_map[obj_map[x]] = x;
    for (int a = 0; a < dom->n_arrows(); ++a) r.arr_map[arr_map[a]] = a;
    return r;
}

FinFunctor FinFunctor::identity(CatPtr c) {
    FinFunctor f;
    f.dom = c;
    f.cod = c;
    f.obj_map.resize(c->n_objects());
    f.arr_map.resize(c->n_arrows());
    for (int x = 0; x < c->n_objects(); ++x) f.obj_map[x] = x;
    for (int a = 0; a < c->n_arrows(); ++a) f.arr_map[a] = a;
    return f;
}

FinFunctor FinFunctor::compose(const FinFunctor& g, const FinFunctor& f) {
    if (f.cod.get() != g.dom.get()) fail_precondition("functor composition: cod/dom mismatch");
    FinFunctor r;
    r.dom = f.dom;
    r.cod = g.cod;
    r.obj_map.resize(f.obj_map.size());
    r.arr_map.resize(f.arr_map.size());
    for (size_t x = 0; x < f.obj_map.size(); ++x) r.obj_map[x] = g.obj_map[f.obj_map[x]];
    for (size_t a = 0; a < f.arr_map.size(); ++a) r.arr_map[a] = g.arr_map[f.arr_map[a]];
    return r;
}

// ---- natural transformations -------------------------------------------------

Report NatTransf::validate() const {
    if (dom.dom.get() != cod.dom.get() || dom.cod.get() != cod.cod.get())
        return Report::fail("nat", "functors are not parallel");
    const FinCat& c = *dom.dom;
    const FinCat& d = *dom.cod;
    if (static_cast<int>(component.size()) != c.n_objects())
        return Report::fail("nat", "component table has wrong size");
    for (int x = 0; x < c.n_objects(); ++x) {
        int a = component[x];
        if (a < 0 || a >= d.n_arrows()) return Report::fail("nat", "component out of range");
        if (d.src(a) != dom.on_obj(x) || d.tgt(a) != cod.on_obj(x))
            return Report::fail("nat", "component at '" + c.object_id(x) + "' has wrong endpoints");
    }
    for (int f = 0; f < c.n_arrows(); ++f) {
        int x = c.src(f), y = c.tgt(f);
        int lhs = d.compose(component[y], dom.on_arr(f));
        int rhs = d.compose(cod.on_arr(f), component[x]);
        if (lhs != rhs)
            return Report::fail("nat", "naturality fails at arrow '" + c.arrow_id(f) + "'");
    }
    return Report::pass();
}

bool NatTransf::all_components_invertible() const {
    const FinCat& d = *dom.cod;
    for (int a : component)
        if (!d.is_invertible(a)) return false;
    return true;
}

NatTransf NatTransf::identity(const FinFunctor& f) {
    NatTransf n;
    n.dom = f;
    n.cod = f;
    n.component.resize(f.dom->n_objects());
    for (int x = 0; x < f.dom->n_objects(); ++x)
        n.component[x] = f.cod->identity(f.on_obj(x));
    return n;
}

// ---- quotients ----------------------------------------------------------------

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

Quotient quotient_from(const FinCat& c, UnionFind& uf) {
    int n = c.n_objects();
    Quotient q;
    q.class_of.assign(n, -1);
    // deterministic class order and representatives: lexicographic-least id
    std::map<int, std::vector<int>> roots;
    for (int x = 0; x < n; ++x) roots[uf.find(x)].push_back(x);
    struct Cls {
        std::string least;
        int rep;
        std::vector<int> members;
    };
    std::vector<Cls> classes;
    classes.reserve(roots.size());
    for (auto& [root, members] : roots) {
        std::string least = c.object_id(members[0]);
        int rep = members[0];
        for (int m : members)
            if (c.object_id(m) < least) {
                least = c.object_id(m);
                rep = m;
            }
        classes.push_back(Cls{least, rep, members});
    }
    std::sort(classes.begin(), classes.end(),
              [](const Cls& a, const Cls& b) { return a.least < b.least; });
    q.n_classes = static_cast<int>(classes.size());
    for (int k = 0; k < q.n_classes; ++k) {
        q.class_ids.push_back(classes[k].least);
        q.representative.push_back(classes[k].rep);
        for (int m : classes[k].members) q.class_of[m] = k;
    }
    return q;
}

}  // namespace

Quotient q_components(const FinCat& c) {
    UnionFind uf(c.n_objects());
    for (int a = 0; a < c.n_arrows(); ++a) uf.unite(c.src(a), c.tgt(a));
    return quotient_from(c, uf);
}

Quotient p_isoclasses(const FinCat& c) {
    UnionFind uf(c.n_objects());
    for (int a = 0; a < c.n_arrows(); ++a)
        if (c.is_invertible(a)) uf.unite(c.src(a), c.tgt(a));
    return quotient_from(c, uf);
}

CatPtr m_maxgroupoid(const FinCat& c) {
    FinCat g;
    for (int x = 0; x < c.n_objects(); ++x) g.add_object(c.object_id(x));
    std::vector<int> keep(c.n_arrows(), -1);
    for (int a = 0; a < c.n_arrows(); ++a)
        if (c.is_invertible(a)) keep[a] = g.add_arrow(c.arrow_id(a), c.src(a), c.tgt(a));
    for (int x = 0; x < c.n_objects(); ++x) g.set_identity(x, keep[c.identity(x)]);
    for (int f = 0; f < c.n_arrows(); ++f) {
        if (keep[f] < 0) continue;
        for (int gg : c.arrows_from(c.tgt(f))) {
            if (keep[gg] < 0) continue;
            g.set_compose(keep[gg], keep[f], keep[c.compose(gg, f)]);
        }
    }
    return seal_cat(std::move(g));
}

CatPtr d_discrete(const std::vector<std::string>& ids) {
    FinCat c;
    for (const auto& id : ids) c.add_object(id);
    for (int x = 0; x < c.n_objects(); ++x) {
        int a = c.add_arrow("1_" + ids[x], x, x);
        c.set_identity(x, a);
        c.set_compose(a, a, a);
    }
    return seal_cat(std::move(c));
}

CatPtr discrete_of(const Quotient& q) { return d_discrete(q.class_ids); }

FinFunctor quotient_projection(CatPtr c, const Quotient& q, CatPtr target) {
    FinFunctor p;
    p.dom = c;
    p.cod = target;
    p.obj_map.resize(c->n_objects());
    p.arr_map.resize(c->n_arrows());
    for (int x = 0; x < c->n_objects(); ++x) p.obj_map[x] = q.class_of[x];
    for (int a = 0; a < c->n_arrows(); ++a) {
        if (q.class_of[c->src(a)] != q.class_of[c->tgt(a)])
            fail_precondition("quotient_projection: arrow crosses classes");
        p.arr_map[a] = target->identity(q.class_of[c->src(a)]);
    }
    return p;
}

// ---- limits --------------------------------------------------------------------

PullbackResult pullback_over_discrete(const FinFunctor& f, const FinFunctor& g, const Limits& lim) {
    if (f.cod.get() != g.cod.get()) fail_precondition("pullback: feet differ");
    if (!f.cod->is_discrete())
        fail_precondition("pullback_over_discrete: foot is not discrete");
    std::vector<Cospan> cs{Cospan{f, g}};
    return iterated_pullback({f.dom, g.dom}, cs, lim);
}

PullbackResult iterated_pullback(const std::vector<CatPtr>& factors,
                                 const std::vector<Cospan>& cospans, const Limits& lim) {
    if (factors.empty()) fail_precondition("iterated_pullback: no factors");
    if (cospans.size() + 1 != factors.size())
        fail_precondition("iterated_pullback: cospan count mismatch");
    for (size_t i = 0; i < cospans.size(); ++i) {
        if (cospans[i].left.dom.get() != factors[i].get() ||
            cospans[i].right.dom.get() != factors[i + 1].get())
            fail_precondition("iterated_pullback: cospan legs do not match factors");
        if (cospans[i].left.cod.get() != cospans[i].right.cod.get())
            fail_precondition("iterated_pullback: mismatched feet");
    }
    const int k = static_cast<int>(factors.size());

    if (k == 1) {
        PullbackResult r;
        r.cat = factors[0];
        r.projections.push_back(FinFunctor::identity(factors[0]));
        return r;
    }

    // enumerate object tuples left to right, constrained per cospan
    std::vector<std::vector<int>> objs;  // tuples
    {
        std::vector<int> cur(k, -1);
        // index factor objects by their left-leg image to avoid full scans
        std::vector<std::unordered_map<int, std::vector<int>>> by_right(cospans.size());
        for (size_t i = 0; i < cospans.size(); ++i)
            for (int x = 0; x < factors[i + 1]->n_objects(); ++x)
                by_right[i][cospans[i].right.on_obj(x)].push_back(x);
        // iterative DFS
        struct Frame {
            int pos;
            std::vector<int> cands;
            size_t next = 0;
        };
        std::vector<Frame> fs;
        std::vector<int> all0(factors[0]->n_objects());
        for (int x = 0; x < factors[0]->n_objects(); ++x) all0[x] = x;
        fs.push_back(Frame{0, all0, 0});
        while (!fs.empty()) {
            Frame& fr = fs.back();
            if (fr.next >= fr.cands.size()) {
                fs.pop_back();
                continue;
            }
            int x = fr.cands[fr.next++];
            cur[fr.pos] = x;
            if (fr.pos == k - 1) {
                objs.push_back(cur);
                continue;
            }
            int foot = cospans[fr.pos].left.on_obj(x);
            auto it = by_right[fr.pos].find(foot);
            if (it == by_right[fr.pos].end()) continue;
            fs.push_back(Frame{fr.pos + 1, it->second, 0});
        }
    }
    std::sort(objs.begin(), objs.end());

    auto tuple_id = [&](const std::vector<int>& t, bool arrow) {
        std::vector<std::string> parts(k);
        for (int i = 0; i < k; ++i)
            parts[i] = arrow ? factors[i]->arrow_id(t[i]) : factors[i]->object_id(t[i]);
        return join_ids(parts);
    };

    FinCat p;
    std::map<std::vector<int>, int> obj_ix;
    for (const auto& t : objs) obj_ix[t] = p.add_object(tuple_id(t, false));

    // arrow tuples: componentwise arrows whose feet-images agree
    std::vector<std::vector<int>> arrs;
    {
        std::vector<std::unordered_map<int, std::vector<int>>> by_right(cospans.size());
        for (size_t i = 0; i < cospans.size(); ++i)
            for (int a = 0; a < factors[i + 1]->n_arrows(); ++a)
                by_right[i][cospans[i].right.on_arr(a)].push_back(a);
        struct Frame {
            int pos;
            std::vector<int> cands;
            size_t next = 0;
        };
        std::vector<int> cur(k, -1);
        std::vector<Frame> fs;
        std::vector<int> all0(factors[0]->n_arrows());
        for (int a = 0; a < factors[0]->n_arrows(); ++a) all0[a] = a;
        fs.push_back(Frame{0, all0, 0});
        while (!fs.empty()) {
            Frame& fr = fs.back();
            if (fr.next >= fr.cands.size()) {
                fs.pop_back();
                continue;
            }
            int a = fr.cands[fr.next++];
            cur[fr.pos] = a;
            if (fr.pos == k - 1) {
                arrs.push_back(cur);
                if (arrs.size() > lim.max_arrows)
                    fail_size_cap("iterated_pullback exceeds max_arrows=" + std::to_string(lim.max_arrows));
                continue;
            }
            int foot = cospans[fr.pos].left.on_arr(a);
            auto it = by_right[fr.pos].find(foot);
            if (it == by_right[fr.pos].end()) continue;
            fs.push_back(Frame{fr.pos + 1, it->second, 0});
        }
    }
    std::sort(arrs.begin(), arrs.end());

    std::map<std::vector<int>, int> arr_ix;
    for (const auto& t : arrs) {
        std::vector<int> s(k), d(k);
        for (int i = 0; i < k; ++i) {
            s[i] = factors[i]->src(t[i]);
            d[i] = factors[i]->tgt(t[i]);
        }
        arr_ix[t] = p.add_arrow(tuple_id(t, true), obj_ix.at(s), obj_ix.at(d));
    }
    for (const auto& [t, ix] : obj_ix) {
        std::vector<int> e(k);
        for (int i = 0; i < k; ++i) e[i] = factors[i]->identity(t[i]);
        p.set_identity(ix, arr_ix.at(e));
    }
    for (const auto& [ft, fix] : arr_ix) {
        for (const auto& [gt, gix] : arr_ix) {
            bool composable = true;
            for (int i = 0; i < k && composable; ++i)
                composable = factors[i]->src(gt[i]) == factors[i]->tgt(ft[i]);
            if (!composable) continue;
            std::vector<int> c(k);
            for (int i = 0; i < k; ++i) c[i] = factors[i]->compose(gt[i], ft[i]);
            p.set_compose(gix, fix, arr_ix.at(c));
        }
    }
    PullbackResult r;
    r.cat = seal_cat(std::move(p));
    for (int i = 0; i < k; ++i) {
        FinFunctor pr;
        pr.dom = r.cat;
        pr.cod = factors[i];
        pr.obj_map.resize(r.cat->n_objects());
        pr.arr_map.resize(r.cat->n_arrows());
        for (const auto& [t, ix] : obj_ix) pr.obj_map[ix] = t[i];
        for (const auto& [t, ix] : arr_ix) pr.arr_map[ix] = t[i];
        r.projections.push_back(std::move(pr));
    }
    return r;
}

CatPtr product(const FinCat& a, const FinCat& b, const Limits& lim) {
    if (static_cast<std::uint64_t>(a.n_arrows()) * static_cast<std::uint64_t>(b.n_arrows()) >
        lim.max_arrows)
        fail_size_cap("product exceeds max_arrows");
    FinCat p;
    auto oid = [&](int x, int y) { return "(" + a.object_id(x) + "|" + b.object_id(y) + ")"; };
    auto aid = [&](int f, int g) { return "(" + a.arrow_id(f) + "|" + b.arrow_id(g) + ")"; };
    for (int x = 0; x < a.n_objects(); ++x)
        for (int y = 0; y < b.n_objects(); ++y) p.add_object(oid(x, y));
    auto OIX = [&](int x, int y) { return x * b.n_objects() + y; };
    for (int f = 0; f < a.n_arrows(); ++f)
        for (int g = 0; g < b.n_arrows(); ++g)
            p.add_arrow(aid(f, g), OIX(a.src(f), b.src(g)), OIX(a.tgt(f), b.tgt(g)));
    auto AIX = [&](int f, int g) { return f * b.n_arrows() + g; };
    for (int x = 0; x < a.n_objects(); ++x)
        for (int y = 0; y < b.n_objects(); ++y)
            p.set_identity(OIX(x, y), AIX(a.identity(x), b.identity(y)));
    for (int f1 = 0; f1 < a.n_arrows(); ++f1)
        for (int f2 : a.arrows_from(a.tgt(f1)))
            for (int g1 = 0; g1 < b.n_arrows(); ++g1)
                for (int g2 : b.arrows_from(b.tgt(g1)))
                    p.set_compose(AIX(f2, g2), AIX(f1, g1), AIX(a.compose(f2, f1), b.compose(g2, g1)));
    return seal_cat(std::move(p));
}

CatPtr coproduct(const FinCat& a, const FinCat& b) {
    FinCat s;
    for (int x = 0; x < a.n_objects(); ++x) s.add_object("L." + a.object_id(x));
    for (int x = 0; x < b.n_objects(); ++x) s.add_object("R." + b.object_id(x));
    for (int f = 0; f < a.n_arrows(); ++f) s.add_arrow("L." + a.arrow_id(f), a.src(f), a.tgt(f));
    for (int f = 0; f < b.n_arrows(); ++f)
        s.add_arrow("R." + b.arrow_id(f), a.n_objects() + b.src(f), a.n_objects() + b.tgt(f));
    for (int x = 0; x < a.n_objects(); ++x) s.set_identity(x, a.identity(x));
    for (int x = 0; x < b.n_objects(); ++x)
        s.set_identity(a.n_objects() + x, a.n_arrows() + b.identity(x));
    for (int f = 0; f < a.n_arrows(); ++f)
        for (int g : a.arrows_from(a.tgt(f))) s.set_compose(g, f, a.compose(g, f));
    for (int f = 0; f < b.n_arrows(); ++f)
        for (int g : b.arrows_from(b.tgt(f)))
            s.set_compose(a.n_arrows() + g, a.n_arrows() + f, a.n_arrows() + b.compose(g, f));
    return seal_cat(std::move(s));
}

SubcatResult full_subcategory(CatPtr c, const std::vector<int>& objects) {
    FinCat s;
    std::vector<int> omap(c->n_objects(), -1);
    for (int x : objects) omap[x] = s.add_object(c->object_id(x));
    std::vector<int> amap(c->n_arrows(), -1);
    std::vector<int> back_arr;
    std::vector<int> back_obj(objects.begin(), objects.end());
    for (int a = 0; a < c->n_arrows(); ++a)
        if (omap[c->src(a)] >= 0 && omap[c->tgt(a)] >= 0) {
            amap[a] = s.add_arrow(c->arrow_id(a), omap[c->src(a)], omap[c->tgt(a)]);
            back_arr.push_back(a);
        }
    for (int x : objects) s.set_identity(omap[x], amap[c->identity(x)]);
    for (int a = 0; a < c->n_arrows(); ++a) {
        if (amap[a] < 0) continue;
        for (int g : c->arrows_from(c->tgt(a)))
            if (amap[g] >= 0) s.set_compose(amap[g], amap[a], amap[c->compose(g, a)]);
    }
    SubcatResult r;
    r.cat = seal_cat(std::move(s));
    r.inclusion.dom = r.cat;
    r.inclusion.cod = c;
    r.inclusion.obj_map = back_obj;
    r.inclusion.arr_map = back_arr;
    return r;
}

// ---- equivalences -----------------------------------------------------------------

Report EquivCertificate::reverify() const {
    const FinFunctor& f = functor;
    if (auto r = f.validate(); !r) return r;
    const FinCat& c = *f.dom;
    const FinCat& d = *f.cod;
    // fully faithful: the listed tables must be bijections realizing f, and
    // every nonempty hom pair must be listed
    std::set<std::pair<int, int>> listed;
    for (const auto& e : ff_witness) {
        listed.insert({e.x, e.y});
        const auto& homc = c.hom(e.x, e.y);
        const auto& homd = d.hom(f.on_obj(e.x), f.on_obj(e.y));
        if (e.pairs.size() != homc.size() || e.pairs.size() != homd.size())
            return Report::fail("ff", "hom table size mismatch at (" + c.object_id(e.x) + "," +
                                          c.object_id(e.y) + ")");
        std::set<int> seen_dom, seen_cod;
        for (auto [a, b] : e.pairs) {
            if (f.on_arr(a) != b)
                return Report::fail("ff", "table pair does not match the functor");
            if (c.src(a) != e.x || c.tgt(a) != e.y)
                return Report::fail("ff", "table arrow outside the hom-set");
            if (!seen_dom.insert(a).second || !seen_cod.insert(b).second)
                return Report::fail("ff", "table is not a bijection");
        }
    }
    for (int x = 0; x < c.n_objects(); ++x)
        for (int y = 0; y < c.n_objects(); ++y) {
            size_t nc = c.hom(x, y).size();
            size_t nd = d.hom(f.on_obj(x), f.on_obj(y)).size();
            if (listed.count({x, y})) continue;
            if (nc != 0 || nd != 0)
                return Report::fail("ff", "unlisted hom pair (" + c.object_id(x) + "," + c.object_id(y) +
                                              ") is nonempty");
        }
    // essentially surjective
    std::vector<char> covered(d.n_objects(), 0);
    for (const auto& e : eso_witness) {
        if (e.cod_obj < 0 || e.cod_obj >= d.n_objects()) return Report::fail("eso", "bad cod object");
        if (d.src(e.iso) != f.on_obj(e.dom_obj) || d.tgt(e.iso) != e.cod_obj)
            return Report::fail("eso", "witness arrow has wrong endpoints");
        if (!d.is_invertible(e.iso)) return Report::fail("eso", "witness arrow is not invertible");
        covered[e.cod_obj] = 1;
    }
    for (int y = 0; y < d.n_objects(); ++y)
        if (!covered[y])
            return Report::fail("eso", "codomain object '" + d.object_id(y) + "' has no witness");
    return Report::pass();
}

EquivalenceOutcome check_equivalence(const FinFunctor& f) {
    EquivalenceOutcome out;
    if (auto r = f.validate(); !r) {
        out.report = r;
        return out;
    }
    const FinCat& c = *f.dom;
    const FinCat& d = *f.cod;
    EquivCertificate cert;
    cert.functor = f;
    for (int x = 0; x < c.n_objects(); ++x)
        for (int y = 0; y < c.n_objects(); ++y) {
            const auto& homc = c.hom(x, y);
            const auto& homd = d.hom(f.on_obj(x), f.on_obj(y));
            if (homc.empty() && homd.empty()) continue;
            if (homc.size() != homd.size()) {
                out.report = Report::fail("ff", "hom cardinalities differ at (" + c.object_id(x) + "," +
                                                    c.object_id(y) + ")");
                return out;
            }
            EquivCertificate::FFEntry e;
            e.x = x;
            e.y = y;
            std::set<int> image;
            for (int a : homc) {
                if (!image.insert(f.on_arr(a)).second) {
                    out.report = Report::fail("ff", "not faithful at (" + c.object_id(x) + "," +
                                                        c.object_id(y) + ")");
                    return out;
                }
                e.pairs.emplace_back(a, f.on_arr(a));
            }
            // image set sizes matched and injective => bijection
            cert.ff_witness.push_back(std::move(e));
        }
    // essential surjectivity: each codomain object must be isomorphic to an image
    for (int y = 0; y < d.n_objects(); ++y) {
        bool found = false;
        for (int x = 0; x < c.n_objects() && !found; ++x) {
            int fx = f.on_obj(x);
            if (fx == y) {
                cert.eso_witness.push_back({y, x, d.identity(y)});
                found = true;
                break;
            }
            for (int a : d.hom(fx, y))
                if (d.is_invertible(a)) {
                    cert.eso_witness.push_back({y, x, a});
                    found = true;
                    break;
                }
        }
        if (!found) {
            out.report = Report::fail("eso", "iso-class of '" + d.object_id(y) + "' is not reached");
            return out;
        }
    }
    out.report = Report::pass();
    out.certificate = std::move(cert);
    return out;
}

// ---- bo/ff factorization ------------------------------------------------------------

BoFfResult bo_ff_factorize(const FinFunctor& f, const Limits& lim) {
    const FinCat& c = *f.dom;
    const FinCat& d = *f.cod;
    // count arrows of the middle category first
    std::uint64_t count = 0;
    for (int x = 0; x < c.n_objects(); ++x)
        for (int y = 0; y < c.n_objects(); ++y)
            count += d.hom(f.on_obj(x), f.on_obj(y)).size();
    if (count > lim.max_arrows)
        fail_size_cap("bo_ff_factorize: middle category would have " + std::to_string(count) +
                      " arrows (cap " + std::to_string(lim.max_arrows) + ")");

    FinCat mid;
    for (int x = 0; x < c.n_objects(); ++x) mid.add_object(c.object_id(x));
    // arrow of mid: (x, y, a) with a in hom_d(fx, fy)
    std::unordered_map<std::uint64_t, std::unordered_map<int, int>> ix;  // (x,y) -> a -> arrow
    std::vector<std::tuple<int, int, int>> flat;
    for (int x = 0; x < c.n_objects(); ++x)
        for (int y = 0; y < c.n_objects(); ++y) {
            for (int a : d.hom(f.on_obj(x), f.on_obj(y))) {
                int m = mid.add_arrow("[" + c.object_id(x) + ">" + c.object_id(y) + "|" + d.arrow_id(a) + "]",
                                      x, y);
                ix[pair_key(x, y)][a] = m;
                flat.emplace_back(x, y, a);
            }
        }
    for (int x = 0; x < c.n_objects(); ++x)
        mid.set_identity(x, ix.at(pair_key(x, x)).at(d.identity(f.on_obj(x))));
    for (size_t i = 0; i < flat.size(); ++i) {
        auto [x, y, a] = flat[i];
        int fa = static_cast<int>(i);
        for (int z = 0; z < c.n_objects(); ++z) {
            auto it = ix.find(pair_key(y, z));
            if (it == ix.end()) continue;
            for (const auto& [b, gb] : it->second)
                mid.set_compose(gb, fa, ix.at(pair_key(x, z)).at(d.compose(b, a)));
        }
    }
    BoFfResult r;
    r.mid = seal_cat(std::move(mid));
    r.v.dom = f.dom;
    r.v.cod = r.mid;
    r.v.obj_map.resize(c.n_objects());
    for (int x = 0; x < c.n_objects(); ++x) r.v.obj_map[x] = x;
    r.v.arr_map.resize(c.n_arrows());
    for (int a = 0; a < c.n_arrows(); ++a)
        r.v.arr_map[a] = ix.at(pair_key(c.src(a), c.tgt(a))).at(f.on_arr(a));
    r.g.dom = r.mid;
    r.g.cod = f.cod;
    r.g.obj_map.resize(r.mid->n_objects());
    for (int x = 0; x < c.n_objects(); ++x) r.g.obj_map[x] = f.on_obj(x);
    r.g.arr_map.resize(r.mid->n_arrows());
    for (size_t i = 0; i < flat.size(); ++i) r.g.arr_map[i] = std::get<2>(flat[i]);
    return r;
}

std::string join_ids(const std::vector<std::string>& parts) {
    std::string s = "(";
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) s += '|';
        s += parts[i];
    }
    s += ')';
    return s;
}

bool is_equivalence_relation_cat(const FinCat& c) {
    for (int a = 0; a < c.n_arrows(); ++a)
        if (!c.is_invertible(a)) return false;
    for (int x = 0; x < c.n_objects(); ++x)
        for (int y = 0; y < c.n_objects(); ++y)
            if (c.hom(x, y).size() > 1) return false;
    return true;
}

// ---- isomorphism search (test oracle scale) ------------------------------------------

namespace {

bool extend_iso(CatPtr a, CatPtr b, std::vector<int>& omap, int next, std::uint64_t& budget) {
    if (budget-- == 0) fail_size_cap("find_isomorphism: node budget exhausted");
    int n = a->n_objects();
    if (next == n) {
        // objects fixed; try arrow bijections per hom-set with backtracking
        std::vector<int> amap(a->n_arrows(), -1);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                const auto& ha = a->hom(x, y);
                const auto& hb = b->hom(omap[x], omap[y]);
                if (ha.size() != hb.size()) return false;
            }
        // try to build an arrow matching greedily with backtracking per hom-set
        // (hom-sets are tiny in oracle usage)
        std::function<bool(size_t)> match = [&](size_t ai) -> bool {
            if (ai == static_cast<size_t>(a->n_arrows())) {
                // verify identities + composition
                for (int x = 0; x < n; ++x)
                    if (amap[a->identity(x)] != b->identity(omap[x])) return false;
                for (int f = 0; f < a->n_arrows(); ++f)
                    for (int g : a->arrows_from(a->tgt(f)))
                        if (amap[a->compose(g, f)] != b->compose(amap[g], amap[f])) return false;
                return true;
            }
            if (budget-- == 0) fail_size_cap("find_isomorphism: node budget exhausted");
            int f = static_cast<int>(ai);
            const auto& hb = b->hom(omap[a->src(f)], omap[a->tgt(f)]);
            for (int cand : hb) {
                bool used = false;
                for (int prev = 0; prev < f; ++prev)
                    if (amap[prev] == cand) {
                        used = true;
                        break;
                    }
                if (used) continue;
                amap[f] = cand;
                if (match(ai + 1)) return true;
                amap[f] = -1;
            }
            return false;
        };
        return match(0);
    }
    for (int y = 0; y < n; ++y) {
        bool used = false;
        for (int p = 0; p < next; ++p)
            if (omap[p] == y) {
                used = true;
                break;
            }
        if (used) continue;
        omap[next] = y;
        // quick degree filter
        if (a->arrows_from(next).size() == b->arrows_from(y).size() &&
            a->arrows_into(next).size() == b->arrows_into(y).size()) {
            if (extend_iso(a, b, omap, next + 1, budget)) return true;
        }
        omap[next] = -1;
    }
    return false;
}

}  // namespace

std::optional<FinFunctor> find_isomorphism(CatPtr a, CatPtr b, std::uint64_t node_budget) {
    if (a->n_objects() != b->n_objects() || a->n_arrows() != b->n_arrows()) return std::nullopt;
    std::vector<int> omap(a->n_objects(), -1);
    std::uint64_t budget = node_budget;
    if (!extend_iso(a, b, omap, 0, budget)) return std::nullopt;
    // rebuild the arrow map the same way extend_iso validated it
    FinFunctor f;
    f.dom = a;
    f.cod = b;
    f.obj_map = omap;
    f.arr_map.assign(a->n_arrows(), -1);
    std::function<bool(int)> match = [&](int ai) -> bool {
        if (ai == a->n_arrows()) {
            for (int x = 0; x < a->n_objects(); ++x)
                if (f.arr_map[a->identity(x)] != b->identity(omap[x])) return false;
            for (int ff = 0; ff < a->n_arrows(); ++ff)
                for (int g : a->arrows_from(a->tgt(ff)))
                    if (f.arr_map[a->compose(g, ff)] != b->compose(f.arr_map[g], f.arr_map[ff]))
                        return false;
            return true;
        }
        const auto& hb = b->hom(omap[a->src(ai)], omap[a->tgt(ai)]);
        for (int cand : hb) {
            bool used = false;
            for (int prev = 0; prev < ai; ++prev)
                if (f.arr_map[prev] == cand) {
                    used = true;
                    break;
                }
            if (used) continue;
            f.arr_map[ai] = cand;
            if (match(ai + 1)) return true;
            f.arr_map[ai] = -1;
        }
        return false;
    };
    if (!match(0)) return std::nullopt;
    return f;
}

}  // namespace wgcat
