#include "wgcat/simplex.hpp"

#include <algorithm>
#include <set>

namespace wgcat {

// ---- SimplexMap ----------------------------------------------------------------

SimplexMap SimplexMap::identity(int k) {
    SimplexMap f{k, k, {}};
    f.v.resize(k + 1);
    for (int i = 0; i <= k; ++i) f.v[i] = i;
    return f;
}

SimplexMap SimplexMap::delta(int k, int j) {
    SimplexMap f{k - 1, k, {}};
    for (int i = 0; i < k; ++i) f.v.push_back(i < j ? i : i + 1);
    return f;
}

SimplexMap SimplexMap::sigma(int k, int j) {
    SimplexMap f{k + 1, k, {}};
    for (int i = 0; i <= k + 1; ++i) f.v.push_back(i <= j ? i : i - 1);
    return f;
}

SimplexMap SimplexMap::vertex(int k, int j) { return SimplexMap{0, k, {j}}; }

SimplexMap SimplexMap::interval(int k, int j) { return SimplexMap{1, k, {j - 1, j}}; }

SimplexMap SimplexMap::then(const SimplexMap& g) const {
    if (cod != g.dom) fail_precondition("SimplexMap composition mismatch");
    SimplexMap r{dom, g.cod, {}};
    r.v.reserve(v.size());
    for (int x : v) r.v.push_back(g.v[x]);
    return r;
}

bool SimplexMap::valid() const {
    if (static_cast<int>(v.size()) != dom + 1) return false;
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0 || v[i] > cod) return false;
        if (i && v[i] < v[i - 1]) return false;
    }
    return true;
}

bool SimplexMap::is_identity() const {
    if (dom != cod) return false;
    for (int i = 0; i <= dom; ++i)
        if (v[i] != i) return false;
    return true;
}

std::string SimplexMap::to_string() const {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(v[i]);
    }
    return s;
}

std::vector<SimplexMap> all_monotone(int dom, int cod) {
    std::vector<SimplexMap> out;
    SimplexMap cur{dom, cod, std::vector<int>(dom + 1, 0)};
    while (true) {
        out.push_back(cur);
        int i = dom;
        while (i >= 0 && cur.v[i] == cod) --i;
        if (i < 0) break;
        int nv = cur.v[i] + 1;
        for (int t = i; t <= dom; ++t) cur.v[t] = nv;
    }
    return out;
}

CatPtr trunc_delta(int m) {
    FinCat c;
    for (int k = 0; k <= m; ++k) c.add_object("[" + std::to_string(k) + "]");
    std::map<std::tuple<int, int, std::vector<int>>, int> ix;
    std::vector<SimplexMap> maps;
    for (int a = 0; a <= m; ++a)
        for (int b = 0; b <= m; ++b)
            for (const auto& f : all_monotone(a, b)) {
                int i = c.add_arrow(std::to_string(a) + ">" + std::to_string(b) + ":" + f.to_string(), a, b);
                ix[{a, b, f.v}] = i;
                maps.push_back(f);
            }
    for (int k = 0; k <= m; ++k) c.set_identity(k, ix.at({k, k, SimplexMap::identity(k).v}));
    for (size_t i = 0; i < maps.size(); ++i)
        for (size_t j = 0; j < maps.size(); ++j) {
            const SimplexMap& f = maps[i];
            const SimplexMap& g = maps[j];
            if (f.cod != g.dom) continue;
            SimplexMap gf = f.then(g);
            c.set_compose(ix.at({g.dom, g.cod, g.v}), ix.at({f.dom, f.cod, f.v}),
                          ix.at({gf.dom, gf.cod, gf.v}));
        }
    return seal_cat(std::move(c));
}

// ---- multi-indices ----------------------------------------------------------------

std::string tuple_id(const IndexTuple& t) {
    std::string s;
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(t[i]);
    }
    return s;
}

IndexTuple parse_tuple(const std::string& s) {
    IndexTuple t;
    if (s.empty()) return t;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t c = s.find(',', pos);
        if (c == std::string::npos) {
            t.push_back(std::stoi(s.substr(pos)));
            break;
        }
        t.push_back(std::stoi(s.substr(pos, c - pos)));
        pos = c + 1;
    }
    return t;
}

std::vector<IndexTuple> all_tuples(int dirs, int m) {
    std::vector<IndexTuple> out;
    IndexTuple t(dirs, 0);
    while (true) {
        out.push_back(t);
        int i = dirs - 1;
        while (i >= 0 && t[i] == m) --i;
        if (i < 0) break;
        ++t[i];
        for (int j = i + 1; j < dirs; ++j) t[j] = 0;
    }
    return out;
}

int linear_index(const IndexTuple& t, int m) {
    int ix = 0;
    for (int x : t) ix = ix * (m + 1) + x;
    return ix;
}

IndexTuple corner(const IndexTuple& k, int dir, int value) {
    IndexTuple r = k;
    r[dir] = value;
    return r;
}

// ---- MultiGrid ---------------------------------------------------------------------

MultiGrid::MultiGrid(int dirs, int m) : dirs_(dirs), m_(m) {
    int n = 1;
    for (int d = 0; d < dirs; ++d) n *= (m + 1);
    entries_.resize(n);
}

GridPtr share(MultiGrid&& g) { return std::make_shared<const MultiGrid>(std::move(g)); }

void MultiGrid::set_entry(const IndexTuple& t, CatPtr c) {
    entries_[linear_index(t, m_)] = std::move(c);
}

CatPtr MultiGrid::entry(const IndexTuple& t) const { return entries_[linear_index(t, m_)]; }

std::string MultiGrid::gen_key(const IndexTuple& k, int dir, bool face, int j) const {
    return tuple_id(k) + "|" + (face ? "d" : "s") + std::to_string(dir) + "." + std::to_string(j);
}

void MultiGrid::set_face(const IndexTuple& k, int dir, int j, FinFunctor f) {
    gens_[gen_key(k, dir, true, j)] = std::move(f);
}

const FinFunctor& MultiGrid::face(const IndexTuple& k, int dir, int j) const {
    auto it = gens_.find(gen_key(k, dir, true, j));
    if (it == gens_.end()) fail_structural("missing face " + gen_key(k, dir, true, j));
    return it->second;
}

void MultiGrid::set_degeneracy(const IndexTuple& k, int dir, int j, FinFunctor f) {
    gens_[gen_key(k, dir, false, j)] = std::move(f);
}

const FinFunctor& MultiGrid::degeneracy(const IndexTuple& k, int dir, int j) const {
    auto it = gens_.find(gen_key(k, dir, false, j));
    if (it == gens_.end()) fail_structural("missing degeneracy " + gen_key(k, dir, false, j));
    return it->second;
}

FinFunctor MultiGrid::apply_dir(IndexTuple& cur, int dir, const SimplexMap& f, FinFunctor acc) const {
    if (f.is_identity()) return acc;
    // peel a missing value: f = delta_j . f'
    int missing = -1;
    {
        std::vector<char> hit(f.cod + 1, 0);
        for (int x : f.v) hit[x] = 1;
        for (int j = f.cod; j >= 0; --j)
            if (!hit[j]) {
                missing = j;
                break;
            }
    }
    if (missing >= 0) {
        FinFunctor step = face(cur, dir, missing);
        cur[dir] -= 1;
        SimplexMap f2{f.dom, f.cod - 1, {}};
        for (int x : f.v) f2.v.push_back(x > missing ? x - 1 : x);
        return apply_dir(cur, dir, f2, FinFunctor::compose(step, acc));
    }
    // surjective, not injective: peel a duplicate: f = f' . sigma_t
    int t = -1;
    for (int i = 0; i < f.dom; ++i)
        if (f.v[i] == f.v[i + 1]) {
            t = i;
            break;
        }
    if (t < 0) fail_structural("apply_dir: non-identity bijective monotone map");
    SimplexMap f2{f.dom - 1, f.cod, {}};
    for (int i = 0; i <= f.dom; ++i)
        if (i != t + 1) f2.v.push_back(f.v[i]);
    FinFunctor inner = apply_dir(cur, dir, f2, std::move(acc));
    FinFunctor step = degeneracy(cur, dir, t);
    cur[dir] += 1;
    return FinFunctor::compose(step, inner);
}

FinFunctor MultiGrid::action(const IndexTuple& from, const std::vector<SimplexMap>& mono) const {
    if (static_cast<int>(mono.size()) != dirs_) fail_precondition("action: wrong arity");
    IndexTuple cur = from;
    FinFunctor acc = FinFunctor::identity(entry(from));
    for (int d = 0; d < dirs_; ++d) {
        if (mono[d].cod != from[d]) fail_precondition("action: component does not match level");
        acc = apply_dir(cur, d, mono[d], std::move(acc));
    }
    return acc;
}

FinFunctor MultiGrid::action1(const IndexTuple& from, int dir, const SimplexMap& f) const {
    std::vector<SimplexMap> mono;
    mono.reserve(dirs_);
    for (int d = 0; d < dirs_; ++d)
        mono.push_back(d == dir ? f : SimplexMap::identity(from[d]));
    return action(from, mono);
}

Report MultiGrid::validate(bool validate_entries) const {
    for (const auto& t : all_tuples(dirs_, m_)) {
        CatPtr e = entry(t);
        if (!e) return Report::fail("grid", "missing entry at (" + tuple_id(t) + ")");
        if (validate_entries)
            if (auto r = e->validate(); !r)
                return Report::fail("grid-entry(" + tuple_id(t) + ")", r.where + ": " + r.detail);
    }
    // generator typing and validity
    for (const auto& t : all_tuples(dirs_, m_)) {
        for (int d = 0; d < dirs_; ++d) {
            if (t[d] >= 1)
                for (int j = 0; j <= t[d]; ++j) {
                    const FinFunctor& f = face(t, d, j);
                    if (f.dom != entry(t) || f.cod != entry(corner(t, d, t[d] - 1)))
                        return Report::fail("grid", "face at (" + tuple_id(t) + ") dir " +
                                                        std::to_string(d + 1) + " mistyped");
                    if (auto r = f.validate(); !r)
                        return Report::fail("grid-face(" + tuple_id(t) + ")", r.detail);
                }
            if (t[d] < m_)
                for (int j = 0; j <= t[d]; ++j) {
                    const FinFunctor& f = degeneracy(t, d, j);
                    if (f.dom != entry(t) || f.cod != entry(corner(t, d, t[d] + 1)))
                        return Report::fail("grid", "degeneracy at (" + tuple_id(t) + ") dir " +
                                                        std::to_string(d + 1) + " mistyped");
                    if (auto r = f.validate(); !r)
                        return Report::fail("grid-degeneracy(" + tuple_id(t) + ")", r.detail);
                }
        }
    }
    // within-direction functoriality: compare the action of a composite with
    // the composite of actions over every composable pair of monotone maps
    for (const auto& t : all_tuples(dirs_, m_)) {
        for (int d = 0; d < dirs_; ++d) {
            int clev = t[d];
            for (int b = 0; b <= m_; ++b)
                for (const auto& g : all_monotone(b, clev)) {
                    FinFunctor via_g = action1(t, d, g);
                    IndexTuple mid = corner(t, d, b);
                    for (int a = 0; a <= m_; ++a)
                        for (const auto& f : all_monotone(a, b)) {
                            FinFunctor via_f = action1(mid, d, f);
                            FinFunctor composite = action1(t, d, f.then(g));
                            FinFunctor both = FinFunctor::compose(via_f, via_g);
                            if (!composite.same_tables(both))
                                return Report::fail(
                                    "grid-functoriality",
                                    "direction " + std::to_string(d + 1) + " at (" + tuple_id(t) +
                                        "): action(" + g.to_string() + " then " + f.to_string() +
                                        ") differs from composite");
                        }
                }
        }
    }
    // cross-direction commutation of generators
    for (const auto& t : all_tuples(dirs_, m_)) {
        for (int d1 = 0; d1 < dirs_; ++d1)
            for (int d2 = d1 + 1; d2 < dirs_; ++d2) {
                std::vector<std::pair<int, SimplexMap>> gens1, gens2;
                auto collect = [&](int d, std::vector<std::pair<int, SimplexMap>>& out) {
                    if (t[d] >= 1)
                        for (int j = 0; j <= t[d]; ++j) out.push_back({d, SimplexMap::delta(t[d], j)});
                    if (t[d] < m_)
                        for (int j = 0; j <= t[d]; ++j) out.push_back({d, SimplexMap::sigma(t[d], j)});
                };
                collect(d1, gens1);
                collect(d2, gens2);
                for (const auto& [da, fa] : gens1)
                    for (const auto& [db, fb] : gens2) {
                        FinFunctor fa_first = FinFunctor::compose(
                            action1(corner(t, da, fa.dom), db, fb), action1(t, da, fa));
                        FinFunctor fb_first = FinFunctor::compose(
                            action1(corner(t, db, fb.dom), da, fa), action1(t, db, fb));
                        if (!fa_first.same_tables(fb_first))
                            return Report::fail("grid-commute",
                                                "directions " + std::to_string(da + 1) + "/" +
                                                    std::to_string(db + 1) + " at (" + tuple_id(t) + ")");
                    }
            }
    }
    return Report::pass();
}

Report MultiGrid::validate_all_composites() const {
    // every composable pair of index op-arrows, all directions at once
    std::vector<std::vector<std::vector<SimplexMap>>> homs(m_ + 1,
                                                           std::vector<std::vector<SimplexMap>>(m_ + 1));
    for (int a = 0; a <= m_; ++a)
        for (int b = 0; b <= m_; ++b) homs[a][b] = all_monotone(a, b);

    std::vector<IndexTuple> tuples = all_tuples(dirs_, m_);
    for (const auto& from : tuples)
        for (const auto& mid : tuples)
            for (const auto& to : tuples) {
                // enumerate mono1[d] : [mid] -> [from], mono2[d] : [to] -> [mid]
                std::vector<std::vector<SimplexMap>> c1(dirs_), c2(dirs_);
                for (int d = 0; d < dirs_; ++d) {
                    c1[d] = homs[mid[d]][from[d]];
                    c2[d] = homs[to[d]][mid[d]];
                }
                std::vector<size_t> i1(dirs_, 0);
                auto next = [&](std::vector<size_t>& ix, const std::vector<std::vector<SimplexMap>>& cs) {
                    for (int d = 0; d < dirs_; ++d) {
                        if (++ix[d] < cs[d].size()) return true;
                        ix[d] = 0;
                    }
                    return false;
                };
                do {
                    std::vector<SimplexMap> m1(dirs_);
                    for (int d = 0; d < dirs_; ++d) m1[d] = c1[d][i1[d]];
                    FinFunctor f1 = action(from, m1);
                    std::vector<size_t> i2(dirs_, 0);
                    do {
                        std::vector<SimplexMap> m2(dirs_), m12(dirs_);
                        for (int d = 0; d < dirs_; ++d) {
                            m2[d] = c2[d][i2[d]];
                            m12[d] = m2[d].then(m1[d]);
                        }
                        FinFunctor f2 = action(mid, m2);
                        if (!action(from, m12).same_tables(FinFunctor::compose(f2, f1)))
                            return Report::fail("grid-functoriality",
                                                "composite at (" + tuple_id(from) + ")->(" + tuple_id(mid) +
                                                    ")->(" + tuple_id(to) + ")");
                    } while (next(i2, c2));
                } while (next(i1, c1));
            }
    return Report::pass();
}

bool cats_structurally_equal(const FinCat& a, const FinCat& b) {
    if (a.n_objects() != b.n_objects() || a.n_arrows() != b.n_arrows()) return false;
    std::vector<int> om(a.n_objects()), am(a.n_arrows());
    for (int x = 0; x < a.n_objects(); ++x) {
        auto i = b.object_index(a.object_id(x));
        if (!i) return false;
        om[x] = *i;
    }
    for (int f = 0; f < a.n_arrows(); ++f) {
        auto i = b.arrow_index(a.arrow_id(f));
        if (!i) return false;
        am[f] = *i;
        if (b.src(am[f]) != om[a.src(f)] || b.tgt(am[f]) != om[a.tgt(f)]) return false;
    }
    for (int x = 0; x < a.n_objects(); ++x)
        if (am[a.identity(x)] != b.identity(om[x])) return false;
    for (int f = 0; f < a.n_arrows(); ++f)
        for (int g : a.arrows_from(a.tgt(f)))
            if (am[a.compose(g, f)] != b.compose(am[g], am[f])) return false;
    if (a.compose_table().size() != b.compose_table().size()) return false;
    return true;
}

bool MultiGrid::structurally_equal(const MultiGrid& o) const {
    if (dirs_ != o.dirs_ || m_ != o.m_) return false;
    for (const auto& t : all_tuples(dirs_, m_)) {
        CatPtr a = entry(t), b = o.entry(t);
        if (!a || !b || !cats_structurally_equal(*a, *b)) return false;
    }
    if (gens_.size() != o.gens_.size()) return false;
    for (const auto& [key, f] : gens_) {
        auto it = o.gens_.find(key);
        if (it == o.gens_.end()) return false;
        const FinFunctor& g = it->second;
        // compare through ids (index layouts agree because entries compare equal
        // only when ids match positionally or by lookup)
        if (f.obj_map.size() != g.obj_map.size() || f.arr_map.size() != g.arr_map.size()) return false;
        for (size_t x = 0; x < f.obj_map.size(); ++x) {
            if (f.dom->object_id(static_cast<int>(x)) !=
                g.dom->object_id(static_cast<int>(x)))
                return false;
            if (f.cod->object_id(f.obj_map[x]) != g.cod->object_id(g.obj_map[x])) return false;
        }
        for (size_t a2 = 0; a2 < f.arr_map.size(); ++a2)
            if (f.cod->arrow_id(f.arr_map[a2]) != g.cod->arrow_id(g.arr_map[a2])) return false;
    }
    return true;
}

std::vector<std::pair<std::string, const FinFunctor*>> MultiGrid::generator_list() const {
    std::vector<std::pair<std::string, const FinFunctor*>> out;
    out.reserve(gens_.size());
    for (const auto& [k, f] : gens_) out.emplace_back(k, &f);
    return out;
}

// ---- GridMorphism ---------------------------------------------------------------------

const FinFunctor& GridMorphism::at(const IndexTuple& t) const {
    return component[linear_index(t, dom->m())];
}

Report GridMorphism::validate() const {
    if (!dom || !cod) return Report::fail("morphism", "missing dom/cod");
    if (dom->dirs() != cod->dirs() || dom->m() != cod->m())
        return Report::fail("morphism", "shape mismatch");
    if (static_cast<int>(component.size()) != dom->n_entries())
        return Report::fail("morphism", "component count mismatch");
    for (const auto& t : all_tuples(dom->dirs(), dom->m())) {
        const FinFunctor& c = at(t);
        if (c.dom != dom->entry(t) || c.cod != cod->entry(t))
            return Report::fail("morphism", "component at (" + tuple_id(t) + ") mistyped");
        if (auto r = c.validate(); !r)
            return Report::fail("morphism(" + tuple_id(t) + ")", r.detail);
    }
    for (const auto& t : all_tuples(dom->dirs(), dom->m()))
        for (int d = 0; d < dom->dirs(); ++d) {
            auto square = [&](const FinFunctor& fd, const FinFunctor& fc, const IndexTuple& to) {
                FinFunctor lhs = FinFunctor::compose(at(to), fd);
                FinFunctor rhs = FinFunctor::compose(fc, at(t));
                return lhs.same_tables(rhs);
            };
            if (t[d] >= 1)
                for (int j = 0; j <= t[d]; ++j)
                    if (!square(dom->face(t, d, j), cod->face(t, d, j), corner(t, d, t[d] - 1)))
                        return Report::fail("morphism-square", "face at (" + tuple_id(t) + ") dir " +
                                                                   std::to_string(d + 1));
            if (t[d] < dom->m())
                for (int j = 0; j <= t[d]; ++j)
                    if (!square(dom->degeneracy(t, d, j), cod->degeneracy(t, d, j),
                                corner(t, d, t[d] + 1)))
                        return Report::fail("morphism-square", "degeneracy at (" + tuple_id(t) +
                                                                   ") dir " + std::to_string(d + 1));
        }
    return Report::pass();
}

GridMorphism identity_morphism(GridPtr g) {
    GridMorphism m;
    m.dom = g;
    m.cod = g;
    for (int i = 0; i < g->n_entries(); ++i) m.component.push_back(FinFunctor::identity(g->entry_linear(i)));
    return m;
}

GridMorphism compose_morphisms(const GridMorphism& g, const GridMorphism& f) {
    if (f.cod.get() != g.dom.get()) fail_precondition("compose_morphisms: mismatch");
    GridMorphism r;
    r.dom = f.dom;
    r.cod = g.cod;
    for (size_t i = 0; i < f.component.size(); ++i)
        r.component.push_back(FinFunctor::compose(g.component[i], f.component[i]));
    return r;
}

// ---- slicing / reindexing ----------------------------------------------------------------

namespace {
IndexTuple insert_at(const IndexTuple& t, int dir, int level) {
    IndexTuple r = t;
    r.insert(r.begin() + dir, level);
    return r;
}
}  // namespace

GridPtr slice(const MultiGrid& g, int dir, int level) {
    if (dir < 0 || dir >= g.dirs()) fail_precondition("slice: direction out of range");
    MultiGrid s(g.dirs() - 1, g.m());
    for (const auto& t : all_tuples(g.dirs() - 1, g.m())) {
        IndexTuple full = insert_at(t, dir, level);
        s.set_entry(t, g.entry(full));
        for (int d = 0; d < g.dirs() - 1; ++d) {
            int pd = d < dir ? d : d + 1;  // parent direction
            if (t[d] >= 1)
                for (int j = 0; j <= t[d]; ++j) s.set_face(t, d, j, g.face(full, pd, j));
            if (t[d] < g.m())
                for (int j = 0; j <= t[d]; ++j) s.set_degeneracy(t, d, j, g.degeneracy(full, pd, j));
        }
    }
    return share(std::move(s));
}

SimplicialOfGrids reindex(const MultiGrid& g, int dir) {
    if (dir < 0 || dir >= g.dirs()) fail_precondition("reindex: direction out of range");
    SimplicialOfGrids s;
    s.dir = dir;
    s.m = g.m();
    for (int r = 0; r <= g.m(); ++r) s.level.push_back(slice(g, dir, r));
    s.face.resize(g.m() + 1);
    s.degen.resize(g.m() + 1);
    for (int r = 0; r <= g.m(); ++r) {
        if (r >= 1)
            for (int j = 0; j <= r; ++j) {
                GridMorphism mo;
                mo.dom = s.level[r];
                mo.cod = s.level[r - 1];
                for (const auto& t : all_tuples(g.dirs() - 1, g.m()))
                    mo.component.push_back(g.face(insert_at(t, dir, r), dir, j));
                s.face[r].push_back(std::move(mo));
            }
        if (r < g.m())
            for (int j = 0; j <= r; ++j) {
                GridMorphism mo;
                mo.dom = s.level[r];
                mo.cod = s.level[r + 1];
                for (const auto& t : all_tuples(g.dirs() - 1, g.m()))
                    mo.component.push_back(g.degeneracy(insert_at(t, dir, r), dir, j));
                s.degen[r].push_back(std::move(mo));
            }
    }
    return s;
}

GridPtr reindex_inverse(const SimplicialOfGrids& s) {
    int sub_dirs = s.level[0]->dirs();
    int m = s.m;
    MultiGrid g(sub_dirs + 1, m);
    for (const auto& t : all_tuples(sub_dirs, m)) {
        for (int r = 0; r <= m; ++r) {
            IndexTuple full = insert_at(t, s.dir, r);
            g.set_entry(full, s.level[r]->entry(t));
        }
    }
    for (const auto& t : all_tuples(sub_dirs, m)) {
        int li = linear_index(t, m);
        for (int r = 0; r <= m; ++r) {
            IndexTuple full = insert_at(t, s.dir, r);
            // direction s.dir generators come from the morphisms
            if (r >= 1)
                for (int j = 0; j <= r; ++j) g.set_face(full, s.dir, j, s.face[r][j].component[li]);
            if (r < m)
                for (int j = 0; j <= r; ++j)
                    g.set_degeneracy(full, s.dir, j, s.degen[r][j].component[li]);
            // other directions from the level grids
            for (int d = 0; d < sub_dirs; ++d) {
                int fd = d < s.dir ? d : d + 1;
                if (t[d] >= 1)
                    for (int j = 0; j <= t[d]; ++j) g.set_face(full, fd, j, s.level[r]->face(t, d, j));
                if (t[d] < m)
                    for (int j = 0; j <= t[d]; ++j)
                        g.set_degeneracy(full, fd, j, s.level[r]->degeneracy(t, d, j));
            }
        }
    }
    return share(std::move(g));
}

// ---- Segal maps -----------------------------------------------------------------------------

namespace {

// builds mu into an iterated pullback given the level entry, the nu legs and
// the pullback itself
FinFunctor build_mu(CatPtr level, const PullbackResult& pb, const std::vector<FinFunctor>& nus) {
    int k = static_cast<int>(nus.size());
    FinFunctor mu;
    mu.dom = level;
    mu.cod = pb.cat;
    mu.obj_map.resize(level->n_objects());
    mu.arr_map.resize(level->n_arrows());
    for (int x = 0; x < level->n_objects(); ++x) {
        std::vector<std::string> parts(k);
        for (int j = 0; j < k; ++j) parts[j] = nus[j].cod->object_id(nus[j].on_obj(x));
        auto ix = pb.cat->object_index(join_ids(parts));
        if (!ix) fail_structural("Segal comparison misses the pullback on objects");
        mu.obj_map[x] = *ix;
    }
    for (int a = 0; a < level->n_arrows(); ++a) {
        std::vector<std::string> parts(k);
        for (int j = 0; j < k; ++j) parts[j] = nus[j].cod->arrow_id(nus[j].on_arr(a));
        auto ix = pb.cat->arrow_index(join_ids(parts));
        if (!ix) fail_structural("Segal comparison misses the pullback on arrows");
        mu.arr_map[a] = *ix;
    }
    // the characterizing property pr_j . mu = nu_j
    for (int j = 0; j < k; ++j)
        if (!FinFunctor::compose(pb.projections[j], mu).same_tables(nus[j]))
            fail_structural("Segal comparison projections do not match");
    return mu;
}

}  // namespace

SegalMapData segal_at(const MultiGrid& g, int dir, const IndexTuple& k, const Limits& lim) {
    int ki = k[dir];
    if (ki < 2) fail_precondition("segal_at: level must be >= 2");
    IndexTuple k1 = corner(k, dir, 1);
    CatPtr factor = g.entry(k1);
    FinFunctor d0 = g.face(k1, dir, 0);
    FinFunctor d1 = g.face(k1, dir, 1);
    std::vector<CatPtr> factors(ki, factor);
    std::vector<Cospan> cospans;
    for (int j = 0; j + 1 < ki; ++j) cospans.push_back(Cospan{d0, d1});
    SegalMapData out{iterated_pullback(factors, cospans, lim), {}, false};
    std::vector<FinFunctor> nus;
    for (int j = 1; j <= ki; ++j) nus.push_back(g.action1(k, dir, SimplexMap::interval(ki, j)));
    out.mu = build_mu(g.entry(k), out.pullback, nus);
    out.iso = out.mu.is_isomorphism();
    return out;
}

SegalMapData induced_segal_at(const MultiGrid& g, int dir, const IndexTuple& k,
                              const FinFunctor& gamma0, const Limits& lim) {
    int ki = k[dir];
    if (ki < 2) fail_precondition("induced_segal_at: level must be >= 2");
    IndexTuple k1 = corner(k, dir, 1);
    IndexTuple k0 = corner(k, dir, 0);
    if (gamma0.dom != g.entry(k0)) fail_precondition("induced_segal_at: gamma0 has wrong domain");
    if (!gamma0.cod->is_discrete())
        fail_precondition("induced_segal_at: the discretized level-0 object must be discrete");
    CatPtr factor = g.entry(k1);
    FinFunctor d0 = FinFunctor::compose(gamma0, g.face(k1, dir, 0));
    FinFunctor d1 = FinFunctor::compose(gamma0, g.face(k1, dir, 1));
    std::vector<CatPtr> factors(ki, factor);
    std::vector<Cospan> cospans;
    for (int j = 0; j + 1 < ki; ++j) cospans.push_back(Cospan{d0, d1});
    SegalMapData out{iterated_pullback(factors, cospans, lim), {}, false};
    std::vector<FinFunctor> nus;
    for (int j = 1; j <= ki; ++j) nus.push_back(g.action1(k, dir, SimplexMap::interval(ki, j)));
    out.mu = build_mu(g.entry(k), out.pullback, nus);
    out.iso = out.mu.is_isomorphism();
    return out;
}

SegalMapData segal_map(const MultiGrid& x, int k, const Limits& lim) {
    if (x.dirs() != 1) fail_precondition("segal_map expects a simplicial grid");
    if (k > x.m()) fail_precondition("segal_map: level exceeds the truncation");
    return segal_at(x, 0, IndexTuple{k}, lim);
}

SegalMapData induced_segal_map(const MultiGrid& x, const FinFunctor& gamma0, int k, const Limits& lim) {
    if (x.dirs() != 1) fail_precondition("induced_segal_map expects a simplicial grid");
    if (k > x.m()) fail_precondition("induced_segal_map: level exceeds the truncation");
    return induced_segal_at(x, 0, IndexTuple{k}, gamma0, lim);
}

// ---- nerves --------------------------------------------------------------------------------

namespace {

std::string chain_id(const FinCat& c, const std::vector<int>& chain, int k) {
    if (k == 0) return c.object_id(chain[0]);
    std::vector<std::string> parts;
    for (int a : chain) parts.push_back(c.arrow_id(a));
    return k == 1 ? parts[0] : join_ids(parts);
}

// chains at level k: k=0 encoded as {object}, k>=1 as arrow lists
std::vector<std::vector<int>> chains_of(const FinCat& c, int k, const Limits& lim) {
    std::vector<std::vector<int>> out;
    if (k == 0) {
        for (int x = 0; x < c.n_objects(); ++x) out.push_back({x});
        return out;
    }
    std::vector<std::vector<int>> cur;
    for (int a = 0; a < c.n_arrows(); ++a) cur.push_back({a});
    for (int step = 1; step < k; ++step) {
        std::vector<std::vector<int>> next;
        for (const auto& ch : cur)
            for (int a : c.arrows_from(c.tgt(ch.back()))) {
                next.push_back(ch);
                next.back().push_back(a);
                if (next.size() > lim.max_arrows)
                    fail_size_cap("chain level exceeds max_arrows");
            }
        cur = std::move(next);
    }
    return cur;
}

FinFunctor discrete_map(CatPtr dom, CatPtr cod, const std::vector<int>& omap) {
    FinFunctor f;
    f.dom = dom;
    f.cod = cod;
    f.obj_map = omap;
    f.arr_map.resize(dom->n_arrows());
    for (int a = 0; a < dom->n_arrows(); ++a) {
        if (!dom->is_identity(a)) fail_precondition("discrete_map: domain is not discrete");
        f.arr_map[a] = cod->identity(omap[dom->src(a)]);
    }
    return f;
}

// vertex v of a chain at level k
int chain_vertex(const FinCat& c, const std::vector<int>& chain, int k, int v) {
    if (k == 0) return chain[0];
    if (v == 0) return c.src(chain[0]);
    return c.tgt(chain[v - 1]);
}

// the composite of a chain between vertices a <= b (identity when a == b)
int chain_edge(const FinCat& c, const std::vector<int>& chain, int k, int a, int b) {
    if (a == b) return c.identity(chain_vertex(c, chain, k, a));
    int acc = chain[a];
    for (int t = a + 1; t < b; ++t) acc = c.compose(chain[t], acc);
    return acc;
}

// image chain under a monotone map f: [r] -> [k] (the new chain's t-th arrow
// joins vertices f(t-1), f(t))
std::vector<int> chain_pull(const FinCat& c, const std::vector<int>& chain, int k, const SimplexMap& f) {
    if (f.dom == 0) return {chain_vertex(c, chain, k, f.v[0])};
    std::vector<int> out;
    for (int t = 1; t <= f.dom; ++t) out.push_back(chain_edge(c, chain, k, f.v[t - 1], f.v[t]));
    return out;
}

}  // namespace

CatPtr chain_level(const FinCat& c, int k, const Limits& lim) {
    auto chains = chains_of(c, k, lim);
    std::vector<std::string> ids;
    ids.reserve(chains.size());
    for (const auto& ch : chains) ids.push_back(chain_id(c, ch, k));
    return d_discrete(ids);
}

GridPtr nerve(const FinCat& c, int m, const Limits& lim) {
    MultiGrid g(1, m);
    std::vector<std::vector<std::vector<int>>> levels;
    std::vector<CatPtr> cats;
    for (int k = 0; k <= m; ++k) {
        levels.push_back(chains_of(c, k, lim));
        std::vector<std::string> ids;
        for (const auto& ch : levels[k]) ids.push_back(chain_id(c, ch, k));
        cats.push_back(d_discrete(ids));
        g.set_entry({k}, cats[k]);
    }
    auto level_index = [&](int k, const std::vector<int>& chain) {
        auto ix = cats[k]->object_index(chain_id(c, chain, k));
        if (!ix) fail_structural("nerve: chain not found");
        return *ix;
    };
    for (int k = 0; k <= m; ++k) {
        if (k >= 1)
            for (int j = 0; j <= k; ++j) {
                SimplexMap dj = SimplexMap::delta(k, j);
                std::vector<int> omap(cats[k]->n_objects());
                for (size_t i = 0; i < levels[k].size(); ++i)
                    omap[i] = level_index(k - 1, chain_pull(c, levels[k][i], k, dj));
                g.set_face({k}, 0, j, discrete_map(cats[k], cats[k - 1], omap));
            }
        if (k < m)
            for (int j = 0; j <= k; ++j) {
                SimplexMap sj = SimplexMap::sigma(k, j);
                std::vector<int> omap(cats[k]->n_objects());
                for (size_t i = 0; i < levels[k].size(); ++i)
                    omap[i] = level_index(k + 1, chain_pull(c, levels[k][i], k, sj));
                g.set_degeneracy({k}, 0, j, discrete_map(cats[k], cats[k + 1], omap));
            }
    }
    return share(std::move(g));
}

NerveRecon is_nerve(const MultiGrid& x, const Limits& lim) {
    NerveRecon out;
    if (x.dirs() != 1) {
        out.why = Report::fail("is_nerve", "expects a simplicial grid");
        return out;
    }
    if (!all_entries_discrete(x)) {
        out.why = Report::fail("is_nerve", "entries are not discrete");
        return out;
    }
    Limits big = lim;
    big.max_arrows = std::max<std::uint64_t>(big.max_arrows, 1u << 22);
    for (int k = 2; k <= x.m(); ++k) {
        SegalMapData s = segal_at(x, 0, {k}, big);
        if (!s.iso) {
            out.why = Report::fail("segal", "the level-" + std::to_string(k) + " comparison is not a bijection");
            return out;
        }
    }
    // reconstruct the category from levels 0..2
    CatPtr l0 = x.entry({0});
    CatPtr l1 = x.entry({1});
    FinFunctor tgt_f = x.face({1}, 0, 0);
    FinFunctor src_f = x.face({1}, 0, 1);
    FinFunctor id_f = x.degeneracy({0}, 0, 0);
    FinCat rec;
    for (int i = 0; i < l0->n_objects(); ++i) rec.add_object(l0->object_id(i));
    for (int i = 0; i < l1->n_objects(); ++i)
        rec.add_arrow(l1->object_id(i), src_f.on_obj(i), tgt_f.on_obj(i));
    for (int i = 0; i < l0->n_objects(); ++i) rec.set_identity(i, id_f.on_obj(i));
    {
        SegalMapData s2 = segal_at(x, 0, {2}, big);
        FinFunctor inv = s2.mu.inverted();
        FinFunctor long_edge = x.action1({2}, 0, SimplexMap{1, 2, {0, 2}});
        for (int f = 0; f < l1->n_objects(); ++f)
            for (int g = 0; g < l1->n_objects(); ++g) {
                if (src_f.on_obj(g) != tgt_f.on_obj(f)) continue;
                auto pix = s2.pullback.cat->object_index(join_ids({l1->object_id(f), l1->object_id(g)}));
                if (!pix) fail_structural("is_nerve: composable pair missing in pullback");
                int xi = inv.on_obj(*pix);
                rec.set_compose(g, f, long_edge.on_obj(xi));
            }
    }
    CatPtr cat = seal_cat(std::move(rec));
    if (auto r = cat->validate(); !r) {
        out.why = Report::fail("reconstruction", r.where + ": " + r.detail);
        return out;
    }
    // the truncation must agree with the nerve of the reconstruction:
    // identify level-k objects with chains via the interval actions, then
    // compare all generator actions through the identification
    GridPtr n = nerve(*cat, x.m(), lim);
    std::vector<std::vector<int>> ident(x.m() + 1);
    for (int k = 0; k <= x.m(); ++k) {
        CatPtr xe = x.entry({k});
        CatPtr ne = n->entry({k});
        if (xe->n_objects() != ne->n_objects()) {
            out.why = Report::fail("reconstruction", "level " + std::to_string(k) + " size mismatch");
            return out;
        }
        std::vector<FinFunctor> nus;
        for (int j = 1; j <= k; ++j) nus.push_back(x.action1({k}, 0, SimplexMap::interval(k, j)));
        ident[k].resize(xe->n_objects());
        std::vector<char> seen(ne->n_objects(), 0);
        for (int o = 0; o < xe->n_objects(); ++o) {
            std::string cid;
            if (k == 0) {
                cid = xe->object_id(o);
            } else {
                std::vector<std::string> parts;
                for (int j = 1; j <= k; ++j) parts.push_back(l1->object_id(nus[j - 1].on_obj(o)));
                cid = k == 1 ? parts[0] : join_ids(parts);
            }
            auto ix = ne->object_index(cid);
            if (!ix) {
                out.why = Report::fail("reconstruction",
                                       "level " + std::to_string(k) + " object does not trace to a chain");
                return out;
            }
            if (seen[*ix]) {
                out.why = Report::fail("reconstruction", "level " + std::to_string(k) + " trace not injective");
                return out;
            }
            seen[*ix] = 1;
            ident[k][o] = *ix;
        }
    }
    for (int k = 0; k <= x.m(); ++k) {
        CatPtr xe = x.entry({k});
        auto agree = [&](const FinFunctor& xf, const FinFunctor& nf, int klev) {
            for (int o = 0; o < xe->n_objects(); ++o)
                if (ident[klev][xf.on_obj(o)] != nf.on_obj(ident[k][o])) return false;
            return true;
        };
        if (k >= 1)
            for (int j = 0; j <= k; ++j)
                if (!agree(x.face({k}, 0, j), n->face({k}, 0, j), k - 1)) {
                    out.why = Report::fail("reconstruction", "face mismatch at level " + std::to_string(k));
                    return out;
                }
        if (k < x.m())
            for (int j = 0; j <= k; ++j)
                if (!agree(x.degeneracy({k}, 0, j), n->degeneracy({k}, 0, j), k + 1)) {
                    out.why =
                        Report::fail("reconstruction", "degeneracy mismatch at level " + std::to_string(k));
                    return out;
                }
    }
    out.ok = true;
    out.why = Report::pass();
    out.category = cat;
    return out;
}

GridPtr multinerve(const MultiGrid& g, const Limits& lim) {
    int D = g.dirs();
    MultiGrid z(D + 1, g.m());
    // chains per (tuple, level)
    std::map<std::string, std::vector<std::vector<int>>> chains;
    for (const auto& t : all_tuples(D, g.m())) {
        const FinCat& e = *g.entry(t);
        for (int r = 0; r <= g.m(); ++r) {
            auto ch = chains_of(e, r, lim);
            std::vector<std::string> ids;
            for (const auto& cc : ch) ids.push_back(chain_id(e, cc, r));
            IndexTuple full = t;
            full.push_back(r);
            z.set_entry(full, d_discrete(ids));
            chains[tuple_id(full)] = std::move(ch);
        }
    }
    for (const auto& t : all_tuples(D, g.m())) {
        const FinCat& e = *g.entry(t);
        for (int r = 0; r <= g.m(); ++r) {
            IndexTuple full = t;
            full.push_back(r);
            CatPtr dom = z.entry(full);
            const auto& ch = chains.at(tuple_id(full));
            // last-direction generators: chain operations in the entry
            auto set_last = [&](bool isface, int j) {
                SimplexMap f = isface ? SimplexMap::delta(r, j) : SimplexMap::sigma(r, j);
                IndexTuple to = full;
                to[D] = isface ? r - 1 : r + 1;
                CatPtr cod = z.entry(to);
                std::vector<int> omap(dom->n_objects());
                for (size_t i = 0; i < ch.size(); ++i) {
                    auto img = chain_pull(e, ch[i], r, f);
                    auto ix = cod->object_index(chain_id(e, img, f.dom));
                    if (!ix) fail_structural("multinerve: image chain not found");
                    omap[i] = *ix;
                }
                if (isface)
                    z.set_face(full, D, j, discrete_map(dom, cod, omap));
                else
                    z.set_degeneracy(full, D, j, discrete_map(dom, cod, omap));
            };
            if (r >= 1)
                for (int j = 0; j <= r; ++j) set_last(true, j);
            if (r < g.m())
                for (int j = 0; j <= r; ++j) set_last(false, j);
            // original directions: apply the grid's functors to chain entries
            for (int d = 0; d < D; ++d) {
                auto set_orig = [&](bool isface, int j) {
                    const FinFunctor& base = isface ? g.face(t, d, j) : g.degeneracy(t, d, j);
                    IndexTuple to = full;
                    to[d] = isface ? t[d] - 1 : t[d] + 1;
                    CatPtr cod = z.entry(to);
                    const FinCat& e2 = *base.cod;
                    std::vector<int> omap(dom->n_objects());
                    for (size_t i = 0; i < ch.size(); ++i) {
                        std::vector<int> img;
                        if (r == 0)
                            img = {base.on_obj(ch[i][0])};
                        else
                            for (int a : ch[i]) img.push_back(base.on_arr(a));
                        auto ix = cod->object_index(chain_id(e2, img, r));
                        if (!ix) fail_structural("multinerve: mapped chain not found");
                        omap[i] = *ix;
                    }
                    if (isface)
                        z.set_face(full, d, j, discrete_map(dom, cod, omap));
                    else
                        z.set_degeneracy(full, d, j, discrete_map(dom, cod, omap));
                };
                if (t[d] >= 1)
                    for (int j = 0; j <= t[d]; ++j) set_orig(true, j);
                if (t[d] < g.m())
                    for (int j = 0; j <= t[d]; ++j) set_orig(false, j);
            }
        }
    }
    return share(std::move(z));
}

Report is_multinerve(const MultiGrid& g, const Limits& lim) {
    GridPtr z = multinerve(g, lim);
    for (int d = 0; d < z->dirs(); ++d)
        for (const auto& t : all_tuples(z->dirs(), z->m())) {
            if (t[d] < 2) continue;
            SegalMapData s = segal_at(*z, d, t, lim);
            if (!s.iso)
                return Report::fail("multinerve-segal", "direction " + std::to_string(d + 1) +
                                                            " at (" + tuple_id(t) + ")");
        }
    return Report::pass();
}

// ---- grid pullbacks --------------------------------------------------------------------------

GridPullback grid_iterated_pullback(
    const std::vector<GridPtr>& factors,
    const std::vector<std::pair<const GridMorphism*, const GridMorphism*>>& cospans,
    const Limits& lim) {
    if (factors.empty()) fail_precondition("grid_iterated_pullback: no factors");
    int D = factors[0]->dirs();
    int m = factors[0]->m();
    MultiGrid g(D, m);
    std::vector<std::vector<FinFunctor>> projs(factors.size());
    // per-entry pullbacks
    std::map<std::string, PullbackResult> pbs;
    for (const auto& t : all_tuples(D, m)) {
        std::vector<CatPtr> fac;
        for (const auto& f : factors) fac.push_back(f->entry(t));
        std::vector<Cospan> cs;
        for (const auto& [l, r] : cospans) cs.push_back(Cospan{l->at(t), r->at(t)});
        PullbackResult pb = iterated_pullback(fac, cs, lim);
        g.set_entry(t, pb.cat);
        pbs[tuple_id(t)] = std::move(pb);
    }
    // generators: componentwise application, assembled by ids
    for (const auto& t : all_tuples(D, m)) {
        const PullbackResult& src_pb = pbs.at(tuple_id(t));
        auto induced = [&](bool isface, int d, int j) {
            IndexTuple to = corner(t, d, isface ? t[d] - 1 : t[d] + 1);
            const PullbackResult& dst_pb = pbs.at(tuple_id(to));
            FinFunctor f;
            f.dom = src_pb.cat;
            f.cod = dst_pb.cat;
            f.obj_map.resize(src_pb.cat->n_objects());
            f.arr_map.resize(src_pb.cat->n_arrows());
            size_t K = factors.size();
            for (int o = 0; o < src_pb.cat->n_objects(); ++o) {
                std::vector<std::string> parts(K);
                for (size_t i = 0; i < K; ++i) {
                    const FinFunctor& base =
                        isface ? factors[i]->face(t, d, j) : factors[i]->degeneracy(t, d, j);
                    parts[i] = base.cod->object_id(base.on_obj(src_pb.projections[i].on_obj(o)));
                }
                auto ix = dst_pb.cat->object_index(K == 1 ? parts[0] : join_ids(parts));
                if (!ix) fail_structural("grid pullback: induced object image missing");
                f.obj_map[o] = *ix;
            }
            for (int a = 0; a < src_pb.cat->n_arrows(); ++a) {
                std::vector<std::string> parts(K);
                for (size_t i = 0; i < K; ++i) {
                    const FinFunctor& base =
                        isface ? factors[i]->face(t, d, j) : factors[i]->degeneracy(t, d, j);
                    parts[i] = base.cod->arrow_id(base.on_arr(src_pb.projections[i].on_arr(a)));
                }
                auto ix = dst_pb.cat->arrow_index(K == 1 ? parts[0] : join_ids(parts));
                if (!ix) fail_structural("grid pullback: induced arrow image missing");
                f.arr_map[a] = *ix;
            }
            return f;
        };
        for (int d = 0; d < D; ++d) {
            if (t[d] >= 1)
                for (int j = 0; j <= t[d]; ++j) g.set_face(t, d, j, induced(true, d, j));
            if (t[d] < m)
                for (int j = 0; j <= t[d]; ++j) g.set_degeneracy(t, d, j, induced(false, d, j));
        }
    }
    GridPullback out;
    out.grid = share(std::move(g));
    for (size_t i = 0; i < factors.size(); ++i) {
        GridMorphism pr;
        pr.dom = out.grid;
        pr.cod = factors[i];
        pr.component.resize(out.grid->n_entries());
        for (const auto& t : all_tuples(D, m))
            pr.component[linear_index(t, m)] = pbs.at(tuple_id(t)).projections[i];
        out.projections.push_back(std::move(pr));
    }
    return out;
}

// ---- internal nerve ---------------------------------------------------------------------------

GridPtr nerve_internal(const InternalSpan& span, int m, const Limits& lim) {
    int D = span.objects->dirs();
    // span checks
    if (auto r = span.d0.validate(); !r) fail_precondition("nerve_internal: d0 invalid: " + r.detail);
    if (auto r = span.d1.validate(); !r) fail_precondition("nerve_internal: d1 invalid: " + r.detail);
    if (auto r = span.unit.validate(); !r) fail_precondition("nerve_internal: unit invalid: " + r.detail);
    // levels
    std::vector<GridPtr> levels(m + 1);
    std::vector<std::vector<GridMorphism>> prs(m + 1);
    levels[0] = span.objects;
    levels[1] = span.arrows;
    for (int s = 2; s <= m; ++s) {
        std::vector<GridPtr> fac(s, span.arrows);
        std::vector<std::pair<const GridMorphism*, const GridMorphism*>> cs;
        for (int j = 0; j + 1 < s; ++j) cs.emplace_back(&span.d0, &span.d1);
        GridPullback pb = grid_iterated_pullback(fac, cs, lim);
        levels[s] = pb.grid;
        prs[s] = std::move(pb.projections);
    }
    // composition morphism on the 2-level pullback
    GridMorphism comp = span.compose(levels[2], prs[2][0], prs[2][1]);
    if (comp.dom.get() != levels[2].get() || comp.cod.get() != span.arrows.get())
        fail_precondition("nerve_internal: compose morphism mistyped");

    // chain access helpers at level s: component i (0-based) via prs
    auto chain_comp = [&](int s, int i) -> const GridMorphism& { return prs[s][i]; };
    // build a tuple-object id at level s from component object ids
    auto assemble_obj = [&](int s, const IndexTuple& t, const std::vector<int>& comps) -> int {
        if (s == 1) return comps[0];
        std::vector<std::string> parts;
        for (int i = 0; i < s; ++i) parts.push_back(span.arrows->entry(t)->object_id(comps[i]));
        auto ix = levels[s]->entry(t)->object_index(join_ids(parts));
        if (!ix) fail_structural("nerve_internal: assembled object missing");
        return *ix;
    };
    auto assemble_arr = [&](int s, const IndexTuple& t, const std::vector<int>& comps) -> int {
        if (s == 1) return comps[0];
        std::vector<std::string> parts;
        for (int i = 0; i < s; ++i) parts.push_back(span.arrows->entry(t)->arrow_id(comps[i]));
        auto ix = levels[s]->entry(t)->arrow_index(join_ids(parts));
        if (!ix) fail_structural("nerve_internal: assembled arrow missing");
        return *ix;
    };
    // the composite arrow-of-span between chain positions a..b at level s
    // (0-based positions; returns component object/arrow of the X1 entry)
    // For building faces we only ever merge two adjacent components.

    MultiGrid g(D + 1, m);
    for (const auto& t : all_tuples(D, m))
        for (int s = 0; s <= m; ++s) {
            IndexTuple full = t;
            full.push_back(s);
            g.set_entry(full, levels[s]->entry(t));
        }
    for (const auto& t : all_tuples(D, m)) {
        // original directions: generators from the level grids
        for (int s = 0; s <= m; ++s) {
            IndexTuple full = t;
            full.push_back(s);
            for (int d = 0; d < D; ++d) {
                if (t[d] >= 1)
                    for (int j = 0; j <= t[d]; ++j) g.set_face(full, d, j, levels[s]->face(t, d, j));
                if (t[d] < m)
                    for (int j = 0; j <= t[d]; ++j)
                        g.set_degeneracy(full, d, j, levels[s]->degeneracy(t, d, j));
            }
        }
        // the nerve direction
        for (int s = 0; s <= m; ++s) {
            IndexTuple full = t;
            full.push_back(s);
            CatPtr dom = levels[s]->entry(t);
            auto components_obj = [&](int o) {
                std::vector<int> comps(std::max(s, 1));
                if (s == 1)
                    comps[0] = o;
                else
                    for (int i = 0; i < s; ++i) comps[i] = chain_comp(s, i).at(t).on_obj(o);
                return comps;
            };
            auto components_arr = [&](int a) {
                std::vector<int> comps(std::max(s, 1));
                if (s == 1)
                    comps[0] = a;
                else
                    for (int i = 0; i < s; ++i) comps[i] = chain_comp(s, i).at(t).on_arr(a);
                return comps;
            };
            // merge two adjacent components via the composition morphism
            auto merge_obj = [&](int c1, int c2) {
                auto pix = levels[2]->entry(t)->object_index(join_ids(
                    {span.arrows->entry(t)->object_id(c1), span.arrows->entry(t)->object_id(c2)}));
                if (!pix) fail_structural("nerve_internal: pair not composable");
                return comp.at(t).on_obj(*pix);
            };
            auto merge_arr = [&](int c1, int c2) {
                auto pix = levels[2]->entry(t)->arrow_index(join_ids(
                    {span.arrows->entry(t)->arrow_id(c1), span.arrows->entry(t)->arrow_id(c2)}));
                if (!pix) fail_structural("nerve_internal: arrow pair not composable");
                return comp.at(t).on_arr(*pix);
            };
            if (s >= 1) {
                for (int j = 0; j <= s; ++j) {
                    IndexTuple to = t;
                    to.push_back(s - 1);
                    CatPtr cod = levels[s - 1]->entry(t);
                    FinFunctor f;
                    f.dom = dom;
                    f.cod = cod;
                    f.obj_map.resize(dom->n_objects());
                    f.arr_map.resize(dom->n_arrows());
                    auto face_comps = [&](std::vector<int> comps, bool arrows) {
                        // drop vertex j from an s-chain
                        std::vector<int> res;
                        if (s == 1) {
                            // result is a level-0 element: handled separately
                            return res;
                        }
                        if (j == 0) {
                            res.assign(comps.begin() + 1, comps.end());
                        } else if (j == s) {
                            res.assign(comps.begin(), comps.end() - 1);
                        } else {
                            res.assign(comps.begin(), comps.end());
                            int merged = arrows ? merge_arr(res[j - 1], res[j]) : merge_obj(res[j - 1], res[j]);
                            res[j - 1] = merged;
                            res.erase(res.begin() + j);
                        }
                        return res;
                    };
                    if (s == 1) {
                        const GridMorphism& target = (j == 0) ? span.d0 : span.d1;
                        f = target.at(t);
                    } else {
                        for (int o = 0; o < dom->n_objects(); ++o)
                            f.obj_map[o] = assemble_obj(s - 1, t, face_comps(components_obj(o), false));
                        for (int a = 0; a < dom->n_arrows(); ++a)
                            f.arr_map[a] = assemble_arr(s - 1, t, face_comps(components_arr(a), true));
                    }
                    IndexTuple ft = t;
                    ft.push_back(s);
                    g.set_face(ft, D, j, std::move(f));
                }
            }
            if (s < m) {
                for (int j = 0; j <= s; ++j) {
                    CatPtr cod = levels[s + 1]->entry(t);
                    FinFunctor f;
                    f.dom = dom;
                    f.cod = cod;
                    f.obj_map.resize(dom->n_objects());
                    f.arr_map.resize(dom->n_arrows());
                    if (s == 0) {
                        f = span.unit.at(t);
                    } else {
                        // insert the unit of vertex j
                        for (int o = 0; o < dom->n_objects(); ++o) {
                            auto comps = components_obj(o);
                            int vert;
                            if (j == 0)
                                vert = span.d1.at(t).on_obj(comps[0]);
                            else
                                vert = span.d0.at(t).on_obj(comps[j - 1]);
                            comps.insert(comps.begin() + j, span.unit.at(t).on_obj(vert));
                            f.obj_map[o] = assemble_obj(s + 1, t, comps);
                        }
                        for (int a = 0; a < dom->n_arrows(); ++a) {
                            auto comps = components_arr(a);
                            int vert;
                            if (j == 0)
                                vert = span.d1.at(t).on_arr(comps[0]);
                            else
                                vert = span.d0.at(t).on_arr(comps[j - 1]);
                            comps.insert(comps.begin() + j, span.unit.at(t).on_arr(vert));
                            f.arr_map[a] = assemble_arr(s + 1, t, comps);
                        }
                    }
                    IndexTuple ft = t;
                    ft.push_back(s);
                    g.set_degeneracy(ft, D, j, std::move(f));
                }
            }
        }
    }
    if (auto r = g.validate(false); !r)
        fail_precondition("nerve_internal: span does not satisfy the category axioms (" + r.where +
                          ": " + r.detail + ")");
    return share(std::move(g));
}

// ---- levelwise application ----------------------------------------------------------------------

namespace {

LevelwiseQuotient apply_levelwise(GridPtr g, const std::function<Quotient(const FinCat&)>& fn,
                                  const char* what) {
    LevelwiseQuotient out;
    MultiGrid z(g->dirs(), g->m());
    out.classes.resize(g->n_entries());
    for (const auto& t : all_tuples(g->dirs(), g->m())) {
        Quotient q = fn(*g->entry(t));
        z.set_entry(t, discrete_of(q));
        out.classes[linear_index(t, g->m())] = std::move(q);
    }
    for (const auto& t : all_tuples(g->dirs(), g->m())) {
        int li = linear_index(t, g->m());
        const Quotient& q = out.classes[li];
        auto induced = [&](const FinFunctor& base, const IndexTuple& to) {
            const Quotient& q2 = out.classes[linear_index(to, g->m())];
            std::vector<int> omap(q.n_classes, -1);
            for (int x = 0; x < base.dom->n_objects(); ++x) {
                int c = q.class_of[x];
                int img = q2.class_of[base.on_obj(x)];
                if (omap[c] >= 0 && omap[c] != img)
                    fail_structural(std::string(what) + ": induced map not well defined");
                omap[c] = img;
            }
            return discrete_map(z.entry(t), z.entry(to), omap);
        };
        for (int d = 0; d < g->dirs(); ++d) {
            if (t[d] >= 1)
                for (int j = 0; j <= t[d]; ++j)
                    z.set_face(t, d, j, induced(g->face(t, d, j), corner(t, d, t[d] - 1)));
            if (t[d] < g->m())
                for (int j = 0; j <= t[d]; ++j)
                    z.set_degeneracy(t, d, j, induced(g->degeneracy(t, d, j), corner(t, d, t[d] + 1)));
        }
    }
    out.grid = share(std::move(z));
    GridMorphism proj;
    proj.dom = g;
    proj.cod = out.grid;
    proj.component.resize(g->n_entries());
    for (const auto& t : all_tuples(g->dirs(), g->m())) {
        int li = linear_index(t, g->m());
        proj.component[li] = quotient_projection(g->entry(t), out.classes[li], out.grid->entry(t));
    }
    out.proj = std::move(proj);
    return out;
}

}  // namespace

LevelwiseQuotient apply_levelwise_p(GridPtr g) {
    return apply_levelwise(g, [](const FinCat& c) { return p_isoclasses(c); }, "levelwise p");
}

LevelwiseQuotient apply_levelwise_q(GridPtr g) {
    return apply_levelwise(g, [](const FinCat& c) { return q_components(c); }, "levelwise q");
}

bool all_entries_discrete(const MultiGrid& g) {
    for (int i = 0; i < g.n_entries(); ++i)
        if (!g.entry_linear(i) || !g.entry_linear(i)->is_discrete()) return false;
    return true;
}

}  // namespace wgcat
