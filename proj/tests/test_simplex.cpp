#include "doctest.h"

#include "wgcat/simplex.hpp"

using namespace wgcat;

namespace {

CatPtr terminal_cat() { return d_discrete({"*"}); }

CatPtr indiscrete_cat(const std::vector<std::string>& ids) {
    FinCat c;
    for (const auto& id : ids) c.add_object(id);
    std::vector<std::vector<int>> arr(ids.size(), std::vector<int>(ids.size()));
    for (size_t x = 0; x < ids.size(); ++x)
        for (size_t y = 0; y < ids.size(); ++y)
            arr[x][y] = c.add_arrow(ids[x] + ">" + ids[y], static_cast<int>(x), static_cast<int>(y));
    for (size_t x = 0; x < ids.size(); ++x) c.set_identity(static_cast<int>(x), arr[x][x]);
    for (size_t x = 0; x < ids.size(); ++x)
        for (size_t y = 0; y < ids.size(); ++y)
            for (size_t z = 0; z < ids.size(); ++z) c.set_compose(arr[y][z], arr[x][y], arr[x][z]);
    return seal_cat(std::move(c));
}

CatPtr z2_group() {
    FinCat c;
    int x = c.add_object("x");
    int one = c.add_arrow("1", x, x);
    int s = c.add_arrow("s", x, x);
    c.set_identity(x, one);
    c.set_compose(one, one, one);
    c.set_compose(one, s, s);
    c.set_compose(s, one, s);
    c.set_compose(s, s, one);
    return seal_cat(std::move(c));
}

CatPtr arrow_cat() {
    FinCat c;
    int a = c.add_object("a");
    int b = c.add_object("b");
    int ia = c.add_arrow("1a", a, a);
    int ib = c.add_arrow("1b", b, b);
    int f = c.add_arrow("f", a, b);
    c.set_identity(a, ia);
    c.set_identity(b, ib);
    c.set_compose(ia, ia, ia);
    c.set_compose(ib, ib, ib);
    c.set_compose(f, ia, f);
    c.set_compose(ib, f, f);
    return seal_cat(std::move(c));
}

// the point with one extra 2-cell whose boundary is degenerate; a valid
// truncated simplicial set that is not a nerve (Segal fails at level 2).
// Level 3 carries the three degeneracy twins of the extra cell.
GridPtr fat_point_grid() {
    MultiGrid g(1, 3);
    CatPtr l0 = d_discrete({"*"});
    CatPtr l1 = d_discrete({"u"});
    CatPtr l2 = d_discrete({"d", "extra"});
    CatPtr l3 = d_discrete({"t", "e0", "e1", "e2"});
    g.set_entry({0}, l0);
    g.set_entry({1}, l1);
    g.set_entry({2}, l2);
    g.set_entry({3}, l3);
    auto dm = [&](CatPtr dom, CatPtr cod, std::vector<int> omap) {
        FinFunctor f;
        f.dom = dom;
        f.cod = cod;
        f.obj_map = std::move(omap);
        f.arr_map.resize(dom->n_arrows());
        for (int a = 0; a < dom->n_arrows(); ++a) f.arr_map[a] = cod->identity(f.obj_map[dom->src(a)]);
        return f;
    };
    for (int j = 0; j <= 1; ++j) g.set_face({1}, 0, j, dm(l1, l0, {0}));
    g.set_degeneracy({0}, 0, 0, dm(l0, l1, {0}));
    for (int j = 0; j <= 2; ++j) g.set_face({2}, 0, j, dm(l2, l1, {0, 0}));
    for (int j = 0; j <= 1; ++j) g.set_degeneracy({1}, 0, j, dm(l1, l2, {0}));
    // faces: t -> all d; e_i = s_i(extra) per the simplicial identities
    g.set_face({3}, 0, 0, dm(l3, l2, {0, 1, 0, 0}));
    g.set_face({3}, 0, 1, dm(l3, l2, {0, 1, 1, 0}));
    g.set_face({3}, 0, 2, dm(l3, l2, {0, 0, 1, 1}));
    g.set_face({3}, 0, 3, dm(l3, l2, {0, 0, 0, 1}));
    g.set_degeneracy({2}, 0, 0, dm(l2, l3, {0, 1}));
    g.set_degeneracy({2}, 0, 1, dm(l2, l3, {0, 2}));
    g.set_degeneracy({2}, 0, 2, dm(l2, l3, {0, 3}));
    return share(std::move(g));
}

// the double category of a commutative monoid-in-Cat: one object, arrows Z2
GridPtr z2_double_cat() {
    MultiGrid x0(0, 3);
    x0.set_entry({}, terminal_cat());
    MultiGrid x1(0, 3);
    x1.set_entry({}, z2_group());
    GridPtr g0 = share(std::move(x0));
    GridPtr g1 = share(std::move(x1));
    InternalSpan span;
    span.objects = g0;
    span.arrows = g1;
    auto to_terminal = [&](GridPtr dom) {
        GridMorphism m;
        m.dom = dom;
        m.cod = g0;
        FinFunctor f;
        f.dom = dom->entry({});
        f.cod = g0->entry({});
        f.obj_map.assign(f.dom->n_objects(), 0);
        f.arr_map.assign(f.dom->n_arrows(), 0);
        m.component.push_back(f);
        return m;
    };
    span.d0 = to_terminal(g1);
    span.d1 = to_terminal(g1);
    {
        GridMorphism u;
        u.dom = g0;
        u.cod = g1;
        FinFunctor f;
        f.dom = g0->entry({});
        f.cod = g1->entry({});
        f.obj_map = {0};
        f.arr_map = {*g1->entry({})->arrow_index("1")};
        u.component.push_back(f);
        span.unit = u;
    }
    span.compose = [g1](GridPtr pb, const GridMorphism& pr1, const GridMorphism& pr2) {
        const FinCat& p = *pb->entry({});
        const FinCat& z = *g1->entry({});
        FinFunctor f;
        f.dom = pb->entry({});
        f.cod = g1->entry({});
        f.obj_map.assign(p.n_objects(), 0);
        f.arr_map.resize(p.n_arrows());
        for (int a = 0; a < p.n_arrows(); ++a)
            f.arr_map[a] = z.compose(pr2.component[0].on_arr(a), pr1.component[0].on_arr(a));
        GridMorphism m;
        m.dom = pb;
        m.cod = g1;
        m.component.push_back(f);
        return m;
    };
    return nerve_internal(span, 3);
}

}  // namespace

TEST_CASE("monotone map enumeration matches the binomial count") {
    auto binom = [](int n, int k) {
        long r = 1;
        for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
        return r;
    };
    for (int j = 0; j <= 3; ++j)
        for (int k = 0; k <= 3; ++k)
            CHECK(static_cast<long>(all_monotone(j, k).size()) == binom(j + k + 1, j + 1));
}

TEST_CASE("the truncated simplex category validates") {
    CatPtr d = trunc_delta(3);
    CHECK(d->validate().ok);
    CHECK(d->n_objects() == 4);
    CHECK(d->n_arrows() == 121);
}

TEST_CASE("nerve levels match the chain counts of the arrow category") {
    CatPtr c = arrow_cat();
    GridPtr n = nerve(*c, 3);
    REQUIRE(n->validate().ok);
    CHECK(n->entry({0})->n_objects() == 2);
    CHECK(n->entry({1})->n_objects() == 3);
    CHECK(n->entry({2})->n_objects() == 4);
    CHECK(n->entry({3})->n_objects() == 5);
    // direct enumeration oracle for level 2: pairs (g,f) with src(g) = tgt(f)
    int pairs = 0;
    for (int f = 0; f < c->n_arrows(); ++f)
        for (int g = 0; g < c->n_arrows(); ++g)
            if (c->src(g) == c->tgt(f)) ++pairs;
    CHECK(pairs == n->entry({2})->n_objects());
    CHECK(n->validate_all_composites().ok);
}

TEST_CASE("segal maps of a nerve are isomorphisms; reconstruction returns the category") {
    for (CatPtr c : {arrow_cat(), z2_group(), indiscrete_cat({"a", "b", "c"})}) {
        GridPtr n = nerve(*c, 3);
        for (int k = 2; k <= 3; ++k) CHECK(segal_map(*n, k).iso);
        NerveRecon r = is_nerve(*n);
        REQUIRE(r.ok);
        CHECK(cats_structurally_equal(*r.category, *c));
    }
}

TEST_CASE("a non-nerve simplicial set is detected") {
    GridPtr g = fat_point_grid();
    REQUIRE(g->validate().ok);
    REQUIRE(g->validate_all_composites().ok);
    CHECK_FALSE(segal_map(*g, 2).iso);
    NerveRecon r = is_nerve(*g);
    CHECK_FALSE(r.ok);
    CHECK(r.why.where == "segal");
}

TEST_CASE("constant simplicial object at a discrete category is a nerve") {
    CatPtr d = d_discrete({"a", "b"});
    GridPtr n = nerve(*d, 3);
    CHECK(is_nerve(*n).ok);
    for (int k = 2; k <= 3; ++k) CHECK(segal_map(*n, k).iso);
}

TEST_CASE("internal nerve of a one-object commutative monoid in Cat") {
    GridPtr g = z2_double_cat();
    REQUIRE(g->validate().ok);
    CHECK(g->entry({0})->n_arrows() == 1);
    CHECK(g->entry({1})->n_arrows() == 2);
    CHECK(g->entry({2})->n_arrows() == 4);
    CHECK(g->entry({3})->n_arrows() == 8);
    for (int k = 2; k <= 3; ++k) {
        SegalMapData s = segal_at(*g, 0, {k});
        CHECK(s.iso);
    }
    CHECK(is_multinerve(*g).ok);
}

TEST_CASE("reindex round-trips in every direction") {
    GridPtr g = z2_double_cat();
    SUBCASE("one-directional grid") {
        SimplicialOfGrids s = reindex(*g, 0);
        GridPtr back = reindex_inverse(s);
        CHECK(back->structurally_equal(*g));
    }
    SUBCASE("two-directional grid from the multinerve") {
        GridPtr z = multinerve(*g);
        REQUIRE(z->validate().ok);
        for (int dir = 0; dir < 2; ++dir) {
            SimplicialOfGrids s = reindex(*z, dir);
            for (const auto& lv : s.level) CHECK(lv->validate(false).ok);
            for (const auto& fs : s.face)
                for (const auto& f : fs) CHECK(f.validate().ok);
            GridPtr back = reindex_inverse(s);
            CHECK(back->structurally_equal(*z));
        }
    }
}

TEST_CASE("entrywise reindex values match direct lookup") {
    GridPtr z = multinerve(*z2_double_cat());
    SimplicialOfGrids s = reindex(*z, 1);
    for (int r = 0; r <= 3; ++r)
        for (int a = 0; a <= 3; ++a)
            CHECK(s.level[r]->entry({a}).get() == z->entry({a, r}).get());
}

TEST_CASE("levelwise p and q of a grid") {
    GridPtr g = z2_double_cat();
    LevelwiseQuotient p = apply_levelwise_p(g);
    // every level of the z2 tower is a one-object groupoid: single class
    for (int k = 0; k <= 3; ++k) CHECK(p.grid->entry({k})->n_objects() == 1);
    CHECK(p.proj.validate().ok);
    LevelwiseQuotient q = apply_levelwise_q(g);
    for (int k = 0; k <= 3; ++k) CHECK(q.grid->entry({k})->n_objects() == 1);
}

TEST_CASE("induced segal map over the discretization of an equivalence relation") {
    // the constant-in-direction-1 double category on an equivalence relation:
    // X_s = C for all s, all faces/degeneracies the identity
    CatPtr c = indiscrete_cat({"a", "b"});
    MultiGrid x0(0, 3);
    x0.set_entry({}, c);
    GridPtr g0 = share(std::move(x0));
    InternalSpan span;
    span.objects = g0;
    span.arrows = g0;
    span.d0 = identity_morphism(g0);
    span.d1 = identity_morphism(g0);
    span.unit = identity_morphism(g0);
    span.compose = [](GridPtr pb, const GridMorphism& pr1, const GridMorphism&) {
        GridMorphism m;
        m.dom = pb;
        m.cod = pr1.cod;
        m.component = pr1.component;
        return m;
    };
    GridPtr x = nerve_internal(span, 3);
    REQUIRE(x->validate().ok);

    // gamma0: collapse C to its iso classes (a single class here)
    Quotient qq = p_isoclasses(*c);
    CatPtr disc = discrete_of(qq);
    FinFunctor gamma0 = quotient_projection(x->entry({0}), qq, disc);
    for (int k = 2; k <= 3; ++k) {
        SegalMapData s = induced_segal_map(*x, gamma0, k);
        CHECK_FALSE(s.iso);  // strictly more objects in the fiber product
        auto eq = check_equivalence(s.mu);
        CHECK(eq.ok());
        CHECK(eq.certificate->reverify().ok);
    }
    // when X_0 is already discrete and gamma0 is the identity, the induced
    // comparison is the plain one
    GridPtr n = nerve(*arrow_cat(), 3);
    FinFunctor id0 = FinFunctor::identity(n->entry({0}));
    SegalMapData plain = segal_map(*n, 2);
    SegalMapData ind = induced_segal_map(*n, id0, 2);
    CHECK(plain.iso);
    CHECK(ind.iso);
    CHECK(plain.mu.obj_map == ind.mu.obj_map);
}

TEST_CASE("identity grid morphism validates") {
    GridPtr g = z2_double_cat();
    GridMorphism id = identity_morphism(g);
    CHECK(id.validate().ok);
}
