#include "secat/group.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace secat {

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table, std::string name)
    : n_(static_cast<int>(table.size())), table_(std::move(table)), name_(std::move(name)) {
    if (n_ == 0) throw invalid_input("group: empty table");
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != n_) throw invalid_input("group: table not square");
        for (int x : row)
            if (x < 0 || x >= n_) throw invalid_input("group: table entry out of range");
    }
    // identity: the unique e with e*g = g*e = g for all g
    for (int e = 0; e < n_; ++e) {
        bool ok = true;
        for (int g = 0; g < n_ && ok; ++g) ok = table_[e][g] == g && table_[g][e] == g;
        if (ok) {
            e_ = e;
            break;
        }
    }
    if (e_ < 0) throw invalid_input("group: no identity element");
    inv_.assign(n_, -1);
    for (int g = 0; g < n_; ++g) {
        for (int h = 0; h < n_; ++h)
            if (table_[g][h] == e_ && table_[h][g] == e_) {
                inv_[g] = h;
                break;
            }
        if (inv_[g] < 0) throw invalid_input("group: element without inverse");
    }
    // associativity: full check up to order 64, sampled above
    if (n_ <= 64) {
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b)
                for (int c = 0; c < n_; ++c)
                    if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                        throw invalid_input("group: multiplication not associative");
    } else {
        std::mt19937_64 rng(0x5eca7);
        std::uniform_int_distribution<int> pick(0, n_ - 1);
        for (int t = 0; t < 20000; ++t) {
            int a = pick(rng), b = pick(rng), c = pick(rng);
            if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                throw invalid_input("group: multiplication not associative");
        }
    }
}

int FiniteGroup::element_order(int g) const {
    int k = 1, x = g;
    while (x != e_) {
        x = mul(x, g);
        ++k;
    }
    return k;
}

bool FiniteGroup::is_abelian() const {
    for (int a = 0; a < n_; ++a)
        for (int b = a + 1; b < n_; ++b)
            if (mul(a, b) != mul(b, a)) return false;
    return true;
}

std::vector<int> FiniteGroup::center() const {
    std::vector<int> z;
    for (int a = 0; a < n_; ++a) {
        bool central = true;
        for (int b = 0; b < n_ && central; ++b) central = mul(a, b) == mul(b, a);
        if (central) z.push_back(a);
    }
    return z;
}

Subgroup::Subgroup(const FiniteGroup& g, std::vector<int> elems) : g_(&g), elems_(std::move(elems)) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
    if (!contains(g.identity())) throw invalid_input("subgroup: missing identity");
    for (int a : elems_) {
        if (!contains(g.inv(a))) throw invalid_input("subgroup: not closed under inverse");
        for (int b : elems_)
            if (!contains(g.mul(a, b))) throw invalid_input("subgroup: not closed under product");
    }
}

bool Subgroup::contains(int x) const {
    return std::binary_search(elems_.begin(), elems_.end(), x);
}

bool Subgroup::is_normal() const {
    for (int x = 0; x < g_->order(); ++x)
        for (int h : elems_)
            if (!contains(g_->conj(x, h))) return false;
    return true;
}

CosetSpace::CosetSpace(const FiniteGroup& g, const Subgroup& h) : g_(&g), h_(&h) {
    const int n = g.order();
    coset_of_.assign(n, -1);
    std::vector<std::vector<int>> members;
    std::vector<int> reps;
    for (int x = 0; x < n; ++x) {
        if (coset_of_[x] >= 0) continue;
        int c = static_cast<int>(reps.size());
        std::vector<int> mem;
        for (int hh : h.elements()) {
            int y = g.mul(x, hh);
            coset_of_[y] = c;
            mem.push_back(y);
        }
        std::sort(mem.begin(), mem.end());
        reps.push_back(mem.front());  // canonical representative: minimal index
        members.push_back(std::move(mem));
    }
    // scanning x in index order already yields cosets sorted by canonical rep
    reps_ = std::move(reps);
    members_ = std::move(members);
    base_ = coset_of_[g.identity()];
    action_.assign(n, std::vector<int>(count()));
    for (int x = 0; x < n; ++x)
        for (int c = 0; c < count(); ++c) action_[x][c] = coset_of_[g.mul(x, reps_[c])];
}

GroupHom::GroupHom(const FiniteGroup& src, const FiniteGroup& dst, std::vector<int> image)
    : src_(&src), dst_(&dst), image_(std::move(image)) {
    if (static_cast<int>(image_.size()) != src.order())
        throw invalid_input("hom: image table has wrong length");
    if (image_[src.identity()] != dst.identity())
        throw invalid_input("hom: identity not preserved");
    for (int a = 0; a < src.order(); ++a)
        for (int b = 0; b < src.order(); ++b)
            if (image_[src.mul(a, b)] != dst.mul(image_[a], image_[b]))
                throw invalid_input("hom: multiplication not preserved");
}

bool GroupHom::is_surjective() const {
    std::set<int> im(image_.begin(), image_.end());
    return static_cast<int>(im.size()) == dst_->order();
}

bool GroupHom::is_injective() const {
    std::set<int> im(image_.begin(), image_.end());
    return static_cast<int>(im.size()) == src_->order();
}

std::vector<int> GroupHom::kernel_elements() const {
    std::vector<int> k;
    for (int x = 0; x < src_->order(); ++x)
        if (image_[x] == dst_->identity()) k.push_back(x);
    return k;
}

FiniteGroup cyclic_group(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return FiniteGroup(std::move(t), "Z" + std::to_string(n));
}

namespace {

std::vector<int> perm_from_cycles(const std::vector<std::vector<int>>& cycles, int degree) {
    std::vector<int> p(degree);
    for (int i = 0; i < degree; ++i) p[i] = i;
    for (const auto& cyc : cycles) {
        for (size_t i = 0; i < cyc.size(); ++i) {
            int from = cyc[i] - 1, to = cyc[(i + 1) % cyc.size()] - 1;
            if (from < 0 || from >= degree || to < 0 || to >= degree)
                throw invalid_input("make_group: cycle point out of range");
            p[from] = to;
        }
    }
    return p;
}

std::vector<int> perm_mul(const std::vector<int>& a, const std::vector<int>& b) {
    // (a b)(x) = a(b(x))
    std::vector<int> c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
    return c;
}

}  // namespace

FiniteGroup make_group(const GroupSpec& spec, const Limits& lim) {
    if (spec.kind == "table") return FiniteGroup(spec.table);
    if (spec.kind != "perm") throw invalid_input("make_group: unknown kind '" + spec.kind + "'");
    if (spec.degree <= 0) throw invalid_input("make_group: perm spec needs positive degree");

    std::vector<int> id(spec.degree);
    for (int i = 0; i < spec.degree; ++i) id[i] = i;
    std::vector<std::vector<int>> gens;
    for (const auto& cyc : spec.generators) gens.push_back(perm_from_cycles(cyc, spec.degree));

    // orbit closure under right multiplication by generators
    std::map<std::vector<int>, int> index;
    std::vector<std::vector<int>> elems{id};
    index[id] = 0;
    for (size_t i = 0; i < elems.size(); ++i) {
        for (const auto& gperm : gens) {
            auto next = perm_mul(elems[i], gperm);
            if (index.emplace(next, static_cast<int>(elems.size())).second) {
                elems.push_back(next);
                if (static_cast<long>(elems.size()) > lim.max_order)
                    throw cap_exceeded("make_group: closure exceeds max_order");
            }
        }
    }
    const int n = static_cast<int>(elems.size());
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) table[a][b] = index.at(perm_mul(elems[a], elems[b]));
    return FiniteGroup(std::move(table));
}

FiniteGroup symmetric_s3() {
    GroupSpec spec;
    spec.kind = "perm";
    spec.degree = 3;
    spec.generators = {{{1, 2}}, {{1, 2, 3}}};
    auto g = make_group(spec);
    return FiniteGroup(g.table(), "S3");
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    const int na = a.order(), nb = b.order(), n = na * nb;
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            t[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
    return FiniteGroup(std::move(t), a.name() + "x" + b.name());
}

std::vector<int> power_decode(int idx, int n, int r) {
    std::vector<int> tup(r);
    for (int i = r - 1; i >= 0; --i) {
        tup[i] = idx % n;
        idx /= n;
    }
    return tup;
}

int power_encode(const std::vector<int>& tuple, int n) {
    int idx = 0;
    for (int g : tuple) idx = idx * n + g;
    return idx;
}

FiniteGroup direct_power(const FiniteGroup& g, int r, const Limits& lim) {
    if (r < 1) throw invalid_input("direct_power: r must be positive");
    long total = 1;
    for (int i = 0; i < r; ++i) {
        total *= g.order();
        if (total > lim.max_order) throw cap_exceeded("direct_power: |G|^r exceeds max_order");
    }
    const int n = g.order(), m = static_cast<int>(total);
    std::vector<std::vector<int>> t(m, std::vector<int>(m));
    for (int x = 0; x < m; ++x) {
        auto xt = power_decode(x, n, r);
        for (int y = 0; y < m; ++y) {
            auto yt = power_decode(y, n, r);
            std::vector<int> zt(r);
            for (int i = 0; i < r; ++i) zt[i] = g.mul(xt[i], yt[i]);
            t[x][y] = power_encode(zt, n);
        }
    }
    return FiniteGroup(std::move(t), g.name() + "^" + std::to_string(r));
}

Subgroup diagonal_subgroup(const FiniteGroup& g, const FiniteGroup& power, int r) {
    std::vector<int> elems;
    for (int x = 0; x < g.order(); ++x) elems.push_back(power_encode(std::vector<int>(r, x), g.order()));
    return Subgroup(power, std::move(elems));
}

Subgroup centralizer(const FiniteGroup& g, int x) {
    std::vector<int> elems;
    for (int h = 0; h < g.order(); ++h)
        if (g.mul(h, x) == g.mul(x, h)) elems.push_back(h);
    return Subgroup(g, std::move(elems));
}

Subgroup trivial_subgroup(const FiniteGroup& g) { return Subgroup(g, {g.identity()}); }

Subgroup full_subgroup(const FiniteGroup& g) {
    std::vector<int> all(g.order());
    for (int i = 0; i < g.order(); ++i) all[i] = i;
    return Subgroup(g, std::move(all));
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
    std::vector<int> out;
    std::set_intersection(a.elements().begin(), a.elements().end(), b.elements().begin(),
                          b.elements().end(), std::back_inserter(out));
    return Subgroup(a.parent(), std::move(out));
}

Subgroup normalizer(const FiniteGroup& g, const Subgroup& h) {
    std::vector<int> out;
    for (int x = 0; x < g.order(); ++x) {
        bool keeps = true;
        for (int hh : h.elements())
            if (!h.contains(g.conj(x, hh))) {
                keeps = false;
                break;
            }
        if (keeps) out.push_back(x);
    }
    return Subgroup(g, std::move(out));
}

Subgroup conjugate_intersection(const FiniteGroup& g, const Subgroup& h, int x) {
    std::vector<int> out;
    for (int hh : h.elements())
        if (h.contains(g.conj(g.inv(x), hh))) out.push_back(hh);
    return Subgroup(g, std::move(out));
}

std::vector<DiagonalConjugate> diagonal_conjugate_family(const FiniteGroup& g, int r,
                                                         const Limits& lim) {
    FiniteGroup power = direct_power(g, r, lim);
    Subgroup delta = diagonal_subgroup(g, power, r);
    const int n = g.order();

    std::vector<DiagonalConjugate> out;
    for (int x = 0; x < power.order(); ++x) {
        if (delta.contains(x)) continue;
        DiagonalConjugate rec;
        rec.x = x;
        rec.intersection = conjugate_intersection(power, delta, x).elements();

        // independent side: constant tuples over the intersection of the
        // centralizers C(x_j^{-1} x_i), i != j
        auto xt = power_decode(x, n, r);
        std::vector<bool> in_all(n, true);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                if (i == j) continue;
                int d = g.mul(g.inv(xt[j]), xt[i]);
                for (int h = 0; h < n; ++h)
                    if (in_all[h] && g.mul(h, d) != g.mul(d, h)) in_all[h] = false;
            }
        for (int h = 0; h < n; ++h)
            if (in_all[h]) rec.centralizer_description.push_back(power_encode(std::vector<int>(r, h), n));
        out.push_back(std::move(rec));
    }
    return out;
}

QuotientGroup quotient_group(const FiniteGroup& g, const Subgroup& n) {
    if (!n.is_normal()) throw invalid_input("quotient_group: subgroup is not normal");
    CosetSpace cs(g, n);
    const int q = cs.count();
    std::vector<std::vector<int>> t(q, std::vector<int>(q));
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            t[a][b] = cs.coset_of(g.mul(cs.representative(a), cs.representative(b)));
    QuotientGroup out{FiniteGroup(std::move(t), g.name() + "/" + std::to_string(n.order())), {}};
    out.projection.resize(g.order());
    for (int x = 0; x < g.order(); ++x) out.projection[x] = cs.coset_of(x);
    return out;
}

SubgroupGroup subgroup_group(const Subgroup& h) {
    const auto& g = h.parent();
    const auto& el = h.elements();
    const int m = static_cast<int>(el.size());
    std::map<int, int> back;
    for (int i = 0; i < m; ++i) back[el[i]] = i;
    std::vector<std::vector<int>> t(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) t[a][b] = back.at(g.mul(el[a], el[b]));
    return SubgroupGroup{FiniteGroup(std::move(t)), el};
}

PullbackGroup pullback_group(const GroupHom& rho) {
    if (!rho.is_surjective()) throw invalid_input("pullback_group: rho is not surjective");
    const auto& g = rho.source();
    const int n = g.order();

    FiniteGroup square = direct_product(g, g);
    std::vector<int> members;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (rho(x) == rho(y)) members.push_back(x * n + y);

    std::map<int, int> back;
    for (size_t i = 0; i < members.size(); ++i) back[members[i]] = static_cast<int>(i);
    const int m = static_cast<int>(members.size());
    std::vector<std::vector<int>> t(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) t[a][b] = back.at(square.mul(members[a], members[b]));

    PullbackGroup out{FiniteGroup(std::move(t)), members, {}, false, false};
    for (int x = 0; x < n; ++x) out.diagonal_elements.push_back(back.at(x * n + x));

    // product decomposition: the element set equals ((ker rho) x 1) . Delta
    auto ker = rho.kernel_elements();
    std::set<int> produced;
    for (int k : ker)
        for (int x = 0; x < n; ++x) produced.insert(back.at(g.mul(k, x) * n + x));
    out.product_decomposition_verified =
        static_cast<int>(produced.size()) == m;

    // Phi(g,h) = (g h^{-1}, h) onto ker ⋊ G with conjugation action
    const int nk = static_cast<int>(ker.size());
    std::map<int, int> ker_index;
    for (int i = 0; i < nk; ++i) ker_index[ker[i]] = i;
    auto semi_mul = [&](std::pair<int, int> a, std::pair<int, int> b) {
        // (x1, y1).(x2, y2) = (x1 * y1 x2 y1^{-1}, y1 y2)
        int tw = g.conj(a.second, ker[b.first]);
        return std::pair<int, int>(ker_index.at(g.mul(ker[a.first], tw)), g.mul(a.second, b.second));
    };
    bool iso = true;
    std::set<std::pair<int, int>> phi_image;
    std::vector<std::pair<int, int>> phi(m);
    for (int i = 0; i < m; ++i) {
        int gx = members[i] / n, gy = members[i] % n;
        int kx = g.mul(gx, g.inv(gy));
        auto it = ker_index.find(kx);
        if (it == ker_index.end()) {
            iso = false;
            break;
        }
        phi[i] = {it->second, gy};
        phi_image.insert(phi[i]);
    }
    if (iso) iso = static_cast<int>(phi_image.size()) == m;
    if (iso)
        for (int a = 0; a < m && iso; ++a)
            for (int b = 0; b < m && iso; ++b)
                iso = phi[back.at(square.mul(members[a], members[b]))] == semi_mul(phi[a], phi[b]);
    out.semidirect_iso_verified = iso;
    return out;
}

}  // namespace secat
