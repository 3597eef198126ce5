#include "secat/spectral.hpp"

#include <algorithm>

#include "secat/smith.hpp"

namespace secat {

OrbitDecomposition orbit_decompose(const RelativeContext& ctx, int s) {
    const CosetSpace& cs = ctx.cosets();
    const auto& h = ctx.subgroup();
    const int c = cs.count();
    long total = 1;
    for (int i = 0; i < s; ++i) {
        total *= c;
        if (total > ctx.limits().max_order) throw cap_exceeded("orbit_decompose: tuple cap");
    }

    OrbitDecomposition out;
    out.s = s;
    std::vector<int> orbit_of(total, -1);
    for (long t = 0; t < total; ++t) {
        if (orbit_of[t] >= 0) continue;
        const int id = static_cast<int>(out.orbits.size());
        Orbit orb;
        // breadth-first closure under the diagonal H-action
        std::vector<long> queue{t};
        orbit_of[t] = id;
        while (!queue.empty()) {
            long cur = queue.back();
            queue.pop_back();
            orb.tuples.push_back(static_cast<int>(cur));
            auto tup = power_decode(static_cast<int>(cur), c, s);
            for (int hh : h.elements()) {
                std::vector<int> img(s);
                for (int i = 0; i < s; ++i) img[i] = cs.act(hh, tup[i]);
                long y = power_encode(img, c);
                if (orbit_of[y] < 0) {
                    orbit_of[y] = id;
                    queue.push_back(y);
                }
            }
        }
        std::sort(orb.tuples.begin(), orb.tuples.end());
        orb.representative = orb.tuples.front();
        auto rep = power_decode(orb.representative, c, s);
        for (int hh : h.elements()) {
            bool fixes = true;
            for (int i = 0; i < s && fixes; ++i) fixes = cs.act(hh, rep[i]) == rep[i];
            if (fixes) orb.isotropy.push_back(hh);
        }
        orb.in_cprime = true;
        for (int i = 0; i < s; ++i)
            if (rep[i] == cs.base()) orb.in_cprime = false;
        out.orbits.push_back(std::move(orb));
    }

    // |C| * |N_C| = |H|
    for (const auto& orb : out.orbits)
        if (static_cast<long>(orb.tuples.size()) * orb.isotropy.size() != h.order())
            throw invalid_input("orbit_decompose: orbit-stabilizer mismatch");

    // J_C block id per I^s basis element; the I^s basis tuples are exactly
    // the tuples with no component on the base coset, indexed mixed-radix
    // over the ideal basis positions
    const int ri = ctx.imod().rank();
    long ipow_rank = 1;
    for (int i = 0; i < s; ++i) ipow_rank *= ri;
    out.block_of.assign(ipow_rank, -1);
    for (long b = 0; b < ipow_rank; ++b) {
        auto digits = power_decode(static_cast<int>(b), ri, s);
        std::vector<int> tup(s);
        for (int i = 0; i < s; ++i) tup[i] = digits[i] < cs.base() ? digits[i] : digits[i] + 1;
        out.block_of[b] = orbit_of[power_encode(tup, c)];
    }
    return out;
}

std::vector<Int> ClassMap::apply(const std::vector<Int>& coords) const {
    std::vector<Int> out(dst->num_gens());
    for (int i = 0; i < src->num_gens(); ++i) {
        if (coords[i] == 0) continue;
        for (int j = 0; j < dst->num_gens(); ++j)
            if (gen_images[i][j] != 0) out[j] += coords[i] * gen_images[i][j];
    }
    return out;
}

std::vector<SVec> ClassMap::kernel_lattice() const {
    // x with  x . M  in  rel(dst):  kernel of [M^T | R^T] projected to x
    const int ks = src->num_gens(), kd = dst->num_gens();
    const auto& rel = dst->relation_lattice().basis();
    SMat stacked(kd, ks + static_cast<int>(rel.size()));
    for (int i = 0; i < ks; ++i)
        for (int j = 0; j < kd; ++j)
            if (gen_images[i][j] != 0) stacked.add(j, i, gen_images[i][j]);
    for (size_t t = 0; t < rel.size(); ++t)
        for (const auto& [j, v] : rel[t]) stacked.add(j, ks + static_cast<int>(t), v);
    stacked.normalize();
    ColumnLattice cl(stacked);
    std::vector<SVec> out;
    for (const auto& k : cl.kernel()) {
        SVec x;
        for (const auto& [i, v] : k)
            if (i < ks) x.emplace_back(i, v);
        svec_normalize(x);
        if (!x.empty()) out.push_back(std::move(x));
    }
    for (const auto& r : src->relation_lattice().basis()) out.push_back(r);
    return out;
}

std::vector<SVec> ClassMap::image_gens() const {
    std::vector<SVec> out;
    for (const auto& img : gen_images) {
        SVec v = svec_from_dense(img);
        if (!v.empty()) out.push_back(std::move(v));
    }
    return out;
}

bool exact_at(const ClassMap& f, const ClassMap& g) {
    if (f.dst != g.src) throw invalid_input("exact_at: maps do not compose");
    const int k = f.dst->num_gens();
    std::vector<SVec> im = f.image_gens();
    for (const auto& r : f.dst->relation_lattice().basis()) im.push_back(r);
    std::vector<SVec> ker = g.kernel_lattice();
    return same_lattice(im, ker, k);
}

std::pair<long, std::vector<Int>> subgroup_invariants(const CohomologyGroup& h,
                                                      const std::vector<SVec>& gens) {
    // subgroup (span(gens) + rel) / rel of Z^k / rel
    const int k = h.num_gens();
    LatticeEchelon span(k);
    for (const auto& g : gens) {
        SVec v = g;
        svec_normalize(v);
        span.insert(std::move(v));
    }
    auto span_basis = span.basis();  // basis of span(gens) before adding rel
    // matrix: rows = relations of the subgroup presentation: solve
    // subgroup = span(gens)+rel / rel. Present with generators = span_basis:
    // relations: coefficient vectors c with sum c_i span_i in rel.
    const auto& rel = h.relation_lattice().basis();
    const int m = static_cast<int>(span_basis.size());
    if (m == 0) return {0, {}};
    SMat stacked(k, m + static_cast<int>(rel.size()));
    for (int i = 0; i < m; ++i)
        for (const auto& [j, v] : span_basis[i]) stacked.add(j, i, v);
    for (size_t t = 0; t < rel.size(); ++t)
        for (const auto& [j, v] : rel[t]) stacked.add(j, m + static_cast<int>(t), v);
    stacked.normalize();
    ColumnLattice cl(stacked);
    LatticeEchelon relations(m);
    for (const auto& kvec : cl.kernel()) {
        SVec x;
        for (const auto& [i, v] : kvec)
            if (i < m) x.emplace_back(i, v);
        svec_normalize(x);
        if (!x.empty()) relations.insert(std::move(x));
    }
    auto rb = relations.basis();
    Mat r(static_cast<int>(rb.size()), m);
    for (int i = 0; i < static_cast<int>(rb.size()); ++i)
        for (const auto& [j, v] : rb[i]) r(i, j) = v;
    SmithDecomposition sd = smith(r);
    std::vector<Int> torsion;
    for (const auto& d : sd.divisors)
        if (d > 1) torsion.push_back(d);
    return {m - sd.rank(), torsion};
}

ExactCouple::ExactCouple(RelativeContext& ctx, const GModule& a) : ctx_(&ctx), a_(&a) {}

const GModule& ExactCouple::hom_is(int s) {
    auto it = hom_is_.find(s);
    if (it == hom_is_.end())
        it = hom_is_
                 .emplace(s, std::make_unique<GModule>(
                                 hom_module(ctx_->ipow(s), *a_, ctx_->limits())))
                 .first;
    return *it->second;
}

const GModule& ExactCouple::hom_mid(int s) {
    auto it = hom_mid_.find(s);
    if (it == hom_mid_.end()) {
        auto src = std::make_unique<GModule>(tensor_module(ctx_->zgh(), ctx_->ipow(s)));
        auto hm = std::make_unique<GModule>(hom_module(*src, *a_, ctx_->limits()));
        mid_src_.emplace(s, std::move(src));
        it = hom_mid_.emplace(s, std::move(hm)).first;
    }
    return *it->second;
}

const CohomologyGroup& ExactCouple::d_cell(int r, int s) {
    auto key = std::make_pair(r, s);
    auto it = dcell_.find(key);
    if (it == dcell_.end()) {
        DRCochains& cx = ctx_->cochains(hom_is(s));
        it = dcell_.emplace(key, std::make_unique<CohomologyGroup>(cohomology(cx, r))).first;
    }
    return *it->second;
}

const CohomologyGroup& ExactCouple::e_cell(int r, int s) {
    auto key = std::make_pair(r, s);
    auto it = ecell_.find(key);
    if (it == ecell_.end()) {
        DRCochains& cx = ctx_->cochains(hom_mid(s));
        it = ecell_.emplace(key, std::make_unique<CohomologyGroup>(cohomology(cx, r))).first;
    }
    return *it->second;
}

GMap ExactCouple::precompose_map(const SMat& comp, const GModule& from, const GModule& to) {
    const int ra = a_->rank();
    SMat out(comp.cols() * ra, comp.rows() * ra);
    for (int j = 0; j < comp.rows(); ++j)
        for (const auto& [jp, v] : comp.row(j))
            for (int i = 0; i < ra; ++i) out.add(jp * ra + i, j * ra + i, v);
    out.normalize();
    return GMap(from, to, std::move(out), "precompose");
}

const ShortExactSeq& ExactCouple::dual_ses(int s) {
    auto it = ses_.find(s);
    if (it != ses_.end()) return *it->second;

    const GModule& is = ctx_->ipow(s);
    const GModule& mid = *mid_src_.at(s);  // built by hom_mid
    // g_s = sigma (x) id : (c, z) -> z
    SMat gs(is.rank(), mid.rank());
    for (int c = 0; c < ctx_->zgh().rank(); ++c)
        for (int z = 0; z < is.rank(); ++z) gs.set(z, c * is.rank() + z, 1);
    // f_s = incl_i (x) id
    SMat fs = SMat::from_dense(kron(ctx_->incl_i().matrix().dense(), Mat::identity(is.rank())));

    auto ses = std::make_unique<ShortExactSeq>(
        ses_check(precompose_map(gs, hom_is(s), hom_mid(s)),
                  precompose_map(fs, hom_mid(s), hom_is(s + 1))));
    it = ses_.emplace(s, std::move(ses)).first;
    return *it->second;
}

namespace {

ClassMap make_postcompose_classmap(const CohomologyGroup& src, const CohomologyGroup& dst,
                                   const GMap& coeff, int degree) {
    ClassMap m;
    m.src = &src;
    m.dst = &dst;
    for (const auto& gen : src.gen_cocycles()) {
        Cochain c;
        c.degree = degree;
        c.coeff = &coeff.source();
        c.values = svec_to_dense(gen, static_cast<int>(src.ambient_dim()));
        Cochain out = postcompose(coeff, c);
        m.gen_images.push_back(dst.class_coords(out.values));
    }
    return m;
}

}  // namespace

const ClassMap& ExactCouple::j0(int r, int s) {
    auto key = std::make_pair(r, s);
    auto it = j0_.find(key);
    if (it == j0_.end()) {
        hom_mid(s);  // ensure built
        const GMap& sig = dual_ses(s).inj;
        auto cm = std::make_unique<ClassMap>(
            make_postcompose_classmap(d_cell(r, s), e_cell(r, s), sig, r));
        it = j0_.emplace(key, std::move(cm)).first;
    }
    return *it->second;
}

const ClassMap& ExactCouple::k0(int r, int s) {
    auto key = std::make_pair(r, s);
    auto it = k0_.find(key);
    if (it == k0_.end()) {
        hom_mid(s);
        const GMap& istar = dual_ses(s).surj;
        auto cm = std::make_unique<ClassMap>(
            make_postcompose_classmap(e_cell(r, s), d_cell(r, s + 1), istar, r));
        it = k0_.emplace(key, std::move(cm)).first;
    }
    return *it->second;
}

const ClassMap& ExactCouple::i0(int r, int s) {
    // connecting homomorphism D^{r,s+1} -> D^{r+1,s}
    auto key = std::make_pair(r, s);
    auto it = i0_.find(key);
    if (it == i0_.end()) {
        hom_mid(s);
        const ShortExactSeq& ses = dual_ses(s);
        const CohomologyGroup& src = d_cell(r, s + 1);
        const CohomologyGroup& dst = d_cell(r + 1, s);
        auto cm = std::make_unique<ClassMap>();
        cm->src = &src;
        cm->dst = &dst;
        for (const auto& gen : src.gen_cocycles()) {
            Cochain c;
            c.degree = r;
            c.coeff = &hom_is(s + 1);
            c.values = svec_to_dense(gen, static_cast<int>(src.ambient_dim()));
            Cochain delta = bockstein(ctx_->res(), ses, c, ctx_->limits());
            cm->gen_images.push_back(dst.class_coords(delta.values));
        }
        it = i0_.emplace(key, std::move(cm)).first;
    }
    return *it->second;
}

std::vector<SVec> ExactCouple::dp_subgroup(int p, int r, int s) {
    if (p == 0) {
        std::vector<SVec> gens;
        for (int i = 0; i < d_cell(r, s).num_gens(); ++i) gens.push_back({{i, Int(1)}});
        return gens;
    }
    if (r - p < 0) return {};
    // start with the generators of D_0^{r-p, s+p} and push through i0 p times
    std::vector<std::vector<Int>> cur;
    const CohomologyGroup& start = d_cell(r - p, s + p);
    for (int i = 0; i < start.num_gens(); ++i) {
        std::vector<Int> e(start.num_gens());
        e[i] = 1;
        cur.push_back(std::move(e));
    }
    for (int t = 0; t < p; ++t) {
        const ClassMap& step = i0(r - p + t, s + p - t - 1);
        std::vector<std::vector<Int>> next;
        for (const auto& x : cur) next.push_back(step.apply(x));
        cur = std::move(next);
    }
    std::vector<SVec> out;
    for (const auto& x : cur) {
        SVec v = svec_from_dense(x);
        if (!v.empty()) out.push_back(std::move(v));
    }
    return out;
}

std::pair<long, std::vector<Int>> ExactCouple::dp_invariants(int p, int r, int s) {
    return subgroup_invariants(d_cell(r, s), dp_subgroup(p, r, s));
}

int ExactCouple::dp_lower_bound(int n) {
    int best = 0;
    for (int p = 1; p <= n; ++p) {
        auto inv = dp_invariants(p, n, 0);
        if (inv.first == 0 && inv.second.empty()) break;
        best = p;
    }
    return best;
}

bool ExactCouple::page0_exact(int rmax, int smax) {
    // the long exact sequence reads
    //   E^{r,s} --k0--> D^{r,s+1} --i0--> D^{r+1,s} --j0--> E^{r+1,s} --k0--> D^{r+1,s+1}
    for (int s = 0; s <= smax; ++s)
        for (int r = 0; r <= rmax; ++r) {
            if (!exact_at(k0(r, s), i0(r, s))) return false;                 // at D^{r,s+1}
            if (!exact_at(i0(r, s), j0(r + 1, s))) return false;             // at D^{r+1,s}
            if (!exact_at(j0(r + 1, s), k0(r + 1, s))) return false;         // at E^{r+1,s}
        }
    return true;
}

ShapiroReport shapiro_check(RelativeContext& ctx, const GModule& m, const GModule& a, int r) {
    ShapiroReport rep;
    const auto& lim = ctx.limits();

    // left side over G
    GModule mid = tensor_module(ctx.zgh(), m);
    GModule hom_left = hom_module(mid, a, lim);
    DRCochains& cxl = ctx.cochains(hom_left);
    CohomologyGroup left = cohomology(cxl, r);
    rep.left = left.invariants();

    // right side over H with its own resolution
    SubgroupGroup hg = subgroup_group(ctx.subgroup());
    GModule mres = restrict_module(m, hg);
    GModule ares = restrict_module(a, hg);
    GModule hom_right = hom_module(mres, ares, lim);
    Resolution res_h(hg.group, r + 1, lim);
    DRCochains cxr(res_h, hom_right, lim);
    CohomologyGroup right = cohomology(cxr, r);
    rep.right = right.invariants();

    rep.invariants_equal = rep.left == rep.right;

    if (r == 0) {
        // explicit Phi: Hom_ZG(Z[G/H] (x) M, A) -> Hom_ZH(M, A), f -> f(base (x) .)
        // and Psi inverse, on invariant bases
        auto inv_left = invariants(hom_left);
        auto inv_right = invariants(hom_right);
        const CosetSpace& cs = ctx.cosets();
        const int rm = m.rank(), ra = a.rank();
        auto phi_of = [&](const std::vector<Int>& f) {
            // f flat over (c*rm + j) * ra + i; keep c = base block
            std::vector<Int> out(static_cast<size_t>(rm) * ra);
            for (int j = 0; j < rm; ++j)
                for (int i = 0; i < ra; ++i)
                    out[static_cast<size_t>(j) * ra + i] =
                        f[(static_cast<size_t>(cs.base()) * rm + j) * ra + i];
            return out;
        };
        auto psi_of = [&](const std::vector<Int>& f) {
            // Psi(f)(cH (x) x) = rep(c) f(rep(c)^{-1} x)
            std::vector<Int> out(static_cast<size_t>(cs.count()) * rm * ra);
            for (int c = 0; c < cs.count(); ++c) {
                const int grep = cs.representative(c);
                const int ginv = ctx.group().inv(grep);
                for (int j = 0; j < rm; ++j) {
                    // x = basis j; g^{-1} x expressed in the m-basis
                    SVec col = m.action_column(ginv, j);
                    std::vector<Int> val(ra);
                    for (const auto& [jj, vv] : col)
                        for (int i = 0; i < ra; ++i)
                            if (f[static_cast<size_t>(jj) * ra + i] != 0)
                                val[i] += vv * f[static_cast<size_t>(jj) * ra + i];
                    std::vector<Int> rot = a.apply(grep, val);
                    for (int i = 0; i < ra; ++i)
                        out[(static_cast<size_t>(c) * rm + j) * ra + i] = rot[i];
                }
            }
            return out;
        };
        // mutual inverse on the invariant bases
        bool ok = inv_left.size() == inv_right.size();
        LatticeEchelon left_lat(hom_left.rank());
        for (const auto& v : inv_left) left_lat.insert(svec_from_dense(v));
        LatticeEchelon right_lat(hom_right.rank());
        for (const auto& v : inv_right) right_lat.insert(svec_from_dense(v));
        for (const auto& v : inv_left) {
            if (!ok) break;
            auto down = phi_of(v);
            if (!right_lat.contains(svec_from_dense(down))) ok = false;
            auto back = psi_of(down);
            if (back != v) ok = false;
        }
        for (const auto& w : inv_right) {
            if (!ok) break;
            auto up = psi_of(w);
            if (!left_lat.contains(svec_from_dense(up))) ok = false;
            if (phi_of(up) != w) ok = false;
        }
        rep.hom_iso_checked = ok;
    }
    return rep;
}

E0DecompositionReport e0_decomposition_check(RelativeContext& ctx, ExactCouple& couple,
                                             const GModule& a, int r, int s) {
    E0DecompositionReport rep;
    rep.left = couple.e_cell(r, s).invariants();

    OrbitDecomposition od = orbit_decompose(ctx, s);
    long free_total = 0;
    std::vector<Int> torsion;
    for (const auto& orb : od.orbits) {
        if (!orb.in_cprime) continue;
        ++rep.orbit_count;
        Subgroup nc(ctx.group(), orb.isotropy);
        SubgroupGroup ng = subgroup_group(nc);
        GModule ares = restrict_module(a, ng);
        CohomologyGroup hn = [&] {
            Resolution res_n(ng.group, r + 1, ctx.limits());
            DRCochains cx(res_n, ares, ctx.limits());
            return cohomology(cx, r);
        }();
        free_total += hn.free_rank();
        for (const auto& t : hn.torsion()) torsion.push_back(t);
    }
    std::sort(torsion.begin(), torsion.end());
    rep.right = {free_total, torsion};
    auto left_sorted = rep.left;
    std::sort(left_sorted.second.begin(), left_sorted.second.end());
    rep.invariants_equal = left_sorted == rep.right;
    return rep;
}

bool d1_equals_restriction_kernel(RelativeContext& ctx, ExactCouple& couple, int n) {
    const CohomologyGroup& hg_cell = couple.d_cell(n, 0);
    const GModule& coeff = couple.hom_is(0);

    SubgroupGroup hg = subgroup_group(ctx.subgroup());
    GModule coeff_res = restrict_module(coeff, hg);
    Resolution res_h(hg.group, n + 1, ctx.limits());
    DRCochains cxh(res_h, coeff_res, ctx.limits());
    CohomologyGroup target = cohomology(cxh, n);

    ClassMap iota;
    iota.src = &hg_cell;
    iota.dst = &target;
    for (const auto& gen : hg_cell.gen_cocycles()) {
        Cochain c;
        c.degree = n;
        c.coeff = &coeff;
        c.values = svec_to_dense(gen, static_cast<int>(hg_cell.ambient_dim()));
        Cochain r = restrict_cochain(ctx.res(), res_h, hg, coeff_res, c);
        iota.gen_images.push_back(target.class_coords(r.values));
    }

    std::vector<SVec> ker = iota.kernel_lattice();
    std::vector<SVec> d1 = couple.dp_subgroup(1, n, 0);
    for (const auto& r : hg_cell.relation_lattice().basis()) d1.push_back(r);
    return same_lattice(ker, d1, hg_cell.num_gens());
}

bool dp_contains(ExactCouple& couple, int p, int r, int s, const std::vector<Int>& coords) {
    const CohomologyGroup& cell = couple.d_cell(r, s);
    LatticeEchelon span(cell.num_gens());
    for (const auto& g : couple.dp_subgroup(p, r, s)) {
        SVec v = g;
        span.insert(std::move(v));
    }
    for (const auto& rel : cell.relation_lattice().basis()) {
        SVec v = rel;
        span.insert(std::move(v));
    }
    return span.contains(svec_from_dense(coords));
}

namespace {

// solve y . M = target modulo the relation lattice of the target cell;
// rows of M are the generator images
std::optional<std::vector<Int>> solve_classmap_preimage(
    const std::vector<std::vector<Int>>& gen_images, int src_gens,
    const CohomologyGroup& dst, const std::vector<Int>& target) {
    const int kd = dst.num_gens();
    const auto& rel = dst.relation_lattice().basis();
    SMat stacked(kd, src_gens + static_cast<int>(rel.size()));
    for (int i = 0; i < src_gens; ++i)
        for (int j = 0; j < kd; ++j)
            if (gen_images[i][j] != 0) stacked.add(j, i, gen_images[i][j]);
    for (size_t t = 0; t < rel.size(); ++t)
        for (const auto& [j, v] : rel[t]) stacked.add(j, src_gens + static_cast<int>(t), v);
    stacked.normalize();
    ColumnLattice cl(stacked);
    auto sol = cl.solve(target);
    if (!sol) return std::nullopt;
    return std::vector<Int>(sol->begin(), sol->begin() + src_gens);
}

std::vector<std::vector<Int>> compose_i0(ExactCouple& couple, int p, int r, int s) {
    // matrix of i0^p : D_0^{r-p, s+p} -> D_0^{r,s} on generators
    const CohomologyGroup& start = couple.d_cell(r - p, s + p);
    std::vector<std::vector<Int>> cur;
    for (int i = 0; i < start.num_gens(); ++i) {
        std::vector<Int> e(start.num_gens());
        e[i] = 1;
        cur.push_back(std::move(e));
    }
    for (int t = 0; t < p; ++t) {
        const ClassMap& step = couple.i0(r - p + t, s + p - t - 1);
        for (auto& x : cur) x = step.apply(x);
    }
    return cur;
}

}  // namespace

bool fm_membership_chain_agrees(ExactCouple& couple, int n, int s,
                                const std::vector<Int>& coords) {
    // direct side
    const bool in_next = dp_contains(couple, s + 1, n, 0, coords);

    // chain side: u in D_s and some i0^s-preimage y has j_0(y) a boundary of
    // the s-th derived page; the boundary lattice is built by the page walk,
    // here we use the equivalent formulation via the preimage lattice:
    // u in D_{s+1} iff u = i0^{s+1}(x) for some x, which we test directly on
    // the chain structure: u in D_s and exists preimage y under i0^s with
    // j0(y) in B_s + rel.
    if (!dp_contains(couple, s, n, 0, coords)) return !in_next;

    // preimages y of u under i0^s live in D_0^{n-s, s}
    if (s == 0) {
        // D_1 = ker j_0 by exactness; chain side is j_0(u) = 0
        const ClassMap& j = couple.j0(n, 0);
        std::vector<Int> img = j.apply(coords);
        bool jzero = couple.e_cell(n, 0).relation_lattice().contains(svec_from_dense(img));
        return jzero == in_next;
    }

    auto m = compose_i0(couple, s, n, 0);
    const CohomologyGroup& start = couple.d_cell(n - s, s);
    auto y0 = solve_classmap_preimage(m, start.num_gens(), couple.d_cell(n, 0), coords);
    if (!y0) return !in_next;  // not even in D_s; handled above, defensive

    // j_s(u) = 0 in E_s iff exists y with i0^s y = u and j0(y) in B_s(+rel),
    // where B_s at E_0^{n-s,s} is generated by j0(ker i0^s) and the page
    // boundaries; equivalently u in D_{s+1} = i0(D_s^{n-1,1})... the direct
    // formulation: search y0 + ker(i0^s) for a j0-boundary certificate:
    // j0(y0 + z) in B with z in ker lattice. Let B = j0(ker i0^s) + rel_E.
    const ClassMap& j = couple.j0(n - s, s);
    std::vector<Int> jy = j.apply(*y0);

    // kernel of i0^s as a lattice in the start cell
    ClassMap comp;
    comp.src = &start;
    comp.dst = &couple.d_cell(n, 0);
    comp.gen_images = m;
    std::vector<SVec> ker = comp.kernel_lattice();

    // lattice of j0(ker) + relations of the E cell
    const CohomologyGroup& ecell = couple.e_cell(n - s, s);
    LatticeEchelon lat(ecell.num_gens());
    for (const auto& z : ker) {
        std::vector<Int> zd = svec_to_dense(z, start.num_gens());
        lat.insert(svec_from_dense(j.apply(zd)));
    }
    for (const auto& rel : ecell.relation_lattice().basis()) {
        SVec v = rel;
        lat.insert(std::move(v));
    }
    const bool chain_side = lat.contains(svec_from_dense(jy));
    return chain_side == in_next;
}

DerivedPages::DerivedPages(ExactCouple& couple, int max_p, int rmax, int smax)
    : couple_(&couple), max_p_(max_p), rmax_(rmax), smax_(smax) {
    // page 0: every class is a cycle, nothing is a boundary yet
    for (int r = 0; r <= rmax_; ++r)
        for (int s = 0; s <= smax_; ++s) {
            ECell cell;
            const CohomologyGroup& e0 = couple.e_cell(r, s);
            for (int i = 0; i < e0.num_gens(); ++i) cell.cycles.push_back({{i, Int(1)}});
            cells_[{0, r, s}] = std::move(cell);
        }
    // d_p has bidegree (-p, p+1)
    for (int p = 0; p < max_p_; ++p) {
        std::map<std::pair<int, int>, std::vector<SVec>> next_boundaries;
        std::map<std::pair<int, int>, std::vector<SVec>> next_cycles;
        std::map<std::pair<int, int>, bool> truncated;
        for (int r = 0; r <= rmax_; ++r)
            for (int s = 0; s <= smax_; ++s) {
                const ECell& cur = cells_.at({p, r, s});
                const int tr = r - p, ts = s + p + 1;
                if (tr < 0) {
                    next_cycles[{r, s}] = cur.cycles;  // target leaves the quadrant: d_p = 0
                    continue;
                }
                if (tr > rmax_ || ts > smax_) {
                    truncated[{r, s}] = true;
                    next_cycles[{r, s}] = cur.cycles;
                    continue;
                }
                const CohomologyGroup& ecell = couple.e_cell(tr, ts);
                std::vector<std::vector<Int>> dimg;
                for (const auto& z : cur.cycles) {
                    auto zd = svec_to_dense(z, couple.e_cell(r, s).num_gens());
                    auto img = apply_d(p, r, s, zd);
                    if (!img) throw invalid_input("derived pages: missing in-window target");
                    dimg.push_back(img->second);
                }
                // new cycles: combinations of cycle generators whose image
                // lies in boundaries(target) + relations(target)
                LatticeEchelon blat(ecell.num_gens());
                const ECell& tcell = cells_.at({p, tr, ts});
                for (const auto& b : tcell.boundaries) {
                    SVec v = b;
                    blat.insert(std::move(v));
                }
                for (const auto& rel : ecell.relation_lattice().basis()) {
                    SVec v = rel;
                    blat.insert(std::move(v));
                }
                auto bbasis = blat.basis();
                const int nc = static_cast<int>(cur.cycles.size());
                SMat stacked(ecell.num_gens(), nc + static_cast<int>(bbasis.size()));
                for (int i = 0; i < nc; ++i)
                    for (int j = 0; j < ecell.num_gens(); ++j)
                        if (dimg[i][j] != 0) stacked.add(j, i, dimg[i][j]);
                for (size_t t = 0; t < bbasis.size(); ++t)
                    for (const auto& [j, v] : bbasis[t])
                        stacked.add(j, nc + static_cast<int>(t), v);
                stacked.normalize();
                ColumnLattice cl(stacked);
                std::vector<SVec> zc;
                for (const auto& kv : cl.kernel()) {
                    std::vector<Int> combo(nc);
                    bool any = false;
                    for (const auto& [i, v] : kv)
                        if (i < nc) {
                            combo[i] = v;
                            any = true;
                        }
                    if (!any) continue;
                    std::vector<Int> out(couple.e_cell(r, s).num_gens());
                    for (int i = 0; i < nc; ++i) {
                        if (combo[i] == 0) continue;
                        for (const auto& [j, v] : cur.cycles[i]) out[j] += combo[i] * v;
                    }
                    SVec ov = svec_from_dense(out);
                    if (!ov.empty()) zc.push_back(std::move(ov));
                }
                next_cycles[{r, s}] = std::move(zc);
                auto& nb = next_boundaries[{tr, ts}];
                for (const auto& img : dimg) {
                    SVec v = svec_from_dense(img);
                    if (!v.empty()) nb.push_back(std::move(v));
                }
            }
        for (int r = 0; r <= rmax_; ++r)
            for (int s = 0; s <= smax_; ++s) {
                ECell cell;
                cell.cycles = next_cycles.at({r, s});
                cell.boundaries = cells_.at({p, r, s}).boundaries;
                for (const auto& b : next_boundaries[{r, s}]) cell.boundaries.push_back(b);
                // boundaries flowing in from (r+p, s-p-1) unseen by the window?
                const bool inbound_unknown = (s - p - 1) >= 0 && (r + p) > rmax_;
                cell.truncated = cells_.at({p, r, s}).truncated ||
                                 truncated.count({r, s}) > 0 || inbound_unknown;
                cells_[{p + 1, r, s}] = std::move(cell);
            }
        // d_p . d_p lands in boundaries wherever both hops stay in-window
        for (int r = 0; r <= rmax_; ++r)
            for (int s = 0; s <= smax_; ++s) {
                const int tr = r - p, ts = s + p + 1;
                const int tr2 = tr - p, ts2 = ts + p + 1;
                if (tr < 0 || tr > rmax_ || ts > smax_) continue;
                if (tr2 < 0 || tr2 > rmax_ || ts2 > smax_) continue;
                const ECell& cur = cells_.at({p, r, s});
                for (const auto& z : cur.cycles) {
                    auto zd = svec_to_dense(z, couple.e_cell(r, s).num_gens());
                    auto im1 = apply_d(p, r, s, zd);
                    auto im2 = apply_d(p, tr, ts, im1->second);
                    const CohomologyGroup& fin = couple.e_cell(tr2, ts2);
                    LatticeEchelon lat(fin.num_gens());
                    const ECell& fcell = cells_.at({p, tr2, ts2});
                    for (const auto& b : fcell.boundaries) {
                        SVec v = b;
                        lat.insert(std::move(v));
                    }
                    for (const auto& rel : fin.relation_lattice().basis()) {
                        SVec v = rel;
                        lat.insert(std::move(v));
                    }
                    if (!lat.contains(svec_from_dense(im2->second))) d_squares_ok_ = false;
                }
            }
    }
}

std::optional<std::pair<std::pair<int, int>, std::vector<Int>>> DerivedPages::apply_d(
    int p, int r, int s, const std::vector<Int>& coords) {
    const int tr = r - p, ts = s + p + 1;
    if (tr < 0 || tr > rmax_ || ts > smax_) return std::nullopt;
    // k0 : E^{r,s} -> D^{r,s+1}
    std::vector<Int> kk = couple_->k0(r, s).apply(coords);
    // preimage under i0^p : D_0^{r-p, s+1+p} -> D_0^{r, s+1}
    std::vector<Int> y;
    if (p == 0) {
        y = std::move(kk);
    } else {
        auto m = compose_i0(*couple_, p, r, s + 1);
        const CohomologyGroup& start = couple_->d_cell(r - p, s + 1 + p);
        auto sol =
            solve_classmap_preimage(m, start.num_gens(), couple_->d_cell(r, s + 1), kk);
        if (!sol) throw invalid_input("derived pages: k_p image escaped D_p");
        y = std::move(*sol);
    }
    // j0 at the preimage cell lands in E^{r-p, s+1+p} = E^{tr, ts}
    std::vector<Int> out = couple_->j0(tr, ts).apply(y);
    return std::make_pair(std::make_pair(tr, ts), out);
}

const DerivedPages::ECell& DerivedPages::e_cell(int p, int r, int s) const {
    return cells_.at({p, r, s});
}

std::pair<long, std::vector<Int>> DerivedPages::e_invariants(int p, int r, int s) const {
    const ECell& cell = cells_.at({p, r, s});
    const CohomologyGroup& e0 = couple_->e_cell(r, s);
    // quotient (cycles + B + rel) over (B + rel): present with generators =
    // basis of cycles, relations = coefficient combinations landing in B+rel
    LatticeEchelon cyc(e0.num_gens());
    for (const auto& z : cell.cycles) {
        SVec v = z;
        cyc.insert(std::move(v));
    }
    auto cyc_basis = cyc.basis();
    const int m = static_cast<int>(cyc_basis.size());
    if (m == 0) return {0, {}};
    LatticeEchelon bl(e0.num_gens());
    for (const auto& b : cell.boundaries) {
        SVec v = b;
        bl.insert(std::move(v));
    }
    for (const auto& rel : e0.relation_lattice().basis()) {
        SVec v = rel;
        bl.insert(std::move(v));
    }
    auto bbasis = bl.basis();
    SMat stacked(e0.num_gens(), m + static_cast<int>(bbasis.size()));
    for (int i = 0; i < m; ++i)
        for (const auto& [j, v] : cyc_basis[i]) stacked.add(j, i, v);
    for (size_t t = 0; t < bbasis.size(); ++t)
        for (const auto& [j, v] : bbasis[t]) stacked.add(j, m + static_cast<int>(t), v);
    stacked.normalize();
    ColumnLattice cl(stacked);
    LatticeEchelon relations(m);
    for (const auto& kvec : cl.kernel()) {
        SVec x;
        for (const auto& [i, v] : kvec)
            if (i < m) x.emplace_back(i, v);
        svec_normalize(x);
        if (!x.empty()) relations.insert(std::move(x));
    }
    auto rb = relations.basis();
    Mat rm(static_cast<int>(rb.size()), m);
    for (int i = 0; i < static_cast<int>(rb.size()); ++i)
        for (const auto& [j, v] : rb[i]) rm(i, j) = v;
    SmithDecomposition sd = smith(rm);
    std::vector<Int> torsion;
    for (const auto& d : sd.divisors)
        if (d > 1) torsion.push_back(d);
    return {m - sd.rank(), torsion};
}

std::pair<long, std::vector<Int>> DerivedPages::d_invariants(int p, int r, int s) {
    return couple_->dp_invariants(p, r, s);
}

KappaReport kappa_finite(const FiniteGroup& g, const Subgroup& h) {
    if (h.order() == g.order())
        throw invalid_input("kappa_finite: H = G leaves the defining set empty");
    KappaReport rep;
    rep.all_trivial = true;
    CosetSpace cs(g, h);
    for (int c = 0; c < cs.count(); ++c) {
        if (c == cs.base()) continue;
        const int x = cs.representative(c);
        Subgroup inter = conjugate_intersection(g, h, x);
        KappaReport::Entry e;
        e.coset_rep = x;
        e.order = inter.order();
        for (int el : inter.elements()) e.order_profile.push_back(g.element_order(el));
        std::sort(e.order_profile.begin(), e.order_profile.end());
        SubgroupGroup sg = subgroup_group(inter);
        e.abelian = sg.group.is_abelian();
        if (e.order > 1) rep.all_trivial = false;
        rep.max_order = std::max(rep.max_order, e.order);
        rep.family.push_back(std::move(e));
    }
    return rep;
}

}  // namespace secat
