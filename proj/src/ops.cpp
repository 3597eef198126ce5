#include "secat/ops.hpp"

#include "secat/smith.hpp"

namespace secat {

RelativeContext::RelativeContext(const FiniteGroup& g, const Subgroup& h, int max_degree,
                                 const Limits& lim)
    : g_(&g), h_(h), cosets_(g, h_), lim_(lim), ztriv_(trivial_module(g)),
      zg_(group_ring(g)), res_(g, max_degree, lim), zgh_(permutation_module(cosets_)),
      imod_(ideal_i(cosets_)), mu_(mu_map(res_.kmodule(), imod_, cosets_)),
      sigma_(sigma_map(zgh_, ztriv_)), incl_i_(inclusion_i(imod_, zgh_, cosets_)) {
    // xi = mu . (eps (x) id_K): value on 1 (x) (g-1) is mu(g-1) = (gH - H)
    xi_.degree = 1;
    xi_.coeff = &imod_;
    xi_.values.assign(static_cast<size_t>(res_.kbasis_count(1)) * imod_.rank(), 0);
    for (int d = 0; d < g.order() - 1; ++d) {
        SVec col;
        for (int i = 0; i < imod_.rank(); ++i) {
            Int x = svec_get(mu_.matrix().row(i), d);
            if (x != 0) xi_.values[static_cast<size_t>(d) * imod_.rank() + i] = x;
        }
    }
}

const GModule& RelativeContext::ipow(int n) const {
    auto it = ipow_.find(n);
    if (it == ipow_.end())
        it = ipow_.emplace(n, std::make_unique<GModule>(tensor_power(imod_, n, lim_))).first;
    return *it->second;
}

DRCochains& RelativeContext::cochains(const GModule& a) const {
    auto it = cx_.find(&a);
    if (it == cx_.end())
        it = cx_.emplace(&a, std::make_unique<DRCochains>(res_, a, lim_)).first;
    return *it->second;
}

Cochain RelativeContext::omega_power_direct(int n) const {
    const GModule& coeff = ipow(n);
    Cochain out;
    out.degree = n;
    out.coeff = &coeff;
    const long ks = res_.kbasis_count(n);
    const int mi = imod_.rank();
    out.values.assign(static_cast<size_t>(ks) * coeff.rank(), 0);
    // value on 1 (x) (g_1 - 1) (x) ... = mu(g_1-1) (x) ... (x) mu(g_n-1)
    for (long y = 0; y < ks; ++y) {
        auto digits = res_.kbasis_decode(n, y);
        // each factor is a column of mu; the product is their tensor
        std::vector<std::pair<long, Int>> acc{{0, Int(1)}};
        for (int d : digits) {
            std::vector<std::pair<long, Int>> next;
            for (const auto& [ip, c] : acc)
                for (int i = 0; i < mi; ++i) {
                    Int v = svec_get(mu_.matrix().row(i), d);
                    if (v != 0) next.emplace_back(ip * mi + i, c * v);
                }
            acc = std::move(next);
            if (acc.empty()) break;
        }
        for (const auto& [ip, c] : acc)
            out.values[static_cast<size_t>(y) * coeff.rank() + ip] += c;
    }
    return out;
}

Cochain cup(const Resolution& res, const Cochain& a, const Cochain& b,
            const GModule& tensor_coeff) {
    const int p = a.degree, q = b.degree;
    const int ma = a.coeff->rank(), mb = b.coeff->rank();
    if (tensor_coeff.rank() != ma * mb) throw invalid_input("cup: tensor coefficient mismatch");
    Cochain out;
    out.degree = p + q;
    out.coeff = &tensor_coeff;
    const long kp = res.kbasis_count(p), kq = res.kbasis_count(q);
    out.values.assign(static_cast<size_t>(kp) * kq * ma * mb, 0);
    for (long y1 = 0; y1 < kp; ++y1)
        for (long y2 = 0; y2 < kq; ++y2) {
            const long ybase = (y1 * kq + y2) * (ma * mb);
            for (int i = 0; i < ma; ++i) {
                const Int& av = a.values[static_cast<size_t>(y1) * ma + i];
                if (av == 0) continue;
                for (int j = 0; j < mb; ++j) {
                    const Int& bv = b.values[static_cast<size_t>(y2) * mb + j];
                    if (bv != 0) out.values[ybase + i * mb + j] = av * bv;
                }
            }
        }
    return out;
}

Cochain postcompose(const GMap& phi, const Cochain& c) {
    if (&phi.source() != c.coeff) throw invalid_input("postcompose: coefficient mismatch");
    Cochain out;
    out.degree = c.degree;
    out.coeff = &phi.target();
    const int ms = phi.source().rank(), mt = phi.target().rank();
    const long blocks = ms == 0 ? 0 : static_cast<long>(c.values.size()) / ms;
    out.values.assign(static_cast<size_t>(blocks) * mt, 0);
    for (long z = 0; z < blocks; ++z)
        for (int i = 0; i < mt; ++i) {
            Int acc = 0;
            for (const auto& [j, v] : phi.matrix().row(i))
                if (c.values[z * ms + j] != 0) acc += v * c.values[z * ms + j];
            out.values[z * mt + i] = acc;
        }
    return out;
}

HeightResult bs_height(const RelativeContext& ctx, int max_n) {
    HeightResult r;
    r.max_n = max_n;
    if (max_n + 1 > ctx.res().max_degree())
        throw invalid_input("bs_height: resolution does not cover max_n + 1");
    for (int n = 1; n <= max_n; ++n) {
        Cochain wn = ctx.omega_power_direct(n);
        DRCochains& cx = ctx.cochains(ctx.ipow(n));
        {
            auto dn = cx.apply_d(n, wn.values);
            for (const auto& x : dn)
                if (x != 0) throw invalid_input("bs_height: omega power is not a cocycle");
        }
        ColumnLattice image(cx.coboundary(n - 1));
        if (image.contains(wn.values)) {
            r.value = n - 1;
            r.at_least = false;
            return r;
        }
    }
    r.value = max_n;
    r.at_least = true;
    return r;
}

Cochain bockstein(const Resolution& res, const ShortExactSeq& ses, const Cochain& u,
                  const Limits& lim) {
    const GModule& bp = ses.inj.source();
    const GModule& b = ses.inj.target();
    const GModule& bpp = ses.surj.target();
    if (u.coeff != &bpp) throw invalid_input("bockstein: cocycle coefficients mismatch");

    // integer right inverse of the surjection via Smith (canonical choice)
    Mat s = ses.surj.matrix().dense();
    SmithDecomposition sd = smith(s);
    for (const auto& d : sd.divisors)
        if (d != 1) throw invalid_input("bockstein: surjection is not onto over Z");
    // S = U^{-1} [I 0] V^{-1}; R = V [I;0] U satisfies S R = I
    Mat mid(b.rank(), bpp.rank());
    for (int i = 0; i < sd.rank(); ++i) mid(i, i) = 1;
    Mat r = sd.v * mid * sd.u;

    // lift u through R, cochainwise
    const long blocks = bpp.rank() == 0 ? res.kbasis_count(u.degree)
                                        : static_cast<long>(u.values.size()) / bpp.rank();
    Cochain lift;
    lift.degree = u.degree;
    lift.coeff = &b;
    lift.values.assign(static_cast<size_t>(blocks) * b.rank(), 0);
    for (long z = 0; z < blocks; ++z)
        for (int i = 0; i < b.rank(); ++i) {
            Int acc = 0;
            for (int j = 0; j < bpp.rank(); ++j)
                if (r(i, j) != 0 && u.values[z * bpp.rank() + j] != 0)
                    acc += r(i, j) * u.values[z * bpp.rank() + j];
            lift.values[z * b.rank() + i] = acc;
        }

    DRCochains cxb(res, b, lim);
    std::vector<Int> dlift = cxb.apply_d(u.degree, lift.values);

    // pull back along the injection, valuewise
    ColumnLattice inj(ses.inj.matrix());
    const long blocks2 = res.kbasis_count(u.degree + 1);
    Cochain out;
    out.degree = u.degree + 1;
    out.coeff = &bp;
    out.values.assign(static_cast<size_t>(blocks2) * bp.rank(), 0);
    for (long z = 0; z < blocks2; ++z) {
        std::vector<Int> val(b.rank());
        for (int i = 0; i < b.rank(); ++i) val[i] = dlift[z * b.rank() + i];
        auto w = inj.solve(val);
        if (!w) throw invalid_input("bockstein: chase failed, d(lift) not in the submodule");
        for (int i = 0; i < bp.rank(); ++i) out.values[z * bp.rank() + i] = (*w)[i];
    }
    return out;
}

BocksteinReport bockstein_check(const RelativeContext& ctx, const GModule& m,
                                const Cochain& u) {
    BocksteinReport rep;
    const auto& res = ctx.res();

    // the sequence 0 -> I(x)M -> Z[G/H](x)M -> M -> 0
    GModule im = tensor_module(ctx.imod(), m);
    GModule zm = tensor_module(ctx.zgh(), m);
    SMat inj = SMat::from_dense(kron(ctx.incl_i().matrix().dense(), Mat::identity(m.rank())));
    SMat surj(m.rank(), zm.rank());
    for (int c = 0; c < ctx.zgh().rank(); ++c)
        for (int j = 0; j < m.rank(); ++j) surj.set(j, c * m.rank() + j, 1);
    ShortExactSeq ses = ses_check(GMap(im, zm, std::move(inj), "i(x)id"),
                                  GMap(zm, m, std::move(surj), "sigma(x)id"));

    Cochain delta_u = bockstein(res, ses, u, ctx.limits());

    // unit case: compare against xi directly
    if (u.degree == 0 && m.rank() == 1) {
        bool unit = true;
        for (const auto& x : u.values)
            if (x != 1) unit = false;
        if (unit && static_cast<int>(u.values.size()) == 1) {
            rep.delta_unit_is_omega = delta_u.values == ctx.bs_cocycle().values;
        }
    }

    Cochain wu = cup(res, ctx.bs_cocycle(), u, im);
    DRCochains& cx = ctx.cochains(im);
    ColumnLattice image(cx.coboundary(u.degree));
    std::vector<Int> diff(delta_u.values.size());
    for (size_t i = 0; i < diff.size(); ++i) diff[i] = delta_u.values[i] - wu.values[i];
    rep.identity_up_to_coboundary = image.contains(diff);
    return rep;
}

GMap ev_map(const RelativeContext& ctx, const GModule& a, int s,
            const GModule& tensor_i_hom, const GModule& hom_s) {
    const int ri = ctx.imod().rank();
    const long rs = hom_s.rank() / std::max(1, a.rank());  // rank(I^s)
    const int ma = a.rank();
    const long rbig = tensor_i_hom.rank() / std::max(1, ri);  // rank Hom(I^{s+1},A)
    SMat m(hom_s.rank(), tensor_i_hom.rank());
    // ev(x_c (x) E_{(c1,z')->a}) = [c == c1] E_{z'->a}
    for (int c = 0; c < ri; ++c)
        for (long zp = 0; zp < rs; ++zp)
            for (int q = 0; q < ma; ++q) {
                long ybig = (static_cast<long>(c) * rs + zp) * ma + q;  // E_{(c,z')->q}
                m.set(static_cast<int>(zp * ma + q),
                      static_cast<int>(c * rbig + ybig), 1);
            }
    return GMap(tensor_i_hom, hom_s, std::move(m), "ev");
}

bool bockstein_ev_check(const RelativeContext& ctx, const GModule& a, int s,
                        const Cochain& u) {
    const auto& res = ctx.res();
    GModule hom_s1 = hom_module(ctx.ipow(s + 1), a, ctx.limits());
    GModule hom_s0 = hom_module(ctx.ipow(s), a, ctx.limits());
    // middle term Hom(Z[G/H] (x) I^s, A); basis of the source is
    // (c, z) -> c * rank(I^s) + z, so the hom flattening stays consistent
    GModule mid_src = tensor_module(ctx.zgh(), ctx.ipow(s));
    GModule hom_mid = hom_module(mid_src, a, ctx.limits());

    // sigma* : Hom(I^s,A) -> Hom(Z[G/H](x)I^s, A), precompose with g_s = sigma(x)id
    // g_s matrix: (c, z) -> z
    SMat gs(ctx.ipow(s).rank(), mid_src.rank());
    for (int c = 0; c < ctx.zgh().rank(); ++c)
        for (int z = 0; z < ctx.ipow(s).rank(); ++z)
            gs.set(z, c * ctx.ipow(s).rank() + z, 1);
    // f_s = incl_i (x) id : I^{s+1} -> Z[G/H] (x) I^s
    SMat fs = SMat::from_dense(
        kron(ctx.incl_i().matrix().dense(), Mat::identity(ctx.ipow(s).rank())));

    auto precompose = [&](const SMat& comp, int rank_a) {
        // f -> f . comp on flattened hom modules: entry [(j', i), (j, i)] = comp[j][j']
        SMat out(comp.cols() * rank_a, comp.rows() * rank_a);
        for (int j = 0; j < comp.rows(); ++j)
            for (const auto& [jp, v] : comp.row(j))
                for (int i = 0; i < rank_a; ++i)
                    out.add(jp * rank_a + i, j * rank_a + i, v);
        out.normalize();
        return out;
    };

    ShortExactSeq ses = ses_check(GMap(hom_s0, hom_mid, precompose(gs, a.rank()), "sigma*"),
                                  GMap(hom_mid, hom_s1, precompose(fs, a.rank()), "i*"));

    Cochain delta_u = bockstein(res, ses, u, ctx.limits());

    GModule ti = tensor_module(ctx.imod(), hom_s1);
    Cochain wu = cup(res, ctx.bs_cocycle(), u, ti);
    GMap ev = ev_map(ctx, a, s, ti, hom_s0);
    Cochain rhs = postcompose(ev, wu);

    std::vector<Int> diff(delta_u.values.size());
    for (size_t i = 0; i < diff.size(); ++i) diff[i] = delta_u.values[i] + rhs.values[i];
    DRCochains& cx = ctx.cochains(hom_s0);
    ColumnLattice image(cx.coboundary(u.degree));
    return image.contains(diff);
}

std::optional<EssentialWitness> essential_certify(const RelativeContext& ctx,
                                                  const GModule& a, const Cochain& u) {
    const int n = u.degree;
    if (n < 1) throw invalid_input("essential_certify: degree must be positive");
    if (u.coeff != &a) throw invalid_input("essential_certify: coefficient mismatch");
    const GModule& ipn = ctx.ipow(n);
    GModule hom_na = hom_module(ipn, a, ctx.limits());
    auto inv = invariants(hom_na);

    Cochain wn = ctx.omega_power_direct(n);
    DRCochains& cx = ctx.cochains(a);
    const SMat& d_prev = cx.coboundary(n - 1);

    // columns: phi_t(omega^n) for each invariant, then the coboundaries
    const long dim = cx.dim(n);
    SMat sys(static_cast<int>(dim), static_cast<int>(inv.size()) + d_prev.cols());
    std::vector<SMat> phis;
    for (size_t t = 0; t < inv.size(); ++t) {
        SMat phi(a.rank(), ipn.rank());
        for (int j = 0; j < ipn.rank(); ++j)
            for (int i = 0; i < a.rank(); ++i)
                if (inv[t][static_cast<size_t>(j) * a.rank() + i] != 0)
                    phi.set(i, j, inv[t][static_cast<size_t>(j) * a.rank() + i]);
        GMap pm(ipn, a, phi, "phi");
        Cochain v = postcompose(pm, wn);
        for (long z = 0; z < dim; ++z)
            if (v.values[z] != 0) sys.add(static_cast<int>(z), static_cast<int>(t), v.values[z]);
        phis.push_back(std::move(phi));
    }
    for (int rr = 0; rr < d_prev.rows(); ++rr)
        for (const auto& [cc, v] : d_prev.row(rr))
            sys.add(rr, static_cast<int>(inv.size()) + cc, v);
    sys.normalize();

    ColumnLattice cl(sys);
    auto sol = cl.solve(u.values);
    if (!sol) return std::nullopt;

    EssentialWitness w;
    w.phi_coeffs.assign(sol->begin(), sol->begin() + static_cast<long>(inv.size()));
    SMat phi(a.rank(), ipn.rank());
    for (size_t t = 0; t < inv.size(); ++t) {
        if (w.phi_coeffs[t] == 0) continue;
        for (int i = 0; i < phis[t].rows(); ++i)
            for (const auto& [j, v] : phis[t].row(i)) phi.add(i, j, w.phi_coeffs[t] * v);
    }
    phi.normalize();
    w.phi_matrix = std::move(phi);
    return w;
}

Cochain pullback_cochain(const Resolution& res_g, const Resolution& res_q,
                         const GroupHom& pi, const GModule& coeff_pullback,
                         const Cochain& c) {
    const auto& g = res_g.group();
    const auto& q = res_q.group();
    const int s = c.degree;
    const int mc = coeff_pullback.rank();
    Cochain out;
    out.degree = s;
    out.coeff = &coeff_pullback;
    const long ks = res_g.kbasis_count(s);
    out.values.assign(static_cast<size_t>(ks) * mc, 0);
    for (long y = 0; y < ks; ++y) {
        auto dg = res_g.kbasis_decode(s, y);
        std::vector<int> dq(s);
        bool alive = true;
        for (int i = 0; i < s && alive; ++i) {
            int qi = pi(res_g.k_element(dg[i]));
            if (qi == q.identity())
                alive = false;
            else
                dq[i] = res_q.k_digit(qi);
        }
        if (!alive) continue;
        long yq = res_q.kbasis_encode(dq);
        for (int i = 0; i < mc; ++i)
            out.values[static_cast<size_t>(y) * mc + i] =
                c.values[static_cast<size_t>(yq) * mc + i];
    }
    return out;
}

NormalCaseReport normal_case_check(const FiniteGroup& g, const Subgroup& n,
                                   const Limits& lim) {
    NormalCaseReport rep;
    QuotientGroup q = quotient_group(g, n);
    GroupHom pi(g, q.group, q.projection);

    RelativeContext ctx(g, n, 2, lim);
    // beta: the Berstein-Schwarz cocycle of Q relative to the trivial
    // subgroup, with coefficients K_Q = ideal of Z[Q/1]
    Subgroup triv = trivial_subgroup(q.group);
    RelativeContext ctxq(q.group, triv, 2, lim);

    GModule pk = pullback_module(pi, ctxq.imod());
    Cochain pulled = pullback_cochain(ctx.res(), ctxq.res(), pi, pk, ctxq.bs_cocycle());

    // identification pi* I_Q = I: quotient elements are indexed by cosets,
    // so the coordinate identification is the identity
    rep.exact_equality = pulled.values == ctx.bs_cocycle().values;

    std::vector<Int> diff(pulled.values.size());
    for (size_t i = 0; i < diff.size(); ++i)
        diff[i] = pulled.values[i] - ctx.bs_cocycle().values[i];
    DRCochains& cx = ctx.cochains(ctx.imod());
    ColumnLattice image(cx.coboundary(0));
    rep.up_to_coboundary = image.contains(diff);
    return rep;
}

Cochain restrict_cochain(const Resolution& res_g, const Resolution& res_h,
                         const SubgroupGroup& sub, const GModule& coeff_res,
                         const Cochain& c) {
    const int s = c.degree;
    const int mc = coeff_res.rank();
    Cochain out;
    out.degree = s;
    out.coeff = &coeff_res;
    const long ksh = res_h.kbasis_count(s);
    out.values.assign(static_cast<size_t>(ksh) * mc, 0);
    for (long y = 0; y < ksh; ++y) {
        auto dh = res_h.kbasis_decode(s, y);
        std::vector<int> dg(s);
        for (int i = 0; i < s; ++i)
            dg[i] = res_g.k_digit(sub.embedding[res_h.k_element(dh[i])]);
        long yg = res_g.kbasis_encode(dg);
        for (int i = 0; i < mc; ++i)
            out.values[static_cast<size_t>(y) * mc + i] =
                c.values[static_cast<size_t>(yg) * mc + i];
    }
    return out;
}

}  // namespace secat
