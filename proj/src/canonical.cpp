#include "secat/canonical.hpp"

namespace secat {

namespace {

std::vector<std::vector<int>> build_tuple_action(const FiniteGroup& pi, int r, int tuples) {
    const int n = pi.order();
    std::vector<std::vector<int>> act;
    // elements of pi^r indexed mixed-radix (leftmost most significant)
    long power_order = 1;
    for (int i = 0; i < r; ++i) power_order *= n;
    act.assign(power_order, std::vector<int>(tuples));
    for (long g = 0; g < power_order; ++g) {
        auto x = power_decode(static_cast<int>(g), n, r);
        for (int t = 0; t < tuples; ++t) {
            auto a = power_decode(t, n, r - 1);
            std::vector<int> b(r - 1);
            for (int i = 0; i < r - 1; ++i) b[i] = pi.mul(pi.mul(x[i], a[i]), pi.inv(x[i + 1]));
            act[g][t] = power_encode(b, n);
        }
    }
    return act;
}

GModule tuple_permutation_module(const FiniteGroup& power,
                                 const std::vector<std::vector<int>>& act, int tuples) {
    std::vector<SMat> mats(power.order(), SMat(tuples, tuples));
    for (int g = 0; g < power.order(); ++g)
        for (int t = 0; t < tuples; ++t) mats[g].set(act[g][t], t, 1);
    return GModule(power, tuples, std::move(mats), {}, "Z[tuples]");
}

GModule tuple_ideal_module(const FiniteGroup& power, const std::vector<std::vector<int>>& act,
                           int tuples, int base) {
    const int r = tuples - 1;
    auto idx = [&](int t) { return t < base ? t : t - 1; };
    std::vector<SMat> mats(power.order(), SMat(r, r));
    for (int g = 0; g < power.order(); ++g) {
        const int gb = act[g][base];
        for (int i = 0; i < r; ++i) {
            const int t = i < base ? i : i + 1;
            const int gt = act[g][t];
            // g.(t - base) = (gt - base) - (g.base - base)
            if (gt != base) mats[g].add(idx(gt), i, 1);
            if (gb != base) mats[g].add(idx(gb), i, -1);
        }
        mats[g].normalize();
    }
    return GModule(power, r, std::move(mats), {}, "I_r");
}

}  // namespace

CanonicalData::CanonicalData(const FiniteGroup& pi, int r, const Limits& lim)
    : pi_(&pi), r_(r), power_(direct_power(pi, r, lim)),
      tuples_([&] {
          long t = 1;
          for (int i = 0; i < r - 1; ++i) t *= pi.order();
          return static_cast<int>(t);
      }()),
      base_tuple_(power_encode(std::vector<int>(r - 1, pi.identity()), pi.order())),
      tuple_action_(build_tuple_action(pi, r, tuples_)),
      ztup_(tuple_permutation_module(power_, tuple_action_, tuples_)),
      ir_(tuple_ideal_module(power_, tuple_action_, tuples_, base_tuple_)) {
    if (r < 2) throw invalid_input("canonical: r must be at least 2");
}

int CanonicalData::boundary_tuple(int g) const {
    auto x = power_decode(g, pi_->order(), r_);
    std::vector<int> d(r_ - 1);
    for (int i = 0; i < r_ - 1; ++i) d[i] = pi_->mul(x[i], pi_->inv(x[i + 1]));
    return power_encode(d, pi_->order());
}

std::vector<Int> CanonicalData::f_value(int g) const {
    std::vector<Int> v(ir_.rank());
    const int d = boundary_tuple(g);
    if (d != base_tuple_) v[ideal_index(d)] = 1;
    return v;
}

bool CanonicalData::crossed_law_holds() const {
    const int m = power_.order();
    for (int g = 0; g < m; ++g) {
        for (int h = 0; h < m; ++h) {
            std::vector<Int> lhs = f_value(power_.mul(g, h));
            std::vector<Int> rhs = ir_.apply(g, f_value(h));
            std::vector<Int> fg = f_value(g);
            for (int i = 0; i < ir_.rank(); ++i) rhs[i] += fg[i];
            if (lhs != rhs) return false;
        }
    }
    return true;
}

Cochain CanonicalData::cocycle(const Resolution& res_power) const {
    if (&res_power.group() != &power_) throw invalid_input("canonical: resolution mismatch");
    Cochain c;
    c.degree = 1;
    c.coeff = &ir_;
    const int m = ir_.rank();
    c.values.assign(static_cast<size_t>(res_power.kbasis_count(1)) * m, 0);
    for (int d = 0; d < power_.order() - 1; ++d) {
        auto v = f_value(res_power.k_element(d));
        for (int i = 0; i < m; ++i) c.values[static_cast<size_t>(d) * m + i] = v[i];
    }
    return c;
}

Cochain CanonicalData::cocycle_alt(const Resolution& res_power) const {
    Cochain c;
    c.degree = 1;
    c.coeff = &ir_;
    const int m = ir_.rank();
    c.values.assign(static_cast<size_t>(res_power.kbasis_count(1)) * m, 0);
    for (int d = 0; d < power_.order() - 1; ++d) {
        const int g = res_power.k_element(d);
        auto v = ir_.apply(g, f_value(power_.inv(g)));
        for (int i = 0; i < m; ++i) c.values[static_cast<size_t>(d) * m + i] = -v[i];
    }
    return c;
}

PsiCompareReport psi_compare(const FiniteGroup& pi, int r, const Limits& lim) {
    PsiCompareReport rep;
    CanonicalData can(pi, r, lim);
    const FiniteGroup& g = can.power();
    Subgroup delta = diagonal_subgroup(pi, g, r);
    RelativeContext ctx(g, delta, 2, lim);
    const CosetSpace& cs = ctx.cosets();

    // phi-bar: coset -> boundary tuple of any representative
    std::vector<int> phibar(cs.count());
    std::vector<bool> seen(can.tuple_count(), false);
    rep.bijective = cs.count() == can.tuple_count();
    for (int c = 0; c < cs.count(); ++c) {
        phibar[c] = can.boundary_tuple(cs.representative(c));
        // well-defined on the coset
        for (int e : cs.coset_elements(c))
            if (can.boundary_tuple(e) != phibar[c]) rep.bijective = false;
        if (seen[phibar[c]]) rep.bijective = false;
        seen[phibar[c]] = true;
    }
    rep.equivariant = true;
    for (int x = 0; x < g.order() && rep.equivariant; ++x)
        for (int c = 0; c < cs.count(); ++c)
            if (phibar[cs.act(x, c)] != can.act_tuple(x, phibar[c])) {
                rep.equivariant = false;
                break;
            }

    // psi restricted to the ideals: (c - base) -> (phibar(c) - basepoint)
    SMat p(can.ideal().rank(), ctx.imod().rank());
    for (int i = 0; i < ctx.imod().rank(); ++i) {
        const int c = i < cs.base() ? i : i + 1;
        p.set(can.ideal_index(phibar[c]), i, 1);
    }
    GMap psi(ctx.imod(), can.ideal(), std::move(p), "psi");

    Cochain lhs = postcompose(psi, ctx.bs_cocycle());
    Cochain rhs = can.cocycle(ctx.res());
    rep.exact_equality = lhs.values == rhs.values;
    return rep;
}

}  // namespace secat
