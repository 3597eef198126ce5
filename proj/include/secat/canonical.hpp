#pragma once

#include "secat/ops.hpp"

namespace secat {

// The coefficient system of the r-th canonical class: Z[pi^{r-1}] as a
// module over G = pi^r with the twisted action
//   (x_1,...,x_r) . (a_1,...,a_{r-1}) = (x_1 a_1 x_2^{-1}, ..., x_{r-1} a_{r-1} x_r^{-1}),
// its augmentation ideal I_r (basepoint: the identity tuple), the crossed
// homomorphism f_r(g) = boundary(g) - 1, and the induced degree-1 cocycle.
class CanonicalData {
  public:
    CanonicalData(const FiniteGroup& pi, int r, const Limits& lim = {});
    CanonicalData(const CanonicalData&) = delete;
    CanonicalData& operator=(const CanonicalData&) = delete;

    const FiniteGroup& base() const { return *pi_; }
    const FiniteGroup& power() const { return power_; }
    int r() const { return r_; }
    int tuple_count() const { return tuples_; }
    int basepoint() const { return base_tuple_; }

    const GModule& z_tuples() const { return ztup_; }
    const GModule& ideal() const { return ir_; }

    // action of g in pi^r on a tuple index
    int act_tuple(int g, int t) const { return tuple_action_[g][t]; }
    // boundary(g_1,...,g_r) = (g_1 g_2^{-1}, ..., g_{r-1} g_r^{-1})
    int boundary_tuple(int g) const;
    // f_r(g) = boundary(g) - basepoint, as coordinates in the ideal
    std::vector<Int> f_value(int g) const;

    // f(gh) = g.f(h) + f(g) for all pairs (exhaustive)
    bool crossed_law_holds() const;

    // degree-1 cocycle with c(1 (x) (g-1)) = f_r(g)
    Cochain cocycle(const Resolution& res_power) const;
    // alternative conversion convention c'(1 (x) (g-1)) = -g.f_r(g^{-1})
    Cochain cocycle_alt(const Resolution& res_power) const;

    int ideal_index(int t) const { return t < base_tuple_ ? t : t - 1; }
    int ideal_tuple(int i) const { return i < base_tuple_ ? i : i + 1; }

  private:
    const FiniteGroup* pi_;
    int r_;
    FiniteGroup power_;
    int tuples_;
    int base_tuple_;
    std::vector<std::vector<int>> tuple_action_;
    GModule ztup_;
    GModule ir_;
};

struct PsiCompareReport {
    bool bijective = false;       // phi-bar : G/Delta_r -> pi^{r-1}
    bool equivariant = false;
    bool exact_equality = false;  // psi_*(omega) == v_r as cocycle vectors
};

// Compare the relative class of Delta_r <= pi^r with the canonical cocycle
// through the module isomorphism induced by (x_1,...,x_r) -> (x_1 x_2^{-1}, ...).
PsiCompareReport psi_compare(const FiniteGroup& pi, int r, const Limits& lim = {});

}  // namespace secat
