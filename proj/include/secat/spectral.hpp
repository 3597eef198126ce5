#pragma once

#include <map>
#include <tuple>

#include "secat/ops.hpp"

namespace secat {

struct Orbit {
    std::vector<int> tuples;    // tuple indices of (G/H)^s, sorted
    int representative;         // lexicographically minimal tuple
    std::vector<int> isotropy;  // elements of H stabilizing the representative
    bool in_cprime;             // no component equals the base coset
};

struct OrbitDecomposition {
    int s = 0;
    std::vector<Orbit> orbits;
    // for each I^s basis index (tuples off the base coset), its orbit id
    std::vector<int> block_of;
};

OrbitDecomposition orbit_decompose(const RelativeContext& ctx, int s);

// A homomorphism between computed cohomology groups, stored as the class
// coordinates of the images of the source generators.
struct ClassMap {
    const CohomologyGroup* src = nullptr;
    const CohomologyGroup* dst = nullptr;
    std::vector<std::vector<Int>> gen_images;

    std::vector<Int> apply(const std::vector<Int>& coords) const;
    // basis of {x : f(x) = 0 in dst}, includes the source relations
    std::vector<SVec> kernel_lattice() const;
    // generators of the image subgroup (dst relations not included)
    std::vector<SVec> image_gens() const;
};

// im(f) = ker(g) as subgroups of the middle group (g . f = 0 is asserted)
bool exact_at(const ClassMap& f, const ClassMap& g);

// invariant factors of a subgroup of a computed cohomology group, given by
// generator coordinate vectors
std::pair<long, std::vector<Int>> subgroup_invariants(const CohomologyGroup& h,
                                                      const std::vector<SVec>& gens);

// Everything for the exact couple of (G, H) with coefficients A:
// D_0^{r,s} = Ext^r(I^s, A) = H^r(G; Hom(I^s, A)),
// E_0^{r,s} = Ext^r(Z[G/H] (x) I^s, A) = H^r(G; Hom(Z[G/H] (x) I^s, A)),
// with i_0 the connecting homomorphism of the dualized coefficient sequence
// and j_0, k_0 induced by sigma* and i*.
class ExactCouple {
  public:
    ExactCouple(RelativeContext& ctx, const GModule& a);
    ExactCouple(const ExactCouple&) = delete;
    ExactCouple& operator=(const ExactCouple&) = delete;

    RelativeContext& relative() const { return *ctx_; }
    const GModule& coefficients() const { return *a_; }

    const GModule& hom_is(int s);   // Hom(I^s, A)
    const GModule& hom_mid(int s);  // Hom(Z[G/H] (x) I^s, A)

    const CohomologyGroup& d_cell(int r, int s);
    const CohomologyGroup& e_cell(int r, int s);

    const ClassMap& j0(int r, int s);  // D^{r,s} -> E^{r,s}
    const ClassMap& k0(int r, int s);  // E^{r,s} -> D^{r,s+1}
    const ClassMap& i0(int r, int s);  // D^{r,s+1} -> D^{r+1,s}

    // generators of D_p^{r,s} as a subgroup of D_0^{r,s} (coordinates)
    std::vector<SVec> dp_subgroup(int p, int r, int s);
    std::pair<long, std::vector<Int>> dp_invariants(int p, int r, int s);

    // largest p <= n with D_p^{n,0} != 0
    int dp_lower_bound(int n);

    // triangle exactness of the 0-page couple at the three vertex families,
    // for cells whose neighbours fit in the window r <= rmax, s <= smax
    bool page0_exact(int rmax, int smax);

  private:
    const ShortExactSeq& dual_ses(int s);
    GMap precompose_map(const SMat& comp, const GModule& from, const GModule& to);

    RelativeContext* ctx_;
    const GModule* a_;
    std::map<int, std::unique_ptr<GModule>> hom_is_, hom_mid_, mid_src_;
    std::map<int, std::unique_ptr<ShortExactSeq>> ses_;
    std::map<std::pair<int, int>, std::unique_ptr<CohomologyGroup>> dcell_, ecell_;
    std::map<std::pair<int, int>, std::unique_ptr<ClassMap>> j0_, k0_, i0_;
};

struct ShapiroReport {
    std::pair<long, std::vector<Int>> left;   // Ext^r_ZG(Z[G/H] (x) M, A)
    std::pair<long, std::vector<Int>> right;  // Ext^r_ZH(res M, res A)
    bool invariants_equal = false;
    bool hom_iso_checked = false;  // r = 0: Phi and Psi are mutually inverse
};

ShapiroReport shapiro_check(RelativeContext& ctx, const GModule& m, const GModule& a, int r);

struct E0DecompositionReport {
    std::pair<long, std::vector<Int>> left;   // E_0^{r,s}
    std::pair<long, std::vector<Int>> right;  // product over orbits of H^r(N_C; A)
    bool invariants_equal = false;
    int orbit_count = 0;
};

E0DecompositionReport e0_decomposition_check(RelativeContext& ctx, ExactCouple& couple,
                                             const GModule& a, int r, int s);

// D_1^{n,0} = ker[H^n(G;A) -> H^n(H; res A)] (restriction along the
// inclusion), verified as an equality of subgroup lattices.
bool d1_equals_restriction_kernel(RelativeContext& ctx, ExactCouple& couple, int n);

// Membership test for a class in D_p^{n,0}, given by its coordinates in the
// cell D_0^{n,0}.
bool dp_contains(ExactCouple& couple, int p, int r, int s, const std::vector<Int>& coords);

// u in D_{s+1}^{n,0}  iff  u in D_s^{n,0} and j_s(u) = 0 in E_s (derived
// couple membership chain); both sides computed independently.
bool fm_membership_chain_agrees(ExactCouple& couple, int n, int s,
                                const std::vector<Int>& coords);

// Derived pages on a finite (r,s) window. E_p cells are kept as pairs of
// lattices (cycles, boundaries) over the generator coordinates of E_0; D_p
// cells as generator lattices inside D_0. Cells whose differentials leave
// the window are flagged truncated rather than guessed.
class DerivedPages {
  public:
    DerivedPages(ExactCouple& couple, int max_p, int rmax, int smax);

    struct ECell {
        std::vector<SVec> cycles;
        std::vector<SVec> boundaries;
        bool truncated = false;  // some differential in or out left the window
    };

    int max_p() const { return max_p_; }
    const ECell& e_cell(int p, int r, int s) const;
    std::pair<long, std::vector<Int>> e_invariants(int p, int r, int s) const;
    std::pair<long, std::vector<Int>> d_invariants(int p, int r, int s);

    // d_p . d_p lands in the boundaries wherever the window allows the check
    bool differentials_square_to_zero() const { return d_squares_ok_; }

  private:
    // one d_p evaluation on a representative, nullopt if out of window
    std::optional<std::pair<std::pair<int, int>, std::vector<Int>>> apply_d(
        int p, int r, int s, const std::vector<Int>& coords);

    ExactCouple* couple_;
    int max_p_, rmax_, smax_;
    std::map<std::tuple<int, int, int>, ECell> cells_;
    bool d_squares_ok_ = true;
};

struct KappaReport {
    struct Entry {
        int coset_rep;                 // x (one per coset xH, x outside H)
        int order;                     // |H ∩ xHx^{-1}|
        std::vector<int> order_profile;  // multiset of element orders
        bool abelian;
    };
    std::vector<Entry> family;
    bool all_trivial = false;  // H is malnormal in G
    int max_order = 1;
};

// The conjugate-intersection family underlying kappa_{G,H}; does not assign
// cohomological dimensions (nontrivial finite groups have none), it reports
// structure for the symbolic layer to interpret.
KappaReport kappa_finite(const FiniteGroup& g, const Subgroup& h);

}  // namespace secat
