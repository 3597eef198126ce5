#pragma once

#include <map>
#include <memory>

#include "secat/cohomology.hpp"

namespace secat {

// Everything attached to a subgroup pair H <= G: the coset space, the
// relative modules Z[G/H] and I, the projection mu : K -> I, the resolution
// of G, and cochain complexes per coefficient module. Non-copyable; members
// hold pointers into each other.
class RelativeContext {
  public:
    RelativeContext(const FiniteGroup& g, const Subgroup& h, int max_degree,
                    const Limits& lim = {});
    RelativeContext(const RelativeContext&) = delete;
    RelativeContext& operator=(const RelativeContext&) = delete;

    const FiniteGroup& group() const { return *g_; }
    const Subgroup& subgroup() const { return h_; }
    const CosetSpace& cosets() const { return cosets_; }
    const Resolution& res() const { return res_; }
    const Limits& limits() const { return lim_; }

    const GModule& ztriv() const { return ztriv_; }
    const GModule& zg() const { return zg_; }
    const GModule& kmod() const { return res_.kmodule(); }
    const GModule& zgh() const { return zgh_; }
    const GModule& imod() const { return imod_; }
    const GMap& mu() const { return mu_; }
    const GMap& sigma() const { return sigma_; }
    const GMap& incl_i() const { return incl_i_; }

    // I^{(x)n}, cached (n = 0 gives the trivial rank-1 module)
    const GModule& ipow(int n) const;
    // cochain complexes keyed by module identity
    DRCochains& cochains(const GModule& a) const;

    // The relative class cocycle xi = mu . (eps (x) id_K), degree 1, coeff I.
    const Cochain& bs_cocycle() const { return xi_; }

    // omega^n represented by (eps (x) id); mu^{(x)n} (exact, not via cup)
    Cochain omega_power_direct(int n) const;

  private:
    const FiniteGroup* g_;
    Subgroup h_;
    CosetSpace cosets_;
    Limits lim_;
    GModule ztriv_, zg_;
    Resolution res_;
    GModule zgh_, imod_;
    GMap mu_, sigma_, incl_i_;
    Cochain xi_;
    mutable std::map<int, std::unique_ptr<GModule>> ipow_;
    mutable std::map<const GModule*, std::unique_ptr<DRCochains>> cx_;
};

// cup product representative: (eps (x) id); (hat a (x) hat b), where
// hat a(y) = a(1_G (x) y). Coefficients land in tensor_coeff, which the
// caller must have built as tensor_module(coeff(a), coeff(b)).
Cochain cup(const Resolution& res, const Cochain& a, const Cochain& b,
            const GModule& tensor_coeff);

// postcompose the values of a cochain with an equivariant coefficient map
Cochain postcompose(const GMap& phi, const Cochain& c);

struct HeightResult {
    int value = 0;
    bool at_least = false;  // omega^max_n != 0, so the height is >= value
    int max_n = 0;
};

// height(omega) = sup { n : omega^n != 0 }, searched up to max_n
HeightResult bs_height(const RelativeContext& ctx, int max_n);

// Connecting homomorphism of a coefficient short exact sequence applied to a
// cocycle with values in the quotient module. Deterministic: the lift uses
// the Smith-based right inverse of the surjection, preimages are solved
// against the canonical column echelon of the injection.
Cochain bockstein(const Resolution& res, const ShortExactSeq& ses, const Cochain& u,
                  const Limits& lim = {});

struct BocksteinReport {
    bool delta_unit_is_omega = false;        // delta(1) equals xi exactly as cocycles
    bool identity_up_to_coboundary = false;  // delta(u) - omega cup u is a coboundary
};

// delta(u) = omega cup u for the sequence 0 -> I(x)M -> Z[G/H](x)M -> M -> 0
// (M must be Z-free; torsion coefficients are rejected).
BocksteinReport bockstein_check(const RelativeContext& ctx, const GModule& m,
                                const Cochain& u);

// delta(u) = -(ev_s)_* (omega cup u) for the dual sequence
// 0 -> Hom(I^s,A) -> Hom(Z[G/H] (x) I^s, A) -> Hom(I^{s+1}, A) -> 0.
bool bockstein_ev_check(const RelativeContext& ctx, const GModule& a, int s,
                        const Cochain& u);

// ev_s : I (x) Hom(I^{s+1}, A) -> Hom(I^s, A), ev(x (x) f) = f(x (x) .)
GMap ev_map(const RelativeContext& ctx, const GModule& a, int s,
            const GModule& tensor_i_hom, const GModule& hom_s);

struct EssentialWitness {
    std::vector<Int> phi_coeffs;   // coordinates in the Hom_ZG(I^n, A) basis
    SMat phi_matrix;               // the certified map I^n -> A
};

// search Hom_ZG(I^n, A) for phi with phi_*(omega^n) = [u]; nullopt when the
// integer system is infeasible
std::optional<EssentialWitness> essential_certify(const RelativeContext& ctx,
                                                  const GModule& a, const Cochain& u);

struct NormalCaseReport {
    bool exact_equality = false;      // pi* beta equals xi on the nose
    bool up_to_coboundary = false;
};

// For N normal in G: pull the Berstein-Schwarz cocycle of Q = G/N back along
// the factorwise chain map and compare with the relative class of (G, N).
NormalCaseReport normal_case_check(const FiniteGroup& g, const Subgroup& n,
                                   const Limits& lim = {});

// pullback of a cochain along the chain map induced by a surjection pi
// (factorwise projection of the standard resolutions)
Cochain pullback_cochain(const Resolution& res_g, const Resolution& res_q,
                         const GroupHom& pi, const GModule& coeff_pullback,
                         const Cochain& c);

// restriction of a cochain along a subgroup inclusion (the chain map induced
// by K_H -> K_G)
Cochain restrict_cochain(const Resolution& res_g, const Resolution& res_h,
                         const SubgroupGroup& sub, const GModule& coeff_res,
                         const Cochain& c);

}  // namespace secat
