#pragma once

#include <string>
#include <vector>

#include "secat/group.hpp"
#include "secat/lattice.hpp"
#include "secat/matrix.hpp"
#include "secat/smith.hpp"

namespace secat {

// A finitely generated free abelian group with a G-action by invertible
// integer matrices, stored per group element (groups here are small, lookup
// dominates). Rank 0 is a first-class citizen. Callers own the group and
// must keep it alive and unmoved.
class GModule {
  public:
    GModule(const FiniteGroup& g, int rank, std::vector<SMat> action,
            std::vector<std::string> labels = {}, std::string name = "");

    const FiniteGroup& group() const { return *g_; }
    int rank() const { return rank_; }
    const SMat& action(int g) const { return action_[g]; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& name() const { return name_; }

    std::vector<Int> apply(int g, const std::vector<Int>& v) const { return action_[g].apply(v); }
    SVec apply_sparse(int g, const SVec& v) const;
    // column c of action(g), i.e. the coordinates of g . (basis c)
    SVec action_column(int g, int c) const;

  private:
    const FiniteGroup* g_;
    int rank_;
    std::vector<SMat> action_;
    std::vector<std::string> labels_;
    std::string name_;
};

// Equivariant map of GModules over the same group (checked).
class GMap {
  public:
    GMap(const GModule& src, const GModule& dst, SMat matrix, std::string name = "");

    const GModule& source() const { return *src_; }
    const GModule& target() const { return *dst_; }
    const SMat& matrix() const { return m_; }
    const std::string& name() const { return name_; }
    std::vector<Int> apply(const std::vector<Int>& v) const { return m_.apply(v); }

  private:
    const GModule* src_;
    const GModule* dst_;
    SMat m_;
    std::string name_;
};

GModule trivial_module(const FiniteGroup& g, int rank = 1);

// ZG with the left-regular action.
GModule group_ring(const FiniteGroup& g);
// Augmentation ZG -> Z.
GMap augmentation_eps(const GModule& zg, const GModule& z_triv);
// K = ker(eps), free on (g - 1) for g != e ordered by element index.
GModule augmentation_ideal_k(const FiniteGroup& g);
GMap inclusion_k(const GModule& k, const GModule& zg);

// Z[G/H] with the coset permutation action.
GModule permutation_module(const CosetSpace& cs);
GMap sigma_map(const GModule& zgh, const GModule& z_triv);
// I = ker(sigma), free on (c - base) for cosets c != base ordered by coset index.
GModule ideal_i(const CosetSpace& cs);
GMap inclusion_i(const GModule& i, const GModule& zgh, const CosetSpace& cs);
// mu : K -> I induced by the projection G -> G/H, (g-1) -> (gH - H).
GMap mu_map(const GModule& k, const GModule& i, const CosetSpace& cs);

// M (x) N with the diagonal action; basis (i,j) -> i*rank(N)+j.
GModule tensor_module(const GModule& m, const GModule& n);
// M^{(x)p}; p = 0 gives the rank-1 trivial module.
GModule tensor_power(const GModule& m, int p, const Limits& lim = {});

// Hom_Z(M, N) with (g.f)(m) = g f(g^{-1} m); basis E_{j->i} -> j*rank(N)+i.
GModule hom_module(const GModule& m, const GModule& n, const Limits& lim = {});

// Restriction of scalars along a subgroup (module over the subgroup's
// standalone group, which the caller supplies via subgroup_group).
GModule restrict_module(const GModule& m, const SubgroupGroup& h);
// Pullback along a homomorphism: G acts through pi.
GModule pullback_module(const GroupHom& pi, const GModule& m);

// Integer basis of the fixed submodule M^G.
std::vector<std::vector<Int>> invariants(const GModule& m);

// f_s = i (x) id : I^{s+1} -> Z[G/H] (x) I^s  and
// g_s = sigma (x) id : Z[G/H] (x) I^s -> I^s, the short exact sequence used
// throughout the exact couple. Composition g_s . f_s = 0 and exactness are
// validated by rank arithmetic at construction.
struct ShortExactSeq {
    GMap inj;
    GMap surj;
};
ShortExactSeq ses_check(GMap inj, GMap surj);

}  // namespace secat
