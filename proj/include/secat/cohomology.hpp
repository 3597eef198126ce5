#pragma once

#include <memory>
#include <optional>

#include "secat/zmodule.hpp"

namespace secat {

// The projective resolution  ... -> ZG(x)K^s -> ... -> ZG(x)K -> ZG -> Z -> 0
// with differential p_s(x (x) y (x) z) = eps(x) i(y) (x) z.
//
// Basis conventions (fixed so every matrix is reproducible bit for bit):
//  - K basis: (g - 1) for g != e, ordered by element index.
//  - K^s basis: s digits over the K basis, leftmost digit most significant,
//    index = ((d_1 (n-1) + d_2)(n-1) + ...).
//  - ZG(x)K^s basis: (x, y) -> x * k_s + y.
class Resolution {
  public:
    Resolution(const FiniteGroup& g, int max_degree, const Limits& lim = {});

    const FiniteGroup& group() const { return *g_; }
    const GModule& kmodule() const { return k_; }
    int max_degree() const { return n_; }

    long kbasis_count(int s) const;          // (|G|-1)^s
    long free_rank(int s) const;             // |G| (|G|-1)^s
    std::vector<int> kbasis_decode(int s, long idx) const;
    long kbasis_encode(const std::vector<int>& digits) const;
    int k_element(int digit) const;          // K-basis digit -> group element
    int k_digit(int element) const;          // group element != e -> digit

    // sparse coordinates of u . (K^s basis idx) in the K^s basis
    SVec kpow_column(int s, int u, long idx) const;

    // p_s : ZG(x)K^s -> ZG(x)K^{s-1} on underlying abelian groups (cached)
    const SMat& differential(int s) const;

    // p_s . p_{s+1} = 0 for all built degrees
    bool boundary_squares_to_zero() const;
    // exactness of the augmented complex in degrees <= max_degree-1 by rank
    // bookkeeping; when check_lattices is set, also verifies ker = im as
    // lattices (heavier)
    bool exact(bool check_lattices = false) const;

  private:
    const FiniteGroup* g_;
    GModule k_;
    int n_;
    mutable std::vector<std::unique_ptr<SMat>> p_;  // index s, 1..n_
};

// A cochain in Hom_ZG(ZG(x)K^deg, A), stored by its values on
// {1_G (x) K^deg basis}: flat index = kbasis_index * rank(A) + coeff index.
struct Cochain {
    int degree = 0;
    const GModule* coeff = nullptr;
    std::vector<Int> values;

    long dim() const { return static_cast<long>(values.size()); }
};

// Cochain complex of the resolution with coefficients in a GModule.
class DRCochains {
  public:
    DRCochains(const Resolution& res, const GModule& a, const Limits& lim = {});

    const Resolution& resolution() const { return *res_; }
    const GModule& coefficients() const { return *a_; }
    long dim(int s) const;

    // d_s : C^s -> C^{s+1} as a sparse matrix (cached)
    const SMat& coboundary(int s) const;
    // streaming evaluation of d_s(c) without materializing the matrix
    std::vector<Int> apply_d(int s, const std::vector<Int>& values) const;

    bool is_cocycle(const Cochain& c) const;

  private:
    const Resolution* res_;
    const GModule* a_;
    Limits lim_;
    mutable std::vector<std::unique_ptr<SMat>> d_;
};

// H = ker(d_cur) / im(d_prev) of a pair of integer matrices with
// d_cur . d_prev = 0. Generators are an integer basis of the kernel lattice;
// classes are presented as Z^k modulo the relation lattice spanned by the
// coordinates of the coboundary image.
class CohomologyGroup {
  public:
    CohomologyGroup(const SMat& d_prev, const SMat& d_cur, int degree);

    int degree() const { return degree_; }
    long ambient_dim() const { return ambient_; }
    int num_gens() const { return static_cast<int>(gens_.size()); }
    const std::vector<SVec>& gen_cocycles() const { return gens_; }

    long free_rank() const { return free_rank_; }
    const std::vector<Int>& torsion() const { return torsion_; }
    bool is_zero() const { return free_rank_ == 0 && torsion_.empty(); }
    // canonical "Z^a + Z/d1 + Z/d2" string
    std::string invariants_str() const;
    // multiset comparison key: (free rank, sorted torsion)
    std::pair<long, std::vector<Int>> invariants() const { return {free_rank_, torsion_}; }

    bool is_cocycle(const std::vector<Int>& v) const;
    bool is_coboundary(const std::vector<Int>& v) const;
    bool same_class(const std::vector<Int>& u, const std::vector<Int>& v) const;

    // coordinates of the class of v in the generators, canonically reduced
    // modulo the relation lattice; throws if v is not a cocycle
    std::vector<Int> class_coords(const std::vector<Int>& v) const;
    // cocycle representing the given generator coordinates
    std::vector<Int> cocycle_from_coords(const std::vector<Int>& coords) const;
    // solve d_prev x = v (integer preimage under the coboundary)
    std::optional<std::vector<Int>> coboundary_preimage(const std::vector<Int>& v) const;

    const std::vector<SVec>& relation_rows() const { return relations_; }
    const LatticeEchelon& relation_lattice() const { return rel_ech_; }

  private:
    int degree_;
    long ambient_;
    std::vector<SVec> gens_;
    LatticeEchelon gen_ech_;   // kernel lattice with coordinate tracking
    std::vector<SVec> relations_;
    LatticeEchelon rel_ech_;
    long free_rank_ = 0;
    std::vector<Int> torsion_;
    std::unique_ptr<ColumnLattice> image_;  // columns of d_prev
    std::unique_ptr<SMat> d_cur_;
};

// H^n(G; A) via the resolution; requires res.max_degree() >= n+1.
CohomologyGroup cohomology(const DRCochains& cx, int n);

// Independent oracle: H^n via inhomogeneous bar cochains Maps(G^n, A).
class BarCochains {
  public:
    BarCochains(const FiniteGroup& g, const GModule& a, const Limits& lim = {});
    long dim(int s) const;  // |G|^s rank(A)
    const SMat& coboundary(int s) const;

  private:
    const FiniteGroup* g_;
    const GModule* a_;
    Limits lim_;
    mutable std::vector<std::unique_ptr<SMat>> d_;
};

CohomologyGroup bar_cohomology(const FiniteGroup& g, const GModule& a, int n,
                               const Limits& lim = {});

}  // namespace secat
