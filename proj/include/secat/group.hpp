#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "secat/matrix.hpp"

namespace secat {

// Caps for the enumeration-heavy operations; all overridable by callers and
// by CLI flags. Values are configuration, not constants.
struct Limits {
    long max_order = 100000;       // |G^r| cap for power/enumeration ops
    int max_degree = 4;            // resolution degree cap
    long max_cochain_rank = 20000; // per cochain space
};

// A finite group as a validated multiplication table over indices 0..n-1.
// Immutable after construction; all operations on it are pure.
class FiniteGroup {
  public:
    // Validates identity, inverses and associativity (exhaustive for n <= 64,
    // randomized sampling above). Throws invalid_input on failure.
    explicit FiniteGroup(std::vector<std::vector<int>> table, std::string name = "");

    int order() const { return n_; }
    int identity() const { return e_; }
    int mul(int a, int b) const { return table_[a][b]; }
    int inv(int a) const { return inv_[a]; }
    int conj(int x, int g) const { return mul(mul(x, g), inv(x)); }  // x g x^-1
    const std::string& name() const { return name_; }

    int element_order(int g) const;
    bool is_abelian() const;
    std::vector<int> center() const;

    const std::vector<std::vector<int>>& table() const { return table_; }

  private:
    int n_;
    int e_ = -1;
    std::vector<std::vector<int>> table_;
    std::vector<int> inv_;
    std::string name_;
};

class Subgroup {
  public:
    // elems need not be sorted; validated to contain the identity and to be
    // closed under multiplication and inversion.
    Subgroup(const FiniteGroup& g, std::vector<int> elems);

    const FiniteGroup& parent() const { return *g_; }
    int order() const { return static_cast<int>(elems_.size()); }
    const std::vector<int>& elements() const { return elems_; }
    bool contains(int x) const;
    bool is_normal() const;
    bool is_trivial() const { return order() == 1; }

  private:
    const FiniteGroup* g_;
    std::vector<int> elems_;  // sorted
};

// Left cosets of H in G with the left G-action g.(xH) = (gx)H.
// Cosets are sorted by their canonical representative (minimal element
// index); the coset of the identity therefore comes first iff its minimal
// element is globally minimal among representatives.
class CosetSpace {
  public:
    CosetSpace(const FiniteGroup& g, const Subgroup& h);

    const FiniteGroup& group() const { return *g_; }
    const Subgroup& subgroup() const { return *h_; }
    int count() const { return static_cast<int>(reps_.size()); }
    int coset_of(int x) const { return coset_of_[x]; }
    int representative(int c) const { return reps_[c]; }
    int base() const { return base_; }  // index of the coset H itself
    int act(int g, int c) const { return action_[g][c]; }
    const std::vector<int>& coset_elements(int c) const { return members_[c]; }

  private:
    const FiniteGroup* g_;
    const Subgroup* h_;
    std::vector<int> coset_of_;
    std::vector<int> reps_;
    std::vector<std::vector<int>> members_;
    std::vector<std::vector<int>> action_;
    int base_;
};

class GroupHom {
  public:
    // image[i] = image of element i; validated to preserve identity and
    // multiplication.
    GroupHom(const FiniteGroup& src, const FiniteGroup& dst, std::vector<int> image);

    const FiniteGroup& source() const { return *src_; }
    const FiniteGroup& target() const { return *dst_; }
    int operator()(int x) const { return image_[x]; }
    bool is_surjective() const;
    bool is_injective() const;
    std::vector<int> kernel_elements() const;

  private:
    const FiniteGroup* src_;
    const FiniteGroup* dst_;
    std::vector<int> image_;
};

// --- constructors -----------------------------------------------------------

FiniteGroup cyclic_group(int n);
FiniteGroup symmetric_s3();

// Group spec: either an explicit table or permutation generators given in
// cycle notation over points 1..degree (make_group closes under products).
struct GroupSpec {
    std::string kind;  // "table" | "perm"
    std::vector<std::vector<int>> table;
    int degree = 0;
    std::vector<std::vector<std::vector<int>>> generators;  // list of cycle lists
};

FiniteGroup make_group(const GroupSpec& spec, const Limits& lim = {});

// Direct product G1 x G2, elements indexed a*|G2|+b.
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

// G^r with mixed-radix indexing: the tuple (g_1,...,g_r) has index
// sum_i g_i * n^(r-i), i.e. the leftmost coordinate is most significant.
FiniteGroup direct_power(const FiniteGroup& g, int r, const Limits& lim = {});

// decode/encode tuples for direct_power indexing
std::vector<int> power_decode(int idx, int n, int r);
int power_encode(const std::vector<int>& tuple, int n);

// Diagonal subgroup {(g,...,g)} of direct_power(g, r).
Subgroup diagonal_subgroup(const FiniteGroup& g, const FiniteGroup& power, int r);

Subgroup centralizer(const FiniteGroup& g, int x);
Subgroup trivial_subgroup(const FiniteGroup& g);
Subgroup full_subgroup(const FiniteGroup& g);
Subgroup intersect(const Subgroup& a, const Subgroup& b);
Subgroup normalizer(const FiniteGroup& g, const Subgroup& h);

// H ∩ xHx^{-1}
Subgroup conjugate_intersection(const FiniteGroup& g, const Subgroup& h, int x);

// For every x in G^r \ Delta: the intersection Delta ∩ x Delta x^{-1},
// together with the independently computed centralizer description
// {constant tuples over the intersection of C(x_j^{-1} x_i), i != j}.
struct DiagonalConjugate {
    int x;
    std::vector<int> intersection;            // element indices in G^r, sorted
    std::vector<int> centralizer_description; // ditto, from the centralizer side
};
std::vector<DiagonalConjugate> diagonal_conjugate_family(const FiniteGroup& g, int r,
                                                         const Limits& lim = {});

// Quotient G/N for normal N; element c of the quotient is coset c of
// CosetSpace(G, N), so the projection is g -> coset_of(g).
struct QuotientGroup {
    FiniteGroup group;
    std::vector<int> projection;  // G index -> quotient index
};
QuotientGroup quotient_group(const FiniteGroup& g, const Subgroup& n);

// Subgroup H as a standalone group; embedding[i] = parent index of element i.
struct SubgroupGroup {
    FiniteGroup group;
    std::vector<int> embedding;
};
SubgroupGroup subgroup_group(const Subgroup& h);

// The fibered product G x_Q G of a surjection rho with its diagonal, the
// verified product decomposition ((ker rho) x 1) * Delta_G, and the
// isomorphism (g,h) -> (g h^{-1}, h) onto the semidirect product
// ker rho ⋊ G with the conjugation action.
struct PullbackGroup {
    FiniteGroup group;                   // the subgroup G x_Q G of G x G, reindexed
    std::vector<int> into_square;        // element -> index in G x G
    std::vector<int> diagonal_elements;  // Delta_G inside the pullback
    bool product_decomposition_verified; // G x_Q G == (ker x 1) . Delta
    bool semidirect_iso_verified;        // Phi is a bijective homomorphism

    Subgroup diagonal() const { return Subgroup(group, diagonal_elements); }
};
PullbackGroup pullback_group(const GroupHom& rho);

}  // namespace secat
