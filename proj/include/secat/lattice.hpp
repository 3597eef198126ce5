#pragma once

#include <map>
#include <optional>

#include "secat/matrix.hpp"

namespace secat {

// Incremental Hermite echelon basis of an integer lattice spanned by the
// inserted rows. Invariants: one row per pivot column, pivots positive,
// entries of other rows at a pivot column lie in [0, pivot). The row set is
// the canonical HNF basis of the lattice, so two lattices are equal iff the
// row sets coincide.
//
// Each row may carry an augmentation (transform part, column indices >= main
// width) that records the combination of originally inserted vectors making
// up the row; rows whose main part vanished during insertion are collected
// separately as relations.
class LatticeEchelon {
  public:
    explicit LatticeEchelon(int main_cols, bool track = false)
        : main_cols_(main_cols), track_(track) {}

    int main_cols() const { return main_cols_; }
    int rank() const { return static_cast<int>(rows_.size()); }

    // Insert the next generator; aug index = number of prior insertions.
    void insert(SVec v);

    // Reduce v against the echelon using exact integer quotients only.
    // Returns the canonical residual; v is in the lattice iff it is empty.
    // When track construction is on and combo != nullptr, *combo receives
    // coefficients over the original insertion order with
    //   v = sum combo[j] * gen_j + residual.
    SVec reduce(SVec v, std::vector<Int>* combo = nullptr) const;

    bool contains(const SVec& v) const { return reduce(v).empty(); }

    // Canonical HNF rows (main part only), sorted by pivot column.
    std::vector<SVec> basis() const;

    // Relations among the inserted generators (basis of the left kernel);
    // only populated when tracking is on.
    const std::vector<SVec>& relations() const { return relations_; }

    bool operator==(const LatticeEchelon& o) const { return basis() == o.basis(); }

  private:
    struct Row {
        SVec main;
        SVec aug;  // indices into the insertion order
        int pivot() const { return main.front().first; }
        const Int& pivot_val() const { return main.front().second; }
    };

    void reduce_column(int at);  // restore HNF reduction at rows_[at]'s pivot

    int main_cols_;
    bool track_;
    int inserted_ = 0;
    std::vector<Row> rows_;          // sorted by pivot column
    std::map<int, int> pivot_row_;   // pivot column -> index into rows_
    std::vector<SVec> relations_;
};

// The lattice spanned by the columns of a sparse matrix, with enough
// bookkeeping to solve A x = b over the integers and to produce an integer
// basis of ker A.
class ColumnLattice {
  public:
    explicit ColumnLattice(const SMat& a);

    int rank() const { return ech_.rank(); }
    bool contains(const std::vector<Int>& b) const;
    bool contains(const SVec& b) const { return ech_.reduce(b).empty(); }

    // Integer solution of A x = b, if one exists.
    std::optional<std::vector<Int>> solve(const std::vector<Int>& b) const;

    // Basis of {x : A x = 0} as sparse rows of length a.cols().
    const std::vector<SVec>& kernel() const { return ech_.relations(); }

    const LatticeEchelon& echelon() const { return ech_; }

  private:
    int ncols_;
    LatticeEchelon ech_;
};

// HNF basis of the lattice spanned by the given rows.
std::vector<SVec> lattice_basis(const std::vector<SVec>& gens, int ncols);

// Do two generating sets span the same lattice?
bool same_lattice(const std::vector<SVec>& a, const std::vector<SVec>& b, int ncols);

}  // namespace secat
