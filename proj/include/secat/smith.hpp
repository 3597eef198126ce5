#pragma once

#include "secat/matrix.hpp"

namespace secat {

// U*A*V = D with U,V unimodular and D diagonal, d1 | d2 | ... | dr, di > 0.
struct SmithDecomposition {
    Mat input;
    Mat u, v, d;
    std::vector<Int> divisors;  // nonzero diagonal entries, divisibility chain
    int rank() const { return static_cast<int>(divisors.size()); }
    bool verify() const;
};

SmithDecomposition smith(const Mat& a);

// Convenience: rank over Z (= rank over Q) of a dense matrix.
int rank_of(const Mat& a);

}  // namespace secat
