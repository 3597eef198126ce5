#include "secat/smith.hpp"

namespace secat {

namespace {

void swap_rows(Mat& m, int i, int j) {
    if (i == j) return;
    for (int c = 0; c < m.cols(); ++c) std::swap(m(i, c), m(j, c));
}

void swap_cols(Mat& m, int i, int j) {
    if (i == j) return;
    for (int r = 0; r < m.rows(); ++r) std::swap(m(r, i), m(r, j));
}

// row[i] += q * row[j]
void add_row(Mat& m, int i, int j, const Int& q) {
    if (q == 0) return;
    for (int c = 0; c < m.cols(); ++c)
        if (m(j, c) != 0) m(i, c) += q * m(j, c);
}

void add_col(Mat& m, int i, int j, const Int& q) {
    if (q == 0) return;
    for (int r = 0; r < m.rows(); ++r)
        if (m(r, j) != 0) m(r, i) += q * m(r, j);
}

void negate_row(Mat& m, int i) {
    for (int c = 0; c < m.cols(); ++c) m(i, c) = -m(i, c);
}

}  // namespace

// Classical elimination with pivoting by minimal absolute value, which keeps
// coefficient growth tame on the incidence-like matrices produced elsewhere.
SmithDecomposition smith(const Mat& a) {
    SmithDecomposition s;
    s.input = a;
    Mat d = a;
    Mat u = Mat::identity(a.rows());
    Mat v = Mat::identity(a.cols());

    const int n = std::min(a.rows(), a.cols());
    int t = 0;
    for (; t < n; ++t) {
        // locate a pivot of minimal |value| in the trailing block
        int pi = -1, pj = -1;
        Int best;
        for (int i = t; i < d.rows(); ++i)
            for (int j = t; j < d.cols(); ++j) {
                if (d(i, j) == 0) continue;
                Int av = abs(d(i, j));
                if (pi < 0 || av < best) {
                    best = av;
                    pi = i;
                    pj = j;
                    if (best == 1) goto found;
                }
            }
        if (pi < 0) break;  // trailing block is zero
    found:
        swap_rows(d, t, pi);
        swap_rows(u, t, pi);
        swap_cols(d, t, pj);
        swap_cols(v, t, pj);

        for (;;) {
            bool clean = true;
            for (int i = t + 1; i < d.rows(); ++i) {
                if (d(i, t) == 0) continue;
                Int q = -(d(i, t) / d(t, t));
                add_row(d, i, t, q);
                add_row(u, i, t, q);
                if (d(i, t) != 0) {  // remainder became the smaller pivot
                    swap_rows(d, t, i);
                    swap_rows(u, t, i);
                    clean = false;
                }
            }
            for (int j = t + 1; j < d.cols(); ++j) {
                if (d(t, j) == 0) continue;
                Int q = -(d(t, j) / d(t, t));
                add_col(d, j, t, q);
                add_col(v, j, t, q);
                if (d(t, j) != 0) {
                    swap_cols(d, t, j);
                    swap_cols(v, t, j);
                    clean = false;
                }
            }
            if (clean) break;
        }

        if (d(t, t) < 0) {
            negate_row(d, t);
            negate_row(u, t);
        }
    }

    // enforce the divisibility chain d1 | d2 | ... by 2x2 unimodular fixes:
    // diag(a,b) -> diag(gcd, lcm) leaves all other rows/cols untouched.
    for (bool dirty = true; dirty;) {
        dirty = false;
        for (int i = 0; i < t; ++i)
            for (int j = i + 1; j < t; ++j) {
                const Int a_ii = d(i, i), a_jj = d(j, j);
                if (a_jj % a_ii == 0) continue;
                dirty = true;
                Int g, x, y;
                mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a_ii.get_mpz_t(),
                           a_jj.get_mpz_t());
                const Int ai = a_ii / g, aj = a_jj / g;
                // U2 = [[x, y], [-aj, ai]], V2 = [[1, -y*aj], [1, x*ai]]
                for (int c = 0; c < u.cols(); ++c) {
                    Int ui = u(i, c), uj = u(j, c);
                    u(i, c) = x * ui + y * uj;
                    u(j, c) = -aj * ui + ai * uj;
                }
                for (int r = 0; r < v.rows(); ++r) {
                    Int vi = v(r, i), vj = v(r, j);
                    v(r, i) = vi + vj;
                    v(r, j) = -y * aj * vi + x * ai * vj;
                }
                d(i, i) = g;
                d(j, j) = ai * a_jj;
            }
    }

    s.u = std::move(u);
    s.v = std::move(v);
    s.d = std::move(d);
    for (int i = 0; i < t; ++i) s.divisors.push_back(s.d(i, i));
    return s;
}

bool SmithDecomposition::verify() const {
    if (!(u * input * v == d)) return false;
    for (int i = 0; i < d.rows(); ++i)
        for (int j = 0; j < d.cols(); ++j)
            if (i != j && d(i, j) != 0) return false;
    for (size_t i = 0; i + 1 < divisors.size(); ++i)
        if (divisors[i + 1] % divisors[i] != 0) return false;
    for (const auto& x : divisors)
        if (x <= 0) return false;
    return true;
}

int rank_of(const Mat& a) { return smith(a).rank(); }

}  // namespace secat
