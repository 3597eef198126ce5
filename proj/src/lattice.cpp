#include "secat/lattice.hpp"

namespace secat {

namespace {

// floor division, so remainders land in [0, |b|)
Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

void LatticeEchelon::insert(SVec v) {
    SVec aug;
    if (track_) aug.emplace_back(inserted_, Int(1));
    ++inserted_;

    while (!v.empty()) {
        const int c = v.front().first;
        auto it = pivot_row_.find(c);
        if (it == pivot_row_.end()) {
            if (v.front().second < 0) {
                for (auto& [i, x] : v) x = -x;
                for (auto& [i, x] : aug) x = -x;
            }
            // reduce the tail of v against pivots to its right
            for (auto jt = pivot_row_.upper_bound(c); jt != pivot_row_.end(); ++jt) {
                const Row& r = rows_[jt->second];
                Int a = svec_get(v, r.pivot());
                if (a == 0) continue;
                Int q = -fdiv(a, r.pivot_val());
                svec_axpy(v, q, r.main);
                if (track_) svec_axpy(aug, q, r.aug);
            }
            int at = static_cast<int>(rows_.size());
            rows_.push_back(Row{std::move(v), std::move(aug)});
            pivot_row_[c] = at;
            reduce_column(at);
            return;
        }

        Row& r = rows_[it->second];
        const Int& p = r.pivot_val();
        const Int& a = v.front().second;
        if (a % p == 0) {
            Int q = -(a / p);
            svec_axpy(v, q, r.main);
            if (track_) svec_axpy(aug, q, r.aug);
        } else {
            // 2x2 unimodular gcd step on (row, v)
            Int g, x, y;
            mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), p.get_mpz_t(),
                       a.get_mpz_t());
            Int pr = p / g, ar = a / g;
            SVec new_main = r.main, new_aug = r.aug;
            for (auto& [i, t] : new_main) t *= x;
            for (auto& [i, t] : new_aug) t *= x;
            svec_axpy(new_main, y, v);
            if (track_) svec_axpy(new_aug, y, aug);
            // v <- -ar * row + pr * v  (pivot entry cancels: -ar*p + pr*a = 0)
            SVec old_main = std::move(r.main), old_aug = std::move(r.aug);
            for (auto& [i, t] : v) t *= pr;
            for (auto& [i, t] : aug) t *= pr;
            svec_axpy(v, -ar, old_main);
            if (track_) svec_axpy(aug, -ar, old_aug);
            r.main = std::move(new_main);
            r.aug = std::move(new_aug);
            reduce_column(it->second);
        }
    }
    if (track_ && !aug.empty()) relations_.push_back(std::move(aug));
}

void LatticeEchelon::reduce_column(int at) {
    const Row& r = rows_[at];
    const int c = r.pivot();
    const Int& p = r.pivot_val();
    for (auto it = pivot_row_.begin(); it != pivot_row_.end() && it->first < c; ++it) {
        Row& o = rows_[it->second];
        Int a = svec_get(o.main, c);
        if (a == 0) continue;
        Int q = -fdiv(a, p);
        svec_axpy(o.main, q, r.main);
        if (track_) svec_axpy(o.aug, q, r.aug);
    }
}

SVec LatticeEchelon::reduce(SVec v, std::vector<Int>* combo) const {
    if (combo) combo->assign(inserted_, Int(0));
    SVec residual;
    while (!v.empty()) {
        const int c = v.front().first;
        auto it = pivot_row_.find(c);
        if (it == pivot_row_.end()) {
            residual.push_back(v.front());
            v.erase(v.begin());
            continue;
        }
        const Row& r = rows_[it->second];
        Int q = fdiv(v.front().second, r.pivot_val());
        if (q == 0) {
            residual.push_back(v.front());
            v.erase(v.begin());
            continue;
        }
        svec_axpy(v, -q, r.main);
        if (combo)
            for (const auto& [j, t] : r.aug) (*combo)[j] += q * t;
    }
    svec_normalize(residual);
    return residual;
}

std::vector<SVec> LatticeEchelon::basis() const {
    std::vector<SVec> out;
    out.reserve(rows_.size());
    for (const auto& [c, i] : pivot_row_) out.push_back(rows_[i].main);
    return out;
}

ColumnLattice::ColumnLattice(const SMat& a) : ncols_(a.cols()), ech_(a.rows(), true) {
    SMat t = a.transposed();
    for (int j = 0; j < t.rows(); ++j) {
        SVec col = t.row(j);
        svec_normalize(col);
        ech_.insert(std::move(col));
    }
}

bool ColumnLattice::contains(const std::vector<Int>& b) const {
    return ech_.reduce(svec_from_dense(b)).empty();
}

std::optional<std::vector<Int>> ColumnLattice::solve(const std::vector<Int>& b) const {
    std::vector<Int> combo;
    SVec res = ech_.reduce(svec_from_dense(b), &combo);
    if (!res.empty()) return std::nullopt;
    combo.resize(ncols_);
    return combo;
}

std::vector<SVec> lattice_basis(const std::vector<SVec>& gens, int ncols) {
    LatticeEchelon e(ncols);
    for (const auto& g : gens) {
        SVec v = g;
        svec_normalize(v);
        e.insert(std::move(v));
    }
    return e.basis();
}

bool same_lattice(const std::vector<SVec>& a, const std::vector<SVec>& b, int ncols) {
    return lattice_basis(a, ncols) == lattice_basis(b, ncols);
}

}  // namespace secat
