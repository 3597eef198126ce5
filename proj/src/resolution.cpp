#include "secat/cohomology.hpp"

namespace secat {

Resolution::Resolution(const FiniteGroup& g, int max_degree, const Limits& lim)
    : g_(&g), k_(augmentation_ideal_k(g)), n_(max_degree) {
    if (max_degree < 0) throw invalid_input("resolution: negative degree");
    double rank = g.order();
    for (int s = 1; s <= max_degree; ++s) {
        rank *= std::max(1, g.order() - 1);
        if (rank > 64.0 * lim.max_cochain_rank * g.order())
            throw cap_exceeded("resolution: free rank cap exceeded at degree " +
                               std::to_string(s));
    }
    p_.resize(static_cast<size_t>(n_) + 1);
}

long Resolution::kbasis_count(int s) const {
    long c = 1;
    for (int i = 0; i < s; ++i) c *= g_->order() - 1;
    return c;
}

long Resolution::free_rank(int s) const { return g_->order() * kbasis_count(s); }

std::vector<int> Resolution::kbasis_decode(int s, long idx) const {
    const int base = g_->order() - 1;
    std::vector<int> d(s);
    for (int i = s - 1; i >= 0; --i) {
        d[i] = static_cast<int>(idx % base);
        idx /= base;
    }
    return d;
}

long Resolution::kbasis_encode(const std::vector<int>& digits) const {
    const int base = g_->order() - 1;
    long idx = 0;
    for (int d : digits) idx = idx * base + d;
    return idx;
}

int Resolution::k_element(int digit) const {
    return digit < g_->identity() ? digit : digit + 1;
}

int Resolution::k_digit(int element) const {
    return element < g_->identity() ? element : element - 1;
}

SVec Resolution::kpow_column(int s, int u, long idx) const {
    auto digits = kbasis_decode(s, idx);
    // expand the tensor product of the per-factor action columns
    std::vector<std::pair<long, Int>> partial{{0, Int(1)}};
    const int base = g_->order() - 1;
    for (int d : digits) {
        SVec col = k_.action_column(u, d);
        std::vector<std::pair<long, Int>> next;
        next.reserve(partial.size() * col.size());
        for (const auto& [ip, c] : partial)
            for (const auto& [j, v] : col) next.emplace_back(ip * base + j, c * v);
        partial = std::move(next);
    }
    SVec out;
    out.reserve(partial.size());
    for (auto& [i, c] : partial) out.emplace_back(static_cast<int>(i), std::move(c));
    svec_normalize(out);
    return out;
}

const SMat& Resolution::differential(int s) const {
    if (s < 1 || s > n_) throw invalid_input("resolution: differential degree out of range");
    if (p_[s]) return *p_[s];
    const int n = g_->order();
    const long ks = kbasis_count(s), ksm = kbasis_count(s - 1);
    auto m = std::make_unique<SMat>(static_cast<int>(n * ksm), static_cast<int>(n * ks));
    // column (x, y (x) z) with y = (h-1): rows (h, z) +1 and (e, z) -1,
    // independently of x since eps(x) = 1 on basis elements
    for (int x = 0; x < n; ++x)
        for (long y = 0; y < ks; ++y) {
            const long col = x * ks + y;
            const int h = k_element(static_cast<int>(y / ksm));
            const long z = y % ksm;
            m->add(static_cast<int>(h * ksm + z), static_cast<int>(col), 1);
            m->add(static_cast<int>(g_->identity() * ksm + z), static_cast<int>(col), -1);
        }
    m->normalize();
    p_[s] = std::move(m);
    return *p_[s];
}

bool Resolution::boundary_squares_to_zero() const {
    for (int s = 1; s + 1 <= n_; ++s) {
        SMat prod = differential(s) * differential(s + 1);
        prod.normalize();
        if (!prod.is_zero()) return false;
    }
    // eps . p_1 = 0: every column of p_1 has coefficient sum zero
    if (n_ >= 1) {
        const SMat& p1 = differential(1);
        std::vector<Int> colsum(p1.cols());
        for (int i = 0; i < p1.rows(); ++i)
            for (const auto& [j, v] : p1.row(i)) colsum[j] += v;
        for (const auto& v : colsum)
            if (v != 0) return false;
    }
    return true;
}

bool Resolution::exact(bool check_lattices) const {
    // augmented complex: ZG -> Z is onto with kernel of rank |G|-1
    const int n = g_->order();
    std::vector<int> ranks(n_ + 1);  // rank of p_s
    std::vector<std::unique_ptr<ColumnLattice>> lat(n_ + 1);
    for (int s = 1; s <= n_; ++s) {
        lat[s] = std::make_unique<ColumnLattice>(differential(s));
        ranks[s] = lat[s]->rank();
    }
    // exactness at degree 0: rank p_1 = nullity(eps) = |G| - 1
    if (n_ >= 1 && ranks[1] != n - 1) return false;
    // exactness at degree s (1 <= s <= n_-1): rank p_{s+1} = nullity p_s
    for (int s = 1; s + 1 <= n_; ++s) {
        long nullity = free_rank(s) - ranks[s];
        if (ranks[s + 1] != nullity) return false;
    }
    if (check_lattices) {
        for (int s = 1; s + 1 <= n_; ++s) {
            // im p_{s+1} = ker p_s as lattices
            const auto& ker = lat[s]->kernel();
            std::vector<SVec> im;
            SMat t = differential(s + 1).transposed();
            for (int j = 0; j < t.rows(); ++j) {
                SVec c = t.row(j);
                svec_normalize(c);
                im.push_back(std::move(c));
            }
            if (!same_lattice(ker, im, static_cast<int>(free_rank(s)))) return false;
        }
        if (n_ >= 1) {
            // im p_1 = ker eps
            std::vector<SVec> im;
            SMat t = differential(1).transposed();
            for (int j = 0; j < t.rows(); ++j) {
                SVec c = t.row(j);
                svec_normalize(c);
                im.push_back(std::move(c));
            }
            SMat eps(1, n);
            for (int x = 0; x < n; ++x) eps.set(0, x, 1);
            ColumnLattice le(eps);
            if (!same_lattice(le.kernel(), im, n)) return false;
        }
    }
    return true;
}

}  // namespace secat
