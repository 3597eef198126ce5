#include "secat/cohomology.hpp"

#include "secat/smith.hpp"

namespace secat {

DRCochains::DRCochains(const Resolution& res, const GModule& a, const Limits& lim)
    : res_(&res), a_(&a), lim_(lim) {
    if (&res.group() != &a.group()) throw invalid_input("cochains: group mismatch");
    d_.resize(static_cast<size_t>(res.max_degree()) + 1);
}

long DRCochains::dim(int s) const { return res_->kbasis_count(s) * a_->rank(); }

const SMat& DRCochains::coboundary(int s) const {
    if (s < 0 || s + 1 > res_->max_degree())
        throw invalid_input("cochains: coboundary degree out of range");
    if (d_[s]) return *d_[s];
    if (dim(s) > lim_.max_cochain_rank || dim(s + 1) > 64L * lim_.max_cochain_rank)
        throw cap_exceeded("cochains: cochain rank cap exceeded at degree " + std::to_string(s));

    const auto& g = res_->group();
    const auto& a = *a_;
    const int ma = a.rank();
    const long ks = res_->kbasis_count(s);
    auto m = std::make_unique<SMat>(static_cast<int>(dim(s + 1)), static_cast<int>(dim(s)));
    // (dc)[(h-1)(x)z] = act_A(h) c[h^{-1}.z] - c[z]
    for (int hd = 0; hd < g.order() - 1; ++hd) {
        const int h = res_->k_element(hd);
        const int hinv = g.inv(h);
        const SMat& ah = a.action(h);
        for (long z = 0; z < ks; ++z) {
            const long rowbase = (static_cast<long>(hd) * ks + z) * ma;
            SVec colk = res_->kpow_column(s, hinv, z);
            for (const auto& [zp, alpha] : colk) {
                for (int i = 0; i < ma; ++i)
                    for (const auto& [j, v] : ah.row(i))
                        m->add(static_cast<int>(rowbase + i),
                               static_cast<int>(static_cast<long>(zp) * ma + j), alpha * v);
            }
            for (int i = 0; i < ma; ++i)
                m->add(static_cast<int>(rowbase + i), static_cast<int>(z * ma + i), -1);
        }
    }
    m->normalize();
    d_[s] = std::move(m);
    return *d_[s];
}

std::vector<Int> DRCochains::apply_d(int s, const std::vector<Int>& values) const {
    if (static_cast<long>(values.size()) != dim(s))
        throw invalid_input("cochains: value vector has wrong length");
    const auto& g = res_->group();
    const auto& a = *a_;
    const int ma = a.rank();
    const long ks = res_->kbasis_count(s);
    std::vector<Int> out(dim(s + 1));
    for (int hd = 0; hd < g.order() - 1; ++hd) {
        const int h = res_->k_element(hd);
        const int hinv = g.inv(h);
        for (long z = 0; z < ks; ++z) {
            const long rowbase = (static_cast<long>(hd) * ks + z) * ma;
            SVec colk = res_->kpow_column(s, hinv, z);
            std::vector<Int> acc(ma);
            for (const auto& [zp, alpha] : colk)
                for (int i = 0; i < ma; ++i)
                    if (values[static_cast<long>(zp) * ma + i] != 0)
                        acc[i] += alpha * values[static_cast<long>(zp) * ma + i];
            std::vector<Int> rotated = a.apply(h, acc);
            for (int i = 0; i < ma; ++i) out[rowbase + i] = rotated[i] - values[z * ma + i];
        }
    }
    return out;
}

bool DRCochains::is_cocycle(const Cochain& c) const {
    auto img = apply_d(c.degree, c.values);
    for (const auto& x : img)
        if (x != 0) return false;
    return true;
}

CohomologyGroup::CohomologyGroup(const SMat& d_prev, const SMat& d_cur, int degree)
    : degree_(degree), ambient_(d_cur.cols()), gen_ech_(d_cur.cols(), true),
      rel_ech_(0 /*set below*/) {
    if (d_prev.rows() != d_cur.cols())
        throw invalid_input("cohomology: complex dimensions do not match");
    ColumnLattice cur(d_cur);
    gens_ = cur.kernel();
    for (const auto& gvec : gens_) gen_ech_.insert(gvec);
    rel_ech_ = LatticeEchelon(static_cast<int>(gens_.size()));

    image_ = std::make_unique<ColumnLattice>(d_prev);
    d_cur_ = std::make_unique<SMat>(d_cur);

    // express each coboundary generator in kernel coordinates
    SMat t = d_prev.transposed();
    for (int j = 0; j < t.rows(); ++j) {
        SVec col = t.row(j);
        svec_normalize(col);
        if (col.empty()) continue;
        std::vector<Int> combo;
        SVec res = gen_ech_.reduce(col, &combo);
        if (!res.empty())
            throw invalid_input("cohomology: image is not contained in the kernel");
        SVec row = svec_from_dense(combo);
        if (!row.empty()) {
            relations_.push_back(row);
            rel_ech_.insert(std::move(row));
        }
    }

    // invariant factors of Z^k / relations
    const int k = static_cast<int>(gens_.size());
    auto rel_basis = rel_ech_.basis();
    Mat r(static_cast<int>(rel_basis.size()), k);
    for (int i = 0; i < static_cast<int>(rel_basis.size()); ++i)
        for (const auto& [j, v] : rel_basis[i]) r(i, j) = v;
    SmithDecomposition sd = smith(r);
    free_rank_ = k - sd.rank();
    for (const auto& d : sd.divisors)
        if (d > 1) torsion_.push_back(d);
}

std::string CohomologyGroup::invariants_str() const {
    if (is_zero()) return "0";
    std::string s;
    if (free_rank_ > 0) {
        s = free_rank_ == 1 ? "Z" : "Z^" + std::to_string(free_rank_);
    }
    for (const auto& d : torsion_) {
        if (!s.empty()) s += " + ";
        s += "Z/" + d.get_str();
    }
    return s;
}

bool CohomologyGroup::is_cocycle(const std::vector<Int>& v) const {
    auto img = d_cur_->apply(v);
    for (const auto& x : img)
        if (x != 0) return false;
    return true;
}

bool CohomologyGroup::is_coboundary(const std::vector<Int>& v) const {
    return image_->contains(v);
}

bool CohomologyGroup::same_class(const std::vector<Int>& u, const std::vector<Int>& v) const {
    if (u.size() != v.size()) throw invalid_input("same_class: length mismatch");
    std::vector<Int> diff(u.size());
    for (size_t i = 0; i < u.size(); ++i) diff[i] = u[i] - v[i];
    return is_coboundary(diff);
}

std::vector<Int> CohomologyGroup::class_coords(const std::vector<Int>& v) const {
    if (!is_cocycle(v)) throw invalid_input("class_coords: not a cocycle");
    std::vector<Int> combo;
    SVec res = gen_ech_.reduce(svec_from_dense(v), &combo);
    if (!res.empty()) throw invalid_input("class_coords: cocycle outside kernel lattice");
    SVec canon = rel_ech_.reduce(svec_from_dense(combo));
    return svec_to_dense(canon, num_gens());
}

std::vector<Int> CohomologyGroup::cocycle_from_coords(const std::vector<Int>& coords) const {
    std::vector<Int> out(ambient_);
    for (int i = 0; i < num_gens(); ++i) {
        if (coords[i] == 0) continue;
        for (const auto& [j, v] : gens_[i]) out[j] += coords[i] * v;
    }
    return out;
}

std::optional<std::vector<Int>> CohomologyGroup::coboundary_preimage(
    const std::vector<Int>& v) const {
    return image_->solve(v);
}

CohomologyGroup cohomology(const DRCochains& cx, int n) {
    if (n == 0) {
        SMat zero(0, static_cast<int>(cx.dim(0)));
        return CohomologyGroup(zero.transposed(), cx.coboundary(0), 0);
    }
    return CohomologyGroup(cx.coboundary(n - 1), cx.coboundary(n), n);
}

BarCochains::BarCochains(const FiniteGroup& g, const GModule& a, const Limits& lim)
    : g_(&g), a_(&a), lim_(lim) {
    d_.resize(16);
}

long BarCochains::dim(int s) const {
    long c = a_->rank();
    for (int i = 0; i < s; ++i) c *= g_->order();
    return c;
}

const SMat& BarCochains::coboundary(int s) const {
    if (s < 0 || s >= static_cast<int>(d_.size()))
        throw invalid_input("bar: degree out of range");
    if (d_[s]) return *d_[s];
    if (dim(s) > lim_.max_cochain_rank || dim(s + 1) > 64L * lim_.max_cochain_rank)
        throw cap_exceeded("bar: cochain rank cap exceeded at degree " + std::to_string(s));

    const auto& g = *g_;
    const int n = g.order(), ma = a_->rank();
    const long rows_tuples = dim(s + 1) / ma, cols_tuples = dim(s) / ma;
    auto m = std::make_unique<SMat>(static_cast<int>(dim(s + 1)), static_cast<int>(dim(s)));

    std::vector<int> tup(s + 1);
    for (long rt = 0; rt < rows_tuples; ++rt) {
        long x = rt;
        for (int i = s; i >= 0; --i) {
            tup[i] = static_cast<int>(x % n);
            x /= n;
        }
        // (df)(g1..g_{s+1}) = g1 f(g2..) + sum_i (-1)^i f(.. g_i g_{i+1} ..)
        //                     + (-1)^{s+1} f(g1..g_s)
        long col_tail = 0;
        for (int i = 1; i <= s; ++i) col_tail = col_tail * n + tup[i];
        const SMat& a1 = a_->action(tup[0]);
        for (int i = 0; i < ma; ++i)
            for (const auto& [j, v] : a1.row(i))
                m->add(static_cast<int>(rt * ma + i), static_cast<int>(col_tail * ma + j), v);

        int sign = -1;
        for (int i = 1; i <= s; ++i) {
            long col = 0;
            for (int t = 0; t <= s; ++t) {
                if (t == i - 1) {
                    col = col * n + g.mul(tup[t], tup[t + 1]);
                    ++t;  // consumed two entries
                } else {
                    col = col * n + tup[t];
                }
            }
            for (int q = 0; q < ma; ++q)
                m->add(static_cast<int>(rt * ma + q), static_cast<int>(col * ma + q), sign);
            sign = -sign;
        }
        long col_head = 0;
        for (int i = 0; i < s; ++i) col_head = col_head * n + tup[i];
        for (int q = 0; q < ma; ++q)
            m->add(static_cast<int>(rt * ma + q), static_cast<int>(col_head * ma + q), sign);
        (void)cols_tuples;
    }
    m->normalize();
    d_[s] = std::move(m);
    return *d_[s];
}

CohomologyGroup bar_cohomology(const FiniteGroup& g, const GModule& a, int n,
                               const Limits& lim) {
    BarCochains bc(g, a, lim);
    if (n == 0) {
        SMat zero(0, static_cast<int>(bc.dim(0)));
        return CohomologyGroup(zero.transposed(), bc.coboundary(0), 0);
    }
    return CohomologyGroup(bc.coboundary(n - 1), bc.coboundary(n), n);
}

}  // namespace secat
