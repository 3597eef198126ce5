#include "secat/zmodule.hpp"

#include <random>

namespace secat {

namespace {

bool rows_equal(const SMat& a, const SMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (int i = 0; i < a.rows(); ++i)
        if (a.row(i) != b.row(i)) return false;
    return true;
}

SMat smat_identity(int n) {
    SMat m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

SMat smat_kron(const SMat& a, const SMat& b) {
    SMat c(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (const auto& [k, x] : a.row(i))
            for (int j = 0; j < b.rows(); ++j)
                for (const auto& [l, y] : b.row(j))
                    c.set(i * b.rows() + j, k * b.cols() + l, x * y);
    c.normalize();
    return c;
}

}  // namespace

GModule::GModule(const FiniteGroup& g, int rank, std::vector<SMat> action,
                 std::vector<std::string> labels, std::string name)
    : g_(&g), rank_(rank), action_(std::move(action)), labels_(std::move(labels)),
      name_(std::move(name)) {
    if (static_cast<int>(action_.size()) != g.order())
        throw invalid_input("GModule: need one action matrix per group element");
    for (auto& m : action_) {
        if (m.rows() != rank_ || m.cols() != rank_)
            throw invalid_input("GModule: action matrix has wrong shape");
        m.normalize();
    }
    if (!rows_equal(action_[g.identity()], smat_identity(rank_)))
        throw invalid_input("GModule: identity does not act as the identity matrix");

    // homomorphism property; exhaustive when affordable, sampled otherwise
    const long n = g.order();
    long full_cost = n * n * std::max(1, rank_);
    if (full_cost <= 2'000'000) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                SMat ab = action_[a] * action_[b];
                ab.normalize();
                if (!rows_equal(ab, action_[g.mul(a, b)]))
                    throw invalid_input("GModule: action is not a homomorphism");
            }
    } else {
        std::mt19937_64 rng(0x9a0du);
        std::uniform_int_distribution<int> pick(0, g.order() - 1);
        for (int t = 0; t < 64; ++t) {
            int a = pick(rng), b = pick(rng);
            SMat ab = action_[a] * action_[b];
            ab.normalize();
            if (!rows_equal(ab, action_[g.mul(a, b)]))
                throw invalid_input("GModule: action is not a homomorphism");
        }
    }
}

SVec GModule::apply_sparse(int g, const SVec& v) const {
    SVec out;
    for (const auto& [c, x] : v) svec_axpy(out, x, action_column(g, c));
    return out;
}

SVec GModule::action_column(int g, int c) const {
    SVec col;
    for (int i = 0; i < rank_; ++i) {
        Int x = svec_get(action_[g].row(i), c);
        if (x != 0) col.emplace_back(i, std::move(x));
    }
    return col;
}

GMap::GMap(const GModule& src, const GModule& dst, SMat matrix, std::string name)
    : src_(&src), dst_(&dst), m_(std::move(matrix)), name_(std::move(name)) {
    if (&src.group() != &dst.group())
        throw invalid_input("GMap: source and target live over different groups");
    if (m_.rows() != dst.rank() || m_.cols() != src.rank())
        throw invalid_input("GMap: matrix shape mismatch");
    m_.normalize();
    for (int g = 0; g < src.group().order(); ++g) {
        SMat lhs = m_ * src.action(g);
        SMat rhs = dst.action(g) * m_;
        lhs.normalize();
        rhs.normalize();
        if (!rows_equal(lhs, rhs)) throw invalid_input("GMap: matrix is not equivariant");
    }
}

GModule trivial_module(const FiniteGroup& g, int rank) {
    std::vector<SMat> act(g.order(), smat_identity(rank));
    return GModule(g, rank, std::move(act), {}, "Z^" + std::to_string(rank));
}

GModule group_ring(const FiniteGroup& g) {
    const int n = g.order();
    std::vector<SMat> act(n, SMat(n, n));
    std::vector<std::string> labels(n);
    for (int x = 0; x < n; ++x) {
        for (int h = 0; h < n; ++h) act[x].set(g.mul(x, h), h, 1);
        labels[x] = "g" + std::to_string(x);
    }
    return GModule(g, n, std::move(act), std::move(labels), "ZG");
}

GMap augmentation_eps(const GModule& zg, const GModule& z_triv) {
    SMat m(1, zg.rank());
    for (int j = 0; j < zg.rank(); ++j) m.set(0, j, 1);
    return GMap(zg, z_triv, std::move(m), "eps");
}

namespace {

// K-basis position of g (g != e): elements in index order with e skipped
int k_index(const FiniteGroup& g, int x) { return x < g.identity() ? x : x - 1; }
int k_element(const FiniteGroup& g, int i) { return i < g.identity() ? i : i + 1; }

}  // namespace

GModule augmentation_ideal_k(const FiniteGroup& g) {
    const int n = g.order(), r = n - 1;
    std::vector<SMat> act(n, SMat(r, r));
    std::vector<std::string> labels(r);
    for (int i = 0; i < r; ++i) labels[i] = "g" + std::to_string(k_element(g, i)) + "-1";
    for (int x = 0; x < n; ++x) {
        for (int i = 0; i < r; ++i) {
            int h = k_element(g, i);
            int xh = g.mul(x, h);
            // x.(h-1) = (xh-1) - (x-1)
            if (xh != g.identity()) act[x].add(k_index(g, xh), i, 1);
            if (x != g.identity()) act[x].add(k_index(g, x), i, -1);
        }
        act[x].normalize();
    }
    return GModule(g, r, std::move(act), std::move(labels), "K");
}

GMap inclusion_k(const GModule& k, const GModule& zg) {
    const auto& g = k.group();
    SMat m(zg.rank(), k.rank());
    for (int i = 0; i < k.rank(); ++i) {
        m.set(k_element(g, i), i, 1);
        m.add(g.identity(), i, -1);
    }
    m.normalize();
    return GMap(k, zg, std::move(m), "incl_K");
}

GModule permutation_module(const CosetSpace& cs) {
    const auto& g = cs.group();
    const int c = cs.count();
    std::vector<SMat> act(g.order(), SMat(c, c));
    std::vector<std::string> labels(c);
    for (int i = 0; i < c; ++i) labels[i] = "c" + std::to_string(i);
    for (int x = 0; x < g.order(); ++x)
        for (int i = 0; i < c; ++i) act[x].set(cs.act(x, i), i, 1);
    return GModule(g, c, std::move(act), std::move(labels), "Z[G/H]");
}

GMap sigma_map(const GModule& zgh, const GModule& z_triv) {
    SMat m(1, zgh.rank());
    for (int j = 0; j < zgh.rank(); ++j) m.set(0, j, 1);
    return GMap(zgh, z_triv, std::move(m), "sigma");
}

namespace {

int i_index(const CosetSpace& cs, int c) { return c < cs.base() ? c : c - 1; }
int i_coset(const CosetSpace& cs, int i) { return i < cs.base() ? i : i + 1; }

}  // namespace

GModule ideal_i(const CosetSpace& cs) {
    const auto& g = cs.group();
    const int r = cs.count() - 1;
    std::vector<SMat> act(g.order(), SMat(r, r));
    std::vector<std::string> labels(r);
    for (int i = 0; i < r; ++i) labels[i] = "c" + std::to_string(i_coset(cs, i)) + "-base";
    for (int x = 0; x < g.order(); ++x) {
        for (int i = 0; i < r; ++i) {
            int c = i_coset(cs, i);
            int xc = cs.act(x, c), xb = cs.act(x, cs.base());
            // x.(c - base) = (xc - base) - (x.base - base)
            if (xc != cs.base()) act[x].add(i_index(cs, xc), i, 1);
            if (xb != cs.base()) act[x].add(i_index(cs, xb), i, -1);
        }
        act[x].normalize();
    }
    return GModule(g, r, std::move(act), std::move(labels), "I");
}

GMap inclusion_i(const GModule& i, const GModule& zgh, const CosetSpace& cs) {
    SMat m(zgh.rank(), i.rank());
    for (int j = 0; j < i.rank(); ++j) {
        m.set(i_coset(cs, j), j, 1);
        m.add(cs.base(), j, -1);
    }
    m.normalize();
    return GMap(i, zgh, std::move(m), "incl_I");
}

GMap mu_map(const GModule& k, const GModule& i, const CosetSpace& cs) {
    const auto& g = cs.group();
    SMat m(i.rank(), k.rank());
    for (int j = 0; j < k.rank(); ++j) {
        int h = k_element(g, j);
        int c = cs.coset_of(h);
        // mu(h - 1) = (hH - H); zero when h lies in H
        if (c != cs.base()) m.set(i_index(cs, c), j, 1);
    }
    return GMap(k, i, std::move(m), "mu");
}

GModule tensor_module(const GModule& m, const GModule& n) {
    if (&m.group() != &n.group()) throw invalid_input("tensor_module: different groups");
    const auto& g = m.group();
    std::vector<SMat> act;
    act.reserve(g.order());
    for (int x = 0; x < g.order(); ++x) act.push_back(smat_kron(m.action(x), n.action(x)));
    return GModule(g, m.rank() * n.rank(), std::move(act), {},
                   m.name() + "(x)" + n.name());
}

GModule tensor_power(const GModule& m, int p, const Limits& lim) {
    if (p < 0) throw invalid_input("tensor_power: negative power");
    double sz = 1;
    for (int i = 0; i < p; ++i) {
        sz *= std::max(1, m.rank());
        if (sz > static_cast<double>(lim.max_cochain_rank) * 64)
            throw cap_exceeded("tensor_power: rank cap exceeded");
    }
    GModule out = trivial_module(m.group(), 1);
    for (int i = 0; i < p; ++i) out = tensor_module(out, m);
    return out;
}

GModule hom_module(const GModule& m, const GModule& n, const Limits& lim) {
    if (&m.group() != &n.group()) throw invalid_input("hom_module: different groups");
    const auto& g = m.group();
    const long r = static_cast<long>(m.rank()) * n.rank();
    if (r > lim.max_cochain_rank * 64L) throw cap_exceeded("hom_module: rank cap exceeded");
    std::vector<SMat> act;
    act.reserve(g.order());
    for (int x = 0; x < g.order(); ++x) {
        // (g.f) = act_N(g) . F . act_M(g^-1); with basis E_{j->i} at j*rank(N)+i
        // this is kron(act_M(g^-1)^T, act_N(g))
        act.push_back(smat_kron(m.action(g.inv(x)).transposed(), n.action(x)));
    }
    return GModule(g, static_cast<int>(r), std::move(act), {},
                   "Hom(" + m.name() + "," + n.name() + ")");
}

GModule restrict_module(const GModule& m, const SubgroupGroup& h) {
    std::vector<SMat> act;
    act.reserve(h.group.order());
    for (int i = 0; i < h.group.order(); ++i) act.push_back(m.action(h.embedding[i]));
    return GModule(h.group, m.rank(), std::move(act), m.labels(), "res(" + m.name() + ")");
}

GModule pullback_module(const GroupHom& pi, const GModule& m) {
    if (&pi.target() != &m.group()) throw invalid_input("pullback_module: group mismatch");
    std::vector<SMat> act;
    act.reserve(pi.source().order());
    for (int x = 0; x < pi.source().order(); ++x) act.push_back(m.action(pi(x)));
    return GModule(pi.source(), m.rank(), std::move(act), m.labels(), "pi*" + m.name());
}

std::vector<std::vector<Int>> invariants(const GModule& m) {
    const auto& g = m.group();
    if (m.rank() == 0) return {};
    SMat stacked(g.order() * m.rank(), m.rank());
    for (int x = 0; x < g.order(); ++x) {
        for (int i = 0; i < m.rank(); ++i) {
            for (const auto& [j, v] : m.action(x).row(i)) stacked.add(x * m.rank() + i, j, v);
            stacked.add(x * m.rank() + i, i, -1);
        }
    }
    stacked.normalize();
    ColumnLattice cl(stacked);
    std::vector<std::vector<Int>> out;
    for (const auto& k : cl.kernel()) out.push_back(svec_to_dense(k, m.rank()));
    return out;
}

ShortExactSeq ses_check(GMap inj, GMap surj) {
    if (&inj.target() != &surj.source()) throw invalid_input("ses: maps do not compose");
    SMat comp = surj.matrix() * inj.matrix();
    comp.normalize();
    if (!comp.is_zero()) throw invalid_input("ses: surj . inj != 0");
    ColumnLattice li(inj.matrix());
    if (li.rank() != inj.source().rank()) throw invalid_input("ses: inj not injective");
    ColumnLattice ls(surj.matrix());
    for (int t = 0; t < surj.target().rank(); ++t) {
        std::vector<Int> e(surj.target().rank());
        e[t] = 1;
        if (!ls.contains(e)) throw invalid_input("ses: surj not onto over Z");
    }
    if (inj.source().rank() + surj.target().rank() != inj.target().rank())
        throw invalid_input("ses: ranks do not add up");
    return ShortExactSeq{std::move(inj), std::move(surj)};
}

}  // namespace secat
