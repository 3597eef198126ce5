#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace secat {

// All exact arithmetic runs over arbitrary-precision integers.
using Int = mpz_class;

struct cap_exceeded : std::runtime_error {
    explicit cap_exceeded(const std::string& what) : std::runtime_error(what) {}
};

struct invalid_input : std::runtime_error {
    explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

// Dense integer matrix, row-major. Used for module actions on small ranks,
// Smith decompositions and golden serialization; the cochain-scale solvers
// live in lattice.hpp and work on sparse rows.
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static Mat zero(int rows, int cols) { return Mat(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Int& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (x != 0) return false;
        return true;
    }

    Mat transposed() const {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw invalid_input("Mat multiply: shape mismatch");
        Mat c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const Int& aik = a(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < b.cols_; ++j)
                    if (b(k, j) != 0) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Mat operator+(const Mat& a, const Mat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw invalid_input("Mat add: shape mismatch");
        Mat c(a.rows_, a.cols_);
        for (size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = a.a_[i] + b.a_[i];
        return c;
    }

    friend Mat operator-(const Mat& a, const Mat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw invalid_input("Mat sub: shape mismatch");
        Mat c(a.rows_, a.cols_);
        for (size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = a.a_[i] - b.a_[i];
        return c;
    }

    std::vector<Int> apply(const std::vector<Int>& v) const {
        if (static_cast<int>(v.size()) != cols_) throw invalid_input("Mat apply: shape mismatch");
        std::vector<Int> out(rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0 && v[j] != 0) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    // Kronecker product; kron(A,B)[i*rB+j][k*cB+l] = A[i][k]*B[j][l].
    friend Mat kron(const Mat& a, const Mat& b) {
        Mat c(a.rows_ * b.rows_, a.cols_ * b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const Int& aik = a(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < b.rows_; ++j)
                    for (int l = 0; l < b.cols_; ++l)
                        if (b(j, l) != 0) c(i * b.rows_ + j, k * b.cols_ + l) = aik * b(j, l);
            }
        return c;
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

// Sparse integer vector: (index, value) pairs sorted by index, values nonzero.
using SVec = std::vector<std::pair<int, Int>>;

inline void svec_normalize(SVec& v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SVec out;
    out.reserve(v.size());
    for (auto& [i, x] : v) {
        if (!out.empty() && out.back().first == i)
            out.back().second += x;
        else
            out.emplace_back(i, x);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& p) { return p.second == 0; }),
              out.end());
    v = std::move(out);
}

// v += c*w, both sorted.
inline void svec_axpy(SVec& v, const Int& c, const SVec& w) {
    if (c == 0 || w.empty()) return;
    SVec out;
    out.reserve(v.size() + w.size());
    size_t i = 0, j = 0;
    while (i < v.size() || j < w.size()) {
        if (j == w.size() || (i < v.size() && v[i].first < w[j].first)) {
            out.push_back(v[i++]);
        } else if (i == v.size() || w[j].first < v[i].first) {
            out.emplace_back(w[j].first, c * w[j].second);
            if (out.back().second == 0) out.pop_back();
            ++j;
        } else {
            Int x = v[i].second + c * w[j].second;
            if (x != 0) out.emplace_back(v[i].first, std::move(x));
            ++i, ++j;
        }
    }
    v = std::move(out);
}

inline Int svec_get(const SVec& v, int idx) {
    auto it = std::lower_bound(v.begin(), v.end(), idx,
                               [](const auto& p, int k) { return p.first < k; });
    if (it != v.end() && it->first == idx) return it->second;
    return 0;
}

inline SVec svec_from_dense(const std::vector<Int>& v) {
    SVec out;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (v[i] != 0) out.emplace_back(i, v[i]);
    return out;
}

inline std::vector<Int> svec_to_dense(const SVec& v, int n) {
    std::vector<Int> out(n);
    for (auto& [i, x] : v) out[i] = x;
    return out;
}

// Sparse matrix stored by rows. Rows may be appended; shape fixed at creation.
class SMat {
  public:
    SMat() = default;
    SMat(int rows, int cols) : cols_(cols), row_(rows) {}

    int rows() const { return static_cast<int>(row_.size()); }
    int cols() const { return cols_; }

    SVec& row(int i) { return row_[i]; }
    const SVec& row(int i) const { return row_[i]; }

    void set(int i, int j, Int v) {
        if (v == 0) return;
        row_[i].emplace_back(j, std::move(v));
    }
    void add(int i, int j, const Int& v) {
        if (v == 0) return;
        row_[i].emplace_back(j, v);
    }
    void normalize() {
        for (auto& r : row_) svec_normalize(r);
    }

    size_t nnz() const {
        size_t n = 0;
        for (const auto& r : row_) n += r.size();
        return n;
    }

    bool is_zero() const {
        for (const auto& r : row_)
            if (!r.empty()) return false;
        return true;
    }

    std::vector<Int> apply(const std::vector<Int>& v) const {
        std::vector<Int> out(rows());
        for (int i = 0; i < rows(); ++i)
            for (const auto& [j, x] : row_[i])
                if (v[j] != 0) out[i] += x * v[j];
        return out;
    }

    SMat transposed() const {
        SMat t(cols_, rows());
        for (int i = 0; i < rows(); ++i)
            for (const auto& [j, x] : row_[i]) t.row_[j].emplace_back(i, x);
        return t;
    }

    Mat dense() const {
        Mat d(rows(), cols_);
        for (int i = 0; i < rows(); ++i)
            for (const auto& [j, x] : row_[i]) d(i, j) = x;
        return d;
    }

    static SMat from_dense(const Mat& m) {
        SMat s(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                if (m(i, j) != 0) s.set(i, j, m(i, j));
        return s;
    }

    friend SMat operator*(const SMat& a, const SMat& b) {
        if (a.cols() != b.rows()) throw invalid_input("SMat multiply: shape mismatch");
        SMat c(a.rows(), b.cols());
        for (int i = 0; i < a.rows(); ++i) {
            SVec acc;
            for (const auto& [k, x] : a.row_[i]) svec_axpy(acc, x, b.row_[k]);
            c.row_[i] = std::move(acc);
        }
        return c;
    }

  private:
    int cols_ = 0;
    std::vector<SVec> row_;
};

}  // namespace secat
