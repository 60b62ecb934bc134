#include "biocnlf/linalg.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <Eigen/UmfPackSupport>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace biocnlf {

CsrMatrix::CsrMatrix(int nrows, int ncols, std::vector<int> row_ptr, std::vector<int> col_idx, std::vector<double> values)
    : nrows_(nrows), ncols_(ncols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values))
{
    if (nrows_ < 0 || ncols_ < 0 || row_ptr_.size() != static_cast<std::size_t>(nrows_) + 1 || row_ptr_.front() != 0 ||
        col_idx_.size() != values_.size() || static_cast<std::size_t>(row_ptr_.back()) != values_.size()) {
        throw Error("CsrMatrix: inconsistent arrays");
    }
    for (int i = 0; i < nrows_; ++i) {
        const int b = row_ptr_[static_cast<std::size_t>(i)];
        const int e = row_ptr_[static_cast<std::size_t>(i) + 1];
        if (e < b) {
            throw Error("CsrMatrix: row_ptr not monotone at row " + std::to_string(i));
        }
        for (int p = b; p < e; ++p) {
            const int c = col_idx_[static_cast<std::size_t>(p)];
            if (c < 0 || c >= ncols_ || (p > b && c <= col_idx_[static_cast<std::size_t>(p) - 1])) {
                throw Error("CsrMatrix: column indices not strictly increasing in row " + std::to_string(i));
            }
        }
    }
}

std::ptrdiff_t CsrMatrix::find(int i, int j) const
{
    if (i < 0 || i >= nrows_) {
        return -1;
    }
    const auto b = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i)];
    const auto e = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
    const auto it = std::lower_bound(b, e, j);
    if (it == e || *it != j) {
        return -1;
    }
    return it - col_idx_.begin();
}

double CsrMatrix::at(int i, int j) const
{
    const auto p = find(i, j);
    return p < 0 ? 0.0 : values_[static_cast<std::size_t>(p)];
}

CsrMatrix CsrMatrix::transpose() const
{
    std::vector<int> rp(static_cast<std::size_t>(ncols_) + 1, 0);
    for (int c : col_idx_) {
        ++rp[static_cast<std::size_t>(c) + 1];
    }
    std::partial_sum(rp.begin(), rp.end(), rp.begin());
    std::vector<int> ci(col_idx_.size());
    std::vector<double> v(values_.size());
    std::vector<int> next(rp.begin(), rp.end() - 1);
    // Rows are visited in increasing order, so columns of the transpose come out sorted.
    for (int i = 0; i < nrows_; ++i) {
        for (int p = row_ptr_[static_cast<std::size_t>(i)]; p < row_ptr_[static_cast<std::size_t>(i) + 1]; ++p) {
            const auto c = static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(p)]);
            const auto q = static_cast<std::size_t>(next[c]++);
            ci[q] = i;
            v[q] = values_[static_cast<std::size_t>(p)];
        }
    }
    return CsrMatrix(ncols_, nrows_, std::move(rp), std::move(ci), std::move(v));
}

double CsrMatrix::max_abs() const noexcept
{
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool CsrMatrix::same_pattern(const CsrMatrix& o) const noexcept
{
    return nrows_ == o.nrows_ && ncols_ == o.ncols_ && row_ptr_ == o.row_ptr_ && col_idx_ == o.col_idx_;
}

void CooBuilder::add_block(const CsrMatrix& m, int row_off, int col_off, double scale)
{
    triplets_.reserve(triplets_.size() + m.nnz());
    for (int i = 0; i < m.rows(); ++i) {
        for (int p = m.row_ptr()[static_cast<std::size_t>(i)]; p < m.row_ptr()[static_cast<std::size_t>(i) + 1]; ++p) {
            triplets_.push_back({i + row_off, m.col_idx()[static_cast<std::size_t>(p)] + col_off,
                                 scale * m.values()[static_cast<std::size_t>(p)]});
        }
    }
}

void CooBuilder::merge(const CooBuilder& other)
{
    if (other.nrows_ != nrows_ || other.ncols_ != ncols_) {
        throw Error("CooBuilder::merge: shape mismatch");
    }
    triplets_.insert(triplets_.end(), other.triplets_.begin(), other.triplets_.end());
}

CsrMatrix CooBuilder::finalize() const
{
    for (const auto& t : triplets_) {
        if (t.row < 0 || t.row >= nrows_ || t.col < 0 || t.col >= ncols_) {
            std::ostringstream msg;
            msg << "CooBuilder: entry (" << t.row << ", " << t.col << ") out of range for " << nrows_ << "x" << ncols_;
            throw Error(msg.str());
        }
    }
    // Bucket by row, then sort each row by (col, value). Sorting on the value
    // too fixes the summation order of duplicates.
    std::vector<int> count(static_cast<std::size_t>(nrows_) + 1, 0);
    for (const auto& t : triplets_) {
        ++count[static_cast<std::size_t>(t.row) + 1];
    }
    std::partial_sum(count.begin(), count.end(), count.begin());
    std::vector<std::pair<int, double>> entries(triplets_.size());
    {
        std::vector<int> next(count.begin(), count.end() - 1);
        for (const auto& t : triplets_) {
            entries[static_cast<std::size_t>(next[static_cast<std::size_t>(t.row)]++)] = {t.col, t.value};
        }
    }

    std::vector<int> row_ptr(static_cast<std::size_t>(nrows_) + 1, 0);
    std::vector<int> cols;
    std::vector<double> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    for (int i = 0; i < nrows_; ++i) {
        const auto b = entries.begin() + count[static_cast<std::size_t>(i)];
        const auto e = entries.begin() + count[static_cast<std::size_t>(i) + 1];
        std::sort(b, e);
        for (auto it = b; it != e;) {
            const int c = it->first;
            double s = 0.0;
            for (; it != e && it->first == c; ++it) {
                s += it->second;
            }
            cols.push_back(c);
            vals.push_back(s);
        }
        row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<int>(cols.size());
    }
    return CsrMatrix(nrows_, ncols_, std::move(row_ptr), std::move(cols), std::move(vals));
}

void spmv_add(const CsrMatrix& a, std::span<const double> x, double alpha, std::span<double> y)
{
    if (x.size() != static_cast<std::size_t>(a.cols()) || y.size() != static_cast<std::size_t>(a.rows())) {
        throw Error("spmv: dimension mismatch");
    }
    const auto& rp = a.row_ptr();
    const auto& ci = a.col_idx();
    const auto& v = a.values();
    for (std::size_t i = 0; i < y.size(); ++i) {
        double s = 0.0;
        for (int p = rp[i]; p < rp[i + 1]; ++p) {
            s += v[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(ci[static_cast<std::size_t>(p)])];
        }
        y[i] += alpha * s;
    }
}

DenseVector spmv(const CsrMatrix& a, std::span<const double> x)
{
    if (x.size() != static_cast<std::size_t>(a.cols())) {
        throw Error("spmv: dimension mismatch (" + std::to_string(a.cols()) + " columns, vector of " +
                    std::to_string(x.size()) + ")");
    }
    DenseVector y(static_cast<std::size_t>(a.rows()), 0.0);
    const auto& rp = a.row_ptr();
    const auto& ci = a.col_idx();
    const auto& v = a.values();
    for (std::size_t i = 0; i < y.size(); ++i) {
        double s = 0.0;
        for (int p = rp[i]; p < rp[i + 1]; ++p) {
            s += v[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(ci[static_cast<std::size_t>(p)])];
        }
        y[i] = s;
    }
    return y;
}

CsrMatrix add(const CsrMatrix& a, double alpha, const CsrMatrix& b, double beta)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error("add: shape mismatch");
    }
    std::vector<int> rp(static_cast<std::size_t>(a.rows()) + 1, 0);
    std::vector<int> ci;
    std::vector<double> v;
    ci.reserve(std::max(a.nnz(), b.nnz()));
    v.reserve(ci.capacity());
    for (int i = 0; i < a.rows(); ++i) {
        int p = a.row_ptr()[static_cast<std::size_t>(i)];
        const int pe = a.row_ptr()[static_cast<std::size_t>(i) + 1];
        int q = b.row_ptr()[static_cast<std::size_t>(i)];
        const int qe = b.row_ptr()[static_cast<std::size_t>(i) + 1];
        while (p < pe || q < qe) {
            const int ca = p < pe ? a.col_idx()[static_cast<std::size_t>(p)] : a.cols();
            const int cb = q < qe ? b.col_idx()[static_cast<std::size_t>(q)] : b.cols();
            if (ca == cb) {
                ci.push_back(ca);
                v.push_back(alpha * a.values()[static_cast<std::size_t>(p++)] + beta * b.values()[static_cast<std::size_t>(q++)]);
            } else if (ca < cb) {
                ci.push_back(ca);
                v.push_back(alpha * a.values()[static_cast<std::size_t>(p++)]);
            } else {
                ci.push_back(cb);
                v.push_back(beta * b.values()[static_cast<std::size_t>(q++)]);
            }
        }
        rp[static_cast<std::size_t>(i) + 1] = static_cast<int>(ci.size());
    }
    return CsrMatrix(a.rows(), a.cols(), std::move(rp), std::move(ci), std::move(v));
}

double norm2(std::span<const double> x) noexcept
{
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return std::sqrt(s);
}

double dot(std::span<const double> x, std::span<const double> y) noexcept
{
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * y[i];
    }
    return s;
}

bool all_finite(std::span<const double> x) noexcept
{
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------------------

struct SparseLu::Impl {
    using EigenMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
    Eigen::UmfPackLU<EigenMatrix> lu;
    EigenMatrix m; // UmfPackLU keeps a reference to the factored matrix
    CsrMatrix a;
    bool analyzed = false;
    bool factorized = false;
};

SparseLu::SparseLu() : impl_(std::make_unique<Impl>()) {}
SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

void SparseLu::factorize(const CsrMatrix& a)
{
    if (a.rows() != a.cols()) {
        throw SolverError("SparseLu: matrix is not square");
    }
    const bool reuse = impl_->analyzed && impl_->a.same_pattern(a);
    impl_->a = a;
    impl_->factorized = false;

    using RowMap = Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>>;
    const RowMap view(a.rows(), a.cols(), static_cast<Eigen::Index>(a.nnz()), a.row_ptr().data(), a.col_idx().data(),
                      a.values().data());
    impl_->m = view;
    impl_->m.makeCompressed();

    if (!reuse) {
        impl_->lu.analyzePattern(impl_->m);
        impl_->analyzed = true;
    }
    impl_->lu.factorize(impl_->m);
    if (impl_->lu.info() != Eigen::Success) {
        impl_->analyzed = false;
        // UMFPACK does not report where it broke down; SparseLU names the column.
        Eigen::SparseLU<Impl::EigenMatrix, Eigen::COLAMDOrdering<int>> diag;
        diag.compute(impl_->m);
        std::string where = diag.info() != Eigen::Success ? diag.lastErrorMessage() : "numerically singular";
        throw SolverError("SparseLu: singular matrix: " + where);
    }
    impl_->factorized = true;
}

DenseVector SparseLu::solve(std::span<const double> b) const
{
    if (!impl_->factorized) {
        throw SolverError("SparseLu: solve called before factorize");
    }
    const auto n = static_cast<std::size_t>(impl_->a.rows());
    if (b.size() != n) {
        throw SolverError("SparseLu: right-hand side has wrong size");
    }
    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd sol = impl_->lu.solve(rhs);
    DenseVector x(sol.data(), sol.data() + sol.size());

    DenseVector r = spmv(impl_->a, x);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] -= b[i];
    }
    const double rel = norm2(r) / std::max(norm2(b), 1e-300);
    if (!(rel <= kSolveResidualTol)) {
        std::ostringstream msg;
        msg << "SparseLu: relative residual " << rel << " exceeds " << kSolveResidualTol;
        throw SolverError(msg.str());
    }
    return x;
}

DenseVector solve_direct(const CsrMatrix& a, std::span<const double> b)
{
    SparseLu lu;
    lu.factorize(a);
    return lu.solve(b);
}

} // namespace biocnlf
