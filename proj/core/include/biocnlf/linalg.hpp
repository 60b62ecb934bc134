#pragma once

#include "biocnlf/mesh.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace biocnlf {

using DenseVector = std::vector<double>;

class SolverError : public Error {
public:
    using Error::Error;
};

/// Compressed sparse row matrix. Column indices are strictly increasing within
/// each row; explicit zeros are allowed (they keep patterns stable across time
/// steps).
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(int nrows, int ncols, std::vector<int> row_ptr, std::vector<int> col_idx, std::vector<double> values);

    [[nodiscard]] int rows() const noexcept { return nrows_; }
    [[nodiscard]] int cols() const noexcept { return ncols_; }
    [[nodiscard]] std::size_t nnz() const noexcept { return values_.size(); }

    [[nodiscard]] const std::vector<int>& row_ptr() const noexcept { return row_ptr_; }
    [[nodiscard]] const std::vector<int>& col_idx() const noexcept { return col_idx_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] std::vector<double>& values() noexcept { return values_; }

    /// Entry (i, j), zero when not stored.
    [[nodiscard]] double at(int i, int j) const;
    /// Position of (i, j) in values(), or -1.
    [[nodiscard]] std::ptrdiff_t find(int i, int j) const;

    [[nodiscard]] CsrMatrix transpose() const;
    [[nodiscard]] double max_abs() const noexcept;
    [[nodiscard]] bool same_pattern(const CsrMatrix& other) const noexcept;

    friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

private:
    int nrows_ = 0;
    int ncols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// Triplet accumulator. finalize() sums duplicates; the result is independent
/// of insertion order, bit for bit.
class CooBuilder {
public:
    CooBuilder(int nrows, int ncols) : nrows_(nrows), ncols_(ncols) {}

    void add(int i, int j, double v) { triplets_.push_back({i, j, v}); }
    /// Appends every entry of `m`, scaled and shifted by (row_off, col_off).
    void add_block(const CsrMatrix& m, int row_off, int col_off, double scale = 1.0);
    void reserve(std::size_t n) { triplets_.reserve(n); }
    /// Merges another builder of identical shape (e.g. a per-thread one).
    void merge(const CooBuilder& other);

    [[nodiscard]] int rows() const noexcept { return nrows_; }
    [[nodiscard]] int cols() const noexcept { return ncols_; }
    [[nodiscard]] std::size_t size() const noexcept { return triplets_.size(); }

    [[nodiscard]] CsrMatrix finalize() const;

private:
    struct Triplet {
        int row;
        int col;
        double value;
    };
    int nrows_;
    int ncols_;
    std::vector<Triplet> triplets_;
};

[[nodiscard]] DenseVector spmv(const CsrMatrix& a, std::span<const double> x);
/// y += alpha * A x
void spmv_add(const CsrMatrix& a, std::span<const double> x, double alpha, std::span<double> y);

/// alpha*A + beta*B with the union pattern.
[[nodiscard]] CsrMatrix add(const CsrMatrix& a, double alpha, const CsrMatrix& b, double beta);

[[nodiscard]] double norm2(std::span<const double> x) noexcept;
[[nodiscard]] double dot(std::span<const double> x, std::span<const double> y) noexcept;
[[nodiscard]] bool all_finite(std::span<const double> x) noexcept;

inline constexpr double kSolveResidualTol = 1e-10;

/// Sparse LU factorization with partial pivoting. The symbolic analysis is
/// kept and reused as long as later matrices share the sparsity pattern.
class SparseLu {
public:
    SparseLu();
    ~SparseLu();
    SparseLu(SparseLu&&) noexcept;
    SparseLu& operator=(SparseLu&&) noexcept;

    /// Factorizes A; throws SolverError on a singular matrix.
    void factorize(const CsrMatrix& a);
    /// Solves with the last factorization and checks the relative residual.
    [[nodiscard]] DenseVector solve(std::span<const double> b) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot factorize and solve. Guarantees
/// ||Ax - b|| / max(||b||, 1e-300) <= kSolveResidualTol or throws.
[[nodiscard]] DenseVector solve_direct(const CsrMatrix& a, std::span<const double> b);

} // namespace biocnlf
