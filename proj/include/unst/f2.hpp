#pragma once

// Dense linear algebra over the two-element field.
//
// Vectors and matrices are bit-packed into 64-bit words; matrices are stored
// row-major and a matrix acting on a column vector has one row per target
// coordinate. Every elimination uses the same convention (reduced row echelon
// form, pivots at the lowest available column), so kernels, solutions and
// chosen complements are reproducible bit-for-bit.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace unst::f2 {

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    static BitVector unit(std::size_t size, std::size_t i)
    {
        BitVector v(size);
        v.set(i);
        return v;
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    // Grows with zeros or truncates.
    void resize(std::size_t size);

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool value = true)
    {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    bool operator==(const BitVector& other) const = default;
    bool operator<(const BitVector& other) const;

    bool is_zero() const;
    std::size_t popcount() const;
    // Index of the lowest set bit, or size() if zero.
    std::size_t first_set() const;
    std::vector<std::size_t> support() const;
    // Parity of the bitwise AND, i.e. the GF(2) dot product.
    bool dot(const BitVector& other) const;

    // this ^= other on the first other.size() bits; other must not be longer.
    BitVector& xor_prefix(const BitVector& other);

    // Concatenation [this | tail].
    BitVector concat(const BitVector& tail) const;
    BitVector slice(std::size_t begin, std::size_t end) const;

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    std::string to_string() const;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);
    static BitMatrix zero(std::size_t rows, std::size_t cols) { return BitMatrix(rows, cols); }
    // Rows given explicitly; all must have length cols.
    static BitMatrix from_rows(std::span<const BitVector> rows, std::size_t cols);
    // Columns given explicitly; all must have length rows.
    static BitMatrix from_columns(std::span<const BitVector> columns, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return row_words(r)[c >> 6] >> (c & 63) & 1u; }
    void set(std::size_t r, std::size_t c, bool value = true);
    void flip(std::size_t r, std::size_t c) { row_words(r)[c >> 6] ^= std::uint64_t{1} << (c & 63); }

    BitVector row(std::size_t r) const;
    void set_row(std::size_t r, const BitVector& v);
    BitVector column(std::size_t c) const;
    void set_column(std::size_t c, const BitVector& v);
    void xor_row_into(std::size_t src, std::size_t dst);

    bool is_zero() const;
    bool operator==(const BitMatrix& other) const = default;

    // this * x for a column vector x of length cols().
    BitVector apply(const BitVector& x) const;
    // this * other.
    BitMatrix operator*(const BitMatrix& other) const;
    BitMatrix& operator^=(const BitMatrix& other);
    friend BitMatrix operator+(BitMatrix a, const BitMatrix& b) { return a ^= b; }
    BitMatrix transpose() const;

    // Block helpers used by direct sums.
    BitMatrix stack_below(const BitMatrix& other) const;
    BitMatrix stack_right(const BitMatrix& other) const;
    BitMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void paste(std::size_t r0, std::size_t c0, const BitMatrix& src);

    std::span<const std::uint64_t> row_words(std::size_t r) const { return {data_.data() + r * stride_, stride_}; }
    std::span<std::uint64_t> row_words(std::size_t r) { return {data_.data() + r * stride_, stride_}; }

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> data_;
};

struct RowEchelon {
    BitMatrix reduced;               // first rank rows nonzero, fully reduced
    std::vector<std::size_t> pivots; // pivot column of each nonzero row, increasing
    std::size_t rank() const { return pivots.size(); }
};

// Reduced row echelon form with lowest-index pivots.
RowEchelon row_reduce(BitMatrix m);

std::size_t rank(const BitMatrix& m);

// Basis of {v : m v = 0}: one vector per free column (in increasing order),
// with that free coordinate set and the pivot coordinates solved.
std::vector<BitVector> kernel_basis(const BitMatrix& m);

// Some x with m x = b, free variables set to zero; nullopt when inconsistent.
// Throws std::invalid_argument when b.size() != m.rows().
std::optional<BitVector> solve(const BitMatrix& m, const BitVector& b);

// Incremental basis of a subspace of F_2^n kept in reduced echelon form.
//
// Each stored row remembers which of the inserted vectors it is a sum of, so
// a vector in the span can be expressed in terms of the inserted generators.
class Subspace {
public:
    // Without history, express() and insert_or_relation() are unavailable
    // and insertion is cheaper.
    explicit Subspace(std::size_t ambient = 0, bool track_history = true)
        : ambient_(ambient), track_(track_history)
    {
    }

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return rows_.size(); }
    std::size_t generators() const { return generators_; }

    // Returns true when v was independent of the current span. Every call
    // counts as a generator (dependent ones included) for express().
    bool insert(const BitVector& v);
    // Inserts v; when v is dependent, returns the coefficients (length
    // generators(), last one set) of a combination of inserted generators
    // summing to zero.
    std::optional<BitVector> insert_or_relation(const BitVector& v);
    BitVector reduce(BitVector v) const;
    bool contains(const BitVector& v) const { return reduce(v).is_zero(); }

    // Coefficients over the inserted generators (length generators()) of a
    // combination equal to v, or nullopt if v is outside the span. Dependent
    // generators get coefficient zero.
    std::optional<BitVector> express(const BitVector& v) const;

    // Reduced echelon rows, sorted by pivot.
    std::vector<BitVector> basis() const;
    // Pivot columns, increasing.
    const std::vector<std::size_t>& pivots() const { return sorted_pivots_; }
    bool is_pivot(std::size_t col) const;
    // Columns that are not pivots; the standard vectors at these columns span
    // a complement, which is how quotients are coordinatized.
    std::vector<std::size_t> free_columns() const;

private:
    std::size_t ambient_;
    bool track_;
    std::size_t generators_ = 0;
    // Semi-echelon rows in insertion order: row i vanishes at the pivots of
    // rows inserted before it.
    std::vector<BitVector> rows_;
    std::vector<BitVector> history_; // generator combination for each row
    std::vector<std::size_t> pivots_;
    std::vector<std::size_t> sorted_pivots_;
};

// Quotient V / S coordinatized by the free columns of S.
class QuotientMap {
public:
    explicit QuotientMap(Subspace sub);
    std::size_t dim() const { return free_.size(); }
    std::size_t ambient() const { return sub_.ambient(); }
    BitVector project(const BitVector& v) const;
    // Representative in V of the i-th quotient basis vector.
    BitVector lift(std::size_t i) const { return BitVector::unit(sub_.ambient(), free_[i]); }
    const std::vector<std::size_t>& free_columns() const { return free_; }
    BitMatrix matrix() const;

private:
    Subspace sub_;
    std::vector<std::size_t> free_;
};

// Kernel of a linear map whose images of the basis vectors are the given
// rows (each of length target_dim). Same output convention as kernel_basis
// applied to the matrix whose columns are the images.
std::vector<BitVector> kernel_of_images(std::span<const BitVector> images, std::size_t target_dim);

} // namespace unst::f2
