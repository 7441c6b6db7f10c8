#include "unst/f2.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace unst::f2 {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

void xor_words(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src)
{
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] ^= src[i];
}

} // namespace

/* BitVector */

void BitVector::resize(std::size_t size)
{
    words_.resize(words_for(size), 0);
    if (size < size_ && (size & 63) && !words_.empty())
        words_.back() &= (std::uint64_t{1} << (size & 63)) - 1;
    size_ = size;
}

BitVector& BitVector::operator^=(const BitVector& other)
{
    if (other.size_ != size_)
        throw std::invalid_argument("BitVector: size mismatch in xor");
    xor_words(words_, other.words_);
    return *this;
}

bool BitVector::operator<(const BitVector& other) const
{
    if (size_ != other.size_)
        return size_ < other.size_;
    return words_ < other.words_;
}

bool BitVector::is_zero() const
{
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t BitVector::popcount() const
{
    std::size_t n = 0;
    for (auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::size_t BitVector::first_set() const
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i])
            return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
    return size_;
}

std::vector<std::size_t> BitVector::support() const
{
    std::vector<std::size_t> result;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        std::uint64_t w = words_[i];
        while (w) {
            result.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return result;
}

bool BitVector::dot(const BitVector& other) const
{
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
        acc ^= words_[i] & other.words_[i];
    return std::popcount(acc) & 1;
}

BitVector& BitVector::xor_prefix(const BitVector& other)
{
    if (other.size_ > size_)
        throw std::invalid_argument("BitVector: xor_prefix with a longer vector");
    for (std::size_t w = 0; w < other.words_.size(); ++w)
        words_[w] ^= other.words_[w];
    return *this;
}

BitVector BitVector::concat(const BitVector& tail) const
{
    BitVector result(size_ + tail.size_);
    result.words_ = words_;
    result.words_.resize(words_for(result.size_), 0);
    for (auto i : tail.support())
        result.set(size_ + i);
    return result;
}

BitVector BitVector::slice(std::size_t begin, std::size_t end) const
{
    BitVector result(end - begin);
    for (auto i : support())
        if (i >= begin && i < end)
            result.set(i - begin);
    return result;
}

std::string BitVector::to_string() const
{
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i))
            s[i] = '1';
    return s;
}

/* BitMatrix */

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * words_for(cols), 0)
{
}

BitMatrix BitMatrix::identity(std::size_t n)
{
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i);
    return m;
}

BitMatrix BitMatrix::from_rows(std::span<const BitVector> rows, std::size_t cols)
{
    BitMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        m.set_row(r, rows[r]);
    return m;
}

BitMatrix BitMatrix::from_columns(std::span<const BitVector> columns, std::size_t rows)
{
    BitMatrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
        m.set_column(c, columns[c]);
    return m;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value)
{
    const std::uint64_t mask = std::uint64_t{1} << (c & 63);
    auto w = row_words(r);
    if (value)
        w[c >> 6] |= mask;
    else
        w[c >> 6] &= ~mask;
}

BitVector BitMatrix::row(std::size_t r) const
{
    BitVector v(cols_);
    std::copy_n(row_words(r).begin(), stride_, v.words().begin());
    return v;
}

void BitMatrix::set_row(std::size_t r, const BitVector& v)
{
    if (v.size() != cols_)
        throw std::invalid_argument("BitMatrix::set_row: size mismatch");
    std::copy_n(v.words().begin(), stride_, row_words(r).begin());
}

BitVector BitMatrix::column(std::size_t c) const
{
    BitVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        if (get(r, c))
            v.set(r);
    return v;
}

void BitMatrix::set_column(std::size_t c, const BitVector& v)
{
    if (v.size() != rows_)
        throw std::invalid_argument("BitMatrix::set_column: size mismatch");
    for (std::size_t r = 0; r < rows_; ++r)
        set(r, c, v.get(r));
}

void BitMatrix::xor_row_into(std::size_t src, std::size_t dst)
{
    auto s = row_words(src);
    auto d = row_words(dst);
    for (std::size_t i = 0; i < stride_; ++i)
        d[i] ^= s[i];
}

bool BitMatrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](std::uint64_t w) { return w == 0; });
}

BitVector BitMatrix::apply(const BitVector& x) const
{
    if (x.size() != cols_)
        throw std::invalid_argument("BitMatrix::apply: size mismatch");
    BitVector y(rows_);
    auto xw = x.words();
    for (std::size_t r = 0; r < rows_; ++r) {
        auto rw = row_words(r);
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < stride_; ++i)
            acc ^= rw[i] & xw[i];
        if (std::popcount(acc) & 1)
            y.set(r);
    }
    return y;
}

BitMatrix BitMatrix::operator*(const BitMatrix& other) const
{
    if (cols_ != other.rows_)
        throw std::invalid_argument("BitMatrix::operator*: dimension mismatch");
    BitMatrix result(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        auto dst = result.row_words(r);
        auto rw = row_words(r);
        for (std::size_t i = 0; i < stride_; ++i) {
            std::uint64_t w = rw[i];
            while (w) {
                std::size_t k = i * 64 + static_cast<std::size_t>(std::countr_zero(w));
                xor_words(dst, other.row_words(k));
                w &= w - 1;
            }
        }
    }
    return result;
}

BitMatrix& BitMatrix::operator^=(const BitMatrix& other)
{
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("BitMatrix: size mismatch in sum");
    xor_words(data_, other.data_);
    return *this;
}

BitMatrix BitMatrix::transpose() const
{
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        auto rw = row_words(r);
        for (std::size_t i = 0; i < stride_; ++i) {
            std::uint64_t w = rw[i];
            while (w) {
                t.set(i * 64 + static_cast<std::size_t>(std::countr_zero(w)), r);
                w &= w - 1;
            }
        }
    }
    return t;
}

BitMatrix BitMatrix::stack_below(const BitMatrix& other) const
{
    if (cols_ != other.cols_)
        throw std::invalid_argument("BitMatrix::stack_below: column mismatch");
    BitMatrix m(rows_ + other.rows_, cols_);
    m.paste(0, 0, *this);
    m.paste(rows_, 0, other);
    return m;
}

BitMatrix BitMatrix::stack_right(const BitMatrix& other) const
{
    if (rows_ != other.rows_)
        throw std::invalid_argument("BitMatrix::stack_right: row mismatch");
    BitMatrix m(rows_, cols_ + other.cols_);
    m.paste(0, 0, *this);
    m.paste(0, cols_, other);
    return m;
}

BitMatrix BitMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
{
    BitMatrix m(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c)
            if (get(r0 + r, c0 + c))
                m.set(r, c);
    return m;
}

void BitMatrix::paste(std::size_t r0, std::size_t c0, const BitMatrix& src)
{
    for (std::size_t r = 0; r < src.rows_; ++r)
        for (std::size_t c = 0; c < src.cols_; ++c)
            set(r0 + r, c0 + c, src.get(r, c));
}

std::string BitMatrix::to_string() const
{
    std::ostringstream os;
    for (std::size_t r = 0; r < rows_; ++r)
        os << row(r).to_string() << '\n';
    return os.str();
}

/* Elimination */

RowEchelon row_reduce(BitMatrix m)
{
    RowEchelon e;
    std::size_t next = 0;
    for (std::size_t c = 0; c < m.cols() && next < m.rows(); ++c) {
        std::size_t p = next;
        while (p < m.rows() && !m.get(p, c))
            ++p;
        if (p == m.rows())
            continue;
        if (p != next) {
            auto a = m.row_words(p);
            auto b = m.row_words(next);
            std::swap_ranges(a.begin(), a.end(), b.begin());
        }
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != next && m.get(r, c))
                m.xor_row_into(next, r);
        e.pivots.push_back(c);
        ++next;
    }
    e.reduced = std::move(m);
    return e;
}

std::size_t rank(const BitMatrix& m) { return row_reduce(m).rank(); }

std::vector<BitVector> kernel_basis(const BitMatrix& m)
{
    const auto e = row_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots)
        is_pivot[p] = true;
    std::vector<BitVector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        BitVector v(m.cols());
        v.set(f);
        for (std::size_t i = 0; i < e.pivots.size(); ++i)
            if (e.reduced.get(i, f))
                v.set(e.pivots[i]);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<BitVector> solve(const BitMatrix& m, const BitVector& b)
{
    if (b.size() != m.rows())
        throw std::invalid_argument("solve: right-hand side length differs from row count");
    BitMatrix aug(m.rows(), m.cols() + 1);
    aug.paste(0, 0, m);
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (b.get(r))
            aug.set(r, m.cols());
    const auto e = row_reduce(std::move(aug));
    if (!e.pivots.empty() && e.pivots.back() == m.cols())
        return std::nullopt;
    BitVector x(m.cols());
    for (std::size_t i = 0; i < e.pivots.size(); ++i)
        if (e.reduced.get(i, m.cols()))
            x.set(e.pivots[i]);
    return x;
}

std::vector<BitVector> kernel_of_images(std::span<const BitVector> images, std::size_t target_dim)
{
    return kernel_basis(BitMatrix::from_columns(images, target_dim));
}

/* Subspace */

bool Subspace::insert(const BitVector& v)
{
    return !insert_or_relation(v).has_value();
}

std::optional<BitVector> Subspace::insert_or_relation(const BitVector& v)
{
    if (v.size() != ambient_)
        throw std::invalid_argument("Subspace::insert: size mismatch");
    const std::size_t gen = generators_++;
    BitVector r = v;
    BitVector h;
    if (track_) {
        h = BitVector(generators_);
        h.set(gen);
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (r.get(pivots_[i])) {
            r ^= rows_[i];
            if (track_)
                h.xor_prefix(history_[i]);
        }
    }
    const std::size_t p = r.first_set();
    if (p == ambient_) {
        if (!track_)
            return BitVector();
        return h;
    }
    pivots_.push_back(p);
    sorted_pivots_.insert(std::lower_bound(sorted_pivots_.begin(), sorted_pivots_.end(), p), p);
    rows_.push_back(std::move(r));
    if (track_)
        history_.push_back(std::move(h));
    return std::nullopt;
}

BitVector Subspace::reduce(BitVector v) const
{
    if (v.size() != ambient_)
        throw std::invalid_argument("Subspace::reduce: size mismatch");
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (v.get(pivots_[i]))
            v ^= rows_[i];
    return v;
}

std::optional<BitVector> Subspace::express(const BitVector& v) const
{
    if (!track_)
        throw std::logic_error("Subspace::express: history not tracked");
    BitVector r = v;
    BitVector h(generators_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (r.get(pivots_[i])) {
            r ^= rows_[i];
            h.xor_prefix(history_[i]);
        }
    }
    if (!r.is_zero())
        return std::nullopt;
    return h;
}

std::vector<BitVector> Subspace::basis() const
{
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots_[a] < pivots_[b]; });
    std::vector<BitVector> out;
    for (auto i : order)
        out.push_back(rows_[i]);
    // Clear every pivot column outside its own row, last pivot first.
    for (std::size_t k = out.size(); k-- > 0;) {
        const std::size_t p = pivots_[order[k]];
        for (std::size_t j = 0; j < out.size(); ++j)
            if (j != k && out[j].get(p))
                out[j] ^= out[k];
    }
    return out;
}

bool Subspace::is_pivot(std::size_t col) const
{
    return std::binary_search(sorted_pivots_.begin(), sorted_pivots_.end(), col);
}

std::vector<std::size_t> Subspace::free_columns() const
{
    std::vector<std::size_t> result;
    for (std::size_t c = 0; c < ambient_; ++c)
        if (!is_pivot(c))
            result.push_back(c);
    return result;
}

/* QuotientMap */

QuotientMap::QuotientMap(Subspace sub) : sub_(std::move(sub)), free_(sub_.free_columns()) {}

BitVector QuotientMap::project(const BitVector& v) const
{
    const BitVector r = sub_.reduce(v);
    BitVector q(free_.size());
    for (std::size_t i = 0; i < free_.size(); ++i)
        if (r.get(free_[i]))
            q.set(i);
    return q;
}

BitMatrix QuotientMap::matrix() const
{
    BitMatrix m(free_.size(), sub_.ambient());
    for (std::size_t c = 0; c < sub_.ambient(); ++c)
        m.set_column(c, project(BitVector::unit(sub_.ambient(), c)));
    return m;
}

} // namespace unst::f2
