#include "unst/steenrod.hpp"

#include "memo.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace unst::steenrod {

namespace {

struct WordHash {
    std::size_t operator()(const Word& w) const
    {
        std::size_t h = 1469598103934665603ull;
        for (int x : w)
            h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
        return h;
    }
};

using detail::Memo;

} // namespace

bool is_admissible(std::span<const int> e)
{
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] < 1)
            return false;
        if (k + 1 < e.size() && e[k] < 2 * e[k + 1])
            return false;
    }
    return true;
}

/* Admissible */

Admissible::Admissible(std::span<const int> exponents)
{
    if (!is_admissible(exponents))
        throw std::invalid_argument("Admissible: sequence is not admissible");
    *this = trusted(exponents);
}

Admissible Admissible::trusted(std::span<const int> exponents)
{
    if (exponents.size() > max_length)
        throw std::length_error("Admissible: sequence too long");
    Admissible m;
    m.length_ = static_cast<std::uint8_t>(exponents.size());
    for (std::size_t i = 0; i < exponents.size(); ++i)
        m.exps_[i] = static_cast<std::uint16_t>(exponents[i]);
    return m;
}

int Admissible::degree() const
{
    int d = 0;
    for (std::size_t i = 0; i < length_; ++i)
        d += exps_[i];
    return d;
}

int Admissible::excess() const
{
    if (length_ == 0)
        return 0;
    int e = exps_[0];
    for (std::size_t i = 1; i < length_; ++i)
        e -= exps_[i];
    return e;
}

Word Admissible::exponents() const { return Word(exps_.begin(), exps_.begin() + length_); }

Admissible Admissible::tail() const
{
    Admissible m;
    if (length_ == 0)
        return m;
    m.length_ = static_cast<std::uint8_t>(length_ - 1);
    std::copy(exps_.begin() + 1, exps_.begin() + length_, m.exps_.begin());
    return m;
}

Admissible Admissible::prepend(int a) const
{
    if (length_ == max_length)
        throw std::length_error("Admissible: sequence too long");
    Admissible m;
    m.length_ = static_cast<std::uint8_t>(length_ + 1);
    m.exps_[0] = static_cast<std::uint16_t>(a);
    std::copy(exps_.begin(), exps_.begin() + length_, m.exps_.begin() + 1);
    return m;
}

std::strong_ordering Admissible::operator<=>(const Admissible& other) const
{
    const std::size_t n = std::min(length_, other.length_);
    for (std::size_t i = 0; i < n; ++i)
        if (exps_[i] != other.exps_[i])
            return exps_[i] <=> other.exps_[i];
    return length_ <=> other.length_;
}

std::size_t Admissible::hash() const
{
    std::size_t h = 1469598103934665603ull ^ length_;
    for (std::size_t i = 0; i < length_; ++i)
        h = (h ^ exps_[i]) * 1099511628211ull;
    return h;
}

int excess(const Admissible& m) { return m.excess(); }

/* Element */

Element Element::sq(int i)
{
    if (i < 0)
        throw std::invalid_argument("Element::sq: negative degree");
    if (i == 0)
        return unit();
    return Element(Admissible::trusted(std::array<int, 1>{i}));
}

Element Element::from_terms(int degree, std::vector<Admissible> terms)
{
    std::sort(terms.begin(), terms.end());
    Element e(degree);
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i;
        while (j < terms.size() && terms[j] == terms[i])
            ++j;
        if ((j - i) & 1) {
            if (terms[i].degree() != degree)
                throw std::invalid_argument("Element: inhomogeneous terms");
            e.terms_.push_back(terms[i]);
        }
        i = j;
    }
    return e;
}

bool Element::contains(const Admissible& m) const { return std::binary_search(terms_.begin(), terms_.end(), m); }

void Element::toggle(const Admissible& m)
{
    if (terms_.empty())
        degree_ = m.degree();
    else if (m.degree() != degree_)
        throw std::invalid_argument("Element: inhomogeneous terms");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m);
    if (it != terms_.end() && *it == m)
        terms_.erase(it);
    else
        terms_.insert(it, m);
}

Element& Element::operator+=(const Element& other)
{
    if (other.is_zero())
        return *this;
    if (is_zero()) {
        *this = other;
        return *this;
    }
    if (other.degree_ != degree_)
        throw std::invalid_argument("Element: adding elements of different degrees");
    std::vector<Admissible> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    std::set_symmetric_difference(terms_.begin(), terms_.end(), other.terms_.begin(), other.terms_.end(),
                                  std::back_inserter(merged));
    terms_ = std::move(merged);
    return *this;
}

bool Element::operator==(const Element& other) const
{
    if (is_zero() || other.is_zero())
        return is_zero() && other.is_zero();
    return degree_ == other.degree_ && terms_ == other.terms_;
}

/* Adem relations and normalization */

const std::vector<Admissible>& adem_relation(int a, int b)
{
    static Memo<std::uint64_t, std::vector<Admissible>> memo;
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    return memo.get(key, [a, b] {
        if (a >= 2 * b)
            throw std::invalid_argument("adem_relation: pair is already admissible");
        std::vector<Admissible> terms;
        for (int c = 0; 2 * c <= a; ++c) {
            if (!binom2(b - c - 1, a - 2 * c))
                continue;
            if (c == 0)
                terms.push_back(Admissible::trusted(std::array<int, 1>{a + b}));
            else
                terms.push_back(Admissible::trusted(std::array<int, 2>{a + b - c, c}));
        }
        return terms;
    });
}

Element adem_normalize(std::span<const int> word)
{
    Word start;
    int degree = 0;
    for (int x : word) {
        if (x < 0)
            throw std::invalid_argument("adem_normalize: negative exponent");
        if (x > 0)
            start.push_back(x);
        degree += x;
    }
    std::unordered_set<Word, WordHash> pending{start};
    std::vector<Admissible> result;
    auto toggle = [&pending](Word&& w) {
        auto [it, inserted] = pending.insert(std::move(w));
        if (!inserted)
            pending.erase(it);
    };
    while (!pending.empty()) {
        Word w = std::move(pending.extract(pending.begin()).value());
        std::size_t i = 0;
        while (i + 1 < w.size() && w[i] >= 2 * w[i + 1])
            ++i;
        if (i + 1 >= w.size()) {
            result.push_back(Admissible::trusted(w));
            continue;
        }
        for (const auto& term : adem_relation(w[i], w[i + 1])) {
            Word next;
            next.reserve(w.size());
            next.insert(next.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
            for (std::size_t k = 0; k < term.length(); ++k)
                next.push_back(term[k]);
            next.insert(next.end(), w.begin() + static_cast<std::ptrdiff_t>(i + 2), w.end());
            toggle(std::move(next));
        }
    }
    return Element::from_terms(degree, std::move(result));
}

const Element& sq_times(int a, const Admissible& J)
{
    struct Key {
        int a;
        Admissible J;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const { return k.J.hash() * 31 + static_cast<std::size_t>(k.a); }
    };
    static Memo<Key, Element, KeyHash> memo;
    return memo.get(Key{a, J}, [a, &J] {
        Word w = J.exponents();
        w.insert(w.begin(), a);
        return adem_normalize(w);
    });
}

const Element& free_act(int a, const Admissible& J, int n)
{
    struct Key {
        int a;
        int n;
        Admissible J;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const
        {
            return (k.J.hash() * 31 + static_cast<std::size_t>(k.a)) * 1000003 + static_cast<std::size_t>(k.n);
        }
    };
    static Memo<Key, Element, KeyHash> memo;

    const int total = a + J.degree();
    if (a < 0 || n < 0)
        throw std::invalid_argument("free_act: negative argument");
    const int n_eff = std::min(n, total);
    return memo.get(Key{a, n_eff, J}, [a, &J, n_eff, total] {
        if (a == 0)
            return Element(J);
        if (a > n_eff + J.degree())
            return Element::zero(total);
        if (J.is_unit() || a >= 2 * J.first())
            return Element(J.prepend(a));
        const int j1 = J.first();
        const Admissible rest = J.tail();
        Element result = Element::zero(total);
        for (int c = 0; 2 * c <= a; ++c) {
            if (!binom2(j1 - c - 1, a - 2 * c))
                continue;
            const Element& inner = free_act(c, rest, n_eff);
            for (const auto& K : inner.terms())
                result += free_act(a + j1 - c, K, n_eff);
        }
        return result;
    });
}

Element multiply(const Element& a, const Element& b)
{
    Element result = Element::zero(a.degree() + b.degree());
    for (const auto& x : a.terms()) {
        for (const auto& y : b.terms()) {
            Word w = x.exponents();
            const Word tail = y.exponents();
            w.insert(w.end(), tail.begin(), tail.end());
            result += adem_normalize(w);
        }
    }
    return result;
}

/* Admissible basis */

namespace {

void enumerate_admissible(int remaining, int max_first, Word& prefix, std::vector<Admissible>& out)
{
    if (remaining == 0) {
        out.push_back(Admissible::trusted(prefix));
        return;
    }
    // The first exponent i of an admissible sequence of degree r satisfies
    // r - i <= i - 1, i.e. i >= (r + 1) / 2.
    for (int i = std::min(remaining, max_first); 2 * i >= remaining + 1; --i) {
        prefix.push_back(i);
        enumerate_admissible(remaining - i, i / 2, prefix, out);
        prefix.pop_back();
    }
}

struct BasisLevel {
    std::vector<Admissible> monomials;
    std::vector<int> excess_prefix; // excess_prefix[e] = count with excess <= e
    std::unordered_map<Admissible, std::size_t, AdmissibleHash> index;
};

const BasisLevel& basis_level(int degree)
{
    static Memo<int, BasisLevel> memo;
    return memo.get(degree, [degree] {
        if (degree < 0)
            throw std::invalid_argument("admissible_basis: negative degree");
        BasisLevel level;
        Word prefix;
        enumerate_admissible(degree, degree, prefix, level.monomials);
        std::stable_sort(level.monomials.begin(), level.monomials.end(), [](const Admissible& x, const Admissible& y) {
            if (x.excess() != y.excess())
                return x.excess() < y.excess();
            return x < y;
        });
        level.excess_prefix.assign(static_cast<std::size_t>(degree) + 1, 0);
        for (const auto& m : level.monomials)
            ++level.excess_prefix[static_cast<std::size_t>(m.excess())];
        for (std::size_t e = 1; e < level.excess_prefix.size(); ++e)
            level.excess_prefix[e] += level.excess_prefix[e - 1];
        for (std::size_t i = 0; i < level.monomials.size(); ++i)
            level.index.emplace(level.monomials[i], i);
        return level;
    });
}

} // namespace

const std::vector<Admissible>& admissible_basis(int degree) { return basis_level(degree).monomials; }

std::size_t admissible_count(int degree, int max_excess)
{
    if (max_excess < 0)
        return 0;
    const auto& level = basis_level(degree);
    const auto e = std::min<std::size_t>(static_cast<std::size_t>(max_excess), level.excess_prefix.size() - 1);
    return static_cast<std::size_t>(level.excess_prefix[e]);
}

std::size_t admissible_index(const Admissible& m) { return basis_level(m.degree()).index.at(m); }

/* Text syntax */

std::string to_string(const Admissible& m)
{
    if (m.is_unit())
        return "1";
    std::ostringstream os;
    os << "Sq^{";
    for (std::size_t i = 0; i < m.length(); ++i)
        os << (i ? "," : "") << m[i];
    os << '}';
    return os.str();
}

std::string to_string(const Element& e)
{
    if (e.is_zero())
        return "0";
    std::string s;
    for (auto it = e.terms().rbegin(); it != e.terms().rend(); ++it) {
        if (!s.empty())
            s += " + ";
        s += to_string(*it);
    }
    return s;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::vector<Word> sum()
    {
        std::vector<Word> terms;
        terms.push_back(product());
        skip_space();
        while (peek() == '+') {
            ++pos_;
            terms.push_back(product());
            skip_space();
        }
        if (pos_ != text_.size())
            fail("unexpected character");
        return terms;
    }

    Word product()
    {
        skip_space();
        if (peek() == '0' || peek() == '1') {
            const char c = text_[pos_++];
            // "0" marks the zero element with a sentinel negative entry.
            return c == '0' ? Word{-1} : Word{};
        }
        Word w;
        bool any = false;
        while (true) {
            skip_space();
            if (!starts_with("Sq"))
                break;
            pos_ += 2;
            any = true;
            if (peek() == '^')
                ++pos_;
            if (peek() == '{') {
                ++pos_;
                do {
                    skip_space();
                    w.push_back(number());
                    skip_space();
                } while (peek() == ',' && ++pos_);
                expect('}');
            }
            else if (peek() == '(') {
                ++pos_;
                w.push_back(number());
                expect(')');
            }
            else {
                w.push_back(number());
            }
        }
        if (!any)
            fail("expected Sq");
        return w;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }
    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    void expect(char c)
    {
        skip_space();
        if (peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    int number()
    {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected a number");
        return std::stoi(std::string(text_.substr(start, pos_ - start)));
    }
    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("cannot parse Steenrod operation \"" + std::string(text_) + "\" at offset " +
                                    std::to_string(pos_) + ": " + what);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Element parse_element(std::string_view text)
{
    const auto terms = Parser(text).sum();
    std::optional<Element> result;
    for (const auto& w : terms) {
        if (w.size() == 1 && w[0] == -1)
            continue;
        Element e = adem_normalize(w);
        int degree = 0;
        for (int x : w)
            degree += x;
        if (result && degree != result->degree())
            throw std::invalid_argument("parse_element: inhomogeneous sum \"" + std::string(text) + "\"");
        if (!result)
            result = Element::zero(degree);
        *result += e;
    }
    return result ? *result : Element::zero(0);
}

Word parse_word(std::string_view text)
{
    Parser p(text);
    const auto terms = p.sum();
    if (terms.size() != 1 || (terms[0].size() == 1 && terms[0][0] == -1))
        throw std::invalid_argument("parse_word: expected a single product of squares");
    return terms[0];
}

/* Wall basis */

Element wall_monomial(int n, int k)
{
    if (k < 0 || n < k)
        throw std::invalid_argument("wall_monomial: requires n >= k >= 0");
    Word w;
    for (int i = k; i <= n; ++i)
        w.push_back(1 << i);
    return adem_normalize(w);
}

int WallMonomial::degree() const
{
    int d = 0;
    for (auto [n, k] : factors)
        d += (1 << (n + 1)) - (1 << k);
    return d;
}

bool WallMonomial::is_ordered() const
{
    for (std::size_t j = 0; j < factors.size(); ++j) {
        if (factors[j].first < factors[j].second || factors[j].second < 0)
            return false;
        if (j > 0 && !(factors[j] < factors[j - 1]))
            return false;
    }
    return true;
}

Word WallMonomial::word() const
{
    Word w;
    for (auto [n, k] : factors)
        for (int i = k; i <= n; ++i)
            w.push_back(1 << i);
    return w;
}

Element WallMonomial::expand() const { return adem_normalize(word()); }

namespace {

void enumerate_wall(int remaining, std::pair<int, int> bound, std::vector<std::pair<int, int>>& prefix,
                    std::vector<WallMonomial>& out)
{
    if (remaining == 0) {
        out.push_back(WallMonomial{prefix});
        return;
    }
    for (int n = 0; (1 << n) <= remaining; ++n) {
        for (int k = 0; k <= n; ++k) {
            const std::pair<int, int> f{n, k};
            if (!(f < bound))
                continue;
            const int d = (1 << (n + 1)) - (1 << k);
            if (d > remaining)
                continue;
            prefix.push_back(f);
            enumerate_wall(remaining - d, f, prefix, out);
            prefix.pop_back();
        }
    }
}

} // namespace

std::vector<WallMonomial> wall_basis(int degree)
{
    std::vector<WallMonomial> out;
    std::vector<std::pair<int, int>> prefix;
    enumerate_wall(degree, {1 << 20, 0}, prefix, out);
    return out;
}

/* Subalgebras A(n) */

namespace {

f2::BitVector coordinates(const Element& e, int degree)
{
    f2::BitVector v(admissible_basis(degree).size());
    if (!e.is_zero() && e.degree() != degree)
        throw std::invalid_argument("coordinates: degree mismatch");
    for (const auto& m : e.terms())
        v.set(admissible_index(m));
    return v;
}

Element from_coordinates(const f2::BitVector& v, int degree)
{
    const auto& basis = admissible_basis(degree);
    std::vector<Admissible> terms;
    for (auto i : v.support())
        terms.push_back(basis[i]);
    return Element::from_terms(degree, std::move(terms));
}

} // namespace

SubalgebraSpan::SubalgebraSpan(int n, int degree_cap) : n_(n), cap_(degree_cap)
{
    if (n < 0 || degree_cap < 0)
        throw std::invalid_argument("SubalgebraSpan: negative bound");
    for (int t = 0; t <= cap_; ++t) {
        f2::Subspace level(admissible_basis(t).size());
        if (t == 0) {
            level.insert(coordinates(Element::unit(), 0));
        }
        else {
            for (int i = 0; i <= n_ && (1 << i) <= t; ++i) {
                const int s = t - (1 << i);
                for (const auto& row : levels_[static_cast<std::size_t>(s)].basis())
                    level.insert(coordinates(multiply(Element::sq(1 << i), from_coordinates(row, s)), t));
            }
        }
        levels_.push_back(std::move(level));
    }
}

std::size_t SubalgebraSpan::dim(int degree) const { return levels_.at(static_cast<std::size_t>(degree)).dim(); }

bool SubalgebraSpan::contains(const Element& e) const
{
    if (e.is_zero())
        return true;
    if (e.degree() > cap_)
        throw std::invalid_argument("SubalgebraSpan::contains: degree above cap");
    return levels_[static_cast<std::size_t>(e.degree())].contains(coordinates(e, e.degree()));
}

bool in_subalgebra(const Element& e, int n, int degree_cap)
{
    if (!e.is_zero() && e.degree() > degree_cap)
        throw std::invalid_argument("in_subalgebra: degree above cap");
    return SubalgebraSpan(n, e.is_zero() ? 0 : e.degree()).contains(e);
}

/* Wall's decomposition Sq^{2^i} Sq^{2^j} = sum_t Sq^{2^{i-t}} m^t */

std::vector<std::pair<int, Element>> wall_m_decomposition(int i, int j)
{
    if (i < 0 || j < 0 || !(j <= i - 2 || j == i))
        throw std::invalid_argument("wall_m_decomposition: requires 0 <= j <= i-2 or j == i");
    const int total = (1 << i) + (1 << j);
    const Element lhs = adem_normalize({1 << i, 1 << j});
    const std::size_t rows = admissible_basis(total).size();

    std::vector<f2::BitVector> columns;
    std::vector<std::pair<int, Admissible>> labels;
    for (int t = 1; t <= i; ++t) {
        const int d = total - (1 << (i - t));
        for (const auto& b : admissible_basis(d)) {
            columns.push_back(coordinates(sq_times(1 << (i - t), b), total));
            labels.emplace_back(t, b);
        }
    }
    const auto x = f2::solve(f2::BitMatrix::from_columns(columns, rows), coordinates(lhs, total));
    if (!x)
        throw std::logic_error("wall_m_decomposition: inconsistent system");

    std::vector<std::pair<int, Element>> result;
    for (int t = 1; t <= i; ++t)
        result.emplace_back(t, Element::zero(total - (1 << (i - t))));
    for (auto c : x->support()) {
        const auto& [t, b] = labels[c];
        result[static_cast<std::size_t>(t - 1)].second.toggle(b);
    }
    return result;
}

} // namespace unst::steenrod
