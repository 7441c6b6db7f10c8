#pragma once

// The mod 2 Steenrod algebra in the admissible (Serre-Cartan) basis.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unst/f2.hpp"

namespace unst::steenrod {

using Word = std::vector<int>;

bool is_admissible(std::span<const int> exponents);

// Sq^{i_1} ... Sq^{i_m} with i_k >= 2 i_{k+1} and i_m >= 1. The empty
// sequence is the unit.
class Admissible {
public:
    static constexpr std::size_t max_length = 16;

    Admissible() = default;
    // Throws std::invalid_argument unless the sequence is admissible.
    explicit Admissible(std::span<const int> exponents);
    Admissible(std::initializer_list<int> exponents) : Admissible(std::span<const int>(exponents.begin(), exponents.size())) {}
    // Skips the admissibility check; callers guarantee it.
    static Admissible trusted(std::span<const int> exponents);

    std::size_t length() const { return length_; }
    bool is_unit() const { return length_ == 0; }
    int operator[](std::size_t i) const { return exps_[i]; }
    int first() const { return length_ ? exps_[0] : 0; }
    int degree() const;
    int excess() const;
    Word exponents() const;
    // Drops the first factor.
    Admissible tail() const;
    // Sq^a * this; the caller checks that the result is admissible.
    Admissible prepend(int a) const;

    bool operator==(const Admissible&) const = default;
    std::strong_ordering operator<=>(const Admissible& other) const;

    std::size_t hash() const;

private:
    std::array<std::uint16_t, max_length> exps_{};
    std::uint8_t length_ = 0;
};

int excess(const Admissible& m);

struct AdmissibleHash {
    std::size_t operator()(const Admissible& m) const { return m.hash(); }
};

// A homogeneous element: a set of admissible monomials of one degree, the
// set semantics encoding GF(2) coefficients.
class Element {
public:
    Element() = default;
    static Element zero(int degree) { return Element(degree); }
    static Element unit() { return Element(Admissible{}); }
    // Sq^i (the unit when i == 0).
    static Element sq(int i);
    explicit Element(const Admissible& m) : degree_(m.degree()), terms_{m} {}
    // Sum of the given monomials with multiplicities taken mod 2.
    static Element from_terms(int degree, std::vector<Admissible> terms);

    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }
    // Sorted increasing in the lexicographic order of exponent sequences.
    const std::vector<Admissible>& terms() const { return terms_; }
    bool contains(const Admissible& m) const;
    // Adds one monomial (toggles its coefficient).
    void toggle(const Admissible& m);

    Element& operator+=(const Element& other);
    friend Element operator+(Element a, const Element& b) { return a += b; }
    bool operator==(const Element& other) const;

private:
    explicit Element(int degree) : degree_(degree) {}
    int degree_ = 0;
    std::vector<Admissible> terms_;
};

// Binomial coefficient mod 2 (Lucas); zero when k < 0 or k > n.
inline bool binom2(int n, int k) { return n >= 0 && k >= 0 && k <= n && (k & ~n) == 0; }

// Adem relation for a < 2b: the admissible pairs (a+b-c, c), c = 0..a/2, with
// odd coefficient binom(b-c-1, a-2c). A trailing Sq^0 is dropped, so terms
// have length one or two. Memoized; safe to call concurrently.
const std::vector<Admissible>& adem_relation(int a, int b);

// Sq^{word} in the admissible basis. Entries equal to 0 are units and are
// dropped; negative entries are rejected with std::invalid_argument.
Element adem_normalize(std::span<const int> word);
inline Element adem_normalize(std::initializer_list<int> word)
{
    return adem_normalize(std::span<const int>(word.begin(), word.size()));
}

Element multiply(const Element& a, const Element& b);

// Sq^a * Sq^J normalized, memoized on (a, J).
const Element& sq_times(int a, const Admissible& J);

// Sq^a applied to the basis element Sq^J i_n of the free unstable module
// F(n): the admissible terms of Sq^a Sq^J of excess <= n. Computed by Adem
// recursion on the leading pair with instability pruning, memoized on
// (a, J, min(n, a + |J|)). Safe to call concurrently.
const Element& free_act(int a, const Admissible& J, int n);

// All admissible monomials of the given degree, ordered by excess and then
// lexicographically, so that those of excess <= n form a prefix.
const std::vector<Admissible>& admissible_basis(int degree);
// Number of monomials of admissible_basis(degree) with excess <= n.
std::size_t admissible_count(int degree, int max_excess);
// Position of m in admissible_basis(m.degree()).
std::size_t admissible_index(const Admissible& m);

// Text syntax. Monomials print as "Sq^{6,1}", the unit as "1", zero as "0",
// sums joined with " + " in decreasing lexicographic order.
std::string to_string(const Admissible& m);
std::string to_string(const Element& e);

// Accepts products of factors "Sq^a", "Sq^{a}", "Sqa" and "Sq^{a,b,...}"
// (the latter meaning Sq^a Sq^b ...), optionally separated by spaces, sums
// separated by '+', and the literals "0" and "1". Throws std::invalid_argument
// on malformed input or inhomogeneous sums.
Element parse_element(std::string_view text);
// A single product, returned unnormalized.
Word parse_word(std::string_view text);

// Q^n_k = Sq^{2^k} Sq^{2^{k+1}} ... Sq^{2^n} normalized; requires n >= k >= 0.
Element wall_monomial(int n, int k);

// Q^{n_0}_{k_0} Q^{n_1}_{k_1} ... with factors strictly decreasing in the
// lexicographic order of (n, k).
struct WallMonomial {
    std::vector<std::pair<int, int>> factors;

    int degree() const;
    bool is_ordered() const;
    Word word() const;
    Element expand() const;
};

std::vector<WallMonomial> wall_basis(int degree);

// The subalgebra A(n) generated by Sq^1, Sq^2, ..., Sq^{2^n}, spanned degree
// by degree up to a cap.
class SubalgebraSpan {
public:
    SubalgebraSpan(int n, int degree_cap);

    int generator_bound() const { return n_; }
    int degree_cap() const { return cap_; }
    std::size_t dim(int degree) const;
    bool contains(const Element& e) const;

private:
    int n_;
    int cap_;
    // Per degree, the span inside the coordinates of admissible_basis(degree).
    std::vector<f2::Subspace> levels_;
};

bool in_subalgebra(const Element& e, int n, int degree_cap);

// Elements m^t (t = 1..i) with Sq^{2^i} Sq^{2^j} = sum_t Sq^{2^{i-t}} m^t,
// for 0 <= j <= i-2 or j == i. The pivot-canonical solution of the linear
// system over the admissible basis is returned.
std::vector<std::pair<int, Element>> wall_m_decomposition(int i, int j);

} // namespace unst::steenrod
