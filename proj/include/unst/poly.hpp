#pragma once

// Truncated polynomial algebras F_2[u_1, ..., u_k] with |u_j| = 1 and the
// Steenrod action determined by Sq(u) = u + u^2 and the Cartan formula.
// This is the independent check on Adem normalization: it never consults
// the Adem relations.

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "unst/steenrod.hpp"

namespace unst::poly {

// Monomials packed into one 64-bit word, floor(64 / vars) bits per exponent.
class Ring {
public:
    // Throws std::invalid_argument when exponents up to max_degree do not fit.
    Ring(int vars, int max_degree);

    int vars() const { return vars_; }
    int max_degree() const { return max_degree_; }

    std::uint64_t monomial(std::span<const int> exponents) const;
    int exponent(std::uint64_t m, int var) const
    {
        return static_cast<int>((m >> (bits_ * var)) & mask_);
    }
    int degree(std::uint64_t m) const;
    std::string to_string(std::uint64_t m) const;

    // All monomials of the given degree, increasing as packed words.
    std::vector<std::uint64_t> monomials(int degree) const;

private:
    int vars_;
    int max_degree_;
    int bits_;
    std::uint64_t mask_;
};

// Sorted distinct monomials (GF(2) coefficients).
using Polynomial = std::vector<std::uint64_t>;

// Optional cache of Sq^a on monomials, owned by the caller.
class ActionCache {
public:
    explicit ActionCache(const Ring& ring) : ring_(ring) {}
    const Ring& ring() const { return ring_; }
    const Polynomial& sq(int a, std::uint64_t m);

private:
    const Ring& ring_;
    std::unordered_map<std::uint64_t, std::unordered_map<int, Polynomial>> table_;
};

// Sq^a on a single monomial: sum over i_j subsets of e_j (binomial parity)
// with sum i_j = a of prod u_j^{e_j + i_j}.
Polynomial sq_monomial(const Ring& ring, int a, std::uint64_t m);

// Sq^{w_1} ... Sq^{w_m} applied to p (rightmost first). Throws
// std::invalid_argument when deg(p) + |w| exceeds the ring's max_degree.
Polynomial act_word(const Ring& ring, std::span<const int> word, const Polynomial& p, ActionCache* cache = nullptr);

Polynomial act_on_polynomials(const steenrod::Element& e, const Ring& ring, const Polynomial& p,
                              ActionCache* cache = nullptr);

std::string to_string(const Ring& ring, const Polynomial& p);

} // namespace unst::poly
