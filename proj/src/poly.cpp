#include "unst/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace unst::poly {

namespace {

Polynomial normalize(std::vector<std::uint64_t> terms)
{
    std::sort(terms.begin(), terms.end());
    Polynomial out;
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i;
        while (j < terms.size() && terms[j] == terms[i])
            ++j;
        if ((j - i) & 1)
            out.push_back(terms[i]);
        i = j;
    }
    return out;
}

int degree_of(const Ring& ring, const Polynomial& p)
{
    int d = 0;
    for (auto m : p)
        d = std::max(d, ring.degree(m));
    return d;
}

} // namespace

Ring::Ring(int vars, int max_degree) : vars_(vars), max_degree_(max_degree)
{
    if (vars < 1 || vars > 64 || max_degree < 0)
        throw std::invalid_argument("poly::Ring: bad dimensions");
    bits_ = 64 / vars;
    if (bits_ < 64 && (std::uint64_t{1} << bits_) <= static_cast<std::uint64_t>(max_degree))
        throw std::invalid_argument("poly::Ring: exponents up to " + std::to_string(max_degree) + " do not fit in " +
                                    std::to_string(bits_) + " bits");
    mask_ = bits_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits_) - 1;
}

std::uint64_t Ring::monomial(std::span<const int> exponents) const
{
    if (exponents.size() != static_cast<std::size_t>(vars_))
        throw std::invalid_argument("poly::Ring::monomial: wrong number of exponents");
    std::uint64_t m = 0;
    int d = 0;
    for (int j = 0; j < vars_; ++j) {
        if (exponents[j] < 0)
            throw std::invalid_argument("poly::Ring::monomial: negative exponent");
        d += exponents[j];
        m |= static_cast<std::uint64_t>(exponents[j]) << (bits_ * j);
    }
    if (d > max_degree_)
        throw std::invalid_argument("poly::Ring::monomial: degree above truncation");
    return m;
}

int Ring::degree(std::uint64_t m) const
{
    int d = 0;
    for (int j = 0; j < vars_; ++j)
        d += exponent(m, j);
    return d;
}

std::string Ring::to_string(std::uint64_t m) const
{
    std::string s;
    for (int j = 0; j < vars_; ++j) {
        const int e = exponent(m, j);
        if (e == 0)
            continue;
        if (!s.empty())
            s += '*';
        s += "u" + std::to_string(j + 1);
        if (e > 1)
            s += "^" + std::to_string(e);
    }
    return s.empty() ? "1" : s;
}

std::vector<std::uint64_t> Ring::monomials(int degree) const
{
    std::vector<std::uint64_t> out;
    std::vector<int> e(static_cast<std::size_t>(vars_), 0);
    auto rec = [&](auto&& self, int var, int remaining) -> void {
        if (var == vars_ - 1) {
            e[static_cast<std::size_t>(var)] = remaining;
            out.push_back(monomial(e));
            return;
        }
        for (int x = 0; x <= remaining; ++x) {
            e[static_cast<std::size_t>(var)] = x;
            self(self, var + 1, remaining - x);
        }
    };
    if (degree >= 0 && degree <= max_degree_)
        rec(rec, 0, degree);
    std::sort(out.begin(), out.end());
    return out;
}

Polynomial sq_monomial(const Ring& ring, int a, std::uint64_t m)
{
    if (a == 0)
        return {m};
    const int d = ring.degree(m);
    if (a > d)
        return {};
    if (d + a > ring.max_degree())
        throw std::invalid_argument("poly::sq_monomial: result above truncation degree");
    const int k = ring.vars();
    std::vector<int> e(static_cast<std::size_t>(k)), pick(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
        e[static_cast<std::size_t>(j)] = ring.exponent(m, j);
    std::vector<std::uint64_t> terms;
    // Choose i_j as a bit-subset of e_j (odd binomial), distributing a.
    auto rec = [&](auto&& self, int var, int remaining) -> void {
        if (var == k) {
            if (remaining != 0)
                return;
            std::vector<int> out(static_cast<std::size_t>(k));
            for (int j = 0; j < k; ++j)
                out[static_cast<std::size_t>(j)] = e[static_cast<std::size_t>(j)] + pick[static_cast<std::size_t>(j)];
            terms.push_back(ring.monomial(out));
            return;
        }
        const int ej = e[static_cast<std::size_t>(var)];
        for (int sub = ej;; sub = (sub - 1) & ej) {
            if (sub <= remaining) {
                pick[static_cast<std::size_t>(var)] = sub;
                self(self, var + 1, remaining - sub);
            }
            if (sub == 0)
                break;
        }
    };
    rec(rec, 0, a);
    return normalize(std::move(terms));
}

const Polynomial& ActionCache::sq(int a, std::uint64_t m)
{
    auto& row = table_[m];
    auto it = row.find(a);
    if (it == row.end())
        it = row.emplace(a, sq_monomial(ring_, a, m)).first;
    return it->second;
}

Polynomial act_word(const Ring& ring, std::span<const int> word, const Polynomial& p, ActionCache* cache)
{
    int total = 0;
    for (int x : word) {
        if (x < 0)
            throw std::invalid_argument("poly::act_word: negative exponent");
        total += x;
    }
    if (!p.empty() && degree_of(ring, p) + total > ring.max_degree())
        throw std::invalid_argument("poly::act_word: result above truncation degree");
    Polynomial current = p;
    for (auto it = word.rbegin(); it != word.rend() && !current.empty(); ++it) {
        std::vector<std::uint64_t> terms;
        for (auto m : current) {
            if (cache) {
                const auto& r = cache->sq(*it, m);
                terms.insert(terms.end(), r.begin(), r.end());
            }
            else {
                const auto r = sq_monomial(ring, *it, m);
                terms.insert(terms.end(), r.begin(), r.end());
            }
        }
        current = normalize(std::move(terms));
    }
    return current;
}

Polynomial act_on_polynomials(const steenrod::Element& e, const Ring& ring, const Polynomial& p, ActionCache* cache)
{
    std::vector<std::uint64_t> terms;
    for (const auto& m : e.terms()) {
        const auto w = m.exponents();
        const auto r = act_word(ring, w, p, cache);
        terms.insert(terms.end(), r.begin(), r.end());
    }
    if (e.is_zero() && !p.empty() && degree_of(ring, p) + e.degree() > ring.max_degree())
        throw std::invalid_argument("poly::act_on_polynomials: result above truncation degree");
    return normalize(std::move(terms));
}

std::string to_string(const Ring& ring, const Polynomial& p)
{
    if (p.empty())
        return "0";
    std::string s;
    for (auto m : p) {
        if (!s.empty())
            s += " + ";
        s += ring.to_string(m);
    }
    return s;
}

} // namespace unst::poly
