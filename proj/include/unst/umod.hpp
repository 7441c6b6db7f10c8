#pragma once

// Unstable modules over the Steenrod algebra on a bounded degree window,
// stored with explicit matrices for every Sq^k.

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "unst/f2.hpp"
#include "unst/steenrod.hpp"

namespace unst::umod {

using f2::BitMatrix;
using f2::BitVector;

class GradedModule {
public:
    GradedModule() = default;
    // Zero action; labels default to "e<n>_<i>". A truncated module is the
    // degree <= window part of an infinite one; otherwise it vanishes above
    // the window.
    GradedModule(int window, std::vector<std::size_t> dims, bool truncated);

    int window() const { return window_; }
    bool truncated() const { return truncated_; }
    std::size_t dim(int n) const
    {
        return n < 0 || n > window_ ? 0 : dims_[static_cast<std::size_t>(n)];
    }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t total_dim() const;
    // Largest degree with a nonzero class, or -1.
    int top_degree() const;
    // Smallest degree with a nonzero class, or -1.
    int bottom_degree() const;
    bool is_zero() const { return top_degree() < 0; }

    const std::string& label(int n, std::size_t i) const { return labels_[static_cast<std::size_t>(n)][i]; }
    void set_label(int n, std::size_t i, std::string label);

    // Sq^k : M^n -> M^{n+k}. The identity for k = 0; a zero matrix of the
    // right shape when k > n or n + k leaves the window.
    BitMatrix sq(int k, int n) const;
    const BitMatrix* stored_sq(int k, int n) const;
    void set_sq(int k, int n, BitMatrix m);
    BitVector apply_sq(int k, int n, const BitVector& v) const;
    // Action of a Steenrod element on a vector of degree n (result in degree
    // n + |e|; zero vector when that degree is outside the window).
    BitVector apply(const steenrod::Element& e, int n, const BitVector& v) const;
    BitMatrix matrix(const steenrod::Element& e, int n) const;
    BitMatrix matrix(const steenrod::Admissible& m, int n) const;

    bool operator==(const GradedModule& other) const = default;

private:
    int window_ = 0;
    bool truncated_ = false;
    std::vector<std::size_t> dims_;
    std::vector<std::vector<std::string>> labels_;
    // action_[n][k - 1] for 1 <= k <= min(n, window - n).
    std::vector<std::vector<BitMatrix>> action_;
};

using ModulePtr = std::shared_ptr<const GradedModule>;

template <class... Args>
ModulePtr make_module(Args&&... args)
{
    return std::make_shared<const GradedModule>(std::forward<Args>(args)...);
}

// A degree-preserving linear map; blocks exist for degrees 0..window() with
// window() = min of the two windows.
class ModuleMap {
public:
    ModuleMap() = default;
    // The zero map.
    ModuleMap(ModulePtr source, ModulePtr target);

    const GradedModule& source() const { return *source_; }
    const GradedModule& target() const { return *target_; }
    const ModulePtr& source_ptr() const { return source_; }
    const ModulePtr& target_ptr() const { return target_; }
    int window() const { return static_cast<int>(blocks_.size()) - 1; }

    const BitMatrix& block(int n) const { return blocks_[static_cast<std::size_t>(n)]; }
    void set_block(int n, BitMatrix m);
    BitVector apply(int n, const BitVector& v) const;

    bool is_zero() const;
    bool is_injective() const;
    bool is_surjective() const;

private:
    ModulePtr source_;
    ModulePtr target_;
    std::vector<BitMatrix> blocks_;
};

ModuleMap identity_map(const ModulePtr& m);
// g after f; requires f.target() and g.source() to be the same object or equal.
ModuleMap compose(const ModuleMap& g, const ModuleMap& f);
ModuleMap operator+(const ModuleMap& a, const ModuleMap& b);

struct Violation {
    enum class Kind { Instability, Adem, Shape, NotAModuleMap } kind;
    int a = 0; // first operation (or k for single-operation checks)
    int b = 0; // second operation of an Adem pair
    int n = 0; // source degree
    std::string to_string() const;
};

// Instability and Adem consistency: for a < 2b with a + b <= window, the
// composite Sq^a Sq^b equals the normalized relation on every degree where
// both sides are inside the window.
std::vector<Violation> validate(const GradedModule& m);
// Commutation with every Sq^k on the common window.
std::vector<Violation> validate(const ModuleMap& f);

/* Constructors */

// F(n) through degree D: basis Sq^I i_n, I admissible of excess <= n.
ModulePtr free_module(int n, int D);
// J(n) in Miller's model: monomials in x_0, x_1, ... of weight n, with
// Sq(x_i) = x_i + x_{i-1}^2 and the Cartan formula.
ModulePtr brown_gitler(int n);
// The module F2 concentrated in degree 0.
ModulePtr ground_field();
ModulePtr suspension(const GradedModule& m, int s);
ModulePtr sigma_simple(int n);
// Phi M: (Phi M)^{2n} = M^n, Sq^{2k} Phi x = Phi Sq^k x, odd squares zero.
ModulePtr frobenius(const GradedModule& m);
ModulePtr frobenius_power(const GradedModule& m, int r);
// lambda_M : Phi M -> M, Phi x -> Sq_0 x, on the window where it is defined.
ModuleMap lambda(const ModulePtr& m);
// lambda^k = lambda o Phi(lambda^{k-1}) : Phi^k M -> M.
ModuleMap lambda_power(const ModulePtr& m, int k);
// Phi applied to a map.
ModuleMap frobenius(const ModuleMap& f);
// Cartan formula. The window is the range where every summand is faithful,
// optionally capped.
ModulePtr tensor(const GradedModule& m, const GradedModule& n, int window_cap = -1);
ModulePtr direct_sum(const std::vector<ModulePtr>& parts);
// The degree <= D part; truncated unless the module already vanishes above D
// and was finite.
ModulePtr truncate(const GradedModule& m, int D);
// Truncated F_2[u_1..u_k] through degree D.
ModulePtr cohomology_BV(int k, int D);
// F(1) / Phi^r F(1), spanned by u, u^2, ..., u^{2^{r-1}}.
ModulePtr h_module(int r);

struct Quotient {
    ModulePtr module;
    ModuleMap projection;
};

// Cokernel of a degreewise injective map into m; throws std::invalid_argument
// if the map is not injective.
Quotient quotient(const ModuleMap& inclusion);
// Cokernel of an arbitrary map, with coordinates from the free columns of the
// image in each degree.
Quotient cokernel(const ModuleMap& f);

struct Sub {
    ModulePtr module;
    ModuleMap inclusion;
};

Sub kernel(const ModuleMap& f);
Sub image(const ModuleMap& f);

/* Structure */

// Joint kernel of all Sq^k, k >= 1, per degree. Rejects truncated modules.
std::vector<f2::Subspace> socle(const GradedModule& m);
// M / (sum of images of Sq^k, k >= 1), per degree.
std::vector<f2::QuotientMap> top(const GradedModule& m);
// Finite modules: every class is killed by an iterate of Sq_0.
bool is_nilpotent(const GradedModule& m);
// lambda injective on the window where it is defined.
bool is_reduced(const GradedModule& m);

/* Maps into Brown-Gitler modules */

// dim Hom(M, J(n)) = dim M^n.
std::size_t hom_to_J_dim(const GradedModule& m, int n);
// The map M -> J(n) whose degree n component is x -> f(x) x_0^n. Throws
// std::logic_error if the commutation constraints are inconsistent.
ModuleMap realize_into_J(const ModulePtr& m, int n, const BitVector& functional, const ModulePtr& jn = nullptr);
// One realized map per coordinate functional on M^n.
std::vector<ModuleMap> hom_to_J(const ModulePtr& m, int n);

// "J(7,6)" for a multiset of Brown-Gitler indices (printed decreasing), "0"
// for the empty multiset.
std::string bg_name(std::vector<int> indices);

nlohmann::json to_json(const GradedModule& m);
nlohmann::json to_json(const ModuleMap& f);

} // namespace unst::umod
