#pragma once

// Minimal resolutions of unstable modules and the Ext groups they compute.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "unst/f2.hpp"
#include "unst/steenrod.hpp"
#include "unst/umod.hpp"

namespace unst::resolve {

using f2::BitMatrix;
using f2::BitVector;
using umod::GradedModule;
using umod::ModuleMap;
using umod::ModulePtr;

/* Projective side */

// A direct sum of free unstable modules F(|g|), one per generator g, through
// internal degree window(). Degree t has basis Sq^I g for generators g (in
// order) and admissible I of degree t - |g| and excess <= |g|. Generators
// must be added in nondecreasing degree, so existing coordinates never move.
class FreeSum {
public:
    explicit FreeSum(int window = 0);

    int window() const { return window_; }
    std::size_t add_generator(int degree);
    std::size_t generators() const { return degrees_.size(); }
    int generator_degree(std::size_t g) const { return degrees_[g]; }
    const std::vector<int>& generator_degrees() const { return degrees_; }
    std::size_t dim(int t) const
    {
        return t < 0 || t > window_ ? 0 : dims_[static_cast<std::size_t>(t)];
    }

    // Coordinate of Sq^I g in degree |g| + |I|.
    std::size_t index(std::size_t g, const steenrod::Admissible& I) const;
    std::size_t offset(int t, std::size_t g) const { return offsets_[static_cast<std::size_t>(t)][g]; }
    struct BasisElement {
        std::size_t generator;
        const steenrod::Admissible* op;
    };
    BasisElement basis(int t, std::size_t i) const;
    std::string label(int t, std::size_t i) const;
    BitVector generator_vector(std::size_t g) const;

    // Sq^a on a vector of degree t; zero vector of dim(t + a) outside the
    // window.
    BitVector act(int a, int t, const BitVector& v) const;
    BitVector act(const steenrod::Admissible& I, int t, const BitVector& v) const;

private:
    int window_;
    std::vector<int> degrees_;
    std::vector<std::size_t> dims_;
    std::vector<std::vector<std::size_t>> offsets_;
};

// Thrown when a resolution term outgrows the configured dimension limit.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Minimal projective resolution P_0 <- P_1 <- ... of a module M, exact in
// internal degrees <= window.
class ProjectiveResolution {
public:
    ProjectiveResolution(ModulePtr base, int window);

    // extend() throws ResourceLimit once some P_s^t would exceed this
    // dimension; the stages built so far stay valid. 0 means no limit.
    void set_dimension_limit(std::size_t limit) { limit_ = limit; }

    const GradedModule& base() const { return *base_; }
    const ModulePtr& base_ptr() const { return base_; }
    int window() const { return window_; }

    // Computes terms until length() >= terms (P_0 .. P_{terms-1}).
    void extend(int terms);
    int length() const { return static_cast<int>(stages_.size()); }
    const FreeSum& term(int s) const { return stages_[static_cast<std::size_t>(s)].module; }
    // Image of generator g of P_s in P_{s-1} (or in M for s = 0).
    const BitVector& boundary(int s, std::size_t g) const
    {
        return stages_[static_cast<std::size_t>(s)].images[g];
    }
    std::size_t target_dim(int s, int t) const;
    // d_s in degree t as a matrix P_s^t -> P_{s-1}^t (or M^t).
    const BitMatrix& differential(int s, int t) const;
    BitVector apply_differential(int s, int t, const BitVector& v) const;
    // Pivot-canonical x in P_s^t with d_s x = y, if any.
    std::optional<BitVector> lift(int s, int t, const BitVector& y) const;

    struct Certificate {
        bool exact = true;   // rank identities at every stage and degree
        bool minimal = true; // boundaries land in the decomposables
        std::vector<std::string> failures;
    };
    Certificate certify() const;

    nlohmann::json to_json() const;

private:
    struct Stage {
        FreeSum module;
        std::vector<BitVector> images;
        std::vector<std::vector<BitVector>> columns; // d of each basis element, per degree
        std::vector<std::vector<BitVector>> kernels; // kernel of d per degree (newest stage only)
        mutable std::vector<std::optional<BitMatrix>> matrices;
        mutable std::vector<std::optional<f2::Subspace>> spans; // column spans for lifting
    };
    BitVector act_target(int s, int a, int t, const BitVector& v) const;
    void build_stage();

    ModulePtr base_;
    int window_;
    std::size_t limit_ = 0;
    std::vector<Stage> stages_;
};

// Degree-preserving chain map between two resolutions covering a module map
// f: M' -> M, given by the images of the generators.
class ChainMap {
public:
    // Lifts f: source.base() -> target.base() through the first `terms` terms.
    ChainMap(const ProjectiveResolution& source, const ProjectiveResolution& target, const ModuleMap& f, int terms);

    int length() const { return static_cast<int>(images_.size()); }
    // Image of generator g of P'_s in P_s.
    const BitVector& image(int s, std::size_t g) const { return images_[static_cast<std::size_t>(s)][g]; }

private:
    std::vector<std::vector<BitVector>> images_;
};

/* Cochains and Ext */

// Hom(P_s, N) = prod over generators g of N^{|g|}, restricted to generators of
// degree <= t_max; a quotient complex of the full cochain complex.
class Cochains {
public:
    Cochains(const ProjectiveResolution& p, ModulePtr n, int t_max);

    int t_max() const { return t_max_; }
    const GradedModule& coefficients() const { return *n_; }
    std::size_t dim(int s) const;
    std::size_t offset(int s, std::size_t g) const { return offsets_[static_cast<std::size_t>(s)][g]; }
    // Number of generators of P_s with degree <= t_max.
    std::size_t generators(int s) const { return offsets_[static_cast<std::size_t>(s)].size() - 1; }
    // delta : C^s -> C^{s+1}.
    const BitMatrix& delta(int s) const;
    // Evaluation of a cochain on an element of P_s of degree t.
    BitVector evaluate(int s, const BitVector& phi, int t, const BitVector& x) const;

private:
    const ProjectiveResolution& p_;
    ModulePtr n_;
    int t_max_;
    std::vector<std::vector<std::size_t>> offsets_;
    mutable std::map<int, BitMatrix> delta_;
};

// H^s of a cochain complex with a chosen basis.
class Cohomology {
public:
    // delta_in : C^{s-1} -> C^s (may have zero columns), delta_out : C^s -> C^{s+1}.
    Cohomology(const BitMatrix& delta_in, const BitMatrix& delta_out);
    std::size_t dim() const { return reps_.size(); }
    const std::vector<BitVector>& representatives() const { return reps_; }
    bool is_cocycle(const BitVector& z) const { return out_.apply(z).is_zero(); }
    // Coordinates of the class of a cocycle; throws std::invalid_argument if
    // z is not a cocycle.
    BitVector coordinates(const BitVector& z) const;

private:
    BitMatrix out_;
    f2::Subspace span_; // boundaries first, then the representatives
    std::size_t boundary_generators_ = 0;
    std::vector<std::size_t> rep_generator_;
    std::vector<BitVector> reps_;
};

struct ExtTable {
    int d_max = 0;
    int window = 0;
    // entries[d][t] = dim Ext^d computed from the resolution through internal
    // degree t, or -1 when unavailable.
    std::vector<std::vector<int>> entries;
    int value(int d) const { return entries[static_cast<std::size_t>(d)][static_cast<std::size_t>(window)]; }
    int at(int d, int t) const { return entries[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)]; }
    nlohmann::json to_json() const;
};

// Needs p.length() >= d_max + 2 (extended on demand when not const).
ExtTable ext_groups(ProjectiveResolution& p, const ModulePtr& n, int d_max);
ExtTable ext_groups(const ModulePtr& m, const ModulePtr& n, int d_max, int window);

struct LinearMap {
    BitMatrix matrix; // target coordinates x source coordinates
    std::size_t rank() const { return f2::rank(matrix); }
    bool injective() const { return rank() == matrix.cols(); }
    std::vector<BitVector> kernel() const { return f2::kernel_basis(matrix); }
};

// Ext^d(f, N) : Ext^d(M, N) -> Ext^d(M', N) for f: M' -> M.
LinearMap induced_ext_map(const ProjectiveResolution& p_source, const ProjectiveResolution& p_target,
                          const ModuleMap& f, const ModulePtr& n, int d);
// Ext^d(M, g) : Ext^d(M, N) -> Ext^d(M, N') for g: N -> N'.
LinearMap pushforward_ext_map(const ProjectiveResolution& p, const ModuleMap& g, int d);
// Ext^d(M, N) -> Ext^d(Phi M, Phi N); q resolves Phi M with q.window() <= 2 p.window().
LinearMap ext_frobenius_map(const ProjectiveResolution& p, const ProjectiveResolution& q, const ModulePtr& n, int d);

// dim Ext^d(M, J(n)) in two ways: the cochain complex Hom(P, J(n)), and the
// dual of the homology of the degree-n slice of P.
struct DualityCheck {
    int via_cochains;
    int via_slice;
};
DualityCheck duality_check(ProjectiveResolution& p, int n, int d);

/* Injective side */

struct InjectiveTerm {
    std::vector<int> indices; // Brown-Gitler summands, in order
    ModulePtr module;
    std::string name() const { return umod::bg_name(indices); }
};

ModulePtr brown_gitler_sum(const std::vector<int>& indices);

struct InjectiveHull {
    InjectiveTerm term;
    ModuleMap embedding;
    bool injective = false;
    bool essential = false; // socle of the hull lies in the image
};

// Hull of a finite module; degree-0 classes go to copies of J(0) = F2.
// Throws std::invalid_argument for truncated input.
InjectiveHull injective_hull(const ModulePtr& m);

struct InjectiveResolution {
    ModulePtr base;
    std::vector<InjectiveTerm> terms;
    ModuleMap embedding;                   // base -> I^0
    std::vector<ModuleMap> differentials; // I^j -> I^{j+1}
    bool complete = false; // the last cokernel vanished within the budget
    bool exact = false;
    bool minimal = false;
    std::vector<std::string> failures;

    std::string summary() const; // "J(8) ; J(7,6) ; J(6,4)"
    nlohmann::json to_json() const;
};

InjectiveResolution minimal_injective_resolution(const ModulePtr& m, int steps);

// Matrix of Steenrod operations theta (rows: target summands, columns: source
// summands) with block(b, a) = •theta : J(n_a) -> J(m_b), where •theta has
// functional y -> top coefficient of theta y on J(n_a)^{m_b}. Throws
// std::logic_error if a block is not of this form.
std::vector<std::vector<steenrod::Element>> operation_matrix(const ModuleMap& g, const std::vector<int>& source,
                                                             const std::vector<int>& target);

// The map •theta : J(n) -> J(m).
ModuleMap bullet(const steenrod::Element& theta, int n, int m);
// Block map between Brown-Gitler sums from a matrix of operations.
ModuleMap bullet_matrix(const std::vector<std::vector<steenrod::Element>>& ops, const std::vector<int>& source,
                        const std::vector<int>& target);

// Is there an automorphism alpha of the target sum with alpha o g = h?
bool equal_up_to_target_automorphism(const ModuleMap& g, const ModuleMap& h, const std::vector<int>& target);

} // namespace unst::resolve
