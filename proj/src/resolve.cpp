#include "unst/resolve.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "memo.hpp"

namespace unst::resolve {

using steenrod::Admissible;
using steenrod::Element;

/* FreeSum */

FreeSum::FreeSum(int window)
    : window_(window), dims_(static_cast<std::size_t>(window) + 1, 0), offsets_(static_cast<std::size_t>(window) + 1)
{
    if (window < 0)
        throw std::invalid_argument("FreeSum: negative window");
}

std::size_t FreeSum::add_generator(int degree)
{
    if (degree < 0 || degree > window_)
        throw std::invalid_argument("FreeSum::add_generator: degree outside the window");
    if (!degrees_.empty() && degree < degrees_.back())
        throw std::invalid_argument("FreeSum::add_generator: degrees must be nondecreasing");
    degrees_.push_back(degree);
    for (int t = degree; t <= window_; ++t) {
        offsets_[static_cast<std::size_t>(t)].push_back(dims_[static_cast<std::size_t>(t)]);
        dims_[static_cast<std::size_t>(t)] += steenrod::admissible_count(t - degree, degree);
    }
    return degrees_.size() - 1;
}

std::size_t FreeSum::index(std::size_t g, const Admissible& I) const
{
    const int t = degrees_[g] + I.degree();
    return offset(t, g) + steenrod::admissible_index(I);
}

FreeSum::BasisElement FreeSum::basis(int t, std::size_t i) const
{
    const auto& offs = offsets_[static_cast<std::size_t>(t)];
    const auto it = std::upper_bound(offs.begin(), offs.end(), i);
    const std::size_t g = static_cast<std::size_t>(it - offs.begin()) - 1;
    const auto& ops = steenrod::admissible_basis(t - degrees_[g]);
    return {g, &ops[i - offs[g]]};
}

std::string FreeSum::label(int t, std::size_t i) const
{
    const auto b = basis(t, i);
    const std::string gen = "g" + std::to_string(b.generator);
    return b.op->is_unit() ? gen : steenrod::to_string(*b.op) + " " + gen;
}

BitVector FreeSum::generator_vector(std::size_t g) const
{
    const int t = degrees_[g];
    return BitVector::unit(dim(t), offset(t, g));
}

namespace {

// Sq^a : F(n)^t -> F(n)^{t+a} in admissible-index coordinates, as a sparse
// column list.
struct ActionTable {
    std::vector<std::uint32_t> start;
    std::vector<std::uint32_t> index;
};

const ActionTable& free_action(int n, int t, int a)
{
    static detail::Memo<std::uint64_t, ActionTable> memo;
    const std::uint64_t key =
        static_cast<std::uint64_t>(n) | static_cast<std::uint64_t>(t) << 20 | static_cast<std::uint64_t>(a) << 40;
    return memo.get(key, [n, t, a] {
        ActionTable table;
        const auto& ops = steenrod::admissible_basis(t - n);
        const std::size_t count = steenrod::admissible_count(t - n, n);
        table.start.reserve(count + 1);
        table.start.push_back(0);
        for (std::size_t i = 0; i < count; ++i) {
            for (const auto& term : steenrod::free_act(a, ops[i], n).terms())
                table.index.push_back(static_cast<std::uint32_t>(steenrod::admissible_index(term)));
            table.start.push_back(static_cast<std::uint32_t>(table.index.size()));
        }
        return table;
    });
}

} // namespace

BitVector FreeSum::act(int a, int t, const BitVector& v) const
{
    if (a == 0)
        return v;
    BitVector out(dim(t + a));
    if (t + a > window_ || v.is_zero())
        return out;
    const auto& offs = offsets_[static_cast<std::size_t>(t)];
    std::size_t g = 0;
    const ActionTable* table = nullptr;
    for (auto i : v.support()) {
        bool moved = table == nullptr;
        while (g + 1 < offs.size() && offs[g + 1] <= i) {
            ++g;
            moved = true;
        }
        if (moved)
            table = &free_action(degrees_[g], t, a);
        const std::size_t local = i - offs[g];
        const std::size_t base = offset(t + a, g);
        for (auto k = table->start[local]; k < table->start[local + 1]; ++k)
            out.flip(base + table->index[k]);
    }
    return out;
}

BitVector FreeSum::act(const Admissible& I, int t, const BitVector& v) const
{
    BitVector w = v;
    for (std::size_t k = I.length(); k-- > 0;) {
        w = act(I[k], t, w);
        t += I[k];
    }
    return w;
}

/* ProjectiveResolution */

ProjectiveResolution::ProjectiveResolution(ModulePtr base, int window) : base_(std::move(base)), window_(window)
{
    if (window < 0)
        throw std::invalid_argument("ProjectiveResolution: negative window");
    if (base_->truncated() && base_->window() < window)
        throw std::invalid_argument("ProjectiveResolution: module window is smaller than the resolution window");
}

std::size_t ProjectiveResolution::target_dim(int s, int t) const
{
    return s == 0 ? base_->dim(t) : term(s - 1).dim(t);
}

BitVector ProjectiveResolution::act_target(int s, int a, int t, const BitVector& v) const
{
    if (s == 0)
        return base_->apply_sq(a, t, v);
    return term(s - 1).act(a, t, v);
}

void ProjectiveResolution::extend(int terms)
{
    while (length() < terms)
        build_stage();
}

void ProjectiveResolution::build_stage()
{
    const int s = length();
    Stage st;
    st.module = FreeSum(window_);
    st.columns.resize(static_cast<std::size_t>(window_) + 1);
    st.kernels.resize(static_cast<std::size_t>(window_) + 1);
    st.matrices.resize(static_cast<std::size_t>(window_) + 1);
    st.spans.resize(static_cast<std::size_t>(window_) + 1);

    for (int t = 0; t <= window_; ++t) {
        const std::size_t rows = target_dim(s, t);
        auto& cols = st.columns[static_cast<std::size_t>(t)];
        const std::size_t existing = st.module.dim(t);
        cols.reserve(existing);
        for (std::size_t i = 0; i < existing; ++i) {
            const auto b = st.module.basis(t, i);
            // d(Sq^{i_1} Sq^{I'} g) = Sq^{i_1} d(Sq^{I'} g); the tail lives in
            // an earlier degree.
            const int a = (*b.op)[0];
            const std::size_t prev = st.module.index(b.generator, b.op->tail());
            cols.push_back(act_target(s, a, t - a, st.columns[static_cast<std::size_t>(t - a)][prev]));
        }
        // One elimination pass: relations among the columns span the kernel,
        // and cycles outside the span become new generators.
        f2::Subspace span(rows);
        std::vector<BitVector> kernel;
        for (const auto& c : cols)
            if (auto rel = span.insert_or_relation(c))
                kernel.push_back(std::move(*rel));
        auto consider = [&](const BitVector& z) {
            if (span.contains(z))
                return;
            span.insert(z);
            st.module.add_generator(t);
            st.images.push_back(z);
            cols.push_back(z);
        };
        if (s == 0) {
            for (std::size_t i = 0; i < rows; ++i)
                consider(BitVector::unit(rows, i));
        }
        else {
            for (const auto& z : stages_.back().kernels[static_cast<std::size_t>(t)])
                consider(z);
        }
        if (limit_ && cols.size() > limit_)
            throw ResourceLimit("resolution term " + std::to_string(s) + " reaches dimension " +
                                std::to_string(cols.size()) + " in internal degree " + std::to_string(t) +
                                " (limit " + std::to_string(limit_) + ")");
        for (auto& k : kernel)
            k.resize(cols.size());
        st.kernels[static_cast<std::size_t>(t)] = std::move(kernel);
    }
    // Only the newest stage's kernels are needed to continue.
    if (!stages_.empty())
        stages_.back().kernels.clear();
    stages_.push_back(std::move(st));
}

const BitMatrix& ProjectiveResolution::differential(int s, int t) const
{
    const Stage& st = stages_[static_cast<std::size_t>(s)];
    auto& m = st.matrices[static_cast<std::size_t>(t)];
    if (!m)
        m = BitMatrix::from_columns(st.columns[static_cast<std::size_t>(t)], target_dim(s, t));
    return *m;
}

BitVector ProjectiveResolution::apply_differential(int s, int t, const BitVector& v) const
{
    return differential(s, t).apply(v);
}

std::optional<BitVector> ProjectiveResolution::lift(int s, int t, const BitVector& y) const
{
    if (y.size() != target_dim(s, t))
        throw std::invalid_argument("ProjectiveResolution::lift: vector has the wrong length");
    if (y.is_zero())
        return BitVector(term(s).dim(t));
    auto& span = stages_[static_cast<std::size_t>(s)].spans[static_cast<std::size_t>(t)];
    if (!span) {
        span.emplace(target_dim(s, t));
        for (const auto& c : stages_[static_cast<std::size_t>(s)].columns[static_cast<std::size_t>(t)])
            span->insert(c);
    }
    return span->express(y);
}

ProjectiveResolution::Certificate ProjectiveResolution::certify() const
{
    Certificate c;
    auto fail = [&c](bool& flag, std::string what) {
        flag = false;
        c.failures.push_back(std::move(what));
    };
    const auto tops = umod::top(*umod::truncate(*base_, std::min(window_, base_->window())));
    for (int s = 0; s < length(); ++s) {
        const FreeSum& p = term(s);
        for (int t = 0; t <= window_; ++t) {
            const std::size_t r = f2::rank(differential(s, t));
            const std::size_t expected = s == 0 ? base_->dim(t) : term(s - 1).dim(t) - f2::rank(differential(s - 1, t));
            if (r != expected)
                fail(c.exact, "stage " + std::to_string(s) + " degree " + std::to_string(t) + ": image has dimension " +
                                  std::to_string(r) + ", expected " + std::to_string(expected));
        }
        for (std::size_t g = 0; g < p.generators(); ++g) {
            const int t = p.generator_degree(g);
            if (s > 0 && !apply_differential(s - 1, t, boundary(s, g)).is_zero())
                fail(c.exact, "stage " + std::to_string(s) + ": d o d nonzero on generator " + std::to_string(g));
            if (s > 0) {
                const FreeSum& prev = term(s - 1);
                for (std::size_t h = 0; h < prev.generators(); ++h)
                    if (prev.generator_degree(h) == t && boundary(s, g).get(prev.offset(t, h)))
                        fail(c.minimal, "stage " + std::to_string(s) + ": generator " + std::to_string(g) +
                                            " hits an indecomposable");
            }
        }
        if (s == 0) {
            for (int t = 0; t <= std::min(window_, base_->window()); ++t) {
                f2::Subspace images(tops[static_cast<std::size_t>(t)].dim());
                std::size_t count = 0;
                for (std::size_t g = 0; g < p.generators(); ++g)
                    if (p.generator_degree(g) == t) {
                        ++count;
                        if (!images.insert(tops[static_cast<std::size_t>(t)].project(boundary(0, g))))
                            fail(c.minimal, "cover: generators dependent modulo decomposables in degree " +
                                                std::to_string(t));
                    }
                if (count != tops[static_cast<std::size_t>(t)].dim())
                    fail(c.minimal, "cover: generator count differs from the top in degree " + std::to_string(t));
            }
        }
    }
    return c;
}

nlohmann::json ProjectiveResolution::to_json() const
{
    nlohmann::json j;
    j["flavor"] = "projective";
    j["valid_internal_degree"] = window_;
    nlohmann::json terms = nlohmann::json::array();
    for (int s = 0; s < length(); ++s)
        terms.push_back({{"generator_degrees", term(s).generator_degrees()}});
    j["terms"] = terms;
    const auto c = certify();
    j["certificates"] = {{"exact", c.exact}, {"minimal", c.minimal}};
    return j;
}

/* ChainMap */

ChainMap::ChainMap(const ProjectiveResolution& source, const ProjectiveResolution& target, const ModuleMap& f,
                   int terms)
{
    if (source.length() < terms || target.length() < terms)
        throw std::invalid_argument("ChainMap: resolutions are too short");
    if (target.window() < source.window() || f.window() < source.window())
        throw std::invalid_argument("ChainMap: window mismatch");
    images_.resize(static_cast<std::size_t>(terms));
    for (int s = 0; s < terms; ++s) {
        const FreeSum& p = source.term(s);
        auto& out = images_[static_cast<std::size_t>(s)];
        for (std::size_t g = 0; g < p.generators(); ++g) {
            const int t = p.generator_degree(g);
            BitVector y;
            if (s == 0) {
                y = f.apply(t, source.boundary(0, g));
            }
            else {
                // Image of d g under the previous component.
                const FreeSum& src = source.term(s - 1);
                const FreeSum& dst = target.term(s - 1);
                y = BitVector(dst.dim(t));
                for (auto i : source.boundary(s, g).support()) {
                    const auto b = src.basis(t, i);
                    y ^= dst.act(*b.op, src.generator_degree(b.generator),
                                 images_[static_cast<std::size_t>(s - 1)][b.generator]);
                }
            }
            auto x = target.lift(s, t, y);
            if (!x)
                throw std::logic_error("ChainMap: lifting failed at stage " + std::to_string(s));
            out.push_back(std::move(*x));
        }
    }
}

/* Cochains */

namespace {

// Matrices of admissible monomials acting on a module, cached.
class ActionCache {
public:
    explicit ActionCache(const GradedModule& m) : m_(m) {}
    const BitMatrix& get(const Admissible& I, int n)
    {
        auto key = std::make_pair(n, I);
        auto it = cache_.find(key);
        if (it == cache_.end())
            it = cache_.emplace(key, m_.matrix(I, n)).first;
        return it->second;
    }

private:
    const GradedModule& m_;
    std::map<std::pair<int, Admissible>, BitMatrix> cache_;
};

void xor_paste(BitMatrix& dst, std::size_t r0, std::size_t c0, const BitMatrix& src)
{
    for (std::size_t r = 0; r < src.rows(); ++r)
        for (auto c : src.row(r).support())
            dst.flip(r0 + r, c0 + c);
}

// Matrix of x -> (phi -> phi(x)) block for an element x of P_s^t given in
// FreeSum coordinates: adds into rows [row0, row0 + N^t) of dst.
void add_evaluation(BitMatrix& dst, std::size_t row0, const FreeSum& p, const std::vector<std::size_t>& offsets,
                    int t, const BitVector& x, ActionCache& cache, const GradedModule& n)
{
    for (auto i : x.support()) {
        const auto b = p.basis(t, i);
        const int deg = p.generator_degree(b.generator);
        if (n.dim(deg) == 0 || b.generator + 1 >= offsets.size())
            continue;
        xor_paste(dst, row0, offsets[b.generator], cache.get(*b.op, deg));
    }
}

std::vector<std::size_t> cochain_offsets(const FreeSum& p, const GradedModule& n, int t_max)
{
    std::vector<std::size_t> offs{0};
    for (std::size_t g = 0; g < p.generators() && p.generator_degree(g) <= t_max; ++g)
        offs.push_back(offs.back() + n.dim(p.generator_degree(g)));
    return offs;
}

} // namespace

Cochains::Cochains(const ProjectiveResolution& p, ModulePtr n, int t_max) : p_(p), n_(std::move(n)), t_max_(t_max)
{
    if (t_max > p.window())
        throw std::invalid_argument("Cochains: t_max beyond the resolution window");
    if (n_->truncated() && n_->window() < t_max)
        throw std::invalid_argument("Cochains: coefficient module window too small");
    for (int s = 0; s < p.length(); ++s)
        offsets_.push_back(cochain_offsets(p.term(s), *n_, t_max));
}

std::size_t Cochains::dim(int s) const
{
    if (s < 0 || s >= static_cast<int>(offsets_.size()))
        return 0;
    return offsets_[static_cast<std::size_t>(s)].back();
}

const BitMatrix& Cochains::delta(int s) const
{
    auto it = delta_.find(s);
    if (it != delta_.end())
        return it->second;
    if (s + 1 >= p_.length())
        throw std::invalid_argument("Cochains::delta: resolution too short");
    BitMatrix m(dim(s + 1), dim(s));
    if (s >= 0) {
        ActionCache cache(*n_);
        const FreeSum& next = p_.term(s + 1);
        const FreeSum& cur = p_.term(s);
        for (std::size_t h = 0; h < generators(s + 1); ++h) {
            const int t = next.generator_degree(h);
            if (n_->dim(t) == 0)
                continue;
            add_evaluation(m, offset(s + 1, h), cur, offsets_[static_cast<std::size_t>(s)], t, p_.boundary(s + 1, h),
                           cache, *n_);
        }
    }
    return delta_.emplace(s, std::move(m)).first->second;
}

BitVector Cochains::evaluate(int s, const BitVector& phi, int t, const BitVector& x) const
{
    BitMatrix m(n_->dim(t), dim(s));
    ActionCache cache(*n_);
    add_evaluation(m, 0, p_.term(s), offsets_[static_cast<std::size_t>(s)], t, x, cache, *n_);
    return m.apply(phi);
}

/* Cohomology */

Cohomology::Cohomology(const BitMatrix& delta_in, const BitMatrix& delta_out) : out_(delta_out)
{
    const std::size_t n = delta_out.cols();
    if (delta_in.rows() != n)
        throw std::invalid_argument("Cohomology: incompatible differentials");
    span_ = f2::Subspace(n);
    for (std::size_t c = 0; c < delta_in.cols(); ++c)
        span_.insert(delta_in.column(c));
    boundary_generators_ = span_.generators();
    for (auto& z : f2::kernel_basis(delta_out)) {
        const std::size_t index = span_.generators();
        if (span_.insert(z)) {
            rep_generator_.push_back(index);
            reps_.push_back(std::move(z));
        }
    }
}

BitVector Cohomology::coordinates(const BitVector& z) const
{
    if (!is_cocycle(z))
        throw std::invalid_argument("Cohomology::coordinates: not a cocycle");
    auto c = span_.express(z);
    if (!c)
        throw std::logic_error("Cohomology::coordinates: cocycle outside the span");
    BitVector out(reps_.size());
    for (std::size_t i = 0; i < reps_.size(); ++i)
        if (c->get(rep_generator_[i]))
            out.set(i);
    return out;
}

/* Ext */

nlohmann::json ExtTable::to_json() const
{
    nlohmann::json j;
    j["d_max"] = d_max;
    j["window"] = window;
    nlohmann::json rows = nlohmann::json::array();
    for (int d = 0; d <= d_max; ++d) {
        nlohmann::json row;
        row["d"] = d;
        const int v = value(d);
        if (v < 0)
            row["value"] = "unavailable";
        else
            row["value"] = v;
        // Internal degrees at which the truncated value changes.
        nlohmann::json changes = nlohmann::json::array();
        int last = -2;
        for (int t = 0; t <= window; ++t) {
            if (at(d, t) != last) {
                changes.push_back({t, at(d, t)});
                last = at(d, t);
            }
        }
        row["by_internal_degree"] = changes;
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j;
}

namespace {

BitMatrix leading_block(const BitMatrix& m, std::size_t rows, std::size_t cols)
{
    return m.block(0, 0, std::min(rows, m.rows()), std::min(cols, m.cols()));
}

} // namespace

ExtTable ext_groups(ProjectiveResolution& p, const ModulePtr& n, int d_max)
{
    p.extend(d_max + 2);
    const int D = p.window();
    Cochains c(p, n, D);
    ExtTable table;
    table.d_max = d_max;
    table.window = D;
    table.entries.assign(static_cast<std::size_t>(d_max) + 1, std::vector<int>(static_cast<std::size_t>(D) + 1, -1));

    // Sizes of C^s restricted to generators of degree <= t.
    auto size_at = [&](int s, int t) -> std::size_t {
        if (s < 0)
            return 0;
        const FreeSum& f = p.term(s);
        std::size_t count = 0;
        while (count < c.generators(s) && f.generator_degree(count) <= t)
            ++count;
        return c.offset(s, count);
    };
    for (int d = 0; d <= d_max; ++d) {
        const BitMatrix& out = c.delta(d);
        const BitMatrix in = d > 0 ? c.delta(d - 1) : BitMatrix(c.dim(0), 0);
        std::size_t k_prev = 0, k_cur = 0, k_next = 0;
        int value = 0;
        for (int t = 0; t <= D; ++t) {
            const std::size_t a = size_at(d - 1, t), b = size_at(d, t), e = size_at(d + 1, t);
            // Recompute only when the truncated complex grows.
            if (t == 0 || a != k_prev || b != k_cur || e != k_next) {
                const std::size_t r_out = f2::rank(leading_block(out, e, b));
                const std::size_t r_in = d > 0 ? f2::rank(leading_block(in, b, a)) : 0;
                value = static_cast<int>(b - r_out - r_in);
                k_prev = a;
                k_cur = b;
                k_next = e;
            }
            table.entries[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)] = value;
        }
    }
    return table;
}

ExtTable ext_groups(const ModulePtr& m, const ModulePtr& n, int d_max, int window)
{
    ProjectiveResolution p(m, window);
    return ext_groups(p, n, d_max);
}

namespace {

Cohomology cohomology_at(const Cochains& c, int d)
{
    const BitMatrix in = d > 0 ? c.delta(d - 1) : BitMatrix(c.dim(0), 0);
    return Cohomology(in, c.delta(d));
}

LinearMap on_cohomology(const Cohomology& from, const Cohomology& to, const BitMatrix& cochain_map)
{
    LinearMap out{BitMatrix(to.dim(), from.dim())};
    for (std::size_t i = 0; i < from.dim(); ++i)
        out.matrix.set_column(i, to.coordinates(cochain_map.apply(from.representatives()[i])));
    return out;
}

} // namespace

LinearMap induced_ext_map(const ProjectiveResolution& p_source, const ProjectiveResolution& p_target,
                          const ModuleMap& f, const ModulePtr& n, int d)
{
    const int D = p_source.window();
    if (p_target.window() < D)
        throw std::invalid_argument("induced_ext_map: window mismatch");
    if (p_source.length() < d + 2 || p_target.length() < d + 2)
        throw std::invalid_argument("induced_ext_map: resolutions are too short");
    const ChainMap lift(p_source, p_target, f, d + 1);
    const Cochains c_target(p_target, n, D), c_source(p_source, n, D);
    // Pullback phi -> phi o f_d on generators of P'_d.
    BitMatrix pull(c_source.dim(d), c_target.dim(d));
    ActionCache cache(*n);
    const FreeSum& src = p_source.term(d);
    const std::vector<std::size_t> offs = cochain_offsets(p_target.term(d), *n, D);
    for (std::size_t g = 0; g < c_source.generators(d); ++g) {
        const int t = src.generator_degree(g);
        if (n->dim(t) == 0)
            continue;
        add_evaluation(pull, c_source.offset(d, g), p_target.term(d), offs, t, lift.image(d, g), cache, *n);
    }
    return on_cohomology(cohomology_at(c_target, d), cohomology_at(c_source, d), pull);
}

LinearMap pushforward_ext_map(const ProjectiveResolution& p, const ModuleMap& g, int d)
{
    const int D = p.window();
    if (g.window() < D)
        throw std::invalid_argument("pushforward_ext_map: window mismatch");
    const Cochains from(p, g.source_ptr(), D), to(p, g.target_ptr(), D);
    BitMatrix push(to.dim(d), from.dim(d));
    const FreeSum& f = p.term(d);
    for (std::size_t h = 0; h < from.generators(d); ++h) {
        const int t = f.generator_degree(h);
        push.paste(to.offset(d, h), from.offset(d, h), g.block(t));
    }
    return on_cohomology(cohomology_at(from, d), cohomology_at(to, d), push);
}

LinearMap ext_frobenius_map(const ProjectiveResolution& p, const ProjectiveResolution& q, const ModulePtr& n, int d)
{
    if (q.window() > 2 * p.window())
        throw std::invalid_argument("ext_frobenius_map: window overflow");
    if (p.length() < d + 2 || q.length() < d + 2)
        throw std::invalid_argument("ext_frobenius_map: resolutions are too short");
    // c_s : Q_s -> Phi P_s, recorded as y with c_s(q) = Phi y (y = 0 in odd degrees).
    std::vector<std::vector<BitVector>> c(static_cast<std::size_t>(d) + 1);
    for (int s = 0; s <= d; ++s) {
        const FreeSum& qs = q.term(s);
        for (std::size_t g = 0; g < qs.generators(); ++g) {
            const int t = qs.generator_degree(g);
            if (t % 2) {
                c[static_cast<std::size_t>(s)].push_back(BitVector(p.term(s).dim(t / 2)));
                continue;
            }
            BitVector y;
            if (s == 0) {
                y = q.boundary(0, g); // in (Phi M)^t = M^{t/2}
            }
            else {
                const FreeSum& prev_q = q.term(s - 1);
                const FreeSum& prev_p = p.term(s - 1);
                y = BitVector(prev_p.dim(t / 2));
                for (auto i : q.boundary(s, g).support()) {
                    const auto b = prev_q.basis(t, i);
                    // Sq^I Phi x = Phi Sq^{I/2} x if I is even, else 0.
                    bool even = true;
                    std::vector<int> half;
                    for (std::size_t k = 0; k < b.op->length(); ++k) {
                        even &= (*b.op)[k] % 2 == 0;
                        half.push_back((*b.op)[k] / 2);
                    }
                    if (!even)
                        continue;
                    const int deg = prev_q.generator_degree(b.generator);
                    if (deg % 2)
                        continue;
                    y ^= prev_p.act(Admissible::trusted(half), deg / 2,
                                    c[static_cast<std::size_t>(s - 1)][b.generator]);
                }
            }
            auto x = p.lift(s, t / 2, y);
            if (!x)
                throw std::logic_error("ext_frobenius_map: lifting failed at stage " + std::to_string(s));
            c[static_cast<std::size_t>(s)].push_back(std::move(*x));
        }
    }
    const ModulePtr phi_n = umod::frobenius(*n);
    const Cochains cp(p, n, p.window()), cq(q, phi_n, q.window());
    BitMatrix m(cq.dim(d), cp.dim(d));
    ActionCache cache(*n);
    const std::vector<std::size_t> offs = cochain_offsets(p.term(d), *n, p.window());
    const FreeSum& qd = q.term(d);
    for (std::size_t g = 0; g < cq.generators(d); ++g) {
        const int t = qd.generator_degree(g);
        if (t % 2 || n->dim(t / 2) == 0)
            continue;
        add_evaluation(m, cq.offset(d, g), p.term(d), offs, t / 2, c[static_cast<std::size_t>(d)][g], cache, *n);
    }
    return on_cohomology(cohomology_at(cp, d), cohomology_at(cq, d), m);
}

DualityCheck duality_check(ProjectiveResolution& p, int n, int d)
{
    p.extend(d + 2);
    if (p.window() < n)
        throw std::invalid_argument("duality_check: window below n");
    const Cochains c(p, umod::brown_gitler(n), p.window());
    const int via_cochains = static_cast<int>(cohomology_at(c, d).dim());
    const std::size_t here = p.term(d).dim(n);
    const std::size_t out = d > 0 ? f2::rank(p.differential(d, n)) : 0;
    const std::size_t in = f2::rank(p.differential(d + 1, n));
    return {via_cochains, static_cast<int>(here - out - in)};
}

/* Injective side */

ModulePtr brown_gitler_sum(const std::vector<int>& indices)
{
    if (indices.empty())
        return umod::make_module(GradedModule(0, {0}, false));
    std::vector<ModulePtr> parts;
    for (int n : indices)
        parts.push_back(umod::brown_gitler(n));
    return umod::direct_sum(parts);
}

namespace {

// Offsets of each summand of a Brown-Gitler sum in degree t.
std::vector<std::size_t> summand_offsets(const std::vector<int>& indices, int t)
{
    std::vector<std::size_t> offs{0};
    for (int n : indices)
        offs.push_back(offs.back() + umod::brown_gitler(n)->dim(t));
    return offs;
}

// Vertical stacking of maps from one module into the summands of a sum.
ModuleMap stack_maps(const ModulePtr& source, const ModulePtr& target, const std::vector<ModuleMap>& maps)
{
    ModuleMap f(source, target);
    for (int t = 0; t <= f.window(); ++t) {
        BitMatrix block(0, source->dim(t));
        for (const auto& m : maps)
            block = block.stack_below(t <= m.window() ? m.block(t) : BitMatrix(m.target().dim(t), source->dim(t)));
        f.set_block(t, std::move(block));
    }
    return f;
}

} // namespace

InjectiveHull injective_hull(const ModulePtr& m)
{
    if (m->truncated())
        throw std::invalid_argument("injective_hull: module is truncated");
    const auto soc = umod::socle(*m);
    std::vector<int> indices;
    std::vector<ModuleMap> maps;
    for (int n = m->window(); n >= 0; --n) {
        const auto& s = soc[static_cast<std::size_t>(n)];
        if (s.dim() == 0)
            continue;
        const ModulePtr jn = umod::brown_gitler(n);
        // Coordinate functionals at the pivots restrict to the dual basis of
        // the reduced echelon basis of the socle.
        for (auto pivot : s.pivots()) {
            indices.push_back(n);
            maps.push_back(umod::realize_into_J(m, n, BitVector::unit(m->dim(n), pivot), jn));
        }
    }
    InjectiveHull hull;
    hull.term.indices = indices;
    hull.term.module = brown_gitler_sum(indices);
    hull.embedding = stack_maps(m, hull.term.module, maps);
    hull.injective = hull.embedding.is_injective();
    const auto hull_socle = umod::socle(*hull.term.module);
    hull.essential = true;
    for (int t = 0; t <= hull.embedding.window(); ++t) {
        if (t > hull.term.module->window())
            break;
        f2::Subspace img(hull.term.module->dim(t));
        for (std::size_t c = 0; c < hull.embedding.block(t).cols(); ++c)
            img.insert(hull.embedding.block(t).column(c));
        for (const auto& v : hull_socle[static_cast<std::size_t>(t)].basis())
            hull.essential &= img.contains(v);
    }
    return hull;
}

std::string InjectiveResolution::summary() const
{
    std::string s;
    for (const auto& t : terms) {
        if (!s.empty())
            s += " ; ";
        s += t.name();
    }
    return s.empty() ? "0" : s;
}

nlohmann::json InjectiveResolution::to_json() const
{
    nlohmann::json j;
    j["flavor"] = "injective";
    nlohmann::json ts = nlohmann::json::array();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        nlohmann::json t;
        t["index"] = i;
        t["brown_gitler"] = terms[i].indices;
        t["name"] = terms[i].name();
        if (i + 1 < terms.size()) {
            nlohmann::json blocks = nlohmann::json::array();
            for (const auto& row : operation_matrix(differentials[i], terms[i].indices, terms[i + 1].indices)) {
                nlohmann::json r = nlohmann::json::array();
                for (const auto& e : row)
                    r.push_back(steenrod::to_string(e));
                blocks.push_back(r);
            }
            t["differential"] = blocks;
        }
        ts.push_back(t);
    }
    j["terms"] = ts;
    j["complete"] = complete;
    j["certificates"] = {{"exact", exact}, {"minimal", minimal}};
    if (!failures.empty())
        j["failures"] = failures;
    return j;
}

InjectiveResolution minimal_injective_resolution(const ModulePtr& m, int steps)
{
    InjectiveResolution r;
    r.base = m;
    r.exact = true;
    r.minimal = true;
    if (steps < 1)
        throw std::invalid_argument("minimal_injective_resolution: steps must be positive");
    auto hull = injective_hull(m);
    if (!hull.injective || !hull.essential) {
        r.minimal = false;
        r.failures.push_back("hull of the module is not an essential embedding");
    }
    r.terms.push_back(hull.term);
    r.embedding = hull.embedding;
    ModuleMap current = hull.embedding;
    while (true) {
        const auto coker = umod::cokernel(current);
        if (coker.module->is_zero()) {
            r.complete = true;
            break;
        }
        if (static_cast<int>(r.terms.size()) >= steps)
            break;
        auto next = injective_hull(coker.module);
        if (!next.injective || !next.essential) {
            r.minimal = false;
            r.failures.push_back("hull " + std::to_string(r.terms.size()) + " is not an essential embedding");
        }
        // Minimality: the next term's summands count the cokernel's socle.
        const auto soc = umod::socle(*coker.module);
        std::size_t socle_total = 0;
        for (const auto& s : soc)
            socle_total += s.dim();
        if (socle_total != next.term.indices.size()) {
            r.minimal = false;
            r.failures.push_back("term " + std::to_string(r.terms.size()) + " does not match the cokernel socle");
        }
        ModuleMap d = umod::compose(next.embedding, coker.projection);
        r.terms.push_back(next.term);
        r.differentials.push_back(d);
        current = d;
    }

    // Exactness: the embedding is injective, consecutive composites vanish,
    // and ranks add up at every term and degree.
    if (!r.embedding.is_injective()) {
        r.exact = false;
        r.failures.push_back("embedding is not injective");
    }
    for (std::size_t j = 0; j < r.terms.size(); ++j) {
        const ModuleMap& in = j == 0 ? r.embedding : r.differentials[j - 1];
        const bool has_out = j < r.differentials.size();
        const GradedModule& term = *r.terms[j].module;
        for (int t = 0; t <= term.window(); ++t) {
            const std::size_t rin = t <= in.window() ? f2::rank(in.block(t)) : 0;
            std::size_t rout = 0;
            if (has_out) {
                const auto& out = r.differentials[j];
                if (t <= out.window()) {
                    rout = f2::rank(out.block(t));
                    if (t <= in.window() && !(out.block(t) * in.block(t)).is_zero()) {
                        r.exact = false;
                        r.failures.push_back("composite nonzero at term " + std::to_string(j));
                    }
                }
            }
            // ker(out) = im(in) unless this is the last term of an
            // unfinished resolution.
            if ((has_out || r.complete) && term.dim(t) - rout != rin) {
                r.exact = false;
                r.failures.push_back("not exact at term " + std::to_string(j) + " degree " + std::to_string(t));
            }
        }
    }
    return r;
}

/* Operations between Brown-Gitler modules */

ModuleMap bullet(const Element& theta, int n, int m)
{
    const ModulePtr jn = umod::brown_gitler(n);
    BitVector functional(jn->dim(m));
    if (!theta.is_zero()) {
        if (theta.degree() != n - m)
            throw std::invalid_argument("bullet: operation has the wrong degree");
        for (std::size_t i = 0; i < jn->dim(m); ++i)
            if (jn->apply(theta, m, BitVector::unit(jn->dim(m), i)).get(0))
                functional.set(i);
    }
    if (m > n)
        return ModuleMap(jn, umod::brown_gitler(m));
    return umod::realize_into_J(jn, m, functional);
}

namespace {

BitMatrix sub_block(const ModuleMap& g, int t, const std::vector<int>& source, const std::vector<int>& target,
                    std::size_t a, std::size_t b)
{
    const auto so = summand_offsets(source, t), to = summand_offsets(target, t);
    return g.block(t).block(to[b], so[a], to[b + 1] - to[b], so[a + 1] - so[a]);
}

} // namespace

std::vector<std::vector<Element>> operation_matrix(const ModuleMap& g, const std::vector<int>& source,
                                                   const std::vector<int>& target)
{
    std::vector<std::vector<Element>> out(target.size());
    for (std::size_t b = 0; b < target.size(); ++b) {
        for (std::size_t a = 0; a < source.size(); ++a) {
            const int n = source[a], m = target[b];
            Element theta = Element::zero(std::max(n - m, 0));
            if (m <= n) {
                const ModulePtr jn = umod::brown_gitler(n);
                const BitMatrix top = sub_block(g, m, source, target, a, b); // 1 x dim J(n)^m
                const auto& ops = steenrod::admissible_basis(n - m);
                const std::size_t count = steenrod::admissible_count(n - m, m);
                BitMatrix pairing(jn->dim(m), count);
                for (std::size_t i = 0; i < jn->dim(m); ++i)
                    for (std::size_t c = 0; c < count; ++c)
                        if (jn->apply(Element(ops[c]), m, BitVector::unit(jn->dim(m), i)).get(0))
                            pairing.set(i, c);
                auto coeffs = f2::solve(pairing, top.row(0));
                if (!coeffs)
                    throw std::logic_error("operation_matrix: block is not given by an operation");
                for (auto c : coeffs->support())
                    theta.toggle(ops[c]);
            }
            // The realized map must reproduce the whole block.
            const ModuleMap realized = bullet(theta, n, m);
            for (int t = 0; t <= std::min(n, g.window()); ++t) {
                const BitMatrix actual = sub_block(g, t, source, target, a, b);
                const BitMatrix expected =
                    t <= realized.window() ? realized.block(t) : BitMatrix(actual.rows(), actual.cols());
                if (actual != expected)
                    throw std::logic_error("operation_matrix: block disagrees with its operation");
            }
            out[b].push_back(std::move(theta));
        }
    }
    return out;
}

ModuleMap bullet_matrix(const std::vector<std::vector<Element>>& ops, const std::vector<int>& source,
                        const std::vector<int>& target)
{
    const ModulePtr s = brown_gitler_sum(source), t = brown_gitler_sum(target);
    ModuleMap f(s, t);
    for (std::size_t b = 0; b < target.size(); ++b)
        for (std::size_t a = 0; a < source.size(); ++a) {
            const ModuleMap piece = bullet(ops[b][a], source[a], target[b]);
            for (int d = 0; d <= std::min(f.window(), piece.window()); ++d) {
                const auto so = summand_offsets(source, d), to = summand_offsets(target, d);
                BitMatrix block = f.block(d);
                block.paste(to[b], so[a], piece.block(d));
                f.set_block(d, std::move(block));
            }
        }
    return f;
}

namespace {

BitVector flatten(const ModuleMap& f)
{
    BitVector out(0);
    for (int t = 0; t <= f.window(); ++t)
        for (std::size_t r = 0; r < f.block(t).rows(); ++r)
            out = out.concat(f.block(t).row(r));
    return out;
}

} // namespace

bool equal_up_to_target_automorphism(const ModuleMap& g, const ModuleMap& h, const std::vector<int>& target)
{
    // Basis of End(target): •theta between summands for admissible theta.
    std::vector<ModuleMap> endo;
    for (std::size_t b = 0; b < target.size(); ++b)
        for (std::size_t a = 0; a < target.size(); ++a) {
            const int n = target[a], m = target[b];
            if (m > n)
                continue;
            const auto& ops = steenrod::admissible_basis(n - m);
            for (std::size_t c = 0; c < steenrod::admissible_count(n - m, m); ++c) {
                std::vector<std::vector<Element>> mat(target.size(),
                                                      std::vector<Element>(target.size(), Element::zero(0)));
                mat[b][a] = Element(ops[c]);
                endo.push_back(bullet_matrix(mat, target, target));
            }
        }
    std::vector<BitVector> columns;
    for (const auto& e : endo)
        columns.push_back(flatten(umod::compose(e, g)));
    const BitVector rhs = flatten(h);
    const BitMatrix system = BitMatrix::from_columns(columns, rhs.size());
    auto x = f2::solve(system, rhs);
    if (!x)
        return false;
    const auto kernel = f2::kernel_basis(system);
    if (kernel.size() > 16)
        throw std::logic_error("equal_up_to_target_automorphism: solution space too large to search");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << kernel.size()); ++mask) {
        BitVector c = *x;
        for (std::size_t k = 0; k < kernel.size(); ++k)
            if (mask >> k & 1)
                c ^= kernel[k];
        ModuleMap alpha(endo.front().source_ptr(), endo.front().target_ptr());
        for (auto i : c.support())
            alpha = alpha + endo[i];
        if (alpha.is_injective())
            return true;
    }
    return false;
}

} // namespace unst::resolve
