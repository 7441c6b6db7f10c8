#include "unst/umod.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "unst/poly.hpp"

namespace unst::umod {

using steenrod::Admissible;
using steenrod::Element;

/* GradedModule */

GradedModule::GradedModule(int window, std::vector<std::size_t> dims, bool truncated)
    : window_(window), truncated_(truncated), dims_(std::move(dims))
{
    if (window < 0 || dims_.size() != static_cast<std::size_t>(window) + 1)
        throw std::invalid_argument("GradedModule: dims must cover degrees 0..window");
    labels_.resize(dims_.size());
    action_.resize(dims_.size());
    for (int n = 0; n <= window_; ++n) {
        auto& names = labels_[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < dim(n); ++i)
            names.push_back("e" + std::to_string(n) + "_" + std::to_string(i));
        auto& row = action_[static_cast<std::size_t>(n)];
        for (int k = 1; n + k <= window_; ++k)
            row.emplace_back(dim(n + k), dim(n));
    }
}

std::size_t GradedModule::total_dim() const
{
    std::size_t total = 0;
    for (auto d : dims_)
        total += d;
    return total;
}

int GradedModule::top_degree() const
{
    for (int n = window_; n >= 0; --n)
        if (dim(n))
            return n;
    return -1;
}

int GradedModule::bottom_degree() const
{
    for (int n = 0; n <= window_; ++n)
        if (dim(n))
            return n;
    return -1;
}

void GradedModule::set_label(int n, std::size_t i, std::string label)
{
    labels_.at(static_cast<std::size_t>(n)).at(i) = std::move(label);
}

const BitMatrix* GradedModule::stored_sq(int k, int n) const
{
    if (k < 1 || n < 0 || n + k > window_)
        return nullptr;
    return &action_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k - 1)];
}

BitMatrix GradedModule::sq(int k, int n) const
{
    if (k == 0)
        return BitMatrix::identity(dim(n));
    if (const BitMatrix* m = stored_sq(k, n))
        return *m;
    return BitMatrix(dim(n + k), dim(n));
}

void GradedModule::set_sq(int k, int n, BitMatrix m)
{
    if (k < 1 || n < 0 || n + k > window_)
        throw std::invalid_argument("GradedModule::set_sq: degrees outside the window");
    if (m.rows() != dim(n + k) || m.cols() != dim(n))
        throw std::invalid_argument("GradedModule::set_sq: matrix has the wrong shape");
    action_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k - 1)] = std::move(m);
}

BitVector GradedModule::apply_sq(int k, int n, const BitVector& v) const
{
    if (k == 0)
        return v;
    if (const BitMatrix* m = stored_sq(k, n))
        return m->apply(v);
    return BitVector(dim(n + k));
}

BitVector GradedModule::apply(const Element& e, int n, const BitVector& v) const
{
    BitVector result(dim(n + e.degree()));
    for (const auto& m : e.terms()) {
        BitVector w = v;
        int degree = n;
        for (std::size_t i = m.length(); i-- > 0 && !w.is_zero();) {
            w = apply_sq(m[i], degree, w);
            degree += m[i];
        }
        if (!w.is_zero())
            result ^= w;
    }
    return result;
}

BitMatrix GradedModule::matrix(const Admissible& m, int n) const
{
    BitMatrix result = BitMatrix::identity(dim(n));
    int degree = n;
    for (std::size_t i = m.length(); i-- > 0;) {
        result = sq(m[i], degree) * result;
        degree += m[i];
    }
    return result;
}

BitMatrix GradedModule::matrix(const Element& e, int n) const
{
    BitMatrix result(dim(n + e.degree()), dim(n));
    for (const auto& m : e.terms())
        result ^= matrix(m, n);
    return result;
}

/* ModuleMap */

namespace {

int map_window(const GradedModule& s, const GradedModule& t)
{
    constexpr int inf = std::numeric_limits<int>::max();
    int w = inf;
    if (s.truncated())
        w = std::min(w, s.window());
    if (t.truncated())
        w = std::min(w, t.window());
    if (w == inf)
        w = std::max(s.window(), t.window());
    return w;
}

bool same_module(const ModulePtr& a, const ModulePtr& b) { return a == b || *a == *b; }

} // namespace

ModuleMap::ModuleMap(ModulePtr source, ModulePtr target) : source_(std::move(source)), target_(std::move(target))
{
    const int w = map_window(*source_, *target_);
    for (int n = 0; n <= w; ++n)
        blocks_.emplace_back(target_->dim(n), source_->dim(n));
}

void ModuleMap::set_block(int n, BitMatrix m)
{
    if (n < 0 || n > window())
        throw std::invalid_argument("ModuleMap::set_block: degree outside the window");
    if (m.rows() != target_->dim(n) || m.cols() != source_->dim(n))
        throw std::invalid_argument("ModuleMap::set_block: matrix has the wrong shape");
    blocks_[static_cast<std::size_t>(n)] = std::move(m);
}

BitVector ModuleMap::apply(int n, const BitVector& v) const
{
    if (n < 0 || n > window())
        throw std::invalid_argument("ModuleMap::apply: degree outside the window");
    return block(n).apply(v);
}

bool ModuleMap::is_zero() const
{
    return std::all_of(blocks_.begin(), blocks_.end(), [](const BitMatrix& b) { return b.is_zero(); });
}

bool ModuleMap::is_injective() const
{
    return std::all_of(blocks_.begin(), blocks_.end(), [](const BitMatrix& b) { return f2::rank(b) == b.cols(); });
}

bool ModuleMap::is_surjective() const
{
    return std::all_of(blocks_.begin(), blocks_.end(), [](const BitMatrix& b) { return f2::rank(b) == b.rows(); });
}

ModuleMap identity_map(const ModulePtr& m)
{
    ModuleMap f(m, m);
    for (int n = 0; n <= f.window(); ++n)
        f.set_block(n, BitMatrix::identity(m->dim(n)));
    return f;
}

ModuleMap compose(const ModuleMap& g, const ModuleMap& f)
{
    if (!same_module(f.target_ptr(), g.source_ptr()))
        throw std::invalid_argument("compose: maps are not composable");
    ModuleMap h(f.source_ptr(), g.target_ptr());
    for (int n = 0; n <= std::min({h.window(), f.window(), g.window()}); ++n)
        h.set_block(n, g.block(n) * f.block(n));
    return h;
}

ModuleMap operator+(const ModuleMap& a, const ModuleMap& b)
{
    if (!same_module(a.source_ptr(), b.source_ptr()) || !same_module(a.target_ptr(), b.target_ptr()))
        throw std::invalid_argument("ModuleMap sum: different source or target");
    ModuleMap c(a.source_ptr(), a.target_ptr());
    for (int n = 0; n <= std::min(a.window(), b.window()); ++n)
        c.set_block(n, a.block(n) + b.block(n));
    return c;
}

/* Validation */

std::string Violation::to_string() const
{
    std::ostringstream os;
    switch (kind) {
    case Kind::Instability:
        os << "instability: Sq^" << a << " nonzero on degree " << n;
        break;
    case Kind::Adem:
        os << "Adem relation Sq^" << a << " Sq^" << b << " fails on degree " << n;
        break;
    case Kind::Shape:
        os << "shape: Sq^" << a << " on degree " << n << " has the wrong size";
        break;
    case Kind::NotAModuleMap:
        os << "map does not commute with Sq^" << a << " on degree " << n;
        break;
    }
    return os.str();
}

std::vector<Violation> validate(const GradedModule& m)
{
    std::vector<Violation> out;
    const int w = m.window();
    for (int n = 0; n <= w; ++n) {
        for (int k = n + 1; n + k <= w; ++k) {
            const BitMatrix* s = m.stored_sq(k, n);
            if (!s->is_zero())
                out.push_back({Violation::Kind::Instability, k, 0, n});
        }
    }
    for (int b = 1; b <= w; ++b) {
        for (int a = 1; a < 2 * b && a + b <= w; ++a) {
            const Element rel = steenrod::adem_normalize({a, b});
            // Degrees below b are covered by instability.
            for (int n = b; n + a + b <= w; ++n) {
                if (m.dim(n) == 0 || m.dim(n + a + b) == 0)
                    continue;
                if (m.sq(a, n + b) * m.sq(b, n) != m.matrix(rel, n))
                    out.push_back({Violation::Kind::Adem, a, b, n});
            }
        }
    }
    return out;
}

std::vector<Violation> validate(const ModuleMap& f)
{
    std::vector<Violation> out;
    const int w = f.window();
    for (int n = 0; n <= w; ++n) {
        for (int k = 1; n + k <= w; ++k) {
            if (f.source().dim(n) == 0 || f.target().dim(n + k) == 0)
                continue;
            if (f.block(n + k) * f.source().sq(k, n) != f.target().sq(k, n) * f.block(n))
                out.push_back({Violation::Kind::NotAModuleMap, k, 0, n});
        }
    }
    return out;
}

/* Constructors */

ModulePtr free_module(int n, int D)
{
    if (n < 1 || D < n)
        throw std::invalid_argument("free_module: requires n >= 1 and D >= n");
    std::vector<std::size_t> dims(static_cast<std::size_t>(D) + 1, 0);
    for (int t = n; t <= D; ++t)
        dims[static_cast<std::size_t>(t)] = steenrod::admissible_count(t - n, n);
    GradedModule m(D, dims, true);
    const std::string gen = "i_" + std::to_string(n);
    for (int t = n; t <= D; ++t) {
        const auto& basis = steenrod::admissible_basis(t - n);
        for (std::size_t i = 0; i < m.dim(t); ++i) {
            if (basis[i].is_unit()) {
                m.set_label(t, i, gen);
                continue;
            }
            std::string s = "Sq[";
            for (std::size_t j = 0; j < basis[i].length(); ++j)
                s += (j ? "," : "") + std::to_string(basis[i][j]);
            m.set_label(t, i, s + "]" + gen);
        }
        for (int k = 1; k <= t && t + k <= D; ++k) {
            BitMatrix a(m.dim(t + k), m.dim(t));
            for (std::size_t i = 0; i < m.dim(t); ++i)
                for (const auto& term : steenrod::free_act(k, basis[i], n).terms())
                    a.flip(steenrod::admissible_index(term), i);
            m.set_sq(k, t, std::move(a));
        }
    }
    return make_module(std::move(m));
}

namespace {

using Exponents = std::vector<int>; // e_i = exponent of x_i

void binary_partitions(int weight, int max_var, Exponents& e, std::vector<Exponents>& out)
{
    if (max_var < 0) {
        if (weight == 0)
            out.push_back(e);
        return;
    }
    for (int c = weight >> max_var; c >= 0; --c) {
        e[static_cast<std::size_t>(max_var)] = c;
        binary_partitions(weight - (c << max_var), max_var - 1, e, out);
    }
    e[static_cast<std::size_t>(max_var)] = 0;
}

std::string monomial_label(const Exponents& e)
{
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0)
            continue;
        if (!s.empty())
            s += '*';
        s += "x" + std::to_string(i);
        if (e[i] > 1)
            s += "^" + std::to_string(e[i]);
    }
    return s.empty() ? "1" : s;
}

} // namespace

ModulePtr brown_gitler(int n)
{
    if (n < 0)
        throw std::invalid_argument("brown_gitler: negative index");
    int vars = 1;
    while ((1 << vars) <= n)
        ++vars;
    std::vector<Exponents> monomials;
    Exponents scratch(static_cast<std::size_t>(vars), 0);
    binary_partitions(n, vars - 1, scratch, monomials);

    auto degree = [](const Exponents& e) {
        int d = 0;
        for (int x : e)
            d += x;
        return d;
    };
    std::vector<std::vector<Exponents>> by_degree(static_cast<std::size_t>(n) + 1);
    for (auto& e : monomials)
        by_degree[static_cast<std::size_t>(degree(e))].push_back(e);
    std::vector<std::size_t> dims;
    std::map<Exponents, std::size_t> index;
    for (auto& level : by_degree) {
        std::sort(level.begin(), level.end(), std::greater<>());
        for (std::size_t i = 0; i < level.size(); ++i)
            index[level[i]] = i;
        dims.push_back(level.size());
    }
    GradedModule m(n, dims, false);
    for (int d = 0; d <= n; ++d)
        for (std::size_t i = 0; i < m.dim(d); ++i)
            m.set_label(d, i, monomial_label(by_degree[static_cast<std::size_t>(d)][i]));

    // Sq^k(prod x_i^{e_i}) = sum over j_i subset of e_i (j_0 = 0), sum j_i = k,
    // of prod x_i^{e_i - j_i} x_{i-1}^{2 j_i}.
    for (int d = 0; d <= n; ++d) {
        for (int k = 1; k <= d && d + k <= n; ++k) {
            BitMatrix a(m.dim(d + k), m.dim(d));
            for (std::size_t col = 0; col < m.dim(d); ++col) {
                const Exponents& e = by_degree[static_cast<std::size_t>(d)][col];
                Exponents j(e.size(), 0);
                auto rec = [&](auto&& self, std::size_t var, int remaining) -> void {
                    if (var == e.size()) {
                        if (remaining != 0)
                            return;
                        Exponents out(e.size(), 0);
                        for (std::size_t i = 0; i < e.size(); ++i) {
                            out[i] += e[i] - j[i];
                            if (i > 0)
                                out[i - 1] += 2 * j[i];
                        }
                        a.flip(index.at(out), col);
                        return;
                    }
                    const int ev = var == 0 ? 0 : e[var];
                    for (int sub = ev;; sub = (sub - 1) & ev) {
                        if (sub <= remaining) {
                            j[var] = sub;
                            self(self, var + 1, remaining - sub);
                        }
                        if (sub == 0)
                            break;
                    }
                    j[var] = 0;
                };
                rec(rec, 0, k);
            }
            m.set_sq(k, d, std::move(a));
        }
    }
    return make_module(std::move(m));
}

ModulePtr ground_field()
{
    GradedModule m(0, {1}, false);
    m.set_label(0, 0, "1");
    return make_module(std::move(m));
}

ModulePtr suspension(const GradedModule& m, int s)
{
    if (s < 0)
        throw std::invalid_argument("suspension: negative shift");
    if (m.window() > std::numeric_limits<int>::max() - s)
        throw std::invalid_argument("suspension: window overflow");
    std::vector<std::size_t> dims(static_cast<std::size_t>(s), 0);
    dims.insert(dims.end(), m.dims().begin(), m.dims().end());
    GradedModule out(m.window() + s, dims, m.truncated());
    for (int n = 0; n <= m.window(); ++n) {
        for (std::size_t i = 0; i < m.dim(n); ++i)
            out.set_label(n + s, i, s == 0 ? m.label(n, i) : "s" + std::to_string(s) + "(" + m.label(n, i) + ")");
        for (int k = 1; n + k <= m.window(); ++k)
            out.set_sq(k, n + s, *m.stored_sq(k, n));
    }
    const auto bad = validate(out);
    if (!bad.empty())
        throw std::logic_error("suspension: result is not unstable: " + bad.front().to_string());
    return make_module(std::move(out));
}

ModulePtr sigma_simple(int n)
{
    auto m = suspension(*ground_field(), n);
    GradedModule out = *m;
    // Same name as the top class of J(n), which it is.
    out.set_label(n, 0, n == 0 ? "1" : n == 1 ? "x0" : "x0^" + std::to_string(n));
    return make_module(std::move(out));
}

ModulePtr frobenius(const GradedModule& m)
{
    const int w = 2 * m.window();
    std::vector<std::size_t> dims(static_cast<std::size_t>(w) + 1, 0);
    for (int n = 0; n <= m.window(); ++n)
        dims[static_cast<std::size_t>(2 * n)] = m.dim(n);
    GradedModule out(w, dims, m.truncated());
    for (int n = 0; n <= m.window(); ++n) {
        for (std::size_t i = 0; i < m.dim(n); ++i)
            out.set_label(2 * n, i, "Phi(" + m.label(n, i) + ")");
        for (int k = 1; n + k <= m.window(); ++k)
            out.set_sq(2 * k, 2 * n, *m.stored_sq(k, n));
    }
    return make_module(std::move(out));
}

ModulePtr frobenius_power(const GradedModule& m, int r)
{
    if (r < 0)
        throw std::invalid_argument("frobenius_power: negative exponent");
    ModulePtr out = make_module(m);
    for (int i = 0; i < r; ++i)
        out = frobenius(*out);
    return out;
}

ModuleMap lambda(const ModulePtr& m)
{
    ModuleMap f(frobenius(*m), m);
    for (int n = 0; 2 * n <= f.window(); ++n)
        f.set_block(2 * n, m->sq(n, n));
    return f;
}

ModuleMap frobenius(const ModuleMap& f)
{
    ModuleMap g(frobenius(f.source()), frobenius(f.target()));
    for (int n = 0; n <= f.window() && 2 * n <= g.window(); ++n)
        g.set_block(2 * n, f.block(n));
    return g;
}

ModuleMap lambda_power(const ModulePtr& m, int k)
{
    if (k < 0)
        throw std::invalid_argument("lambda_power: negative exponent");
    if (k == 0)
        return identity_map(m);
    ModuleMap result = lambda(m);
    for (int i = 1; i < k; ++i)
        result = compose(lambda(m), frobenius(result));
    return result;
}

ModulePtr tensor(const GradedModule& a, const GradedModule& b, int window_cap)
{
    const int la = std::max(a.bottom_degree(), 0), lb = std::max(b.bottom_degree(), 0);
    int w = a.window() + b.window();
    if (a.truncated())
        w = std::min(w, a.window() + lb);
    if (b.truncated())
        w = std::min(w, b.window() + la);
    const bool truncated = a.truncated() || b.truncated() || (window_cap >= 0 && window_cap < w);
    if (window_cap >= 0)
        w = std::min(w, window_cap);

    // Basis of degree t: for i = 0..t, the pairs (x, y) in a^i x b^{t-i}.
    std::vector<std::vector<std::size_t>> offset(static_cast<std::size_t>(w) + 1);
    std::vector<std::size_t> dims(static_cast<std::size_t>(w) + 1, 0);
    for (int t = 0; t <= w; ++t) {
        std::size_t total = 0;
        for (int i = 0; i <= t; ++i) {
            offset[static_cast<std::size_t>(t)].push_back(total);
            total += a.dim(i) * b.dim(t - i);
        }
        dims[static_cast<std::size_t>(t)] = total;
    }
    GradedModule out(w, dims, truncated);
    for (int t = 0; t <= w; ++t) {
        for (int i = 0; i <= t; ++i) {
            const std::size_t base = offset[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
            for (std::size_t x = 0; x < a.dim(i); ++x)
                for (std::size_t y = 0; y < b.dim(t - i); ++y)
                    out.set_label(t, base + x * b.dim(t - i) + y, a.label(i, x) + "|" + b.label(t - i, y));
        }
        for (int k = 1; k <= t && t + k <= w; ++k) {
            BitMatrix m(out.dim(t + k), out.dim(t));
            for (int i = 0; i <= t; ++i) {
                const int j = t - i;
                const std::size_t src = offset[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
                for (int p = 0; p <= k; ++p) {
                    // Sq^p x | Sq^{k-p} y lands in degrees (i + p, j + k - p).
                    if (p > i || k - p > j)
                        continue;
                    const BitMatrix sa = a.sq(p, i), sb = b.sq(k - p, j);
                    if (sa.is_zero() || sb.is_zero())
                        continue;
                    const std::size_t dst =
                        offset[static_cast<std::size_t>(t + k)][static_cast<std::size_t>(i + p)];
                    const std::size_t db = b.dim(j + k - p);
                    for (std::size_t x = 0; x < a.dim(i); ++x)
                        for (std::size_t y = 0; y < b.dim(j); ++y)
                            for (std::size_t x2 : sa.column(x).support())
                                for (std::size_t y2 : sb.column(y).support())
                                    m.flip(dst + x2 * db + y2, src + x * b.dim(j) + y);
                }
            }
            out.set_sq(k, t, std::move(m));
        }
    }
    return make_module(std::move(out));
}

ModulePtr direct_sum(const std::vector<ModulePtr>& parts)
{
    constexpr int inf = std::numeric_limits<int>::max();
    int w = inf, wmax = 0;
    bool truncated = false;
    for (const auto& p : parts) {
        wmax = std::max(wmax, p->window());
        if (p->truncated()) {
            w = std::min(w, p->window());
            truncated = true;
        }
    }
    if (w == inf)
        w = wmax;
    std::vector<std::size_t> dims(static_cast<std::size_t>(w) + 1, 0);
    for (const auto& p : parts)
        for (int n = 0; n <= w; ++n)
            dims[static_cast<std::size_t>(n)] += p->dim(n);
    // A finite summand reaching past the window makes the sum truncated.
    for (const auto& p : parts)
        if (p->top_degree() > w)
            truncated = true;
    GradedModule out(w, dims, truncated);
    std::vector<std::size_t> offset(static_cast<std::size_t>(w) + 1, 0);
    for (std::size_t s = 0; s < parts.size(); ++s) {
        const auto& p = *parts[s];
        for (int n = 0; n <= w; ++n) {
            const std::size_t base = offset[static_cast<std::size_t>(n)];
            for (std::size_t i = 0; i < p.dim(n); ++i)
                out.set_label(n, base + i, parts.size() == 1 ? p.label(n, i) : std::to_string(s) + ":" + p.label(n, i));
            for (int k = 1; n + k <= w; ++k) {
                const BitMatrix sq = p.sq(k, n);
                if (sq.is_zero())
                    continue;
                BitMatrix m = *out.stored_sq(k, n);
                m.paste(offset[static_cast<std::size_t>(n + k)], base, sq);
                out.set_sq(k, n, std::move(m));
            }
        }
        for (int n = 0; n <= w; ++n)
            offset[static_cast<std::size_t>(n)] += p.dim(n);
    }
    return make_module(std::move(out));
}

ModulePtr truncate(const GradedModule& m, int D)
{
    if (D < 0)
        throw std::invalid_argument("truncate: negative window");
    if (m.truncated() && D > m.window())
        throw std::invalid_argument("truncate: window beyond the faithful range");
    std::vector<std::size_t> dims(static_cast<std::size_t>(D) + 1, 0);
    for (int n = 0; n <= D; ++n)
        dims[static_cast<std::size_t>(n)] = m.dim(n);
    GradedModule out(D, dims, m.truncated() || m.top_degree() > D);
    for (int n = 0; n <= std::min(D, m.window()); ++n) {
        for (std::size_t i = 0; i < m.dim(n); ++i)
            out.set_label(n, i, m.label(n, i));
        for (int k = 1; n + k <= std::min(D, m.window()); ++k)
            out.set_sq(k, n, *m.stored_sq(k, n));
    }
    return make_module(std::move(out));
}

ModulePtr cohomology_BV(int k, int D)
{
    if (k < 1 || D < 1)
        throw std::invalid_argument("cohomology_BV: requires k >= 1 and D >= 1");
    const poly::Ring ring(k, D);
    std::vector<std::vector<std::uint64_t>> basis;
    std::vector<std::size_t> dims;
    for (int t = 0; t <= D; ++t) {
        basis.push_back(ring.monomials(t));
        dims.push_back(basis.back().size());
    }
    GradedModule m(D, dims, true);
    for (int t = 0; t <= D; ++t) {
        const auto& level = basis[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < level.size(); ++i)
            m.set_label(t, i, ring.to_string(level[i]));
        for (int a = 1; a <= t && t + a <= D; ++a) {
            const auto& target = basis[static_cast<std::size_t>(t + a)];
            BitMatrix s(target.size(), level.size());
            for (std::size_t i = 0; i < level.size(); ++i)
                for (auto mono : poly::sq_monomial(ring, a, level[i]))
                    s.flip(static_cast<std::size_t>(std::lower_bound(target.begin(), target.end(), mono) - target.begin()),
                           i);
            m.set_sq(a, t, std::move(s));
        }
    }
    return make_module(std::move(m));
}

ModulePtr h_module(int r)
{
    if (r < 1 || r > 20)
        throw std::invalid_argument("h_module: r out of range");
    const int D = 1 << r;
    const auto f1 = free_module(1, D);
    const auto phi_r = lambda_power(f1, r);
    const auto q = quotient(phi_r);
    // Phi^r F(1) contains every u^{2^j} with j >= r, so the quotient vanishes
    // above 2^{r-1}.
    const int top = 1 << (r - 1);
    std::vector<std::size_t> dims(static_cast<std::size_t>(top) + 1, 0);
    for (int n = 0; n <= top; ++n)
        dims[static_cast<std::size_t>(n)] = q.module->dim(n);
    GradedModule out(top, dims, false);
    for (int n = 0; n <= top; ++n) {
        for (std::size_t i = 0; i < out.dim(n); ++i)
            out.set_label(n, i, n == 1 ? "u" : "u^" + std::to_string(n));
        for (int k = 1; n + k <= top; ++k)
            out.set_sq(k, n, *q.module->stored_sq(k, n));
    }
    return make_module(std::move(out));
}

/* Kernels, images, cokernels */

Quotient cokernel(const ModuleMap& f)
{
    const auto& t = f.target();
    const int w = f.window();
    std::vector<f2::QuotientMap> q;
    std::vector<std::size_t> dims;
    for (int n = 0; n <= w; ++n) {
        f2::Subspace img(t.dim(n));
        for (std::size_t c = 0; c < f.source().dim(n); ++c)
            img.insert(f.block(n).column(c));
        q.emplace_back(std::move(img));
        dims.push_back(q.back().dim());
    }
    const bool truncated = t.truncated() || (f.source().truncated() && w < t.top_degree());
    GradedModule out(w, dims, truncated);
    for (int n = 0; n <= w; ++n) {
        const auto& qn = q[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < qn.dim(); ++i)
            out.set_label(n, i, t.label(n, qn.free_columns()[i]));
        for (int k = 1; n + k <= w; ++k) {
            BitMatrix s(out.dim(n + k), out.dim(n));
            for (std::size_t i = 0; i < qn.dim(); ++i)
                s.set_column(i, q[static_cast<std::size_t>(n + k)].project(t.apply_sq(k, n, qn.lift(i))));
            out.set_sq(k, n, std::move(s));
        }
    }
    auto module = make_module(std::move(out));
    ModuleMap proj(f.target_ptr(), module);
    for (int n = 0; n <= std::min(w, proj.window()); ++n)
        proj.set_block(n, q[static_cast<std::size_t>(n)].matrix());
    return {module, proj};
}

Quotient quotient(const ModuleMap& inclusion)
{
    if (!inclusion.is_injective())
        throw std::invalid_argument("quotient: the map is not injective");
    return cokernel(inclusion);
}

namespace {

// Submodule of the target spanned per degree by the given vectors (already a
// subspace closed under the action), with coordinates from the Subspace
// generators.
Sub submodule(const ModulePtr& ambient, std::vector<std::vector<BitVector>> bases, int window, bool truncated)
{
    std::vector<std::size_t> dims;
    std::vector<f2::Subspace> spans;
    for (int n = 0; n <= window; ++n) {
        f2::Subspace s(ambient->dim(n));
        for (const auto& v : bases[static_cast<std::size_t>(n)])
            s.insert(v);
        spans.push_back(std::move(s));
        dims.push_back(bases[static_cast<std::size_t>(n)].size());
    }
    GradedModule out(window, dims, truncated);
    for (int n = 0; n <= window; ++n) {
        const auto& b = bases[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < b.size(); ++i) {
            const auto support = b[i].support();
            out.set_label(n, i, support.size() == 1 ? ambient->label(n, support[0]) : "v" + std::to_string(n) + "_" + std::to_string(i));
        }
        for (int k = 1; n + k <= window; ++k) {
            BitMatrix s(out.dim(n + k), out.dim(n));
            for (std::size_t i = 0; i < b.size(); ++i) {
                auto c = spans[static_cast<std::size_t>(n + k)].express(ambient->apply_sq(k, n, b[i]));
                if (!c)
                    throw std::logic_error("submodule: subspace is not closed under the action");
                s.set_column(i, *c);
            }
            out.set_sq(k, n, std::move(s));
        }
    }
    auto module = make_module(std::move(out));
    ModuleMap inc(module, ambient);
    for (int n = 0; n <= std::min(window, inc.window()); ++n)
        inc.set_block(n, BitMatrix::from_columns(bases[static_cast<std::size_t>(n)], ambient->dim(n)));
    return {module, inc};
}

} // namespace

Sub kernel(const ModuleMap& f)
{
    std::vector<std::vector<BitVector>> bases;
    for (int n = 0; n <= f.window(); ++n)
        bases.push_back(f2::kernel_basis(f.block(n)));
    return submodule(f.source_ptr(), std::move(bases), f.window(), f.source().truncated());
}

Sub image(const ModuleMap& f)
{
    std::vector<std::vector<BitVector>> bases;
    for (int n = 0; n <= f.window(); ++n) {
        f2::Subspace s(f.target().dim(n));
        for (std::size_t c = 0; c < f.source().dim(n); ++c)
            s.insert(f.block(n).column(c));
        bases.push_back(s.basis());
    }
    return submodule(f.target_ptr(), std::move(bases), f.window(), f.target().truncated() || f.source().truncated());
}

/* Structure */

std::vector<f2::Subspace> socle(const GradedModule& m)
{
    if (m.truncated())
        throw std::invalid_argument("socle: module is truncated");
    std::vector<f2::Subspace> out;
    for (int n = 0; n <= m.window(); ++n) {
        BitMatrix stacked(0, m.dim(n));
        for (int k = 1; n + k <= m.window(); ++k)
            if (m.dim(n + k))
                stacked = stacked.stack_below(m.sq(k, n));
        f2::Subspace s(m.dim(n));
        for (const auto& v : f2::kernel_basis(stacked))
            s.insert(v);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<f2::QuotientMap> top(const GradedModule& m)
{
    std::vector<f2::QuotientMap> out;
    for (int n = 0; n <= m.window(); ++n) {
        f2::Subspace dec(m.dim(n));
        for (int k = 1; k <= n; ++k) {
            const BitMatrix s = m.sq(k, n - k);
            for (std::size_t c = 0; c < s.cols(); ++c)
                dec.insert(s.column(c));
        }
        out.emplace_back(std::move(dec));
    }
    return out;
}

bool is_nilpotent(const GradedModule& m)
{
    if (m.dim(0) != 0)
        return false;
    if (!m.truncated())
        return true;
    // Within the window: the longest Sq_0 chain from each degree n with
    // 2n <= window must vanish.
    for (int n = 1; 2 * n <= m.window(); ++n) {
        if (m.dim(n) == 0)
            continue;
        BitMatrix chain = BitMatrix::identity(m.dim(n));
        for (int d = n; 2 * d <= m.window(); d *= 2)
            chain = m.sq(d, d) * chain;
        if (!chain.is_zero())
            return false;
    }
    return true;
}

bool is_reduced(const GradedModule& m)
{
    for (int n = 0; n <= m.window(); ++n) {
        if (m.dim(n) == 0)
            continue;
        if (2 * n > m.window()) {
            if (m.truncated())
                continue;
            return false;
        }
        const BitMatrix s = m.sq(n, n);
        if (f2::rank(s) != s.cols())
            return false;
    }
    return true;
}

/* Maps into Brown-Gitler modules */

std::size_t hom_to_J_dim(const GradedModule& m, int n) { return m.dim(n); }

ModuleMap realize_into_J(const ModulePtr& m, int n, const BitVector& functional, const ModulePtr& jn)
{
    if (m->truncated() && m->window() < n)
        throw std::invalid_argument("realize_into_J: window below n");
    if (functional.size() != m->dim(n))
        throw std::invalid_argument("realize_into_J: functional has the wrong length");
    const ModulePtr j = jn ? jn : brown_gitler(n);
    ModuleMap f(m, j);
    if (n <= f.window()) {
        BitMatrix top(1, m->dim(n));
        top.set_row(0, functional);
        f.set_block(n, std::move(top));
    }
    for (int d = std::min(n, f.window()) - 1; d >= 0; --d) {
        if (m->dim(d) == 0 || j->dim(d) == 0)
            continue;
        BitMatrix stacked(0, j->dim(d));
        for (int k = 1; d + k <= n; ++k)
            stacked = stacked.stack_below(j->sq(k, d));
        BitMatrix block(j->dim(d), m->dim(d));
        for (std::size_t c = 0; c < m->dim(d); ++c) {
            BitVector rhs(0);
            for (int k = 1; d + k <= n; ++k) {
                const auto x = m->apply_sq(k, d, BitVector::unit(m->dim(d), c));
                rhs = rhs.concat(f.block(d + k).apply(x));
            }
            auto y = f2::solve(stacked, rhs);
            if (!y)
                throw std::logic_error("realize_into_J: commutation constraints are inconsistent");
            block.set_column(c, *y);
        }
        f.set_block(d, std::move(block));
    }
    return f;
}

std::vector<ModuleMap> hom_to_J(const ModulePtr& m, int n)
{
    const ModulePtr j = brown_gitler(n);
    std::vector<ModuleMap> out;
    for (std::size_t i = 0; i < m->dim(n); ++i)
        out.push_back(realize_into_J(m, n, BitVector::unit(m->dim(n), i), j));
    return out;
}

std::string bg_name(std::vector<int> indices)
{
    if (indices.empty())
        return "0";
    std::sort(indices.begin(), indices.end(), std::greater<>());
    std::string s = "J(";
    for (std::size_t i = 0; i < indices.size(); ++i)
        s += (i ? "," : "") + std::to_string(indices[i]);
    return s + ")";
}

nlohmann::json to_json(const GradedModule& m)
{
    nlohmann::json j;
    j["window"] = m.window();
    j["truncated"] = m.truncated();
    j["dims"] = m.dims();
    nlohmann::json labels = nlohmann::json::array();
    for (int n = 0; n <= m.window(); ++n) {
        nlohmann::json level = nlohmann::json::array();
        for (std::size_t i = 0; i < m.dim(n); ++i)
            level.push_back(m.label(n, i));
        labels.push_back(level);
    }
    j["labels"] = labels;
    nlohmann::json action = nlohmann::json::array();
    for (int n = 0; n <= m.window(); ++n)
        for (int k = 1; n + k <= m.window(); ++k) {
            const BitMatrix* s = m.stored_sq(k, n);
            for (std::size_t c = 0; c < s->cols(); ++c)
                for (auto r : s->column(c).support())
                    action.push_back({k, n, r, c});
        }
    j["action"] = action;
    return j;
}

nlohmann::json to_json(const ModuleMap& f)
{
    nlohmann::json j;
    j["window"] = f.window();
    nlohmann::json entries = nlohmann::json::array();
    for (int n = 0; n <= f.window(); ++n)
        for (std::size_t c = 0; c < f.block(n).cols(); ++c)
            for (auto r : f.block(n).column(c).support())
                entries.push_back({n, r, c});
    j["blocks"] = entries;
    return j;
}

} // namespace unst::umod
