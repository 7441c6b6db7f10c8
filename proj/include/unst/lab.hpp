#pragma once

// Reference data for the injective resolutions of F(1) and H_k and for the
// groups Ext^d(Phi^r F(1), F(1)), with procedures that compare the engine
// against them and collect the outcome as findings.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "unst/resolve.hpp"

namespace unst::lab {

enum class Verdict { Pass, Fail, Unavailable, Info, Consistent, Inconsistent };
std::string to_string(Verdict v);

struct Finding {
    std::string check;
    nlohmann::json inputs;
    nlohmann::json expected;
    std::string source; // where the expected value comes from
    nlohmann::json actual;
    Verdict verdict = Verdict::Info;
    bool exploratory = false;
    std::string artifact; // hash of the engine output the verdict rests on
    std::string note;

    // Counts toward the exit status: non-exploratory and not informational.
    bool gating() const { return !exploratory && verdict != Verdict::Info; }
    nlohmann::json to_json() const;
};

struct Report {
    std::vector<Finding> findings;

    // Every gating finding passed.
    bool ok() const;
    void append(const Report& other);
    nlohmann::json to_json() const;
    std::string to_text() const;
};

// 64-bit FNV-1a of the compact JSON dump, as 16 hex digits.
std::string artifact_hash(const nlohmann::json& artifact);

// What the procedures cannot reach at desk scale.
std::string limitations();

/* Fixtures */

// upsilon(d) = 1 + n_k - k for d = 2^{n_1} + ... + 2^{n_k}, n_1 < ... < n_k.
// Throws std::invalid_argument for odd d or d < 2.
int upsilon(int d);
// dim Ext^d(Phi^r F(1), F(1)) predicted by the vanishing pattern, d >= 1.
int predicted_ext_dim(int d, int r);

struct NkRow {
    int k;
    std::string text; // "J(14,12,11,8)", "0"
    std::vector<int> indices() const;
};

// Rows k = 1..24 and 33..49 of the table of N^k for F(1).
const std::vector<NkRow>& nk_table();
const NkRow* nk_row(int k);

// "J(7,6)" -> {7, 6}; "0" -> {}. Throws std::invalid_argument otherwise.
std::vector<int> parse_bg(const std::string& text);

// Row k = 2^n + offset of the large-n table (n >= 6, -32 <= offset <= 3).
std::vector<int> large_n_row(int n, int offset);
// The A-summand of row 2^n + 3.
std::vector<int> a_term(int n);
// The J_2^k lemma formula (k >= 3).
std::vector<int> j2k_formula(int k);
// N^{2^k+2} = sum_{i=0}^{k-3} J(2^{k-1} - 2^i).
std::vector<int> second_term_formula(int k);

// Multiset equality of Brown-Gitler indices.
bool same_multiset(std::vector<int> a, std::vector<int> b);

// Number of J(n) summands of I^j in a minimal injective resolution of a finite
// module m, read off as dim Ext^j(Sigma^n F2, m) from projective resolutions.
std::vector<int> summands_via_ext(const resolve::ModulePtr& m, int j);

/* Verification */

Report verify_hk_vs_table(int k);
Report verify_j2k(int k);
Report verify_fixtures();

// Smallest D at which cell (d, r) of the Ext table is attempted:
// min(256, 2^{r + ceil(d/2)}). Cells are always read at window D itself.
int cell_window(int d, int r);

// Resolutions of Phi^r F(1) under a dimension limit, with cached results so
// several procedures can share them.
class ExtLab {
public:
    static constexpr std::size_t default_dimension_limit = 12000;
    explicit ExtLab(std::size_t dimension_limit = default_dimension_limit);

    std::size_t dimension_limit() const { return limit_; }

    struct Cell {
        std::optional<int> dim;
        std::string note; // why the cell is unavailable
        std::string artifact;
    };
    struct Mono {
        std::optional<resolve::LinearMap> map; // Ext^d(Phi^r) -> Ext^d(Phi^{r+1})
        std::string note;
        std::string artifact;
    };

    // dim Ext^d(Phi^r F(1), F(1)) from the resolution through window w.
    const Cell& ext(int d, int r, int w);
    // The map induced by lambda: Phi^{r+1} F(1) -> Phi^r F(1) on Ext^d, with
    // both resolutions through window w.
    const Mono& lambda_map(int d, int r, int w);

    // Computes everything requested, window by window with at most two live
    // resolutions. ext/lambda_map call this for single requests.
    void prepare(const std::vector<std::tuple<int, int, int>>& cells,
                 const std::vector<std::tuple<int, int, int>>& monos);

private:
    struct Live {
        std::unique_ptr<resolve::ProjectiveResolution> p;
        std::string note; // set when the dimension limit stopped the extension
    };
    Live build(int r, int w, int depth) const;

    std::size_t limit_;
    std::map<std::tuple<int, int, int>, Cell> cells_; // (d, r, w)
    std::map<std::tuple<int, int, int>, Mono> monos_; // (d, r, w)
};

Report verify_ext_table(int d_max, int r_max, int D, ExtLab& lab);
// Same cells as verify_ext_table, marked consistent/inconsistent and
// exploratory.
Report explore_conjecture(int d_max, int r_max, int D, ExtLab& lab);

// (a) Ext^5(F(1) (x) F(1), F(1)); (b) the Frobenius map on Ext^3(Sigma F2, F(1));
// (c) exploratory ranks of lambda^* on Ext^5 of Phi^i(F(1) (x) F(1)), i <= 3.
Report verify_counterexamples(int D, std::size_t dimension_limit = ExtLab::default_dimension_limit);

// (lambda_{Phi^r M})^* (lambda^r_{F(1)})_* = (lambda^{r+1}_{F(1)})_* Phi on
// Ext^d(Phi^r M, Phi^r F(1)) for M = F(1), r <= r_max, d <= d_max.
Report verify_naturality(int r_max, int d_max, int window);

} // namespace unst::lab
