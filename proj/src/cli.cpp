#include "unst/cli.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "unst/lab.hpp"
#include "unst/resolve.hpp"
#include "unst/steenrod.hpp"

namespace unst::cli {

using nlohmann::json;

/* Module specs */

bool ModuleSpec::finite() const
{
    switch (kind) {
    case Kind::Free:
        return false;
    case Kind::BrownGitler:
    case Kind::H:
    case Kind::Ground:
        return true;
    case Kind::Sigma:
    case Kind::Phi:
        return args[0].finite();
    case Kind::Tensor:
        return args[0].finite() && args[1].finite();
    }
    return false;
}

namespace {

class SpecParser {
public:
    explicit SpecParser(const std::string& text) : s_(text) {}

    ModuleSpec parse()
    {
        ModuleSpec m = term();
        skip();
        if (pos_ != s_.size())
            fail("trailing input");
        return m;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("module spec '" + s_ + "': " + what + " at position " + std::to_string(pos_));
    }
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool take(const std::string& word)
    {
        skip();
        if (s_.compare(pos_, word.size(), word) == 0) {
            pos_ += word.size();
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    int number()
    {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected a number");
        if (pos_ - start > 6)
            fail("number too large");
        return std::stoi(s_.substr(start, pos_ - start));
    }
    int power()
    {
        if (take("^"))
            return number();
        return 1;
    }

    ModuleSpec term()
    {
        ModuleSpec m;
        if (take("Sigma")) {
            m.kind = ModuleSpec::Kind::Sigma;
            m.n = power();
            m.args.push_back(term());
        }
        else if (take("Phi")) {
            m.kind = ModuleSpec::Kind::Phi;
            m.n = power();
            m.args.push_back(term());
        }
        else if (take("T(")) {
            m.kind = ModuleSpec::Kind::Tensor;
            m.args.push_back(term());
            expect(',');
            m.args.push_back(term());
            expect(')');
        }
        else if (take("F2")) {
            m.kind = ModuleSpec::Kind::Ground;
        }
        else if (take("F(")) {
            m.kind = ModuleSpec::Kind::Free;
            m.n = number();
            expect(')');
        }
        else if (take("H(")) {
            m.kind = ModuleSpec::Kind::H;
            m.n = number();
            if (m.n < 1)
                fail("H(k) needs k >= 1");
            expect(')');
        }
        else if (take("J(")) {
            m.kind = ModuleSpec::Kind::BrownGitler;
            m.indices.push_back(number());
            while (take(","))
                m.indices.push_back(number());
            expect(')');
        }
        else {
            fail("expected F(n), J(...), H(k), F2, Sigma, Phi or T(X,Y)");
        }
        return m;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

std::string power_prefix(const std::string& name, int n) { return n == 1 ? name : name + "^" + std::to_string(n); }

} // namespace

ModuleSpec parse_module_spec(const std::string& text) { return SpecParser(text).parse(); }

std::string to_string(const ModuleSpec& spec)
{
    switch (spec.kind) {
    case ModuleSpec::Kind::Free:
        return "F(" + std::to_string(spec.n) + ")";
    case ModuleSpec::Kind::BrownGitler: {
        std::string s = "J(";
        for (std::size_t i = 0; i < spec.indices.size(); ++i)
            s += (i ? "," : "") + std::to_string(spec.indices[i]);
        return s + ")";
    }
    case ModuleSpec::Kind::H:
        return "H(" + std::to_string(spec.n) + ")";
    case ModuleSpec::Kind::Ground:
        return "F2";
    case ModuleSpec::Kind::Sigma:
        return power_prefix("Sigma", spec.n) + " " + to_string(spec.args[0]);
    case ModuleSpec::Kind::Phi:
        return power_prefix("Phi", spec.n) + " " + to_string(spec.args[0]);
    case ModuleSpec::Kind::Tensor:
        return "T(" + to_string(spec.args[0]) + "," + to_string(spec.args[1]) + ")";
    }
    return "?";
}

umod::ModulePtr build_module(const ModuleSpec& spec, int max_degree)
{
    switch (spec.kind) {
    case ModuleSpec::Kind::Free:
        return umod::free_module(spec.n, max_degree);
    case ModuleSpec::Kind::BrownGitler:
        return spec.indices.size() == 1 ? umod::brown_gitler(spec.indices[0])
                                        : resolve::brown_gitler_sum(spec.indices);
    case ModuleSpec::Kind::H:
        return umod::h_module(spec.n);
    case ModuleSpec::Kind::Ground:
        return umod::ground_field();
    case ModuleSpec::Kind::Sigma:
        return umod::suspension(*build_module(spec.args[0], max_degree), spec.n);
    case ModuleSpec::Kind::Phi:
        return umod::frobenius_power(*build_module(spec.args[0], max_degree), spec.n);
    case ModuleSpec::Kind::Tensor:
        return umod::tensor(*build_module(spec.args[0], max_degree), *build_module(spec.args[1], max_degree),
                            spec.finite() ? -1 : max_degree);
    }
    throw std::logic_error("build_module: unknown kind");
}

/* Normal-form cache */

NormalFormCache::NormalFormCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {}

NormalFormCache NormalFormCache::from_environment()
{
    const char* env = std::getenv("UNST_CACHE_DIR");
    if (!env || !*env)
        return NormalFormCache(std::nullopt);
    return NormalFormCache(std::filesystem::path(env));
}

std::string NormalFormCache::normalize(const std::string& input)
{
    hit_ = false;
    steenrod::Word word;
    try {
        word = steenrod::parse_word(input);
    }
    catch (const std::invalid_argument&) {
        // Sums are normalized directly; only single products are cached.
        return steenrod::to_string(steenrod::parse_element(input));
    }
    if (!dir_)
        return steenrod::to_string(steenrod::adem_normalize(word));
    // Key on the parsed word so spacing variants share an entry.
    std::string key = "word";
    for (int i : word)
        key += " " + std::to_string(i);
    const auto path = *dir_ / (lab::artifact_hash(json(key)) + ".json");
    {
        std::ifstream in(path);
        if (in) {
            try {
                const json entry = json::parse(in);
                if (entry.at("key") == key) {
                    hit_ = true;
                    return entry.at("normal").get<std::string>();
                }
            }
            catch (const std::exception&) {
                // Corrupt entry: recompute and overwrite.
            }
        }
    }
    const std::string normal = steenrod::to_string(steenrod::adem_normalize(word));
    std::error_code ec;
    std::filesystem::create_directories(*dir_, ec);
    if (!ec) {
        const auto tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp);
            out << json{{"key", key}, {"normal", normal}}.dump() << '\n';
        }
        std::filesystem::rename(tmp, path, ec);
    }
    return normal;
}

/* Driver */

namespace {

constexpr int kUsage = 2;

void emit(const std::string& text, const std::string& out_path, std::ostream& out)
{
    out << text;
    if (!out_path.empty()) {
        std::ofstream file(out_path);
        if (!file)
            throw std::runtime_error("cannot write " + out_path);
        file << text;
    }
}

std::string free_sum_name(const resolve::FreeSum& f)
{
    if (f.generators() == 0)
        return "0";
    std::string s;
    for (std::size_t g = 0; g < f.generators(); ++g)
        s += (g ? " + F(" : "F(") + std::to_string(f.generator_degree(g)) + ")";
    return s;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

int cmd_adem(const std::vector<std::string>& words, bool as_json, std::ostream& out)
{
    std::string input;
    for (const auto& w : words)
        input += (input.empty() ? "" : " ") + w;
    auto cache = NormalFormCache::from_environment();
    const std::string normal = cache.normalize(input);
    if (as_json)
        out << json{{"input", input}, {"normal", normal}}.dump(2) << '\n';
    else
        out << normal << '\n';
    return 0;
}

int cmd_resolve(const std::string& text, int steps, int max_degree, bool projective, bool as_json,
                const std::string& out_path, std::ostream& out, std::ostream& err)
{
    const ModuleSpec spec = parse_module_spec(text);
    if (steps < 1 || max_degree < 1) {
        err << "resolve: --steps and --max-degree must be positive\n";
        return kUsage;
    }
    const auto m = build_module(spec, max_degree);
    std::ostringstream text_out;
    json j;
    j["module"] = to_string(spec);
    if (projective) {
        resolve::ProjectiveResolution p(m, max_degree);
        p.extend(steps);
        const auto cert = p.certify();
        j["flavor"] = "projective";
        j["resolution"] = p.to_json();
        j["certificate"] = {{"exact", cert.exact}, {"minimal", cert.minimal}, {"failures", cert.failures}};
        for (int s = 0; s < p.length(); ++s)
            text_out << "P_" << s << " = " << free_sum_name(p.term(s)) << '\n';
        text_out << "exact through degree " << max_degree << ": " << yes_no(cert.exact)
                 << ", minimal: " << yes_no(cert.minimal) << '\n';
        for (const auto& f : cert.failures)
            text_out << "  " << f << '\n';
    }
    else {
        if (!spec.finite()) {
            err << "resolve: " << to_string(spec)
                << " is not finite; injective resolutions need a finite nilpotent module (use --projective)\n";
            return kUsage;
        }
        const auto res = resolve::minimal_injective_resolution(m, steps);
        j["flavor"] = "injective";
        j["resolution"] = res.to_json();
        j["summary"] = res.summary();
        text_out << res.summary() << '\n';
        json ops = json::array();
        for (std::size_t i = 0; i < res.differentials.size(); ++i) {
            text_out << "d^" << i << ": ";
            try {
                const auto mat = resolve::operation_matrix(res.differentials[i], res.terms[i].indices,
                                                           res.terms[i + 1].indices);
                json rows = json::array();
                text_out << '[';
                for (std::size_t b = 0; b < mat.size(); ++b) {
                    json row = json::array();
                    text_out << (b ? "; " : "");
                    for (std::size_t a = 0; a < mat[b].size(); ++a) {
                        const auto s = steenrod::to_string(mat[b][a]);
                        row.push_back(s);
                        text_out << (a ? ", " : "") << (s == "0" ? "0" : "•" + s);
                    }
                    rows.push_back(row);
                }
                text_out << "]\n";
                ops.push_back(rows);
            }
            catch (const std::logic_error&) {
                text_out << "not a matrix of operations\n";
                ops.push_back(nullptr);
            }
        }
        j["operations"] = ops;
        text_out << (res.complete ? "complete" : "truncated after " + std::to_string(steps) + " terms")
                 << "; exact: " << yes_no(res.exact) << ", minimal: " << yes_no(res.minimal) << '\n';
        for (const auto& f : res.failures)
            text_out << "  " << f << '\n';
    }
    emit(as_json ? j.dump(2) + "\n" : text_out.str(), out_path, out);
    return 0;
}

int cmd_ext(const std::string& source, const std::string& target, int d_max, int max_degree, std::size_t limit,
            bool as_json, const std::string& out_path, std::ostream& out, std::ostream& err)
{
    if (d_max < 0 || d_max > 64 || max_degree < 1) {
        err << "ext: need 0 <= --d <= 64 and --max-degree >= 1\n";
        return kUsage;
    }
    const ModuleSpec ms = parse_module_spec(source), ns = parse_module_spec(target);
    const auto m = build_module(ms, max_degree);
    const auto n = build_module(ns, max_degree);
    resolve::ProjectiveResolution p(m, max_degree);
    p.set_dimension_limit(limit);
    std::string note;
    try {
        p.extend(d_max + 2);
    }
    catch (const resolve::ResourceLimit& e) {
        note = e.what();
    }
    const int reached = std::min(d_max, p.length() - 2);
    std::optional<resolve::ExtTable> table;
    if (reached >= 0)
        table = resolve::ext_groups(p, n, reached);
    json j;
    j["source"] = to_string(ms);
    j["target"] = to_string(ns);
    j["max_degree"] = max_degree;
    j["values"] = json::array();
    std::ostringstream text_out;
    text_out << "Ext^d(" << to_string(ms) << ", " << to_string(ns) << "), internal degrees <= " << max_degree
             << '\n';
    for (int d = 0; d <= d_max; ++d) {
        if (table && d <= reached) {
            text_out << "d=" << d << "  " << table->value(d) << '\n';
            j["values"].push_back(table->value(d));
        }
        else {
            text_out << "d=" << d << "  unavailable\n";
            j["values"].push_back(nullptr);
        }
    }
    if (!note.empty()) {
        text_out << "stopped: " << note << '\n';
        j["note"] = note;
    }
    if (table)
        j["table"] = table->to_json();
    emit(as_json ? j.dump(2) + "\n" : text_out.str(), out_path, out);
    return 0;
}

lab::Report run_suite(const std::string& suite, int d_max, int r_max, int max_degree, std::size_t limit)
{
    lab::Report rep;
    if (suite == "tables" || suite == "all") {
        rep.append(lab::verify_fixtures());
        for (int k = 2; k <= 5; ++k)
            rep.append(lab::verify_hk_vs_table(k));
        for (int k = 4; k <= 6; ++k)
            rep.append(lab::verify_j2k(k));
    }
    if (suite == "counterexamples" || suite == "all")
        rep.append(lab::verify_counterexamples(std::max(64, max_degree), limit));
    if (suite == "naturality" || suite == "all")
        rep.append(lab::verify_naturality(2, 4, 64));
    if (suite == "ext" || suite == "all") {
        lab::ExtLab ext(limit);
        rep.append(lab::verify_ext_table(d_max, r_max, max_degree, ext));
    }
    return rep;
}

int cmd_verify(const std::string& suite, int d_max, int r_max, int max_degree, std::size_t limit, bool as_json,
               const std::string& out_path, std::ostream& out)
{
    const auto rep = run_suite(suite, d_max, r_max, max_degree, limit);
    std::string text;
    if (as_json) {
        text = rep.to_json().dump(2) + "\n";
    }
    else {
        text = rep.to_text();
        text += "limitations: " + lab::limitations() + "\n";
        text += std::string("result: ") + (rep.ok() ? "all checks passed" : "some checks failed") + "\n";
    }
    emit(text, out_path, out);
    return rep.ok() ? 0 : 1;
}

int cmd_explore(int d_max, int r_max, int max_degree, std::size_t limit, bool as_json, const std::string& out_path,
                std::ostream& out)
{
    lab::ExtLab ext(limit);
    const auto rep = lab::explore_conjecture(d_max, r_max, max_degree, ext);
    emit(as_json ? rep.to_json().dump(2) + "\n" : rep.to_text() + "limitations: " + lab::limitations() + "\n",
         out_path, out);
    return 0;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Unstable modules over the mod 2 Steenrod algebra: normal forms, resolutions, Ext groups and "
                 "checks against reference tables.\n\n"
                 "Module specs: F(n), J(n_1,...,n_k), H(k), F2, Sigma^k X, Phi^r X, T(X,Y); "
                 "e.g. \"Phi^2 F(1)\", \"Sigma F2\", \"T(F(1),F(1))\".\n"
                 "UNST_CACHE_DIR, when set, names a directory caching normal forms (safe to delete).",
                 "unst"};
    app.require_subcommand(1);

    bool as_json = false;
    std::string out_path;
    int max_degree = 64;
    auto common = [&](CLI::App* c) {
        c->add_flag("--json", as_json, "JSON output");
        c->add_option("--out", out_path, "also write the report to this file");
    };

    std::vector<std::string> words;
    auto* adem = app.add_subcommand("adem", "normal form in the admissible basis, e.g. 'Sq2 Sq2'");
    adem->add_option("word", words, "product (or sum) of squares")->required();
    adem->add_flag("--json", as_json, "JSON output");

    std::string spec;
    int steps = 3;
    bool projective = false;
    auto* res = app.add_subcommand("resolve", "minimal injective (default) or projective resolution");
    res->add_option("module", spec, "module spec")->required();
    res->add_option("--steps", steps, "number of terms")->capture_default_str();
    res->add_option("--max-degree", max_degree, "internal degree window")->capture_default_str();
    res->add_flag("--projective", projective, "minimal projective resolution through --max-degree");
    common(res);

    std::string source, target;
    int d = 3;
    std::size_t limit = lab::ExtLab::default_dimension_limit;
    auto* ext = app.add_subcommand("ext", "dimensions of Ext^s(M, N) for s <= --d");
    ext->add_option("source", source, "module spec M")->required();
    ext->add_option("target", target, "module spec N")->required();
    ext->add_option("--d", d, "largest homological degree")->capture_default_str();
    ext->add_option("--max-degree", max_degree, "internal degree window")->capture_default_str();
    ext->add_option("--limit", limit, "dimension limit on resolution terms (0: none)")->capture_default_str();
    common(ext);

    std::string suite = "all";
    int d_max = 11, r_max = 3;
    auto* ver = app.add_subcommand("verify", "compare the engine against reference values; exit 1 on failure");
    ver->add_option("--suite", suite, "tables, ext, counterexamples, naturality or all")
        ->check(CLI::IsMember({"tables", "ext", "counterexamples", "naturality", "all"}))
        ->capture_default_str();
    ver->add_option("--d-max", d_max, "ext suite: largest d (<= 12)")->capture_default_str();
    ver->add_option("--r-max", r_max, "ext suite: largest r (<= 4)")->capture_default_str();
    ver->add_option("--max-degree", max_degree, "ext suite: largest window")->capture_default_str();
    ver->add_option("--limit", limit, "dimension limit on resolution terms")->capture_default_str();
    common(ver);

    int e_d = 12, e_r = 4;
    auto* exp = app.add_subcommand("explore", "vanishing pattern beyond the checked range (never fails)");
    exp->add_option("--d-max", e_d, "largest d (<= 12)")->capture_default_str();
    exp->add_option("--r-max", e_r, "largest r (<= 4)")->capture_default_str();
    exp->add_option("--max-degree", max_degree, "largest window")->capture_default_str();
    exp->add_option("--limit", limit, "dimension limit on resolution terms")->capture_default_str();
    common(exp);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    }
    catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    }
    catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kUsage;
    }

    try {
        if (adem->parsed())
            return cmd_adem(words, as_json, out);
        if (res->parsed())
            return cmd_resolve(spec, steps, max_degree, projective, as_json, out_path, out, err);
        if (ext->parsed())
            return cmd_ext(source, target, d, max_degree, limit, as_json, out_path, out, err);
        if (ver->parsed()) {
            if (d_max < 1 || d_max > 12 || r_max < 0 || r_max > 4 || max_degree < 1) {
                err << "verify: need 1 <= --d-max <= 12, 0 <= --r-max <= 4\n";
                return kUsage;
            }
            return cmd_verify(suite, d_max, r_max, max_degree, limit, as_json, out_path, out);
        }
        if (exp->parsed()) {
            if (e_d < 1 || e_d > 12 || e_r < 0 || e_r > 4 || max_degree < 1) {
                err << "explore: need 1 <= --d-max <= 12, 0 <= --r-max <= 4\n";
                return kUsage;
            }
            return cmd_explore(e_d, e_r, max_degree, limit, as_json, out_path, out);
        }
    }
    catch (const std::invalid_argument& e) {
        err << e.what() << '\n';
        return kUsage;
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

} // namespace unst::cli
