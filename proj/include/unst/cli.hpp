#pragma once

// Command-line front end: module specs, the normal-form disk cache and the
// subcommand driver.
//
// Module specs:
//   F(n)             free unstable module on a class of degree n
//   J(n_1,...,n_k)   sum of Brown-Gitler modules
//   H(k)             F(1) / Phi^k F(1)
//   F2               the ground field in degree 0
//   Sigma^k X        k-fold suspension (Sigma X for k = 1)
//   Phi^r X          Frobenius doubling (Phi X for r = 1)
//   T(X,Y)           tensor product
// Whitespace between tokens is optional ("SigmaF2" = "Sigma F2").

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "unst/umod.hpp"

namespace unst::cli {

struct ModuleSpec {
    enum class Kind { Free, BrownGitler, H, Ground, Sigma, Phi, Tensor };
    Kind kind = Kind::Ground;
    int n = 0;                   // F(n), H(n), or the power of Sigma/Phi
    std::vector<int> indices;    // J(...)
    std::vector<ModuleSpec> args; // operand(s) of Sigma, Phi, T

    bool operator==(const ModuleSpec&) const = default;
    // Finite modules are built exactly; the others are truncated at D.
    bool finite() const;
};

// Throws std::invalid_argument with the offending position on bad input.
ModuleSpec parse_module_spec(const std::string& text);
// Canonical form; parse_module_spec(to_string(s)) == s.
std::string to_string(const ModuleSpec& spec);
umod::ModulePtr build_module(const ModuleSpec& spec, int max_degree);

// Content-addressed store of normal forms under <dir>/<fnv hash>.json. Safe to
// delete; a missing or corrupt entry is recomputed.
class NormalFormCache {
public:
    explicit NormalFormCache(std::optional<std::filesystem::path> dir);
    // From UNST_CACHE_DIR, disabled when unset or empty.
    static NormalFormCache from_environment();

    bool enabled() const { return dir_.has_value(); }
    std::string normalize(const std::string& input);
    bool last_was_hit() const { return hit_; }

private:
    std::optional<std::filesystem::path> dir_;
    bool hit_ = false;
};

// Runs the command line; returns the exit status (0 ok, 1 failed check,
// 2 usage or input error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace unst::cli
