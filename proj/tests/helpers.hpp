#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "opalg/bracket.hpp"
#include "opalg/checks.hpp"

namespace testutil {

using namespace opalg;

/// Random bracket word: letters from a small variable pool plus D/I
/// brackets, nested up to the given depth.
inline BracketWord random_word(Sampler& s, TermMode mode, unsigned depth = 3, unsigned max_letters = 4) {
    static const std::vector<std::string> pool{"x", "y", "y1", "y2"};
    std::vector<BracketLetter> letters;
    unsigned n = static_cast<unsigned>(s.int_in(0, max_letters));
    for (unsigned i = 0; i < n; ++i) {
        if (depth > 0 && s.int_in(0, 2) == 0) {
            BracketWord body = random_word(s, mode, depth - 1, max_letters - 1);
            letters.push_back(BracketLetter{s.int_in(0, 1) ? "I" : "D", std::make_shared<BracketWord>(body)});
        } else {
            letters.push_back(BracketLetter{pool[static_cast<size_t>(s.int_in(0, pool.size() - 1))], nullptr});
        }
    }
    return BracketWord(mode, std::move(letters));
}

inline LawExpr random_law(Sampler& s, TermMode mode, unsigned max_terms = 3) {
    LawExpr l(mode);
    unsigned n = static_cast<unsigned>(s.int_in(1, max_terms));
    for (unsigned i = 0; i < n; ++i) l.add_term(random_word(s, mode), s.scalar());
    return l;
}

/// Monomial of degree n in y with random depth; used by the centralization
/// identity suite.
inline BracketWord random_mono_of_degree(Sampler& s, TermMode mode, const std::string& y, unsigned n,
                                         unsigned depth = 3) {
    std::vector<BracketLetter> letters;
    unsigned remaining = n;
    while (remaining > 0) {
        unsigned take = static_cast<unsigned>(s.int_in(1, remaining));
        remaining -= take;
        bool wrap = depth > 0 && s.int_in(0, 1) == 1;
        std::vector<BracketLetter> inner;
        for (unsigned i = 0; i < take; ++i) inner.push_back(BracketLetter{y, nullptr});
        if (wrap) {
            BracketWord body(mode, std::move(inner));
            letters.push_back(BracketLetter{"I", std::make_shared<BracketWord>(body)});
        } else {
            for (auto& l : inner) letters.push_back(std::move(l));
        }
    }
    if (s.int_in(0, 1)) letters.push_back(BracketLetter{"x", nullptr});
    return BracketWord(mode, std::move(letters));
}

/// Equality of laws up to a bijection of the listed variables.
inline bool equal_up_to_bijection(const LawExpr& a, const LawExpr& b, std::vector<std::string> vars_a,
                                  std::vector<std::string> vars_b) {
    if (vars_a.size() != vars_b.size()) return false;
    std::sort(vars_b.begin(), vars_b.end());
    do {
        std::map<std::string, std::string> names;
        for (size_t i = 0; i < vars_a.size(); ++i) names[vars_a[i]] = vars_b[i];
        if (rename(a, names) == b) return true;
    } while (std::next_permutation(vars_b.begin(), vars_b.end()));
    return false;
}

struct CliResult {
    int exit_code = -1;
    std::string output;
};

/// Run the built CLI (path from the OPALG_CLI environment variable).
inline CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const char* bin = std::getenv("OPALG_CLI");
    if (!bin) return {};
    std::string cmd = env_prefix + (env_prefix.empty() ? "" : " ") + std::string(bin) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {};
    CliResult res;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof(buf), pipe)) res.output.append(buf, got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

inline std::string trimmed(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
    return s;
}

}  // namespace testutil
