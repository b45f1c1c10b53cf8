#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "opalg/rational.hpp"

namespace opalg {

enum class TermMode { Commutative, Noncommutative };

class BracketWord;

/// A letter of a decorated bracket word: either a variable or a labeled
/// bracket wrapping a nested word. Star placeholders are variables whose
/// name starts with '*' (a reserved namespace: *1, *2, ...).
struct BracketLetter {
    std::string name;                        // variable name, or bracket label
    std::shared_ptr<const BracketWord> sub;  // null for variables

    bool is_var() const { return sub == nullptr; }
};

int compare(const BracketLetter& a, const BracketLetter& b);
int compare(const BracketWord& a, const BracketWord& b);

/// An Omega-decorated bracket word: a monomial whose letters are variables
/// or brackets. Commutative words are stored with letters in a fixed
/// increasing order, which is the canonical written form.
class BracketWord {
public:
    explicit BracketWord(TermMode mode) : mode_(mode) {}
    BracketWord(TermMode mode, std::vector<BracketLetter> letters) : mode_(mode), letters_(std::move(letters)) {
        normalize();
    }

    static BracketWord one(TermMode mode) { return BracketWord(mode); }
    static BracketWord variable(TermMode mode, const std::string& name) {
        return BracketWord(mode, {BracketLetter{name, nullptr}});
    }
    static BracketWord bracket(TermMode mode, const std::string& label, const BracketWord& body) {
        if (body.mode() != mode) throw std::invalid_argument("bracket body mode mismatch");
        return BracketWord(mode, {BracketLetter{label, std::make_shared<BracketWord>(body)}});
    }

    TermMode mode() const { return mode_; }
    const std::vector<BracketLetter>& letters() const { return letters_; }
    bool is_one() const { return letters_.empty(); }

    friend BracketWord operator*(const BracketWord& a, const BracketWord& b) {
        if (a.mode_ != b.mode_) throw std::invalid_argument("bracket word mode mismatch");
        std::vector<BracketLetter> ls = a.letters_;
        ls.insert(ls.end(), b.letters_.begin(), b.letters_.end());
        return BracketWord(a.mode_, std::move(ls));
    }

    friend bool operator==(const BracketWord& a, const BracketWord& b) { return compare(a, b) == 0; }
    friend bool operator<(const BracketWord& a, const BracketWord& b) { return compare(a, b) < 0; }

private:
    void normalize() {
        if (mode_ == TermMode::Commutative)
            std::stable_sort(letters_.begin(), letters_.end(),
                             [](const BracketLetter& a, const BracketLetter& b) { return compare(a, b) < 0; });
    }

    TermMode mode_;
    std::vector<BracketLetter> letters_;
};

/// Letter order: variables before brackets; variables by name; brackets by
/// (label, contents).
inline int compare(const BracketLetter& a, const BracketLetter& b) {
    if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
    if (int c = a.name.compare(b.name); c != 0) return c < 0 ? -1 : 1;
    if (a.is_var()) return 0;
    return compare(*a.sub, *b.sub);
}

inline int compare(const BracketWord& a, const BracketWord& b) {
    if (a.mode() != b.mode()) throw std::invalid_argument("comparing bracket words of different modes");
    const auto& la = a.letters();
    const auto& lb = b.letters();
    if (la.size() != lb.size()) return la.size() < lb.size() ? -1 : 1;
    for (size_t i = 0; i < la.size(); ++i)
        if (int c = compare(la[i], lb[i]); c != 0) return c;
    return 0;
}

/// k-linear combination of bracket words sharing one mode.
class LawExpr {
public:
    explicit LawExpr(TermMode mode) : mode_(mode) {}
    LawExpr(const BracketWord& w, const Rat& c = 1) : mode_(w.mode()) { add_term(w, c); }

    static LawExpr zero(TermMode mode) { return LawExpr(mode); }
    static LawExpr one(TermMode mode) { return LawExpr(BracketWord::one(mode)); }
    static LawExpr variable(TermMode mode, const std::string& name) {
        return LawExpr(BracketWord::variable(mode, name));
    }

    TermMode mode() const { return mode_; }
    const std::map<BracketWord, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    void add_term(const BracketWord& w, const Rat& c) {
        if (c == 0) return;
        if (w.mode() != mode_) throw std::invalid_argument("law term mode mismatch");
        auto it = terms_.find(w);
        if (it == terms_.end()) {
            terms_.emplace(w, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    LawExpr& operator+=(const LawExpr& o) {
        for (const auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    LawExpr& operator-=(const LawExpr& o) {
        for (const auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }
    friend LawExpr operator+(LawExpr a, const LawExpr& b) { return a += b; }
    friend LawExpr operator-(LawExpr a, const LawExpr& b) { return a -= b; }
    friend LawExpr operator*(const Rat& c, const LawExpr& l) {
        LawExpr r(l.mode_);
        if (c == 0) return r;
        for (const auto& [w, wc] : l.terms_) r.terms_[w] = c * wc;
        return r;
    }
    friend LawExpr operator*(const LawExpr& a, const LawExpr& b) {
        if (a.mode_ != b.mode_) throw std::invalid_argument("law mode mismatch");
        LawExpr r(a.mode_);
        for (const auto& [wa, ca] : a.terms_)
            for (const auto& [wb, cb] : b.terms_) r.add_term(wa * wb, ca * cb);
        return r;
    }
    friend bool operator==(const LawExpr& a, const LawExpr& b) {
        return a.mode_ == b.mode_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const LawExpr& a, const LawExpr& b) { return !(a == b); }

    /// Linear extension of the bracket operator.
    static LawExpr bracket(const std::string& label, const LawExpr& body) {
        LawExpr r(body.mode());
        for (const auto& [w, c] : body.terms()) r.add_term(BracketWord::bracket(body.mode(), label, w), c);
        return r;
    }

private:
    TermMode mode_;
    std::map<BracketWord, Rat> terms_;
};

inline unsigned deg_in(const BracketWord& u, const std::string& y) {
    unsigned d = 0;
    for (const auto& l : u.letters()) {
        if (l.is_var()) {
            if (l.name == y) ++d;
        } else {
            d += deg_in(*l.sub, y);
        }
    }
    return d;
}

inline unsigned total_deg(const BracketWord& u) {
    unsigned d = 0;
    for (const auto& l : u.letters()) d += l.is_var() ? 1 : total_deg(*l.sub);
    return d;
}

inline void collect_variables(const BracketWord& u, std::set<std::string>& out) {
    for (const auto& l : u.letters()) {
        if (l.is_var())
            out.insert(l.name);
        else
            collect_variables(*l.sub, out);
    }
}

inline std::set<std::string> variables(const LawExpr& l) {
    std::set<std::string> vars;
    for (const auto& [w, c] : l.terms()) collect_variables(w, vars);
    return vars;
}

inline bool is_star(const std::string& name) { return !name.empty() && name[0] == '*'; }
inline std::string star_name(unsigned j) { return "*" + std::to_string(j); }

/// Homomorphic substitution: every occurrence of a bound variable is
/// replaced by its image and the product is expanded; unbound ordinary
/// variables stay put. Remaining unbound stars are an error.
inline LawExpr substitute(const BracketWord& q, const std::map<std::string, LawExpr>& bindings) {
    LawExpr acc = LawExpr::one(q.mode());
    for (const auto& l : q.letters()) {
        if (l.is_var()) {
            auto it = bindings.find(l.name);
            if (it != bindings.end()) {
                if (it->second.mode() != q.mode()) throw std::invalid_argument("substitution image mode mismatch");
                acc = acc * it->second;
            } else if (is_star(l.name)) {
                throw std::invalid_argument("unbound star " + l.name + " in substitution");
            } else {
                acc = acc * LawExpr::variable(q.mode(), l.name);
            }
        } else {
            acc = acc * LawExpr::bracket(l.name, substitute(*l.sub, bindings));
        }
    }
    return acc;
}

inline LawExpr substitute(const LawExpr& l, const std::map<std::string, LawExpr>& bindings) {
    LawExpr r(l.mode());
    for (const auto& [w, c] : l.terms()) r += c * substitute(w, bindings);
    return r;
}

/// Rename variables (a special case of substitution kept total on stars).
inline LawExpr rename(const LawExpr& l, const std::map<std::string, std::string>& names) {
    std::map<std::string, LawExpr> bindings;
    for (const auto& [from, to] : names) bindings.emplace(from, LawExpr::variable(l.mode(), to));
    return substitute(l, bindings);
}

namespace detail {
inline BracketWord star_pattern_walk(const BracketWord& u, const std::string& y, unsigned& next) {
    std::vector<BracketLetter> out;
    for (const auto& l : u.letters()) {
        if (l.is_var()) {
            if (l.name == y)
                out.push_back(BracketLetter{star_name(next++), nullptr});
            else
                out.push_back(l);
        } else {
            auto body = star_pattern_walk(*l.sub, y, next);
            out.push_back(BracketLetter{l.name, std::make_shared<BracketWord>(body)});
        }
    }
    return BracketWord(u.mode(), std::move(out));
}
}  // namespace detail

/// Replace the occurrences of y by *1..*n in traversal order (left to right
/// for noncommutative words, canonical storage order for commutative ones).
inline BracketWord star_pattern(const BracketWord& u, const std::string& y) {
    if (deg_in(u, y) == 0) throw std::invalid_argument("star_pattern: variable does not occur");
    unsigned next = 1;
    return detail::star_pattern_walk(u, y, next);
}

namespace detail {
inline BracketWord to_mode(const BracketWord& u, TermMode target) {
    std::vector<BracketLetter> out;
    for (const auto& l : u.letters()) {
        if (l.is_var())
            out.push_back(l);
        else
            out.push_back(BracketLetter{l.name, std::make_shared<BracketWord>(to_mode(*l.sub, target))});
    }
    return BracketWord(target, std::move(out));
}
}  // namespace detail

/// Natural projection k M(Y) -> k C(Y): forget the order of letters.
inline LawExpr abelianize(const LawExpr& l) {
    if (l.mode() != TermMode::Noncommutative) throw std::invalid_argument("abelianize expects a noncommutative law");
    LawExpr r(TermMode::Commutative);
    for (const auto& [w, c] : l.terms()) r.add_term(detail::to_mode(w, TermMode::Commutative), c);
    return r;
}

/// Module embedding k C(Y) -> k M(Y): write each commutative monomial with
/// its letters in the canonical increasing order.
inline LawExpr comm_embed(const LawExpr& l) {
    if (l.mode() != TermMode::Commutative) throw std::invalid_argument("comm_embed expects a commutative law");
    LawExpr r(TermMode::Noncommutative);
    for (const auto& [w, c] : l.terms()) r.add_term(detail::to_mode(w, TermMode::Noncommutative), c);
    return r;
}

inline std::string law_word_str(const BracketWord& w) {
    if (w.is_one()) return "1";
    std::string s;
    bool first = true;
    for (const auto& l : w.letters()) {
        if (!first) s += "*";
        first = false;
        if (l.is_var()) {
            s += l.name;
        } else {
            if (l.name == "D" || l.name == "I")
                s += l.name;
            else
                s += "w:" + l.name;
            s += "{" + law_word_str(*l.sub) + "}";
        }
    }
    return s;
}

inline std::string str(const LawExpr& l) {
    if (l.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = l.terms().rbegin(); it != l.terms().rend(); ++it) {
        const Rat& c = it->second;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        Rat a = abs(c);
        std::string w = law_word_str(it->first);
        if (a != 1 || w == "1") {
            os << to_string(a);
            if (w != "1") os << "*";
        }
        if (w != "1") os << w;
        first = false;
    }
    return os.str();
}

}  // namespace opalg
