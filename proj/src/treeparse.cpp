#include "rs/treeparse.hpp"

#include <json.hpp>
#include <sstream>

namespace rs {

namespace {

/* Recursive-descent parser over a flat character buffer.  Whitespace is
 * insignificant everywhere outside tokens. */
class Parser {
  public:
    Parser(const std::string& text, std::size_t d) : s_(text), d_(d) {}

    LinComb parse_lincomb() {
        LinComb out;
        skip_ws();
        bool negate = accept('-');
        out += signed_term(negate);
        while (true) {
            skip_ws();
            if (accept('+')) {
                skip_ws();
                out += signed_term(accept('-'));
            } else if (accept('-')) {
                out += signed_term(true);
            } else {
                break;
            }
        }
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return out;
    }

  private:
    const std::string& s_;
    std::size_t d_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) pos_++;
    }
    bool accept(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            pos_++;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    bool peek_digit() {
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }

    unsigned parse_nat() {
        skip_ws();
        if (!peek_digit()) fail("expected number");
        unsigned long v = 0;
        while (peek_digit()) v = v * 10 + static_cast<unsigned long>(s_[pos_++] - '0');
        return static_cast<unsigned>(v);
    }

    Rat parse_coeff() {
        // integer or p/q; sign handled by the caller
        std::size_t start = pos_;
        unsigned long num = parse_nat();
        skip_ws();
        if (accept('/')) {
            unsigned long den = parse_nat();
            if (den == 0) throw SyntaxError("zero denominator", start);
            Rat q(static_cast<long>(num), static_cast<long>(den));
            q.canonicalize();
            return q;
        }
        return Rat(static_cast<long>(num));
    }

    Multi parse_multi() {
        skip_ws();
        expect('(');
        std::vector<unsigned> v;
        v.push_back(parse_nat());
        skip_ws();
        while (accept(',')) {
            v.push_back(parse_nat());
            skip_ws();
        }
        expect(')');
        if (v.size() != d_ + 1)
            throw DimensionMismatch("multi-index length " + std::to_string(v.size()) +
                                    ", expected " + std::to_string(d_ + 1));
        return Multi(std::move(v));
    }

    /* term := [rational] factor ('*' factor)* ; a leading rational may be
     * separated by whitespace or '*'. */
    LinComb signed_term(bool negate) {
        skip_ws();
        Rat coeff = 1;
        if (peek_digit()) {
            std::size_t save = pos_;
            Rat q = parse_coeff();
            skip_ws();
            // a bare rational (before +/-/)/eof) denotes a multiple of the unit tree
            if (pos_ == s_.size() || s_[pos_] == '+' || s_[pos_] == '-' || s_[pos_] == ')')
                return LinComb(one(d_), negate ? Rat(-q) : q);
            if (s_[pos_] == '*' || s_[pos_] == 'X' || s_[pos_] == 'I' || s_[pos_] == '1' ||
                s_[pos_] == '(') {
                coeff = q;
                accept('*');
            } else {
                pos_ = save;
            }
        }
        if (negate) coeff = -coeff;
        LinComb acc = parse_factor();
        while (true) {
            skip_ws();
            std::size_t save = pos_;
            if (!accept('*')) break;
            skip_ws();
            if (pos_ == s_.size()) {
                pos_ = save;
                fail("dangling '*'");
            }
            acc = combine(acc, parse_factor());
        }
        return coeff * acc;
    }

    static LinComb combine(const LinComb& a, const LinComb& b) {
        LinComb out;
        for (const auto& [ta, ca] : a.terms())
            for (const auto& [tb, cb] : b.terms()) out.add(product(ta, tb), ca * cb);
        return out;
    }

    LinComb parse_factor() {
        LinComb base = parse_atom();
        skip_ws();
        if (accept('^')) {
            unsigned n = parse_nat();
            LinComb acc(one(d_));
            for (unsigned i = 0; i < n; i++) acc = combine(acc, base);
            return acc;
        }
        return base;
    }

    LinComb parse_atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (accept('(')) {
            // parenthesised sub-combination
            LinComb inner = parse_sub_lincomb();
            expect(')');
            return inner;
        }
        if (s_.compare(pos_, 2, "Xi") == 0) {
            pos_ += 2;
            return LinComb(noise(d_));
        }
        if (accept('1')) return LinComb(one(d_));
        if (accept('X')) {
            expect('^');
            return LinComb(monomial(parse_multi()));
        }
        if (accept('I')) {
            Multi m(d_ + 1);
            skip_ws();
            if (accept('[')) {
                m = parse_multi();
                skip_ws();
                expect(']');
            }
            skip_ws();
            expect('(');
            LinComb arg = parse_sub_lincomb();
            expect(')');
            LinComb out;
            for (const auto& [t, c] : arg.terms()) out += c * plant(m, t);
            return out;
        }
        fail("expected 'Xi', '1', 'X^', 'I' or '('");
    }

    /* lincomb without the end-of-input check, for bracketed positions */
    LinComb parse_sub_lincomb() {
        LinComb out;
        skip_ws();
        bool negate = accept('-');
        out += signed_sub_term(negate);
        while (true) {
            skip_ws();
            if (accept('+')) {
                out += signed_sub_term(false);
            } else if (accept('-')) {
                out += signed_sub_term(true);
            } else {
                break;
            }
        }
        return out;
    }

    LinComb signed_sub_term(bool negate) { return signed_term(negate); }
};

std::string render_tree_text(TreePtr t) {
    if (t->noise) return "Xi";
    std::string out;
    bool sep = false;
    if (!t->k.is_zero()) {
        out += "X^" + t->k.str();
        sep = true;
    }
    if (t->edges.empty() && t->k.is_zero()) return "1";
    for (std::size_t i = 0; i < t->edges.size();) {
        std::size_t j = i;
        while (j < t->edges.size() && t->edges[j] == t->edges[i]) j++;
        if (sep) out += "*";
        const Edge& e = t->edges[i];
        out += e.m.is_zero() ? "I(" : "I[" + e.m.str() + "](";
        out += render_tree_text(e.child);
        out += ")";
        if (j - i > 1) out += "^" + std::to_string(j - i);
        sep = true;
        i = j;
    }
    return out;
}

nlohmann::json tree_json(TreePtr t) {
    if (t->noise) return nlohmann::json{{"noise", true}};
    nlohmann::json ch = nlohmann::json::array();
    for (const Edge& e : t->edges)
        ch.push_back({{"m", e.m.v}, {"t", tree_json(e.child)}});
    return nlohmann::json{{"k", t->k.v}, {"children", ch}};
}

void dot_walk(TreePtr t, unsigned& next_id, unsigned my_id, std::ostringstream& out) {
    out << "  n" << my_id << " [label=\""
        << (t->noise ? std::string("Xi") : (t->k.is_zero() ? "" : "X^" + t->k.str()))
        << "\"];\n";
    for (const Edge& e : t->edges) {
        unsigned child_id = next_id++;
        out << "  n" << my_id << " -> n" << child_id << " [label=\"I"
            << (e.m.is_zero() ? "" : e.m.str()) << "\"];\n";
        dot_walk(e.child, next_id, child_id, out);
    }
}

}  // namespace

LinComb parse(const std::string& text, std::size_t d) {
    return Parser(text, d).parse_lincomb();
}

std::string render(TreePtr t, RenderFormat f) {
    switch (f) {
        case RenderFormat::text:
            return render_tree_text(t);
        case RenderFormat::json:
            return tree_json(t).dump();
        case RenderFormat::dot: {
            std::ostringstream out;
            out << "digraph tree {\n";
            unsigned next = 1;
            dot_walk(t, next, 0, out);
            out << "}\n";
            return out.str();
        }
    }
    return {};
}

std::string render(const LinComb& x, RenderFormat f) {
    if (f == RenderFormat::json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [t, c] : x.terms())
            arr.push_back({{"coeff", to_string(c)}, {"tree", tree_json(t)}});
        return arr.dump();
    }
    if (f == RenderFormat::dot) {
        // one graph per term is unhelpful; render the first tree only
        if (x.is_zero()) return "digraph tree {\n}\n";
        return render(x.terms().begin()->first, RenderFormat::dot);
    }
    if (x.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [t, c] : x.terms()) {
        const bool neg = c < 0;
        const Rat a = abs(c);
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        if (a != 1) out += to_string(a) + " ";
        out += render_tree_text(t);
        first = false;
    }
    return out;
}

}  // namespace rs
