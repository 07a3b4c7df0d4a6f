#pragma once

#include <stdexcept>
#include <string>

#include "rs/tree.hpp"

namespace rs {

/*
 * Textual expression grammar for trees and linear combinations (see
 * docs/grammar.ebnf).  Examples, at d = 3:
 *
 *     Xi
 *     I(Xi)*I(Xi)*I(Xi)            (also writable I(Xi)^3)
 *     X^(0,1,0,0) * I(Xi) * I(Xi)
 *     I[(0,1,0,0)](Xi)
 *     1/2 I(Xi) + -3 X^(0,0,1,0)
 *
 * parse is linear in the input; render(text) of any combination re-parses to
 * the same combination.  Multi-indices are always written in full length d+1.
 */

struct SyntaxError : std::invalid_argument {
    std::size_t pos;
    SyntaxError(const std::string& what, std::size_t p)
        : std::invalid_argument(what + " at position " + std::to_string(p)), pos(p) {}
};
struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& w) : std::invalid_argument(w) {}
};

LinComb parse(const std::string& text, std::size_t d = 3);

enum class RenderFormat { text, dot, json };

std::string render(const LinComb& x, RenderFormat f = RenderFormat::text);
std::string render(TreePtr t, RenderFormat f = RenderFormat::text);

}  // namespace rs
