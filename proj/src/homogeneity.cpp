#include "rs/homogeneity.hpp"

#include <sstream>

namespace rs {

std::string SKNumber::str() const {
    std::ostringstream out;
    bool first = true;
    auto term = [&](const Rat& c, const char* sym) {
        if (c == 0) return;
        if (!first && c > 0) out << "+";
        if (sym[0] == '\0') {
            out << to_string(c);
        } else if (c == 1) {
            out << sym;
        } else if (c == -1) {
            out << "-" << sym;
        } else {
            out << to_string(c) << sym;
        }
        first = false;
    };
    term(c0, "");
    term(cs, "s");
    term(ck, "kappa");
    if (first) out << "0";
    return out.str();
}

}  // namespace rs
