/*
 * Command-line front end.
 *
 *   rscli enumerate   generate the model space below a homogeneity cutoff and
 *                     tabulate classification, homogeneity exponents and the
 *                     coherence map (text, CSV or JSON)
 *   rscli check       run the symbolic identity checks (remainder fixed
 *                     point, structure-group component identities)
 *   rscli simulate    integrate the damped cubic equation and optionally
 *                     verify the coming-down bound
 *
 * Exit codes: 0 success, 1 a verified property failed, 2 invalid input.
 */
#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "rs/coherence.hpp"
#include "rs/fracnum.hpp"
#include "rs/hopf.hpp"
#include "rs/rulegen.hpp"
#include "rs/tree.hpp"
#include "rs/treeparse.hpp"

using namespace rs;

namespace {

const double kDoublePi = 3.14159265358979323846;

Rat parse_rat(const std::string& text) {
    try {
        Rat q(text);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw CLI::ValidationError("'" + text + "' is not a rational p/q");
    }
}

/* "c0,cs,ck" with rational entries, e.g. "0,-2,0" for -2s. */
SKNumber parse_skn(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.size() != 3)
        throw CLI::ValidationError("expected 'c0,cs,ck', got '" + text + "'");
    return {parse_rat(parts[0]), parse_rat(parts[1]), parse_rat(parts[2])};
}

std::string class_of(const Classification& cl, TreePtr t) {
    auto in = [&](const std::vector<TreePtr>& v) {
        for (TreePtr u : v)
            if (u == t) return true;
        return false;
    };
    std::string out;
    if (in(cl.P)) out += "P";
    if (in(cl.W)) out += "W";
    if (in(cl.V)) out += out.empty() ? "V" : "|V";
    if (in(cl.V_range)) out += "*";
    if (in(cl.dW)) out += out.empty() ? "dW" : "|dW";
    return out.empty() ? "-" : out;
}

int run_enumerate(const std::string& s_text, const std::string& cutoff_text,
                  std::size_t d, unsigned degree, const std::string& gamma_text,
                  const std::string& format, const std::string& out_path) {
    const SParam s(parse_rat(s_text));
    const SKNumber cutoff = parse_skn(cutoff_text);
    const TreeSet ts = generate(s, cutoff, d, degree);
    const SKNumber gamma =
        gamma_text.empty() ? SKNumber{Rat(3), Rat(-2), 0} : parse_skn(gamma_text);
    const Classification cl = classify(ts, gamma);
    const Nonlinearity f = Nonlinearity::cubic(d);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw CLI::ValidationError("cannot open " + out_path);
        out = &file;
    }

    auto alpha_str = [&](TreePtr t) -> std::string {
        if (t->noise || is_monomial(t)) return "";
        return alpha(t, s).str();
    };
    auto upsilon_str = [&](TreePtr t) -> std::string {
        if (is_monomial(t)) return "";
        return upsilon(f, t).str();
    };

    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (TreePtr t : ts.trees)
            arr.push_back({{"tree", render(t, RenderFormat::text)},
                           {"homogeneity", homogeneity(t).str()},
                           {"class", class_of(cl, t)},
                           {"alpha", alpha_str(t)},
                           {"upsilon", upsilon_str(t)},
                           {"symmetry_factor", to_string(symmetry_factor(t))}});
        *out << nlohmann::json{{"s", s_text},
                               {"cutoff", cutoff.str()},
                               {"gamma", gamma.str()},
                               {"count", ts.trees.size()},
                               {"trees", arr}}
                    .dump(2)
             << "\n";
    } else if (format == "csv") {
        *out << "tree,homogeneity,class,alpha,upsilon,symmetry_factor\n";
        for (TreePtr t : ts.trees)
            *out << '"' << render(t, RenderFormat::text) << "\",\""
                 << homogeneity(t).str() << "\"," << class_of(cl, t) << ",\""
                 << alpha_str(t) << "\",\"" << upsilon_str(t) << "\","
                 << to_string(symmetry_factor(t)) << "\n";
    } else {
        *out << ts.trees.size() << " trees at s = " << s_text
             << ", cutoff " << cutoff.str() << " (gamma " << gamma.str()
             << ": |P| = " << cl.P.size() << ", |W| = " << cl.W.size()
             << ", |V| = " << cl.V.size() << ", |V*| = " << cl.V_range.size()
             << ", |dW| = " << cl.dW.size() << ")\n";
        for (TreePtr t : ts.trees) {
            *out << "  " << render(t, RenderFormat::text) << "\n    |.| = "
                 << homogeneity(t).str() << "   class " << class_of(cl, t);
            const std::string a = alpha_str(t);
            if (!a.empty()) *out << "   alpha = " << a;
            const std::string u = upsilon_str(t);
            if (!u.empty()) *out << "   Upsilon = " << u;
            *out << "\n";
        }
    }
    return 0;
}

Character random_character(const SParam& s, std::size_t d, std::mt19937& rng) {
    auto rrat = [&]() -> Rat {
        std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
        Rat q(num(rng), den(rng));
        q.canonicalize();
        return q;
    };
    Character g;
    for (std::size_t j = 1; j <= d; j++)
        g.vals[forest_monomial(Multi::unit(d + 1, j))] = rrat();
    const SKNumber zero{0, 0, 0}, two_s{0, 2, 0};
    TreeSet pool = generate(s, SKNumber{Rat(1, 2), 0, 0}, d, 2);
    for (TreePtr t : pool.trees) {
        if (is_monomial(t)) continue;
        for (unsigned j = 0; j <= d; j++) {
            Multi m = j == 0 ? Multi(d + 1) : Multi::unit(d + 1, j);
            if (less(zero, homogeneity(t) + two_s - m.shomog(), s))
                g.vals[forest_planted(m, t)] = rrat();
        }
    }
    return g;
}

int run_check(const std::string& s_text, const std::string& gamma_text,
              unsigned characters, unsigned seed) {
    const SParam s(parse_rat(s_text));
    const SKNumber gamma = parse_skn(gamma_text);
    const std::size_t d = 3;
    const Nonlinearity f = Nonlinearity::cubic(d);
    const SKNumber zero{0, 0, 0}, two_s{0, 2, 0};

    try {
        DpdReport r = dpd_check(f, s, gamma);
        std::cout << "remainder fixed point: ok (" << r.keys_compared
                  << " keys, " << r.delta_triples
                  << " symmetry triples, eps = " << to_string(r.epsilon) << ")\n";

        // trees usable at order beta = gamma
        std::vector<TreePtr> taus;
        for (TreePtr t : generate(s, gamma - two_s, d, 2).trees) {
            if (is_monomial(t)) continue;
            const SKNumber h = homogeneity(t) + two_s;
            if (less(zero, h, s) && less(h, gamma, s)) taus.push_back(t);
        }
        std::mt19937 rng(seed);
        std::size_t total = 0;
        for (unsigned c = 0; c < characters; c++) {
            Character g = random_character(s, d, rng);
            for (TreePtr tau : taus)
                total += lemma224_check(f, g, s, gamma, gamma, tau).identities_checked;
        }
        std::cout << "component identities: ok (" << total << " identities at "
                  << characters << " random characters, " << taus.size()
                  << " trees)\n";
    } catch (const IdentityViolation& e) {
        std::cout << "FAILED: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int run_simulate(double s, std::size_t n, double T, double dt, double amplitude,
                 double forcing, const std::string& scheme_name,
                 std::size_t store_every, const std::string& out_path,
                 double c_star) {
    Field u0 = field_from(1, n, [&](const std::vector<double>& x) {
        return amplitude * (1.0 + 0.5 * std::cos(2 * kDoublePi * x[0]));
    });
    Field g = make_field(1, n, forcing);
    SolveOptions opt;
    opt.scheme = scheme_name == "imex" ? Scheme::IMEX_CN : Scheme::ETD1;
    opt.store_every = store_every;
    Trajectory tr;
    try {
        tr = solve_damped(u0, g, s, T, dt, opt);
    } catch (const Blowup& e) {
        std::cout << "FAILED: " << e.what() << "\n";
        return 1;
    }
    if (!out_path.empty()) {
        std::ofstream file(out_path);
        if (!file) throw CLI::ValidationError("cannot open " + out_path);
        file << "t,sup,l2\n";
        for (std::size_t i = 0; i < tr.times.size(); i++)
            file << tr.times[i] << "," << tr.sup_norms[i] << ","
                 << tr.l2_norms[i] << "\n";
    }
    std::cout << "final t = " << tr.times.back()
              << ", sup|u| = " << tr.sup_norms.back()
              << ", ||u||_2 = " << tr.l2_norms.back() << "\n";
    if (c_star > 0) {
        BoundReport br = bound_check(tr, g, c_star);
        std::cout << "coming-down ratio " << br.max_ratio << " vs " << br.threshold
                  << ": " << (br.pass ? "ok" : "FAILED") << "\n";
        if (!br.pass) return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decorated-tree calculus and fractional-heat toolkit"};
    app.require_subcommand(1);

    // enumerate
    std::string e_s = "9/10", e_cutoff = "0,0,0", e_gamma, e_format = "text",
                e_out;
    std::size_t e_d = 3;
    unsigned e_degree = 2;
    auto* en = app.add_subcommand("enumerate", "tabulate the model space");
    en->add_option("--s", e_s, "scaling parameter, rational in (3/4,1)");
    en->add_option("--cutoff", e_cutoff, "homogeneity cutoff 'c0,cs,ck'");
    en->add_option("--d", e_d, "spatial dimension")->check(CLI::Range(1, 3));
    en->add_option("--degree", e_degree, "max polynomial decoration degree");
    en->add_option("--gamma", e_gamma,
                   "classification order 'c0,cs,ck' (default 3-2s)");
    en->add_option("--format", e_format, "text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    en->add_option("--output", e_out, "write to file instead of stdout");

    // check
    std::string c_s = "9/10", c_gamma = "13/10,0,0";
    unsigned c_chars = 5, c_seed = 1;
    auto* ch = app.add_subcommand("check", "run the symbolic identity checks");
    ch->add_option("--s", c_s, "scaling parameter, rational in (3/4,1)");
    ch->add_option("--gamma", c_gamma, "order 'c0,cs,ck', in (3-2s, 2s)");
    ch->add_option("--characters", c_chars, "number of random characters");
    ch->add_option("--seed", c_seed, "random seed");

    // simulate
    double s_s = 0.8, s_T = 1.0, s_dt = 1e-4, s_amp = 1.0, s_forcing = 0.0,
           s_cstar = 0.0;
    std::size_t s_n = 64, s_store = 1;
    std::string s_scheme = "etd1", s_out;
    auto* si = app.add_subcommand("simulate", "integrate the damped equation");
    si->add_option("--s", s_s, "scaling parameter in (0,1)");
    si->add_option("--n", s_n, "grid points (power of two)");
    si->add_option("--T", s_T, "final time");
    si->add_option("--dt", s_dt, "time step (needs dt sup|u|^2 < 1)");
    si->add_option("--amplitude", s_amp, "u0 = A (1 + cos(2 pi x)/2)");
    si->add_option("--forcing", s_forcing, "constant forcing g");
    si->add_option("--scheme", s_scheme, "etd1 or imex")
        ->check(CLI::IsMember({"etd1", "imex"}));
    si->add_option("--store-every", s_store, "snapshot cadence");
    si->add_option("--output", s_out, "CSV trajectory output path");
    si->add_option("--check-bound", s_cstar,
                   "verify sup|u| <= C max{t^{-1/2}, ||g||^{1/3}}");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help is a success; bad usage is 2
    }

    try {
        if (en->parsed())
            return run_enumerate(e_s, e_cutoff, e_d, e_degree, e_gamma, e_format,
                                 e_out);
        if (ch->parsed()) return run_check(c_s, c_gamma, c_chars, c_seed);
        return run_simulate(s_s, s_n, s_T, s_dt, s_amp, s_forcing, s_scheme,
                            s_store, s_out, s_cstar);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
