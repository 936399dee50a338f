#include "hardylab/config.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardylab/errors.hpp"

namespace hardylab::config {

using geometry::DomainKind;
using geometry::DomainSpec;

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

double parse_number(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("cannot parse " + what + ": '" + text + "'");
    }
    if (used != text.size()) throw InvalidArgument("cannot parse " + what + ": '" + text + "'");
    return v;
}

double need(double v, const std::string& flag) {
    if (std::isnan(v)) throw InvalidArgument("missing required flag " + flag);
    return v;
}

void add_domain(CLI::App* sc, RunConfig& c) {
    sc->add_option("--domain", c.domain, "ball | strip | punctured-space | punctured-ball | annulus");
    sc->add_option("--dim", c.dim, "space dimension n");
    sc->add_option("--radius", c.radius, "R (ball), half-width (strip) or R_U (punctured ball)");
    sc->add_option("--inner", c.inner, "annulus inner radius r0");
    sc->add_option("--outer", c.outer, "annulus outer radius R0");
}

void add_family(CLI::App* sc, RunConfig& c) {
    sc->add_option("--family", c.family, "annulus-indicator | power | ball-shell | strip-slab | cheeger | bump");
    sc->add_option("--delta", c.delta);
    sc->add_option("--eta", c.eta);
    sc->add_option("--exponent", c.exponent, "power profile exponent");
    sc->add_option("--eps", c.eps, "slab offset, or power exponent s-1+eps");
    sc->add_option("--transverse-scale", c.transverse_scale, "delta_t of the transverse cone");
    sc->add_option("--transverse-exponent", c.transverse_exponent, "delta_t = eps^value");
    sc->add_option("--rho", c.rho);
    sc->add_option("--center", c.center);
    sc->add_option("--width", c.width);
}

void add_functional(CLI::App* sc, RunConfig& c) {
    sc->add_option("--functional", c.functional,
                   "ratio | qbeta | qgamma | qgamma-n | im | gradq | gap | meanlap | lp");
    sc->add_option("--inequality", c.inequality, "inequality id for --functional gap");
    sc->add_option("--s", c.s);
    sc->add_option("--beta", c.beta);
    sc->add_option("--gamma", c.gamma);
    sc->add_option("--p", c.p);
    sc->add_option("--alpha", c.alpha);
    sc->add_option("--c0", c.c0);
    sc->add_option("--C", c.C, "remainder constant (default gamma - 1)");
    sc->add_option("--R", c.R, "scale inside X (default inradius)");
    sc->add_option("--m", c.m, "number of series terms for im");
    sc->add_option("--denom", c.denom, "power | x (im only)");
}

void check_domain(const RunConfig& c) {
    (void)geometry::make_domain(domain_spec(c));
}

void check_functional(const RunConfig& c) {
    const std::string& f = c.functional;
    require(!f.empty(), "missing required flag --functional");
    const auto domain = geometry::make_domain(domain_spec(c));
    if (f != "lp") {
        require(!c.family.empty(), "missing required flag --family");
        (void)make_profile(c, domain);
    }
    if (f == "meanlap") return;
    const double s = need(c.s, "--s");
    const int n = c.dim;
    if (f == "ratio") {
        require(s >= 1.0, "ratio needs s >= 1");
    } else if (f == "qbeta") {
        require(s > 1.0, "qbeta needs s > 1");
        const double beta = need(c.beta, "--beta");
        require(beta > 0.0 && beta <= s - 1.0, "qbeta needs 0 < beta <= s - 1");
    } else if (f == "qgamma" || f == "qgamma-n") {
        require(s >= (f == "qgamma" ? 1.0 : n), f + (f == "qgamma" ? " needs s >= 1" : " needs s >= n"));
        require(need(c.gamma, "--gamma") >= 1.0, f + " needs gamma >= 1");
    } else if (f == "im") {
        require(s >= 1.0, "im needs s >= 1");
        const int top = static_cast<int>(std::floor(s)) - 1;
        require(c.m >= 0 && c.m <= top, "im needs 0 <= --m <= floor(s) - 1");
        require(c.denom == "power" || c.denom == "x", "--denom must be power or x");
        if (c.denom == "power") need(c.beta, "--beta");
        if (c.denom == "x") require(c.m == top, "im with --denom x needs m = floor(s) - 1");
    } else if (f == "gradq") {
        require(s >= 1.0, "gradq needs s >= 1");
        need(c.c0, "--c0");
        require(need(c.alpha, "--alpha") >= 0.0, "gradq needs alpha >= 0");
    } else if (f == "gap") {
        require(!c.inequality.empty(), "missing required flag --inequality");
    } else if (f == "lp") {
        require(s > 1.0, "lp needs s > 1");
        require(c.p >= 1.0, "lp needs p >= 1");
        require(need(c.eps, "--eps") > 0.0, "lp needs eps > 0");
    } else {
        throw InvalidArgument("unknown functional: " + f);
    }
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::Catalogue: return "catalogue";
        case Command::Constants: return "constants";
        case Command::Quotient: return "quotient";
        case Command::Sweep: return "sweep";
        case Command::Divcheck: return "divcheck";
        case Command::Verify: return "verify";
    }
    return "?";
}

std::vector<double> parse_ladder(const std::string& text) {
    require(!text.empty(), "empty ladder");
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        require(parts.size() == 4 && parts[3] == "log", "ladder range must read start:stop:count:log");
        const double a = parse_number(parts[0], "ladder start");
        const double b = parse_number(parts[1], "ladder stop");
        const double k = parse_number(parts[2], "ladder count");
        require(k >= 1 && k == std::floor(k), "ladder count must be a positive integer");
        return constants::geometric_ladder(a, b, static_cast<int>(k));
    }
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, "ladder value"));
    return out;
}

constants::StudyMode study_mode(const std::string& name) {
    if (name == "limit") return constants::StudyMode::Limit;
    if (name == "decreasing-to-zero") return constants::StudyMode::DecreasingToZero;
    if (name == "validity") return constants::StudyMode::Validity;
    throw InvalidArgument("unknown study mode: " + name);
}

RunConfig parse_config(const std::vector<std::string>& argv, const std::map<std::string, std::string>& env) {
    RunConfig c;
    if (auto it = env.find("HARDYLAB_TOL"); it != env.end() && !it->second.empty()) {
        c.tol = parse_number(it->second, "HARDYLAB_TOL");
    }
    if (auto it = env.find("HARDYLAB_OUT"); it != env.end()) c.out_dir = it->second;

    CLI::App app{"Numerical laboratory for weighted L1 Hardy inequalities", "hardylab"};
    app.require_subcommand(1);
    std::string format = "csv";
    std::string ladder;
    bool exact_quadrature = false;
    auto add_output = [&](CLI::App* sc) {
        sc->add_option("--tol", c.tol, "gap tolerance (HARDYLAB_TOL)");
        sc->add_option("--output", c.output, "output file (relative names go under HARDYLAB_OUT)");
        sc->add_option("--format", format, "csv | json");
        sc->add_flag("--no-fast-paths", exact_quadrature, "use quadrature even where closed forms exist");
    };

    auto* cat = app.add_subcommand("catalogue", "list domains, families, functionals and ids");
    auto* cons = app.add_subcommand("constants", "predicted constants for a domain");
    add_domain(cons, c);
    cons->add_option("--s", c.s);
    cons->add_option("--p", c.p);
    cons->add_option("--gamma", c.gamma);
    cons->add_option("--k", c.k);
    cons->add_option("--inequality", c.inequality);

    auto* quot = app.add_subcommand("quotient", "evaluate one functional");
    add_domain(quot, c);
    add_family(quot, c);
    add_functional(quot, c);
    add_output(quot);

    auto* sweep = app.add_subcommand("sweep", "evaluate a functional along a parameter ladder");
    add_domain(sweep, c);
    add_family(sweep, c);
    add_functional(sweep, c);
    add_output(sweep);
    sweep->add_option("--ladder", ladder, "start:stop:count:log or a comma list")->required();
    sweep->add_option("--vary", c.vary, "parameter varied along the ladder");
    sweep->add_option("--prediction", c.prediction);
    sweep->add_option("--mode", c.mode, "limit | decreasing-to-zero | validity");
    sweep->add_option("--tolerance", c.tolerance, "study tolerance (default --tol)");
    sweep->add_option("--threshold", c.threshold, "final-value bound for decreasing-to-zero");

    auto* div = app.add_subcommand("divcheck", "divergence residuals of the proof vector fields");
    add_domain(div, c);
    div->add_option("--field", c.field, "thm2.5 | thm2.7 | thm2.11 | thm2.13 | sec5")->required();
    div->add_option("--s", c.s)->required();
    div->add_option("--gamma", c.gamma);
    div->add_option("--R", c.R);
    div->add_option("--grid", c.grid);
    div->add_option("--max-residual", c.max_residual);
    div->add_option("--output", c.output);

    auto* ver = app.add_subcommand("verify", "run the acceptance suite");
    ver->add_option("--suite", c.suite)->required();
    ver->add_option("--criterion", c.criterion, "run a single criterion");

    std::vector<std::string> args(argv.rbegin(), argv.rend());
    try {
        app.parse(args);
    } catch (const CLI::Success& e) {
        std::ostringstream out, err;
        app.exit(e, out, err);
        throw HelpRequested{out.str()};
    } catch (const CLI::ParseError& e) {
        throw InvalidArgument(e.what());
    }

    if (cat->parsed()) c.command = Command::Catalogue;
    if (cons->parsed()) c.command = Command::Constants;
    if (quot->parsed()) c.command = Command::Quotient;
    if (sweep->parsed()) c.command = Command::Sweep;
    if (div->parsed()) c.command = Command::Divcheck;
    if (ver->parsed()) c.command = Command::Verify;
    c.format = report::format_from_string(format);
    c.fast_paths = !exact_quadrature;
    require(c.tol > 0.0, "tol must be positive");

    switch (c.command) {
        case Command::Catalogue: break;
        case Command::Constants: check_domain(c); break;
        case Command::Quotient: check_functional(c); break;
        case Command::Sweep: {
            c.ladder = parse_ladder(ladder);
            for (std::size_t i = 1; i < c.ladder.size(); ++i) {
                require(c.ladder[i] < c.ladder[i - 1], "ladder must be strictly decreasing");
            }
            if (c.vary.empty()) c.vary = default_vary(c);
            const auto mode = study_mode(c.mode);
            if (mode == constants::StudyMode::DecreasingToZero) {
                need(c.threshold, "--threshold");
            } else {
                need(c.prediction, "--prediction");
            }
            for (double v : c.ladder) check_functional(with_parameter(c, c.vary, v));
            break;
        }
        case Command::Divcheck:
            check_domain(c);
            require(c.grid > 0, "grid must be positive");
            break;
        case Command::Verify: require(c.suite == "acceptance", "unknown suite: " + c.suite); break;
    }
    return c;
}

DomainSpec domain_spec(const RunConfig& c) {
    const DomainKind kind = geometry::domain_kind_from_string(c.domain);
    switch (kind) {
        case DomainKind::Ball: return DomainSpec::ball(c.dim, std::isnan(c.radius) ? 1.0 : c.radius);
        case DomainKind::Strip: return DomainSpec::strip(c.dim, std::isnan(c.radius) ? 1.0 : c.radius);
        case DomainKind::PuncturedSpace: return DomainSpec::punctured_space(c.dim);
        case DomainKind::PuncturedBall:
            return DomainSpec::punctured_ball(c.dim, std::isnan(c.radius) ? 2.0 : c.radius);
        case DomainKind::Annulus:
            return DomainSpec::annulus(c.dim, std::isnan(c.inner) ? 1.0 : c.inner,
                                       std::isnan(c.outer) ? 3.0 : c.outer);
    }
    throw InvalidArgument("unknown domain");
}

Profile make_profile(const RunConfig& c, const geometry::Domain& domain) {
    const std::string& f = c.family;
    if (f == "annulus-indicator") {
        return profiles::annulus_indicator(domain, need(c.delta, "--delta"), need(c.eta, "--eta"));
    }
    if (f == "power") {
        double e = c.exponent;
        if (std::isnan(e)) e = need(c.s, "--s") - 1.0 + need(c.eps, "--exponent or --eps");
        return profiles::power_profile(domain, e);
    }
    if (f == "ball-shell") return profiles::ball_shell_indicator(domain, need(c.delta, "--delta"));
    if (f == "strip-slab") {
        const double eps = need(c.eps, "--eps");
        double dt = c.transverse_scale;
        if (std::isnan(dt)) dt = std::isnan(c.transverse_exponent) ? 1.0 : std::pow(eps, c.transverse_exponent);
        return profiles::strip_slab_profile(domain, eps, need(c.eta, "--eta"), dt);
    }
    if (f == "cheeger") return profiles::cheeger_concentric(domain, need(c.rho, "--rho"));
    if (f == "bump") return profiles::radial_bump(domain, need(c.center, "--center"), need(c.width, "--width"));
    throw InvalidArgument("unknown family: " + f);
}

std::string default_vary(const RunConfig& c) {
    if (c.functional == "lp") return "eps";
    if (c.family == "annulus-indicator" || c.family == "ball-shell") return "delta";
    if (c.family == "strip-slab" || c.family == "power") return "eps";
    if (c.family == "cheeger") return "rho";
    if (c.family == "bump") return "width";
    throw InvalidArgument("sweep needs --vary for family '" + c.family + "'");
}

RunConfig with_parameter(const RunConfig& cfg, const std::string& name, double value) {
    RunConfig c = cfg;
    if (name == "delta") c.delta = value;
    else if (name == "eta") c.eta = value;
    else if (name == "eps") c.eps = value;
    else if (name == "rho") c.rho = value;
    else if (name == "width") c.width = value;
    else if (name == "center") c.center = value;
    else if (name == "exponent") c.exponent = value;
    else if (name == "transverse-scale") c.transverse_scale = value;
    else if (name == "s") c.s = value;
    else if (name == "beta") c.beta = value;
    else if (name == "gamma") c.gamma = value;
    else if (name == "alpha") c.alpha = value;
    else if (name == "p") c.p = value;
    else throw InvalidArgument("cannot vary parameter '" + name + "'");
    return c;
}

functionals::EvaluationReport evaluate(const RunConfig& c) {
    using namespace functionals;
    const auto domain = geometry::make_domain(domain_spec(c));
    EvalOptions opts;
    opts.fast_paths = c.fast_paths;
    const std::string& f = c.functional;
    if (f == "lp") return lp_ratio_report(domain, c.s, c.p, c.eps, opts);
    const Profile profile = make_profile(c, domain);
    return std::visit(
        [&](const auto& prof) -> EvaluationReport {
            const ProfileRef u(prof);
            if (f == "ratio") return ratio_plain_report(domain, u, c.s, opts);
            if (f == "qbeta") return quotient_Qbeta_report(domain, u, c.s, c.beta, opts);
            if (f == "qgamma") return quotient_Qgamma_report(domain, u, c.s, c.gamma, c.R, opts);
            if (f == "qgamma-n") return quotient_Qgamma_n_report(domain, u, c.s, c.gamma, c.R, opts);
            if (f == "im") {
                const auto denom = c.denom == "x" ? ImDenominator::XWeight : ImDenominator::Power;
                return remainder_ratio_Im_report(domain, u, c.s, c.m, denom, c.beta, opts);
            }
            if (f == "gradq") return gradient_quotient_report(domain, u, c.s, c.c0, c.alpha, opts);
            if (f == "gap") {
                GapParams gp;
                gp.s = c.s;
                gp.gamma = c.gamma;
                gp.p = c.p;
                gp.C = c.C;
                gp.R = c.R;
                return inequality_gap_report(domain, u, c.inequality, gp, c.tol, opts);
            }
            if (f == "meanlap") return meanlap_ratio_report(domain, u, opts);
            throw InvalidArgument("unknown functional: " + f);
        },
        profile);
}

}  // namespace hardylab::config
