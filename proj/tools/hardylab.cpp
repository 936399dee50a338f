// hardylab command-line front end.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "hardylab/acceptance.hpp"
#include "hardylab/config.hpp"
#include "hardylab/errors.hpp"
#include "hardylab/format.hpp"
#include "hardylab/parallel.hpp"

using namespace hardylab;
using config::Command;
using config::RunConfig;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

void deliver(const RunConfig& cfg, const std::string& content) {
    if (cfg.output.empty()) {
        std::cout << content;
        return;
    }
    std::filesystem::path path(cfg.output);
    if (path.is_relative() && !cfg.out_dir.empty()) path = std::filesystem::path(cfg.out_dir) / path;
    report::write_atomic(path, content);
}

int catalogue() {
    std::cout << "domains:\n"
                 "  ball             --dim n --radius R\n"
                 "  strip            --dim n --radius R   (0 < x_n < 2R)\n"
                 "  punctured-space  --dim n\n"
                 "  punctured-ball   --dim n --radius R_U\n"
                 "  annulus          --dim n --inner r0 --outer R0\n"
                 "families:\n"
                 "  annulus-indicator  --delta --eta       (punctured domains)\n"
                 "  power              --exponent | --eps  (d^(s-1+eps))\n"
                 "  ball-shell         --delta             (ball)\n"
                 "  strip-slab         --eps --eta [--transverse-scale | --transverse-exponent]\n"
                 "  cheeger            --rho               (ball)\n"
                 "  bump               --center --width\n"
                 "functionals:\n"
                 "  ratio qbeta qgamma qgamma-n im gradq gap meanlap lp\n"
                 "inequalities:\n"
                 "  2.3 2.3-equality 2.4 2.7 2.8 2.9 2.10 2.11 2.13 2.17 5.2 5.3 6.1 1.4\n"
                 "fields:\n"
                 "  thm2.5 thm2.7 thm2.11 thm2.13 sec5\n";
    return kOk;
}

int constants_cmd(const RunConfig& cfg) {
    const auto domain = geometry::make_domain(config::domain_spec(cfg));
    constants::ConstantParams cp;
    cp.s = cfg.s;
    cp.p = cfg.p;
    cp.gamma = cfg.gamma;
    cp.k = cfg.k;
    std::vector<std::string> ids{"2.3", "2.4", "2.7", "2.8", "2.9", "2.10", "2.11", "2.13", "5.2", "5.3",
                                 "6.1", "6.1-remainder", "B1"};
    if (!cfg.inequality.empty()) ids = {cfg.inequality};
    std::ostringstream out;
    out << "inequality_id,constant,provenance\n";
    for (const auto& id : ids) {
        try {
            const auto c = constants::predicted_constant(id, domain, cp);
            out << id << ',' << c.text() << ',' << c.provenance << '\n';
        } catch (const HypothesisViolation& e) {
            if (!cfg.inequality.empty()) throw;
            out << id << ",," << "not applicable: " << e.what() << '\n';
        } catch (const InvalidArgument& e) {
            if (!cfg.inequality.empty()) throw;
            out << id << ",," << "needs more parameters: " << e.what() << '\n';
        }
    }
    std::cout << out.str();
    return kOk;
}

int quotient(const RunConfig& cfg) {
    const auto r = config::evaluate(cfg);
    deliver(cfg, report::emit_report({r}, cfg.format));
    if (r.pass == "false") return kFailed;
    return kOk;
}

int sweep(const RunConfig& cfg) {
    constants::StudySpec spec;
    spec.ladder = cfg.ladder;
    spec.mode = config::study_mode(cfg.mode);
    spec.prediction = cfg.prediction;
    spec.tolerance = std::isnan(cfg.tolerance) ? cfg.tol : cfg.tolerance;
    spec.threshold = cfg.threshold;
    const auto study = constants::convergence_study(
        spec, [&](double v) { return config::evaluate(config::with_parameter(cfg, cfg.vary, v)); });
    deliver(cfg, report::emit_report({study}, cfg.format));
    std::cerr << "sweep " << constants::to_string(spec.mode) << ": limit "
              << format_number(study.extrapolated_limit) << (study.extrapolated ? " (extrapolated)" : "")
              << ", pass " << (study.pass ? "true" : "false") << '\n';
    return study.pass ? kOk : kFailed;
}

int divcheck(const RunConfig& cfg) {
    const auto domain = geometry::make_domain(config::domain_spec(cfg));
    functionals::FieldParams params{cfg.s, cfg.gamma, cfg.R};
    const auto grid = functionals::divergence_grid(domain, params, cfg.grid);
    const auto pairs = parallel::omp_map<functionals::DivergencePair>(
        grid.size(), [&](std::size_t i) { return functionals::div_T(domain, cfg.field, params, grid[i]); });
    std::ostringstream out;
    out << "t,analytic,finite_difference,residual\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << format_full(grid[i]) << ',' << format_full(pairs[i].analytic) << ','
            << format_full(pairs[i].finite_difference) << ',' << format_full(pairs[i].residual) << '\n';
        worst = std::max(worst, pairs[i].residual);
    }
    deliver(cfg, out.str());
    std::cerr << "divcheck " << cfg.field << ": max residual " << format_number(worst) << '\n';
    return worst <= cfg.max_residual ? kOk : kFailed;
}

int verify(const RunConfig& cfg) {
    bool all = true;
    auto run = [&](int id) {
        const auto r = acceptance::run_criterion(id);
        std::cout << acceptance::format_line(r) << std::endl;
        all = all && r.pass;
    };
    if (cfg.criterion != 0) {
        run(cfg.criterion);
    } else {
        for (int i = 1; i <= acceptance::kCriterionCount; ++i) run(i);
    }
    return all ? kOk : kFailed;
}

std::map<std::string, std::string> environment() {
    std::map<std::string, std::string> env;
    for (const char* key : {"HARDYLAB_TOL", "HARDYLAB_OUT"}) {
        if (const char* v = std::getenv(key)) env[key] = v;
    }
    return env;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        const RunConfig cfg = config::parse_config({argv + 1, argv + argc}, environment());
        switch (cfg.command) {
            case Command::Catalogue: return catalogue();
            case Command::Constants: return constants_cmd(cfg);
            case Command::Quotient: return quotient(cfg);
            case Command::Sweep: return sweep(cfg);
            case Command::Divcheck: return divcheck(cfg);
            case Command::Verify: return verify(cfg);
        }
    } catch (const config::HelpRequested& h) {
        std::cout << h.text;
        return kOk;
    } catch (const InvalidArgument& e) {
        std::cerr << "hardylab: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError& e) {
        std::cerr << "hardylab: numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const Error& e) {
        std::cerr << "hardylab: " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}
