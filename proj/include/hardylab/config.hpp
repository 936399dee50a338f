#pragma once

// Command-line configuration and the mapping from flags to domains,
// profiles and evaluators.

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "hardylab/constants.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/profiles.hpp"
#include "hardylab/report.hpp"

namespace hardylab::config {

using functionals::kNaN;

enum class Command { Catalogue, Constants, Quotient, Sweep, Divcheck, Verify };

std::string to_string(Command c);

struct RunConfig {
    Command command = Command::Catalogue;

    // Domain.
    std::string domain = "ball";
    int dim = 3;
    double radius = kNaN;  // R, strip half-width, or R_U
    double inner = kNaN;   // r0
    double outer = kNaN;   // R0

    // Family.
    std::string family;
    double delta = kNaN;
    double eta = kNaN;
    double exponent = kNaN;
    double eps = kNaN;
    double transverse_scale = kNaN;
    double transverse_exponent = kNaN;  // delta_t = eps^transverse_exponent
    double rho = kNaN;
    double center = kNaN;
    double width = kNaN;

    // Functional.
    std::string functional;
    std::string inequality;
    double s = kNaN;
    double beta = kNaN;
    double gamma = kNaN;
    double p = 1.0;
    double alpha = kNaN;
    double c0 = kNaN;
    double C = kNaN;
    double R = kNaN;  // scale inside X; inradius when unset
    int m = -1;
    std::string denom = "power";  // "power" or "x" for im
    int k = 1;

    // Sweep.
    std::string vary;  // ladder parameter; family default when empty
    std::vector<double> ladder;
    double prediction = kNaN;
    std::string mode = "limit";
    double tolerance = kNaN;  // study tolerance; tol when unset
    double threshold = kNaN;

    // Divcheck.
    std::string field;
    int grid = 64;
    double max_residual = 1e-6;

    // Verify.
    std::string suite;
    int criterion = 0;  // 0 runs every criterion

    double tol = 1e-8;
    std::string out_dir;
    std::string output;
    report::Format format = report::Format::Csv;
    bool fast_paths = true;
};

/// Thrown by parse_config for --help; carries the rendered help text.
struct HelpRequested {
    std::string text;
};

/// Parses argv (without the program name) with env supplying HARDYLAB_TOL
/// and HARDYLAB_OUT defaults. Throws InvalidArgument on unknown flags,
/// unparsable numbers, missing required flags, or failed preconditions of
/// the dispatched operation.
RunConfig parse_config(const std::vector<std::string>& argv, const std::map<std::string, std::string>& env);

/// "a:b:k:log" (k geometric points from a to b) or a comma list.
std::vector<double> parse_ladder(const std::string& text);

geometry::DomainSpec domain_spec(const RunConfig& cfg);

using Profile = std::variant<profiles::TestProfile, profiles::ProductProfile>;

/// The configured family on the domain; `s` resolves exponents written
/// relative to s.
Profile make_profile(const RunConfig& cfg, const geometry::Domain& domain);

/// Name of the family parameter a sweep varies when --vary is not given.
std::string default_vary(const RunConfig& cfg);

/// Evaluates the configured functional with the given overrides applied.
functionals::EvaluationReport evaluate(const RunConfig& cfg);

/// Copy of cfg with the named parameter set to value.
RunConfig with_parameter(const RunConfig& cfg, const std::string& name, double value);

constants::StudyMode study_mode(const std::string& name);

}  // namespace hardylab::config
