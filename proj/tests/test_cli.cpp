#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hardylab/config.hpp"
#include "hardylab/errors.hpp"
#include "hardylab/report.hpp"

using namespace hardylab;
using namespace hardylab::config;
using doctest::Approx;

namespace {

const std::map<std::string, std::string> no_env;

std::vector<std::string> qbeta_args() {
    return {"quotient", "--domain", "ball",   "--dim",    "3",          "--radius", "1",       "--s",
            "2.5",      "--beta",   "1.5",    "--family", "ball-shell", "--delta",  "1e-4",    "--functional",
            "qbeta"};
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("direct mapping of quotient flags") {
        const auto cfg = parse_config(qbeta_args(), no_env);
        CHECK(cfg.command == Command::Quotient);
        const auto spec = domain_spec(cfg);
        CHECK(spec.kind == geometry::DomainKind::Ball);
        CHECK(spec.dim == 3);
        CHECK(spec.radius == 1.0);
        CHECK(cfg.s == 2.5);
        CHECK(cfg.beta == 1.5);
        CHECK(cfg.family == "ball-shell");
        CHECK(cfg.delta == 1e-4);
        CHECK(cfg.tol == 1e-8);
        CHECK(cfg.format == report::Format::Csv);
    }

    TEST_CASE("ladder expansion") {
        const auto cfg = parse_config({"sweep", "--ladder", "1e-1:1e-6:6:log", "--domain", "punctured-space",
                                       "--family", "annulus-indicator", "--eta", "1", "--functional", "ratio", "--s",
                                       "4", "--prediction", "1"},
                                      no_env);
        REQUIRE(cfg.ladder.size() == 6);
        for (int i = 0; i < 6; ++i) CHECK(cfg.ladder[i] == std::pow(10.0, -(i + 1)));
        CHECK(cfg.vary == "delta");
        CHECK(parse_ladder("0.5,0.25,0.125") == std::vector<double>{0.5, 0.25, 0.125});
        CHECK_THROWS_AS(parse_ladder("1:2:3"), InvalidArgument);
        CHECK_THROWS_AS(parse_ladder("1,x"), InvalidArgument);
    }

    TEST_CASE("precondition gates run before computing") {
        auto args = qbeta_args();
        args[8] = "0.5";
        CHECK_THROWS_AS(parse_config(args, no_env), InvalidArgument);
        args = qbeta_args();
        args[10] = "1.8";  // beta > s - 1
        CHECK_THROWS_AS(parse_config(args, no_env), InvalidArgument);
        CHECK_THROWS_AS(parse_config({"quotient", "--functional", "qbeta", "--s", "2.5", "--beta", "1"}, no_env),
                        InvalidArgument);
        CHECK_THROWS_AS(parse_config({"sweep", "--ladder", "1e-1,1e-2", "--family", "ball-shell", "--functional",
                                      "qbeta", "--s", "2.5", "--beta", "1"},
                                     no_env),
                        InvalidArgument);  // limit mode without a prediction
        CHECK_THROWS_AS(parse_config({"sweep", "--ladder", "1e-2,1e-1", "--family", "ball-shell", "--functional",
                                      "qbeta", "--s", "2.5", "--beta", "1", "--prediction", "0"},
                                     no_env),
                        InvalidArgument);  // increasing ladder
        CHECK_THROWS_AS(parse_config({"quotient", "--domain", "annulus", "--inner", "3", "--outer", "1", "--family",
                                      "bump", "--center", "2", "--width", "0.1", "--functional", "meanlap"},
                                     no_env),
                        InvalidArgument);
    }

    TEST_CASE("unknown flags, bad numbers and missing commands are errors") {
        auto args = qbeta_args();
        args.push_back("--bogus");
        CHECK_THROWS_AS(parse_config(args, no_env), InvalidArgument);
        args = qbeta_args();
        args[8] = "two";
        CHECK_THROWS_AS(parse_config(args, no_env), InvalidArgument);
        CHECK_THROWS_AS(parse_config({}, no_env), InvalidArgument);
        CHECK_THROWS_AS(parse_config({"divcheck", "--s", "2"}, no_env), InvalidArgument);
        CHECK_THROWS_AS(parse_config({"verify", "--suite", "other"}, no_env), InvalidArgument);
        CHECK_THROWS_AS(parse_config({"quotient", "--help"}, no_env), HelpRequested);
    }

    TEST_CASE("flags override the environment") {
        const std::map<std::string, std::string> env{{"HARDYLAB_TOL", "1e-6"}, {"HARDYLAB_OUT", "/tmp/x"}};
        const auto a = parse_config(qbeta_args(), env);
        CHECK(a.tol == 1e-6);
        CHECK(a.out_dir == "/tmp/x");
        auto args = qbeta_args();
        args.insert(args.end(), {"--tol", "1e-9"});
        CHECK(parse_config(args, env).tol == 1e-9);
        CHECK_THROWS_AS(parse_config(qbeta_args(), {{"HARDYLAB_TOL", "abc"}}), InvalidArgument);
    }

    TEST_CASE("evaluate dispatches on the functional") {
        const auto r = evaluate(parse_config(qbeta_args(), no_env));
        CHECK(r.functional == "qbeta");
        CHECK(r.value > 0.0);
        const auto lp = evaluate(parse_config(
            {"quotient", "--functional", "lp", "--s", "3", "--p", "2", "--eps", "0.1"}, no_env));
        CHECK(lp.value == Approx(1.05));
        const auto im = evaluate(parse_config({"quotient", "--functional", "im", "--s", "2.5", "--m", "0", "--beta",
                                               "1.5", "--family", "ball-shell", "--delta", "1e-4"},
                                              no_env));
        CHECK(im.value == Approx(2.0135).epsilon(1e-4));
        const auto slab = evaluate(parse_config({"quotient", "--domain", "strip", "--functional", "qgamma", "--s",
                                                 "3", "--gamma", "1", "--R", "1", "--family", "strip-slab", "--eps",
                                                 "1e-4", "--eta", "1", "--transverse-exponent", "1.5"},
                                                no_env));
        const auto at = slab.family_params.find("delta_t=");
        REQUIRE(at != std::string::npos);
        CHECK(std::stod(slab.family_params.substr(at + 8)) == Approx(1e-6).epsilon(1e-12));
        const auto base = parse_config(qbeta_args(), no_env);
        CHECK(with_parameter(base, "delta", 1e-3).delta == 1e-3);
        CHECK_THROWS_AS(with_parameter(base, "colour", 1.0), InvalidArgument);
    }
}

TEST_SUITE("report") {
    using report::emit_report;
    using report::Format;
    using report::Result;

    TEST_CASE("header-only output for an empty list") {
        const auto csv = emit_report({}, Format::Csv);
        CHECK(csv == "domain,dim,geom_params,family,family_params,functional,s,beta,gamma,p,value,err_est,"
                     "prediction,gap,pass\n");
        const auto j = nlohmann::json::parse(emit_report({}, Format::Json));
        CHECK(j["schema_version"] == 1);
        CHECK(j["runs"].empty());
    }

    TEST_CASE("a single quotient run") {
        const auto r = evaluate(parse_config(qbeta_args(), no_env));
        const auto csv = emit_report({r}, Format::Csv);
        CHECK(count_lines(csv) == 2);
        CHECK(csv.find("\nball,3,R=1,ball-shell,delta=1e-04,qbeta,2.5,1.5,,,") != std::string::npos);
        const auto j = nlohmann::json::parse(emit_report({r}, Format::Json));
        REQUIRE(j["runs"].size() == 1);
        CHECK(j["runs"][0]["value"].get<double>() == r.value);
        CHECK(j["runs"][0]["gamma"].is_null());
        CHECK(j["runs"][0]["pass"].is_null());
    }

    TEST_CASE("a 6-point sweep in ladder order") {
        const auto ps = geometry::make_domain(geometry::DomainSpec::punctured_space(3));
        constants::StudySpec spec;
        spec.ladder = constants::geometric_ladder(1e-1, 1e-6, 6);
        spec.prediction = 1.0;
        spec.tolerance = 1e-4;
        const auto st = constants::convergence_study(spec, [&](double d) {
            return functionals::ratio_plain_report(ps, profiles::annulus_indicator(ps, d, 1.0), 4.0);
        });
        const auto csv = emit_report({st}, Format::Csv);
        CHECK(count_lines(csv) == 7);
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        for (int i = 1; i <= 6; ++i) {
            std::getline(in, line);
            const char* expect[] = {"0.1", "0.01", "0.001", "1e-04", "1e-05", "1e-06"};
            CHECK(line.find(std::string("delta=") + expect[i - 1]) != std::string::npos);
            CHECK(line.substr(line.size() - 4) == "true");
        }
        CHECK(emit_report({st}, Format::Json) == emit_report({st}, Format::Json));
    }

    TEST_CASE("non-finite values and bounds") {
        functionals::EvaluationReport r;
        r.domain = geometry::DomainSpec::punctured_space(3);
        r.functional = "ratio";
        r.value = INFINITY;
        r.prediction = "-2..0.4";
        const auto csv = emit_report({r}, Format::Csv);
        CHECK(csv.find(",inf,") != std::string::npos);
        CHECK(csv.find("-2..0.4") != std::string::npos);
        const auto j = nlohmann::json::parse(emit_report({r}, Format::Json));
        CHECK(j["runs"][0]["value"] == "inf");
        CHECK(j["runs"][0]["s"].is_null());
    }

    TEST_CASE("mixed kinds are rejected") {
        const std::vector<Result> mixed{functionals::EvaluationReport{}, constants::StudyReport{}};
        CHECK_THROWS_AS(emit_report(mixed, Format::Csv), InvalidArgument);
        CHECK_THROWS_AS(report::format_from_string("xml"), InvalidArgument);
    }

    TEST_CASE("atomic writes") {
        namespace fs = std::filesystem;
        const fs::path dir = fs::temp_directory_path() / "hardylab_report_test";
        fs::create_directories(dir);
        const fs::path file = dir / "out.csv";
        report::write_atomic(file, "a,b\n");
        report::write_atomic(file, "c,d\n");
        std::ifstream in(file);
        std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        CHECK(s == "c,d\n");
        CHECK_FALSE(fs::exists(dir / ".out.csv.tmp"));
        CHECK_THROWS_AS(report::write_atomic(dir / "missing" / "x.csv", "x"), Error);
        fs::remove_all(dir);
    }

    TEST_CASE("identical configs give identical bytes") {
        const auto cfg = parse_config(qbeta_args(), no_env);
        CHECK(emit_report({evaluate(cfg)}, Format::Csv) == emit_report({evaluate(cfg)}, Format::Csv));
        CHECK(emit_report({evaluate(cfg)}, Format::Json) == emit_report({evaluate(cfg)}, Format::Json));
    }
}
