// ckspec: spectra of weighted composition operators on compactified orbit systems.
//
//   ckspec analyze <file> [--text|--json|--svg <out>] [--self-check]
//   ckspec certify <file> --lambda a/b,c/d [--eps E] [--horizon N]
//   ckspec fixtures list|emit <name>
//
// Exit codes: 0 success, 1 input error, 2 internal inconsistency, 3 certificate failure.

#include "ckspec/fixtures.hpp"
#include "ckspec/report.hpp"
#include "ckspec/selfcheck.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

enum Exit { ok = 0, input_error = 1, inconsistency = 2, certificate_failure = 3 };

struct RunConfig {
    std::string input;
    bool text = false;
    bool json = false;
    std::string svg;
    bool self_check = false;
    std::string lambda;
    double eps = 1e-6;
    std::uint64_t horizon = 10000;
    std::string fixture_action;
    std::string fixture_name;
};

int analyze(const RunConfig& cfg) {
    const ckspec::ValidatedModel m = ckspec::parse_model(cfg.input);
    const ckspec::SpectralReport rep = ckspec::essential_spectra(m);
    if (cfg.self_check) {
        const auto bad = ckspec::self_check(m);
        for (const auto& b : bad) std::cerr << "self-check: lambda=" << b.lambda << ": " << b.what << "\n";
        if (!bad.empty()) return inconsistency;
    }
    if (!cfg.svg.empty()) {
        std::ofstream out(cfg.svg);
        if (!out) {
            std::cerr << "error: cannot write '" << cfg.svg << "'\n";
            return input_error;
        }
        out << ckspec::report_to_svg(m, rep);
    }
    if (cfg.json) std::cout << ckspec::report_to_json(m, rep).dump(2) << "\n";
    else if (cfg.text || cfg.svg.empty()) std::cout << ckspec::report_to_text(m, rep);
    if (cfg.self_check) std::cerr << "self-check: engine and chain oracle agree on every sample\n";
    return ok;
}

int certify(const RunConfig& cfg) {
    const ckspec::ValidatedModel m = ckspec::parse_model(cfg.input);
    ckspec::RationalComplex lambda;
    try {
        lambda = ckspec::parse_complex(cfg.lambda);
    } catch (const std::exception& e) {
        std::cerr << "error: --lambda: " << e.what() << "\n";
        return input_error;
    }
    const ckspec::SpectralReport rep = ckspec::essential_spectra(m);

    ckspec::Certificate cert;
    if (!rep.sigma.contains(lambda)) {
        cert = ckspec::out_certificate(m, lambda, cfg.horizon);
    } else if (rep.sigma2.contains(lambda) || rep.sigma2_dual.contains(lambda)) {
        const auto side = rep.sigma2.contains(lambda) ? ckspec::Side::upper : ckspec::Side::lower;
        try {
            cert = ckspec::in_certificate(m, lambda, side, cfg.horizon, cfg.eps);
        } catch (const ckspec::CertificateError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return certificate_failure;
        }
    } else {
        // Fredholm point of the spectrum: report the exact chain dimensions instead.
        cert.kind = ckspec::CertificateKind::chain;
        cert.lambda = lambda;
        const ckspec::Count ker = ckspec::chain_kernel_dim(m, lambda);
        const ckspec::Count def = ckspec::chain_defect_dim(m, lambda);
        ckspec::Count eng_ker, eng_def;
        std::optional<std::int64_t> index;
        if (lambda.is_zero()) {
            eng_ker = rep.zero_report.dim_ker;
            eng_def = rep.zero_report.defect;
            index = rep.zero_report.index;
        } else {
            const auto fd = ckspec::fredholm_data(m, lambda);
            eng_ker = fd.dim_ker;
            eng_def = fd.defect;
            index = fd.index;
        }
        cert.pass = ker == eng_ker && def == eng_def;
        cert.details = "Fredholm point: dim ker " + ker.str() + ", defect " + def.str() +
                       ", index " + (index ? std::to_string(*index) : std::string("undefined"));
    }
    auto j = ckspec::certificate_to_json(cert);
    if (!cert.details.empty()) j["details"] = cert.details;
    std::cout << j.dump(2) << "\n";
    return cert.pass ? ok : certificate_failure;
}

int fixtures_cmd(const RunConfig& cfg) {
    if (cfg.fixture_action == "list") {
        for (const auto& f : ckspec::fixtures()) std::cout << f.name << "\t" << f.summary << "\n";
        return ok;
    }
    if (cfg.fixture_action == "emit") {
        const auto m = ckspec::fixture(cfg.fixture_name);
        if (!m) {
            std::cerr << "error: unknown fixture '" << cfg.fixture_name << "'\n";
            return input_error;
        }
        std::cout << ckspec::emit_model(*m);
        return ok;
    }
    std::cerr << "error: fixtures expects 'list' or 'emit <name>'\n";
    return input_error;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra and essential spectra of weighted composition operators"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* an = app.add_subcommand("analyze", "compute sigma and sigma1..sigma5");
    an->add_option("file", cfg.input, "model file (JSON)")->required();
    auto* fmt = an->add_option_group("format");
    fmt->add_flag("--text", cfg.text, "plain-text report (default)");
    fmt->add_flag("--json", cfg.json, "JSON report");
    fmt->add_option("--svg", cfg.svg, "write an SVG plot to this path");
    fmt->require_option(0, 1);
    an->add_flag("--self-check", cfg.self_check, "re-verify against the chain oracle on the sample grid");

    auto* ce = app.add_subcommand("certify", "numerical certificate for one lambda");
    ce->add_option("file", cfg.input, "model file (JSON)")->required();
    ce->add_option("--lambda", cfg.lambda, "a/b,c/d")->required();
    ce->add_option("--eps", cfg.eps, "tolerance for exact constructions")->check(CLI::PositiveNumber);
    ce->add_option("--horizon", cfg.horizon, "orbit length / Neumann horizon")->check(CLI::Range(std::uint64_t{4}, std::uint64_t{100000000}));

    auto* fx = app.add_subcommand("fixtures", "built-in models");
    fx->add_option("action", cfg.fixture_action, "list | emit")->required();
    fx->add_option("name", cfg.fixture_name, "fixture name for emit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : input_error;
    }

    try {
        if (an->parsed()) return analyze(cfg);
        if (ce->parsed()) return certify(cfg);
        return fixtures_cmd(cfg);
    } catch (const ckspec::ParseError& e) {
        std::cerr << cfg.input << ":" << e.what() << "\n";
        return input_error;
    } catch (const ckspec::ModelError& e) {
        std::cerr << cfg.input << ": " << e.what() << "\n";
        return input_error;
    } catch (const ckspec::SpectraError& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return inconsistency;
    } catch (const ckspec::CertificateError& e) {
        std::cerr << "certificate: " << e.what() << "\n";
        return certificate_failure;
    }
}
