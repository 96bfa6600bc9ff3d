// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "corpus.hpp"

#include "ckspec/model_io.hpp"
#include "ckspec/report.hpp"
#include "ckspec/selfcheck.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sys/wait.h>

using namespace ckspec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass{true};
    std::string note;

    void require(bool cond, const std::string& what) {
        if (cond) return;
        if (pass) note = what;  // first failure is the one reported
        pass = false;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<ValidatedModel> validated(const std::vector<OrbitModel>& raw) {
    std::vector<ValidatedModel> out;
    for (const auto& m : raw) out.push_back(validate(m));
    return out;
}

ValidatedModel fixture_model(const std::string& name) { return validate(*fixture(name)); }

// 1 -------------------------------------------------------------------------
Outcome example_reproduction() {
    Outcome o;
    const auto t0 = Clock::now();
    const ValidatedModel m = fixture_model("half");
    const SpectralReport rep = essential_spectra(m);
    const RadialSet D = RadialSet::disk(ExactRadius::of(1));
    const RadialSet T = RadialSet::circle(ExactRadius::of(1));
    o.require(rep.sigma == D, "sigma != closed unit disk");
    o.require(rep.sigma2 == D, "sigma2 != closed unit disk");
    o.require(rep.sigma3 == D, "sigma3 != closed unit disk");
    o.require(rep.sigma4 == D, "sigma4 != closed unit disk");
    o.require(rep.sigma5 == D, "sigma5 != closed unit disk");
    o.require(rep.sigma2_dual == T, "sigma2' != unit circle");
    o.require(rep.sigma1 == T, "sigma1 != unit circle");
    const double secs = seconds_since(t0);
    o.require(secs < 1.0, "runtime " + std::to_string(secs) + " s");
    if (o.pass) o.note = "half: sigma = sigma2..sigma5 = D, sigma1 = sigma2' = T (" + std::to_string(secs) + " s)";
    return o;
}

// 2 -------------------------------------------------------------------------
Outcome structural_identities(const std::vector<ValidatedModel>& models) {
    Outcome o;
    const auto t0 = Clock::now();
    for (const auto& m : models) {
        const SpectralReport r = essential_spectra(m);
        const std::string id = m.model().name + ": ";
        o.require(r.sigma1 == intersect(r.sigma2, r.sigma2_dual), id + "sigma1 != sigma2 n sigma2'");
        o.require(r.sigma3 == unite(r.sigma2, r.sigma2_dual), id + "sigma3 != sigma2 u sigma2'");
        o.require(r.sigma1.subset_of(r.sigma2), id + "sigma1 not in sigma2");
        o.require(r.sigma2.subset_of(r.sigma4), id + "sigma2 not in sigma4");
        o.require(r.sigma1.subset_of(r.sigma3) && r.sigma3.subset_of(r.sigma4), id + "sigma1 c sigma3 c sigma4 broken");
        o.require(r.sigma4.subset_of(r.sigma5), id + "sigma4 not in sigma5");
        o.require(r.sigma5.subset_of(r.sigma), id + "sigma5 not in sigma");
        o.require(r.sigma == unite(sigma_M(m), sigma_L(m)), id + "sigma != sigma_M u sigma_L");
        const auto rho = essential_radius(r.sigma1);
        for (const RadialSet* s : {&r.sigma2, &r.sigma3, &r.sigma4, &r.sigma5})
            o.require(essential_radius(*s) == rho, id + "essential radii differ");
    }
    const double secs = seconds_since(t0);
    o.require(secs < 60.0, "runtime " + std::to_string(secs) + " s");
    if (o.pass) o.note = std::to_string(models.size()) + " random models, exact (" + std::to_string(secs) + " s)";
    return o;
}

// 3 -------------------------------------------------------------------------
Outcome engine_oracle(const std::vector<ValidatedModel>& models) {
    Outcome o;
    std::size_t samples = 0;
    for (const auto& m : models) {
        samples += sample_lambdas(m).size();
        for (const auto& bad : self_check(m)) o.require(false, m.model().name + " at " + to_string(bad.lambda) + ": " + bad.what);
    }
    if (o.pass) o.note = std::to_string(samples) + " sampled lambdas over " + std::to_string(models.size()) + " models, 0 mismatches";
    return o;
}

// 4 -------------------------------------------------------------------------
Outcome zero_behaviour() {
    Outcome o;
    for (const std::string name : {"zero", "bundlezero", "ray1", "half"}) {
        const ValidatedModel m = fixture_model(name);
        const CoreSets cs = core_sets(m);
        const ZeroReport z = zero_analysis(m);
        const SpectralReport rep = essential_spectra(m);
        const Count ker = chain_kernel_dim(m, RationalComplex(0));
        const Count def = chain_defect_dim(m, RationalComplex(0));
        const std::string id = name + ": ";
        // upper iff Z(w) is empty or consists of isolated points and K \ phi(K) is finite; lower iff the first
        o.require(z.upper == (cs.zeros_all_isolated() && !cs.sources_infinite), id + "upper flag");
        o.require(z.lower == cs.zeros_all_isolated(), id + "lower flag");
        o.require(z.dim_ker == ker, id + "dim ker differs from chains");
        o.require(z.union_formula_dim_ker == ker, id + "card((K \\ phi(K)) u Z(w)) differs from chains");
        o.require(z.defect == def && z.defect == z.card_zeros, id + "defect != card Z(w)");
        const bool weyl_by_chains = z.fredholm() && !ker.infinite && !def.infinite && ker.value == def.value;
        o.require(weyl_by_chains == (z.fredholm() && z.weyl_criterion_w_vanishes_on_sources), id + "index-0 criterion");
        o.require(z.zero_in_sigma5 && rep.sigma5.contains(RationalComplex(0)), id + "0 not in sigma5");
    }
    if (o.pass) o.note = "zero, bundlezero, ray1, half agree with chains and with the closed-form statements";
    return o;
}

// 5 -------------------------------------------------------------------------
struct CircleCase {
    std::size_t model;
    RationalComplex lambda;
    Side side;
};

Outcome certificates(const std::vector<ValidatedModel>& models) {
    Outcome o;
    const auto t0 = Clock::now();
    std::vector<CircleCase> cases;
    std::size_t toggle = 0;
    for (std::size_t i = 0; i < models.size() && cases.size() < 20; ++i) {
        const auto& m = models[i];
        for (std::size_t c = 0; c < m.cycle_count() && cases.size() < 20; ++c) {
            if (m.is_isolated(c) || m.has_zero_weight(c)) continue;
            const auto pts = rational_points_on_circle(m.gm(c));
            if (pts.empty()) continue;
            const Side side = toggle++ % 2 == 0 ? Side::upper : Side::lower;
            cases.push_back({i, pts[toggle % pts.size()], side});
        }
    }
    o.require(cases.size() == 20, "only " + std::to_string(cases.size()) + " circle cases in the corpus");
    double worst = 0.0;
    for (const auto& cc : cases) {
        const auto& m = models[cc.model];
        double prev = std::numeric_limits<double>::infinity();
        for (std::uint64_t n : {100U, 1000U, 10000U}) {
            const Certificate cert = in_certificate(m, cc.lambda, cc.side, n);
            const std::string id = m.model().name + " at " + to_string(cc.lambda) + " n=" + std::to_string(n) + ": ";
            o.require(cert.residual_ratio < prev, id + "residual not decreasing");
            prev = cert.residual_ratio;
            if (n == 10000) {
                o.require(cert.residual_ratio <= 5.0 / 100.0, id + "residual " + std::to_string(cert.residual_ratio) + " > 5/sqrt(n)");
                worst = std::max(worst, cert.residual_ratio * 100.0);
            }
        }
    }

    std::size_t outs = 0;
    std::uint64_t worst_n = 0;
    for (std::size_t i = 0; i < models.size() && outs < 20; ++i) {
        const auto& m = models[i];
        const RadialSet sigma = sigma_total(m);
        for (const auto& s : sample_lambdas(m)) {
            if (outs == 20) break;
            if (s.kind != LambdaSample::Kind::stratum || sigma.contains(s.lambda)) continue;
            const Certificate cert = out_certificate(m, s.lambda, 200);
            o.require(cert.pass, m.model().name + " at " + to_string(s.lambda) + ": " + cert.details);
            worst_n = std::max(worst_n, cert.horizon);
            ++outs;
        }
    }
    o.require(outs == 20, "only " + std::to_string(outs) + " resolvent samples in the corpus");
    const double secs = seconds_since(t0);
    o.require(secs < 120.0, "runtime " + std::to_string(secs) + " s");
    if (o.pass) {
        std::ostringstream os;
        os << "20 IN cases, fitted C = max residual*sqrt(n) = " << worst << "; 20 OUT cases, largest n used " << worst_n << " ("
           << secs << " s)";
        o.note = os.str();
    }
    return o;
}

// 6 -------------------------------------------------------------------------
Outcome rotation_and_browder(const std::vector<ValidatedModel>& models) {
    Outcome o;
    std::size_t checked = 0;
    for (const auto& m : models) {
        bool all_incident = true;
        for (std::size_t c = 0; c < m.cycle_count(); ++c) all_incident = all_incident && !m.is_isolated(c);
        if (!all_incident) continue;
        const SpectralReport r = essential_spectra(m);
        ++checked;
        for (const RadialSet* s : {&r.sigma, &r.sigma1, &r.sigma2, &r.sigma3, &r.sigma4, &r.sigma5})
            o.require(s->is_rotation_invariant(), m.model().name + ": point part present");
        o.require(r.rotation_invariant, m.model().name + ": flag not set");
        o.require(r.sigma5 == r.sigma, m.model().name + ": sigma5 != sigma");
    }
    if (o.pass) o.note = std::to_string(checked) + " models without isolated cycles: rotation invariant and sigma5 = sigma";
    return o;
}

// 7 -------------------------------------------------------------------------
int run(const std::string& cmd) {
    const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_contract(const std::vector<OrbitModel>& corpus) {
    Outcome o;
    const std::string tool = CKSPEC_TOOL;
    const fs::path dir = fs::temp_directory_path() / ("ckspec-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);

    for (const auto& f : fixtures()) {
        const fs::path shipped = fs::path(CKSPEC_FIXTURE_DIR) / (f.name + ".json");
        try {
            const OrbitModel first = parse_model_text([&] {
                std::ifstream in(shipped);
                std::stringstream ss;
                ss << in.rdbuf();
                return ss.str();
            }());
            const OrbitModel second = parse_model_text(emit_model(first));
            o.require(first == second && first == f.build(), f.name + ": parse -> emit -> parse is not the identity");
        } catch (const std::exception& e) {
            o.require(false, f.name + ": " + e.what());
        }
    }

    // exit codes
    const fs::path bad_key = dir / "bad_key.json";
    std::ofstream(bad_key) << R"({"name": "x", "cycles": [{"id": "F", "wieghts": [[1,1,0,1]]}], "rays": []})";
    const fs::path no_ray = dir / "no_ray.json";
    std::ofstream(no_ray) << R"({"name": "x", "cycles": [{"id": "F", "weights": [[1,1,0,1]]}], "rays": []})";
    const std::string half = (fs::path(CKSPEC_FIXTURE_DIR) / "half.json").string();
    o.require(run(tool + " analyze " + bad_key.string()) == 1, "unknown key: exit code != 1");
    o.require(run(tool + " analyze " + no_ray.string()) == 1, "missing forward ray: exit code != 1");
    o.require(run(tool + " analyze " + (dir / "absent.json").string()) == 1, "missing file: exit code != 1");
    o.require(run(tool + " certify " + half + " --lambda 1/0,0/1") == 1, "bad lambda: exit code != 1");
    o.require(run(tool + " certify " + half + " --lambda 0/1,1/1 --horizon 10000") == 0, "IN certificate: exit code != 0");
    o.require(run(tool + " certify " + half + " --lambda 3/1,0/1") == 0, "OUT certificate: exit code != 0");
    // a weight of 16 at the head keeps sup |w_n|^(1/n) >= 2 > 3/2 for n <= 4
    const fs::path spike = dir / "spike.json";
    std::ofstream(spike) << R"({"name": "spike", "cycles": [{"id": "F", "weights": [[1,1,0,1]]}],
        "rays": [{"id": "r", "kind": "forward", "omega": {"cycle": "F", "phase": 0}, "exceptional": [[0,16,1,0,1]]}]})";
    o.require(run(tool + " certify " + spike.string() + " --lambda 3/2,0/1 --horizon 4") == 3, "unreached margin: exit code != 3");
    o.require(run(tool + " certify " + spike.string() + " --lambda 3/2,0/1 --horizon 200") == 0, "reached margin: exit code != 0");

    std::size_t analyzed = 0;
    for (const auto& m : corpus) {
        const fs::path file = dir / (m.name + ".json");
        std::ofstream(file) << emit_model(m);
        const int code = run(tool + " analyze " + file.string() + " --self-check");
        o.require(code == 0, m.name + ": analyze --self-check exit " + std::to_string(code));
        ++analyzed;
    }
    fs::remove_all(dir);
    if (o.pass) o.note = "fixture round trips, exit codes 0/1/3, --self-check exit 0 on " + std::to_string(analyzed) + " models";
    return o;
}

}  // namespace

int main() {
    const std::vector<OrbitModel> random_raw = corpus_data::random_models();
    const std::vector<OrbitModel> corpus_raw = corpus_data::corpus();
    const std::vector<ValidatedModel> random = validated(random_raw);
    const std::vector<ValidatedModel> corpus = validated(corpus_raw);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 example reproduction on half", [] { return example_reproduction(); }},
        {"2 structural identities", [&] { return structural_identities(random); }},
        {"3 engine-oracle equivalence", [&] { return engine_oracle(corpus); }},
        {"4 behaviour at lambda = 0", [] { return zero_behaviour(); }},
        {"5 certificate convergence", [&] { return certificates(corpus); }},
        {"6 rotation invariance and sigma5 = sigma", [&] { return rotation_and_browder(corpus); }},
        {"7 CLI contract", [&] { return cli_contract(corpus_raw); }},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.note << std::endl;
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
