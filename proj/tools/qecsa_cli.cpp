// Command-line front end: plan rates, print code matrices, run full
// protocol transcripts, execute the verification suites, and reproduce the
// F_5 demonstration instance. Machine-readable JSON goes to stdout (or
// --out), human diagnostics to stderr. Exit code 0 iff everything requested
// passed. Server indices and theta are 1-based on this surface.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qecsa/example_f5.hpp"
#include "qecsa/json_io.hpp"
#include "qecsa/protocol.hpp"
#include "qecsa/verify.hpp"

namespace {

using nlohmann::json;
using namespace qecsa;

struct RunConfig {
    std::size_t n = 4, k = 2, x = 1, t = 1, e = 1;
    std::uint64_t q = 5;
    std::size_t theta = 1; // 1-based
    std::vector<std::size_t> erase; // 1-based
    std::vector<std::uint64_t> delta; // delta1 values then delta2 values
    std::uint64_t seed = 1;
    std::string mode = "auto";
    std::string suite = "all";
    std::string out;
    std::string config_path;
    std::vector<std::uint64_t> alpha, f, u; // optional point overrides
    std::uint64_t enum_cap = kDefaultEnumCap;
};

std::vector<std::uint64_t> parse_csv_u64(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoull(item));
    return out;
}

// Registers the scheme flags on a subcommand and wires them into cfg.
// Returns the option pointers so config-file loading can tell which flags
// the user actually passed.
struct SchemeFlags {
    CLI::Option *n, *k, *x, *t, *e, *q, *theta, *erase, *delta, *seed, *alpha,
        *f, *u;
};

SchemeFlags add_scheme_flags(CLI::App* cmd, RunConfig& cfg,
                             std::string& erase_csv, std::string& delta_csv,
                             std::string& alpha_csv, std::string& f_csv,
                             std::string& u_csv) {
    SchemeFlags fl{};
    fl.n = cmd->add_option("-N,--servers", cfg.n, "number of servers");
    fl.k = cmd->add_option("-K,--messages", cfg.k, "number of messages");
    fl.x = cmd->add_option("-X,--x-secure", cfg.x,
                           "storage collusion threshold");
    fl.t = cmd->add_option("-T,--t-private", cfg.t,
                           "query collusion threshold");
    fl.e = cmd->add_option("-E,--erasures", cfg.e,
                           "tolerated unresponsive servers");
    fl.q = cmd->add_option("-q,--modulus", cfg.q, "prime field modulus");
    fl.theta = cmd->add_option("--theta", cfg.theta,
                               "desired message index (1-based)");
    fl.erase = cmd->add_option("--erase", erase_csv,
                               "erased servers, 1-based CSV (e.g. 3 or 1,4)");
    fl.delta = cmd->add_option(
        "--delta", delta_csv,
        "error values: delta1 list then delta2 list, CSV");
    fl.seed = cmd->add_option("--seed", cfg.seed, "randomness seed");
    fl.alpha = cmd->add_option("--alpha", alpha_csv,
                               "evaluation points override, CSV");
    fl.f = cmd->add_option("--poles", f_csv, "Cauchy poles override, CSV");
    fl.u = cmd->add_option("--multipliers", u_csv,
                           "row multipliers u override, CSV");
    return fl;
}

// Applies a JSON config file underneath any flags the user passed.
void apply_config_file(const RunConfig& defaults, RunConfig& cfg,
                       const SchemeFlags& fl) {
    (void)defaults;
    if (cfg.config_path.empty()) return;
    std::ifstream in(cfg.config_path);
    if (!in)
        throw std::runtime_error("cannot open config file " +
                                 cfg.config_path);
    json doc = json::parse(in);
    auto load = [&](const char* key, auto& field, const CLI::Option* opt) {
        if (doc.contains(key) && (opt == nullptr || opt->count() == 0))
            field = doc[key].get<std::decay_t<decltype(field)>>();
    };
    load("N", cfg.n, fl.n);
    load("K", cfg.k, fl.k);
    load("X", cfg.x, fl.x);
    load("T", cfg.t, fl.t);
    load("E", cfg.e, fl.e);
    load("q", cfg.q, fl.q);
    load("theta", cfg.theta, fl.theta);
    load("erase", cfg.erase, fl.erase);
    load("delta", cfg.delta, fl.delta);
    load("seed", cfg.seed, fl.seed);
    load("alpha", cfg.alpha, fl.alpha);
    load("f", cfg.f, fl.f);
    load("u", cfg.u, fl.u);
}

void finalize_csv(RunConfig& cfg, const SchemeFlags& fl,
                  const std::string& erase_csv, const std::string& delta_csv,
                  const std::string& alpha_csv, const std::string& f_csv,
                  const std::string& u_csv) {
    if (fl.erase->count() > 0) {
        cfg.erase.clear();
        for (std::uint64_t v : parse_csv_u64(erase_csv))
            cfg.erase.push_back(static_cast<std::size_t>(v));
    }
    if (fl.delta->count() > 0) cfg.delta = parse_csv_u64(delta_csv);
    if (fl.alpha->count() > 0) cfg.alpha = parse_csv_u64(alpha_csv);
    if (fl.f->count() > 0) cfg.f = parse_csv_u64(f_csv);
    if (fl.u->count() > 0) cfg.u = parse_csv_u64(u_csv);
}

SchemeParams plan_from_config(const RunConfig& cfg) {
    const FieldSpec field(cfg.q);
    PlanOverrides ov;
    auto to_elems = [&](const std::vector<std::uint64_t>& vals) {
        std::vector<Fe> out;
        for (std::uint64_t v : vals) out.push_back(field.element(v));
        return out;
    };
    if (!cfg.alpha.empty()) ov.alpha = to_elems(cfg.alpha);
    if (!cfg.f.empty()) ov.f = to_elems(cfg.f);
    if (!cfg.u.empty()) ov.u = to_elems(cfg.u);
    return plan_scheme(cfg.n, cfg.k, cfg.x, cfg.t, cfg.e, field, ov);
}

std::vector<std::size_t> erase_zero_based(const RunConfig& cfg,
                                          const SchemeParams& p,
                                          bool pad_to_e) {
    std::vector<std::size_t> out;
    for (std::size_t v : cfg.erase) {
        if (v == 0 || v > p.n_servers)
            throw std::invalid_argument(
                "--erase entries are 1-based server indices");
        out.push_back(v - 1);
    }
    if (out.empty() && pad_to_e)
        for (std::size_t i = 0; i < p.erasures; ++i) out.push_back(i);
    return out;
}

std::optional<std::vector<std::pair<Fe, Fe>>> deltas_from_config(
    const RunConfig& cfg, const SchemeParams& p, std::size_t n_erased) {
    if (cfg.delta.empty()) return std::nullopt;
    if (cfg.delta.size() != 2 * n_erased)
        throw std::invalid_argument(
            "--delta needs 2 * |erase| values (delta1 list, then delta2 "
            "list)");
    std::vector<std::pair<Fe, Fe>> out;
    for (std::size_t i = 0; i < n_erased; ++i)
        out.emplace_back(p.field.element(cfg.delta[i]),
                         p.field.element(cfg.delta[n_erased + i]));
    return out;
}

void emit(const RunConfig& cfg, const std::string& body) {
    if (cfg.out.empty()) {
        std::cout << body << "\n";
    } else {
        std::ofstream out(cfg.out);
        if (!out)
            throw std::runtime_error("cannot write " + cfg.out);
        out << body << "\n";
    }
}

int cmd_rate(const RunConfig& cfg, bool have_q) {
    const RegimePlan plan = plan_regime(cfg.n, cfg.x, cfg.t, cfg.e);
    json j{{"N", cfg.n},
           {"X", cfg.x},
           {"T", cfg.t},
           {"E", cfg.e},
           {"regime", regime_name(plan.regime)},
           {"rate", rate(cfg.n, cfg.x, cfg.t, cfg.e)},
           {"per_instance", plan.per_instance}};
    if (have_q) {
        const SchemeParams p = plan_from_config(cfg);
        j["params"] = p;
    }
    emit(cfg, j.dump(2));
    std::cerr << "rate " << rate(cfg.n, cfg.x, cfg.t, cfg.e).str()
              << " in regime " << regime_name(plan.regime) << "\n";
    return 0;
}

int cmd_build(const RunConfig& cfg) {
    const SchemeParams p = plan_from_config(cfg);
    json j{{"params", p}};
    json csa = json::array(), qcsa = json::array();
    for (std::size_t i = 0; i < p.instances(); ++i) {
        const auto& inst = p.per_instance[i];
        const CodePoints pts = p.points.truncated(inst.l_symbols);
        csa.push_back(csa_matrix(pts, p.x_secure + inst.t_effective));
        qcsa.push_back(
            qcsa_matrix(pts, p.beta(i), p.x_secure + inst.t_effective));
    }
    j["csa"] = csa;
    j["qcsa"] = qcsa;
    if (p.quantum()) {
        const auto erased = erase_zero_based(cfg, p, true);
        const GhPair gh = build_gh(p, pad_erasure_set(p, erased));
        const NSumBoxSpec box = build_box(gh.g, gh.h);
        j["G"] = gh.g;
        j["H"] = gh.h;
        j["M"] = box.transfer();
    }
    emit(cfg, j.dump(2));
    return 0;
}

int cmd_run(const RunConfig& cfg) {
    const SchemeParams p = plan_from_config(cfg);
    if (cfg.theta == 0 || cfg.theta > p.n_messages)
        throw std::invalid_argument("--theta is 1-based in [1, K]");
    const auto erased = erase_zero_based(cfg, p, false);
    const auto deltas = deltas_from_config(cfg, p, erased.size());
    const Transcript t =
        run_end_to_end(p, cfg.theta - 1, cfg.seed, erased, deltas);
    emit(cfg, json(t).dump(2));
    const bool ok = t.decode_matches_store();
    std::cerr << (ok ? "decode exact" : "DECODE MISMATCH") << ", rate "
              << t.achieved_rate().str() << "\n";
    return ok ? 0 : 1;
}

VerifyMode pick_mode(const RunConfig& cfg, std::size_t noise_scalars,
                     const SchemeParams& p) {
    if (cfg.mode == "exhaustive") return VerifyMode::exhaustive;
    if (cfg.mode == "rank_condition") return VerifyMode::rank_condition;
    if (cfg.mode == "sampled") return VerifyMode::sampled;
    if (cfg.mode != "auto")
        throw std::invalid_argument("--mode must be auto, exhaustive, "
                                    "rank_condition or sampled");
    return checked_pow(p.field.modulus(), noise_scalars, cfg.enum_cap)
               ? VerifyMode::exhaustive
               : VerifyMode::rank_condition;
}

int cmd_verify(const RunConfig& cfg) {
    const SchemeParams p = plan_from_config(cfg);
    VerifyOptions opts;
    opts.enum_cap = cfg.enum_cap;
    opts.base_seed = cfg.seed;

    std::vector<VerifyReport> reports;
    const bool all = cfg.suite == "all";
    if (all || cfg.suite == "correctness")
        reports.push_back(verify_correctness(p, opts));
    if (all || cfg.suite == "x-security")
        reports.push_back(verify_x_security(
            p, pick_mode(cfg, detail::storage_noise_scalars(p), p), opts));
    if (all || cfg.suite == "t-privacy")
        reports.push_back(verify_t_privacy(
            p, pick_mode(cfg, detail::query_noise_scalars(p), p), opts));
    if ((all && p.quantum()) || cfg.suite == "lemma1") {
        const auto erased = erase_zero_based(cfg, p, true);
        reports.push_back(
            verify_lemma1(p, pad_erasure_set(p, erased), opts));
    }
    if (all || cfg.suite == "duality")
        reports.push_back(verify_duality(p.points.alpha, p.mult.u));
    if (all || cfg.suite == "rate-table") {
        reports.push_back(verify_rate_table({{4, 1, 1, 1, Rational(1, 2)},
                                             {10, 2, 2, 1, Rational(4, 5)},
                                             {10, 2, 1, 6, Rational(1, 10)},
                                             {5, 1, 1, 1, Rational(3, 5)}}));
        reports.push_back(verify_rate_sweep(12));
    }
    if (reports.empty())
        throw std::invalid_argument(
            "--suite must be all, correctness, x-security, t-privacy, "
            "lemma1, duality or rate-table");

    bool pass = true;
    for (const VerifyReport& r : reports) {
        pass = pass && r.pass;
        std::cerr << r.suite << " [" << verify_mode_name(r.mode) << ", "
                  << r.enumerated << " cells]: "
                  << (r.pass ? "pass" : "FAIL") << "\n";
    }
    emit(cfg, json(reports).dump(2));
    return pass ? 0 : 1;
}

int cmd_example_f5(const RunConfig& cfg) {
    std::size_t erase_server = 2;
    if (!cfg.erase.empty()) {
        if (cfg.erase.size() != 1 || cfg.erase[0] == 0 || cfg.erase[0] > 4)
            throw std::invalid_argument(
                "example-f5 erases exactly one of servers 1..4");
        erase_server = cfg.erase[0] - 1;
    }
    std::optional<std::pair<Fe, Fe>> delta;
    const FieldSpec f5(5);
    if (!cfg.delta.empty()) {
        if (cfg.delta.size() != 2)
            throw std::invalid_argument("example-f5 takes --delta d1,d2");
        delta = std::make_pair(f5.element(cfg.delta[0]),
                               f5.element(cfg.delta[1]));
    }
    const std::size_t theta = cfg.theta == 0 ? 0 : cfg.theta - 1;
    if (theta > 1)
        throw std::invalid_argument("example-f5 has K = 2 messages");
    const ExampleF5Result r =
        run_example_f5(cfg.seed, theta, erase_server, delta);
    emit(cfg, format_example_f5(r));
    if (!r.ok)
        std::cerr << "example deviates from the frozen fixture\n";
    return r.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "erasure-resilient secure private information retrieval over a "
        "finite-field MAC abstraction"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* cap = std::getenv("QECSA_ENUM_CAP"))
        cfg.enum_cap = std::strtoull(cap, nullptr, 10);

    std::string erase_csv, delta_csv, alpha_csv, f_csv, u_csv;

    CLI::App* rate_cmd =
        app.add_subcommand("rate", "regime and achievable rate");
    CLI::App* build_cmd =
        app.add_subcommand("build", "print CSA/QCSA/G/H/M matrices as JSON");
    CLI::App* run_cmd =
        app.add_subcommand("run", "run one protocol transcript");
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run verification suites");
    CLI::App* example_cmd = app.add_subcommand(
        "example-f5", "reproduce the four-server F_5 demonstration");

    std::map<const CLI::App*, SchemeFlags> flags;
    for (CLI::App* cmd :
         {rate_cmd, build_cmd, run_cmd, verify_cmd, example_cmd}) {
        flags[cmd] = add_scheme_flags(cmd, cfg, erase_csv, delta_csv,
                                      alpha_csv, f_csv, u_csv);
        cmd->add_option("--out", cfg.out, "write stdout payload to a file");
        cmd->add_option("--config", cfg.config_path,
                        "JSON config file (explicit flags win)");
    }
    verify_cmd->add_option("--mode", cfg.mode,
                           "auto|exhaustive|rank_condition|sampled");
    verify_cmd->add_option(
        "--suite", cfg.suite,
        "all|correctness|x-security|t-privacy|lemma1|duality|rate-table");

    CLI11_PARSE(app, argc, argv);

    CLI::App* active = app.get_subcommands().front();
    const SchemeFlags& fl = flags[active];
    try {
        apply_config_file(RunConfig{}, cfg, fl);
        finalize_csv(cfg, fl, erase_csv, delta_csv, alpha_csv, f_csv, u_csv);
        if (active == rate_cmd)
            return cmd_rate(cfg, fl.q->count() > 0);
        if (active == build_cmd) return cmd_build(cfg);
        if (active == run_cmd) return cmd_run(cfg);
        if (active == verify_cmd) return cmd_verify(cfg);
        if (active == example_cmd) return cmd_example_f5(cfg);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
