// optw CLI — thin front end over the C API.
//
//   optw analyze <theory> [flags]
//   optw verify <theory> [flags]
//   optw composite <scenario.json> [flags]
//   optw teleport <scenario.json> [flags]
//   optw distance <theory> --states <file> [flags]
//
// <theory> is a theory definition file or a builtin spec (classical:3, gbit,
// polygon:6, hypersphere:2:642, bloch:3, qubit, quantum:3). Exit codes:
// 0 all checks pass, 1 any failure, 2 unresolved results only.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/stat.h>

#include "CLI11.hpp"
#include "optw/optw.h"

namespace {

bool file_exists(const std::string& path) {
    struct stat st{};
    return ::stat(path.c_str(), &st) == 0;
}

int fail(const char* what) {
    std::fprintf(stderr, "optw: %s: %s\n", what, optw_last_error());
    return 3;
}

struct ConfigGuard {
    optw_config* cfg = optw_config_new();
    ~ConfigGuard() { optw_config_free(cfg); }
};

struct TheoryGuard {
    optw_theory* t = nullptr;
    ~TheoryGuard() { optw_theory_free(t); }
};

struct ReportGuard {
    optw_report* rep = nullptr;
    ~ReportGuard() { optw_report_free(rep); }
};

int emit(const optw_report* rep) {
    char* text = nullptr;
    if (optw_report_render(rep, nullptr, &text) != OPTW_OK) return fail("render");
    std::fputs(text, stdout);
    optw_string_free(text);
    return optw_report_exit_code(rep);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"operational probabilistic theory workbench"};
    app.require_subcommand(1);

    std::string theory_arg, scenario_arg, states_arg, witness_dir;
    std::string format = "text";
    uint64_t seed = 0;
    bool seed_set = false;
    double tol = 0.0;
    int cutoff = 0;
    int jobs = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed (fallback: OPTW_SEED, then 0)")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--tol", tol, "feasibility tolerance override");
        cmd->add_option("--cutoff", cutoff, "subset-size search cutoff");
        cmd->add_option("--format", format, "text | tsv | json")
            ->check(CLI::IsMember({"text", "tsv", "json"}));
        cmd->add_option("--jobs", jobs, "worker threads for per-check fan-out");
        cmd->add_option("--witness-dir", witness_dir, "directory for witness files");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "dimensions, chaotic state, witnesses");
    analyze->add_option("theory", theory_arg, "theory file or builtin spec")->required();
    add_common(analyze);

    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_option("theory", theory_arg, "theory file or builtin spec")->required();
    add_common(verify);

    CLI::App* composite = app.add_subcommand("composite", "bipartite scenario checks");
    composite->add_option("scenario", scenario_arg, "scenario file")->required();
    add_common(composite);

    CLI::App* teleport = app.add_subcommand("teleport", "teleportation scenario checks");
    teleport->add_option("scenario", scenario_arg, "scenario file")->required();
    add_common(teleport);

    CLI::App* dist = app.add_subcommand("distance", "pairwise distance matrix");
    dist->add_option("theory", theory_arg, "theory file or builtin spec")->required();
    dist->add_option("--states", states_arg, "states file (JSON)")->required();
    add_common(dist);

    CLI11_PARSE(app, argc, argv);

    ConfigGuard cfg;
    if (!seed_set) {
        if (const char* env = std::getenv("OPTW_SEED")) seed = std::strtoull(env, nullptr, 10);
    }
    optw_config_set_seed(cfg.cfg, seed);
    if (tol > 0.0) optw_config_set_tolerance(cfg.cfg, tol);
    if (cutoff > 0) optw_config_set_cutoff(cfg.cfg, cutoff);
    optw_config_set_format(cfg.cfg, format.c_str());
    if (jobs > 1) optw_config_set_jobs(cfg.cfg, jobs);
    if (!witness_dir.empty()) optw_config_set_witness_dir(cfg.cfg, witness_dir.c_str());

    auto open_theory = [&](TheoryGuard& tg) {
        optw_status st = file_exists(theory_arg)
                             ? optw_theory_open(theory_arg.c_str(), &tg.t)
                             : optw_theory_builtin(theory_arg.c_str(), &tg.t);
        return st;
    };

    ReportGuard rep;
    if (analyze->parsed() || verify->parsed() || dist->parsed()) {
        TheoryGuard tg;
        if (open_theory(tg) != OPTW_OK) return fail("theory");
        optw_status st;
        if (analyze->parsed())
            st = optw_run_analyze(tg.t, cfg.cfg, &rep.rep);
        else if (verify->parsed())
            st = optw_run_verify(tg.t, cfg.cfg, &rep.rep);
        else
            st = optw_run_distance(tg.t, states_arg.c_str(), cfg.cfg, &rep.rep);
        if (st != OPTW_OK) return fail(app.get_subcommands().front()->get_name().c_str());
        return emit(rep.rep);
    }
    if (composite->parsed()) {
        if (optw_run_composite(scenario_arg.c_str(), cfg.cfg, &rep.rep) != OPTW_OK)
            return fail("composite");
        return emit(rep.rep);
    }
    if (optw_run_teleport(scenario_arg.c_str(), cfg.cfg, &rep.rep) != OPTW_OK)
        return fail("teleport");
    return emit(rep.rep);
}
