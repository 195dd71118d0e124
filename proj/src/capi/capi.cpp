#include "optw/optw.h"

#include <algorithm>
#include <cstring>
#include <string>

#include "error.hpp"
#include "json_io.hpp"
#include "workbench.hpp"
#include "zoo.hpp"

using namespace optw;

struct optw_theory {
    TheoryBundle bundle;
};

struct optw_config {
    RunConfig cfg;
};

struct optw_report {
    Report rep;
    std::string format;
};

namespace {

thread_local std::string g_last_error;

optw_status status_of(const Error& e) {
    switch (e.code()) {
        case ErrorCode::invalid_argument: return OPTW_E_INVALID_ARGUMENT;
        case ErrorCode::parse_error: return OPTW_E_PARSE;
        case ErrorCode::io_error: return OPTW_E_IO;
        case ErrorCode::domain_error: return OPTW_E_DOMAIN;
        case ErrorCode::unresolved: return OPTW_E_UNRESOLVED;
    }
    return OPTW_E_INTERNAL;
}

template <typename Fn>
optw_status guarded(Fn&& fn) {
    try {
        fn();
        return OPTW_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return OPTW_E_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return OPTW_E_INTERNAL;
    }
}

optw_status require(bool cond, const char* msg) {
    if (cond) return OPTW_OK;
    g_last_error = msg;
    return OPTW_E_INVALID_ARGUMENT;
}

} // namespace

extern "C" {

const char* optw_version(void) { return "0.1.0"; }

const char* optw_last_error(void) { return g_last_error.c_str(); }

optw_config* optw_config_new(void) { return new optw_config{}; }

void optw_config_free(optw_config* cfg) { delete cfg; }

optw_status optw_config_set_seed(optw_config* cfg, uint64_t seed) {
    if (auto st = require(cfg, "null config")) return st;
    cfg->cfg.seed = seed;
    return OPTW_OK;
}

optw_status optw_config_set_tolerance(optw_config* cfg, double tol) {
    if (auto st = require(cfg && tol > 0.0, "tolerance must be positive")) return st;
    cfg->cfg.tol = tol;
    return OPTW_OK;
}

optw_status optw_config_set_cutoff(optw_config* cfg, int cutoff) {
    if (auto st = require(cfg && cutoff >= 1, "cutoff must be >= 1")) return st;
    cfg->cfg.cutoff = cutoff;
    cfg->cfg.idim_cutoff = std::max(cutoff, cfg->cfg.idim_cutoff);
    return OPTW_OK;
}

optw_status optw_config_set_format(optw_config* cfg, const char* format) {
    if (auto st = require(cfg && format, "null format")) return st;
    std::string f = format;
    if (auto st = require(f == "text" || f == "tsv" || f == "json",
                          "format must be text, tsv, or json"))
        return st;
    cfg->cfg.format = f;
    return OPTW_OK;
}

optw_status optw_config_set_jobs(optw_config* cfg, int jobs) {
    if (auto st = require(cfg && jobs >= 1, "jobs must be >= 1")) return st;
    cfg->cfg.jobs = jobs;
    return OPTW_OK;
}

optw_status optw_config_set_witness_dir(optw_config* cfg, const char* dir) {
    if (auto st = require(cfg && dir, "null witness dir")) return st;
    cfg->cfg.witness_dir = dir;
    return OPTW_OK;
}

optw_status optw_theory_open(const char* path, optw_theory** out) {
    if (auto st = require(path && out, "null argument")) return st;
    return guarded([&] { *out = new optw_theory{load_theory_file(path)}; });
}

optw_status optw_theory_builtin(const char* spec, optw_theory** out) {
    if (auto st = require(spec && out, "null argument")) return st;
    return guarded([&] {
        TheoryBundle b;
        b.theory = builtin_theory(spec);
        *out = new optw_theory{std::move(b)};
    });
}

void optw_theory_free(optw_theory* t) { delete t; }

const char* optw_theory_name(const optw_theory* t) {
    return t ? t->bundle.theory->name.c_str() : "";
}

int optw_theory_embed_dim(const optw_theory* t) {
    return t ? t->bundle.theory->dim : 0;
}

int optw_theory_vertex_count(const optw_theory* t) {
    return t ? t->bundle.theory->vertex_count() : 0;
}

optw_status optw_theory_save(const optw_theory* t, const char* path) {
    if (auto st = require(t && path, "null argument")) return st;
    return guarded([&] { save_theory_file(*t->bundle.theory, path); });
}

namespace {

const RunConfig& config_or_default(const optw_config* cfg) {
    static const RunConfig def{};
    return cfg ? cfg->cfg : def;
}

} // namespace

optw_status optw_run_analyze(const optw_theory* t, const optw_config* cfg,
                             optw_report** out) {
    if (auto st = require(t && out, "null argument")) return st;
    return guarded([&] {
        const RunConfig& rc = config_or_default(cfg);
        *out = new optw_report{cmd_analyze(t->bundle, rc), rc.format};
    });
}

optw_status optw_run_verify(const optw_theory* t, const optw_config* cfg,
                            optw_report** out) {
    if (auto st = require(t && out, "null argument")) return st;
    return guarded([&] {
        const RunConfig& rc = config_or_default(cfg);
        *out = new optw_report{cmd_verify(t->bundle, rc), rc.format};
    });
}

optw_status optw_run_composite(const char* scenario_path, const optw_config* cfg,
                               optw_report** out) {
    if (auto st = require(scenario_path && out, "null argument")) return st;
    return guarded([&] {
        const RunConfig& rc = config_or_default(cfg);
        CompositeScenario sc = load_composite_scenario(scenario_path);
        *out = new optw_report{cmd_composite(sc, rc), rc.format};
    });
}

optw_status optw_run_teleport(const char* scenario_path, const optw_config* cfg,
                              optw_report** out) {
    if (auto st = require(scenario_path && out, "null argument")) return st;
    return guarded([&] {
        const RunConfig& rc = config_or_default(cfg);
        TeleportScenario sc = load_teleport_scenario(scenario_path);
        *out = new optw_report{cmd_teleport(sc, rc), rc.format};
    });
}

optw_status optw_run_distance(const optw_theory* t, const char* states_path,
                              const optw_config* cfg, optw_report** out) {
    if (auto st = require(t && states_path && out, "null argument")) return st;
    return guarded([&] {
        const RunConfig& rc = config_or_default(cfg);
        std::vector<Vec> states = load_states_file(states_path);
        *out = new optw_report{cmd_distance(t->bundle, states, rc), rc.format};
    });
}

int optw_report_record_count(const optw_report* rep) {
    return rep ? static_cast<int>(rep->rep.records.size()) : 0;
}

int optw_report_exit_code(const optw_report* rep) {
    return rep ? rep->rep.exit_code() : OPTW_E_INVALID_ARGUMENT;
}

optw_status optw_report_render(const optw_report* rep, const char* format, char** out) {
    if (auto st = require(rep && out, "null argument")) return st;
    return guarded([&] {
        std::string text = rep->rep.render(format ? format : rep->format.c_str());
        char* buf = new char[text.size() + 1];
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out = buf;
    });
}

void optw_report_free(optw_report* rep) { delete rep; }

void optw_string_free(char* s) { delete[] s; }

} // extern "C"
