#ifndef FRACKPP_EXPERIMENT_HPP
#define FRACKPP_EXPERIMENT_HPP

#include <string>

#include "frackpp/config.hpp"
#include "frackpp/grid.hpp"
#include "frackpp/params.hpp"
#include "frackpp/stepper.hpp"

namespace frackpp {

/// Named experiment scenarios, each mapping onto at least one acceptance
/// check of the suite.
enum class Scenario {
    kernel_table,
    barenblatt,
    lower_bound,
    kpp_rate,
    certificate,
    selfsim,
    reaction_only,
};

/// Accepts the hyphenated CLI names (kernel-table, kpp-rate, ...).
Scenario scenario_from_name(const std::string& name);
std::string scenario_name(Scenario sc);

struct ExperimentConfig {
    Scenario scenario = Scenario::kernel_table;
    ModelParams params;
    Grid grid;            // populated only for scenarios that evolve a field
    StepperConfig stepper;
    std::string outputs = "out";
    long seed = 0;
    /// Full key-value view; scenario handlers consume their own keys from it
    /// and every consulted key lands in the resolved-config metadata.
    Config raw;
};

/// Builds the typed config with scenario-specific defaults. Validation
/// failures name the offending key.
ExperimentConfig experiment_from_config(Scenario sc, Config c);

struct ExitReport {
    bool pass = false;
    std::string summary_json;  // also written to <outputs>/summary.json
};

/// Runs one scenario: writes its CSV artifacts and summary.json into
/// cfg.outputs (metadata headers carry the resolved config; outputs are
/// byte-deterministic for a fixed config and seed) and reports pass/fail
/// against the scenario's declared tolerances. Unknown config keys raise
/// std::invalid_argument naming the key.
ExitReport run_experiment(const ExperimentConfig& cfg);

/// Convenience: experiment_from_config + run_experiment.
ExitReport run_scenario(const std::string& name, Config c);

/// Pure-diffusion trace run (CLI `fpme-run`): per-step trace CSV
/// (t, mass, max, min, thinned to <= 2000 rows) plus the final state.
ExitReport run_fpme_trace(Config c);

/// Reaction-diffusion trace run (CLI `kpp-run`): snapshot-time trace CSV
/// (t, mass, max, min, R_<level>...). No rate targets; fit separately.
ExitReport run_kpp_trace(Config c);

/// Rate fit over a trace CSV produced by kpp-run (CLI `fit-rate`). The grid
/// geometry for the default fit window comes from the CSV metadata header.
ExitReport run_fit_rate(Config c, const std::string& csv_path);

/// Shared initial-data builder (keys init.kind, init.eps, init.width,
/// init.exponent, init.file, init.perturb): gaussian eps e^{-r^2/width},
/// power eps (1+r^2)^{-exponent/2}, indicator eps 1_{r<=width}, or a
/// two-column (x,u) CSV interpolated onto the grid (1D only). init.perturb
/// > 0 applies seeded multiplicative noise u (1 + perturb xi), xi uniform
/// in [-1,1], identical across platforms for a fixed seed.
Field build_initial_data(const Config& c, const Grid& g, const ModelParams& p,
                         long seed);

}  // namespace frackpp

#endif
