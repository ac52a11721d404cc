#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ermdp/instances.hpp"
#include "ermdp/learner.hpp"

namespace ermdp {

/// Where the experiment environment comes from: a builtin RiverSwim chain, an
/// MDP JSON file, or an in-memory model (in-process use only; not part of
/// the config JSON schema). The environment's own beta field is overridden
/// by each entry of the experiment's beta list.
struct EnvironmentSpec {
    std::optional<RiverSwimConfig> riverswim;
    std::optional<std::string> mdp_path;
    std::optional<TabularMdp> inline_mdp;

    TabularMdp resolve() const;
};

struct ExperimentConfig {
    EnvironmentSpec environment;
    std::vector<double> betas;
    std::vector<long long> sample_sizes;  ///< total samples T, each divisible by S*A
    int replications = 1;
    std::uint64_t base_seed = 0;
    PlanningMode mode = PlanningMode::policy;
    double solver_tol = 1e-10;
};

/// One (beta, T, replication) trial.
struct ExperimentRecord {
    double beta = 0.0;
    long long T = 0;
    int replication = 0;
    std::uint64_t seed = 0;
    double value_error = 0.0;   ///< ||Q* - Q_k||
    double policy_error = 0.0;  ///< ||V* - V^{pi_k}||
};

struct AggregateRow {
    double beta = 0.0;
    long long T = 0;
    int runs = 0;
    double mean_policy_error = 0.0;
    double stderr_policy_error = 0.0;  ///< sample stdev / sqrt(runs); NaN when runs == 1
    double mean_value_error = 0.0;
    double stderr_value_error = 0.0;
};

struct ExperimentResult {
    std::vector<ExperimentRecord> records;    ///< ordered by (beta index, T, replication)
    std::vector<AggregateRow> aggregates;     ///< ordered by (beta index, T)
};

/// Fixed 64-bit mixing of (base_seed, beta index, T, replication): a chain of
/// splitmix64 finalizers absorbing one component per step. Trial seeds are
/// therefore independent of scheduling and worker count.
std::uint64_t derive_trial_seed(std::uint64_t base_seed, int beta_index, long long T,
                                int replication);

/// Runs every (beta, T, replication) trial: samples T/(S*A) draws per pair
/// through MB-RS-QVI on the environment with that beta, then measures both
/// errors against the exact solution of the true model (solved once per beta
/// at solver_tol). Output is a pure function of the config, whatever the
/// worker count. num_workers 0 picks ERM_MDP_THREADS from the environment
/// (0 or unset = hardware concurrency).
ExperimentResult run_experiment(const ExperimentConfig& cfg, int num_workers = 0);

/// Writes `<prefix>.records.csv` and `<prefix>.agg.csv` with floats rendered
/// to 9 significant digits. Single-run aggregates leave the stderr fields
/// empty.
void write_csv(const ExperimentResult& result, const std::string& path_prefix);

std::string records_csv(const ExperimentResult& result);
std::string aggregates_csv(const ExperimentResult& result);

ExperimentConfig experiment_config_from_json_string(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace ermdp
