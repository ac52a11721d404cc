#include "ermdp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ermdp {

TabularMdp EnvironmentSpec::resolve() const {
    const int sources = (riverswim ? 1 : 0) + (mdp_path ? 1 : 0) + (inline_mdp ? 1 : 0);
    if (sources != 1) throw ConfigError("exactly one environment source must be set");
    if (riverswim) return build_riverswim(*riverswim);
    if (mdp_path) return TabularMdp::load(*mdp_path);
    return *inline_mdp;
}

std::uint64_t derive_trial_seed(std::uint64_t base_seed, int beta_index, long long T,
                                int replication) {
    std::uint64_t h = mix64(base_seed);
    h = mix64(h ^ static_cast<std::uint64_t>(beta_index));
    h = mix64(h ^ static_cast<std::uint64_t>(T));
    h = mix64(h ^ static_cast<std::uint64_t>(replication));
    return h;
}

namespace {

int resolve_workers(int requested, std::size_t total_trials) {
    int workers = requested;
    if (workers <= 0) {
        if (const char* env = std::getenv("ERM_MDP_THREADS")) workers = std::atoi(env);
        if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 1;
    }
    return static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(total_trials, 1)));
}

void validate_config(const ExperimentConfig& cfg, long long pairs) {
    if (cfg.betas.empty()) throw ConfigError("betas must be nonempty");
    if (cfg.sample_sizes.empty()) throw ConfigError("sample_sizes must be nonempty");
    if (cfg.replications < 1) throw ConfigError("replications must be at least 1");
    if (!(cfg.solver_tol > 0.0)) throw ConfigError("solver_tol must be positive");
    for (long long T : cfg.sample_sizes)
        if (T < pairs || T % pairs != 0)
            throw ConfigError("sample size " + std::to_string(T) +
                              " is not a positive multiple of S*A = " + std::to_string(pairs));
}

std::string format9(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", x);
    return buffer;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, int num_workers) {
    const TabularMdp base = cfg.environment.resolve();
    const long long pairs =
        static_cast<long long>(base.num_states()) * base.num_actions();
    validate_config(cfg, pairs);

    // One true model and exact solution per beta, shared read-only by all
    // trials.
    std::vector<TabularMdp> models;
    std::vector<QFunction> q_star;
    std::vector<VFunction> v_star;
    models.reserve(cfg.betas.size());
    for (double beta : cfg.betas) {
        models.push_back(base.with_beta(beta));
        q_star.push_back(solve_exact(models.back(), cfg.solver_tol).q);
        v_star.push_back(v_max_from_q(q_star.back()));
    }

    const std::size_t n_sizes = cfg.sample_sizes.size();
    const std::size_t n_reps = static_cast<std::size_t>(cfg.replications);
    const std::size_t total = cfg.betas.size() * n_sizes * n_reps;
    std::vector<ExperimentRecord> records(total);

    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::mutex failure_mutex;
    std::string failure_message;
    const double error_cap = base.value_bound() + cfg.solver_tol;

    auto run_trial = [&](std::size_t index) {
        const std::size_t r = index % n_reps;
        const std::size_t ti = (index / n_reps) % n_sizes;
        const std::size_t bi = index / (n_reps * n_sizes);
        const long long T = cfg.sample_sizes[ti];
        const std::uint64_t seed =
            derive_trial_seed(cfg.base_seed, static_cast<int>(bi), T, static_cast<int>(r));
        GenerativeModel generator(models[bi], seed);
        LearnResult learned = mb_rs_qvi(generator, T / pairs, cfg.solver_tol, cfg.mode);
        const double value_error = sup_norm_distance(learned.plan.q, q_star[bi]);
        const QFunction q_pi = evaluate_policy(models[bi], learned.plan.policy, cfg.solver_tol);
        const VFunction v_pi = v_from_q_under_policy(q_pi, learned.plan.policy);
        const double policy_error = sup_norm_distance(v_star[bi], v_pi);
        if (!(value_error >= 0.0 && value_error <= error_cap) ||
            !(policy_error >= 0.0 && policy_error <= error_cap))
            throw RuntimeError("trial error outside [0, 1/(1-gamma)]");
        records[index] = ExperimentRecord{cfg.betas[bi], T,         static_cast<int>(r),
                                          seed,          value_error, policy_error};
    };

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t index = cursor.fetch_add(1, std::memory_order_relaxed);
            if (index >= total) return;
            try {
                run_trial(index);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failed.exchange(true)) {
                    const std::size_t r = index % n_reps;
                    const std::size_t ti = (index / n_reps) % n_sizes;
                    const std::size_t bi = index / (n_reps * n_sizes);
                    failure_message = "trial (beta=" + format9(cfg.betas[bi]) +
                                      ", T=" + std::to_string(cfg.sample_sizes[ti]) +
                                      ", replication=" + std::to_string(r) + ", seed=" +
                                      std::to_string(derive_trial_seed(
                                          cfg.base_seed, static_cast<int>(bi),
                                          cfg.sample_sizes[ti], static_cast<int>(r))) +
                                      ") failed: " + e.what();
                }
                return;
            }
        }
    };

    const int workers = resolve_workers(num_workers, total);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw RuntimeError(failure_message);

    ExperimentResult result;
    result.records = std::move(records);
    result.aggregates.reserve(cfg.betas.size() * n_sizes);
    for (std::size_t bi = 0; bi < cfg.betas.size(); ++bi)
        for (std::size_t ti = 0; ti < n_sizes; ++ti) {
            const std::size_t start = (bi * n_sizes + ti) * n_reps;
            AggregateRow row;
            row.beta = cfg.betas[bi];
            row.T = cfg.sample_sizes[ti];
            row.runs = static_cast<int>(n_reps);
            double sum_p = 0.0, sum_v = 0.0;
            for (std::size_t r = 0; r < n_reps; ++r) {
                sum_p += result.records[start + r].policy_error;
                sum_v += result.records[start + r].value_error;
            }
            row.mean_policy_error = sum_p / static_cast<double>(n_reps);
            row.mean_value_error = sum_v / static_cast<double>(n_reps);
            if (n_reps > 1) {
                double ss_p = 0.0, ss_v = 0.0;
                for (std::size_t r = 0; r < n_reps; ++r) {
                    const double dp = result.records[start + r].policy_error - row.mean_policy_error;
                    const double dv = result.records[start + r].value_error - row.mean_value_error;
                    ss_p += dp * dp;
                    ss_v += dv * dv;
                }
                const double n = static_cast<double>(n_reps);
                row.stderr_policy_error = std::sqrt(ss_p / (n - 1.0)) / std::sqrt(n);
                row.stderr_value_error = std::sqrt(ss_v / (n - 1.0)) / std::sqrt(n);
            } else {
                row.stderr_policy_error = std::numeric_limits<double>::quiet_NaN();
                row.stderr_value_error = std::numeric_limits<double>::quiet_NaN();
            }
            result.aggregates.push_back(row);
        }
    return result;
}

std::string records_csv(const ExperimentResult& result) {
    std::string out = "beta,T,replication,seed,value_error,policy_error\n";
    for (const ExperimentRecord& r : result.records) {
        out += format9(r.beta);
        out += ',';
        out += std::to_string(r.T);
        out += ',';
        out += std::to_string(r.replication);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += format9(r.value_error);
        out += ',';
        out += format9(r.policy_error);
        out += '\n';
    }
    return out;
}

std::string aggregates_csv(const ExperimentResult& result) {
    std::string out =
        "beta,T,runs,mean_policy_error,stderr_policy_error,mean_value_error,stderr_value_error\n";
    for (const AggregateRow& row : result.aggregates) {
        out += format9(row.beta);
        out += ',';
        out += std::to_string(row.T);
        out += ',';
        out += std::to_string(row.runs);
        out += ',';
        out += format9(row.mean_policy_error);
        out += ',';
        if (row.runs > 1) out += format9(row.stderr_policy_error);
        out += ',';
        out += format9(row.mean_value_error);
        out += ',';
        if (row.runs > 1) out += format9(row.stderr_value_error);
        out += '\n';
    }
    return out;
}

void write_csv(const ExperimentResult& result, const std::string& path_prefix) {
    if (result.records.empty()) throw ConfigError("no records to write");
    const std::string records_path = path_prefix + ".records.csv";
    const std::string agg_path = path_prefix + ".agg.csv";
    std::ofstream records_out(records_path);
    if (!records_out) throw IoError("cannot open " + records_path + " for writing");
    records_out << records_csv(result);
    if (!records_out) throw IoError("failed writing " + records_path);
    std::ofstream agg_out(agg_path);
    if (!agg_out) throw IoError("cannot open " + agg_path + " for writing");
    agg_out << aggregates_csv(result);
    if (!agg_out) throw IoError("failed writing " + agg_path);
}

namespace {

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    const auto& env = j.at("environment");
    if (env.contains("builtin")) {
        const std::string name = env.at("builtin").get<std::string>();
        if (name != "riverswim") throw ConfigError("unknown builtin environment: " + name);
        RiverSwimConfig rs;
        if (env.contains("num_stream_states")) rs.num_stream_states = env["num_stream_states"].get<int>();
        if (env.contains("gamma")) rs.gamma = env["gamma"].get<double>();
        if (env.contains("left_reward")) rs.left_reward = env["left_reward"].get<double>();
        if (env.contains("right_reward")) rs.right_reward = env["right_reward"].get<double>();
        if (env.contains("p_right_success")) rs.p_right_success = env["p_right_success"].get<double>();
        if (env.contains("p_right_stay")) rs.p_right_stay = env["p_right_stay"].get<double>();
        if (env.contains("p_right_back")) rs.p_right_back = env["p_right_back"].get<double>();
        cfg.environment.riverswim = rs;
    } else if (env.contains("path")) {
        cfg.environment.mdp_path = env.at("path").get<std::string>();
    } else {
        throw ConfigError("environment must name a builtin or a path");
    }
    cfg.betas = j.at("betas").get<std::vector<double>>();
    cfg.sample_sizes = j.at("sample_sizes").get<std::vector<long long>>();
    cfg.replications = j.at("replications").get<int>();
    cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "value")
        cfg.mode = PlanningMode::value;
    else if (mode == "policy")
        cfg.mode = PlanningMode::policy;
    else
        throw ConfigError("mode must be \"value\" or \"policy\"");
    if (j.contains("solver_tol")) cfg.solver_tol = j["solver_tol"].get<double>();
    return cfg;
}

}  // namespace

ExperimentConfig experiment_config_from_json_string(const std::string& text) {
    try {
        return config_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed experiment config: ") + e.what());
    }
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return experiment_config_from_json_string(buffer.str());
}

}  // namespace ermdp
