// pbvi: solve POMDPs by value iteration with point-based acceleration.
//
//   pbvi solve tiger.pomdp --method vi1 --epsilon 0.01
//   pbvi compare tiger.pomdp 4x4.pomdp --report-out report.json
//   pbvi eval --model tiger.pomdp --policy tiger-vi1.policy --trials 10000
//
// Exit codes: 0 success, 1 internal or iteration-guard error, 2 input error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pbvi/pbvi.hpp"
#include "pbvi/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

/// Bad input that should map to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveFlags {
    std::string method = "vi1";
    double epsilon = 0.01;
    double delta1 = 0.1;
    double discount = -1.0;
    std::string variant = "lp";
    std::string backup = "standard";
    bool lp_backup_nonpositive = false;
    bool lp_backup_strict = false;
    double tolerance = pbvi::kDefaultTolerance;
    std::uint64_t seed = 0;
    std::size_t max_updates = 10'000;
    std::size_t max_pb_updates = 100'000;
};

void add_solver_flags(CLI::App* cmd, SolveFlags& f) {
    cmd->add_option("--epsilon", f.epsilon, "Target optimality gap")->capture_default_str();
    cmd->add_option("--delta1", f.delta1, "Point-based stop fraction in (0,1)")->capture_default_str();
    cmd->add_option("--discount", f.discount, "Override the model's discount factor");
    cmd->add_option("--variant", f.variant, "Point-based update flavor")
        ->check(CLI::IsMember({"lp", "nolp"}))
        ->capture_default_str();
    cmd->add_option("--backup", f.backup, "Backup operator in point-based updates")
        ->check(CLI::IsMember({"standard", "mpi"}))
        ->capture_default_str();
    cmd->add_flag("--lp-backup-nonpositive", f.lp_backup_nonpositive,
                  "Back up at LP points whatever their margin (default)");
    cmd->add_flag("--lp-backup-strict", f.lp_backup_strict, "Back up only at LP points with a positive margin");
    cmd->add_option("--tolerance", f.tolerance, "Round-off tolerance")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
    cmd->add_option("--max-updates", f.max_updates, "Standard update guard")->capture_default_str();
    cmd->add_option("--max-pb-updates", f.max_pb_updates, "Point-based update guard")->capture_default_str();
}

pbvi::SolverConfig make_config(const SolveFlags& f) {
    if (f.lp_backup_nonpositive && f.lp_backup_strict) {
        throw InputError("--lp-backup-nonpositive and --lp-backup-strict are exclusive");
    }
    pbvi::SolverConfig c;
    c.epsilon = f.epsilon;
    c.delta1 = f.delta1;
    if (f.discount >= 0.0) {
        if (f.discount >= 1.0) {
            throw InputError("--discount must lie in [0, 1)");
        }
        c.discount_override = f.discount;
    }
    c.tolerance = f.tolerance;
    c.variant = f.variant == "nolp" ? pbvi::PointBasedVariant::nolp : pbvi::PointBasedVariant::lp;
    c.backup_mode = f.backup == "mpi" ? pbvi::BackupMode::mpi : pbvi::BackupMode::standard;
    c.lp_backup_nonpositive = !f.lp_backup_strict;
    c.seed = f.seed;
    c.max_standard_updates = f.max_updates;
    c.max_point_based_updates = f.max_pb_updates;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return c;
}

pbvi::PomdpModel load_model(const std::string& path, double tolerance) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read " + path);
    }
    try {
        return pbvi::parse_pomdp(in, tolerance);
    } catch (const pbvi::ParseError& e) {
        throw InputError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                         e.what());
    } catch (const pbvi::ModelError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path);
    }
    out << contents;
}

pbvi::RunReport run(const pbvi::PomdpModel& model, const std::string& problem, const std::string& method,
                    const pbvi::SolverConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    auto [policy, stats] = method == "vi" ? pbvi::vi(model, config) : pbvi::vi1(model, config);
    pbvi::RunReport report;
    report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.problem = problem;
    report.method = method;
    report.config = config;
    report.discount = policy.discount;
    report.stats = std::move(stats);
    report.model_fingerprint = pbvi::model_fingerprint(model);
    report.policy_path = pbvi::policy_to_string(policy);  // replaced by the path once written
    return report;
}

std::string summary_line(const pbvi::RunReport& r) {
    std::ostringstream out;
    out << r.problem << " method=" << r.method << " standard_updates=" << r.stats.standard_update_count
        << " point_based_updates=" << r.stats.point_based_update_count << " residual=" << r.stats.final_residual
        << " seconds=" << r.wall_clock_seconds;
    return out.str();
}

int cmd_solve(const std::string& model_path, const SolveFlags& flags, std::string policy_out, std::string stats_out) {
    const auto config = make_config(flags);
    const auto model = load_model(model_path, config.tolerance);
    const std::string problem = fs::path(model_path).stem().string();
    auto report = run(model, problem, flags.method, config);
    if (policy_out.empty()) policy_out = problem + "-" + flags.method + ".policy";
    if (stats_out.empty()) stats_out = problem + "-" + flags.method + ".stats.json";
    write_file(policy_out, report.policy_path);
    report.policy_path = policy_out;
    write_file(stats_out, pbvi::to_json(report).dump(2) + "\n");
    std::cout << summary_line(report) << '\n';
    return 0;
}

int cmd_compare(const std::vector<std::string>& model_paths, const SolveFlags& flags, const std::string& report_out,
                const std::string& policy_dir) {
    const auto config = make_config(flags);
    std::vector<pbvi::Comparison> rows;
    for (const auto& path : model_paths) {
        if (!fs::exists(path)) {
            std::cerr << "warning: " << path << " not found, skipping\n";
            continue;
        }
        const auto model = load_model(path, config.tolerance);
        const std::string problem = fs::path(path).stem().string();
        pbvi::Comparison c;
        c.vi = run(model, problem, "vi", config);
        c.vi1 = run(model, problem, "vi1", config);
        for (auto* r : {&c.vi, &c.vi1}) {
            if (policy_dir.empty()) {
                r->policy_path.clear();
            } else {
                const std::string file = (fs::path(policy_dir) / (problem + "-" + r->method + ".policy")).string();
                write_file(file, r->policy_path);
                r->policy_path = file;
            }
        }
        try {
            std::tie(c.quality_ratio, c.complexity_ratio) = pbvi::compute_ratios(c.vi.stats, c.vi1.stats);
        } catch (const std::domain_error&) {
            c.quality_ratio = c.vi1.stats.standard_update_count + c.vi1.stats.point_based_update_count == 0
                                  ? 0.0
                                  : static_cast<double>(c.vi.stats.standard_update_count) /
                                        static_cast<double>(c.vi1.stats.standard_update_count +
                                                            c.vi1.stats.point_based_update_count);
            c.complexity_ratio = 0.0;
        }
        c.vi1.stats.quality_ratio = c.quality_ratio;
        c.vi1.stats.complexity_ratio = c.complexity_ratio;
        std::cout << summary_line(c.vi) << '\n' << summary_line(c.vi1) << '\n';
        rows.push_back(std::move(c));
    }
    if (rows.empty()) {
        throw InputError("no problem files found");
    }
    std::cout << '\n' << pbvi::comparison_table(rows);
    if (!report_out.empty()) {
        nlohmann::json doc = {{"format_version", pbvi::kReportFormatVersion}, {"problems", nlohmann::json::array()}};
        for (const auto& c : rows) {
            doc["problems"].push_back(pbvi::to_json(c));
        }
        write_file(report_out, doc.dump(2) + "\n");
    }
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& policy_path, const std::vector<double>& belief,
             std::size_t trials, std::size_t horizon, double truncation, std::uint64_t seed) {
    const auto model = load_model(model_path, pbvi::kDefaultTolerance);
    std::ifstream in(policy_path);
    if (!in) {
        throw InputError("cannot read " + policy_path);
    }
    pbvi::Policy policy = [&] {
        try {
            return pbvi::read_policy(in);
        } catch (const pbvi::ParseError& e) {
            throw InputError(policy_path + ": " + e.what());
        }
    }();
    if (policy.vectors[0].values.size() != model.num_states()) {
        throw InputError("policy has " + std::to_string(policy.vectors[0].values.size()) + " states, model has " +
                         std::to_string(model.num_states()));
    }
    for (const auto& v : policy.vectors) {
        if (v.action >= model.num_actions()) {
            throw InputError("policy refers to action " + std::to_string(v.action) + " which the model lacks");
        }
    }
    pbvi::Belief b0 = model.start() ? pbvi::Belief(*model.start()) : pbvi::Belief::uniform(model.num_states());
    if (!belief.empty()) {
        if (belief.size() != model.num_states()) {
            throw InputError("--belief needs " + std::to_string(model.num_states()) + " entries");
        }
        double sum = 0.0;
        for (double p : belief) {
            if (p < 0.0) throw InputError("--belief has a negative entry");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-6) throw InputError("--belief does not sum to 1");
        b0 = pbvi::Belief(belief);
    }
    const pbvi::PomdpModel eval_model = model.with_discount(policy.discount);
    if (horizon == 0) {
        horizon = pbvi::horizon_for(eval_model, truncation);
    }
    const auto sim = pbvi::simulate_policy(eval_model, policy, b0, horizon, trials, seed);
    std::cout << "estimate " << sim.mean << " std_error " << sim.std_error << " analytic "
              << pbvi::value_at(policy.vectors, b0) << " horizon " << horizon << " trials " << trials << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"POMDP value iteration with point-based DP updates"};
    app.require_subcommand(1);

    SolveFlags solve_flags;
    std::string model_path, policy_out, stats_out;
    auto* solve = app.add_subcommand("solve", "Solve one model and write its policy and stats");
    solve->add_option("model", model_path, "Cassandra .POMDP file")->required();
    solve->add_option("--method", solve_flags.method, "Algorithm")
        ->check(CLI::IsMember({"vi", "vi1"}))
        ->capture_default_str();
    solve->add_option("--policy-out", policy_out, "Policy file path");
    solve->add_option("--stats-out", stats_out, "Stats document path");
    add_solver_flags(solve, solve_flags);

    SolveFlags compare_flags;
    std::vector<std::string> compare_paths;
    std::string report_out, policy_dir;
    auto* compare = app.add_subcommand("compare", "Run VI and VI1 side by side and report both");
    compare->add_option("models", compare_paths, "Cassandra .POMDP files (missing ones are skipped)")->required();
    compare->add_option("--report-out", report_out, "JSON report path");
    compare->add_option("--policy-dir", policy_dir, "Directory for the policy files");
    add_solver_flags(compare, compare_flags);

    std::string eval_model, eval_policy;
    std::vector<double> eval_belief;
    std::size_t trials = 10'000, horizon = 0;
    double truncation = 1e-6;
    std::uint64_t eval_seed = 0;
    auto* eval = app.add_subcommand("eval", "Monte-Carlo evaluation of a policy file");
    eval->add_option("--model", eval_model, "Cassandra .POMDP file")->required();
    eval->add_option("--policy", eval_policy, "Policy file")->required();
    eval->add_option("--belief", eval_belief, "Initial belief (defaults to the model's start or uniform)");
    eval->add_option("--trials", trials, "Number of rollouts")->capture_default_str();
    eval->add_option("--horizon", horizon, "Rollout length (0 picks one from --truncation)")->capture_default_str();
    eval->add_option("--truncation", truncation, "Tail error allowed when picking the horizon")->capture_default_str();
    eval->add_option("--seed", eval_seed, "Random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*solve) return cmd_solve(model_path, solve_flags, policy_out, stats_out);
        if (*compare) return cmd_compare(compare_paths, compare_flags, report_out, policy_dir);
        return cmd_eval(eval_model, eval_policy, eval_belief, trials, horizon, truncation, eval_seed);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const pbvi::IterationLimitError& e) {
        std::cerr << "iteration guard: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
