// adpqis: experiment harness for the Q-learning toolkit.
//
// Subcommands: train, oracle, evaluate, sweep, example1, report.
// Exit codes: 0 success, 1 runtime failure, 2 configuration error.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adpqis/example1.hpp"
#include "adpqis/gep.hpp"
#include "adpqis/oracle.hpp"
#include "adpqis/qlearn.hpp"
#include "adpqis/stats.hpp"
#include "adpqis/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace adpqis;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const json& config)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::string& hash, const std::string& extra = "")
        : path_(path)
    {
        out_.open(path);
        if (!out_)
            throw std::runtime_error("cannot open output file: " + path.string());
        out_ << "# adpqis " << kVersion << " config=" << hash;
        if (!extra.empty())
            out_ << " " << extra;
        out_ << "\n";
    }

    void row(const std::vector<std::string>& fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i)
                out_ << ",";
            out_ << fields[i];
        }
        out_ << "\n";
    }

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
    std::ofstream out_;
};

fs::path resolve_out_dir(const std::string& flag_value)
{
    std::string dir = flag_value;
    if (dir.empty()) {
        if (const char* env = std::getenv("ADPQIS_OUT_DIR"))
            dir = env;
    }
    if (dir.empty())
        dir = ".";
    fs::create_directories(dir);
    return dir;
}

json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// train configuration: defaults < config file < command-line flags

struct TrainSettings {
    RunConfig run;
    std::string dataset = "data/gep_default.json";
};

struct TrainFlags {
    std::string config_path, dataset, sampler, out_dir;
    double epsilon = 0.5, epsilon_initial = 0.7, epsilon_final = 0.2;
    int iterations = 900, samples = 10, reeval_every = 20, refine_steps = 20;
    double lambda = 0.1, gamma = 1.0, resolution = 0.05;
    std::uint64_t seed = 1;
};

void add_train_flags(CLI::App* cmd, TrainFlags& f)
{
    cmd->add_option("--config", f.config_path, "JSON config file (flags override file values)");
    cmd->add_option("--dataset", f.dataset, "dataset JSON path");
    cmd->add_option("--sampler", f.sampler, "qis | qis-re | eps-greedy | eps-decay");
    cmd->add_option("--epsilon", f.epsilon, "exploration probability (eps-greedy)");
    cmd->add_option("--epsilon-initial", f.epsilon_initial, "initial epsilon (eps-decay)");
    cmd->add_option("--epsilon-final", f.epsilon_final, "final epsilon (eps-decay)");
    cmd->add_option("--iterations", f.iterations, "total iterations K");
    cmd->add_option("--samples", f.samples, "samples per stage per iteration M");
    cmd->add_option("--reeval-every", f.reeval_every, "bound reevaluation period (qis-re)");
    cmd->add_option("--lambda", f.lambda, "TD learning rate");
    cmd->add_option("--gamma", f.gamma, "per-stage discount factor");
    cmd->add_option("--seed", f.seed, "RNG seed");
    cmd->add_option("--resolution", f.resolution, "simplex lattice step for the exploit search");
    cmd->add_option("--refine-steps", f.refine_steps, "local refinement rounds after the lattice scan");
    cmd->add_option("--out-dir", f.out_dir, "output directory (default $ADPQIS_OUT_DIR or .)");
}

RunConfig run_config_from_json(const json& j, RunConfig base)
{
    const auto num = [&](const char* key, double& slot) {
        if (j.contains(key)) {
            if (!j[key].is_number())
                throw ConfigError(std::string("config key '") + key + "' must be a number");
            slot = j[key].get<double>();
        }
    };
    const auto integer = [&](const char* key, int& slot) {
        if (j.contains(key)) {
            if (!j[key].is_number_integer())
                throw ConfigError(std::string("config key '") + key + "' must be an integer");
            slot = j[key].get<int>();
        }
    };
    if (j.contains("sampler")) {
        if (!j["sampler"].is_string())
            throw ConfigError("config key 'sampler' must be a string");
        try {
            base.sampler = sampler_from_name(j["sampler"].get<std::string>());
        } catch (const ContractViolation& e) {
            throw ConfigError(e.what());
        }
    }
    integer("iterations", base.iterations);
    integer("samples", base.samples);
    integer("reeval_every", base.reeval_every);
    num("lambda", base.lambda);
    num("gamma", base.gamma);
    num("epsilon", base.epsilon);
    num("epsilon_initial", base.epsilon_initial);
    num("epsilon_final", base.epsilon_final);
    num("resolution", base.argmin.resolution);
    integer("refine_steps", base.argmin.refine_steps);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer())
            throw ConfigError("config key 'seed' must be an integer");
        base.seed = j["seed"].get<std::uint64_t>();
    }
    return base;
}

TrainSettings resolve_train_settings(const CLI::App* cmd, const TrainFlags& f)
{
    TrainSettings s;
    if (!f.config_path.empty()) {
        const json j = load_json_file(f.config_path);
        s.run = run_config_from_json(j, s.run);
        if (j.contains("dataset"))
            s.dataset = j["dataset"].get<std::string>();
    }
    const auto set = [&](const char* flag) { return cmd->count(flag) > 0; };
    if (set("--dataset")) s.dataset = f.dataset;
    if (set("--sampler")) {
        try {
            s.run.sampler = sampler_from_name(f.sampler);
        } catch (const ContractViolation& e) {
            throw ConfigError(e.what());
        }
    }
    if (set("--epsilon")) s.run.epsilon = f.epsilon;
    if (set("--epsilon-initial")) s.run.epsilon_initial = f.epsilon_initial;
    if (set("--epsilon-final")) s.run.epsilon_final = f.epsilon_final;
    if (set("--iterations")) s.run.iterations = f.iterations;
    if (set("--samples")) s.run.samples = f.samples;
    if (set("--reeval-every")) s.run.reeval_every = f.reeval_every;
    if (set("--lambda")) s.run.lambda = f.lambda;
    if (set("--gamma")) s.run.gamma = f.gamma;
    if (set("--seed")) s.run.seed = f.seed;
    if (set("--resolution")) s.run.argmin.resolution = f.resolution;
    if (set("--refine-steps")) s.run.argmin.refine_steps = f.refine_steps;
    try {
        s.run.validate();
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
    return s;
}

json run_config_to_json(const RunConfig& c, const std::string& dataset)
{
    json j;
    j["dataset"] = dataset;
    j["sampler"] = sampler_name(c.sampler);
    j["iterations"] = c.iterations;
    j["samples"] = c.samples;
    j["reeval_every"] = c.reeval_every;
    j["lambda"] = c.lambda;
    j["gamma"] = c.gamma;
    j["epsilon"] = c.epsilon;
    j["epsilon_initial"] = c.epsilon_initial;
    j["epsilon_final"] = c.epsilon_final;
    j["seed"] = c.seed;
    j["resolution"] = c.argmin.resolution;
    j["refine_steps"] = c.argmin.refine_steps;
    return j;
}

gep::GepInstance load_dataset_or_config_error(const std::string& path)
{
    if (!fs::exists(path))
        throw ConfigError("dataset file not found: " + path);
    try {
        return gep::load_instance(path);
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
}

void write_train_artifacts(const fs::path& dir, const std::string& hash, const RunConfig& config,
                           const RunResult& result)
{
    const std::vector<double> norm = normalized_stage1_trace(result.report);
    CsvWriter report(dir / "report.csv", hash);
    report.row({"k", "q1_norm", "qmin1", "qmax1", "cum_proposals"});
    std::int64_t cum = 0;
    for (std::size_t i = 0; i < norm.size(); ++i) {
        cum += result.report.proposals_trace[i];
        report.row({std::to_string(i + 1), fmt(norm[i]), fmt(result.report.qmin1_trace[i]),
                    fmt(result.report.qmax1_trace[i]), std::to_string(cum)});
    }

    CsvWriter coeffs(dir / "coeffs.csv", hash);
    {
        std::vector<std::string> header{"stage"};
        for (std::size_t i = 0; i < result.report.final_theta.front().size(); ++i)
            header.push_back("c" + std::to_string(i));
        coeffs.row(header);
        for (std::size_t t = 0; t < result.report.final_theta.size(); ++t) {
            std::vector<std::string> row{std::to_string(t + 1)};
            for (double c : result.report.final_theta[t])
                row.push_back(fmt(c));
            coeffs.row(row);
        }
    }

    CsvWriter archive(dir / "archive.csv", hash);
    archive.row({"stage", "count", "reward_min", "reward_mean", "reward_max"});
    for (int t = 1; t <= result.archive.horizon(); ++t) {
        const auto& records = result.archive.records(t);
        double lo = 0, hi = 0, mean = 0;
        if (!records.empty()) {
            lo = hi = records.front().reward;
            for (const SampleRecord& r : records) {
                lo = std::min(lo, r.reward);
                hi = std::max(hi, r.reward);
                mean += r.reward;
            }
            mean /= static_cast<double>(records.size());
        }
        archive.row({std::to_string(t), std::to_string(records.size()), fmt(lo), fmt(mean), fmt(hi)});
    }

    // Wall-clock times live in their own file so every other CSV stays
    // byte-stable across reruns.
    CsvWriter timing(dir / "timing.csv", hash);
    timing.row({"sampling_seconds", "evaluation_seconds", "other_seconds", "total_seconds"});
    timing.row({fmt(result.report.sampling_seconds), fmt(result.report.evaluation_seconds),
                fmt(result.report.other_seconds), fmt(result.report.total_seconds)});
    (void)config;
}

int cmd_train(const CLI::App* cmd, const TrainFlags& flags)
{
    const TrainSettings settings = resolve_train_settings(cmd, flags);
    const gep::GepInstance instance = load_dataset_or_config_error(settings.dataset);
    const fs::path dir = resolve_out_dir(flags.out_dir);
    const std::string hash = config_hash(run_config_to_json(settings.run, settings.dataset));

    const gep::GepProblem problem(instance);
    const RunResult result = run(problem, settings.run);
    write_train_artifacts(dir, hash, settings.run, result);

    const ArgminResult best = argmin_action(result.q.front(), problem.initial_state(), settings.run.argmin);
    std::cout << "sampler=" << sampler_name(settings.run.sampler) << " K=" << settings.run.iterations
              << " M=" << settings.run.samples << " seed=" << settings.run.seed << "\n";
    std::cout << "stage-1 greedy shares:";
    for (double s : best.action.shares)
        std::cout << " " << fmt(s);
    std::cout << "\nstage-1 surrogate value: " << fmt(best.value) << "\n";
    std::cout << "wrote " << (dir / "report.csv").string() << ", coeffs.csv, archive.csv, timing.csv\n";
    return 0;
}

// ---------------------------------------------------------------------------
// oracle

int cmd_oracle(const std::string& dataset, double grid_step, double shares_step, std::uint64_t cell_budget,
               const std::string& out_dir_flag)
{
    const gep::GepInstance instance = load_dataset_or_config_error(dataset);
    const fs::path dir = resolve_out_dir(out_dir_flag);
    json cfg;
    cfg["dataset"] = dataset;
    cfg["grid_step"] = grid_step;
    cfg["shares_step"] = shares_step;
    const std::string hash = config_hash(cfg);

    const oracle::ScenarioTree tree = oracle::build_tree(instance, grid_step);
    const oracle::OracleSolution solution = oracle::backward_induction(instance, tree, shares_step, cell_budget);

    CsvWriter out(dir / "oracle.csv", hash);
    std::vector<std::string> header{"grid_step", "shares_step", "expected_cost"};
    for (std::size_t g = 0; g < solution.stage1_shares.shares.size(); ++g)
        header.push_back("share_" + std::to_string(g));
    out.row(header);
    std::vector<std::string> row{fmt(grid_step), fmt(shares_step), fmt(solution.expected_cost)};
    for (double s : solution.stage1_shares.shares)
        row.push_back(fmt(s));
    out.row(row);

    std::cout << "oracle expected cost: " << fmt(solution.expected_cost) << "\nstage-1 shares:";
    for (double s : solution.stage1_shares.shares)
        std::cout << " " << fmt(s);
    std::cout << "\nwrote " << (dir / "oracle.csv").string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate

std::vector<std::vector<double>> read_coeffs(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open coefficients file: " + path);
    std::vector<std::vector<double>> theta;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        bool first = true;
        while (std::getline(ss, field, ',')) {
            if (first) { // stage column
                first = false;
                continue;
            }
            row.push_back(std::stod(field));
        }
        theta.push_back(std::move(row));
    }
    if (theta.empty())
        throw ConfigError("no coefficient rows in " + path);
    return theta;
}

double read_oracle_cost(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open oracle file: " + path);
    std::string line;
    std::vector<std::string> data_lines;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#')
            data_lines.push_back(line);
    if (data_lines.size() < 2)
        throw ConfigError("oracle file has no data row: " + path);
    std::stringstream ss(data_lines[1]);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (fields.size() < 3)
        throw ConfigError("oracle file row too short: " + path);
    return std::stod(fields[2]);
}

int cmd_evaluate(const std::string& dataset, const std::string& coeffs_path, const std::string& oracle_path,
                 double grid_step, double resolution, int refine_steps, const std::string& out_dir_flag)
{
    const gep::GepInstance instance = load_dataset_or_config_error(dataset);
    const std::vector<std::vector<double>> theta = read_coeffs(coeffs_path);
    const fs::path dir = resolve_out_dir(out_dir_flag);
    json cfg;
    cfg["dataset"] = dataset;
    cfg["coeffs"] = coeffs_path;
    cfg["oracle"] = oracle_path;
    cfg["grid_step"] = grid_step;
    cfg["resolution"] = resolution;
    cfg["refine_steps"] = refine_steps;
    const std::string hash = config_hash(cfg);

    const gep::GepProblem problem(instance);
    FeatureSpec spec = FeatureSpec::for_problem(problem);
    if (static_cast<int>(theta.size()) != instance.horizon())
        throw ConfigError("coefficients rows do not match the dataset horizon");
    std::vector<QApprox> q;
    for (int t = 1; t <= instance.horizon(); ++t) {
        QApprox qt = QApprox::zeros(t, spec);
        if (theta[static_cast<std::size_t>(t - 1)].size() != qt.theta.size())
            throw ConfigError("coefficient count does not match the dataset feature count");
        qt.theta = theta[static_cast<std::size_t>(t - 1)];
        q.push_back(std::move(qt));
    }

    const ArgminParams params{resolution, refine_steps};
    const GreedyPolicy policy = extract_policy(q, params);
    const oracle::ScenarioTree tree = oracle::build_tree(instance, grid_step);
    const double cost = oracle::simulate_policy(instance, tree,
                                                [&](int t, const StateVector& s) { return policy(t, s); });
    const ActionShares stage1 = policy(1, problem.initial_state());

    std::optional<double> gap;
    if (!oracle_path.empty())
        gap = oracle::percent_gap(cost, read_oracle_cost(oracle_path));

    CsvWriter out(dir / "evaluate.csv", hash);
    std::vector<std::string> header{"expected_cost", "percent_gap"};
    for (std::size_t g = 0; g < stage1.shares.size(); ++g)
        header.push_back("share_" + std::to_string(g));
    out.row(header);
    std::vector<std::string> row{fmt(cost), gap ? fmt(*gap) : ""};
    for (double s : stage1.shares)
        row.push_back(fmt(s));
    out.row(row);

    std::cout << "policy expected cost: " << fmt(cost) << "\n";
    if (gap)
        std::cout << "percent gap vs oracle: " << fmt(*gap) << "\n";
    std::cout << "wrote " << (dir / "evaluate.csv").string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepCell {
    std::string label;
    std::string params;
    RunConfig config;
};

struct ExperimentSpec {
    std::string dataset = "data/gep_default.json";
    int replications = 10;
    std::uint64_t base_seed = 1;
    double grid_step = 0.5;
    double shares_step = 0.25;
    RunConfig base;
    std::vector<SweepCell> cells;
};

ExperimentSpec load_experiment(const std::string& path)
{
    const json j = load_json_file(path);
    ExperimentSpec spec;
    if (j.contains("dataset"))
        spec.dataset = j["dataset"].get<std::string>();
    if (j.contains("replications"))
        spec.replications = j["replications"].get<int>();
    if (spec.replications < 1)
        throw ConfigError("experiment: replications must be >= 1");
    if (j.contains("base_seed"))
        spec.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("oracle")) {
        const json& o = j["oracle"];
        if (o.contains("grid_step"))
            spec.grid_step = o["grid_step"].get<double>();
        if (o.contains("shares_step"))
            spec.shares_step = o["shares_step"].get<double>();
    }
    if (j.contains("base"))
        spec.base = run_config_from_json(j["base"], spec.base);

    const json axes = j.contains("axes") ? j["axes"] : json::object();
    const auto add_cell = [&](std::string label, std::string params, RunConfig config) {
        spec.cells.push_back({std::move(label), std::move(params), std::move(config)});
    };

    if (axes.contains("samplers"))
        for (const json& s : axes["samplers"]) {
            RunConfig c = spec.base;
            c.sampler = sampler_from_name(s.get<std::string>());
            add_cell(s.get<std::string>(), "", c);
        }
    if (axes.contains("epsilon"))
        for (const json& v : axes["epsilon"]) {
            RunConfig c = spec.base;
            c.sampler = SamplerKind::EpsGreedy;
            c.epsilon = v.get<double>();
            add_cell("eps-greedy eps=" + fmt(c.epsilon), "eps=" + fmt(c.epsilon), c);
        }
    if (axes.contains("decay")) {
        const json& d = axes["decay"];
        if (!d.contains("initial") || !d.contains("final"))
            throw ConfigError("experiment: decay axis needs 'initial' and 'final' lists");
        for (const json& ef : d["final"])
            for (const json& ei : d["initial"]) {
                RunConfig c = spec.base;
                c.sampler = SamplerKind::EpsDecay;
                c.epsilon_initial = ei.get<double>();
                c.epsilon_final = ef.get<double>();
                add_cell("eps-decay ei=" + fmt(c.epsilon_initial) + " ef=" + fmt(c.epsilon_final),
                         "ei=" + fmt(c.epsilon_initial) + " ef=" + fmt(c.epsilon_final), c);
            }
    }
    if (axes.contains("iterations"))
        for (const json& v : axes["iterations"]) {
            RunConfig c = spec.base;
            c.iterations = v.get<int>();
            add_cell(std::string(sampler_name(c.sampler)) + " K=" + std::to_string(c.iterations),
                     "K=" + std::to_string(c.iterations), c);
        }
    if (axes.contains("samples"))
        for (const json& v : axes["samples"]) {
            RunConfig c = spec.base;
            c.samples = v.get<int>();
            add_cell(std::string(sampler_name(c.sampler)) + " M=" + std::to_string(c.samples),
                     "M=" + std::to_string(c.samples), c);
        }
    if (axes.contains("reeval_every"))
        for (const json& v : axes["reeval_every"]) {
            RunConfig c = spec.base;
            c.sampler = SamplerKind::QisRe;
            c.reeval_every = v.get<int>();
            add_cell("qis-re Khat=" + std::to_string(c.reeval_every),
                     "Khat=" + std::to_string(c.reeval_every), c);
        }
    if (spec.cells.empty())
        add_cell(sampler_name(spec.base.sampler), "", spec.base);

    for (const SweepCell& cell : spec.cells) {
        try {
            cell.config.validate();
        } catch (const ContractViolation& e) {
            throw ConfigError(std::string("experiment cell '") + cell.label + "': " + e.what());
        }
    }
    return spec;
}

struct SweepRow {
    std::string status = "ok";
    double gap = 0.0;
    std::vector<double> shares;
    RunReport report;
};

int cmd_sweep(const std::string& experiment_path, int jobs, const std::string& out_dir_flag)
{
    const ExperimentSpec spec = load_experiment(experiment_path);
    const gep::GepInstance instance = load_dataset_or_config_error(spec.dataset);
    const fs::path dir = resolve_out_dir(out_dir_flag);
    const std::string hash = config_hash(load_json_file(experiment_path));
    if (jobs < 1)
        throw ConfigError("--jobs must be >= 1");

    const oracle::ScenarioTree tree = oracle::build_tree(instance, spec.grid_step);
    const oracle::OracleSolution solution = oracle::backward_induction(instance, tree, spec.shares_step);

    struct Task {
        std::size_t cell;
        int replication; // 1-based
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < spec.cells.size(); ++c)
        for (int r = 1; r <= spec.replications; ++r)
            tasks.push_back({c, r});
    std::vector<SweepRow> rows(tasks.size());

    const gep::GepProblem problem(instance);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size())
                return;
            const Task& task = tasks[i];
            RunConfig config = spec.cells[task.cell].config;
            config.seed = spec.base_seed + static_cast<std::uint64_t>(task.replication - 1);
            SweepRow& row = rows[i];
            try {
                const RunResult result = run(problem, config);
                const GreedyPolicy policy = extract_policy(result.q, config.argmin);
                const double cost = oracle::simulate_policy(
                    instance, tree, [&](int t, const StateVector& s) { return policy(t, s); });
                row.gap = oracle::percent_gap(cost, solution.expected_cost);
                row.shares = policy(1, problem.initial_state()).shares;
                row.report = result.report;
            } catch (const std::exception& e) {
                row.status = std::string("error: ") + e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t)
        pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool)
        t.join();

    const int tech_count = instance.tech_count();
    CsvWriter summary(dir / "summary.csv", hash, "seeds=base_seed+replication-1 (paired across cells)");
    {
        std::vector<std::string> header{"cell", "algorithm", "params", "replication", "seed", "status",
                                        "percent_gap"};
        for (int g = 0; g < tech_count; ++g)
            header.push_back("share_" + std::to_string(g));
        summary.row(header);
    }
    CsvWriter timing(dir / "summary_timing.csv", hash);
    timing.row({"cell", "replication", "sampling_seconds", "evaluation_seconds", "other_seconds",
                "total_seconds"});

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const Task& task = tasks[i];
        const SweepCell& cell = spec.cells[task.cell];
        const SweepRow& row = rows[i];
        std::vector<std::string> fields{cell.label,
                                        sampler_name(cell.config.sampler),
                                        cell.params,
                                        std::to_string(task.replication),
                                        std::to_string(spec.base_seed + static_cast<std::uint64_t>(task.replication - 1)),
                                        row.status == "ok" ? "ok" : row.status,
                                        row.status == "ok" ? fmt(row.gap) : ""};
        for (int g = 0; g < tech_count; ++g)
            fields.push_back(row.status == "ok" ? fmt(row.shares[static_cast<std::size_t>(g)]) : "");
        summary.row(fields);
        timing.row({cell.label, std::to_string(task.replication), fmt(row.report.sampling_seconds),
                    fmt(row.report.evaluation_seconds), fmt(row.report.other_seconds),
                    fmt(row.report.total_seconds)});
    }

    std::cout << "oracle expected cost: " << fmt(solution.expected_cost) << "\n";
    std::cout << tasks.size() << " runs across " << spec.cells.size() << " cells\n";
    std::cout << "wrote " << (dir / "summary.csv").string() << " and summary_timing.csv\n";
    return 0;
}

// ---------------------------------------------------------------------------
// example1

int cmd_example1(int samples, int iterations, std::uint64_t seed, int bins, bool learn,
                 const std::string& out_dir_flag)
{
    demo::Example1Config config;
    config.samples = samples;
    config.iterations = iterations;
    config.seed = seed;
    config.bins = bins;
    config.learn = learn;
    const fs::path dir = resolve_out_dir(out_dir_flag);
    json cfg;
    cfg["samples"] = samples;
    cfg["iterations"] = iterations;
    cfg["seed"] = seed;
    cfg["bins"] = bins;
    cfg["learn"] = learn;
    const std::string hash = config_hash(cfg);

    const demo::Example1Result result = demo::run_example1(config);

    CsvWriter out(dir / "example1.csv", hash);
    out.row({"bin_lo", "bin_hi", "count_first", "count_last"});
    for (int b = 0; b < bins; ++b)
        out.row({fmt(result.bin_edges[static_cast<std::size_t>(b)]),
                 fmt(result.bin_edges[static_cast<std::size_t>(b) + 1]),
                 std::to_string(result.first_histogram[static_cast<std::size_t>(b)]),
                 std::to_string(result.last_histogram[static_cast<std::size_t>(b)])});

    const double first = demo::mass_near(result.first_iteration, 5.0, 1.0);
    const double last = demo::mass_near(result.last_iteration, 5.0, 1.0);
    std::cout << "mass within |x-5|<=1: first iteration " << fmt(first) << ", last iteration " << fmt(last)
              << "\n";
    std::cout << "wrote " << (dir / "example1.csv").string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// report

int cmd_report(const std::string& summary_path, const std::string& out_dir_flag)
{
    std::ifstream in(summary_path);
    if (!in)
        throw ConfigError("cannot open summary file: " + summary_path);
    const fs::path dir = resolve_out_dir(out_dir_flag);
    json cfg;
    cfg["summary"] = summary_path;
    const std::string hash = config_hash(cfg);

    struct CellAgg {
        std::string algorithm, params;
        std::vector<double> gaps;
    };
    std::vector<std::string> order;
    std::map<std::string, CellAgg> cells;
    int skipped = 0;

    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() < 7 || fields[5] != "ok" || fields[6].empty()) {
            ++skipped;
            continue;
        }
        double gap = 0.0;
        try {
            gap = std::stod(fields[6]);
        } catch (...) {
            ++skipped;
            continue;
        }
        auto [it, inserted] = cells.try_emplace(fields[0]);
        if (inserted) {
            order.push_back(fields[0]);
            it->second.algorithm = fields[1];
            it->second.params = fields[2];
        }
        it->second.gaps.push_back(gap);
    }
    if (skipped > 0)
        std::cerr << "report: skipped " << skipped << " malformed or failed rows\n";

    CsvWriter agg(dir / "aggregates.csv", hash);
    agg.row({"cell", "algorithm", "params", "n", "min", "median", "max"});
    CsvWriter box(dir / "boxplot.csv", hash);
    box.row({"cell", "algorithm", "params", "n", "p5", "q1", "median", "q3", "p95"});
    for (const std::string& label : order) {
        const CellAgg& cell = cells.at(label);
        std::vector<double> sorted = cell.gaps;
        std::sort(sorted.begin(), sorted.end());
        agg.row({label, cell.algorithm, cell.params, std::to_string(cell.gaps.size()), fmt(sorted.front()),
                 fmt(stats::median(cell.gaps)), fmt(sorted.back())});
        box.row({label, cell.algorithm, cell.params, std::to_string(cell.gaps.size()),
                 fmt(stats::quantile(cell.gaps, 0.05)), fmt(stats::quantile(cell.gaps, 0.25)),
                 fmt(stats::median(cell.gaps)), fmt(stats::quantile(cell.gaps, 0.75)),
                 fmt(stats::quantile(cell.gaps, 0.95))});
    }
    std::cout << "wrote " << (dir / "aggregates.csv").string() << " and boxplot.csv\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Q-learning with importance-sampled actions on a generation-expansion testbed"};
    app.require_subcommand(1);

    TrainFlags train_flags;
    CLI::App* train_cmd = app.add_subcommand("train", "run one learning configuration and write artifacts");
    add_train_flags(train_cmd, train_flags);

    std::string oracle_dataset = "data/gep_default.json", oracle_out;
    double oracle_grid = 0.5, oracle_shares = 0.25;
    std::uint64_t oracle_budget = oracle::kDefaultCellBudget;
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "exact lattice benchmark by backward induction");
    oracle_cmd->add_option("--dataset", oracle_dataset, "dataset JSON path");
    oracle_cmd->add_option("--grid-step", oracle_grid, "price grid step on [0,1]");
    oracle_cmd->add_option("--shares-step", oracle_shares, "shares lattice step");
    oracle_cmd->add_option("--cell-budget", oracle_budget, "max value-table cells");
    oracle_cmd->add_option("--out-dir", oracle_out, "output directory");

    std::string eval_dataset = "data/gep_default.json", eval_coeffs = "coeffs.csv", eval_oracle, eval_out;
    double eval_grid = 0.5, eval_resolution = 0.05;
    int eval_refine = 20;
    CLI::App* eval_cmd = app.add_subcommand("evaluate", "simulate a trained greedy policy on the tree");
    eval_cmd->add_option("--dataset", eval_dataset, "dataset JSON path");
    eval_cmd->add_option("--coeffs", eval_coeffs, "coefficients CSV from train");
    eval_cmd->add_option("--oracle", eval_oracle, "oracle.csv for the gap column");
    eval_cmd->add_option("--grid-step", eval_grid, "price grid step");
    eval_cmd->add_option("--resolution", eval_resolution, "policy lattice step");
    eval_cmd->add_option("--refine-steps", eval_refine, "policy refinement rounds");
    eval_cmd->add_option("--out-dir", eval_out, "output directory");

    std::string sweep_experiment, sweep_out;
    int sweep_jobs = 1;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run an experiment grid with replications");
    sweep_cmd->add_option("experiment", sweep_experiment, "experiment JSON path")->required();
    sweep_cmd->add_option("--jobs", sweep_jobs, "parallel workers");
    sweep_cmd->add_option("--out-dir", sweep_out, "output directory");

    int ex_samples = 1000, ex_iterations = 5, ex_bins = 20;
    std::uint64_t ex_seed = 1;
    bool ex_learn = false;
    std::string ex_out;
    CLI::App* ex_cmd = app.add_subcommand("example1", "one-dimensional accept-reject demonstration");
    ex_cmd->add_option("--samples", ex_samples, "accepted samples per iteration M");
    ex_cmd->add_option("--iterations", ex_iterations, "iterations K");
    ex_cmd->add_option("--seed", ex_seed, "RNG seed");
    ex_cmd->add_option("--bins", ex_bins, "histogram bins");
    ex_cmd->add_flag("--learn", ex_learn, "sample against a learned surrogate instead of the true function");
    ex_cmd->add_option("--out-dir", ex_out, "output directory");

    std::string report_summary, report_out;
    CLI::App* report_cmd = app.add_subcommand("report", "aggregate a sweep summary into table and plot data");
    report_cmd->add_option("summary", report_summary, "summary.csv from sweep")->required();
    report_cmd->add_option("--out-dir", report_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) // --help
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (train_cmd->parsed())
            return cmd_train(train_cmd, train_flags);
        if (oracle_cmd->parsed())
            return cmd_oracle(oracle_dataset, oracle_grid, oracle_shares, oracle_budget, oracle_out);
        if (eval_cmd->parsed())
            return cmd_evaluate(eval_dataset, eval_coeffs, eval_oracle, eval_grid, eval_resolution, eval_refine,
                                eval_out);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_experiment, sweep_jobs, sweep_out);
        if (ex_cmd->parsed())
            return cmd_example1(ex_samples, ex_iterations, ex_seed, ex_bins, ex_learn, ex_out);
        if (report_cmd->parsed())
            return cmd_report(report_summary, report_out);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
