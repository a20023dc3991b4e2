#pragma once

// Orchestration behind the CLI: data generation, training runs with
// per-generation metrics, evaluation of saved models and rule listings.
//
// Seeds: repetition r of a run with master seed S draws its data from
// stream ("data", r), its split from ("split", r) and the GA from
// ("evolution", r). AM-Gauss repetition r uses instance seed problem_seed + r.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "suprb/core.hpp"
#include "suprb/dataset_io.hpp"
#include "suprb/errors.hpp"
#include "suprb/ga.hpp"
#include "suprb/harness/config.hpp"
#include "suprb/harness/model_file.hpp"
#include "suprb/metrics.hpp"
#include "suprb/problems.hpp"

namespace suprb::harness {

namespace fs = std::filesystem;

/// Write to a sibling temp file, then rename over the target.
inline void write_file_atomic(const fs::path& path, const std::string& content)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(fmt::format("cannot write '{}'", tmp.string()));
        out << content;
        if (!out) throw Error(fmt::format("write to '{}' failed", tmp.string()));
    }
    fs::rename(tmp, path);
}

inline std::string dataset_to_csv(const Dataset& d)
{
    std::ostringstream os;
    write_dataset_csv(os, d);
    return os.str();
}

inline std::string instance_to_text(const AmGaussInstance& inst)
{
    std::ostringstream os;
    write_am_gauss_instance(os, inst);
    return os.str();
}

// ------------------------------------------------------------ gen-data

struct GenDataRequest {
    ProblemKind problem = ProblemKind::frog;
    std::size_t n = 100;
    std::size_t holdout = 1000;
    std::uint64_t seed = 0;
    std::uint64_t problem_seed = 0;
    fs::path out_dir = ".";
};

/// Writes train.csv and holdout.csv (and instance.txt for AM-Gauss).
inline void generate_data(const GenDataRequest& req)
{
    if (req.n == 0 || req.holdout == 0) throw ConfigError("gen-data: sizes must be positive");
    Problem problem = FrogProblem{};
    if (req.problem == ProblemKind::am_gauss) {
        AmGaussProblem am;
        am.instance = am_gauss_generate(req.problem_seed);
        write_file_atomic(req.out_dir / "instance.txt", instance_to_text(am.instance));
        problem = std::move(am);
    }
    auto rng = make_rng(req.seed, "data", 0);
    const auto train = sample_dataset(problem, req.n, rng);
    const auto holdout = sample_dataset(problem, req.holdout, rng);
    write_file_atomic(req.out_dir / "train.csv", dataset_to_csv(train));
    write_file_atomic(req.out_dir / "holdout.csv", dataset_to_csv(holdout));
}

// --------------------------------------------------------------- train

inline Problem make_problem(const ExperimentConfig& cfg, std::optional<AmGaussInstance> instance)
{
    if (cfg.problem == ProblemKind::frog) return FrogProblem{};
    if (!instance) throw UsageError("AM-Gauss problem needs an instance");
    return AmGaussProblem{std::move(*instance), cfg.oracle_restarts, cfg.oracle_tol};
}

struct RepetitionInputs {
    Problem problem;
    Dataset pool;
    Dataset holdout;
    std::uint64_t instance_seed = 0;
};

inline RepetitionInputs prepare_inputs(const ExperimentConfig& cfg, std::size_t rep)
{
    RepetitionInputs in;
    std::optional<AmGaussInstance> instance;
    if (cfg.problem == ProblemKind::am_gauss) {
        if (!cfg.instance_file.empty())
            instance = load_am_gauss_instance(cfg.instance_file);
        else
            instance = am_gauss_generate(cfg.problem_seed + rep);
        in.instance_seed = instance->seed;
    }
    in.problem = make_problem(cfg, std::move(instance));

    auto rng = make_rng(cfg.run_seed, "data", rep);
    in.pool = cfg.train_csv.empty() ? sample_dataset(in.problem, cfg.n_train_pool, rng) : load_dataset_csv(cfg.train_csv);
    in.holdout =
        cfg.holdout_csv.empty() ? sample_dataset(in.problem, cfg.n_holdout, rng) : load_dataset_csv(cfg.holdout_csv);

    const auto dx = problem_dx(in.problem), da = problem_da(in.problem);
    if (in.pool.dx() != dx || in.pool.da() != da || in.holdout.dx() != dx || in.holdout.da() != da)
        throw DimensionError(fmt::format("data dimensions do not match problem {} (dx={}, da={})",
                                         to_string(cfg.problem), dx, da));
    return in;
}

inline constexpr const char* kMetricsHeader =
    "run,generation,rmse_quality_train,rmse_quality_valid,rmse_quality_holdout,rmse_choice_gap_holdout,"
    "mse_action_holdout,n_classifiers_elitist,unmatched_train,step_size";

inline std::string metrics_row(std::size_t run, const GenerationMetrics& m)
{
    return fmt::format("{},{},{},{},{},{},{},{},{},{}", run, m.generation, format_real(m.rmse_quality_train),
                       format_real(m.rmse_quality_valid), format_real(m.rmse_quality_holdout),
                       format_real(m.rmse_choice_gap_holdout), format_real(m.mse_action_holdout),
                       m.n_classifiers_elitist, m.unmatched_train, format_real(m.step_size));
}

inline void check_finite(const GenerationMetrics& m, std::size_t run)
{
    for (double v : {m.rmse_quality_train, m.rmse_quality_valid, m.rmse_quality_holdout, m.rmse_choice_gap_holdout,
                     m.mse_action_holdout, m.step_size})
        if (!std::isfinite(v))
            throw Error(fmt::format("non-finite metric in run {} generation {}: {}", run, m.generation,
                                    metrics_row(run, m)));
}

struct RepetitionResult {
    std::vector<GenerationMetrics> history;
    ModelFile model;
    RepetitionInputs inputs;
};

inline RepetitionResult run_repetition(const ExperimentConfig& cfg, std::size_t rep, std::ostream* log = nullptr)
{
    RepetitionResult out;
    out.inputs = prepare_inputs(cfg, rep);
    const auto& in = out.inputs;

    auto split_rng = make_rng(cfg.run_seed, "split", rep);
    const auto [train, valid] = split_dataset(in.pool, cfg.validation_fraction, split_rng);
    const auto optima = optima_for(in.problem, in.holdout);
    const EvaluationSets sets{train, valid, in.holdout, in.problem, optima};

    auto evo_rng = make_rng(cfg.run_seed, "evolution", rep);
    GenerationObserver record = [&](const GenerationReport& r, const Individual& elitist) {
        auto m = measure(elitist, r.generation, r.step_size, sets);
        check_finite(m, rep);
        if (log && (r.generation % 10 == 0 || r.generation == cfg.ga.generations))
            *log << fmt::format("run {} gen {}: holdout rmse {:.4f}, choice gap {:.4f}, {} classifiers\n", rep,
                                r.generation, m.rmse_quality_holdout, m.rmse_choice_gap_holdout,
                                m.n_classifiers_elitist);
        out.history.push_back(m);
    };
    auto result = evolve(cfg.ga, train, valid, evo_rng, {record});

    json cfg_echo = json::object();
    // the output location is omitted so artefacts do not depend on it
    for (const auto& [key, value] : config_entries(cfg))
        if (key != "output_dir") cfg_echo[key] = value;
    out.model.metadata = {
        {"problem", to_string(cfg.problem)},
        {"dx", train.dx()},
        {"da", train.da()},
        {"include_linear", cfg.ga.include_linear},
        {"generation", cfg.ga.generations},
        {"run", rep},
        {"run_seed", cfg.run_seed},
        {"instance_seed", in.instance_seed},
        {"oracle_restarts", cfg.oracle_restarts},
        {"oracle_tol", cfg.oracle_tol},
        {"final_step_size", result.step.s},
        {"config", std::move(cfg_echo)},
    };
    out.model.elitist = std::move(result.elitist);
    return out;
}

struct TrainSummary {
    std::vector<std::vector<GenerationMetrics>> histories; // per repetition
    std::vector<std::size_t> final_sizes;
};

/// Runs every repetition and writes metrics.csv plus, per repetition r,
/// model_run<r>.json, holdout_run<r>.csv and (AM-Gauss) instance_run<r>.txt.
inline TrainSummary run_training(const ExperimentConfig& cfg, std::ostream* log = nullptr)
{
    cfg.validate();
    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);

    TrainSummary summary;
    std::string csv = std::string(kMetricsHeader) + "\n";
    for (std::size_t rep = 0; rep < cfg.n_repetitions; ++rep) {
        auto res = run_repetition(cfg, rep, log);
        for (const auto& m : res.history) csv += metrics_row(rep, m) + "\n";
        write_file_atomic(dir / fmt::format("model_run{}.json", rep), serialize_model(res.model));
        write_file_atomic(dir / fmt::format("holdout_run{}.csv", rep), dataset_to_csv(res.inputs.holdout));
        if (const auto* am = std::get_if<AmGaussProblem>(&res.inputs.problem))
            write_file_atomic(dir / fmt::format("instance_run{}.txt", rep), instance_to_text(am->instance));
        summary.final_sizes.push_back(res.model.elitist.length());
        summary.histories.push_back(std::move(res.history));
    }
    write_file_atomic(dir / "metrics.csv", csv);
    return summary;
}

// ---------------------------------------------------------------- eval

struct EvalReport {
    std::size_t n = 0;
    double rmse_quality_holdout = 0.0;
    std::optional<double> rmse_choice_gap_holdout;
    std::optional<double> mse_action_holdout;
    double unmatched_fraction = 0.0;

    json to_json() const
    {
        json j{{"n", n}, {"rmse_quality_holdout", rmse_quality_holdout}, {"unmatched_fraction", unmatched_fraction}};
        j["rmse_choice_gap_holdout"] = rmse_choice_gap_holdout ? json(*rmse_choice_gap_holdout) : json(nullptr);
        j["mse_action_holdout"] = mse_action_holdout ? json(*mse_action_holdout) : json(nullptr);
        return j;
    }
};

/// Choice metrics need an oracle: always available for frog, only with an
/// instance for AM-Gauss.
inline EvalReport evaluate_model(const ModelFile& model, const Dataset& holdout,
                                 const std::optional<AmGaussInstance>& instance)
{
    if (holdout.dx() != model.dx() || holdout.da() != model.da())
        throw DimensionError(fmt::format("model has (dx={}, da={}), holdout has (dx={}, da={})", model.dx(),
                                         model.da(), holdout.dx(), holdout.da()));
    EvalReport r;
    r.n = holdout.size();
    r.rmse_quality_holdout = rmse_quality(model.elitist, holdout);
    r.unmatched_fraction =
        static_cast<double>(unmatched_count(model.elitist, holdout)) / static_cast<double>(holdout.size());

    const auto problem_name = model.metadata.at("problem").get<std::string>();
    std::optional<Problem> problem;
    if (problem_name == "frog") {
        problem = FrogProblem{};
    } else if (instance) {
        problem = AmGaussProblem{*instance, model.metadata.at("oracle_restarts").get<std::size_t>(),
                                 model.metadata.at("oracle_tol").get<double>()};
    }
    if (problem) {
        if (problem_dx(*problem) != model.dx() || problem_da(*problem) != model.da())
            throw DimensionError("model dimensions do not match the problem");
        const auto optima = optima_for(*problem, holdout);
        const auto c = choice_errors(model.elitist, holdout, *problem, optima);
        r.rmse_choice_gap_holdout = c.rmse_gap;
        r.mse_action_holdout = c.mse_action;
    }
    return r;
}

// ------------------------------------------------------------- inspect

/// Rule listing sorted by training error, best first.
inline std::string inspect_model(const ModelFile& model)
{
    std::vector<const Classifier*> order;
    for (const auto& c : model.elitist.classifiers) order.push_back(&c);
    std::stable_sort(order.begin(), order.end(),
                     [](const Classifier* a, const Classifier* b) { return a->train_error < b->train_error; });
    std::string out;
    for (const auto* c : order) out += render_rule(*c) + "\n";
    return out;
}

} // namespace suprb::harness
