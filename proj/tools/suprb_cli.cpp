// suprb: command-line front end.
//
//   suprb gen-data --problem frog --n 100 --holdout 1000 --seed 7 --out data/
//   suprb train --config frog.cfg [--set key=value ...]
//   suprb eval --model out/model_run0.json --holdout out/holdout_run0.csv [--instance inst.txt]
//   suprb inspect --model out/model_run0.json

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "suprb/harness/config.hpp"
#include "suprb/harness/experiment.hpp"
#include "suprb/harness/model_file.hpp"

using namespace suprb;
using namespace suprb::harness;

namespace {

ProblemKind parse_problem(const std::string& name)
{
    ExperimentConfig tmp;
    set_option(tmp, "problem", name);
    return tmp.problem;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rule-based learning of quality functions and optimal parametrizations"};
    app.require_subcommand(1);

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "Generate training and holdout datasets");
    std::string gen_problem = "frog";
    GenDataRequest gen_req;
    std::string gen_out = ".";
    gen->add_option("--problem", gen_problem, "frog | am-gauss")->check(CLI::IsMember({"frog", "am-gauss"}));
    gen->add_option("--n", gen_req.n, "Training pool size");
    gen->add_option("--holdout", gen_req.holdout, "Holdout size");
    gen->add_option("--seed", gen_req.seed, "Data sampling seed");
    gen->add_option("--problem-seed", gen_req.problem_seed, "AM-Gauss instance seed");
    gen->add_option("--out", gen_out, "Output directory");

    // train
    auto* train = app.add_subcommand("train", "Run the GA and write metrics.csv and model files");
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::size_t> repetitions, generations;
    std::optional<std::uint64_t> run_seed;
    std::optional<std::string> out_dir, problem;
    std::optional<double> k;
    bool quiet = false;
    train->add_option("--config", config_path, "Key-value config file");
    train->add_option("--set", overrides, "Override a config key (key=value), repeatable");
    train->add_option("--repetitions", repetitions, "Shorthand for n_repetitions");
    train->add_option("--generations", generations, "Shorthand for generations");
    train->add_option("--run-seed", run_seed, "Shorthand for run_seed");
    train->add_option("--output-dir", out_dir, "Shorthand for output_dir");
    train->add_option("--problem", problem, "Shorthand for problem");
    train->add_option("--k", k, "Shorthand for k");
    train->add_flag("--quiet", quiet, "No progress output");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a saved model on holdout data");
    std::string eval_model, eval_holdout, eval_instance, eval_report;
    eval->add_option("--model", eval_model, "Model file")->required();
    eval->add_option("--holdout", eval_holdout, "Holdout CSV")->required();
    eval->add_option("--instance", eval_instance, "AM-Gauss instance file (enables choice metrics)");
    eval->add_option("--report", eval_report, "Report JSON path (default: <model>.eval.json)");

    // inspect
    auto* inspect = app.add_subcommand("inspect", "Print the model's rules, best fit first");
    std::string inspect_path;
    inspect->add_option("--model", inspect_path, "Model file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            gen_req.problem = parse_problem(gen_problem);
            gen_req.out_dir = gen_out;
            generate_data(gen_req);
        } else if (*train) {
            ExperimentConfig cfg;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw Error(fmt::format("cannot open config '{}'", config_path));
                cfg = parse_config(in);
            }
            if (problem) set_option(cfg, "problem", *problem);
            if (repetitions) cfg.n_repetitions = *repetitions;
            if (generations) cfg.ga.generations = *generations;
            if (run_seed) cfg.run_seed = *run_seed;
            if (out_dir) cfg.output_dir = *out_dir;
            if (k) cfg.ga.k = *k;
            for (const auto& o : overrides) apply_override(cfg, o);
            run_training(cfg, quiet ? nullptr : &std::cerr);
        } else if (*eval) {
            const auto model = load_model(eval_model);
            const auto holdout = load_dataset_csv(eval_holdout);
            std::optional<AmGaussInstance> instance;
            if (!eval_instance.empty()) instance = load_am_gauss_instance(eval_instance);
            const auto report = evaluate_model(model, holdout, instance);
            const auto j = report.to_json();
            for (const auto& [key, value] : j.items()) fmt::print("{} {}\n", key, value.dump());
            write_file_atomic(eval_report.empty() ? eval_model + ".eval.json" : eval_report, j.dump(2) + "\n");
        } else if (*inspect) {
            fmt::print("{}", inspect_model(load_model(inspect_path)));
        }
    } catch (const ParseError& e) {
        fmt::print(stderr, "error: {} (byte offset {})\n", e.what(), e.offset());
        return 1;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
