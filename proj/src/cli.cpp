#include "onmf/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "onmf/dataset.hpp"
#include "onmf/matrix_market.hpp"
#include "onmf/run_record.hpp"
#include "onmf/solvers.hpp"

namespace onmf {

namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kAlgorithmNames = {
    "ding_bnmtf", "mur_bnmtf",  "aur_bnmtf",        "convergent_bnmtf",
    "ls_nmf",     "mur_uortho", "convergent_uortho"};

struct GenArgs {
    std::size_t rows = 100;
    std::size_t cols = 120;
    std::size_t p = 4;
    std::size_t q = 4;
    double noise = 0.1;
    double sparsity = 0.05;
    std::uint64_t seed = 0;
    std::string out;
};

struct FactorizeArgs {
    std::string algo = "convergent_bnmtf";
    double alpha = 0.1;
    double beta = 1.0;
    double delta = 1e-8;
    double sigma = 1e-8;
    double step = 10.0;
    std::size_t iters = 20;
    std::size_t inner_iters = 60;
    std::uint64_t seed = 0;
    std::size_t p = 0;  // 0 = take the class count from the dataset labels
    std::size_t q = 0;
    bool timing = false;
    std::string in;
    std::string out;
};

struct EvalArgs {
    std::string run;
    std::string dataset;
};

struct SweepArgs {
    std::string param = "alpha";
    std::vector<std::string> values;
    FactorizeArgs base;
};

Dataset load_dataset(const std::string& in) {
    const fs::path path(in);
    if (fs::is_directory(path)) return read_dataset(path);
    Dataset d;
    d.matrix = read_matrix_market(path);
    d.name = path.stem().string();
    return d;
}

// Rank defaults to the class count of the dataset's document labels.
void resolve_ranks(FactorizeArgs& args, const Dataset& dataset) {
    if (args.p == 0 || args.q == 0) {
        if (!dataset.doc_labels) {
            throw ShapeError(
                "factorize: --p/--q not given and the dataset has no doc_labels.csv to infer "
                "the rank from");
        }
        const std::size_t k = dataset.doc_labels->num_clusters;
        if (args.p == 0) args.p = k;
        if (args.q == 0) args.q = k;
    }
    if (args.p != args.q) {
        std::cerr << "warning: p=" << args.p << " differs from q=" << args.q
                  << "; the tri-factorization is usually run with p=q\n";
    }
}

RunRecord run_one(const Dataset& dataset, const FactorizeArgs& args) {
    const auto algorithm = algorithm_from_string(args.algo);
    if (!algorithm) throw ShapeError("factorize: unknown algorithm '" + args.algo + "'");

    SolverConfig cfg;
    cfg.algorithm = *algorithm;
    cfg.delta = args.delta;
    cfg.sigma = args.sigma;
    cfg.step = args.step;
    cfg.max_outer_iters = args.iters;
    cfg.max_inner_iters = args.inner_iters;
    cfg.seed = args.seed;

    Hyperparams hp;
    hp.alpha = args.alpha;
    hp.beta = args.beta;
    hp.p = args.p;
    hp.q = args.q;

    RunRecord record;
    record.config = cfg;
    record.hyper = hp;
    record.dataset = dataset.name;
    record.started_at = current_timestamp();
    SolveResult result = solve(dataset.matrix, hp, cfg);
    record.finished_at = current_timestamp();
    record.trace = std::move(result.trace);
    record.violations = count_monotonicity_violations(record.trace.objective);

    if (!args.out.empty()) {
        const fs::path out(args.out);
        fs::create_directories(out);
        write_run_record(out / "run.json", record);
        write_trace_csv(out / "trace.csv", record.trace, args.timing);
        write_matrix_market(out / "B.mtx", result.model.B);
        write_matrix_market(out / "S.mtx", result.model.S);
        write_matrix_market(out / "C.mtx", result.model.C);
    }
    return record;
}

int run_gen(const GenArgs& args) {
    const Dataset dataset =
        gen_synthetic(args.rows, args.cols, args.p, args.q, args.noise, args.sparsity, args.seed);
    write_dataset(args.out, dataset);
    std::cout << "wrote " << dataset.name << " (" << dataset.matrix.rows() << "x"
              << dataset.matrix.cols() << ", " << dataset.matrix.nnz() << " nonzeros) to "
              << args.out << "\n";
    return 0;
}

int run_factorize(FactorizeArgs& args) {
    const Dataset dataset = load_dataset(args.in);
    resolve_ranks(args, dataset);
    const RunRecord record = run_one(dataset, args);
    const auto& obj = record.trace.objective;
    std::cout << to_string(record.config.algorithm) << ": " << (obj.size() - 1)
              << " iterations, objective " << format_double(obj.front()) << " -> "
              << format_double(obj.back()) << ", " << record.violations
              << " monotonicity violations";
    if (record.trace.converged_at) {
        std::cout << ", converged at iteration " << *record.trace.converged_at;
    }
    std::cout << "\n";
    return 0;
}

int run_eval(const EvalArgs& args) {
    const fs::path run_dir(args.run);
    const Dataset dataset = load_dataset(args.dataset);
    if (!dataset.doc_labels) {
        throw ShapeError("eval: dataset has no doc_labels.csv (needed as reference classes)");
    }
    const DenseMatrix b = read_matrix_market(run_dir / "B.mtx").to_dense();
    const DenseMatrix c = read_matrix_market(run_dir / "C.mtx").to_dense();
    if (b.rows() != dataset.matrix.rows() || c.cols() != dataset.matrix.cols()) {
        throw ShapeError("eval: factor shapes do not match the dataset");
    }

    const Assignment doc_pred = assign_from_factor(c, AssignAxis::columns);
    const MetricReport doc_metrics = evaluate(doc_pred, *dataset.doc_labels);

    const Assignment word_pred = assign_from_factor(b, AssignAxis::rows);
    const WordReferenceClasses word_ref =
        word_reference_classes(dataset.matrix, *dataset.doc_labels);
    const MetricReport word_metrics = evaluate(word_pred, word_ref.classes);

    if (fs::exists(run_dir / "run.json")) {
        RunRecord record = read_run_record(run_dir / "run.json");
        record.doc_metrics = doc_metrics;
        record.word_metrics = word_metrics;
        write_run_record(run_dir / "run.json", record);
    }

    nlohmann::json out;
    out["documents"] = {{"mutual_information", doc_metrics.mutual_information},
                        {"entropy", doc_metrics.entropy},
                        {"purity", doc_metrics.purity},
                        {"fmeasure", doc_metrics.fmeasure}};
    out["words"] = {{"mutual_information", word_metrics.mutual_information},
                    {"entropy", word_metrics.entropy},
                    {"purity", word_metrics.purity},
                    {"fmeasure", word_metrics.fmeasure}};
    out["word_zero_rows"] = word_ref.zero_rows;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_sweep(SweepArgs& args) {
    if (args.values.empty()) throw ShapeError("sweep: --values is empty");
    const Dataset dataset = load_dataset(args.base.in);
    resolve_ranks(args.base, dataset);

    const fs::path out(args.base.out);
    fs::create_directories(out);
    std::ofstream summary(out / "summary.csv");
    if (!summary) throw ParseError((out / "summary.csv").string() + ": cannot open for writing");
    summary << "param,value,violations,final_objective\n";

    for (const std::string& token : args.values) {
        char* end = nullptr;
        const double value = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size()) {
            throw ShapeError("sweep: bad value '" + token + "'");
        }
        FactorizeArgs one = args.base;
        one.out.clear();
        // one parameter varied, the other fixed at 1
        if (args.param == "alpha") {
            one.alpha = value;
            one.beta = 1.0;
        } else {
            one.beta = value;
            one.alpha = 1.0;
        }
        const RunRecord record = run_one(dataset, one);
        write_trace_csv(out / ("trace_" + args.param + "_" + token + ".csv"), record.trace,
                        args.base.timing);
        summary << args.param << "," << token << "," << record.violations << ","
                << format_double(record.trace.objective.back()) << "\n";
        std::cout << args.param << "=" << token << ": " << record.violations
                  << " monotonicity violations\n";
    }
    if (!summary) throw ParseError((out / "summary.csv").string() + ": write failed");
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"bi-orthogonal nonnegative matrix tri-factorization experiments"};
    app.require_subcommand(1);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate a planted synthetic dataset");
    gen->add_option("--rows", gen_args.rows, "number of rows (words)");
    gen->add_option("--cols", gen_args.cols, "number of columns (documents)");
    gen->add_option("--p", gen_args.p, "row blocks");
    gen->add_option("--q", gen_args.q, "column blocks");
    gen->add_option("--noise", gen_args.noise, "gaussian noise scale on the signal support");
    gen->add_option("--sparsity", gen_args.sparsity, "target nonzero fraction");
    gen->add_option("--seed", gen_args.seed, "RNG seed");
    gen->add_option("--out", gen_args.out, "output dataset directory")->required();

    FactorizeArgs fac_args;
    CLI::App* fac = app.add_subcommand("factorize", "run one solver on a dataset");
    fac->add_option("--algo", fac_args.algo, "algorithm")
        ->check(CLI::IsMember(kAlgorithmNames));
    fac->add_option("--alpha", fac_args.alpha, "weight on ||CC^T - I||^2");
    fac->add_option("--beta", fac_args.beta, "weight on ||B^T B - I||^2");
    fac->add_option("--delta", fac_args.delta, "denominator guard / base inner-loop delta");
    fac->add_option("--sigma", fac_args.sigma, "zero-escape floor");
    fac->add_option("--step", fac_args.step, "inner-loop delta growth factor");
    fac->add_option("--iters", fac_args.iters, "outer iterations");
    fac->add_option("--inner-iters", fac_args.inner_iters, "inner-loop escalation cap");
    fac->add_option("--seed", fac_args.seed, "RNG seed");
    fac->add_option("--p", fac_args.p, "rank of B (default: class count of the dataset)");
    fac->add_option("--q", fac_args.q, "rank of C (default: class count of the dataset)");
    fac->add_flag("--timing", fac_args.timing,
                  "write wall-clock ms into trace.csv (breaks byte reproducibility)");
    fac->add_option("--in", fac_args.in, "dataset directory or .mtx file")->required();
    fac->add_option("--out", fac_args.out, "output directory (run.json, trace.csv, factors)");

    EvalArgs eval_args;
    CLI::App* ev = app.add_subcommand(
        "eval", "clustering metrics for a finished run (also recorded into its run.json)");
    ev->add_option("--run", eval_args.run, "run output directory")->required();
    ev->add_option("--dataset", eval_args.dataset, "dataset directory")->required();

    SweepArgs sweep_args;
    sweep_args.base.algo = "mur_bnmtf";
    CLI::App* sw = app.add_subcommand("sweep", "vary alpha or beta, record traces + violations");
    sw->add_option("--param", sweep_args.param, "which parameter to vary")
        ->check(CLI::IsMember({"alpha", "beta"}));
    sw->add_option("--values", sweep_args.values, "comma-separated parameter values")
        ->delimiter(',')
        ->required();
    sw->add_option("--algo", sweep_args.base.algo, "algorithm")
        ->check(CLI::IsMember(kAlgorithmNames));
    sw->add_option("--delta", sweep_args.base.delta, "denominator guard");
    sw->add_option("--sigma", sweep_args.base.sigma, "zero-escape floor");
    sw->add_option("--step", sweep_args.base.step, "inner-loop delta growth factor");
    sw->add_option("--iters", sweep_args.base.iters, "outer iterations");
    sw->add_option("--seed", sweep_args.base.seed, "RNG seed");
    sw->add_option("--p", sweep_args.base.p, "rank of B");
    sw->add_option("--q", sweep_args.base.q, "rank of C");
    sw->add_option("--in", sweep_args.base.in, "dataset directory or .mtx file")->required();
    sw->add_option("--out", sweep_args.base.out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return run_gen(gen_args);
        if (fac->parsed()) return run_factorize(fac_args);
        if (ev->parsed()) return run_eval(eval_args);
        if (sw->parsed()) return run_sweep(sweep_args);
    } catch (const InnerLoopError& e) {
        std::cerr << "error: " << e.what() << " (trace kept " << e.trace.objective.size()
                  << " objective samples)\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace onmf
