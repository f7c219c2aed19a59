#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "riselect/csv.hpp"
#include "riselect/errors.hpp"
#include "riselect/experiment.hpp"
#include "riselect/standardize.hpp"

namespace {

using riselect::ExperimentConfig;
using json = nlohmann::json;

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        riselect::write_text_file(out_path, content);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw riselect::IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_rank(const std::string& data_path, std::string method, const std::string& out_path) {
    if (method == "car") {
        std::cerr << "note: 'car' is computed as 'criz' (equivalent when n > p)\n";
        method = "criz";
    }
    const riselect::RawData raw = riselect::read_dataset_csv(data_path);
    const riselect::Dataset ds = riselect::standardize(raw);
    const riselect::RankingResult result =
        riselect::rank(riselect::rank_method_from_label(method), ds);

    json j;
    j["method"] = method;
    j["scores"] = std::vector<double>(result.scores.data(), result.scores.data() + result.scores.size());
    std::vector<int> order_1based;
    order_1based.reserve(result.order.size());
    for (int i : result.order) order_1based.push_back(i + 1);
    j["order"] = order_1based;
    write_output(out_path, j.dump(2) + "\n");
    return 0;
}

// Without an explicit validation file, rows alternate between train
// (even positions) and validation.
void alternating_split(const riselect::RawData& all, riselect::RawData& train,
                       riselect::RawData& validation) {
    const auto n = all.n();
    const auto n_train = (n + 1) / 2;
    train.predictors.resize(n_train, all.p());
    train.response.resize(n_train);
    validation.predictors.resize(n - n_train, all.p());
    validation.response.resize(n - n_train);
    for (riselect::Index i = 0; i < n; ++i) {
        if (i % 2 == 0) {
            train.predictors.row(i / 2) = all.predictors.row(i);
            train.response[i / 2] = all.response[i];
        } else {
            validation.predictors.row(i / 2) = all.predictors.row(i);
            validation.response[i / 2] = all.response[i];
        }
    }
}

int run_select(const std::string& data_path, std::string method,
               const std::string& validation_path, int k_max, const std::string& out_path) {
    if (method == "ls-car") {
        std::cerr << "note: 'ls-car' is computed as 'ls-criz' (equivalent when n > p)\n";
        method = "ls-criz";
    }
    if (!riselect::is_selection_method(method))
        throw riselect::ConfigError("unknown selection method: " + method);

    const riselect::RawData all = riselect::read_dataset_csv(data_path);
    riselect::RawData train, validation;
    if (validation_path.empty()) {
        alternating_split(all, train, validation);
    } else {
        train = all;
        validation = riselect::read_dataset_csv(validation_path);
        if (validation.p() != train.p())
            throw riselect::DimensionMismatch("validation has a different predictor count");
    }

    const riselect::Dataset ds = riselect::standardize(train);
    ExperimentConfig c;
    const int n = static_cast<int>(ds.n());
    const int p = static_cast<int>(ds.p());
    c.k_max = k_max > 0 ? k_max : std::min({n - 1, p, 50});
    if (c.k_max > std::min(n - 1, p))
        throw riselect::ConfigError("k_max must be <= min(n-1, p)");
    c.ridge_lambda_count = 10;
    c.lasso_lambda_min_ratio = riselect::default_lambda_min_ratio(n, p);

    std::map<std::string, riselect::RankingResult> rankings;
    const riselect::FitSequence seq = riselect::fit_sequence(method, ds, c, rankings);
    const riselect::TunedFit tuned = riselect::tune_on_validation(seq, validation, ds);
    const riselect::CoefficientVector slopes = riselect::to_original_scale(tuned.coefficients, ds);

    json j;
    j["method"] = method;
    j["chosen_hyper"] = tuned.chosen_hyper;
    j["validation_mse"] = tuned.validation_mse;
    std::vector<int> support_1based;
    for (int i : tuned.coefficients.support) support_1based.push_back(i + 1);
    j["support"] = support_1based;
    j["intercept"] = riselect::original_intercept(slopes, ds);
    j["coefficients"] =
        std::vector<double>(slopes.values.data(), slopes.values.data() + slopes.values.size());
    write_output(out_path, j.dump(2) + "\n");
    return 0;
}

struct GridFlags {
    std::string config_path;
    ExperimentConfig flags;
    bool csv_stdout = false;
};

// Attaches the shared experiment options to a subcommand; each returned
// closure applies one flag onto the config iff the user passed it.
std::vector<std::function<void(ExperimentConfig&)>> add_grid_options(CLI::App* cmd,
                                                                     GridFlags& g) {
    std::vector<std::function<void(ExperimentConfig&)>> setters;
    auto track = [&setters](CLI::Option* opt, auto apply) {
        setters.push_back([opt, apply](ExperimentConfig& c) {
            if (opt->count() > 0) apply(c);
        });
    };

    cmd->add_option("--config", g.config_path, "JSON config file; flags override its fields");
    auto& f = g.flags;
    track(cmd->add_option("--seed", f.base_seed, "base RNG seed"),
          [&f](ExperimentConfig& c) { c.base_seed = f.base_seed; });
    track(cmd->add_option("--reps", f.replications, "replications per design"),
          [&f](ExperimentConfig& c) { c.replications = f.replications; });
    track(cmd->add_option("--methods", f.methods, "method labels")->delimiter(','),
          [&f](ExperimentConfig& c) { c.methods = f.methods; });
    track(cmd->add_option("--out", f.output_dir, "output directory"),
          [&f](ExperimentConfig& c) { c.output_dir = f.output_dir; });
    track(cmd->add_option("--setting", f.setting, "low | medium | high50 | high100"),
          [&f](ExperimentConfig& c) { c.setting = f.setting; });
    track(cmd->add_option("--examples", f.examples, "example numbers")->delimiter(','),
          [&f](ExperimentConfig& c) { c.examples = f.examples; });
    track(cmd->add_option("--rho", f.rho_list, "correlation levels")->delimiter(','),
          [&f](ExperimentConfig& c) { c.rho_list = f.rho_list; });
    track(cmd->add_option("--snr", f.snr_list, "signal-to-noise ratios")->delimiter(','),
          [&f](ExperimentConfig& c) { c.snr_list = f.snr_list; });
    track(cmd->add_option("--k-max", f.k_max, "largest model size on tuning paths"),
          [&f](ExperimentConfig& c) { c.k_max = f.k_max; });
    track(cmd->add_option("--ridge-lambdas", f.ridge_lambda_count, "ridge penalty grid size"),
          [&f](ExperimentConfig& c) { c.ridge_lambda_count = f.ridge_lambda_count; });
    track(cmd->add_option("--lasso-lambdas", f.lasso_n_lambda, "lasso path length"),
          [&f](ExperimentConfig& c) { c.lasso_n_lambda = f.lasso_n_lambda; });
    track(cmd->add_option("--lasso-min-ratio", f.lasso_lambda_min_ratio,
                          "lambda_min / lambda_max"),
          [&f](ExperimentConfig& c) { c.lasso_lambda_min_ratio = f.lasso_lambda_min_ratio; });
    track(cmd->add_option("--gamma-count", f.n_gamma, "relaxed-lasso gamma grid size"),
          [&f](ExperimentConfig& c) { c.n_gamma = f.n_gamma; });
    track(cmd->add_option("--draws", f.edf_n_draws, "EDF Monte-Carlo draws"),
          [&f](ExperimentConfig& c) { c.edf_n_draws = f.edf_n_draws; });
    track(cmd->add_option("--sizes", f.edf_sizes, "EDF model sizes")->delimiter(','),
          [&f](ExperimentConfig& c) { c.edf_sizes = f.edf_sizes; });
    track(cmd->add_option("--bs-k-max", f.edf_bs_k_max, "EDF best-subset size cap"),
          [&f](ExperimentConfig& c) { c.edf_bs_k_max = f.edf_bs_k_max; });
    track(cmd->add_option("--edf-n", f.edf_n, "EDF sample size"),
          [&f](ExperimentConfig& c) { c.edf_n = f.edf_n; });
    track(cmd->add_option("--edf-p", f.edf_p, "EDF predictor count"),
          [&f](ExperimentConfig& c) { c.edf_p = f.edf_p; });
    track(cmd->add_option("--edf-s", f.edf_s, "EDF true-support size"),
          [&f](ExperimentConfig& c) { c.edf_s = f.edf_s; });
    track(cmd->add_option("--edf-example", f.edf_example, "EDF coefficient pattern (4..6)"),
          [&f](ExperimentConfig& c) { c.edf_example = f.edf_example; });
    track(cmd->add_option("--edf-rho", f.edf_rho, "EDF predictor correlation"),
          [&f](ExperimentConfig& c) { c.edf_rho = f.edf_rho; });
    track(cmd->add_option("--edf-snr", f.edf_snr, "EDF signal-to-noise ratio"),
          [&f](ExperimentConfig& c) { c.edf_snr = f.edf_snr; });
    cmd->add_flag("--csv-stdout", g.csv_stdout, "also stream records.csv to standard output");
    return setters;
}

int run_grid(const std::string& part, const GridFlags& g,
             const std::vector<std::function<void(ExperimentConfig&)>>& setters,
             const CLI::App* cmd) {
    ExperimentConfig c;
    if (!g.config_path.empty()) {
        c = riselect::config_from_json(read_file(g.config_path));
    } else {
        const bool edf = part == "edf";
        std::vector<std::string> missing;
        if (cmd->get_option("--seed")->count() == 0) missing.push_back("--seed");
        if (!edf && cmd->get_option("--reps")->count() == 0) missing.push_back("--reps");
        if (cmd->get_option("--methods")->count() == 0) missing.push_back("--methods");
        if (cmd->get_option("--out")->count() == 0) missing.push_back("--out");
        if (!missing.empty()) {
            std::string msg = "without --config these flags are required:";
            for (const auto& m : missing) msg += " " + m;
            throw riselect::ConfigError(msg);
        }
    }
    c.part = part;
    for (const auto& apply : setters) apply(c);

    const ExperimentConfig resolved = riselect::resolve_config(c);
    std::cerr << "part=" << resolved.part << " setting=" << resolved.setting
              << " methods=" << resolved.methods.size() << " seed=" << resolved.base_seed << "\n";
    const auto t0 = std::chrono::steady_clock::now();
    const riselect::ResultTable table = riselect::run(resolved);
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    riselect::emit(table, resolved, resolved.output_dir);
    std::cerr << table.rows.size() << " records in " << dt << " s -> " << resolved.output_dir
              << "/records.csv\n";
    if (g.csv_stdout) std::cout << riselect::records_csv(table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relative-importance variable ranking, selection and simulation suite"};
    app.require_subcommand(1);

    std::string rank_data, rank_method = "criz", rank_out;
    CLI::App* rank_cmd = app.add_subcommand("rank", "rank predictors of a dataset CSV");
    rank_cmd->add_option("--data", rank_data, "CSV: header row, response first column")->required();
    rank_cmd->add_option("--method", rank_method, "sis | gd | cri | criz | car");
    rank_cmd->add_option("--out", rank_out, "output JSON path (default: stdout)");

    std::string sel_data, sel_method = "ls-criz", sel_validation, sel_out;
    int sel_k_max = 0;
    CLI::App* sel_cmd = app.add_subcommand("select", "fit and tune one selection method");
    sel_cmd->add_option("--data", sel_data, "CSV: header row, response first column")->required();
    sel_cmd->add_option("--method", sel_method, "ls-*, ridge-*, fs, bs, lasso, rlasso");
    sel_cmd->add_option("--validation", sel_validation,
                        "validation CSV (default: alternating row split)");
    sel_cmd->add_option("--k-max", sel_k_max, "largest model size (default min(n-1, p, 50))");
    sel_cmd->add_option("--out", sel_out, "output JSON path (default: stdout)");

    GridFlags part1_flags, part2_flags, edf_flags;
    CLI::App* part1_cmd = app.add_subcommand("part1", "ranking robustness grid (S, Pr(k))");
    auto part1_setters = add_grid_options(part1_cmd, part1_flags);
    CLI::App* part2_cmd = app.add_subcommand("part2", "selection/prediction grid (F1, RTE)");
    auto part2_setters = add_grid_options(part2_cmd, part2_flags);
    CLI::App* edf_cmd = app.add_subcommand("edf", "effective-degrees-of-freedom study");
    auto edf_setters = add_grid_options(edf_cmd, edf_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (rank_cmd->parsed()) return run_rank(rank_data, rank_method, rank_out);
        if (sel_cmd->parsed())
            return run_select(sel_data, sel_method, sel_validation, sel_k_max, sel_out);
        if (part1_cmd->parsed()) return run_grid("part1", part1_flags, part1_setters, part1_cmd);
        if (part2_cmd->parsed()) return run_grid("part2", part2_flags, part2_setters, part2_cmd);
        if (edf_cmd->parsed()) return run_grid("edf", edf_flags, edf_setters, edf_cmd);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
