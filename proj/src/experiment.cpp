#include "riselect/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <tuple>

#include "json.hpp"
#include "riselect/csv.hpp"
#include "riselect/errors.hpp"
#include "riselect/parallel.hpp"
#include "riselect/standardize.hpp"

namespace riselect {

namespace {

const std::set<std::string>& ranking_labels() {
    static const std::set<std::string> s{"sis", "gd", "cri", "criz"};
    return s;
}

const std::set<std::string>& selection_labels() {
    static const std::set<std::string> s{"ls-sis", "ls-gd", "ls-cri", "ls-criz", "ridge-cri",
                                         "ridge-criz", "fs", "bs", "lasso", "rlasso"};
    return s;
}

const std::set<std::string>& edf_labels() {
    static const std::set<std::string> s{"bs", "fs", "lasso", "ls-sis", "ls-gd", "ls-cri",
                                         "ls-criz"};
    return s;
}

std::string normalize_method(const std::string& label) {
    if (label == "car") {
        std::cerr << "note: 'car' is computed as 'criz' (equivalent when n > p)\n";
        return "criz";
    }
    if (label == "ls-car") {
        std::cerr << "note: 'ls-car' is computed as 'ls-criz' (equivalent when n > p)\n";
        return "ls-criz";
    }
    return label;
}

int default_k_max(Setting setting, int n, int p) {
    const int k = setting == Setting::Low ? 10 : 50;
    return std::min({k, n - 1, p});
}

}  // namespace

bool is_ranking_method(const std::string& label) {
    return ranking_labels().count(label) > 0 || label == "car";
}

bool is_selection_method(const std::string& label) {
    return selection_labels().count(label) > 0 || label == "ls-car";
}

bool is_edf_method(const std::string& label) { return edf_labels().count(label) > 0; }

ExperimentConfig resolve_config(const ExperimentConfig& input) {
    ExperimentConfig c = input;
    if (c.part != "part1" && c.part != "part2" && c.part != "edf")
        throw ConfigError("part must be part1, part2 or edf");

    const Part part = c.part == "part1" ? Part::PartI : Part::PartII;

    if (c.part == "edf") {
        c.setting = "custom";
        if (c.edf_n < 2 || c.edf_p < 1 || c.edf_s < 1) throw ConfigError("bad EDF dimensions");
        if (c.edf_n_draws < 100) throw ConfigError("EDF needs at least 100 draws");
        if (c.methods.empty()) c.methods = {"bs", "fs", "ls-criz", "lasso"};
        if (c.edf_sizes.empty())
            for (int k = 0; k <= std::min(10, std::min(c.edf_n - 1, c.edf_p)); ++k)
                c.edf_sizes.push_back(k);
        for (auto& m : c.methods) m = normalize_method(m);
        for (const auto& m : c.methods)
            if (!is_edf_method(m)) throw ConfigError("method not supported by the EDF study: " + m);
        for (const auto& m : c.methods)
            if ((m == "ls-gd") && c.edf_p > c.gd_max_p) throw TooManyPredictors(c.edf_p, c.gd_max_p);
        if (c.edf_bs_k_max < 1) throw ConfigError("bs size cap must be >= 1");
        if (c.replications == 0) c.replications = 1;
        if (c.output_dir.empty()) throw ConfigError("output_dir is required");
        // grid fields stay empty for the EDF study
        c.examples.clear();
        c.rho_list.clear();
        c.snr_list.clear();
        c.k_max = std::min({c.edf_n - 1, c.edf_p});
        return c;
    }

    const Setting setting = setting_from_string(c.setting);
    if (setting == Setting::Custom) throw ConfigError("part1/part2 need a named setting");
    const SettingDims dims = setting_dims(setting);

    if (c.examples.empty())
        c.examples = part == Part::PartI ? std::vector<int>{1, 2, 3} : std::vector<int>{4, 5, 6};
    for (int e : c.examples) {
        if (part == Part::PartI && (e < 1 || e > 3))
            throw ConfigError("part1 uses examples 1..3");
        if (part == Part::PartII && (e < 4 || e > 6))
            throw ConfigError("part2 uses examples 4..6");
    }
    if (c.rho_list.empty())
        c.rho_list = part == Part::PartI ? part1_rho_values() : part2_rho_values();
    for (double r : c.rho_list)
        if (r < 0.0 || r >= 1.0) throw ConfigError("rho must lie in [0, 1)");
    if (c.snr_list.empty())
        c.snr_list = part == Part::PartI ? part1_snr_values() : part2_snr_values();
    for (double s : c.snr_list)
        if (s <= 0.0) throw ConfigError("snr must be > 0");

    if (c.methods.empty()) {
        if (part == Part::PartI) {
            c.methods = setting == Setting::Low
                            ? std::vector<std::string>{"sis", "gd", "cri", "criz"}
                            : std::vector<std::string>{"sis", "cri", "criz"};
        } else {
            c.methods = setting == Setting::Low
                            ? std::vector<std::string>{"bs", "fs", "lasso", "rlasso", "ls-sis",
                                                       "ls-gd", "ls-cri", "ls-criz", "ridge-cri",
                                                       "ridge-criz"}
                            : std::vector<std::string>{"fs", "lasso", "rlasso", "ls-sis", "ls-cri",
                                                       "ls-criz", "ridge-cri", "ridge-criz"};
        }
    }
    for (auto& m : c.methods) m = normalize_method(m);
    for (const auto& m : c.methods) {
        if (part == Part::PartI && !is_ranking_method(m))
            throw ConfigError("part1 accepts ranking methods only, got: " + m);
        if (part == Part::PartII && !is_selection_method(m))
            throw ConfigError("part2 accepts selection methods only, got: " + m);
        if ((m == "gd" || m == "ls-gd") && dims.p > c.gd_max_p)
            throw TooManyPredictors(dims.p, c.gd_max_p);
        if (m == "bs" && dims.p > kBestSubsetMaxPredictors)
            throw TooManyPredictors(dims.p, kBestSubsetMaxPredictors);
    }

    if (c.replications < 1)
        c.replications = part == Part::PartI ? 100 : 30;
    if (c.k_max == 0) c.k_max = default_k_max(setting, dims.n, dims.p);
    if (c.k_max < 1 || c.k_max > std::min(dims.n - 1, dims.p))
        throw ConfigError("k_max must lie in [1, min(n-1, p)]");
    if (c.ridge_lambda_count == 0) c.ridge_lambda_count = setting == Setting::Low ? 10 : 20;
    if (c.ridge_lambda_count < 1 || c.ridge_lambda_min <= 0.0 ||
        c.ridge_lambda_min > c.ridge_lambda_max)
        throw ConfigError("bad ridge grid");
    if (c.lasso_n_lambda < 2) throw ConfigError("lasso grid needs at least 2 values");
    if (c.lasso_lambda_min_ratio == 0.0)
        c.lasso_lambda_min_ratio = default_lambda_min_ratio(dims.n, dims.p);
    if (c.lasso_lambda_min_ratio <= 0.0 || c.lasso_lambda_min_ratio >= 1.0)
        throw ConfigError("lambda_min_ratio must lie in (0, 1)");
    if (c.n_gamma < 2) throw ConfigError("relaxed lasso needs at least 2 gamma values");
    if (c.output_dir.empty()) throw ConfigError("output_dir is required");
    c.edf_sizes.clear();
    return c;
}

RngStream replication_stream(std::uint64_t base_seed, const std::string& design_id, int rep) {
    return RngStream(base_seed, detail::fnv1a(design_id)).derive(static_cast<std::uint64_t>(rep));
}

namespace {

std::vector<SimDesign> config_designs(const ExperimentConfig& c) {
    const Part part = c.part == "part1" ? Part::PartI : Part::PartII;
    const Setting setting = setting_from_string(c.setting);
    std::vector<SimDesign> designs;
    for (int e : c.examples)
        for (double rho : c.rho_list)
            for (double snr : c.snr_list) designs.push_back(make_design(part, setting, e, rho, snr));
    return designs;
}

MetricRecord base_record(const SimDesign& d, int rep, const std::string& method) {
    MetricRecord r;
    r.design_id = d.design_id;
    r.example = d.example;
    r.setting = to_string(d.setting);
    r.rho = d.cov.rho;
    r.snr = d.snr;
    r.replication = rep;
    r.method = method;
    return r;
}

struct CellTask {
    std::size_t design_index;
    int rep;  // 1-based
};

ResultTable finish_table(std::vector<std::vector<MetricRecord>> cell_rows) {
    ResultTable table;
    std::size_t total = 0;
    for (const auto& rows : cell_rows) total += rows.size();
    table.rows.reserve(total);
    for (auto& rows : cell_rows)
        for (auto& r : rows) table.rows.push_back(std::move(r));
    sort_rows(table.rows);
    table.aggregates = aggregate_rows(table.rows);
    return table;
}

}  // namespace

void sort_rows(std::vector<MetricRecord>& rows) {
    std::sort(rows.begin(), rows.end(), [](const MetricRecord& a, const MetricRecord& b) {
        return std::tie(a.design_id, a.replication, a.method, a.metric, a.k) <
               std::tie(b.design_id, b.replication, b.method, b.metric, b.k);
    });
}

std::vector<AggregateRecord> aggregate_rows(const std::vector<MetricRecord>& rows) {
    using Key = std::tuple<std::string, std::string, std::string, int>;
    std::map<Key, AggregateRecord> groups;
    std::map<Key, std::vector<double>> values;
    for (const MetricRecord& r : rows) {
        const Key key{r.design_id, r.method, r.metric, r.k};
        auto [it, fresh] = groups.try_emplace(key);
        if (fresh) {
            it->second.design_id = r.design_id;
            it->second.example = r.example;
            it->second.setting = r.setting;
            it->second.rho = r.rho;
            it->second.snr = r.snr;
            it->second.method = r.method;
            it->second.metric = r.metric;
            it->second.k = r.k;
        }
        values[key].push_back(r.value);
    }
    std::vector<AggregateRecord> out;
    out.reserve(groups.size());
    for (auto& [key, agg] : groups) {
        const std::vector<double>& v = values[key];
        double sum = 0.0;
        for (double x : v) sum += x;
        const double mean = sum / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        agg.n = static_cast<int>(v.size());
        agg.mean = mean;
        agg.stderr_mean =
            v.size() > 1 ? std::sqrt(ss / (static_cast<double>(v.size()) - 1.0) /
                                     static_cast<double>(v.size()))
                         : 0.0;
        out.push_back(agg);
    }
    return out;
}

ResultTable run_part1(const ExperimentConfig& input) {
    const ExperimentConfig c = resolve_config(input);
    if (c.part != "part1") throw ConfigError("run_part1 needs part = part1");

    const std::vector<SimDesign> designs = config_designs(c);
    std::vector<MaterializedDesign> mats;
    mats.reserve(designs.size());
    for (const auto& d : designs) mats.push_back(materialize(d));

    const int reps = c.replications;
    const int k_top = c.k_max;
    std::vector<std::vector<MetricRecord>> cell_rows(designs.size() * reps);

    parallel_for(cell_rows.size(), [&](std::size_t task) {
        const std::size_t di = task / reps;
        const int rep = static_cast<int>(task % reps) + 1;
        const MaterializedDesign& md = mats[di];
        const RngStream stream = replication_stream(c.base_seed, md.design.design_id, rep);

        const RawData train = draw_split(md, stream, Split::Train);
        const Dataset ds = standardize(train);
        const std::vector<int> support = make_coefficients(md.beta0).support;

        std::vector<MetricRecord>& rows = cell_rows[task];
        for (const std::string& m : c.methods) {
            RankingResult ranking = rank(rank_method_from_label(m), ds);
            MetricRecord s_row = base_record(md.design, rep, m);
            s_row.metric = "S";
            s_row.value = metric_s(ranking, support);
            rows.push_back(std::move(s_row));
            for (int k = 1; k <= k_top; ++k) {
                MetricRecord pr = base_record(md.design, rep, m);
                pr.metric = "PrK";
                pr.k = k;
                pr.value = metric_pr_k(ranking, support, k);
                rows.push_back(std::move(pr));
            }
        }
    });
    return finish_table(std::move(cell_rows));
}

FitSequence fit_sequence(const std::string& m, const Dataset& ds, const ExperimentConfig& c,
                         std::map<std::string, RankingResult>& rankings) {
    auto ranking_for = [&](const std::string& label) -> const RankingResult& {
        auto it = rankings.find(label);
        if (it == rankings.end())
            it = rankings.emplace(label, rank(rank_method_from_label(label), ds)).first;
        return it->second;
    };
    if (m == "fs") return forward_stepwise(ds, c.k_max);
    if (m == "bs") return best_subset(ds, c.k_max);
    if (m == "lasso") return lasso_path(ds, c.lasso_n_lambda, c.lasso_lambda_min_ratio);
    if (m == "rlasso")
        return relaxed_lasso_path(ds, c.lasso_n_lambda, c.lasso_lambda_min_ratio, c.n_gamma);
    if (m.rfind("ls-", 0) == 0) return fit_ls_ri(ds, ranking_for(m.substr(3)), c.k_max);
    if (m.rfind("ridge-", 0) == 0) {
        const PenaltyGrid grid = PenaltyGrid::log_spaced(c.ridge_lambda_count, c.ridge_lambda_min,
                                                         c.ridge_lambda_max);
        return fit_ridge_ri(ds, ranking_for(m.substr(6)), c.k_max, grid);
    }
    throw ConfigError("unknown selection method: " + m);
}

ResultTable run_part2(const ExperimentConfig& input) {
    const ExperimentConfig c = resolve_config(input);
    if (c.part != "part2") throw ConfigError("run_part2 needs part = part2");

    const std::vector<SimDesign> designs = config_designs(c);
    std::vector<MaterializedDesign> mats;
    mats.reserve(designs.size());
    for (const auto& d : designs) mats.push_back(materialize(d));

    const int reps = c.replications;
    std::vector<std::vector<MetricRecord>> cell_rows(designs.size() * reps);

    parallel_for(cell_rows.size(), [&](std::size_t task) {
        const std::size_t di = task / reps;
        const int rep = static_cast<int>(task % reps) + 1;
        const MaterializedDesign& md = mats[di];
        const RngStream stream = replication_stream(c.base_seed, md.design.design_id, rep);

        const RawData train = draw_split(md, stream, Split::Train);
        const RawData validation = draw_split(md, stream, Split::Validation);
        const Dataset ds = standardize(train);
        const CoefficientVector beta0 = make_coefficients(md.beta0);

        std::map<std::string, RankingResult> rankings;
        std::vector<MetricRecord>& rows = cell_rows[task];
        for (const std::string& m : c.methods) {
            const FitSequence seq = fit_sequence(m, ds, c, rankings);
            const TunedFit tuned = tune_on_validation(seq, validation, ds);

            MetricRecord f1 = base_record(md.design, rep, m);
            f1.metric = "F1";
            f1.value = metric_f1(tuned.coefficients, beta0);
            rows.push_back(std::move(f1));

            MetricRecord rte = base_record(md.design, rep, m);
            rte.metric = "RTE";
            rte.value = metric_rte(to_original_scale(tuned.coefficients, ds), beta0, md.sigma,
                                   md.design.sigma2);
            rows.push_back(std::move(rte));
        }
    });
    return finish_table(std::move(cell_rows));
}

ResultTable run_edf(const ExperimentConfig& input) {
    const ExperimentConfig c = resolve_config(input);
    if (c.part != "edf") throw ConfigError("run_edf needs part = edf");

    const SimDesign design = make_design_custom(c.edf_example, c.edf_n, c.edf_p, c.edf_s,
                                                c.edf_rho, c.edf_snr, "edf");
    const RngStream stream(c.base_seed, detail::fnv1a(design.design_id));

    EdfOptions options;
    options.n_lambda = c.lasso_n_lambda;
    options.lambda_min_ratio = c.lasso_lambda_min_ratio;
    options.bs_max_p = std::max(kBestSubsetMaxPredictors, c.edf_p);

    ResultTable table;
    for (const std::string& m : c.methods) {
        std::vector<int> sizes = c.edf_sizes;
        if (m == "bs") {
            std::vector<int> capped;
            for (int k : sizes)
                if (k <= c.edf_bs_k_max) capped.push_back(k);
            sizes = std::move(capped);
        }
        const std::vector<MetricRecord> rows =
            edf_monte_carlo(design, m, sizes, c.edf_n_draws, stream, options);
        table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    }
    sort_rows(table.rows);
    table.aggregates = aggregate_rows(table.rows);
    return table;
}

ResultTable run(const ExperimentConfig& config) {
    const ExperimentConfig c = resolve_config(config);
    if (c.part == "part1") return run_part1(c);
    if (c.part == "part2") return run_part2(c);
    return run_edf(c);
}

namespace {

std::string field_or_empty(int k) { return k < 0 ? std::string() : std::to_string(k); }

}  // namespace

std::string records_csv(const ResultTable& table) {
    std::string out = "design_id,example,setting,rho,snr,rep,method,metric,k,value\n";
    for (const MetricRecord& r : table.rows) {
        out += csv_line({r.design_id, std::to_string(r.example), r.setting, format_full(r.rho),
                         format_full(r.snr), std::to_string(r.replication), r.method, r.metric,
                         field_or_empty(r.k), format_full(r.value)});
    }
    return out;
}

std::string aggregates_csv(const ResultTable& table) {
    std::string out = "design_id,example,setting,rho,snr,method,metric,k,mean,stderr,n\n";
    for (const AggregateRecord& a : table.aggregates) {
        out += csv_line({a.design_id, std::to_string(a.example), a.setting, format_full(a.rho),
                         format_full(a.snr), a.method, a.metric, field_or_empty(a.k),
                         format_full(a.mean), format_full(a.stderr_mean), std::to_string(a.n)});
    }
    return out;
}

void emit(const ResultTable& table, const ExperimentConfig& resolved_config,
          const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_text_file(dir + "/records.csv", records_csv(table));
    write_text_file(dir + "/aggregates.csv", aggregates_csv(table));
    write_text_file(dir + "/config.json", config_to_json(resolved_config));
}

using nlohmann::json;

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["part"] = c.part;
    j["setting"] = c.setting;
    j["examples"] = c.examples;
    j["rho_list"] = c.rho_list;
    j["snr_list"] = c.snr_list;
    j["methods"] = c.methods;
    j["replications"] = c.replications;
    j["base_seed"] = c.base_seed;
    j["k_max"] = c.k_max;
    j["ridge_lambda_count"] = c.ridge_lambda_count;
    j["ridge_lambda_min"] = c.ridge_lambda_min;
    j["ridge_lambda_max"] = c.ridge_lambda_max;
    j["lasso_n_lambda"] = c.lasso_n_lambda;
    j["lasso_lambda_min_ratio"] = c.lasso_lambda_min_ratio;
    j["n_gamma"] = c.n_gamma;
    j["gd_max_p"] = c.gd_max_p;
    j["edf_n"] = c.edf_n;
    j["edf_p"] = c.edf_p;
    j["edf_s"] = c.edf_s;
    j["edf_example"] = c.edf_example;
    j["edf_rho"] = c.edf_rho;
    j["edf_snr"] = c.edf_snr;
    j["edf_n_draws"] = c.edf_n_draws;
    j["edf_sizes"] = c.edf_sizes;
    j["edf_bs_k_max"] = c.edf_bs_k_max;
    j["output_dir"] = c.output_dir;
    return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        auto get = [&j](const char* key, auto& field) {
            if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
        };
        get("part", c.part);
        get("setting", c.setting);
        get("examples", c.examples);
        get("rho_list", c.rho_list);
        get("snr_list", c.snr_list);
        get("methods", c.methods);
        get("replications", c.replications);
        get("base_seed", c.base_seed);
        get("k_max", c.k_max);
        get("ridge_lambda_count", c.ridge_lambda_count);
        get("ridge_lambda_min", c.ridge_lambda_min);
        get("ridge_lambda_max", c.ridge_lambda_max);
        get("lasso_n_lambda", c.lasso_n_lambda);
        get("lasso_lambda_min_ratio", c.lasso_lambda_min_ratio);
        get("n_gamma", c.n_gamma);
        get("gd_max_p", c.gd_max_p);
        get("edf_n", c.edf_n);
        get("edf_p", c.edf_p);
        get("edf_s", c.edf_s);
        get("edf_example", c.edf_example);
        get("edf_rho", c.edf_rho);
        get("edf_snr", c.edf_snr);
        get("edf_n_draws", c.edf_n_draws);
        get("edf_sizes", c.edf_sizes);
        get("edf_bs_k_max", c.edf_bs_k_max);
        get("output_dir", c.output_dir);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config field: ") + e.what());
    }
    return c;
}

}  // namespace riselect
