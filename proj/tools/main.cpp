#include <CLI11.hpp>

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tsr/corr.hpp"
#include "tsr/dataset.hpp"
#include "tsr/errors.hpp"
#include "tsr/modelsel.hpp"
#include "tsr/posterior.hpp"
#include "tsr/priors.hpp"
#include "tsr/rng.hpp"
#include "tsr/serialize.hpp"
#include "tsr/simharness.hpp"

namespace {

using tsr::json;

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tsr::ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw tsr::ConfigError(path + ": " + e.what());
    }
}

void require_keys(const json& j, std::initializer_list<std::string_view> allowed,
                  const std::string& where) {
    if (!j.is_object())
        throw tsr::ConfigError(where + " must be a JSON object");
    for (const auto& item : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](std::string_view k) {
                                           return k == item.key();
                                       });
        if (!known)
            throw tsr::ConfigError(where + ": unknown key \"" + item.key() +
                                   "\"");
    }
}

std::pair<double, double> bounds_from_json(const json& j,
                                           const std::string& where) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 2)
        throw tsr::ConfigError(where + " must be a [lower, upper] pair");
    return {v[0], v[1]};
}

tsr::CorrelationModel model_from_json(const json& j, const std::string& where) {
    require_keys(j, {"family", "phi", "kappa"}, where);
    tsr::CorrelationModel m{tsr::CorrFamily::matern, 2.0, 0.5};
    if (j.contains("family"))
        m.family = tsr::family_from_name(j.at("family").get<std::string>());
    if (j.contains("phi")) m.phi = j.at("phi").get<double>();
    if (j.contains("kappa")) m.kappa = j.at("kappa").get<double>();
    tsr::validate(m);
    return m;
}

tsr::PriorSpec prior_from_json(const json& j, const std::string& where) {
    if (j.is_string()) {
        const auto kind = j.get<std::string>();
        if (kind == "reference") return tsr::PriorSpec::reference();
        if (kind == "vague") return tsr::PriorSpec::vague();
        throw tsr::ConfigError(where + ": unknown prior kind \"" + kind +
                               "\" (expected reference or vague)");
    }
    require_keys(j, {"kind", "a", "nu_lower", "phi_bounds", "lambda_bounds"},
                 where);
    tsr::PriorSpec p = tsr::PriorSpec::reference();
    if (j.contains("kind")) {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "vague")
            p = tsr::PriorSpec::vague();
        else if (kind != "reference")
            throw tsr::ConfigError(where + ": unknown prior kind \"" + kind +
                                   "\" (expected reference or vague)");
    }
    if (j.contains("a")) p.a = j.at("a").get<double>();
    if (j.contains("nu_lower")) p.nu_lower = j.at("nu_lower").get<double>();
    if (j.contains("phi_bounds"))
        p.phi_bounds = bounds_from_json(j.at("phi_bounds"), where + ".phi_bounds");
    if (j.contains("lambda_bounds"))
        p.lambda_bounds =
            bounds_from_json(j.at("lambda_bounds"), where + ".lambda_bounds");
    tsr::validate(p);
    return p;
}

tsr::SamplerConfig sampler_from_json(const json& j, const std::string& where) {
    require_keys(j,
                 {"mode", "draws", "burn_in", "proposal_sd", "grid_phi",
                  "grid_nu", "phi_max", "nu_max", "adapt", "seed"},
                 where);
    tsr::SamplerConfig c;
    if (j.contains("mode")) {
        const auto mode = j.at("mode").get<std::string>();
        if (mode == "metropolis")
            c.mode = tsr::SamplerMode::metropolis;
        else if (mode == "grid")
            c.mode = tsr::SamplerMode::grid;
        else
            throw tsr::ConfigError(where + ": unknown mode \"" + mode +
                                   "\" (expected metropolis or grid)");
    }
    if (j.contains("draws")) c.draws = j.at("draws").get<int>();
    if (j.contains("burn_in")) c.burn_in = j.at("burn_in").get<int>();
    if (j.contains("proposal_sd")) {
        const auto sd = bounds_from_json(j.at("proposal_sd"), where + ".proposal_sd");
        c.proposal_sd = {sd.first, sd.second};
    }
    if (j.contains("grid_phi")) c.grid_phi = j.at("grid_phi").get<int>();
    if (j.contains("grid_nu")) c.grid_nu = j.at("grid_nu").get<int>();
    if (j.contains("phi_max")) c.phi_max = j.at("phi_max").get<double>();
    if (j.contains("nu_max")) c.nu_max = j.at("nu_max").get<double>();
    if (j.contains("adapt")) c.adapt = j.at("adapt").get<bool>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    tsr::validate(c);
    return c;
}

tsr::ScenarioConfig scenario_from_json(const json& j) {
    require_keys(j,
                 {"scenario", "side", "extent", "model", "sigma2", "nu",
                  "beta", "design", "replicates", "seed"},
                 "scenario");
    tsr::ScenarioConfig c;
    if (j.contains("scenario")) {
        switch (tsr::scenario_from_name(j.at("scenario").get<std::string>())) {
            case tsr::Scenario::s1: c = tsr::ScenarioConfig::s1(); break;
            case tsr::Scenario::s2: c = tsr::ScenarioConfig::s2(); break;
            case tsr::Scenario::custom: break;
        }
    }
    if (j.contains("side")) c.side = j.at("side").get<int>();
    if (j.contains("extent")) c.extent = j.at("extent").get<double>();
    if (j.contains("model")) c.model = model_from_json(j.at("model"), "scenario.model");
    if (j.contains("sigma2")) c.sigma2 = j.at("sigma2").get<double>();
    if (j.contains("nu")) c.nu = j.at("nu").get<double>();
    if (j.contains("beta")) {
        const auto v = j.at("beta").get<std::vector<double>>();
        c.beta = Eigen::Map<const Eigen::VectorXd>(v.data(),
                                                   static_cast<Eigen::Index>(v.size()));
    }
    if (j.contains("design"))
        c.design = tsr::design_from_name(j.at("design").get<std::string>());
    if (j.contains("replicates")) c.replicates = j.at("replicates").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    tsr::validate(c);
    return c;
}

void check_top_level(const json& cfg) {
    require_keys(cfg,
                 {"scenario", "model", "design", "prior", "priors", "sampler",
                  "selection"},
                 "config");
}

tsr::DesignKind design_from_config(const json& cfg) {
    if (!cfg.contains("design")) return tsr::DesignKind::intercept_only;
    return tsr::design_from_name(cfg.at("design").get<std::string>());
}

tsr::CorrelationModel model_from_config(const json& cfg) {
    if (!cfg.contains("model"))
        return tsr::CorrelationModel{tsr::CorrFamily::matern, 2.0, 0.5};
    return model_from_json(cfg.at("model"), "model");
}

tsr::SamplerConfig sampler_from_config(const json& cfg) {
    if (!cfg.contains("sampler")) return tsr::SamplerConfig{};
    return sampler_from_json(cfg.at("sampler"), "sampler");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw tsr::DataError("cannot open " + path + " for writing");
    f << content;
    if (!f.good()) throw tsr::DataError("failed while writing " + path);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw tsr::DataError(where + ": cannot parse number \"" + s + "\"");
    }
}

/// Header x_coord,y_coord[,covariate...]; returns coordinates and any
/// covariate columns.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> read_locations_csv(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tsr::DataError("cannot open locations file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw tsr::DataError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_line(line);
    if (header.size() < 2 || header[0] != "x_coord" || header[1] != "y_coord")
        throw tsr::DataError(path + ": header must start with x_coord,y_coord");
    const size_t ncov = header.size() - 2;

    std::vector<double> vals;
    size_t rows = 0, lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != header.size())
            throw tsr::DataError(path + ":" + std::to_string(lineno) +
                                 ": expected " + std::to_string(header.size()) +
                                 " fields, got " + std::to_string(fields.size()));
        for (const auto& f : fields)
            vals.push_back(parse_double(f, path + ":" + std::to_string(lineno)));
        ++rows;
    }
    if (rows == 0) throw tsr::DataError(path + ": no data rows");

    const auto r = static_cast<Eigen::Index>(rows);
    Eigen::MatrixXd coords(r, 2), covs(r, static_cast<Eigen::Index>(ncov));
    for (Eigen::Index i = 0; i < r; ++i) {
        const size_t base = static_cast<size_t>(i) * header.size();
        coords(i, 0) = vals[base];
        coords(i, 1) = vals[base + 1];
        for (size_t k = 0; k < ncov; ++k)
            covs(i, static_cast<Eigen::Index>(k)) = vals[base + 2 + k];
    }
    return {coords, covs};
}

/// Reads back the output of the fit subcommand: beta_1..beta_p, sigma2,
/// phi, nu, log_post.
tsr::PosteriorDraws read_draws_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tsr::DataError("cannot open draws file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw tsr::DataError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_line(line);
    size_t p = 0;
    while (p < header.size() &&
           header[p] == "beta_" + std::to_string(p + 1))
        ++p;
    const std::vector<std::string> tail = {"sigma2", "phi", "nu", "log_post"};
    if (p == 0 || header.size() != p + tail.size() ||
        !std::equal(tail.begin(), tail.end(), header.begin() + p))
        throw tsr::DataError(path +
                             ": header must be beta_1..beta_p,sigma2,phi,nu,"
                             "log_post");

    std::vector<std::vector<double>> rows;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != header.size())
            throw tsr::DataError(path + ":" + std::to_string(lineno) +
                                 ": expected " + std::to_string(header.size()) +
                                 " fields, got " + std::to_string(fields.size()));
        std::vector<double> row;
        for (const auto& f : fields)
            row.push_back(parse_double(f, path + ":" + std::to_string(lineno)));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw tsr::DataError(path + ": no draws");

    tsr::PosteriorDraws d;
    const auto m = static_cast<Eigen::Index>(rows.size());
    d.beta.resize(m, static_cast<Eigen::Index>(p));
    d.sigma2.resize(m);
    d.phi.resize(m);
    d.nu.resize(m);
    d.log_post.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& row = rows[static_cast<size_t>(i)];
        for (size_t k = 0; k < p; ++k)
            d.beta(i, static_cast<Eigen::Index>(k)) = row[k];
        d.sigma2[i] = row[p];
        d.phi[i] = row[p + 1];
        d.nu[i] = row[p + 2];
        d.log_post[i] = row[p + 3];
    }
    return d;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void cmd_simulate(const std::string& config_path, const std::string& out,
                  int replicate) {
    const json cfg = load_config(config_path);
    check_top_level(cfg);
    if (!cfg.contains("scenario"))
        throw tsr::ConfigError("config needs a \"scenario\" section");
    const tsr::ScenarioConfig sc = scenario_from_json(cfg.at("scenario"));
    const tsr::SpatialDataset d = tsr::generate_tsr(sc, replicate);
    tsr::write_dataset_csv(out, d.coords, d.y);

    const std::string digest = tsr::config_digest(tsr::to_json(sc));
    json meta;
    meta["command"] = "simulate";
    meta["config_digest"] = digest;
    meta["master_seed"] = sc.seed;
    meta["replicate"] = replicate;
    meta["data_seed"] =
        tsr::derive_seed(sc.seed, static_cast<std::uint64_t>(replicate));
    meta["n"] = d.n();
    meta["scenario"] = tsr::to_json(sc);
    write_text_file(out + ".meta.json", meta.dump(2) + "\n");
    std::cout << "wrote " << out << " (n = " << d.n() << ", replicate "
              << replicate << ", digest " << digest << ", seed " << sc.seed
              << ")\n";
}

void cmd_fit(const std::string& config_path, const std::string& data_path,
             const std::string& out_draws, const std::string& out_summary) {
    const json cfg = load_config(config_path);
    check_top_level(cfg);
    const tsr::DesignKind design = design_from_config(cfg);
    const tsr::CorrelationModel model = model_from_config(cfg);
    const tsr::PriorSpec prior = cfg.contains("prior")
                                     ? prior_from_json(cfg.at("prior"), "prior")
                                     : tsr::PriorSpec::reference();
    const tsr::SamplerConfig sampler = sampler_from_config(cfg);

    tsr::SpatialDataset data = tsr::read_dataset_csv(data_path, design);
    tsr::validate(data);
    const tsr::PosteriorDraws draws =
        tsr::sample_posterior(data, model, prior, sampler);
    tsr::write_draws_csv(draws, out_draws);
    write_text_file(out_summary, tsr::draws_summary_json(draws));
    print_warnings(draws.warnings);
    std::cout << "wrote " << out_draws << " and " << out_summary << " ("
              << draws.size() << " draws, acceptance rate "
              << draws.acceptance_rate << ", digest " << draws.config_digest
              << ", seed " << draws.seed << ")\n";
}

void cmd_predict(const std::string& config_path, const std::string& data_path,
                 const std::string& draws_path,
                 const std::string& locations_path, const std::string& out,
                 double level, std::uint64_t seed) {
    const json cfg = load_config(config_path);
    check_top_level(cfg);
    const tsr::DesignKind design = design_from_config(cfg);
    const tsr::CorrelationModel model = model_from_config(cfg);

    tsr::SpatialDataset data = tsr::read_dataset_csv(data_path, design);
    tsr::validate(data);
    const tsr::PosteriorDraws draws = read_draws_csv(draws_path);
    const auto [new_coords, new_covs] = read_locations_csv(locations_path);
    const Eigen::MatrixXd new_X =
        tsr::build_design(new_coords, design, new_covs);
    if (new_X.cols() != draws.beta.cols())
        throw tsr::ConfigError(
            "draws have " + std::to_string(draws.beta.cols()) +
            " beta columns but the design produces " +
            std::to_string(new_X.cols()));

    const tsr::PredictionSummary ps =
        tsr::predict(draws, data, model, new_coords, new_X, level, seed);

    std::ostringstream os;
    os << "x_coord,y_coord,mean,lower,upper\n";
    char buf[32];
    const auto put = [&](double x, char sep) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        os << buf << sep;
    };
    for (Eigen::Index i = 0; i < ps.mean.size(); ++i) {
        put(ps.coords(i, 0), ',');
        put(ps.coords(i, 1), ',');
        put(ps.mean[i], ',');
        put(ps.lower[i], ',');
        put(ps.upper[i], '\n');
    }
    write_text_file(out, os.str());

    json meta;
    meta["command"] = "predict";
    meta["model"] = tsr::to_json(model);
    meta["design"] = tsr::design_name(design);
    meta["level"] = level;
    meta["seed"] = seed;
    meta["locations"] = ps.mean.size();
    meta["draws"] = draws.size();
    const std::string digest = tsr::config_digest(meta);
    meta["config_digest"] = digest;
    write_text_file(out + ".meta.json", meta.dump(2) + "\n");
    std::cout << "wrote " << out << " (" << ps.mean.size()
              << " locations, level " << level << ", digest " << digest
              << ", seed " << seed << ")\n";
}

void cmd_select(const std::string& config_path, const std::string& data_path,
                const std::string& holdout_path, const std::string& out,
                bool quiet) {
    const json cfg = load_config(config_path);
    check_top_level(cfg);
    if (!cfg.contains("selection"))
        throw tsr::ConfigError("config needs a \"selection\" section");
    const json& sel = cfg.at("selection");
    require_keys(sel, {"candidates", "phi_max", "nu_max", "rel_tol"},
                 "selection");
    if (!sel.contains("candidates"))
        throw tsr::ConfigError("selection needs a \"candidates\" array");

    std::vector<tsr::ModelCandidate> candidates;
    for (const json& jc : sel.at("candidates")) {
        require_keys(jc, {"label", "model", "prior", "design"},
                     "selection.candidates[]");
        tsr::ModelCandidate c;
        if (!jc.contains("label") || !jc.contains("model"))
            throw tsr::ConfigError(
                "each candidate needs \"label\" and \"model\"");
        c.label = jc.at("label").get<std::string>();
        c.model = model_from_json(jc.at("model"), "candidate model");
        if (jc.contains("prior"))
            c.prior = prior_from_json(jc.at("prior"), "candidate prior");
        if (jc.contains("design"))
            c.design = tsr::design_from_name(jc.at("design").get<std::string>());
        candidates.push_back(std::move(c));
    }

    tsr::MarginalOptions opts;
    if (sel.contains("phi_max")) opts.phi_max = sel.at("phi_max").get<double>();
    if (sel.contains("nu_max")) opts.nu_max = sel.at("nu_max").get<double>();
    if (sel.contains("rel_tol")) opts.rel_tol = sel.at("rel_tol").get<double>();
    tsr::validate(opts);
    const tsr::SamplerConfig sampler = sampler_from_config(cfg);

    tsr::SpatialDataset data =
        tsr::read_dataset_csv(data_path, tsr::DesignKind::intercept_only);
    Eigen::MatrixXd holdout_coords(0, 2);
    Eigen::VectorXd holdout_y(0);
    if (!holdout_path.empty()) {
        const tsr::SpatialDataset h =
            tsr::read_dataset_csv(holdout_path, tsr::DesignKind::intercept_only);
        holdout_coords = h.coords;
        holdout_y = h.y;
    }

    const tsr::ComparisonReport report = tsr::compare_models(
        candidates, data, opts, holdout_coords, holdout_y, sampler);

    json meta;
    json jcand = json::array();
    for (const tsr::ModelCandidate& c : candidates) {
        json j;
        j["label"] = c.label;
        j["model"] = tsr::to_json(c.model);
        j["prior"] = tsr::to_json(c.prior);
        j["design"] = tsr::design_name(c.design);
        jcand.push_back(j);
    }
    meta["candidates"] = jcand;
    meta["phi_max"] = opts.phi_max;
    meta["nu_max"] = opts.nu_max;
    meta["rel_tol"] = opts.rel_tol;
    meta["sampler"] = tsr::to_json(sampler);
    const std::string digest = tsr::config_digest(meta);

    json j = json::parse(tsr::comparison_json(report));
    j["config_digest"] = digest;
    j["seed"] = sampler.seed;
    write_text_file(out, j.dump(2) + "\n");
    if (!quiet) std::cout << tsr::comparison_text(report);
    std::cout << "wrote " << out << " (digest " << digest << ", seed "
              << sampler.seed << ")\n";
}

void cmd_study(const std::string& config_path, const std::string& out_report,
               const std::string& out_table) {
    const json cfg = load_config(config_path);
    check_top_level(cfg);
    if (!cfg.contains("scenario"))
        throw tsr::ConfigError("config needs a \"scenario\" section");
    const tsr::ScenarioConfig sc = scenario_from_json(cfg.at("scenario"));
    std::vector<tsr::PriorSpec> priors;
    if (cfg.contains("priors")) {
        for (const json& jp : cfg.at("priors"))
            priors.push_back(prior_from_json(jp, "priors[]"));
    } else {
        priors = {tsr::PriorSpec::reference(), tsr::PriorSpec::vague()};
    }
    const tsr::SamplerConfig sampler = sampler_from_config(cfg);

    const tsr::StudyReport report = tsr::run_mc_study(sc, priors, sampler);
    write_text_file(out_report, tsr::study_report_json(report));
    write_text_file(out_table, tsr::study_report_text(report));
    std::cout << "wrote " << out_report << " and " << out_table << " ("
              << sc.replicates << " replicates, digest "
              << report.config_digest << ", master seed " << sc.seed << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "objective Bayes for spatial regression with Student-t errors: "
        "simulation, fitting, prediction, model selection, coverage studies"};
    app.require_subcommand(1);

    std::string config_path, data_path, draws_path, locations_path;
    std::string holdout_path, out_path, out_draws, out_summary, out_table;
    int replicate = 0;
    double level = 0.95;
    std::uint64_t seed = 1;
    bool quiet = false;

    auto* sim = app.add_subcommand("simulate",
                                   "generate a dataset CSV from a scenario");
    sim->add_option("--config", config_path, "JSON config with a scenario section")
        ->required()
        ->check(CLI::ExistingFile);
    sim->add_option("--out", out_path, "output dataset CSV")->required();
    sim->add_option("--replicate", replicate, "replicate index (default 0)");
    sim->callback([&] { cmd_simulate(config_path, out_path, replicate); });

    auto* fit = app.add_subcommand("fit", "sample the posterior on a dataset");
    fit->add_option("--config", config_path, "JSON config (model/prior/sampler)")
        ->required()
        ->check(CLI::ExistingFile);
    fit->add_option("--data", data_path, "dataset CSV")
        ->required()
        ->check(CLI::ExistingFile);
    fit->add_option("--out-draws", out_draws, "output draws CSV")->required();
    fit->add_option("--out-summary", out_summary, "output summary JSON")
        ->required();
    fit->callback(
        [&] { cmd_fit(config_path, data_path, out_draws, out_summary); });

    auto* pred = app.add_subcommand("predict",
                                    "predict at new locations from fit output");
    pred->add_option("--config", config_path, "JSON config (model/design)")
        ->required()
        ->check(CLI::ExistingFile);
    pred->add_option("--data", data_path, "dataset CSV used for the fit")
        ->required()
        ->check(CLI::ExistingFile);
    pred->add_option("--draws", draws_path, "draws CSV from fit")
        ->required()
        ->check(CLI::ExistingFile);
    pred->add_option("--locations", locations_path,
                     "new locations CSV (x_coord,y_coord[,covariates])")
        ->required()
        ->check(CLI::ExistingFile);
    pred->add_option("--out", out_path, "output predictions CSV")->required();
    pred->add_option("--level", level, "interval level (default 0.95)");
    pred->add_option("--seed", seed, "predictive draw seed (default 1)");
    pred->callback([&] {
        cmd_predict(config_path, data_path, draws_path, locations_path,
                    out_path, level, seed);
    });

    auto* sel = app.add_subcommand("select",
                                   "compare correlation models on a dataset");
    sel->add_option("--config", config_path, "JSON config with a selection section")
        ->required()
        ->check(CLI::ExistingFile);
    sel->add_option("--data", data_path, "dataset CSV")
        ->required()
        ->check(CLI::ExistingFile);
    sel->add_option("--holdout", holdout_path,
                    "holdout dataset CSV for MSPE scoring")
        ->check(CLI::ExistingFile);
    sel->add_option("--out", out_path, "output report JSON")->required();
    sel->add_flag("--quiet", quiet, "suppress the comparison table on stdout");
    sel->callback([&] {
        cmd_select(config_path, data_path, holdout_path, out_path, quiet);
    });

    auto* study = app.add_subcommand(
        "study", "run a Monte Carlo coverage study from a scenario config");
    study->add_option("--config", config_path, "JSON config with a scenario section")
        ->required()
        ->check(CLI::ExistingFile);
    study->add_option("--out-report", out_path, "output report JSON")
        ->required();
    study->add_option("--out-table", out_table, "output human-readable table")
        ->required();
    study->callback([&] { cmd_study(config_path, out_path, out_table); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
