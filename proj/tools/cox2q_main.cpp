#include "cox2q/approx.hpp"
#include "cox2q/mmc.hpp"
#include "cox2q/reproduce.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

struct DistArgs {
    std::optional<std::string> dist_path;
    std::optional<std::string> family;
    std::optional<double> cv;
    std::optional<double> mean;
    std::optional<double> mu1;
};

struct LoadArgs {
    std::optional<double> rho;
    std::optional<double> lambda;
    int servers = 1;
};

struct ResolvedDist {
    cox2q::Cox2Params params;
    std::string family_label;   // I, II, III or custom
    std::optional<double> cv_label;
};

// Exactly one source: --dist file, catalog --family/--cv, or a --mean/--cv/--mu1 fit.
ResolvedDist resolve_dist(const DistArgs& a) {
    const bool from_file = a.dist_path.has_value();
    const bool from_catalog = a.family.has_value();
    const bool from_fit = a.mean.has_value() || a.mu1.has_value();
    if (from_file + from_catalog + from_fit != 1) {
        throw cox2q::UsageError(
            "pick exactly one distribution source: --dist <file>, "
            "--family <I|II|III> --cv <v>, or --mean --cv --mu1");
    }
    ResolvedDist out;
    if (from_file) {
        out.params = cox2q::service_law_from_file(*a.dist_path);
        out.family_label = "custom";
        out.cv_label = cox2q::moments_from_params(out.params).cv;
    } else if (from_catalog) {
        if (!a.cv) throw cox2q::UsageError("--family requires --cv");
        out.params = cox2q::dist_catalog(cox2q::parse_family(*a.family), *a.cv);
        out.family_label = *a.family;
        out.cv_label = *a.cv;
    } else {
        if (!a.mean || !a.cv || !a.mu1) {
            throw cox2q::UsageError("a moment fit needs --mean, --cv and --mu1");
        }
        out.params = cox2q::fit_from_moments(*a.mean, *a.cv, *a.mu1);
        out.family_label = "custom";
        out.cv_label = *a.cv;
    }
    return out;
}

cox2q::ModelSpec resolve_model(const ResolvedDist& dist, const LoadArgs& load) {
    if (load.rho.has_value() == load.lambda.has_value()) {
        throw cox2q::UsageError("pass exactly one of --rho or --lambda");
    }
    cox2q::ModelSpec model;
    model.service = dist.params;
    model.c = load.servers;
    const double mean = cox2q::moments_from_params(dist.params).m;
    model.lambda = load.rho ? load.servers * *load.rho / mean : *load.lambda;
    return model;
}

std::string scenario_id(const std::string& verb, const ResolvedDist& dist,
                        const cox2q::ModelSpec& model) {
    std::string id = "cli:" + verb + ":" + dist.family_label;
    if (dist.cv_label) id += ":cv" + cox2q::format_number(*dist.cv_label);
    id += ":c" + std::to_string(model.c);
    id += ":rho" + cox2q::format_number(model.utilization());
    return id;
}

cox2q::ScenarioRow base_row(const std::string& verb, const ResolvedDist& dist,
                            const cox2q::ModelSpec& model) {
    cox2q::ScenarioRow row;
    row.scenario_id = scenario_id(verb, dist, model);
    row.family = dist.family_label;
    row.cv = dist.cv_label;
    row.c = model.c;
    row.rho = model.utilization();
    row.lambda = model.lambda;
    return row;
}

void write_rows(const std::string& path, const std::vector<cox2q::ScenarioRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cox2q::UsageError("cannot open output file '" + path + "'");
    cox2q::write_csv(out, rows);
    if (!out) throw cox2q::UsageError("failed writing output file '" + path + "'");
}

json rows_to_json(const std::vector<cox2q::ScenarioRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json o;
        o["scenario_id"] = r.scenario_id;
        o["family"] = r.family;
        if (r.cv) o["cv"] = *r.cv;
        if (r.c) o["c"] = *r.c;
        if (r.rho) o["rho"] = *r.rho;
        if (r.lambda) o["lambda"] = *r.lambda;
        o["method"] = r.method;
        o["metric"] = r.metric;
        o["value"] = r.value;
        if (r.ci_half_width) o["ci_half_width"] = *r.ci_half_width;
        if (r.seed) o["seed"] = *r.seed;
        arr.push_back(std::move(o));
    }
    return arr;
}

void emit_rows(const std::vector<cox2q::ScenarioRow>& rows,
               const std::string& out_path, bool as_json) {
    if (!out_path.empty()) {
        write_rows(out_path, rows);
        return;
    }
    if (as_json) {
        std::cout << rows_to_json(rows).dump(2) << "\n";
    } else {
        cox2q::write_csv(std::cout, rows);
    }
}

int run_fit(const DistArgs& dist_args) {
    const ResolvedDist dist = resolve_dist(dist_args);
    std::cout << cox2q::service_law_to_json(dist.params) << "\n";
    return 0;
}

int run_exact(const DistArgs& dist_args, const LoadArgs& load,
              const std::string& out_path) {
    const ResolvedDist dist = resolve_dist(dist_args);
    const cox2q::ModelSpec model = resolve_model(dist, load);
    const cox2q::StationarySolution sol = cox2q::stationary(model);
    const cox2q::PerfMeasures m = cox2q::measures(model, sol);

    json doc;
    doc["lambda"] = model.lambda;
    doc["servers"] = model.c;
    doc["service"] = json::parse(cox2q::service_law_to_json(model.service));
    doc["rho"] = m.rho;
    doc["pi_wait"] = m.pi_wait;
    doc["eq"] = m.eq;
    doc["eqw"] = m.eqw;
    doc["ew"] = m.ew;
    doc["min_tr"] = m.min_tr;
    std::cout << doc.dump(2) << "\n";

    if (!out_path.empty()) {
        std::vector<cox2q::ScenarioRow> rows;
        const cox2q::ScenarioRow shape = base_row("exact", dist, model);
        for (auto [metric, value] :
             {std::pair<const char*, double>{"pi_wait", m.pi_wait},
              {"ew", m.ew},
              {"eq", m.eq},
              {"min_tr", m.min_tr}}) {
            cox2q::ScenarioRow row = shape;
            row.method = "exact";
            row.metric = metric;
            row.value = value;
            rows.push_back(std::move(row));
        }
        write_rows(out_path, rows);
    }
    return 0;
}

int run_sim(const DistArgs& dist_args, const LoadArgs& load,
            const cox2q::SimConfig& cfg, const std::string& out_path) {
    const ResolvedDist dist = resolve_dist(dist_args);
    const cox2q::ModelSpec model = resolve_model(dist, load);
    const cox2q::SimEstimates est = cox2q::estimate(model, cfg);

    auto metric_json = [](const cox2q::MetricEstimate& m) {
        json o;
        o["point"] = m.point;
        o["ci_half_width"] = m.half_width;
        o["replications"] = m.replications;
        return o;
    };
    json doc;
    doc["lambda"] = model.lambda;
    doc["servers"] = model.c;
    doc["service"] = json::parse(cox2q::service_law_to_json(model.service));
    doc["rho"] = model.utilization();
    doc["master_seed"] = cfg.master_seed;
    doc["arrivals_per_rep"] = cfg.arrivals_per_rep;
    doc["warmup_arrivals"] = cfg.warmup_arrivals;
    doc["pi_wait"] = metric_json(est.pi_wait);
    doc["ew"] = metric_json(est.ew);
    doc["eq"] = metric_json(est.eq);
    doc["min_tr"] = metric_json(est.min_tr);
    doc["seeds"] = est.seeds;
    std::cout << doc.dump(2) << "\n";

    if (!out_path.empty()) {
        std::vector<cox2q::ScenarioRow> rows;
        const cox2q::ScenarioRow shape = base_row("sim", dist, model);
        for (auto [metric, m] :
             {std::pair<const char*, const cox2q::MetricEstimate*>{"pi_wait", &est.pi_wait},
              {"ew", &est.ew},
              {"eq", &est.eq},
              {"min_tr", &est.min_tr}}) {
            cox2q::ScenarioRow row = shape;
            row.method = "sim";
            row.metric = metric;
            row.value = m->point;
            row.ci_half_width = m->half_width;
            row.seed = cfg.master_seed;
            rows.push_back(std::move(row));
        }
        write_rows(out_path, rows);
    }
    return 0;
}

int run_approx(const DistArgs& dist_args, const LoadArgs& load,
               const std::string& out_path) {
    const ResolvedDist dist = resolve_dist(dist_args);
    const cox2q::ModelSpec model = resolve_model(dist, load);
    const cox2q::ApproxBundle b = cox2q::classic_bundle(model);

    json doc;
    doc["lambda"] = model.lambda;
    doc["servers"] = model.c;
    doc["service"] = json::parse(cox2q::service_law_to_json(model.service));
    doc["rho"] = b.rho;
    doc["pi_wait"] = b.pi_wait;
    doc["min_tr"] = b.min_tr;
    doc["ew"] = b.ew;
    doc["eq"] = b.eq;
    std::cout << doc.dump(2) << "\n";

    if (!out_path.empty()) {
        std::vector<cox2q::ScenarioRow> rows;
        const cox2q::ScenarioRow shape = base_row("approx", dist, model);
        auto push = [&](const char* method, const char* metric, double value) {
            cox2q::ScenarioRow row = shape;
            row.method = method;
            row.metric = metric;
            row.value = value;
            rows.push_back(std::move(row));
        };
        push("erlang_c", "pi_wait", b.pi_wait);
        push("approx_eq2", "min_tr", b.min_tr);
        push("classic", "ew", b.ew);
        push("classic", "eq", b.eq);
        write_rows(out_path, rows);
    }
    return 0;
}

int run_catalog(const DistArgs& dist_args, const std::string& out_path,
                bool as_json) {
    if (dist_args.family) {
        if (!dist_args.cv) throw cox2q::UsageError("--family requires --cv");
        const cox2q::Cox2Params p =
            cox2q::dist_catalog(cox2q::parse_family(*dist_args.family), *dist_args.cv);
        std::cout << cox2q::service_law_to_json(p) << "\n";
        return 0;
    }
    std::vector<cox2q::ScenarioRow> rows;
    for (auto id : {cox2q::FigureId::t1, cox2q::FigureId::t2, cox2q::FigureId::t3}) {
        cox2q::ReproduceOptions opts;
        opts.with_sim = false;
        auto part = cox2q::reproduce(id, opts);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    emit_rows(rows, out_path, as_json);
    return 0;
}

int run_reproduce(const std::string& figure, const cox2q::SimConfig& cfg,
                  const std::string& out_path, bool as_json) {
    const cox2q::FigureId id = cox2q::parse_figure(figure);
    cox2q::ReproduceOptions opts;
    opts.sim = cfg;
    const std::vector<cox2q::ScenarioRow> rows = cox2q::reproduce(id, opts);
    emit_rows(rows, out_path, as_json);

    std::cerr << "quoted-value summary (exact solver):\n";
    for (const cox2q::QuotedCheck& check : cox2q::quoted_value_checks()) {
        std::cerr << "  [" << (check.pass ? "pass" : "FAIL") << "] " << check.name
                  << ": " << cox2q::format_number(check.observed) << " (expected "
                  << check.expectation << ")\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"M/Cox2/c queue: exact QBD solver, simulator and classical approximations"};
    app.require_subcommand(1);

    DistArgs dist_args;
    LoadArgs load;
    cox2q::SimConfig sim_cfg;
    std::string out_path;
    std::string figure;
    bool as_json = false;

    auto add_dist_flags = [&](CLI::App* cmd) {
        cmd->add_option("--dist", dist_args.dist_path,
                        "service-law JSON file {\"mu1\",\"mu2\",\"q1_exit\"}");
        cmd->add_option("--family", dist_args.family, "catalog family: I, II or III");
        cmd->add_option("--cv", dist_args.cv, "coefficient of variation");
        cmd->add_option("--mean", dist_args.mean, "mean service time for a moment fit");
        cmd->add_option("--mu1", dist_args.mu1, "stage-1 rate for a moment fit");
    };
    auto add_load_flags = [&](CLI::App* cmd) {
        cmd->add_option("--rho", load.rho, "target utilization (lambda derived as c*rho/m)");
        cmd->add_option("--lambda", load.lambda, "arrival rate (alternative to --rho)");
        cmd->add_option("--servers", load.servers, "number of servers")->required();
    };
    auto add_sim_flags = [&](CLI::App* cmd) {
        cmd->add_option("--reps", sim_cfg.replications, "independent replications");
        cmd->add_option("--arrivals", sim_cfg.arrivals_per_rep,
                        "post-warmup arrivals per replication");
        cmd->add_option("--warmup", sim_cfg.warmup_arrivals,
                        "warmup arrivals discarded per replication");
        cmd->add_option("--seed", sim_cfg.master_seed, "master seed");
    };

    CLI::App* fit = app.add_subcommand("fit", "fit a Cox-2 law to mean and cv");
    add_dist_flags(fit);

    CLI::App* exact = app.add_subcommand("exact", "exact stationary measures");
    add_dist_flags(exact);
    add_load_flags(exact);
    exact->add_option("--out", out_path, "write CSV rows to this file");

    CLI::App* sim = app.add_subcommand("sim", "simulation estimates with 95% CIs");
    add_dist_flags(sim);
    add_load_flags(sim);
    add_sim_flags(sim);
    sim->add_option("--out", out_path, "write CSV rows to this file");

    CLI::App* approx = app.add_subcommand("approx", "classical approximations");
    add_dist_flags(approx);
    add_load_flags(approx);
    approx->add_option("--out", out_path, "write CSV rows to this file");

    CLI::App* reproduce = app.add_subcommand("reproduce", "regenerate a figure or table");
    reproduce->add_option("--figure", figure, "2..9, t1, t2 or t3")->required();
    add_sim_flags(reproduce);
    reproduce->add_option("--out", out_path, "write CSV rows to this file");
    reproduce->add_flag("--json", as_json, "emit rows as JSON instead of CSV");

    CLI::App* catalog = app.add_subcommand("catalog", "study distributions");
    catalog->add_option("--family", dist_args.family, "catalog family: I, II or III");
    catalog->add_option("--cv", dist_args.cv, "coefficient of variation");
    catalog->add_option("--out", out_path, "write CSV rows to this file");
    catalog->add_flag("--json", as_json, "emit rows as JSON instead of CSV");

    try {
        app.parse(argc, argv);
        if (fit->parsed()) return run_fit(dist_args);
        if (exact->parsed()) return run_exact(dist_args, load, out_path);
        if (sim->parsed()) return run_sim(dist_args, load, sim_cfg, out_path);
        if (approx->parsed()) return run_approx(dist_args, load, out_path);
        if (reproduce->parsed()) return run_reproduce(figure, sim_cfg, out_path, as_json);
        if (catalog->parsed()) return run_catalog(dist_args, out_path, as_json);
        throw cox2q::UsageError("no subcommand given");
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error[usage]: " << e.what() << "\n";
        return 2;
    } catch (const cox2q::UsageError& e) {
        std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
        return 2;
    } catch (const cox2q::Error& e) {
        std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 1;
    }
}
