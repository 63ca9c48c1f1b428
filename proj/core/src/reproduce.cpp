#include "cox2q/reproduce.hpp"

#include "cox2q/approx.hpp"
#include "cox2q/mmc.hpp"
#include "cox2q/random.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace cox2q {

namespace {

constexpr std::array<DistFamily, 3> kFamilies = {DistFamily::I, DistFamily::II,
                                                 DistFamily::III};
constexpr std::array<double, 9> kLoadGrid = {0.1, 0.2, 0.3, 0.4, 0.5,
                                             0.6, 0.7, 0.8, 0.9};

ModelSpec catalog_model(DistFamily family, double cv, int c, double rho) {
    ModelSpec m;
    m.service = dist_catalog(family, cv);
    m.c = c;
    m.lambda = c * rho / moments_from_params(m.service).m;
    return m;
}

std::string point_id(FigureId id, const std::string& family, double cv, int c,
                     double rho) {
    return figure_name(id) + ":" + family + ":cv" + format_number(cv) + ":c" +
           std::to_string(c) + ":rho" + format_number(rho);
}

// Emits the exact / simulated / approximation rows of one figure point for
// one metric. Simulated rows get a per-point master seed derived from the
// run's master seed so points are independent yet reproducible.
class Emitter {
public:
    Emitter(FigureId id, const ReproduceOptions& opts) : id_(id), opts_(opts) {}

    std::vector<ScenarioRow> take() { return std::move(rows_); }

    ScenarioRow base(DistFamily family, double cv, int c, double rho) const {
        ScenarioRow row;
        row.scenario_id = point_id(id_, family_name(family), cv, c, rho);
        row.family = family_name(family);
        row.cv = cv;
        row.c = c;
        row.rho = rho;
        row.lambda = catalog_model(family, cv, c, rho).lambda;
        return row;
    }

    void add(ScenarioRow row, const std::string& method, const std::string& metric,
             double value) {
        row.method = method;
        row.metric = metric;
        row.value = value;
        rows_.push_back(std::move(row));
    }

    void add_sim(const ScenarioRow& shape, const ModelSpec& model,
                 const std::string& metric) {
        if (!opts_.with_sim) return;
        SimConfig cfg = opts_.sim;
        cfg.master_seed = split_seed(opts_.sim.master_seed, sim_point_++);
        const SimEstimates est = estimate(model, cfg, opts_.max_threads);
        const MetricEstimate* m = nullptr;
        if (metric == "pi_wait") m = &est.pi_wait;
        else if (metric == "ew") m = &est.ew;
        else if (metric == "eq") m = &est.eq;
        else m = &est.min_tr;

        ScenarioRow row = shape;
        row.method = "sim";
        row.metric = metric;
        row.value = m->point;
        row.ci_half_width = m->half_width;
        row.seed = cfg.master_seed;
        rows_.push_back(std::move(row));
    }

private:
    FigureId id_;
    const ReproduceOptions& opts_;
    std::uint64_t sim_point_ = 0;
    std::vector<ScenarioRow> rows_;
};

// Figures 2-6 study the exact minimum residual next to its two-moment value.
void min_residual_point(Emitter& em, DistFamily family, double cv, int c,
                        double rho) {
    const ModelSpec model = catalog_model(family, cv, c, rho);
    const PerfMeasures exact = measures(model, stationary(model));
    const ServiceMoments mom = moments_from_params(model.service);
    const ScenarioRow shape = em.base(family, cv, c, rho);

    em.add(shape, "exact", "min_tr", exact.min_tr);
    em.add(shape, "approx_eq2", "min_tr",
           min_residual_two_moment(mom.m, mom.cv, c));
    em.add_sim(shape, model, "min_tr");
}

// Figures 7-8 add the signed relative error, reported in percent.
void min_residual_error_point(Emitter& em, DistFamily family, double cv, int c,
                              double rho) {
    const ModelSpec model = catalog_model(family, cv, c, rho);
    const PerfMeasures exact = measures(model, stationary(model));
    const ServiceMoments mom = moments_from_params(model.service);
    const double approx = min_residual_two_moment(mom.m, mom.cv, c);
    const ScenarioRow shape = em.base(family, cv, c, rho);

    em.add(shape, "exact", "min_tr", exact.min_tr);
    em.add(shape, "approx_eq2", "min_tr", approx);
    em.add(shape, "approx_eq2", "rel_err",
           100.0 * relative_error(approx, exact.min_tr));
    em.add_sim(shape, model, "min_tr");
}

// Figure 9 studies the Erlang-C stand-in for the waiting probability.
void wait_probability_point(Emitter& em, DistFamily family, double cv, int c,
                            double rho) {
    const ModelSpec model = catalog_model(family, cv, c, rho);
    const PerfMeasures exact = measures(model, stationary(model));
    const ServiceMoments mom = moments_from_params(model.service);
    const double substitute = erlang_c(c, model.lambda * mom.m);
    const ScenarioRow shape = em.base(family, cv, c, rho);

    em.add(shape, "exact", "pi_wait", exact.pi_wait);
    em.add(shape, "erlang_c", "pi_wait", substitute);
    em.add(shape, "erlang_c", "rel_err",
           100.0 * relative_error(substitute, exact.pi_wait));
    em.add_sim(shape, model, "pi_wait");
}

std::vector<ScenarioRow> table_rows(FigureId id, DistFamily family) {
    std::vector<ScenarioRow> rows;
    for (double cv : kCatalogCv) {
        const Cox2Params params = dist_catalog(family, cv);
        const ServiceMoments mom = moments_from_params(params);
        ScenarioRow row;
        row.scenario_id = figure_name(id) + ":cv" + format_number(cv);
        row.family = family_name(family);
        row.cv = cv;
        row.method = "exact";
        auto push = [&](const std::string& metric, double value) {
            ScenarioRow r = row;
            r.metric = metric;
            r.value = value;
            rows.push_back(std::move(r));
        };
        push("mu2", params.mu2);
        push("q1_exit", params.q1_exit());
        push("skewness", mom.skewness);
        push("ex_kurtosis", mom.ex_kurtosis);
    }
    return rows;
}

double exact_min_tr(DistFamily family, double cv, int c, double rho) {
    const ModelSpec model = catalog_model(family, cv, c, rho);
    return measures(model, stationary(model)).min_tr;
}

double two_moment_error_pct(DistFamily family, double cv, int c, double rho) {
    const double approx = min_residual_two_moment(1.0, cv, c);
    return 100.0 * relative_error(approx, exact_min_tr(family, cv, c, rho));
}

}  // namespace

std::string figure_name(FigureId id) {
    switch (id) {
        case FigureId::fig2: return "fig2";
        case FigureId::fig3: return "fig3";
        case FigureId::fig4: return "fig4";
        case FigureId::fig5: return "fig5";
        case FigureId::fig6: return "fig6";
        case FigureId::fig7: return "fig7";
        case FigureId::fig8: return "fig8";
        case FigureId::fig9: return "fig9";
        case FigureId::t1: return "t1";
        case FigureId::t2: return "t2";
        case FigureId::t3: return "t3";
    }
    throw UsageError("unknown figure id");
}

FigureId parse_figure(const std::string& text) {
    std::string t = text;
    if (t.rfind("fig", 0) == 0) t = t.substr(3);
    if (t == "2") return FigureId::fig2;
    if (t == "3") return FigureId::fig3;
    if (t == "4") return FigureId::fig4;
    if (t == "5") return FigureId::fig5;
    if (t == "6") return FigureId::fig6;
    if (t == "7") return FigureId::fig7;
    if (t == "8") return FigureId::fig8;
    if (t == "9") return FigureId::fig9;
    if (t == "t1") return FigureId::t1;
    if (t == "t2") return FigureId::t2;
    if (t == "t3") return FigureId::t3;
    throw UsageError("unknown figure id '" + text +
                     "' (valid: 2, 3, 4, 5, 6, 7, 8, 9, t1, t2, t3)");
}

std::vector<FigureId> all_figures() {
    return {FigureId::fig2, FigureId::fig3, FigureId::fig4, FigureId::fig5,
            FigureId::fig6, FigureId::fig7, FigureId::fig8, FigureId::fig9,
            FigureId::t1,   FigureId::t2,   FigureId::t3};
}

std::vector<ScenarioRow> reproduce(FigureId id, const ReproduceOptions& opts) {
    Emitter em(id, opts);
    switch (id) {
        case FigureId::fig2:
            for (double cv : kCatalogCv) {
                min_residual_point(em, DistFamily::I, cv, 4, 0.5);
            }
            break;
        case FigureId::fig3:
            for (double cv : kCatalogCv) {
                min_residual_point(em, DistFamily::II, cv, 4, 0.5);
            }
            break;
        case FigureId::fig4:
            for (DistFamily family : {DistFamily::I, DistFamily::II}) {
                for (double cv : kCatalogCv) {
                    min_residual_point(em, family, cv, 4, 0.5);
                }
            }
            break;
        case FigureId::fig5:
            for (DistFamily family : {DistFamily::I, DistFamily::II}) {
                for (double rho : kLoadGrid) {
                    min_residual_point(em, family, 4.0, 4, rho);
                }
            }
            break;
        case FigureId::fig6:
            for (DistFamily family : kFamilies) {
                for (int c = 2; c <= 10; ++c) {
                    min_residual_point(em, family, 4.0, c, 0.5);
                }
            }
            break;
        case FigureId::fig7:
            for (DistFamily family : kFamilies) {
                for (double cv : kCatalogCv) {
                    min_residual_error_point(em, family, cv, 2, 0.5);
                }
            }
            break;
        case FigureId::fig8:
            for (DistFamily family : kFamilies) {
                for (double cv : kCatalogCv) {
                    min_residual_error_point(em, family, cv, 4, 0.5);
                }
            }
            break;
        case FigureId::fig9:
            for (double cv : kCatalogCv) {
                for (double rho : kLoadGrid) {
                    wait_probability_point(em, DistFamily::III, cv, 4, rho);
                }
            }
            break;
        case FigureId::t1: return table_rows(id, DistFamily::I);
        case FigureId::t2: return table_rows(id, DistFamily::II);
        case FigureId::t3: return table_rows(id, DistFamily::III);
    }
    return em.take();
}

std::vector<QuotedCheck> quoted_value_checks() {
    std::vector<QuotedCheck> checks;
    auto add = [&](const std::string& name, double observed,
                   const std::string& expectation, bool pass) {
        checks.push_back(QuotedCheck{name, observed, expectation, pass});
    };

    const double tr_i = exact_min_tr(DistFamily::I, 4.0, 4, 0.5);
    add("min residual, family I cv=4 c=4 rho=0.5", tr_i, "2.12 +/- 0.05",
        std::abs(tr_i - 2.12) <= 0.05);

    const double tr_ii = exact_min_tr(DistFamily::II, 4.0, 4, 0.5);
    add("min residual, family II cv=4 c=4 rho=0.5", tr_ii, "0.27 +/- 0.03",
        std::abs(tr_ii - 0.27) <= 0.03);

    const double ratio_i =
        exact_min_tr(DistFamily::I, 4.0, 2, 0.5) / tr_i;
    add("min residual ratio c=2 over c=4, family I cv=4", ratio_i,
        "2.0 +/- 0.15", std::abs(ratio_i - 2.0) <= 0.15);

    const double ratio_iii = exact_min_tr(DistFamily::III, 4.0, 2, 0.5) /
                             exact_min_tr(DistFamily::III, 4.0, 4, 0.5);
    add("min residual ratio c=2 over c=4, family III cv=4", ratio_iii,
        "3.9 +/- 0.3", std::abs(ratio_iii - 3.9) <= 0.3);

    double worst_i = 0.0;
    for (double cv : kCatalogCv) {
        for (int c : {2, 4}) {
            worst_i = std::max(worst_i,
                               std::abs(two_moment_error_pct(DistFamily::I, cv, c, 0.5)));
        }
    }
    add("two-moment error, family I, worst over cv and c in {2,4} (%)", worst_i,
        "< 2%", worst_i < 2.0);

    const double err_ii_c2 = two_moment_error_pct(DistFamily::II, 2.0, 2, 0.5);
    const double err_ii_c4 = two_moment_error_pct(DistFamily::II, 2.0, 4, 0.5);
    const double nearer = std::abs(err_ii_c2 - 100.0) <= std::abs(err_ii_c4 - 100.0)
                              ? err_ii_c2
                              : err_ii_c4;
    add("two-moment error, family II cv=2, c=2 or c=4 (%)", nearer,
        "100 +/- 25 points", std::abs(nearer - 100.0) <= 25.0);

    const double worst_cv4 =
        std::max(two_moment_error_pct(DistFamily::II, 4.0, 2, 0.5),
                 two_moment_error_pct(DistFamily::III, 4.0, 2, 0.5));
    add("two-moment error, worst of families II/III, cv=4 c=2 (%)", worst_cv4,
        "in [250, 350]", worst_cv4 >= 250.0 && worst_cv4 <= 350.0);

    double worst_pw = 0.0;
    double worst_pos = 0.5;
    bool pos_ok = true;
    for (DistFamily family : kFamilies) {
        for (double cv : kCatalogCv) {
            for (int c = 2; c <= 10; ++c) {
                double family_cv_worst = 0.0;
                double family_cv_arg = 0.0;
                for (double rho : kLoadGrid) {
                    const ModelSpec model = catalog_model(family, cv, c, rho);
                    const PerfMeasures exact = measures(model, stationary(model));
                    const double sub = erlang_c(
                        c, model.lambda * moments_from_params(model.service).m);
                    const double err =
                        std::abs(100.0 * relative_error(sub, exact.pi_wait));
                    worst_pw = std::max(worst_pw, err);
                    if (err > family_cv_worst) {
                        family_cv_worst = err;
                        family_cv_arg = rho;
                    }
                }
                if (family == DistFamily::III && c == 4) {
                    if (family_cv_arg < 0.3 || family_cv_arg > 0.7) pos_ok = false;
                    if (std::abs(family_cv_arg - 0.5) >
                        std::abs(worst_pos - 0.5)) {
                        worst_pos = family_cv_arg;
                    }
                }
            }
        }
    }
    add("Erlang-C waiting-probability error, worst over full grid (%)", worst_pw,
        "<= 16%", worst_pw <= 16.0);
    add("worst-load position for family III c=4 (rho)", worst_pos,
        "in [0.3, 0.7] for every cv", pos_ok);

    return checks;
}

}  // namespace cox2q
