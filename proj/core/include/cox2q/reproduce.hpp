#pragma once

#include "cox2q/catalog.hpp"
#include "cox2q/scenario.hpp"
#include "cox2q/sim.hpp"

#include <string>
#include <vector>

namespace cox2q {

// Reproducible outputs: the cv-sweep figures (2-4), the load sweep (5), the
// server-count sweep (6), the minimum-residual approximation error sweeps
// (7-8), the waiting-probability substitution sweep (9), and the three
// catalog tables (t1-t3).
enum class FigureId { fig2, fig3, fig4, fig5, fig6, fig7, fig8, fig9, t1, t2, t3 };

std::string figure_name(FigureId id);

// Accepts "2".."9" and "t1".."t3"; anything else is a usage error listing
// the valid ids.
FigureId parse_figure(const std::string& text);

std::vector<FigureId> all_figures();

struct ReproduceOptions {
    SimConfig sim;         // budget and master seed for the simulated rows
    bool with_sim = true;  // tables never simulate; figures do unless disabled
    int max_threads = 0;
};

// Emits exact, simulated and approximation rows for every point of the
// figure, one metric value per row.
std::vector<ScenarioRow> reproduce(FigureId id, const ReproduceOptions& opts);

struct QuotedCheck {
    std::string name;
    double observed = 0.0;
    std::string expectation;
    bool pass = false;
};

// Exact-solver evaluation of every headline number the study quotes; cheap
// enough to run after any reproduction.
std::vector<QuotedCheck> quoted_value_checks();

}  // namespace cox2q
