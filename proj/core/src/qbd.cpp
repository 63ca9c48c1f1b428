#include "cox2q/qbd.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace cox2q {

namespace {

// Phase count at a boundary level.
inline int level_dim(int n, int c) { return std::min(n, c) + 1; }

// Offset of level n inside the stacked boundary vector (levels 0..c).
inline int level_offset(int n) { return n * (n + 1) / 2; }

// Conditional mean minimum residual given the (unnormalized) distribution v
// over the all-busy phases. Phases j > 0 are unreachable when p_cont = 0, in
// which case the memoryless value 1/(c mu1) applies and any T entries that
// involve mu2 = 0 are never touched.
double conditional_min_residual(const ModelSpec& model, const Eigen::RowVectorXd& v) {
    const double den = v.sum();
    if (!(den > 1e-300)) {
        throw UndefinedConditionalError(
            "waiting probability is numerically zero; the conditional minimum "
            "residual is undefined");
    }
    const Cox2Params& s = model.service;
    if (s.p_cont == 0.0 && !(s.mu2 > 0.0)) {
        return 1.0 / (model.c * s.mu1);
    }
    const std::vector<double> t = departure_times(model);
    double num = 0.0;
    for (int j = 0; j <= model.c; ++j) {
        if (v[j] != 0.0) num += v[j] * t[static_cast<std::size_t>(j)];
    }
    return num / den;
}

// Solve x (I - R) = b for a row vector x.
Eigen::RowVectorXd solve_right_geometric(const Eigen::MatrixXd& r,
                                         const Eigen::RowVectorXd& b) {
    const Eigen::MatrixXd im_r =
        Eigen::MatrixXd::Identity(r.rows(), r.cols()) - r;
    return im_r.transpose().partialPivLu().solve(b.transpose()).transpose();
}

struct TruncatedSolution {
    std::vector<Eigen::RowVectorXd> pi;  // levels 0..N, normalized
};

// Stationary vector of the chain truncated at level n_max (arrivals switched
// off there), via backward block elimination and a forward sweep.
TruncatedSolution solve_truncated(const GeneratorBlocks& blocks, int n_max) {
    const int c = blocks.c;
    const double lambda = blocks.a0(0, 0);

    // W_N = L_N, then W_n = L_n - U_n W_{n+1}^{-1} D_{n+1} going down.
    // Only -W_n^{-1} right-multiplied by the up block is needed in the
    // forward sweep, so keep step_n = U_{n-1} (-W_n^{-1}).
    std::vector<Eigen::MatrixXd> step(static_cast<std::size_t>(n_max) + 1);

    Eigen::MatrixXd w = blocks.a1 + lambda * Eigen::MatrixXd::Identity(c + 1, c + 1);
    for (int n = n_max; n >= 1; --n) {
        const Eigen::MatrixXd& up = (n - 1 < c) ? blocks.b0[static_cast<std::size_t>(n - 1)]
                                                : blocks.a0;
        step[static_cast<std::size_t>(n)] = up * (-w).partialPivLu().inverse();
        if (n == 1) break;
        // W_{n-1} = L_{n-1} + U_{n-1} (-W_n^{-1}) D_n.
        const Eigen::MatrixXd& down = (n <= c) ? blocks.b2[static_cast<std::size_t>(n)]
                                               : blocks.a2;
        const Eigen::MatrixXd& local = (n - 1 < c) ? blocks.b1[static_cast<std::size_t>(n - 1)]
                                                   : blocks.a1;
        w = local + step[static_cast<std::size_t>(n)] * down;
    }

    TruncatedSolution out;
    out.pi.resize(static_cast<std::size_t>(n_max) + 1);
    out.pi[0] = Eigen::RowVectorXd::Ones(1);
    for (int n = 1; n <= n_max; ++n) {
        out.pi[static_cast<std::size_t>(n)] =
            out.pi[static_cast<std::size_t>(n - 1)] * step[static_cast<std::size_t>(n)];
    }
    double total = 0.0;
    for (const auto& piv : out.pi) total += piv.sum();
    for (auto& piv : out.pi) piv /= total;
    return out;
}

// Reducible case (p_cont = 0): only phase 0 is reachable and the truncated
// full-phase system is singular, so eliminate the plain birth-death chain
// with service rate min(n,c) mu1 instead.
TruncatedSolution solve_truncated_scalar(const ModelSpec& model, int n_max) {
    const double lambda = model.lambda;
    const double mu1 = model.service.mu1;
    auto service_rate = [&](int n) { return std::min(n, model.c) * mu1; };

    std::vector<double> step(static_cast<std::size_t>(n_max) + 1);
    double w = -service_rate(n_max);
    for (int n = n_max; n >= 1; --n) {
        step[static_cast<std::size_t>(n)] = lambda / -w;
        if (n == 1) break;
        w = -(lambda + service_rate(n - 1)) +
            step[static_cast<std::size_t>(n)] * service_rate(n);
    }

    TruncatedSolution out;
    out.pi.resize(static_cast<std::size_t>(n_max) + 1);
    double level = 1.0;
    double total = 0.0;
    out.pi[0] = Eigen::RowVectorXd::Ones(1);
    total += 1.0;
    for (int n = 1; n <= n_max; ++n) {
        level *= step[static_cast<std::size_t>(n)];
        out.pi[static_cast<std::size_t>(n)] = Eigen::RowVectorXd::Constant(1, level);
        total += level;
    }
    for (auto& piv : out.pi) piv /= total;
    return out;
}

}  // namespace

double ModelSpec::utilization() const {
    return lambda * moments_from_params(service).m / c;
}

void ModelSpec::validate() const {
    service.validate();
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ParameterDomainError("arrival rate lambda must be positive and finite");
    }
    if (c < 1) {
        throw ParameterDomainError("server count c must be at least 1");
    }
    const double rho = utilization();
    if (!(rho < 1.0)) {
        std::ostringstream msg;
        msg << "utilization rho = " << rho << " must be below 1";
        throw UnstableQueueError(msg.str());
    }
}

GeneratorBlocks build_generator(const ModelSpec& model) {
    model.validate();
    const int c = model.c;
    const double lambda = model.lambda;
    const double mu1 = model.service.mu1;
    const double mu2 = model.service.mu2;
    const double p = model.service.p_cont;
    const double q = 1.0 - p;

    GeneratorBlocks g;
    g.c = c;
    g.a0 = lambda * Eigen::MatrixXd::Identity(c + 1, c + 1);

    g.a1 = Eigen::MatrixXd::Zero(c + 1, c + 1);
    g.a2 = Eigen::MatrixXd::Zero(c + 1, c + 1);
    for (int j = 0; j <= c; ++j) {
        const double stage1 = (c - j) * mu1;
        const double stage2 = j * mu2;
        g.a1(j, j) = -(lambda + stage1 + stage2);
        if (j < c) g.a1(j, j + 1) = stage1 * p;
        g.a2(j, j) = stage1 * q;
        if (j > 0) g.a2(j, j - 1) = stage2;
    }

    g.b0.resize(static_cast<std::size_t>(c));
    g.b1.resize(static_cast<std::size_t>(c));
    g.b2.resize(static_cast<std::size_t>(c) + 1);
    for (int n = 0; n < c; ++n) {
        auto& up = g.b0[static_cast<std::size_t>(n)];
        up = Eigen::MatrixXd::Zero(n + 1, n + 2);
        for (int j = 0; j <= n; ++j) up(j, j) = lambda;

        auto& local = g.b1[static_cast<std::size_t>(n)];
        local = Eigen::MatrixXd::Zero(n + 1, n + 1);
        for (int j = 0; j <= n; ++j) {
            const double stage1 = (n - j) * mu1;
            const double stage2 = j * mu2;
            local(j, j) = -(lambda + stage1 + stage2);
            if (j < n) local(j, j + 1) = stage1 * p;
        }
    }
    for (int n = 1; n <= c; ++n) {
        auto& down = g.b2[static_cast<std::size_t>(n)];
        down = Eigen::MatrixXd::Zero(n + 1, n);
        for (int j = 0; j <= n; ++j) {
            if (j < n) down(j, j) = (n - j) * mu1 * q;
            if (j > 0) down(j, j - 1) = j * mu2;
        }
    }
    return g;
}

double max_row_sum_deviation(const GeneratorBlocks& blocks) {
    const int c = blocks.c;
    double worst = 0.0;
    auto scan = [&](const Eigen::VectorXd& row_sums, const Eigen::VectorXd& scale) {
        for (int i = 0; i < row_sums.size(); ++i) {
            worst = std::max(worst, std::abs(row_sums[i]) / std::max(1.0, scale[i]));
        }
    };

    for (int n = 0; n <= c + 1; ++n) {
        const int dim = level_dim(n, c);
        Eigen::VectorXd sums = Eigen::VectorXd::Zero(dim);
        Eigen::VectorXd scale = Eigen::VectorXd::Zero(dim);
        auto add = [&](const Eigen::MatrixXd& block) {
            sums += block.rowwise().sum();
            scale += block.cwiseAbs().rowwise().sum();
        };
        if (n < c) {
            add(blocks.b0[static_cast<std::size_t>(n)]);
            add(blocks.b1[static_cast<std::size_t>(n)]);
            if (n >= 1) add(blocks.b2[static_cast<std::size_t>(n)]);
        } else {
            add(blocks.a0);
            add(blocks.a1);
            if (n == c) add(blocks.b2[static_cast<std::size_t>(c)]);
            else add(blocks.a2);
        }
        scan(sums, scale);
    }
    return worst;
}

Eigen::MatrixXd solve_r(const GeneratorBlocks& blocks, double tol, long max_iter) {
    const double lambda = blocks.a0(0, 0);
    const double threshold = tol * lambda;

    // Without stage-1 continuation the phase never leaves 0 and the phase
    // chain is reducible; unreachable phases carry their own (possibly
    // critical) birth-death dynamics and must stay out of the fixed point.
    // The reachable 1x1 block solves in closed form to lambda / (c mu1).
    bool coupled = false;
    for (int j = 0; j + 1 < blocks.a1.rows(); ++j) {
        if (blocks.a1(j, j + 1) != 0.0) { coupled = true; break; }
    }
    if (!coupled) {
        Eigen::MatrixXd r = Eigen::MatrixXd::Zero(blocks.a1.rows(), blocks.a1.cols());
        r(0, 0) = lambda / blocks.a2(0, 0);
        return r;
    }

    const Eigen::MatrixXd neg_a1_inv = (-blocks.a1).partialPivLu().inverse();

    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(blocks.a1.rows(), blocks.a1.cols());
    double residual = std::numeric_limits<double>::infinity();
    for (long it = 0; it < max_iter; ++it) {
        const Eigen::MatrixXd r2a2 = r * (r * blocks.a2);
        residual = (blocks.a0 + r * blocks.a1 + r2a2)
                       .cwiseAbs()
                       .rowwise()
                       .sum()
                       .maxCoeff();
        if (residual < threshold) {
            return r.cwiseMax(0.0);
        }
        r = (blocks.a0 + r2a2) * neg_a1_inv;
    }
    std::ostringstream msg;
    msg << "R iteration did not converge within " << max_iter
        << " iterations (last residual " << residual << ")";
    throw SolverError(msg.str());
}

StationarySolution stationary(const ModelSpec& model) {
    const GeneratorBlocks blocks = build_generator(model);
    const int c = model.c;
    const Eigen::MatrixXd r = solve_r(blocks);

    const int total = level_offset(c + 1);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(total, total);
    auto place = [&](const Eigen::MatrixXd& block, int row_level, int col_level) {
        m.block(level_offset(row_level), level_offset(col_level), block.rows(),
                block.cols()) += block;
    };

    for (int n = 0; n < c; ++n) {
        place(blocks.b1[static_cast<std::size_t>(n)], n, n);
        place(blocks.b0[static_cast<std::size_t>(n)], n, n + 1);
    }
    for (int n = 1; n <= c; ++n) {
        place(blocks.b2[static_cast<std::size_t>(n)], n, n - 1);
    }
    // Level-c balance with the geometric tail folded in.
    place(blocks.a1 + r * blocks.a2, c, c);

    // Normalization replaces the balance equation of state (0,0):
    // sum_{n<c} pi_n 1 + pi_c (I-R)^{-1} 1 = 1.
    const Eigen::MatrixXd im_r = Eigen::MatrixXd::Identity(c + 1, c + 1) - r;
    const Eigen::VectorXd tail_weight =
        im_r.partialPivLu().solve(Eigen::VectorXd::Ones(c + 1));
    Eigen::VectorXd norm_coeff = Eigen::VectorXd::Ones(total);
    norm_coeff.segment(level_offset(c), c + 1) = tail_weight;
    m.col(0) = norm_coeff;

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(total);
    rhs[0] = 1.0;

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m.transpose());
    const Eigen::VectorXd x = lu.solve(rhs);
    if (!((m.transpose() * x - rhs).cwiseAbs().maxCoeff() < 1e-8)) {
        throw SolverError("boundary balance system is numerically singular");
    }

    StationarySolution sol;
    sol.r = r;
    sol.boundary.resize(static_cast<std::size_t>(c) + 1);
    for (int n = 0; n <= c; ++n) {
        sol.boundary[static_cast<std::size_t>(n)] =
            x.segment(level_offset(n), n + 1).transpose();
    }
    return sol;
}

double max_balance_residual(const ModelSpec& model, const StationarySolution& sol) {
    const GeneratorBlocks blocks = build_generator(model);
    const int c = model.c;
    const Eigen::RowVectorXd& pi_c = sol.boundary[static_cast<std::size_t>(c)];
    const Eigen::RowVectorXd pi_c1 = pi_c * sol.r;
    const Eigen::RowVectorXd pi_c2 = pi_c1 * sol.r;

    auto pi = [&](int n) -> const Eigen::RowVectorXd& {
        return sol.boundary[static_cast<std::size_t>(n)];
    };

    double worst = 0.0;
    auto track = [&](const Eigen::RowVectorXd& res) {
        worst = std::max(worst, res.cwiseAbs().maxCoeff());
    };

    for (int n = 0; n <= c + 1; ++n) {
        Eigen::RowVectorXd res = Eigen::RowVectorXd::Zero(level_dim(n, c));
        if (n == 0) {
            res += pi(0) * blocks.b1[0];
        } else if (n < c) {
            res += pi(n - 1) * blocks.b0[static_cast<std::size_t>(n - 1)];
            res += pi(n) * blocks.b1[static_cast<std::size_t>(n)];
        } else if (n == c) {
            if (c >= 1) res += pi(c - 1) * blocks.b0[static_cast<std::size_t>(c - 1)];
            res += pi(c) * blocks.a1;
            res += pi_c1 * blocks.a2;
        } else {
            res += pi(c) * blocks.a0;
            res += pi_c1 * blocks.a1;
            res += pi_c2 * blocks.a2;
        }
        if (n + 1 < c) {
            res += pi(n + 1) * blocks.b2[static_cast<std::size_t>(n + 1)];
        } else if (n + 1 == c) {
            res += pi(c) * blocks.b2[static_cast<std::size_t>(c)];
        }
        track(res);
    }
    return worst;
}

double spectral_radius(const Eigen::MatrixXd& r) {
    const Eigen::EigenSolver<Eigen::MatrixXd> es(r, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> departure_times(const ModelSpec& model) {
    model.service.validate();
    if (model.c < 1) {
        throw ParameterDomainError("server count c must be at least 1");
    }
    const int c = model.c;
    const double mu1 = model.service.mu1;
    const double mu2 = model.service.mu2;
    const double p = model.service.p_cont;

    std::vector<double> t(static_cast<std::size_t>(c) + 1);
    t[static_cast<std::size_t>(c)] = 1.0 / (c * mu2);
    for (int j = c - 1; j >= 0; --j) {
        const double total_rate = (c - j) * mu1 + j * mu2;
        const double cont = (c - j) * mu1 * p / total_rate;
        double value = 1.0 / total_rate;
        if (cont > 0.0) value += cont * t[static_cast<std::size_t>(j) + 1];
        t[static_cast<std::size_t>(j)] = value;
    }
    return t;
}

double min_residual_exact(const ModelSpec& model, const StationarySolution& sol) {
    const Eigen::RowVectorXd v = solve_right_geometric(
        sol.r, sol.boundary[static_cast<std::size_t>(model.c)]);
    return conditional_min_residual(model, v);
}

PerfMeasures measures(const ModelSpec& model, const StationarySolution& sol) {
    const int c = model.c;
    const Eigen::RowVectorXd& pi_c = sol.boundary[static_cast<std::size_t>(c)];
    const Eigen::MatrixXd im_r = Eigen::MatrixXd::Identity(c + 1, c + 1) - sol.r;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(im_r);

    const Eigen::VectorXd y = lu.solve(Eigen::VectorXd::Ones(c + 1));  // (I-R)^{-1} 1
    const Eigen::VectorXd z = lu.solve(y);                             // (I-R)^{-2} 1

    PerfMeasures out;
    out.rho = model.utilization();
    out.pi_wait = pi_c.dot(y);
    out.eqw = pi_c.dot(sol.r * z);
    out.ew = out.eqw / model.lambda;

    double below = 0.0;
    for (int n = 0; n <= c; ++n) {
        below += n * sol.boundary[static_cast<std::size_t>(n)].sum();
    }
    out.eq = below + c * pi_c.dot(sol.r * y) + out.eqw;
    out.min_tr = min_residual_exact(model, sol);
    return out;
}

PerfMeasures truncated_oracle(const ModelSpec& model, double tail_mass_tol) {
    model.validate();
    const bool reducible = model.service.p_cont == 0.0;
    GeneratorBlocks blocks;
    if (!reducible) blocks = build_generator(model);
    const int c = model.c;
    constexpr long kMaxStates = 1000000;

    double prev_pi_wait = -1.0;
    for (int n_max = std::max(4 * c, 32);; n_max *= 2) {
        const long states = reducible
                                ? static_cast<long>(n_max) + 1
                                : level_offset(c + 1) +
                                      static_cast<long>(n_max - c) * (c + 1);
        if (states > kMaxStates) {
            throw OracleInfeasibleError(
                "truncated chain would exceed the 10^6-state cap before "
                "reaching the requested tail mass");
        }

        const TruncatedSolution sol = reducible
                                          ? solve_truncated_scalar(model, n_max)
                                          : solve_truncated(blocks, n_max);
        const double tail_mass = sol.pi[static_cast<std::size_t>(n_max)].sum();

        PerfMeasures out;
        out.rho = model.utilization();
        Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(c + 1);
        for (int n = 0; n <= n_max; ++n) {
            const auto& piv = sol.pi[static_cast<std::size_t>(n)];
            const double mass = piv.sum();
            out.eq += n * mass;
            if (n >= c) {
                out.pi_wait += mass;
                v.head(piv.size()) += piv;
            }
            if (n > c) out.eqw += (n - c) * mass;
        }
        out.ew = out.eqw / model.lambda;
        out.min_tr = conditional_min_residual(model, v);

        if (prev_pi_wait >= 0.0 && std::abs(out.pi_wait - prev_pi_wait) < 1e-10 &&
            tail_mass < tail_mass_tol) {
            return out;
        }
        prev_pi_wait = out.pi_wait;
    }
}

}  // namespace cox2q
