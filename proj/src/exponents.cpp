#include "htgame/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace htgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double kl2(double p, double q) {
    double bits = 0.0;
    if (p > 0.0) {
        if (q == 0.0) return kInf;
        bits += p * std::log2(p / q);
    }
    if (p < 1.0) {
        if (q == 1.0) return kInf;
        bits += (1.0 - p) * std::log2((1.0 - p) / (1.0 - q));
    }
    return bits;
}

double clamp(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

// min over the region interval of D(P || P_Y); convex in P(0) with its root
// at P_Y, so the constrained minimum sits at the clamped point.
struct InnerMin {
    double value;
    double p0;
};

InnerMin binary_inner_min(const BinaryInterval& region, double y0) {
    const double p0 = clamp(y0, region.lo, region.hi);
    return InnerMin{p0 == y0 ? 0.0 : kl2(p0, y0), p0};
}

struct BinaryOuter {
    double value = kInf;
    double q0 = 0.0;
    double p0 = 0.0;
    int evals = 0;
    double refine_shift = 0.0;
};

// Dense scan over the conditioning point followed by golden-section
// refinement around the best cell.
BinaryOuter binary_outer_min(const std::function<double(double)>& objective, double x0,
                             double y0) {
    BinaryOuter out;
    auto consider = [&](double q0) {
        if (!(q0 > 0.0) || !(q0 < 1.0)) return;
        const double v = objective(q0);
        out.evals += 1;
        if (v < out.value) {
            out.value = v;
            out.q0 = q0;
        }
    };

    constexpr double step = 1e-3;
    for (int i = 1; i < 1000; ++i) consider(i * step);
    consider(x0);
    consider(y0);
    consider(1e-6);
    consider(1.0 - 1e-6);

    // Golden-section inside the bracketing cells; the scan pinned the basin.
    const double golden = 0.6180339887498949;
    double lo = std::max(1e-9, out.q0 - 2.0 * step);
    double hi = std::min(1.0 - 1e-9, out.q0 + 2.0 * step);
    const double coarse = out.value;
    double a = hi - golden * (hi - lo);
    double b = lo + golden * (hi - lo);
    double fa = objective(a);
    double fb = objective(b);
    for (int it = 0; it < 120; ++it) {
        out.evals += 1;
        if (fa <= fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - golden * (hi - lo);
            fa = objective(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + golden * (hi - lo);
            fb = objective(b);
        }
    }
    const double q_refined = 0.5 * (lo + hi);
    const double v_refined = objective(q_refined);
    if (v_refined < out.value) {
        out.value = v_refined;
        out.q0 = q_refined;
    }
    out.refine_shift = std::max(0.0, coarse - out.value);
    return out;
}

// ---------------------------------------------------------------------------
// Generic inner solver: minimize D(row || P_Y) over couplings on the unit
// simplex with <cost,gamma> <= D and statistic(col, q) <= lambda. The
// statistic constraint is dualized; the multiplier is bisected against the
// constraint value.
// ---------------------------------------------------------------------------

struct JointSolve {
    double value = kInf;
    std::vector<double> row;
    std::vector<double> col;
    double stat = kInf;
    double gap = kInf;
    int iterations = 0;
};

double statistic_of(const std::vector<double>& col, const Pmf& q, double ratio, Game game) {
    if (game == Game::training) {
        double dp = 0.0;
        double dq = 0.0;
        for (std::size_t a = 0; a < col.size(); ++a) {
            const double u = (col[a] + ratio * q[static_cast<int>(a)]) / (1.0 + ratio);
            if (col[a] > 0.0) dp += col[a] * std::log2(col[a] / u);
            if (q[static_cast<int>(a)] > 0.0) {
                dq += q[static_cast<int>(a)] * std::log2(q[static_cast<int>(a)] / u);
            }
        }
        return dp + ratio * dq;
    }
    double kl = 0.0;
    for (std::size_t a = 0; a < col.size(); ++a) {
        if (col[a] == 0.0) continue;
        if (q[static_cast<int>(a)] == 0.0) return kInf;
        kl += col[a] * std::log2(col[a] / q[static_cast<int>(a)]);
    }
    return kl;
}

constexpr double grad_clip = 64.0;

// Minimize D(row||P_Y) + mu * stat(col, q) over the budgeted simplex of
// couplings by Frank-Wolfe with the two-cell linear oracle.
JointSolve solve_joint_for_multiplier(double mu, const Pmf& p_y, const Pmf& q, double ratio,
                                      Game game, const DistortionSpec& d, int max_iters) {
    const int k = p_y.size();
    const int m = k * k;
    constexpr double inv_ln2 = 1.4426950408889634;

    std::vector<double> gamma(static_cast<std::size_t>(m), 0.0);
    // Feasible start: the diagonal coupling of q costs nothing and sits at
    // the statistic's root.
    for (int i = 0; i < k; ++i) gamma[static_cast<std::size_t>(i * k + i)] = q[i];

    auto marginals = [&](const std::vector<double>& g, std::vector<double>& row,
                         std::vector<double>& col) {
        row.assign(static_cast<std::size_t>(k), 0.0);
        col.assign(static_cast<std::size_t>(k), 0.0);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                row[static_cast<std::size_t>(i)] += g[static_cast<std::size_t>(i * k + j)];
                col[static_cast<std::size_t>(j)] += g[static_cast<std::size_t>(i * k + j)];
            }
        }
    };

    auto value_of = [&](const std::vector<double>& row, const std::vector<double>& col) {
        double kl = 0.0;
        for (int i = 0; i < k; ++i) {
            const double r = row[static_cast<std::size_t>(i)];
            if (r == 0.0) continue;
            if (p_y[i] == 0.0) return kInf;
            kl += r * std::log2(r / p_y[i]);
        }
        return kl + mu * statistic_of(col, q, ratio, game);
    };

    std::vector<double> row;
    std::vector<double> col;
    marginals(gamma, row, col);
    double value = value_of(row, col);
    double gap = kInf;
    int it = 0;

    std::vector<double> grad(static_cast<std::size_t>(m), 0.0);
    for (; it < max_iters; ++it) {
        // Gradient wrt each cell: row term + mu * column term.
        for (int i = 0; i < k; ++i) {
            const double r = std::max(row[static_cast<std::size_t>(i)], 1e-300);
            const double grow = clamp(std::log2(r / std::max(p_y[i], 1e-300)) + inv_ln2,
                                      -grad_clip, grad_clip);
            for (int j = 0; j < k; ++j) {
                double gcol;
                if (game == Game::training) {
                    const double u =
                        (col[static_cast<std::size_t>(j)] + ratio * q[j]) / (1.0 + ratio);
                    gcol = std::log2(std::max(col[static_cast<std::size_t>(j)], 1e-300) /
                                     std::max(u, 1e-300));
                } else {
                    gcol = std::log2(std::max(col[static_cast<std::size_t>(j)], 1e-300) /
                                     std::max(q[j], 1e-300)) +
                           inv_ln2;
                }
                gcol = clamp(gcol, -grad_clip, grad_clip);
                grad[static_cast<std::size_t>(i * k + j)] = grow + mu * gcol;
            }
        }

        // Linear oracle over {s >= 0, sum s = 1, <cost,s> <= D}: either one
        // cell within budget or a two-cell blend pinned to the budget.
        int best_single = -1;
        double best_single_val = kInf;
        int cheapest_cell = -1;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                const int idx = i * k + j;
                if (d.cost(i, j) <= d.budget() + 1e-15 &&
                    grad[static_cast<std::size_t>(idx)] < best_single_val) {
                    best_single_val = grad[static_cast<std::size_t>(idx)];
                    best_single = idx;
                }
                if (cheapest_cell < 0 || d.cost(i, j) < d.cost(cheapest_cell / k,
                                                               cheapest_cell % k)) {
                    cheapest_cell = idx;
                }
            }
        }
        double best_lp_val = best_single_val;
        int blend_u = -1;
        int blend_v = -1;
        double blend_theta = 0.0;
        for (int u = 0; u < m; ++u) {
            const double cu = d.cost(u / k, u % k);
            if (cu > d.budget() + 1e-15) continue;
            for (int v = 0; v < m; ++v) {
                const double cv = d.cost(v / k, v % k);
                if (cv <= d.budget() + 1e-15) continue;
                const double theta = (d.budget() - cu) / (cv - cu);
                const double val = (1.0 - theta) * grad[static_cast<std::size_t>(u)] +
                                   theta * grad[static_cast<std::size_t>(v)];
                if (val < best_lp_val - 1e-15) {
                    best_lp_val = val;
                    blend_u = u;
                    blend_v = v;
                    blend_theta = theta;
                }
            }
        }
        std::vector<double> s(static_cast<std::size_t>(m), 0.0);
        if (blend_u >= 0) {
            s[static_cast<std::size_t>(blend_u)] = 1.0 - blend_theta;
            s[static_cast<std::size_t>(blend_v)] = blend_theta;
        } else if (best_single >= 0) {
            s[static_cast<std::size_t>(best_single)] = 1.0;
        } else {
            s[static_cast<std::size_t>(cheapest_cell)] = 1.0;
        }

        double lin = 0.0;
        for (int idx = 0; idx < m; ++idx) {
            lin += grad[static_cast<std::size_t>(idx)] *
                   (gamma[static_cast<std::size_t>(idx)] - s[static_cast<std::size_t>(idx)]);
        }
        gap = lin;
        if (gap <= 1e-9) break;

        // Exact line search by bisection on the directional derivative.
        std::vector<double> s_row;
        std::vector<double> s_col;
        marginals(s, s_row, s_col);
        double t_lo = 0.0;
        double t_hi = 1.0;
        for (int ls = 0; ls < 60; ++ls) {
            const double t = 0.5 * (t_lo + t_hi);
            double deriv = 0.0;
            for (int i = 0; i < k; ++i) {
                const double r = (1.0 - t) * row[static_cast<std::size_t>(i)] +
                                 t * s_row[static_cast<std::size_t>(i)];
                const double gr = clamp(
                    std::log2(std::max(r, 1e-300) / std::max(p_y[i], 1e-300)) + inv_ln2,
                    -grad_clip, grad_clip);
                deriv += gr * (s_row[static_cast<std::size_t>(i)] -
                               row[static_cast<std::size_t>(i)]);
            }
            std::vector<double> mix_col(static_cast<std::size_t>(k));
            for (int j = 0; j < k; ++j) {
                mix_col[static_cast<std::size_t>(j)] =
                    (1.0 - t) * col[static_cast<std::size_t>(j)] +
                    t * s_col[static_cast<std::size_t>(j)];
            }
            for (int j = 0; j < k; ++j) {
                double gcol;
                if (game == Game::training) {
                    const double u =
                        (mix_col[static_cast<std::size_t>(j)] + ratio * q[j]) / (1.0 + ratio);
                    gcol = std::log2(std::max(mix_col[static_cast<std::size_t>(j)], 1e-300) /
                                     std::max(u, 1e-300));
                } else {
                    gcol = std::log2(std::max(mix_col[static_cast<std::size_t>(j)], 1e-300) /
                                     std::max(q[j], 1e-300)) +
                           inv_ln2;
                }
                gcol = clamp(gcol, -grad_clip, grad_clip);
                deriv += mu * gcol *
                         (s_col[static_cast<std::size_t>(j)] -
                          col[static_cast<std::size_t>(j)]);
            }
            if (deriv > 0.0) {
                t_hi = t;
            } else {
                t_lo = t;
            }
        }
        const double t = 0.5 * (t_lo + t_hi);
        for (int idx = 0; idx < m; ++idx) {
            gamma[static_cast<std::size_t>(idx)] =
                (1.0 - t) * gamma[static_cast<std::size_t>(idx)] +
                t * s[static_cast<std::size_t>(idx)];
        }
        marginals(gamma, row, col);
        value = value_of(row, col);
    }

    JointSolve out;
    out.row = row;
    out.col = col;
    out.stat = statistic_of(col, q, ratio, game);
    double kl = 0.0;
    for (int i = 0; i < k; ++i) {
        const double r = row[static_cast<std::size_t>(i)];
        if (r == 0.0) continue;
        kl = p_y[i] == 0.0 ? kInf : kl + r * std::log2(r / p_y[i]);
    }
    out.value = kl;
    out.gap = gap;
    out.iterations = it;
    return out;
}

// min D(P || P_Y) over the region around q, generic alphabets.
JointSolve generic_inner_min(const Pmf& q, const Pmf& p_y, double lambda, double ratio,
                             Game game, const DistortionSpec& d) {
    JointSolve free = solve_joint_for_multiplier(0.0, p_y, q, ratio, game, d, 2000);
    if (free.stat <= lambda + 1e-9) return free;

    double mu_lo = 0.0;
    double mu_hi = 1.0;
    JointSolve at_hi = free;
    for (int grow = 0; grow < 60; ++grow) {
        at_hi = solve_joint_for_multiplier(mu_hi, p_y, q, ratio, game, d, 2000);
        if (at_hi.stat <= lambda) break;
        mu_hi *= 2.0;
    }
    JointSolve feasible = at_hi;
    for (int it = 0; it < 50; ++it) {
        const double mu = 0.5 * (mu_lo + mu_hi);
        JointSolve mid = solve_joint_for_multiplier(mu, p_y, q, ratio, game, d, 1000);
        if (mid.stat <= lambda) {
            mu_hi = mu;
            feasible = std::move(mid);
        } else {
            mu_lo = mu;
        }
    }
    return feasible;
}

std::vector<double> project_to_simplex(std::vector<double> v) {
    // Euclidean projection: sort-based water filling.
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double running = 0.0;
    double tau = 0.0;
    int rho = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        running += u[i];
        const double t = (running - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) {
            rho = static_cast<int>(i + 1);
            tau = t;
        }
    }
    (void)rho;
    for (double& x : v) x = std::max(0.0, x - tau);
    return v;
}

}  // namespace

ExponentResult fn_exponent_known_source(const Pmf& p_x, const Pmf& p_y, double lambda,
                                        const DistortionSpec& distortion) {
    require_same_size(p_x.size(), p_y.size(), "fn_exponent_known_source");
    if (!(lambda > 0.0)) throw config_error("lambda must be positive");
    RegionQuery query{p_x, lambda, distortion, 1.0, Game::known_source};

    if (p_x.size() == 2) {
        const BinaryInterval region = binary_region_interval(query);
        const InnerMin inner = binary_inner_min(region, p_y[0]);
        return ExponentResult{inner.value, Pmf({inner.p0, 1.0 - inner.p0}), std::nullopt, 0,
                              0.0};
    }

    JointSolve inner = generic_inner_min(p_x, p_y, lambda, 1.0, Game::known_source,
                                         distortion);
    return ExponentResult{inner.value, Pmf(inner.row), std::nullopt, inner.iterations,
                          inner.gap};
}

ExponentResult fn_exponent_training(const Pmf& p_x, const Pmf& p_y, double lambda,
                                    const DistortionSpec& distortion, double ratio) {
    require_same_size(p_x.size(), p_y.size(), "fn_exponent_training");
    if (!(lambda > 0.0)) throw config_error("lambda must be positive");
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        throw invalid_ratio("training exponent needs a positive finite ratio");
    }

    // Membership of P_Y in the region around P_X pins the zero set exactly;
    // the witness is Q* = P_X.
    RegionQuery member_query{p_x, lambda, distortion, ratio, Game::training};
    if (in_indistinguishability_region(p_y, member_query)) {
        return ExponentResult{0.0, p_y, p_x, 0, 0.0};
    }

    if (p_x.size() == 2) {
        const double x0 = p_x[0];
        const double y0 = p_y[0];
        auto objective = [&](double q0) {
            RegionQuery query{Pmf({q0, 1.0 - q0}), lambda, distortion, ratio,
                              Game::training};
            const BinaryInterval region = binary_region_interval(query);
            return ratio * kl2(q0, x0) + binary_inner_min(region, y0).value;
        };
        BinaryOuter outer = binary_outer_min(objective, x0, y0);
        RegionQuery best_query{Pmf({outer.q0, 1.0 - outer.q0}), lambda, distortion, ratio,
                               Game::training};
        const InnerMin inner =
            binary_inner_min(binary_region_interval(best_query), y0);
        return ExponentResult{outer.value, Pmf({inner.p0, 1.0 - inner.p0}),
                              Pmf({outer.q0, 1.0 - outer.q0}), outer.evals,
                              outer.refine_shift};
    }

    // Generic path: multistart projected gradient over the conditioning pmf
    // with numerically differentiated objective.
    const int k = p_x.size();
    auto objective = [&](const Pmf& q) {
        return ratio * kl_divergence(q, p_x) +
               generic_inner_min(q, p_y, lambda, ratio, Game::training, distortion).value;
    };

    std::vector<Pmf> starts = {p_x, p_y, Pmf::uniform(Alphabet(k))};
    // Deterministic extra starts: blends between the corners.
    for (int s = 1; s <= 10; ++s) {
        const double t = static_cast<double>(s) / 11.0;
        std::vector<double> mix(static_cast<std::size_t>(k));
        for (int a = 0; a < k; ++a) {
            mix[static_cast<std::size_t>(a)] =
                t * p_x[a] + (1.0 - t) * (0.5 * p_y[a] + 0.5 / k);
        }
        starts.push_back(Pmf(std::move(mix)));
    }

    double best_value = kInf;
    Pmf best_q = p_x;
    int total_evals = 0;
    for (const Pmf& start : starts) {
        std::vector<double> q = start.probs();
        for (double& x : q) x = std::max(x, 1e-9);
        q = project_to_simplex(std::move(q));
        double value = objective(Pmf(q));
        total_evals += 1;
        double step = 0.05;
        for (int it = 0; it < 60 && step > 1e-7; ++it) {
            // Central-difference gradient inside the simplex.
            std::vector<double> grad(static_cast<std::size_t>(k), 0.0);
            const double h = 1e-5;
            for (int a = 0; a < k; ++a) {
                std::vector<double> plus = q;
                std::vector<double> minus = q;
                plus[static_cast<std::size_t>(a)] += h;
                minus[static_cast<std::size_t>(a)] =
                    std::max(1e-12, minus[static_cast<std::size_t>(a)] - h);
                grad[static_cast<std::size_t>(a)] =
                    (objective(Pmf(project_to_simplex(plus))) -
                     objective(Pmf(project_to_simplex(minus)))) /
                    (2.0 * h);
                total_evals += 2;
            }
            std::vector<double> trial(static_cast<std::size_t>(k));
            for (int a = 0; a < k; ++a) {
                trial[static_cast<std::size_t>(a)] =
                    q[static_cast<std::size_t>(a)] - step * grad[static_cast<std::size_t>(a)];
            }
            trial = project_to_simplex(std::move(trial));
            const double trial_value = objective(Pmf(trial));
            total_evals += 1;
            if (trial_value < value - 1e-12) {
                q = std::move(trial);
                value = trial_value;
                step = std::min(0.2, step * 1.6);
            } else {
                step *= 0.5;
            }
        }
        if (value < best_value) {
            best_value = value;
            best_q = Pmf(q);
        }
    }
    JointSolve inner = generic_inner_min(best_q, p_y, lambda, ratio, Game::training,
                                         distortion);
    return ExponentResult{best_value, Pmf(inner.row), best_q, total_evals, inner.gap};
}

ExponentBounds fn_exponent_independent_bounds(const Pmf& p_x, const Pmf& p_y, double lambda,
                                              const DistortionSpec& distortion, double ratio,
                                              double attacker_ratio) {
    if (!(attacker_ratio > 0.0) || !std::isfinite(attacker_ratio)) {
        throw invalid_ratio("independent-training bounds need a positive attacker ratio");
    }
    // Relaxing the attacker-estimate region to the shared-training one makes
    // the second training term decouple (its minimum sits at p_x), so the
    // relaxed lower bound is exactly the shared-training exponent.
    ExponentResult lower = fn_exponent_training(p_x, p_y, lambda, distortion, ratio);

    RegionQuery member_query{p_x, lambda, distortion, ratio, Game::training};
    if (in_indistinguishability_region(p_y, member_query)) {
        ExponentResult upper{0.0, p_y, p_x, 0, 0.0};
        return ExponentBounds{0.0, 0.0, true, std::move(upper)};
    }

    const double coeff = ratio + attacker_ratio;
    if (p_x.size() == 2) {
        const double x0 = p_x[0];
        const double y0 = p_y[0];
        auto objective = [&](double q0) {
            RegionQuery query{Pmf({q0, 1.0 - q0}), lambda, distortion, ratio,
                              Game::training};
            return coeff * kl2(q0, x0) +
                   binary_inner_min(binary_region_interval(query), y0).value;
        };
        BinaryOuter outer = binary_outer_min(objective, x0, y0);
        RegionQuery best_query{Pmf({outer.q0, 1.0 - outer.q0}), lambda, distortion, ratio,
                               Game::training};
        const InnerMin inner = binary_inner_min(binary_region_interval(best_query), y0);
        ExponentResult upper{outer.value, Pmf({inner.p0, 1.0 - inner.p0}),
                             Pmf({outer.q0, 1.0 - outer.q0}), outer.evals,
                             outer.refine_shift};
        return ExponentBounds{lower.value, upper.value, true, std::move(upper)};
    }

    // Generic upper bound: evaluate the heavier-coefficient objective at the
    // shared-training minimizer. Any evaluation point upper-bounds the
    // minimum, so this stays a valid (if looser) bound.
    const Pmf& q_star = lower.minimizer_q ? *lower.minimizer_q : p_x;
    JointSolve inner = generic_inner_min(q_star, p_y, lambda, ratio, Game::training,
                                         distortion);
    ExponentResult upper{coeff * kl_divergence(q_star, p_x) + inner.value, Pmf(inner.row),
                         q_star, inner.iterations, inner.gap};
    return ExponentBounds{lower.value, std::max(lower.value, upper.value), true,
                          std::move(upper)};
}

}  // namespace htgame
