#include "htgame/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace htgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Successive-shortest-paths min-cost transportation on the complete bipartite
// symbol graph. Supplies and demands may be real; with integral inputs every
// augmentation amount is integral, which keeps the returned flows integral.
TransportPlan solve_transport(const std::vector<double>& supply,
                              const std::vector<double>& demand,
                              const DistortionSpec& spec) {
    const int k = static_cast<int>(supply.size());
    std::vector<double> remaining_supply = supply;
    std::vector<double> remaining_demand = demand;
    std::vector<std::vector<double>> flow(static_cast<std::size_t>(k),
                                          std::vector<double>(static_cast<std::size_t>(k), 0.0));

    // Node potentials make all reduced costs nonnegative so plain Dijkstra
    // over the (tiny) residual graph stays valid after each augmentation.
    // Reduced cost of the forward arc i->j is cost(i,j) + pi_src[i] - pi_dst[j];
    // the backward arc carries the negated expression.
    std::vector<double> pi_src(static_cast<std::size_t>(k), 0.0);
    std::vector<double> pi_dst(static_cast<std::size_t>(k), 0.0);

    auto total = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0);
    };
    double left = total(remaining_supply);

    while (left > 1e-12) {
        // Shortest augmenting distances from the set of supply nodes with
        // residual supply, through residual arcs, to every demand node.
        std::vector<double> dist_src(static_cast<std::size_t>(k), kInf);
        std::vector<double> dist_dst(static_cast<std::size_t>(k), kInf);
        std::vector<int> parent_dst(static_cast<std::size_t>(k), -1);  // src feeding dst
        std::vector<int> parent_src(static_cast<std::size_t>(k), -1);  // dst feeding src
        std::vector<bool> done_src(static_cast<std::size_t>(k), false);
        std::vector<bool> done_dst(static_cast<std::size_t>(k), false);

        for (int i = 0; i < k; ++i) {
            if (remaining_supply[static_cast<std::size_t>(i)] > 1e-13) {
                dist_src[static_cast<std::size_t>(i)] = 0.0;
            }
        }

        while (true) {
            // Pick the unfinished node (on either side) with smallest label.
            double best = kInf;
            int best_idx = -1;
            bool best_is_src = true;
            for (int i = 0; i < k; ++i) {
                if (!done_src[static_cast<std::size_t>(i)] &&
                    dist_src[static_cast<std::size_t>(i)] < best) {
                    best = dist_src[static_cast<std::size_t>(i)];
                    best_idx = i;
                    best_is_src = true;
                }
            }
            for (int j = 0; j < k; ++j) {
                if (!done_dst[static_cast<std::size_t>(j)] &&
                    dist_dst[static_cast<std::size_t>(j)] < best) {
                    best = dist_dst[static_cast<std::size_t>(j)];
                    best_idx = j;
                    best_is_src = false;
                }
            }
            if (best_idx < 0) break;
            if (best_is_src) {
                const int i = best_idx;
                done_src[static_cast<std::size_t>(i)] = true;
                for (int j = 0; j < k; ++j) {
                    const double rc = spec.cost(i, j) + pi_src[static_cast<std::size_t>(i)] -
                                      pi_dst[static_cast<std::size_t>(j)];
                    const double cand = dist_src[static_cast<std::size_t>(i)] + rc;
                    if (cand < dist_dst[static_cast<std::size_t>(j)] - 1e-18) {
                        dist_dst[static_cast<std::size_t>(j)] = cand;
                        parent_dst[static_cast<std::size_t>(j)] = i;
                    }
                }
            } else {
                const int j = best_idx;
                done_dst[static_cast<std::size_t>(j)] = true;
                for (int i = 0; i < k; ++i) {
                    if (flow[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] <= 1e-15) {
                        continue;  // no residual back-arc
                    }
                    const double rc = -spec.cost(i, j) + pi_dst[static_cast<std::size_t>(j)] -
                                      pi_src[static_cast<std::size_t>(i)];
                    const double cand = dist_dst[static_cast<std::size_t>(j)] + rc;
                    if (cand < dist_src[static_cast<std::size_t>(i)] - 1e-18) {
                        dist_src[static_cast<std::size_t>(i)] = cand;
                        parent_src[static_cast<std::size_t>(i)] = j;
                    }
                }
            }
        }

        // Cheapest reachable demand node with residual demand.
        int target = -1;
        double best = kInf;
        for (int j = 0; j < k; ++j) {
            if (remaining_demand[static_cast<std::size_t>(j)] > 1e-13 &&
                dist_dst[static_cast<std::size_t>(j)] < best) {
                best = dist_dst[static_cast<std::size_t>(j)];
                target = j;
            }
        }
        if (target < 0) {
            throw infeasible_transport("transportation instance is infeasible");
        }

        // Walk the path back to a supply node, find the bottleneck.
        double amount = remaining_demand[static_cast<std::size_t>(target)];
        {
            int j = target;
            while (true) {
                const int i = parent_dst[static_cast<std::size_t>(j)];
                const int back = parent_src[static_cast<std::size_t>(i)];
                if (back < 0) {
                    amount = std::min(amount, remaining_supply[static_cast<std::size_t>(i)]);
                    break;
                }
                amount = std::min(
                    amount, flow[static_cast<std::size_t>(i)][static_cast<std::size_t>(back)]);
                j = back;
            }
        }

        // Apply the augmentation.
        {
            int j = target;
            while (true) {
                const int i = parent_dst[static_cast<std::size_t>(j)];
                flow[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += amount;
                const int back = parent_src[static_cast<std::size_t>(i)];
                if (back < 0) {
                    remaining_supply[static_cast<std::size_t>(i)] -= amount;
                    break;
                }
                flow[static_cast<std::size_t>(i)][static_cast<std::size_t>(back)] -= amount;
                j = back;
            }
            remaining_demand[static_cast<std::size_t>(target)] -= amount;
        }
        left -= amount;

        // Johnson potential update keeps reduced costs nonnegative.
        for (int i = 0; i < k; ++i) {
            if (dist_src[static_cast<std::size_t>(i)] < kInf) {
                pi_src[static_cast<std::size_t>(i)] += dist_src[static_cast<std::size_t>(i)];
            }
        }
        for (int j = 0; j < k; ++j) {
            if (dist_dst[static_cast<std::size_t>(j)] < kInf) {
                pi_dst[static_cast<std::size_t>(j)] += dist_dst[static_cast<std::size_t>(j)];
            }
        }
    }

    TransportPlan plan;
    plan.flow = std::move(flow);
    plan.total_cost = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            plan.total_cost +=
                plan.flow[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                spec.cost(i, j);
        }
    }
    return plan;
}

}  // namespace

DistortionSpec::DistortionSpec(std::vector<std::vector<double>> cost, double budget_per_letter,
                               bool require_symmetric)
    : cost_(std::move(cost)), budget_(budget_per_letter) {
    const std::size_t k = cost_.size();
    if (k < 2) throw config_error("distortion matrix needs at least 2 symbols");
    for (std::size_t i = 0; i < k; ++i) {
        if (cost_[i].size() != k) throw config_error("distortion matrix must be square");
        for (std::size_t j = 0; j < k; ++j) {
            if (!std::isfinite(cost_[i][j]) || cost_[i][j] < 0.0) {
                throw config_error("distortion entries must be finite and nonnegative");
            }
            if (require_symmetric && std::abs(cost_[i][j] - cost_[j][i]) > 1e-12) {
                throw config_error("distortion matrix is not symmetric");
            }
        }
        if (cost_[i][i] != 0.0) throw config_error("distortion diagonal must be zero");
    }
    if (!std::isfinite(budget_) || budget_ < 0.0) {
        throw config_error("per-letter budget must be finite and nonnegative");
    }
}

DistortionSpec DistortionSpec::hamming(const Alphabet& alphabet, double budget_per_letter) {
    const std::size_t k = static_cast<std::size_t>(alphabet.size());
    std::vector<std::vector<double>> cost(k, std::vector<double>(k, 1.0));
    for (std::size_t i = 0; i < k; ++i) cost[i][i] = 0.0;
    return DistortionSpec(std::move(cost), budget_per_letter);
}

double DistortionSpec::max_cost() const {
    double m = 0.0;
    for (const auto& row : cost_) {
        for (double c : row) m = std::max(m, c);
    }
    return m;
}

DistortionSpec DistortionSpec::with_budget(double budget_per_letter) const {
    return DistortionSpec(cost_, budget_per_letter);
}

TransportResult min_transport_cost(const EmpiricalType& src, const EmpiricalType& dst,
                                   const DistortionSpec& spec) {
    require_same_size(src.size(), dst.size(), "min_transport_cost");
    require_same_size(src.size(), spec.size(), "min_transport_cost");
    if (src.length() != dst.length()) {
        throw infeasible_transport("transport between types of lengths " +
                                   std::to_string(src.length()) + " and " +
                                   std::to_string(dst.length()));
    }
    std::vector<double> supply(static_cast<std::size_t>(src.size()));
    std::vector<double> demand(static_cast<std::size_t>(dst.size()));
    for (int a = 0; a < src.size(); ++a) {
        supply[static_cast<std::size_t>(a)] = static_cast<double>(src.count(a));
        demand[static_cast<std::size_t>(a)] = static_cast<double>(dst.count(a));
    }
    TransportPlan plan = solve_transport(supply, demand, spec);
    return TransportResult{plan.total_cost, std::move(plan)};
}

bool reachable(const EmpiricalType& src, const EmpiricalType& dst, const DistortionSpec& spec) {
    const double total_budget = static_cast<double>(src.length()) * spec.budget();
    return min_transport_cost(src, dst, spec).cost <= total_budget + reach_tolerance;
}

TransportResult continuous_transport_plan(const Pmf& p, const Pmf& q,
                                          const DistortionSpec& spec) {
    require_same_size(p.size(), q.size(), "continuous_transport_cost");
    require_same_size(p.size(), spec.size(), "continuous_transport_cost");
    TransportPlan plan = solve_transport(p.probs(), q.probs(), spec);
    return TransportResult{plan.total_cost, std::move(plan)};
}

double continuous_transport_cost(const Pmf& p, const Pmf& q, const DistortionSpec& spec) {
    return continuous_transport_plan(p, q, spec).cost;
}

}  // namespace htgame
