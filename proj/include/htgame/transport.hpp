#pragma once

#include <cstdint>
#include <vector>

#include "htgame/types.hpp"

namespace htgame {

// Per-symbol-pair substitution costs plus the per-letter budget D. The cost
// of rewriting a whole sequence is additive over letters, so feasibility of
// an attack depends on the source and destination types only.
class DistortionSpec {
public:
    DistortionSpec(std::vector<std::vector<double>> cost, double budget_per_letter,
                   bool require_symmetric = false);

    // Hamming distortion: unit cost for every substitution.
    static DistortionSpec hamming(const Alphabet& alphabet, double budget_per_letter);

    int size() const { return static_cast<int>(cost_.size()); }
    double cost(int i, int j) const {
        return cost_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    const std::vector<std::vector<double>>& cost_matrix() const { return cost_; }
    double budget() const { return budget_; }
    double max_cost() const;

    DistortionSpec with_budget(double budget_per_letter) const;

private:
    std::vector<std::vector<double>> cost_;
    double budget_;
};

// Integer substitution counts realizing an attack: flow(i, j) letters are
// rewritten from symbol i to symbol j.
struct TransportPlan {
    std::vector<std::vector<double>> flow;
    double total_cost = 0.0;
};

struct TransportResult {
    double cost;
    TransportPlan plan;
};

// Minimum total substitution cost moving the source counts onto the
// destination counts. The transportation polytope has integral vertices, so
// the integer optimum coincides with the linear-program optimum; the solver
// keeps integral flows for integral inputs.
TransportResult min_transport_cost(const EmpiricalType& src, const EmpiricalType& dst,
                                   const DistortionSpec& spec);

constexpr double reach_tolerance = 1e-9;

// True iff the destination type is attainable from the source type within
// the total budget n*D.
bool reachable(const EmpiricalType& src, const EmpiricalType& dst,
               const DistortionSpec& spec);

// Per-letter optimal transport cost between two pmfs (minimum coupling cost);
// equals min_transport_cost / n when the pmfs are exact types of length n.
double continuous_transport_cost(const Pmf& p, const Pmf& q, const DistortionSpec& spec);

TransportResult continuous_transport_plan(const Pmf& p, const Pmf& q,
                                          const DistortionSpec& spec);

}  // namespace htgame
