#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "htgame/strategies.hpp"

namespace htgame {

// Query against the asymptotic indistinguishability region of one game:
// the set of source pmfs from which the attacker can reach the acceptance
// region around Q within the per-letter budget.
struct RegionQuery {
    Pmf q;
    double lambda;
    DistortionSpec distortion;
    double ratio;  // c; ignored by the known-source game
    Game game;
};

// Statistic within this band of lambda is classified as sitting on the
// region boundary and counted as a member (the region is closed).
constexpr double region_boundary_tolerance = 1e-7;

struct BallMinResult {
    double statistic;  // min acceptance statistic over the transport ball
    Pmf minimizer;
    int iterations;
    double gap;  // duality-gap certificate at exit; 0 for the exact path
};

// Minimum of the game's acceptance statistic over all pmfs reachable from p
// within the budget. Binary alphabets take an exact closed-form path;
// force_generic routes through the convex solver for validation.
BallMinResult min_statistic_over_ball(const Pmf& p, const RegionQuery& query,
                                      bool force_generic = false);

bool in_indistinguishability_region(const Pmf& p, const RegionQuery& query);

// Finite-n attack-success set: some type reachable from y within the budget
// lands inside the finite-n acceptance region conditioned on q.
bool in_success_region_n(const EmpiricalType& y, const Pmf& q, const GameConfig& config,
                         Game game);
bool in_success_region_n(const EmpiricalType& y, const EmpiricalType& training,
                         const GameConfig& config, Game game);

// Interval of P(0) values, for binary queries only.
struct BinaryInterval {
    double lo;
    double hi;
};

// The acceptance sublevel set { p' : stat(p', q) <= lambda } in P(0).
BinaryInterval binary_acceptance_interval(const RegionQuery& query);

// The indistinguishability region as an interval in P(0); exact up to the
// bisection tolerance of 1e-12.
BinaryInterval binary_region_interval(const RegionQuery& query);

struct RegionGridPoint {
    Pmf p;
    bool ks_member;
    bool tr_member;
};

struct RegionGrid {
    int resolution;
    std::vector<RegionGridPoint> points;
    std::int64_t both_count = 0;
    std::int64_t tr_only_count = 0;
    std::int64_t neither_count = 0;
};

// Evaluates both games at every simplex grid point (alphabets of size 2 or
// 3). A ks-member that is not a tr-member would contradict the pointwise
// ordering of the two statistics; the grid treats that as a hard error.
RegionGrid region_grid(const RegionQuery& query, int resolution, int threads = 1);

struct ConvergenceProbeEntry {
    std::int64_t n;
    std::optional<EmpiricalType> best;  // member type nearest to the target
    double l1_distance;
};

struct ConvergenceReport {
    std::vector<ConvergenceProbeEntry> entries;
    bool converged;  // monotone-trend decrease, final distance below 0.02
};

// Tracks how fast the finite-n success sets fill in around a target pmf as
// n grows, optionally with a drifting conditioning sequence.
ConvergenceReport convergence_probe(const Pmf& p_star, const std::vector<Pmf>& q_seq,
                                    const std::vector<std::int64_t>& n_schedule,
                                    const GameConfig& config_template, Game game);

}  // namespace htgame
