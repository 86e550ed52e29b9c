#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace searchlab {

// Smallest 1-based t* such that v(t) >= tau for every t >= t* within the
// trace; empty when the trace never settles above tau. The trace must be
// non-empty.
std::optional<std::int64_t> tau_convergence_point(std::span<const double> v,
                                                  double tau);

// Predicted iterations to converge on a tree with two critical depths
// (even, 0 <= d1 < d2):
//   a * C^(d1/2) + b * 2^(d1/2) * C^((d2-d1)/2)
double model_two_step(int d1, int d2, double a, double b, double C);

// Generalization over the gaps between consecutive critical depths (each
// even and >= 0):
//   U(g1..gk) = a * C^(g1/2) + b * 2^(g1/2) * U(g2..gk),  U(g) = a * C^(g/2)
double model_k_step(std::span<const int> gaps, double a, double b, double C);

// Extra all-(+1) samples needed to pull a node's running mean from `value`
// (after `iter` samples) up to tau: iter * (tau - value) / (1 - tau), or 0
// when value already meets tau.
double catch_up_visits(double value, double iter, double tau);

// Integer companion: the smallest integer n >= 0 with
// (n + iter * value) / (n + iter) >= tau, evaluated in double arithmetic.
std::int64_t catch_up_visits_int(double value, double iter, double tau);

// Expected root visits for the greedy variant to settle on the sure win when
// the rival subtree holds a fraction p of +1 leaves:
//   2/(1-p) + (1 + tau - 2p) / ((1-eps) * (1-p) * (1-tau))
double scenario_a_visits(double p, double eps, double tau);

// Root visits spent on a two-step win after the root tie breaks, given the
// catch-up cost of the level-2 decision. The favorable start explores the
// winning side first; the unfavorable one pays 2/eps instead of 2/(1-eps).
double scenario_b_branch_visits(bool favorable, double p, double eps,
                                double catchup);

// Expected total for the two-step scenario: tie-break time at the root plus
// the favorable/unfavorable mix, weighted by first-sample agreement. The
// left +1-fraction defaults to p' = 3p/4 and may be overridden.
double scenario_b_total(double p, double q, double eps, double catchup,
                        std::optional<double> p_prime = std::nullopt);

struct Observation {
  int d1;
  int d2;
  double mean_iters;
};

struct FitResult {
  double a = 0.0;
  double b = 0.0;
  double C = 0.0;
  std::vector<double> residuals;  // log(model) - log(observed), per point
  double rms = 0.0;
};

// Least-squares fit of the two-step model on log residuals. Needs at least
// four observations with distinct (d1, d2).
FitResult fit_runtime_model(std::span<const Observation> obs);

}  // namespace searchlab
