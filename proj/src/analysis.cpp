#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "errors.hpp"

namespace searchlab {

std::optional<std::int64_t> tau_convergence_point(std::span<const double> v,
                                                  double tau) {
  require(!v.empty(), ErrorCode::InvalidArgument,
          "convergence point: empty trace");
  for (std::size_t i = v.size(); i-- > 0;) {
    if (v[i] < tau) {
      if (i + 1 == v.size()) return std::nullopt;  // still below at the end
      return static_cast<std::int64_t>(i) + 2;     // 1-based, next step
    }
  }
  return 1;
}

double model_two_step(int d1, int d2, double a, double b, double C) {
  require(C > 0.0, ErrorCode::InvalidArgument, "model: C must be positive");
  require(d1 >= 0 && d1 < d2 && d1 % 2 == 0 && d2 % 2 == 0,
          ErrorCode::InvalidArgument,
          "model: depths must be even with 0 <= d1 < d2");
  return a * std::pow(C, d1 / 2.0) +
         b * std::pow(2.0, d1 / 2.0) * std::pow(C, (d2 - d1) / 2.0);
}

double model_k_step(std::span<const int> gaps, double a, double b, double C) {
  require(!gaps.empty(), ErrorCode::InvalidArgument, "model: no gaps");
  require(C > 0.0, ErrorCode::InvalidArgument, "model: C must be positive");
  for (int g : gaps)
    require(g >= 0 && g % 2 == 0, ErrorCode::InvalidArgument,
            "model: gaps must be even and >= 0");
  double u = a * std::pow(C, gaps.back() / 2.0);
  for (std::size_t i = gaps.size() - 1; i-- > 0;) {
    double g = gaps[i];
    u = a * std::pow(C, g / 2.0) + b * std::pow(2.0, g / 2.0) * u;
  }
  return u;
}

double catch_up_visits(double value, double iter, double tau) {
  require(tau > -1.0 && tau < 1.0, ErrorCode::InvalidArgument,
          "catch_up: tau must be in (-1, 1)");
  require(iter >= 1.0, ErrorCode::InvalidArgument,
          "catch_up: iter must be >= 1");
  if (value >= tau) return 0.0;
  return iter * (tau - value) / (1.0 - tau);
}

std::int64_t catch_up_visits_int(double value, double iter, double tau) {
  auto reaches = [&](double n) {
    return (n + iter * value) / (n + iter) >= tau;
  };
  double x = catch_up_visits(value, iter, tau);
  auto n = static_cast<std::int64_t>(std::ceil(x));
  if (n < 0) n = 0;
  // Settle boundary rounding against the defining inequality.
  while (n > 0 && reaches(static_cast<double>(n - 1))) --n;
  while (!reaches(static_cast<double>(n))) ++n;
  return n;
}

double scenario_a_visits(double p, double eps, double tau) {
  require(p >= 0.0 && p < 1.0, ErrorCode::InvalidArgument,
          "scenario_a: p must be in [0, 1); at p = 1 the root tie never breaks");
  require(eps >= 0.0 && eps < 1.0, ErrorCode::InvalidArgument,
          "scenario_a: eps must be in [0, 1)");
  require(tau > -1.0 && tau < 1.0, ErrorCode::InvalidArgument,
          "scenario_a: tau must be in (-1, 1)");
  return 2.0 / (1.0 - p) +
         (1.0 + tau - 2.0 * p) / ((1.0 - eps) * (1.0 - p) * (1.0 - tau));
}

double scenario_b_branch_visits(bool favorable, double p, double eps,
                                double catchup) {
  require(p >= 0.0 && p < 1.0, ErrorCode::InvalidArgument,
          "scenario_b: p must be in [0, 1)");
  require(eps > 0.0 && eps < 1.0, ErrorCode::InvalidArgument,
          "scenario_b: eps must be in (0, 1)");
  require(catchup >= 0.0, ErrorCode::InvalidArgument,
          "scenario_b: catch-up must be >= 0");
  double inner = 2.0 / (1.0 - p) + catchup / (1.0 - eps);
  return (favorable ? 2.0 / (1.0 - eps) : 2.0 / eps) * inner;
}

double scenario_b_total(double p, double q, double eps, double catchup,
                        std::optional<double> p_prime) {
  double pp = p_prime.value_or(0.75 * p);
  require(pp >= 0.0 && pp <= 1.0 && q >= 0.0 && q <= 1.0,
          ErrorCode::InvalidArgument,
          "scenario_b: fractions must be in [0, 1]");
  double tie_break = pp + q - 2.0 * pp * q;  // P(first samples disagree)
  require(tie_break > 0.0, ErrorCode::InvalidArgument,
          "scenario_b: root tie never breaks for these fractions");
  double fav = scenario_b_branch_visits(true, p, eps, catchup);
  double unfav = scenario_b_branch_visits(false, p, eps, catchup);
  double mix = pp * (1.0 - q) * fav + (1.0 - pp) * q * unfav;
  return 2.0 / tie_break + mix / tie_break;
}

// ---------------------------------------------------------------------------

namespace {

// Solve a 3x3 linear system in place; returns false when singular.
bool solve3(double A[3][3], double b[3], double x[3]) {
  int idx[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(A[idx[r]][col]) > std::fabs(A[idx[piv]][col])) piv = r;
    std::swap(idx[col], idx[piv]);
    double d = A[idx[col]][col];
    if (std::fabs(d) < 1e-300) return false;
    for (int r = col + 1; r < 3; ++r) {
      double f = A[idx[r]][col] / d;
      for (int c = col; c < 3; ++c) A[idx[r]][c] -= f * A[idx[col]][c];
      b[idx[r]] -= f * b[idx[col]];
    }
  }
  for (int col = 3; col-- > 0;) {
    double s = b[idx[col]];
    for (int c = col + 1; c < 3; ++c) s -= A[idx[col]][c] * x[c];
    x[col] = s / A[idx[col]][col];
  }
  return true;
}

struct LogParams {
  double alpha, beta, gamma;  // ln a, ln b, ln C
};

double fit_cost(std::span<const Observation> obs, const LogParams& th,
                std::vector<double>* residuals) {
  double cost = 0.0;
  if (residuals) residuals->clear();
  for (const Observation& o : obs) {
    double u = std::exp(th.alpha + th.gamma * o.d1 / 2.0);
    double w = std::exp(th.beta + std::log(2.0) * o.d1 / 2.0 +
                        th.gamma * (o.d2 - o.d1) / 2.0);
    double r = std::log(u + w) - std::log(o.mean_iters);
    cost += r * r;
    if (residuals) residuals->push_back(r);
  }
  return cost;
}

LogParams initial_guess(std::span<const Observation> obs, double C0) {
  // Ordinary least squares for (a, b) at fixed C, on the raw scale.
  double suu = 0, suw = 0, sww = 0, suy = 0, swy = 0;
  for (const Observation& o : obs) {
    double u = std::pow(C0, o.d1 / 2.0);
    double w = std::pow(2.0, o.d1 / 2.0) * std::pow(C0, (o.d2 - o.d1) / 2.0);
    suu += u * u;
    suw += u * w;
    sww += w * w;
    suy += u * o.mean_iters;
    swy += w * o.mean_iters;
  }
  double det = suu * sww - suw * suw;
  double a = 1.0, b = 1.0;
  if (std::fabs(det) > 1e-12) {
    a = (suy * sww - swy * suw) / det;
    b = (suu * swy - suw * suy) / det;
  }
  double scale = obs[0].mean_iters;
  if (a < 1e-6) a = std::max(1e-6, 0.01 * scale);
  if (b < 1e-6) b = std::max(1e-6, 0.01 * scale);
  return {std::log(a), std::log(b), std::log(C0)};
}

LogParams refine(std::span<const Observation> obs, LogParams th) {
  double lambda = 1e-3;
  double cost = fit_cost(obs, th, nullptr);
  for (int step = 0; step < 500; ++step) {
    // Gauss-Newton normal equations with Levenberg damping.
    double JtJ[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double Jtr[3] = {0, 0, 0};
    for (const Observation& o : obs) {
      double u = std::exp(th.alpha + th.gamma * o.d1 / 2.0);
      double w = std::exp(th.beta + std::log(2.0) * o.d1 / 2.0 +
                          th.gamma * (o.d2 - o.d1) / 2.0);
      double m = u + w;
      double r = std::log(m) - std::log(o.mean_iters);
      double j[3] = {u / m, w / m,
                     (u * o.d1 / 2.0 + w * (o.d2 - o.d1) / 2.0) / m};
      for (int i = 0; i < 3; ++i) {
        Jtr[i] += j[i] * r;
        for (int k = 0; k < 3; ++k) JtJ[i][k] += j[i] * j[k];
      }
    }
    double A[3][3];
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) A[i][k] = JtJ[i][k] + (i == k ? lambda : 0.0);
    double rhs[3] = {-Jtr[0], -Jtr[1], -Jtr[2]};
    double dx[3];
    if (!solve3(A, rhs, dx)) break;
    LogParams cand{th.alpha + dx[0], th.beta + dx[1], th.gamma + dx[2]};
    double cand_cost = fit_cost(obs, cand, nullptr);
    if (cand_cost < cost) {
      double gain = cost - cand_cost;
      th = cand;
      cost = cand_cost;
      lambda = std::max(lambda * 0.5, 1e-12);
      if (gain < 1e-16 &&
          std::fabs(dx[0]) + std::fabs(dx[1]) + std::fabs(dx[2]) < 1e-12)
        break;
    } else {
      lambda *= 4.0;
      if (lambda > 1e12) break;
    }
  }
  return th;
}

}  // namespace

FitResult fit_runtime_model(std::span<const Observation> obs) {
  std::set<std::pair<int, int>> distinct;
  for (const Observation& o : obs) {
    require(o.mean_iters > 0.0, ErrorCode::InvalidArgument,
            "fit: observations must be positive");
    require(o.d1 >= 0 && o.d2 > o.d1, ErrorCode::InvalidArgument,
            "fit: need 0 <= d1 < d2");
    distinct.insert({o.d1, o.d2});
  }
  require(distinct.size() >= 4, ErrorCode::InvalidArgument,
          "fit: underdetermined, need at least 4 distinct (d1, d2) points");

  LogParams best{};
  double best_cost = std::numeric_limits<double>::infinity();
  for (double C0 : {1.6, 2.0, 2.37, 2.8, 3.4}) {
    LogParams th = refine(obs, initial_guess(obs, C0));
    double cost = fit_cost(obs, th, nullptr);
    if (cost < best_cost) {
      best_cost = cost;
      best = th;
    }
  }

  FitResult out;
  out.a = std::exp(best.alpha);
  out.b = std::exp(best.beta);
  out.C = std::exp(best.gamma);
  fit_cost(obs, best, &out.residuals);
  double s = 0.0;
  for (double r : out.residuals) s += r * r;
  out.rms = std::sqrt(s / static_cast<double>(out.residuals.size()));
  return out;
}

}  // namespace searchlab
