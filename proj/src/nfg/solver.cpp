#include "nashcsg/nfg/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "nashcsg/util/parallel.hpp"

namespace nashcsg {

double expected_utility(const NormalFormGame& game, const MixedProfile& profile, PlayerId player) {
  double total = 0.0;
  for (std::size_t j = 0; j < game.num_joint_actions(); ++j) {
    double w = 1.0;
    for (PlayerId k = 0; k < game.num_players() && w != 0.0; ++k) w *= profile[k][game.action_of(j, k)];
    if (w != 0.0) total += w * game.utility(j, player);
  }
  return total;
}

namespace {

// U_i(a, sigma_{-i}) for every action a of player i.
std::vector<double> deviation_values(const NormalFormGame& game, const MixedProfile& profile, PlayerId player) {
  std::vector<double> out(game.num_actions(player), 0.0);
  for (std::size_t j = 0; j < game.num_joint_actions(); ++j) {
    if (game.action_of(j, player) != 0) continue;
    double w = 1.0;
    for (PlayerId k = 0; k < game.num_players() && w != 0.0; ++k) {
      if (k != player) w *= profile[k][game.action_of(j, k)];
    }
    if (w == 0.0) continue;
    for (int a = 0; a < game.num_actions(player); ++a) out[a] += w * game.utility(game.deviate(j, player, a), player);
  }
  return out;
}

}  // namespace

double regret(const NormalFormGame& game, const MixedProfile& profile, PlayerId player) {
  const auto dev = deviation_values(game, profile, player);
  double current = 0.0;
  for (int a = 0; a < game.num_actions(player); ++a) current += profile[player][a] * dev[a];
  return *std::max_element(dev.begin(), dev.end()) - current;
}

MixedProfile ReducedGame::expand(const MixedProfile& reduced, const NormalFormGame& original) const {
  MixedProfile out(original.num_players());
  for (PlayerId i = 0; i < original.num_players(); ++i) {
    out[i].assign(original.num_actions(i), 0.0);
    for (std::size_t r = 0; r < kept[i].size(); ++r) out[i][kept[i][r]] = reduced[i][r];
  }
  return out;
}

ReducedGame filter_dominated(const NormalFormGame& game, double margin) {
  const int n = game.num_players();
  std::vector<std::vector<int>> alive(n);
  for (PlayerId i = 0; i < n; ++i) {
    for (int a = 0; a < game.num_actions(i); ++a) alive[i].push_back(a);
  }
  std::vector<Removal> log;

  // Opponent cells restricted to surviving actions, as joint indices with
  // player i's component set to 0.
  auto opponent_cells = [&](PlayerId i) {
    std::vector<std::size_t> cells;
    std::vector<int> pos(n, 0);
    while (true) {
      std::vector<int> actions(n, 0);
      for (PlayerId k = 0; k < n; ++k) actions[k] = (k == i) ? 0 : alive[k][pos[k]];
      cells.push_back(game.joint_index(actions));
      int k = n - 1;
      while (k >= 0) {
        if (k != i && ++pos[k] < static_cast<int>(alive[k].size())) break;
        pos[k] = 0;
        --k;
      }
      if (k < 0) break;
    }
    return cells;
  };

  int round = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    ++round;
    for (PlayerId i = 0; i < n; ++i) {
      if (alive[i].size() < 2) continue;
      const auto cells = opponent_cells(i);
      for (std::size_t x = 0; x < alive[i].size(); ++x) {
        const int a = alive[i][x];
        int dominator = -1;
        for (int b : alive[i]) {
          if (b == a) continue;
          bool dominates = true;
          for (std::size_t cell : cells) {
            if (!(game.utility(game.deviate(cell, i, b), i) - game.utility(game.deviate(cell, i, a), i) > margin)) {
              dominates = false;
              break;
            }
          }
          if (dominates) {
            dominator = b;
            break;
          }
        }
        if (dominator >= 0) {
          log.push_back({i, a, dominator, round});
          alive[i].erase(alive[i].begin() + static_cast<long>(x));
          changed = true;
          break;  // cells changed for the others; re-scan this player next round
        }
      }
    }
  }

  ReducedGame out;
  out.kept = alive;
  out.log = std::move(log);
  std::vector<int> counts(n);
  for (PlayerId i = 0; i < n; ++i) counts[i] = static_cast<int>(alive[i].size());
  out.game = NormalFormGame(counts);
  std::vector<int> original(n);
  for (std::size_t j = 0; j < out.game.num_joint_actions(); ++j) {
    for (PlayerId i = 0; i < n; ++i) original[i] = alive[i][out.game.action_of(j, i)];
    const std::size_t oj = game.joint_index(original);
    for (PlayerId i = 0; i < n; ++i) out.game.set_utility(j, i, game.utility(oj, i));
  }
  if (game.has_action_names()) {
    std::vector<std::vector<std::string>> names(n);
    for (PlayerId i = 0; i < n; ++i) {
      for (int a : alive[i]) names[i].push_back(game.action_name(i, a));
    }
    out.game.set_action_names(std::move(names));
  }
  return out;
}

int Support::size(PlayerId player) const { return std::popcount(masks[player]); }

int Support::total_size() const {
  int total = 0;
  for (auto m : masks) total += std::popcount(m);
  return total;
}

bool Support::is_pure() const {
  return std::all_of(masks.begin(), masks.end(), [](std::uint64_t m) { return std::popcount(m) == 1; });
}

std::vector<int> Support::actions(PlayerId player) const {
  std::vector<int> out;
  for (int a = 0; a < 64; ++a) {
    if ((masks[player] >> a) & 1u) out.push_back(a);
  }
  return out;
}

std::string Support::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (i > 0) out << " x ";
    out << "{";
    bool first = true;
    for (int a : actions(static_cast<PlayerId>(i))) {
      if (!first) out << ",";
      out << a;
      first = false;
    }
    out << "}";
  }
  return out.str();
}

std::uint64_t count_supports(const std::vector<int>& action_counts) {
  std::uint64_t total = 1;
  for (int k : action_counts) {
    if (k >= 63) throw SolverError("support space too large");
    const std::uint64_t per = (std::uint64_t{1} << k) - 1;
    if (total > std::numeric_limits<std::uint64_t>::max() / per) throw SolverError("support space too large");
    total *= per;
  }
  return total;
}

std::vector<Support> enumerate_supports(const std::vector<int>& action_counts) {
  const std::uint64_t total = count_supports(action_counts);
  if (total > 50'000'000) throw SolverError("support space too large: " + std::to_string(total) + " supports");
  const std::size_t n = action_counts.size();
  std::vector<Support> out;
  out.reserve(total);
  std::vector<std::uint64_t> masks(n, 1);
  while (true) {
    out.push_back(Support{masks});
    int i = static_cast<int>(n) - 1;
    while (i >= 0) {
      if (++masks[i] < (std::uint64_t{1} << action_counts[i])) break;
      masks[i] = 1;
      --i;
    }
    if (i < 0) break;
  }
  // Lexicographic generation order is preserved within each size class.
  std::stable_sort(out.begin(), out.end(),
                   [](const Support& a, const Support& b) { return a.total_size() < b.total_size(); });
  return out;
}

PureCheck check_pure_profile(const NormalFormGame& game, std::span<const int> actions, double tolerance) {
  PureCheck out;
  const std::size_t j = game.joint_index(actions);
  out.is_ne = true;
  for (PlayerId i = 0; i < game.num_players(); ++i) {
    const double current = game.utility(j, i);
    out.values.push_back(current);
    double best = 0.0;
    for (int a = 0; a < game.num_actions(i); ++a) best = std::max(best, game.utility(game.deviate(j, i, a), i) - current);
    out.gains.push_back(best);
    if (best > tolerance) out.is_ne = false;
  }
  return out;
}

namespace {

// Joint indices of the product of the support sets.
std::vector<std::size_t> support_joints(const NormalFormGame& game, const Support& support) {
  const int n = game.num_players();
  std::vector<std::vector<int>> sets(n);
  for (PlayerId i = 0; i < n; ++i) sets[i] = support.actions(i);
  std::vector<std::size_t> out;
  std::vector<int> pos(n, 0), actions(n);
  while (true) {
    for (PlayerId i = 0; i < n; ++i) actions[i] = sets[i][pos[i]];
    out.push_back(game.joint_index(actions));
    int i = n - 1;
    while (i >= 0 && ++pos[i] == static_cast<int>(sets[i].size())) pos[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace

bool presolve_support(const NormalFormGame& game, const Support& support, double margin) {
  if (support.is_pure()) return true;
  const int n = game.num_players();
  const auto joints = support_joints(game, support);
  for (PlayerId i = 0; i < n; ++i) {
    const auto in = support.actions(i);
    const int pivot = in.front();
    // Opponent cells within the support, represented with player i at pivot.
    std::vector<std::size_t> cells;
    for (std::size_t j : joints) {
      if (game.action_of(j, i) == pivot) cells.push_back(j);
    }
    auto dominates = [&](int b, int a) {
      for (std::size_t cell : cells) {
        if (!(game.utility(game.deviate(cell, i, b), i) - game.utility(game.deviate(cell, i, a), i) > margin)) return false;
      }
      return true;
    };
    if (in.size() > 1) {
      for (int a : in) {
        for (int b : in) {
          if (a != b && dominates(b, a)) return false;
        }
      }
    }
    for (int out_action = 0; out_action < game.num_actions(i); ++out_action) {
      if (support.contains(i, out_action)) continue;
      if (std::all_of(in.begin(), in.end(), [&](int b) { return dominates(out_action, b); })) return false;
    }
  }
  return true;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// The feasibility system of one support. Variables are the probabilities of
// the non-pivot support actions of players with more than one support action;
// each pivot takes the remaining mass, so the simplex equalities hold exactly.
class SupportProblem {
 public:
  SupportProblem(const NormalFormGame& game, const Support& support, double delta)
      : game_(game), support_(support), delta_(delta), n_(game.num_players()) {
    joints_ = support_joints(game, support);
    pivot_joints_.resize(n_);
    for (PlayerId i = 0; i < n_; ++i) {
      sets_.push_back(support.actions(i));
      offset_.push_back(num_vars_);
      num_vars_ += static_cast<int>(sets_[i].size()) - 1;
      for (std::size_t j : joints_) {
        if (game.action_of(j, i) == sets_[i].front()) pivot_joints_[i].push_back(j);
      }
    }
    for (PlayerId i = 0; i < n_; ++i) {
      num_indiff_ += static_cast<int>(sets_[i].size()) - 1;
      num_outside_ += game.num_actions(i) - static_cast<int>(sets_[i].size());
      if (sets_[i].size() > 1) num_positive_ += static_cast<int>(sets_[i].size());
    }
  }

  int num_vars() const { return num_vars_; }
  int num_rows() const { return num_indiff_ + num_outside_ + num_positive_; }
  int num_indiff() const { return num_indiff_; }

  MixedProfile profile(const VectorXd& x) const {
    MixedProfile p(n_);
    for (PlayerId i = 0; i < n_; ++i) {
      p[i].assign(game_.num_actions(i), 0.0);
      double rest = 1.0;
      for (std::size_t k = 1; k < sets_[i].size(); ++k) {
        const double v = x[offset_[i] + static_cast<int>(k) - 1];
        p[i][sets_[i][k]] = v;
        rest -= v;
      }
      p[i][sets_[i][0]] = rest;
    }
    return p;
  }

  // Raw constraint values: indifference rows (== 0), outside rows and
  // positivity rows (<= 0).
  VectorXd raw(const VectorXd& x, std::vector<std::vector<double>>* dev_out = nullptr) const {
    const MixedProfile p = profile(x);
    std::vector<std::vector<double>> dev(n_);
    for (PlayerId i = 0; i < n_; ++i) {
      dev[i].assign(game_.num_actions(i), 0.0);
      for (std::size_t j : pivot_joints_[i]) {
        double w = 1.0;
        for (PlayerId k = 0; k < n_; ++k) {
          if (k != i) w *= p[k][game_.action_of(j, k)];
        }
        for (int a = 0; a < game_.num_actions(i); ++a) dev[i][a] += w * game_.utility(game_.deviate(j, i, a), i);
      }
    }
    VectorXd r(num_rows());
    int row = 0;
    for (PlayerId i = 0; i < n_; ++i) {
      const double pivot = dev[i][sets_[i][0]];
      for (std::size_t k = 1; k < sets_[i].size(); ++k) r[row++] = dev[i][sets_[i][k]] - pivot;
    }
    for (PlayerId i = 0; i < n_; ++i) {
      const double pivot = dev[i][sets_[i][0]];
      for (int a = 0; a < game_.num_actions(i); ++a) {
        if (!support_.contains(i, a)) r[row++] = dev[i][a] - pivot;
      }
    }
    for (PlayerId i = 0; i < n_; ++i) {
      if (sets_[i].size() < 2) continue;
      for (int a : sets_[i]) r[row++] = delta_ - p[i][a];
    }
    if (dev_out) *dev_out = std::move(dev);
    return r;
  }

  VectorXd residual(const VectorXd& x) const {
    VectorXd r = raw(x);
    for (int k = num_indiff_; k < r.size(); ++k) r[k] = std::max(0.0, r[k]);
    return r;
  }

  double welfare(const VectorXd& x) const {
    const MixedProfile p = profile(x);
    double total = 0.0;
    for (std::size_t j : joints_) {
      double w = 1.0;
      for (PlayerId k = 0; k < n_; ++k) w *= p[k][game_.action_of(j, k)];
      for (PlayerId i = 0; i < n_; ++i) total += w * game_.utility(j, i);
    }
    return total;
  }

  std::vector<double> values(const VectorXd& x) const {
    const MixedProfile p = profile(x);
    std::vector<double> out(n_, 0.0);
    for (std::size_t j : joints_) {
      double w = 1.0;
      for (PlayerId k = 0; k < n_; ++k) w *= p[k][game_.action_of(j, k)];
      for (PlayerId i = 0; i < n_; ++i) out[i] += w * game_.utility(j, i);
    }
    return out;
  }

  VectorXd centroid() const {
    VectorXd x(num_vars_);
    for (PlayerId i = 0; i < n_; ++i) {
      for (std::size_t k = 1; k < sets_[i].size(); ++k) x[offset_[i] + static_cast<int>(k) - 1] = 1.0 / sets_[i].size();
    }
    return x;
  }

  VectorXd random_start(std::mt19937_64& rng) const {
    std::exponential_distribution<double> expo(1.0);
    VectorXd x(num_vars_);
    for (PlayerId i = 0; i < n_; ++i) {
      if (sets_[i].size() < 2) continue;
      std::vector<double> w(sets_[i].size());
      double sum = 0.0;
      for (auto& v : w) {
        v = expo(rng) + 1e-3;
        sum += v;
      }
      for (std::size_t k = 1; k < sets_[i].size(); ++k) x[offset_[i] + static_cast<int>(k) - 1] = w[k] / sum;
    }
    return x;
  }

  // Multilinear rows are exactly differentiated by central differences away
  // from the hinge kinks.
  template <typename F>
  MatrixXd jacobian(const VectorXd& x, F&& f, int rows) const {
    const double h = 1e-6;
    MatrixXd jac(rows, num_vars_);
    VectorXd y = x;
    for (int v = 0; v < num_vars_; ++v) {
      y[v] = x[v] + h;
      const VectorXd up = f(y);
      y[v] = x[v] - h;
      const VectorXd down = f(y);
      y[v] = x[v];
      jac.col(v) = (up - down) / (2 * h);
    }
    return jac;
  }

  VectorXd welfare_gradient(const VectorXd& x) const {
    const double h = 1e-6;
    VectorXd g(num_vars_);
    VectorXd y = x;
    for (int v = 0; v < num_vars_; ++v) {
      y[v] = x[v] + h;
      const double up = welfare(y);
      y[v] = x[v] - h;
      const double down = welfare(y);
      y[v] = x[v];
      g[v] = (up - down) / (2 * h);
    }
    return g;
  }

 private:
  const NormalFormGame& game_;
  const Support& support_;
  double delta_;
  int n_;
  std::vector<std::size_t> joints_;
  std::vector<std::vector<int>> sets_;
  std::vector<int> offset_;
  std::vector<std::vector<std::size_t>> pivot_joints_;
  int num_vars_ = 0;
  int num_indiff_ = 0;
  int num_outside_ = 0;
  int num_positive_ = 0;
};

enum class LmExit { kConverged, kStationary, kCapped };

struct LmResult {
  VectorXd x;
  double max_violation;
  LmExit exit;
  int iterations;
};

LmResult levenberg_marquardt(const SupportProblem& problem, VectorXd x, double target, int max_iterations) {
  auto f = [&](const VectorXd& y) { return problem.residual(y); };
  VectorXd r = f(x);
  double cost = 0.5 * r.squaredNorm();
  double lambda = 1e-3;
  int it = 0;
  LmExit exit = LmExit::kCapped;
  int stalled = 0;
  for (; it < max_iterations; ++it) {
    if (r.size() == 0 || r.cwiseAbs().maxCoeff() <= target) {
      exit = LmExit::kConverged;
      break;
    }
    const MatrixXd jac = problem.jacobian(x, f, static_cast<int>(r.size()));
    const VectorXd grad = jac.transpose() * r;
    if (grad.cwiseAbs().maxCoeff() < 1e-18) {
      exit = LmExit::kStationary;
      break;
    }
    const MatrixXd normal = jac.transpose() * jac;
    bool accepted = false;
    while (lambda < 1e14) {
      MatrixXd damped = normal;
      for (int v = 0; v < damped.rows(); ++v) damped(v, v) += lambda * (normal(v, v) + 1e-9);
      const VectorXd step = damped.ldlt().solve(-grad);
      const VectorXd candidate = x + step;
      const VectorXd rc = f(candidate);
      const double cc = 0.5 * rc.squaredNorm();
      if (std::isfinite(cc) && cc < cost) {
        stalled = (cost - cc < 1e-14 * std::max(cost, 1e-30)) ? stalled + 1 : 0;
        x = candidate;
        r = rc;
        cost = cc;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted || stalled >= 5) {
      exit = LmExit::kStationary;
      break;
    }
  }
  const double violation = r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
  if (exit == LmExit::kCapped && violation <= target) exit = LmExit::kConverged;
  return {x, violation, exit, it};
}

// Moves along the null space of the active constraints to increase welfare,
// restoring feasibility after each step.
VectorXd ascend_welfare(const SupportProblem& problem, VectorXd x, double tau, int max_iterations) {
  double w = problem.welfare(x);
  for (int outer = 0; outer < 30; ++outer) {
    const VectorXd rawv = problem.raw(x);
    const MatrixXd jac =
        problem.jacobian(x, [&](const VectorXd& y) { return problem.raw(y); }, static_cast<int>(rawv.size()));
    std::vector<int> active;
    for (int k = 0; k < rawv.size(); ++k) {
      if (k < problem.num_indiff() || rawv[k] > -1e-7) active.push_back(k);
    }
    const VectorXd grad = problem.welfare_gradient(x);
    VectorXd dir = grad;
    if (!active.empty()) {
      MatrixXd a(static_cast<int>(active.size()), problem.num_vars());
      for (std::size_t k = 0; k < active.size(); ++k) a.row(static_cast<int>(k)) = jac.row(active[k]);
      Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      int rank = 0;
      for (int k = 0; k < sv.size(); ++k) {
        if (sv[k] > 1e-9 * std::max(1.0, sv[0])) ++rank;
      }
      const MatrixXd null = svd.matrixV().rightCols(problem.num_vars() - rank);
      dir = null * (null.transpose() * grad);
    }
    if (dir.size() == 0 || dir.cwiseAbs().maxCoeff() < 1e-10) break;
    double t = 0.25 / dir.cwiseAbs().maxCoeff();
    bool improved = false;
    for (int halving = 0; halving < 12; ++halving, t *= 0.5) {
      const LmResult polished = levenberg_marquardt(problem, x + t * dir, tau * 1e-2, max_iterations);
      if (polished.max_violation > tau) continue;
      const double wn = problem.welfare(polished.x);
      if (wn > w + 1e-12) {
        x = polished.x;
        w = wn;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return x;
}

std::uint64_t support_seed(const Support& support) {
  std::uint64_t h = 0x9E3779B97F4A7C15ull;
  for (auto m : support.masks) {
    h ^= m + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace

SupportResult solve_support(const NormalFormGame& game, const Support& support, const SolverConfig& config) {
  SupportResult result;
  SupportProblem problem(game, support, config.delta_supp);

  std::vector<VectorXd> starts{problem.centroid()};
  std::mt19937_64 rng(support_seed(support));
  for (int k = 0; k < config.multistarts; ++k) starts.push_back(problem.random_start(rng));

  bool capped = false;
  for (const auto& start : starts) {
    LmResult lm = levenberg_marquardt(problem, start, config.tau_feas * 1e-2, config.max_iterations);
    result.iterations += lm.iterations;
    if (lm.max_violation > config.tau_feas) {
      capped = capped || lm.exit == LmExit::kCapped;
      continue;
    }
    const VectorXd x = ascend_welfare(problem, lm.x, config.tau_feas, config.max_iterations);
    const double w = problem.welfare(x);
    if (!result.candidate || w > result.candidate->welfare + 1e-12) {
      EquilibriumCandidate c;
      c.profile = problem.profile(x);
      c.values = problem.values(x);
      c.welfare = w;
      c.support = support;
      c.residual = problem.residual(x).size() ? problem.residual(x).cwiseAbs().maxCoeff() : 0.0;
      result.candidate = std::move(c);
    }
    if (problem.num_vars() == 0) break;
  }
  if (result.candidate) {
    result.status = SupportStatus::kFeasible;
  } else {
    result.status = capped ? SupportStatus::kInconclusive : SupportStatus::kInfeasible;
  }
  return result;
}

namespace {

double profile_distance(const MixedProfile& a, const MixedProfile& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < a[i].size(); ++k) d = std::max(d, std::abs(a[i][k] - b[i][k]));
  }
  return d;
}

}  // namespace

NfgSolution swne(const NormalFormGame& game, const SolverConfig& config) {
  const int n = game.num_players();
  const double lo = game.min_utility();
  const double hi = game.max_utility();
  const double scale = hi > lo ? hi - lo : 1.0;

  NormalFormGame normalized(game.action_counts());
  for (std::size_t j = 0; j < game.num_joint_actions(); ++j) {
    for (PlayerId i = 0; i < n; ++i) normalized.set_utility(j, i, (game.utility(j, i) - lo) / scale);
  }
  const ReducedGame reduced = filter_dominated(normalized, config.tau_feas);
  const NormalFormGame& r = reduced.game;

  NfgSolution best;
  bool have_best = false;
  auto offer = [&](const MixedProfile& reduced_profile, const Support& reduced_support) {
    const MixedProfile full = reduced.expand(reduced_profile, game);
    std::vector<double> values(n);
    double welfare = 0.0;
    for (PlayerId i = 0; i < n; ++i) {
      values[i] = expected_utility(game, full, i);
      welfare += values[i];
    }
    ++best.candidates;
    if (!have_best || welfare > best.welfare + config.tau_welfare) {
      best.profile = full;
      best.values = values;
      best.welfare = welfare;
      best.support.masks.assign(n, 0);
      for (PlayerId i = 0; i < n; ++i) {
        for (int a : reduced_support.actions(i)) best.support.masks[i] |= std::uint64_t{1} << reduced.kept[i][a];
      }
      best.tie = false;
      have_best = true;
    } else if (welfare >= best.welfare - config.tau_welfare && profile_distance(full, best.profile) > 1e-9) {
      best.tie = true;
    }
  };

  best.supports_total = count_supports(r.action_counts());

  // Pure profiles, checked exactly up to the feasibility tolerance.
  for (std::size_t j = 0; j < r.num_joint_actions(); ++j) {
    const auto actions = r.joint_actions(j);
    if (check_pure_profile(r, actions, config.tau_feas).is_ne) {
      Support s;
      for (PlayerId i = 0; i < n; ++i) s.masks.push_back(std::uint64_t{1} << actions[i]);
      offer(pure_profile(r, actions), s);
    }
    ++best.supports_solved;
  }

  // Mixed supports in canonical order, processed in fixed-size batches so
  // that pruning against the incumbent does not depend on scheduling.
  std::vector<Support> mixed;
  if (r.num_joint_actions() > 1) {
    for (auto& s : enumerate_supports(r.action_counts())) {
      if (!s.is_pure()) mixed.push_back(std::move(s));
    }
  }
  constexpr std::size_t kBatch = 64;
  for (std::size_t begin = 0; begin < mixed.size(); begin += kBatch) {
    const std::size_t end = std::min(mixed.size(), begin + kBatch);
    std::vector<char> skip(end - begin, 0);
    for (std::size_t k = begin; k < end; ++k) {
      const Support& s = mixed[k];
      if (have_best) {
        double bound = -std::numeric_limits<double>::infinity();
        for (std::size_t j : support_joints(r, s)) {
          double total = 0.0;
          for (PlayerId i = 0; i < n; ++i) total += r.utility(j, i);
          bound = std::max(bound, total);
        }
        // Welfare in original units is scale * normalized + n * lo.
        if (scale * bound + n * lo <= best.welfare + config.tau_welfare) skip[k - begin] = 1;
      }
      if (!skip[k - begin] && !presolve_support(r, s, config.tau_feas)) skip[k - begin] = 1;
      if (skip[k - begin]) ++best.supports_pruned;
    }
    std::vector<SupportResult> results(end - begin);
    parallel_for(end - begin, config.threads, [&](std::size_t k) {
      if (skip[k]) {
        results[k].status = SupportStatus::kPruned;
        return;
      }
      results[k] = solve_support(r, mixed[begin + k], config);
    });
    for (std::size_t k = 0; k < results.size(); ++k) {
      if (skip[k]) continue;
      ++best.supports_solved;
      if (results[k].status == SupportStatus::kInconclusive) {
        ++best.supports_inconclusive;
        if (config.strict) {
          throw SolverError("support " + mixed[begin + k].to_string() + " inconclusive after iteration cap");
        }
      }
      if (results[k].candidate) offer(results[k].candidate->profile, mixed[begin + k]);
    }
  }

  if (!have_best) throw SolverError("no equilibrium found");
  best.regrets.resize(n);
  for (PlayerId i = 0; i < n; ++i) best.regrets[i] = regret(game, best.profile, i);
  return best;
}

NfgSolution scne(const NormalFormGame& game, const SolverConfig& config) {
  NfgSolution out = swne(game.negated(), config);
  for (double& v : out.values) v = -v;
  out.welfare = -out.welfare;
  return out;
}

}  // namespace nashcsg
