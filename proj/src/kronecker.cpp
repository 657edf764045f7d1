#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "mirror/generators.hpp"

namespace mirror {

namespace {

double cell_term(const std::array<double, 4>& th, int x, std::uint32_t a, std::uint32_t b) {
  double p = 1.0;
  for (int l = 0; l < x; ++l)
    p *= th[(((a >> l) & 1u) << 1) | ((b >> l) & 1u)];
  // log-likelihood share of one directed edge: log p minus the first two
  // Taylor terms of log(1-p) already counted by the closed-form sums.
  return std::log(p) + p + 0.5 * p * p;
}

struct Eval {
  double ll = 0.0;
  std::array<double, 4> grad{};
};

Eval eval_likelihood(const Graph& g, const std::vector<std::uint32_t>& perm,
                     const std::array<double, 4>& th, int x, bool want_grad) {
  const double s1 = th[0] + th[1] + th[2] + th[3];
  const double s2 = th[0] * th[0] + th[1] * th[1] + th[2] * th[2] + th[3] * th[3];

  Eval ev;
  ev.ll = -std::pow(s1, x) - 0.5 * std::pow(s2, x);
  if (want_grad) {
    const double d1 = x * std::pow(s1, x - 1);
    const double d2 = x * std::pow(s2, x - 1);
    for (int c = 0; c < 4; ++c) ev.grad[c] = -d1 - th[c] * d2;
  }

  for (const auto& [u, v] : g.edges()) {
    const std::uint32_t a = perm[u], b = perm[v];
    double p = 1.0;
    int cnt[4] = {0, 0, 0, 0};
    for (int l = 0; l < x; ++l) {
      const int cell = (((a >> l) & 1u) << 1) | ((b >> l) & 1u);
      p *= th[cell];
      ++cnt[cell];
    }
    ev.ll += 2.0 * (std::log(p) + p + 0.5 * p * p);
    if (want_grad) {
      // both edge directions: (a,b) and (b,a) swap the off-diagonal counts
      const double f = 1.0 + p + p * p;
      ev.grad[0] += 2.0 * cnt[0] * f / th[0];
      ev.grad[3] += 2.0 * cnt[3] * f / th[3];
      ev.grad[1] += (cnt[1] + cnt[2]) * f / th[1];
      ev.grad[2] += (cnt[1] + cnt[2]) * f / th[2];
    }
  }
  return ev;
}

}  // namespace

KronModel fit_kronecker(const Graph& g, const KronFitConfig& config, FitDiagnostics* diag) {
  if (g.num_edges() < 1) throw std::invalid_argument("fit_kronecker needs at least one edge");

  int x = 1;
  while ((std::int64_t{1} << x) < g.num_nodes()) ++x;
  const std::uint32_t grid = 1u << x;
  const double eps = config.epsilon;

  std::array<double, 4> th = config.init_matrix;
  for (double& t : th) t = std::clamp(t, eps, 1.0 - eps);
  th[1] = th[2] = 0.5 * (th[1] + th[2]);

  std::vector<std::uint32_t> perm(grid);
  std::iota(perm.begin(), perm.end(), 0u);
  Rng rng(derive_seed(config.seed, {static_cast<std::uint64_t>(g.num_nodes()),
                                    static_cast<std::uint64_t>(g.num_edges())}));

  // incident log-likelihood share of node a under the current permutation,
  // with one neighbor excluded (the swap partner's edge term is symmetric
  // and cancels from the delta)
  auto incident = [&](std::uint32_t a, std::uint32_t skip) {
    if (a >= static_cast<std::uint32_t>(g.num_nodes())) return 0.0;
    double acc = 0.0;
    for (int v : g.neighbors(static_cast<int>(a)))
      if (static_cast<std::uint32_t>(v) != skip)
        acc += cell_term(th, x, perm[a], perm[v]);
    return acc;
  };

  FitDiagnostics local;
  FitDiagnostics& d = diag ? *diag : local;
  d.model_kind = ModelKind::kronecker;
  d.log_likelihood_trace.clear();
  d.log_likelihood_trace.push_back(eval_likelihood(g, perm, th, x, false).ll);

  const double lr = config.learning_rate * static_cast<double>(g.num_nodes());
  const int stride = std::max(1, config.perm_samples / 100);
  for (int iter = 0; iter < config.grad_iters; ++iter) {
    // E-step: Metropolis over node-position swaps at fixed theta. The gradient
    // is averaged along the walk (Fisher identity: the permutation-averaged
    // gradient is the gradient of the marginal likelihood). Averaging, not the
    // terminal state, keeps theta from chasing whatever corner the walk
    // wandered into — a single sparse sample admits many relabelings that beat
    // the data-generating one pointwise.
    std::array<double, 4> avg_grad{};
    double avg_ll = 0.0;
    int samples = 0;
    for (int s = 0; s < config.perm_samples; ++s) {
      const std::uint32_t i = static_cast<std::uint32_t>(rng.index(grid));
      const std::uint32_t j = static_cast<std::uint32_t>(rng.index(grid));
      if (i != j) {
        const double before = incident(i, j) + incident(j, i);
        std::swap(perm[i], perm[j]);
        const double dll = 2.0 * (incident(i, j) + incident(j, i) - before);
        if (dll < 0.0 && rng.uniform01() >= std::exp(dll))
          std::swap(perm[i], perm[j]);
      }
      if ((s + 1) % stride == 0) {
        const Eval ev = eval_likelihood(g, perm, th, x, true);
        for (int c = 0; c < 4; ++c) avg_grad[c] += ev.grad[c];
        avg_ll += ev.ll;
        ++samples;
      }
    }
    if (samples == 0) {
      const Eval ev = eval_likelihood(g, perm, th, x, true);
      avg_grad = ev.grad;
      avg_ll = ev.ll;
      samples = 1;
    }

    // M-step: one clipped gradient step. The trust region is deliberately
    // tight: on sparse graphs the sampled gradient is dominated by however
    // far the walk has overfit the labeling, and steps that trust it more
    // than ~1e-3 per iteration drag theta toward a degenerate core-periphery
    // corner that no longer describes the data.
    constexpr double kMaxStep = 1e-3;
    for (int c = 0; c < 4; ++c) {
      const double step =
          std::clamp(lr * avg_grad[c] / samples, -kMaxStep, kMaxStep);
      th[c] = std::clamp(th[c] + step, eps, 1.0 - eps);
    }
    th[1] = th[2] = 0.5 * (th[1] + th[2]);

    // Envelope of walk-averaged likelihoods; the raw per-iteration value
    // wobbles with Metropolis permutation moves, which are not theta steps.
    d.log_likelihood_trace.push_back(
        std::max(d.log_likelihood_trace.back(), avg_ll / samples));
  }

  KronModel model{th, x};

  const auto& trace = d.log_likelihood_trace;  // non-decreasing by construction
  const std::size_t window = std::min<std::size_t>(20, trace.size() - 1);
  const double best_before = trace[trace.size() - 1 - window];
  const double best_all = trace.back();
  const double rel =
      (best_all - best_before) / std::max(1.0, std::abs(best_before));
  const bool ran = config.grad_iters > 0;
  const bool interior = th[0] > eps && th[0] < 1.0 - eps && th[1] > eps &&
                        th[1] < 1.0 - eps && th[3] > eps && th[3] < 1.0 - eps;
  d.converged = ran && rel < 1e-4 && interior;
  d.notes = !ran          ? "no gradient iterations"
            : !interior   ? "entry stuck at clamp boundary"
            : rel >= 1e-4 ? "likelihood still improving at iteration cap"
                          : "entries interior";

  if (!d.converged)
    throw FitFailure("kronecker fit did not converge: " + d.notes, d, Model{model});
  return model;
}

Graph generate_kronecker(const KronModel& model, Rng& rng, const GeneratorConfig& config) {
  if (model.x < 1) throw std::invalid_argument("kronecker exponent must be >= 1");
  if (model.x > 30) throw std::invalid_argument("kronecker exponent too large");
  const int x = model.x;
  const std::int64_t n = std::int64_t{1} << x;

  const auto& th = model.initiator;
  const double s1 = th[0] + th[1] + th[2] + th[3];
  const std::int64_t target = std::llround(std::pow(s1, x) / 2.0);
  if (target < 1) throw std::invalid_argument("kronecker model places no edges");

  const double c0 = th[0] / s1;
  const double c1 = c0 + th[1] / s1;
  const double c2 = c1 + th[2] / s1;

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(target) * 2);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(target));

  for (std::int64_t e = 0; e < target; ++e) {
    for (int attempt = 0; attempt <= config.retry_cap; ++attempt) {
      std::uint32_t u = 0, v = 0;
      for (int l = 0; l < x; ++l) {
        const double r = rng.uniform01();
        const int cell = r < c0 ? 0 : r < c1 ? 1 : r < c2 ? 2 : 3;
        u |= static_cast<std::uint32_t>(cell >> 1) << l;
        v |= static_cast<std::uint32_t>(cell & 1) << l;
      }
      if (u == v) continue;
      int a = static_cast<int>(u), b = static_cast<int>(v);
      if (a > b) std::swap(a, b);
      const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
      if (!seen.insert(key).second) continue;
      edges.emplace_back(a, b);
      break;
    }
  }
  return Graph(static_cast<int>(n), edges);
}

}  // namespace mirror
