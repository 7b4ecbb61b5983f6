#include "remest/simulator.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace remest {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr long long kBlockSize = 256;  // episodes per reduction block

struct CompiledPolicy {
  bool hard = false;
  double comm_cost = 0.0;
  double soft_beta = 0.0;
  int budget = 0;
  const PolicyTable* table = nullptr;
  std::vector<AffineCodec> codecs;  // hard: (t-1)*budget + (e-1); soft: [0]
};

CompiledPolicy compile(const EpisodeConfig& cfg) {
  if (cfg.horizon < 1) throw std::invalid_argument("EpisodeConfig: horizon must be >= 1");
  if (!(cfg.channel.power > 0.0) || !(cfg.channel.noise_var > 0.0)) {
    throw std::invalid_argument("EpisodeConfig: channel power and noise variance must be > 0");
  }

  CompiledPolicy cp;
  if (const auto* hard = std::get_if<HardPolicy>(&cfg.policy)) {
    cp.hard = true;
    cp.budget = hard->budget;
    cp.table = &hard->thresholds;
    if (cp.budget < 0 || cp.budget > cfg.horizon) {
      throw std::invalid_argument("EpisodeConfig: budget must be in [0, horizon]");
    }
    if (hard->thresholds.horizon() != cfg.horizon ||
        hard->thresholds.budget() < cp.budget) {
      throw std::invalid_argument("EpisodeConfig: policy table does not match horizon/budget");
    }
    cp.codecs.reserve(static_cast<std::size_t>(cfg.horizon) * cp.budget);
    for (int t = 1; t <= cfg.horizon; ++t) {
      for (int e = 1; e <= cp.budget; ++e) {
        cp.codecs.emplace_back(cfg.source, hard->thresholds.at(t, e),
                               cfg.channel.power);
      }
    }
  } else {
    const auto& soft = std::get<SoftPolicy>(cfg.policy);
    if (!(soft.beta >= 0.0) || !(soft.comm_cost >= 0.0)) {
      throw std::invalid_argument("EpisodeConfig: soft policy needs beta >= 0 and comm_cost >= 0");
    }
    cp.comm_cost = soft.comm_cost;
    cp.soft_beta = soft.beta;
    cp.codecs.emplace_back(cfg.source, soft.beta, cfg.channel.power);
  }
  return cp;
}

struct EpisodeTotals {
  double total = 0.0;
  int transmissions = 0;
  double half1_per_step = 0.0;  // mean stage cost over t <= T/2
  double half2_per_step = 0.0;
  int terminal_budget = 0;  // hard only
};

// Sink contract: step(const SimStep&) per stage, in order.
template <class Sink>
EpisodeTotals run_core(const EpisodeConfig& cfg, const CompiledPolicy& cp,
                       Rng& rng, Sink&& sink) {
  const int T = cfg.horizon;
  const double gamma = cfg.channel.gamma();
  const int half = T / 2;

  int remaining = cp.hard ? cp.budget : 0;
  double total = 0.0, h1 = 0.0, h2 = 0.0;
  int tx_count = 0;

  for (int t = 1; t <= T; ++t) {
    const double x = cfg.source.sample(rng);
    const int budget_before = remaining;

    const AffineCodec* codec = nullptr;
    bool tx = false;
    if (cp.hard) {
      if (remaining > 0) {
        const double beta = cp.table->at(t, remaining);
        codec = &cp.codecs[static_cast<std::size_t>(t - 1) * cp.budget +
                           (remaining - 1)];
        tx = should_transmit(x, beta, remaining);
      }
    } else {
      codec = &cp.codecs[0];
      tx = should_transmit(x, cp.soft_beta, 1);
    }

    SimStep step;
    step.t = t;
    step.x = x;
    step.y = step.v = step.y_tilde = kNan;
    if (cp.hard) step.budget_left = budget_before;

    double x_hat;
    if (tx) {
      step.y = codec->encode(x);
      step.v = cfg.channel.sample_noise(rng);
      step.y_tilde = step.y + step.v;
      step.side = sign_symbol(x);
      x_hat = codec->decode({step.y_tilde, step.side}, gamma);
      if (cp.hard) --remaining;
      ++tx_count;
    } else {
      step.side = SideSymbol::kSilent;
      x_hat = codec ? codec->silent_estimate() : 0.0;
    }

    double cost = (x - x_hat) * (x - x_hat);
    if (!cp.hard && tx) cost += cp.comm_cost;

    step.transmitted = tx;
    step.x_hat = x_hat;
    step.stage_cost = cost;
    sink(step);

    total += cost;
    (t <= half ? h1 : h2) += cost;
  }

  EpisodeTotals out;
  out.total = total;
  out.transmissions = tx_count;
  out.half1_per_step = half > 0 ? h1 / half : 0.0;
  out.half2_per_step = h2 / (T - half);
  out.terminal_budget = remaining;
  return out;
}

struct NullSink {
  void operator()(const SimStep&) const {}
};

}  // namespace

SimTrace run_episode(const EpisodeConfig& config, Rng& rng) {
  const CompiledPolicy cp = compile(config);
  SimTrace trace;
  trace.steps.reserve(config.horizon);
  const EpisodeTotals totals =
      run_core(config, cp, rng, [&trace](const SimStep& s) {
        trace.steps.push_back(s);
      });
  trace.total_cost = totals.total;
  trace.transmissions = totals.transmissions;

  if (cp.hard && totals.transmissions > cp.budget) {
    throw std::logic_error("run_episode: hard transmission budget violated");
  }
  return trace;
}

MonteCarloReport monte_carlo(const EpisodeConfig& config, long long episodes,
                             int workers) {
  if (episodes < 1) throw std::invalid_argument("monte_carlo: episodes must be >= 1");
  const CompiledPolicy cp = compile(config);
  const int T = config.horizon;
  const int n_budget_bins = cp.hard ? cp.budget + 1 : 0;

  const long long n_blocks = (episodes + kBlockSize - 1) / kBlockSize;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = static_cast<int>(std::min<long long>(workers, n_blocks));

  struct BlockPartial {
    double sum = 0.0, sumsq = 0.0;
    double h1 = 0.0, h1sq = 0.0, h2 = 0.0, h2sq = 0.0;
    long long tx = 0;
    std::vector<double> per_t_cost;
  };
  std::vector<BlockPartial> blocks(static_cast<std::size_t>(n_blocks));
  for (auto& b : blocks) b.per_t_cost.assign(T, 0.0);

  // Budget histograms are integer counts, so per-worker accumulation merges
  // exactly regardless of scheduling; the floating sums stay block-ordered.
  std::vector<std::vector<long long>> worker_hist(
      workers, std::vector<long long>(
                   static_cast<std::size_t>(T) * std::max(n_budget_bins, 1), 0));
  std::vector<long long> worker_terminal_positive(workers, 0);

  const Rng master(config.seed);
  std::atomic<long long> next_block{0};

  auto work = [&](int worker_id) {
    auto& hist = worker_hist[worker_id];
    long long block;
    while ((block = next_block.fetch_add(1)) < n_blocks) {
      BlockPartial& part = blocks[block];
      const long long first = block * kBlockSize;
      const long long last = std::min(first + kBlockSize, episodes);
      for (long long i = first; i < last; ++i) {
        Rng stream = master.stream(static_cast<std::uint64_t>(i));
        auto sink = [&](const SimStep& s) {
          part.per_t_cost[s.t - 1] += s.stage_cost;
          if (s.budget_left) {
            hist[static_cast<std::size_t>(s.t - 1) * n_budget_bins +
                 *s.budget_left]++;
          }
        };
        const EpisodeTotals totals = run_core(config, cp, stream, sink);
        part.sum += totals.total;
        part.sumsq += totals.total * totals.total;
        part.h1 += totals.half1_per_step;
        part.h1sq += totals.half1_per_step * totals.half1_per_step;
        part.h2 += totals.half2_per_step;
        part.h2sq += totals.half2_per_step * totals.half2_per_step;
        part.tx += totals.transmissions;
        if (cp.hard && totals.terminal_budget > 0) {
          ++worker_terminal_positive[worker_id];
        }
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  // Deterministic reduction in block order.
  double sum = 0.0, sumsq = 0.0, h1 = 0.0, h1sq = 0.0, h2 = 0.0, h2sq = 0.0;
  long long tx = 0;
  std::vector<double> per_t(T, 0.0);
  for (const auto& b : blocks) {
    sum += b.sum;
    sumsq += b.sumsq;
    h1 += b.h1;
    h1sq += b.h1sq;
    h2 += b.h2;
    h2sq += b.h2sq;
    tx += b.tx;
    for (int t = 0; t < T; ++t) per_t[t] += b.per_t_cost[t];
  }

  const double n = static_cast<double>(episodes);
  auto std_err = [n](double s, double ss) {
    if (n < 2) return 0.0;
    const double var = std::max(0.0, (ss - s * s / n) / (n - 1.0));
    return std::sqrt(var / n);
  };

  MonteCarloReport report;
  report.episodes = episodes;
  report.mean_total_cost = sum / n;
  report.std_error = std_err(sum, sumsq);
  report.mean_transmissions = static_cast<double>(tx) / n;
  report.mean_stage_cost.resize(T);
  for (int t = 0; t < T; ++t) report.mean_stage_cost[t] = per_t[t] / n;
  report.first_half_mean = h1 / n;
  report.first_half_se = std_err(h1, h1sq);
  report.second_half_mean = h2 / n;
  report.second_half_se = std_err(h2, h2sq);

  if (cp.hard) {
    std::vector<long long> hist(static_cast<std::size_t>(T) * n_budget_bins, 0);
    for (const auto& wh : worker_hist) {
      for (std::size_t i = 0; i < hist.size(); ++i) hist[i] += wh[i];
    }
    report.budget_quantiles.resize(T);
    for (int t = 0; t < T; ++t) {
      auto quantile = [&](double q) {
        const double target = q * n;
        long long cum = 0;
        for (int e = 0; e < n_budget_bins; ++e) {
          cum += hist[static_cast<std::size_t>(t) * n_budget_bins + e];
          if (static_cast<double>(cum) >= target) return static_cast<double>(e);
        }
        return static_cast<double>(n_budget_bins - 1);
      };
      report.budget_quantiles[t] = {quantile(0.10), quantile(0.50),
                                    quantile(0.90)};
    }
    long long terminal_positive = 0;
    for (long long c : worker_terminal_positive) terminal_positive += c;
    report.terminal_budget_positive_fraction =
        static_cast<double>(terminal_positive) / n;
  }
  return report;
}

std::vector<int> budget_trajectory(const EpisodeConfig& config,
                                   std::uint64_t episode_index) {
  if (!std::holds_alternative<HardPolicy>(config.policy)) {
    throw std::invalid_argument("budget_trajectory: needs a hard-constraint config");
  }
  Rng stream = Rng(config.seed).stream(episode_index);
  const SimTrace trace = run_episode(config, stream);

  std::vector<int> path;
  path.reserve(config.horizon + 1);
  for (const SimStep& s : trace.steps) path.push_back(*s.budget_left);
  path.push_back(path.back() - (trace.steps.back().transmitted ? 1 : 0));
  return path;
}

void write_trace_csv(std::ostream& os, const SimTrace& trace,
                     std::span<const std::string> comment_lines) {
  for (const auto& line : comment_lines) os << "# " << line << '\n';
  os << "t,x,u,s,y,v,y_tilde,x_hat,E,stage_cost\n";

  char buf[32];
  auto num = [&buf](double v) -> std::string {
    if (std::isnan(v)) return "";
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  for (const SimStep& s : trace.steps) {
    int side = 0;
    if (s.side == SideSymbol::kPlus) side = 1;
    if (s.side == SideSymbol::kMinus) side = -1;
    os << s.t << ',' << num(s.x) << ',' << (s.transmitted ? 1 : 0) << ','
       << side << ',' << num(s.y) << ',' << num(s.v) << ',' << num(s.y_tilde)
       << ',' << num(s.x_hat) << ',';
    if (s.budget_left) os << *s.budget_left;
    os << ',' << num(s.stage_cost) << '\n';
  }
}

}  // namespace remest
