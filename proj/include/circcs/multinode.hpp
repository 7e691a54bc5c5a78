#ifndef CIRCCS_MULTINODE_HPP
#define CIRCCS_MULTINODE_HPP

// Distributed compressed-domain filtering over J sensing nodes.
//
// Node 1 holds m i.i.d. Gaussian rows; row i of node j is row i of node j-1
// circularly right-shifted by shift_step. The matrices are not circulant on
// their own, but across the network Phi^(j) x_{->d*step} = Phi^(j-d) x, so
// node j can form measurements of a filtered signal from its neighbours'
// measurements. Nodes are not wrapped modulo J: a node whose required
// neighbour does not exist reports an all-invalid result.

#include <algorithm>
#include <cstddef>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "circcs/core.hpp"
#include "circcs/dense.hpp"
#include "circcs/filtering.hpp"
#include "circcs/sensing.hpp"

namespace circcs {

class NodeEnsemble {
public:
  NodeEnsemble(DenseMatrix base_rows, std::size_t nodes, std::size_t shift_step = 1)
      : base_(std::move(base_rows)), nodes_(nodes), step_(shift_step) {
    if (nodes_ < 1 || nodes_ > base_.cols()) throw RangeError("NodeEnsemble: need 1 <= J <= n");
    if (step_ < 1 || nodes_ * step_ > base_.cols()) {
      throw RangeError("NodeEnsemble: need shift_step >= 1 and J * shift_step <= n");
    }
  }

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t m() const noexcept { return base_.rows(); }
  std::size_t n() const noexcept { return base_.cols(); }
  std::size_t shift_step() const noexcept { return step_; }
  const DenseMatrix& base_rows() const noexcept { return base_; }

  /// Circular right shift applied to the base rows at node j (1-based).
  std::size_t node_shift(std::size_t node) const {
    check_node(node);
    return ((node - 1) * step_) % n();
  }

  /// Row i (0-based) of node j (1-based).
  std::vector<double> row(std::size_t node, std::size_t i) const {
    return circular_shift(base_.row(i), static_cast<std::ptrdiff_t>(node_shift(node)));
  }

  DenseMatrix node_matrix(std::size_t node) const {
    DenseMatrix out(m(), n());
    for (std::size_t i = 0; i < m(); ++i) {
      const auto r = row(node, i);
      std::copy(r.begin(), r.end(), out.row(i).begin());
    }
    return out;
  }

  /// Phi^(j) x by direct summation.
  std::vector<double> measure(std::size_t node, std::span<const double> x) const {
    if (x.size() != n()) throw DimensionError("NodeEnsemble::measure: signal length differs from n");
    const std::size_t sh = node_shift(node);
    std::vector<double> y(m());
    for (std::size_t i = 0; i < m(); ++i) {
      const auto base = base_.row(i);
      double acc = 0.0;
      std::size_t b = (n() - sh) % n();  // base index feeding column 0
      for (std::size_t k = 0; k < n(); ++k) {
        acc += base[b] * x[k];
        if (++b == n()) b = 0;
      }
      y[i] = acc;
    }
    return y;
  }

private:
  void check_node(std::size_t node) const {
    if (node < 1 || node > nodes_) throw RangeError("NodeEnsemble: node id out of range");
  }

  DenseMatrix base_;
  std::size_t nodes_;
  std::size_t step_;
};

/// Gaussian base rows drawn from cfg.prng_seed (row-major, one stream).
inline NodeEnsemble build_ensemble(const SensingConfig& cfg, std::size_t nodes,
                                   std::size_t shift_step = 1) {
  cfg.validate();
  DenseMatrix base(cfg.m, cfg.n);
  const auto samples = gaussian_samples(cfg.m * cfg.n, cfg.prng_seed);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    for (std::size_t k = 0; k < cfg.n; ++k) base(i, k) = samples[i * cfg.n + k];
  }
  return NodeEnsemble(std::move(base), nodes, shift_step);
}

struct NodeMeasurements {
  std::size_t node_id = 0;  ///< 1-based
  MaskedMeasurements y;
};

inline std::vector<NodeMeasurements> acquire_all(const NodeEnsemble& ens, const Signal& x) {
  if (x.size() != ens.n()) throw DimensionError("acquire_all: signal length differs from n");
  std::vector<NodeMeasurements> out;
  out.reserve(ens.nodes());
  for (std::size_t j = 1; j <= ens.nodes(); ++j) {
    out.push_back({j, MaskedMeasurements::fully_valid(ens.measure(j, x.data()),
                                                      "node-" + std::to_string(j))});
  }
  return out;
}

/// Vertical stack [Phi^(1); ...; Phi^(J)] for diagnostics.
inline DenseMatrix stack_ensemble(const NodeEnsemble& ens) {
  if (ens.n() > 4096) throw RangeError("stack_ensemble: n > 4096, refusing to materialize");
  DenseMatrix out(ens.nodes() * ens.m(), ens.n());
  for (std::size_t j = 1; j <= ens.nodes(); ++j) {
    const DenseMatrix block = ens.node_matrix(j);
    for (std::size_t i = 0; i < ens.m(); ++i) {
      std::copy(block.row(i).begin(), block.row(i).end(), out.row((j - 1) * ens.m() + i).begin());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Round-based exchange simulator

struct ExchangeRecord {
  std::size_t round = 0;
  std::size_t from_node = 0;
  std::size_t to_node = 0;
  std::size_t vector_length = 0;

  friend bool operator==(const ExchangeRecord&, const ExchangeRecord&) = default;
};

/// Append-only, thread-safe record of every cross-node vector transfer.
class ExchangeLog {
public:
  ExchangeLog() = default;
  ExchangeLog(const ExchangeLog&) = delete;
  ExchangeLog& operator=(const ExchangeLog&) = delete;

  void append(const ExchangeRecord& r) {
    std::lock_guard lock(mutex_);
    records_.push_back(r);
  }

  /// Orders the records of `round` by (to, from). Called by the simulator
  /// when a round closes so that logs are reproducible.
  void seal_round(std::size_t round) {
    std::lock_guard lock(mutex_);
    auto first = std::find_if(records_.begin(), records_.end(),
                              [round](const ExchangeRecord& r) { return r.round == round; });
    std::sort(first, records_.end(), [](const ExchangeRecord& a, const ExchangeRecord& b) {
      return std::tie(a.round, a.to_node, a.from_node) < std::tie(b.round, b.to_node, b.from_node);
    });
  }

  std::vector<ExchangeRecord> records() const {
    std::lock_guard lock(mutex_);
    return records_;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
  }

  /// Total number of doubles transferred.
  std::size_t volume() const {
    std::lock_guard lock(mutex_);
    std::size_t v = 0;
    for (const auto& r : records_) v += r.vector_length;
    return v;
  }

private:
  mutable std::mutex mutex_;
  std::vector<ExchangeRecord> records_;
};

struct SimulationOptions {
  /// Processing order of nodes within a round (1-based ids, a permutation of
  /// 1..J). Empty means ascending. Results never depend on it.
  std::vector<std::size_t> order;
  /// Run the nodes of a round on separate threads.
  bool parallel = false;
};

namespace detail {

template <typename Fn>
void run_round(const std::vector<std::size_t>& order, bool parallel, Fn&& per_node) {
  if (!parallel) {
    for (std::size_t j : order) per_node(j);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(order.size());
  for (std::size_t j : order) workers.emplace_back([&per_node, j] { per_node(j); });
}

inline std::vector<std::size_t> resolve_order(const SimulationOptions& opt, std::size_t nodes) {
  std::vector<std::size_t> order = opt.order;
  if (order.empty()) {
    order.resize(nodes);
    std::iota(order.begin(), order.end(), std::size_t{1});
    return order;
  }
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t j = 0; j < nodes; ++j) {
    if (sorted.size() != nodes || sorted[j] != j + 1) {
      throw ValidationError("SimulationOptions: order must be a permutation of 1..J");
    }
  }
  return order;
}

}  // namespace detail

/// Node j computes sum_t c_t y^(j - d_t) for node-offset terms (d_t, c_t),
/// i.e. the measurements of sum_t c_t x_{->d_t * step} under its own matrix.
///
/// Round 1: every node pulls the neighbour vectors it needs; each transfer
/// is logged. Round 2: every node combines what it received. Each round
/// reads only state frozen at the end of the previous one.
inline std::vector<NodeMeasurements> distributed_combine(
    const std::vector<NodeMeasurements>& measurements, std::span<const ShiftTerm> terms,
    ExchangeLog& log, const SimulationOptions& options = {}) {
  const std::size_t nodes = measurements.size();
  if (nodes == 0) throw DimensionError("distributed_combine: no nodes");
  if (terms.empty()) throw DimensionError("distributed_combine: no terms");
  const std::size_t m = measurements.front().y.size();
  for (std::size_t j = 0; j < nodes; ++j) {
    if (measurements[j].node_id != j + 1) {
      throw ValidationError("distributed_combine: measurements must be ordered by node id 1..J");
    }
    if (measurements[j].y.size() != m) throw DimensionError("distributed_combine: per-node m differs");
  }
  const auto order = detail::resolve_order(options, nodes);
  const auto as_signed = [](std::size_t v) { return static_cast<std::ptrdiff_t>(v); };

  // Round 1: exchange. inbox[j] is written only by node j.
  struct Received {
    std::size_t from;
    const MaskedMeasurements* y;
  };
  std::vector<std::vector<Received>> inbox(nodes);
  detail::run_round(order, options.parallel, [&](std::size_t j) {
    for (const auto& t : terms) {
      if (t.offset == 0) continue;
      const std::ptrdiff_t src = as_signed(j) - t.offset;
      if (src < 1 || src > as_signed(nodes)) continue;
      const auto from = static_cast<std::size_t>(src);
      inbox[j - 1].push_back({from, &measurements[from - 1].y});
      log.append({1, from, j, m});
    }
  });
  log.seal_round(1);

  // Round 2: local combination.
  std::vector<std::optional<NodeMeasurements>> results(nodes);
  detail::run_round(order, options.parallel, [&](std::size_t j) {
    std::vector<double> data(m, 0.0);
    ValidityMask mask = ValidityMask::all(m);
    bool complete = true;
    for (const auto& t : terms) {
      const MaskedMeasurements* src = nullptr;
      if (t.offset == 0) {
        src = &measurements[j - 1].y;
      } else {
        const std::ptrdiff_t want = as_signed(j) - t.offset;
        for (const auto& r : inbox[j - 1]) {
          if (as_signed(r.from) == want) src = r.y;
        }
      }
      if (src == nullptr) {
        complete = false;
        continue;
      }
      for (std::size_t i = 0; i < m; ++i) data[i] += t.coeff * (*src)[i];
      mask = mask_and(mask, src->mask());
    }
    if (!complete) mask = ValidityMask::all(m, false);
    results[j - 1] = NodeMeasurements{
        j, MaskedMeasurements(std::move(data), std::move(mask), measurements[j - 1].y.seed_ref())};
  });

  std::vector<NodeMeasurements> out;
  out.reserve(nodes);
  bool any_valid = false;
  for (auto& r : results) {
    any_valid = any_valid || !r->y.mask().none_valid();
    out.push_back(std::move(*r));
  }
  if (!any_valid) {
    for (auto& r : out) {
      r.y = r.y.with_warning("no node has all the neighbours this operation needs");
    }
  }
  return out;
}

/// Compressed-domain filtering across nodes.
///
/// FirstColumn filters run y_f^(j) = sum_i h_i y^(j-i), valid for
/// j in [N_f, J]. FirstRow filters run the forward form sum_i h_i y^(j+i),
/// valid for j in [1, J - N_f + 1].
inline std::vector<NodeMeasurements> distributed_filter(
    const std::vector<NodeMeasurements>& measurements, const FilterSpec& h, ExchangeLog& log,
    const SimulationOptions& options = {}) {
  const auto terms = filter_terms(h);
  return distributed_combine(measurements, terms, log, options);
}

/// y^(j-1) - 2 y^(j) + y^(j+1); valid for nodes 2..J-1.
inline std::vector<NodeMeasurements> distributed_second_difference(
    const std::vector<NodeMeasurements>& measurements, ExchangeLog& log,
    const SimulationOptions& options = {}) {
  const std::vector<ShiftTerm> terms{{+1, 1.0}, {0, -2.0}, {-1, 1.0}};
  return distributed_combine(measurements, terms, log, options);
}

}  // namespace circcs

#endif  // CIRCCS_MULTINODE_HPP
