#pragma once

#include <any>
#include <cstdint>
#include <deque>
#include <exception>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "orkit/rng.hpp"

namespace orkit {

enum class PoolMode { kSimulated, kThreads };

// Simulated task duration: per_key[key % size] if given, else `base`, plus a
// uniform draw from [0, jitter) taken from a stream seeded by `seed` and the
// dispatch sequence number.
struct LatencyModel {
  double base = 1.0;
  double jitter = 0.0;
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> per_key;

  double sample(std::size_t key, std::uint64_t sequence) const;
};

struct WorkerPoolConfig {
  int workers = 1;
  PoolMode mode = PoolMode::kSimulated;
  LatencyModel latency;
};

enum class EventKind : std::uint8_t { kDispatch, kComplete, kMaster };

struct TraceEvent {
  EventKind kind = EventKind::kDispatch;
  double time = 0.0;
  int worker = -1;
  std::size_t key = 0;
  std::int64_t tag = 0;

  bool operator==(const TraceEvent&) const = default;
};

// Timestamped record of a pool run. Times are simulated units or wall-clock
// seconds since the run started.
struct PoolTrace {
  int workers = 1;
  std::vector<TraceEvent> events;

  void record(EventKind kind, double time, int worker, std::size_t key, std::int64_t tag) {
    events.push_back({kind, time, worker, key, tag});
  }

  std::int64_t completed() const;
  // Time from the first dispatch to the last completion.
  double span() const;

  bool operator==(const PoolTrace&) const = default;
};

// Tab-separated, one event per line after a header row.
void write_pool_trace(const PoolTrace& trace, std::ostream& out);
PoolTrace read_pool_trace(std::istream& in);

struct PoolTask {
  std::size_t key = 0;   // latency lookup and trace label
  std::int64_t tag = 0;  // free for the caller, e.g. an iteration number
  std::function<std::any()> work;
};

struct PoolOutcome {
  std::any value;
  std::exception_ptr error;
  int worker = -1;
  double dispatched = 0.0;
  double completed = 0.0;
};

using TaskQueue = std::deque<PoolTask>;
using ProcessResult = std::function<void(const PoolTask&, PoolOutcome&, TaskQueue&)>;

// Dynamic task pool. Idle workers pop the front of `queue`; each finished
// task is handed to `process_result`, which may push more tasks. Calls to
// process_result never overlap. Returns once is_terminated() holds; tasks
// still queued or running at that point are discarded. Throws ConfigError if
// the queue drains with nothing running and is_terminated() is still false.
// Exceptions thrown by process_result stop the pool and are rethrown.
//
// In simulated mode tasks run inline on the calling thread and the clock
// advances by their sampled latency. In thread mode `workers` threads run
// tasks concurrently and process_result runs under the pool lock.
void run_task_pool(TaskQueue& queue, const std::function<bool()>& is_terminated,
                   const ProcessResult& process_result, const WorkerPoolConfig& cfg,
                   PoolTrace* trace = nullptr);

template <class T>
struct TaskResult {
  std::optional<T> value;
  std::exception_ptr error;

  bool ok() const { return value.has_value(); }
};

// Applies fn to 0..count-1 on the pool; results are in index order. A task
// that throws leaves its error in the corresponding slot.
template <class T>
std::vector<TaskResult<T>> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn,
                                        const WorkerPoolConfig& cfg, PoolTrace* trace = nullptr) {
  std::vector<TaskResult<T>> results(count);
  TaskQueue queue;
  for (std::size_t i = 0; i < count; ++i) {
    queue.push_back({i, 0, [&fn, i]() -> std::any { return fn(i); }});
  }
  std::size_t done = 0;
  run_task_pool(
      queue, [&] { return done == count; },
      [&](const PoolTask& task, PoolOutcome& outcome, TaskQueue&) {
        if (outcome.error) {
          results[task.key].error = outcome.error;
        } else {
          results[task.key].value = std::any_cast<T>(std::move(outcome.value));
        }
        ++done;
      },
      cfg, trace);
  return results;
}

struct PoolMetrics {
  double speed = 0.0;       // completed tasks per time unit
  double efficiency = 0.0;  // percent of ideal speedup over the baseline
};

// Efficiency = (speed / workers) / (baseline speed / baseline workers) * 100.
double parallel_efficiency(double speed, int workers, double baseline_speed, int baseline_workers);

// Throws ConfigError on an empty trace.
double pool_speed(const PoolTrace& trace);
PoolMetrics compute_metrics(const PoolTrace& trace, const PoolTrace& baseline);

}  // namespace orkit
