#include "orkit/pool.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <thread>

#include "orkit/errors.hpp"
#include "orkit/format.hpp"

namespace orkit {
namespace {

const char* event_name(EventKind k) {
  switch (k) {
    case EventKind::kDispatch:
      return "dispatch";
    case EventKind::kComplete:
      return "complete";
    case EventKind::kMaster:
      return "master";
  }
  return "?";
}

PoolOutcome run_task(const PoolTask& task) {
  PoolOutcome out;
  try {
    out.value = task.work();
  } catch (...) {
    out.error = std::current_exception();
  }
  return out;
}

void check_config(const WorkerPoolConfig& cfg) {
  if (cfg.workers < 1) throw ConfigError("task pool needs at least one worker");
}

ConfigError stall_error() {
  return ConfigError("task pool stalled: queue empty, nothing running, not terminated");
}

void run_simulated(TaskQueue& queue, const std::function<bool()>& is_terminated,
                   const ProcessResult& process_result, const WorkerPoolConfig& cfg,
                   PoolTrace* trace) {
  struct Running {
    double done;
    std::uint64_t seq;
    int worker;
    PoolTask task;
    PoolOutcome outcome;
  };
  auto later = [](const Running* a, const Running* b) {
    return a->done != b->done ? a->done > b->done : a->seq > b->seq;
  };
  std::vector<std::unique_ptr<Running>> slots(cfg.workers);
  std::priority_queue<Running*, std::vector<Running*>, decltype(later)> running(later);
  double now = 0.0;
  std::uint64_t seq = 0;

  while (!is_terminated()) {
    for (int w = 0; w < cfg.workers && !queue.empty(); ++w) {
      if (slots[w]) continue;
      auto r = std::make_unique<Running>();
      r->task = std::move(queue.front());
      queue.pop_front();
      r->seq = seq++;
      r->worker = w;
      r->done = now + cfg.latency.sample(r->task.key, r->seq);
      r->outcome = run_task(r->task);
      r->outcome.worker = w;
      r->outcome.dispatched = now;
      r->outcome.completed = r->done;
      if (trace) trace->record(EventKind::kDispatch, now, w, r->task.key, r->task.tag);
      running.push(r.get());
      slots[w] = std::move(r);
    }
    if (running.empty()) throw stall_error();
    Running* next = running.top();
    running.pop();
    now = next->done;
    std::unique_ptr<Running> finished = std::move(slots[next->worker]);
    if (trace) {
      trace->record(EventKind::kComplete, now, finished->worker, finished->task.key,
                    finished->task.tag);
    }
    process_result(finished->task, finished->outcome, queue);
  }
}

void run_threads(TaskQueue& queue, const std::function<bool()>& is_terminated,
                 const ProcessResult& process_result, const WorkerPoolConfig& cfg,
                 PoolTrace* trace) {
  std::mutex mu;
  std::condition_variable cv;
  int in_flight = 0;
  bool stop = false;
  std::exception_ptr failure;
  const auto start = std::chrono::steady_clock::now();
  auto clock = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  {
    std::lock_guard lk(mu);
    if (is_terminated()) return;
    if (queue.empty()) throw stall_error();
  }

  auto worker = [&](int w) {
    std::unique_lock lk(mu);
    for (;;) {
      cv.wait(lk, [&] { return stop || !queue.empty(); });
      if (stop) return;
      PoolTask task = std::move(queue.front());
      queue.pop_front();
      ++in_flight;
      const double t0 = clock();
      if (trace) trace->record(EventKind::kDispatch, t0, w, task.key, task.tag);
      lk.unlock();
      PoolOutcome outcome = run_task(task);
      lk.lock();
      --in_flight;
      outcome.worker = w;
      outcome.dispatched = t0;
      outcome.completed = clock();
      if (stop) return;
      if (trace) trace->record(EventKind::kComplete, outcome.completed, w, task.key, task.tag);
      try {
        process_result(task, outcome, queue);
        if (is_terminated()) {
          stop = true;
        } else if (queue.empty() && in_flight == 0) {
          failure = std::make_exception_ptr(stall_error());
          stop = true;
        }
      } catch (...) {
        failure = std::current_exception();
        stop = true;
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(cfg.workers);
  for (int w = 0; w < cfg.workers; ++w) threads.emplace_back(worker, w);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

double LatencyModel::sample(std::size_t key, std::uint64_t sequence) const {
  double t = per_key.empty() ? base : per_key[key % per_key.size()];
  if (jitter > 0.0) {
    SplitMix64 rng(seed ^ (sequence * 0x9E3779B97F4A7C15ULL));
    t += jitter * rng.uniform();
  }
  return t;
}

std::int64_t PoolTrace::completed() const {
  return std::count_if(events.begin(), events.end(),
                       [](const TraceEvent& e) { return e.kind == EventKind::kComplete; });
}

double PoolTrace::span() const {
  double first = kInfinity;
  double last = -kInfinity;
  for (const auto& e : events) {
    if (e.kind == EventKind::kDispatch) first = std::min(first, e.time);
    if (e.kind == EventKind::kComplete) last = std::max(last, e.time);
  }
  return last - first;
}

void write_pool_trace(const PoolTrace& trace, std::ostream& out) {
  out << "# workers=" << trace.workers << '\n';
  out << "event\ttime\tworker\tkey\ttag\n";
  for (const auto& e : trace.events) {
    out << event_name(e.kind) << '\t' << format_number(e.time) << '\t' << e.worker << '\t' << e.key
        << '\t' << e.tag << '\n';
  }
}

PoolTrace read_pool_trace(std::istream& in) {
  PoolTrace trace;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) { throw ParseError(lineno, what); };

  ++lineno;
  if (!std::getline(in, line) || line.rfind("# workers=", 0) != 0) fail("missing workers line");
  try {
    trace.workers = std::stoi(line.substr(10));
  } catch (const std::exception&) {
    fail("bad worker count");
  }
  ++lineno;
  if (!std::getline(in, line) || line != "event\ttime\tworker\tkey\ttag") fail("bad header row");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string kind, time;
    TraceEvent e;
    if (!std::getline(fields, kind, '\t') || !std::getline(fields, time, '\t')) fail("short record");
    if (kind == "dispatch") {
      e.kind = EventKind::kDispatch;
    } else if (kind == "complete") {
      e.kind = EventKind::kComplete;
    } else if (kind == "master") {
      e.kind = EventKind::kMaster;
    } else {
      fail("unknown event '" + kind + "'");
    }
    if (!parse_number(time, e.time)) fail("bad time");
    if (!(fields >> e.worker >> e.key >> e.tag)) fail("bad record");
    trace.events.push_back(e);
  }
  return trace;
}

void run_task_pool(TaskQueue& queue, const std::function<bool()>& is_terminated,
                   const ProcessResult& process_result, const WorkerPoolConfig& cfg,
                   PoolTrace* trace) {
  check_config(cfg);
  if (trace) trace->workers = cfg.workers;
  if (cfg.mode == PoolMode::kSimulated) {
    run_simulated(queue, is_terminated, process_result, cfg, trace);
  } else {
    run_threads(queue, is_terminated, process_result, cfg, trace);
  }
}

double parallel_efficiency(double speed, int workers, double baseline_speed, int baseline_workers) {
  if (workers < 1 || baseline_workers < 1 || !(baseline_speed > 0.0)) {
    throw ConfigError("parallel_efficiency: need positive worker counts and baseline speed");
  }
  return (speed / workers) / (baseline_speed / baseline_workers) * 100.0;
}

double pool_speed(const PoolTrace& trace) {
  const std::int64_t n = trace.completed();
  if (n == 0) throw ConfigError("pool_speed: trace has no completed tasks");
  const double span = trace.span();
  if (!(span > 0.0)) throw ConfigError("pool_speed: trace spans no time");
  return static_cast<double>(n) / span;
}

PoolMetrics compute_metrics(const PoolTrace& trace, const PoolTrace& baseline) {
  PoolMetrics m;
  m.speed = pool_speed(trace);
  m.efficiency = parallel_efficiency(m.speed, trace.workers, pool_speed(baseline), baseline.workers);
  return m;
}

}  // namespace orkit
