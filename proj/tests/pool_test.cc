#include "orkit/pool.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "orkit/errors.hpp"

namespace orkit {
namespace {

WorkerPoolConfig simulated(int workers, std::vector<double> per_key = {}) {
  WorkerPoolConfig cfg;
  cfg.workers = workers;
  cfg.latency.per_key = std::move(per_key);
  return cfg;
}

WorkerPoolConfig threaded(int workers) {
  WorkerPoolConfig cfg;
  cfg.workers = workers;
  cfg.mode = PoolMode::kThreads;
  return cfg;
}

std::vector<int> values(const std::vector<TaskResult<int>>& r) {
  std::vector<int> out;
  for (const auto& t : r) out.push_back(t.value.value());
  return out;
}

TEST(ParallelMapTest, SquaresInOrder) {
  const std::function<int(std::size_t)> sq = [](std::size_t i) {
    const int v = static_cast<int>(i) + 1;
    return v * v;
  };
  EXPECT_EQ(values(parallel_map<int>(3, sq, simulated(2))), (std::vector<int>{1, 4, 9}));
  EXPECT_EQ(values(parallel_map<int>(3, sq, threaded(2))), (std::vector<int>{1, 4, 9}));
}

TEST(ParallelMapTest, DynamicAllocationOverlapsLongTask) {
  PoolTrace trace;
  const std::function<int(std::size_t)> id = [](std::size_t i) { return static_cast<int>(i); };
  parallel_map<int>(4, id, simulated(2, {3, 1, 1, 1}), &trace);
  EXPECT_DOUBLE_EQ(trace.span(), 3.0);
  EXPECT_EQ(trace.completed(), 4);
  // Worker 1 takes tasks 1, 2 and 3 while worker 0 is busy with task 0.
  std::vector<int> worker_of(4, -1);
  for (const auto& e : trace.events) {
    if (e.kind == EventKind::kDispatch) worker_of[e.key] = e.worker;
  }
  EXPECT_EQ(worker_of, (std::vector<int>{0, 1, 1, 1}));
}

TEST(ParallelMapTest, EmptyInput) {
  PoolTrace trace;
  const std::function<int(std::size_t)> fail = [](std::size_t) -> int { throw std::logic_error("called"); };
  EXPECT_TRUE(parallel_map<int>(0, fail, simulated(2), &trace).empty());
  EXPECT_TRUE(parallel_map<int>(0, fail, threaded(2)).empty());
  EXPECT_TRUE(trace.events.empty());
}

TEST(ParallelMapTest, FailuresStayInTheirSlot) {
  const std::function<int(std::size_t)> fn = [](std::size_t i) -> int {
    if (i == 1) throw std::runtime_error("bad item");
    return static_cast<int>(i) * 10;
  };
  for (const auto& cfg : {simulated(2), threaded(3)}) {
    const auto r = parallel_map<int>(4, fn, cfg);
    ASSERT_EQ(r.size(), 4u);
    EXPECT_EQ(r[0].value, 0);
    EXPECT_FALSE(r[1].ok());
    ASSERT_TRUE(r[1].error);
    EXPECT_THROW(std::rethrow_exception(r[1].error), std::runtime_error);
    EXPECT_EQ(r[2].value, 20);
    EXPECT_EQ(r[3].value, 30);
  }
}

TEST(ParallelMapTest, EachItemRunsOnce) {
  std::vector<std::atomic<int>> hits(200);
  const std::function<int(std::size_t)> fn = [&](std::size_t i) {
    hits[i].fetch_add(1);
    return 0;
  };
  parallel_map<int>(200, fn, threaded(4));
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

PoolTask noop(std::size_t key) {
  return {key, 0, [] { return std::any(); }};
}

TEST(TaskPoolTest, ProcessesExactlyTheQueue) {
  for (const auto& cfg : {simulated(2), threaded(2)}) {
    TaskQueue q;
    for (std::size_t i = 0; i < 5; ++i) q.push_back(noop(i));
    int processed = 0;
    run_task_pool(q, [&] { return processed == 5; },
                  [&](const PoolTask&, PoolOutcome&, TaskQueue&) { ++processed; }, cfg);
    EXPECT_EQ(processed, 5);
  }
}

TEST(TaskPoolTest, ChildrenAreProcessed) {
  for (const auto& cfg : {simulated(3), threaded(3)}) {
    TaskQueue q;
    for (std::size_t i = 0; i < 5; ++i) q.push_back(noop(i));
    int processed = 0;
    int spawned = 0;
    run_task_pool(q, [&] { return processed == 8; },
                  [&](const PoolTask&, PoolOutcome&, TaskQueue& queue) {
                    ++processed;
                    if (spawned < 3) {
                      ++spawned;
                      queue.push_back(noop(100 + spawned));
                    }
                  },
                  cfg);
    EXPECT_EQ(processed, 8);
  }
}

TEST(TaskPoolTest, TerminatedUpFrontDispatchesNothing) {
  TaskQueue q;
  q.push_back(noop(0));
  PoolTrace trace;
  int processed = 0;
  run_task_pool(q, [] { return true; },
                [&](const PoolTask&, PoolOutcome&, TaskQueue&) { ++processed; }, simulated(2), &trace);
  EXPECT_EQ(processed, 0);
  EXPECT_TRUE(trace.events.empty());
}

TEST(TaskPoolTest, StallIsReported) {
  for (const auto& cfg : {simulated(2), threaded(2)}) {
    TaskQueue q;
    q.push_back(noop(0));
    EXPECT_THROW(run_task_pool(q, [] { return false; },
                               [](const PoolTask&, PoolOutcome&, TaskQueue&) {}, cfg),
                 ConfigError);
  }
  TaskQueue q;
  EXPECT_THROW(run_task_pool(q, [] { return true; }, [](const PoolTask&, PoolOutcome&, TaskQueue&) {},
                             simulated(0)),
               ConfigError);
}

TEST(TaskPoolTest, ErrorsReachProcessResult) {
  TaskQueue q;
  q.push_back({0, 0, []() -> std::any { throw std::runtime_error("boom"); }});
  bool saw_error = false;
  run_task_pool(q, [&] { return saw_error; },
                [&](const PoolTask&, PoolOutcome& out, TaskQueue&) { saw_error = static_cast<bool>(out.error); },
                simulated(1));
  EXPECT_TRUE(saw_error);
}

TEST(TaskPoolTest, ProcessResultIsSerialized) {
  TaskQueue q;
  for (std::size_t i = 0; i < 64; ++i) {
    q.push_back({i, 0, [] {
                   std::this_thread::sleep_for(std::chrono::microseconds(50));
                   return std::any();
                 }});
  }
  std::atomic<int> inside{0};
  std::int64_t sequence = 0;
  std::vector<std::int64_t> observed;
  bool overlap = false;
  run_task_pool(q, [&] { return sequence == 64; },
                [&](const PoolTask&, PoolOutcome&, TaskQueue&) {
                  if (inside.fetch_add(1) != 0) overlap = true;
                  observed.push_back(sequence);
                  std::this_thread::sleep_for(std::chrono::microseconds(20));
                  ++sequence;
                  inside.fetch_sub(1);
                },
                threaded(4));
  EXPECT_FALSE(overlap);
  ASSERT_EQ(observed.size(), 64u);
  for (std::size_t i = 0; i < observed.size(); ++i) EXPECT_EQ(observed[i], static_cast<std::int64_t>(i));
}

TEST(TaskPoolTest, SimulatedRunsAreDeterministic) {
  auto run = [] {
    WorkerPoolConfig cfg = simulated(3);
    cfg.latency.jitter = 0.5;
    cfg.latency.seed = 77;
    PoolTrace trace;
    const std::function<int(std::size_t)> id = [](std::size_t i) { return static_cast<int>(i); };
    parallel_map<int>(20, id, cfg, &trace);
    return trace;
  };
  EXPECT_EQ(run(), run());
}

TEST(MetricsTest, Speed) {
  PoolTrace t;
  t.workers = 4;
  t.record(EventKind::kDispatch, 0.0, 0, 0, 0);
  for (int i = 0; i < 100; ++i) t.record(EventKind::kComplete, 0.1 * (i + 1), i % 4, i, 0);
  EXPECT_NEAR(pool_speed(t), 10.0, 1e-12);
  EXPECT_THROW(pool_speed(PoolTrace{}), ConfigError);
}

TEST(MetricsTest, EfficiencyFromReportedSpeeds) {
  EXPECT_NEAR(parallel_efficiency(154, 10, 78, 5), 98.7179, 1e-3);
  EXPECT_DOUBLE_EQ(parallel_efficiency(20, 2, 10, 1), 100.0);
  EXPECT_THROW(parallel_efficiency(1, 0, 1, 1), ConfigError);
}

TEST(MetricsTest, DoublingWorkersWithEqualLatencies) {
  const std::function<int(std::size_t)> id = [](std::size_t i) { return static_cast<int>(i); };
  PoolTrace base, doubled;
  parallel_map<int>(16, id, simulated(2), &base);
  parallel_map<int>(16, id, simulated(4), &doubled);
  base.workers = 2;
  doubled.workers = 4;
  const PoolMetrics m = compute_metrics(doubled, base);
  EXPECT_DOUBLE_EQ(m.speed, 4.0);
  EXPECT_DOUBLE_EQ(m.efficiency, 100.0);
}

TEST(PoolTraceTest, RoundTrip) {
  PoolTrace t;
  t.workers = 3;
  t.record(EventKind::kDispatch, 0.0, 0, 4, 1);
  t.record(EventKind::kComplete, 1.0 / 3.0, 0, 4, 1);
  t.record(EventKind::kMaster, 0.5, -1, 0, 2);
  std::stringstream ss;
  write_pool_trace(t, ss);
  EXPECT_EQ(read_pool_trace(ss), t);
  std::stringstream bad("# workers=1\nevent\ttime\tworker\tkey\ttag\nteleport\t0\t0\t0\t0\n");
  EXPECT_THROW(read_pool_trace(bad), ParseError);
}

}  // namespace
}  // namespace orkit
