#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace ellcfd {

/// Kernel groups timed inside the Krylov solvers.
enum class Stage : std::uint8_t { smvp, daxpy, dot, reduction, precond, other };

inline constexpr std::array<std::string_view, 6> kStageNames = {"smvp", "daxpy", "dot", "reduction", "precond", "other"};

struct StageTimes {
  std::array<double, 6> seconds{};
  std::array<std::uint64_t, 6> calls{};

  double& operator[](Stage s) { return seconds[static_cast<std::size_t>(s)]; }
  double operator[](Stage s) const { return seconds[static_cast<std::size_t>(s)]; }
  double total() const;
  StageTimes& operator+=(const StageTimes& o);
};

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Adds the lifetime of the scope to a StageTimes slot when enabled.
class StageTimer {
 public:
  StageTimer(StageTimes* sink, Stage stage) : sink_(sink), stage_(stage) {
    if (sink_) t0_ = Clock::now();
  }
  ~StageTimer() {
    if (sink_) {
      (*sink_)[stage_] += seconds_since(t0_);
      ++sink_->calls[static_cast<std::size_t>(stage_)];
    }
  }
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  StageTimes* sink_;
  Stage stage_;
  Clock::time_point t0_{};
};

/// Named wall-clock accumulators for a whole run (assembly operators, solvers).
class Profiler {
 public:
  struct Entry {
    double seconds = 0.0;
    std::uint64_t calls = 0;
  };

  void add(std::string_view name, double seconds);
  const std::map<std::string, Entry, std::less<>>& entries() const { return entries_; }
  double seconds(std::string_view name) const;
  std::uint64_t calls(std::string_view name) const;

  /// Accumulated stage breakdown of all CG solves.
  StageTimes cg_stages;
  StageTimes bicgstab_stages;

 private:
  std::map<std::string, Entry, std::less<>> entries_;
};

/// Times a scope into a Profiler entry; a null profiler disables it.
class ScopedTimer {
 public:
  ScopedTimer(Profiler* p, std::string_view name) : p_(p), name_(name) {
    if (p_) t0_ = Clock::now();
  }
  ~ScopedTimer() {
    if (p_) p_->add(name_, seconds_since(t0_));
  }
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

 private:
  Profiler* p_;
  std::string_view name_;
  Clock::time_point t0_{};
};

}  // namespace ellcfd
