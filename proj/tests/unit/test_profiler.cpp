#include <thread>

#include "doctest.h"
#include "ellcfd/profiler.hpp"

using namespace ellcfd;

TEST_SUITE("profiler") {
  TEST_CASE("stage names") {
    CHECK(kStageNames.size() == 6);
    CHECK(kStageNames[static_cast<std::size_t>(Stage::smvp)] == "smvp");
    CHECK(kStageNames[static_cast<std::size_t>(Stage::precond)] == "precond");
  }

  TEST_CASE("stage timer accumulates into its slot") {
    StageTimes t;
    {
      StageTimer s(&t, Stage::dot);
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    { StageTimer s(&t, Stage::dot); }
    { StageTimer s(nullptr, Stage::dot); }
    CHECK(t[Stage::dot] >= 0.002);
    CHECK(t.calls[static_cast<std::size_t>(Stage::dot)] == 2);
    CHECK(t.total() == t[Stage::dot]);
    StageTimes u = t;
    u += t;
    CHECK(u[Stage::dot] == 2 * t[Stage::dot]);
    CHECK(u.calls[static_cast<std::size_t>(Stage::dot)] == 4);
  }

  TEST_CASE("named timers") {
    Profiler p;
    {
      ScopedTimer a(&p, "assembly.lap");
      ScopedTimer b(nullptr, "ignored");
    }
    p.add("assembly.lap", 0.5);
    CHECK(p.calls("assembly.lap") == 2);
    CHECK(p.seconds("assembly.lap") >= 0.5);
    CHECK(p.seconds("missing") == 0.0);
    CHECK(p.calls("missing") == 0);
    CHECK(p.entries().size() == 1);
  }
}
