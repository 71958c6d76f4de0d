#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "support/csv.hpp"

using ugm::testing::read_csv;
using ugm::testing::scratch_dir;

namespace {

int ugbench(const std::string& args) {
  const std::string cmd = std::string(UGBENCH_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("run succeeds and writes traces") {
  const auto dir = scratch_dir("cli_run");
  CHECK(ugbench("run --data synthetic:100x50:1 --solver ugm --iters 1000 --out " + dir.string()) == 0);
  const auto trace = read_csv(dir / "trace_ugm_0.csv");
  CHECK(trace.rows.size() == 1000);
  CHECK(trace.number(999, "cert_gap") > 0.0);
}

TEST_CASE("usage errors exit 2") {
  const auto dir = scratch_dir("cli_usage");
  const std::string out = " --out " + dir.string();
  CHECK(ugbench("run --solver bogus" + out) == 2);
  CHECK(ugbench("run --iters -3" + out) == 2);
  CHECK(ugbench("run --oracle gaussian" + out) == 2);
  CHECK(ugbench("run --data missing.svm" + out) == 2);
  CHECK(ugbench("launch") == 2);
  CHECK(ugbench("run --no-such-flag") == 2);
  CHECK(ugbench("sweep --solver sgd --steps ''" + out) == 2);
  CHECK(ugbench("compare --solver usgm --iters 10" + out) == 2);
  CHECK(ugbench("run --config " + (dir / "absent.cfg").string()) == 2);
}

TEST_CASE("data parse errors exit 3") {
  const auto dir = scratch_dir("cli_data");
  {
    std::ofstream f(dir / "bad.svm");
    f << "1 1:0.5\n2 1:0.1 1:0.2\n";
  }
  CHECK(ugbench("run --data " + (dir / "bad.svm").string() + " --out " + (dir / "o").string()) == 3);
}

TEST_CASE("config files combine with flags") {
  const auto dir = scratch_dir("cli_config");
  {
    std::ofstream f(dir / "a.cfg");
    f << "data = synthetic:30x6:2\nsolver = usgm\noracle = gaussian:0.1\niters = 40\nseeds = 5\n";
    std::ofstream g(dir / "b.cfg");
    g << "data = synthetic:30x6:2\nsolver = adagrad\noracle = gaussian:0.1\niters = 40\nseeds = 5\n";
  }
  CHECK(ugbench("run --config " + (dir / "a.cfg").string() + " --iters 20 --out " + dir.string()) == 0);
  CHECK(read_csv(dir / "trace_usgm_5.csv").rows.size() == 20);

  const auto cmp = dir / "cmp";
  CHECK(ugbench("compare --config " + (dir / "a.cfg").string() + " --config " + (dir / "b.cfg").string() +
                " --out " + cmp.string()) == 0);
  const auto csv = read_csv(cmp / "compare_5.csv");
  CHECK(csv.rows.size() == 40);
  CHECK(csv.header.back() == "domination_margin");
}
