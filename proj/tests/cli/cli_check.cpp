// End-to-end contract check for the command-line tool: spawns the built
// binary and verifies the stable exit codes, the produced files, and the
// fixed CSV layout.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "uiobank/examples.hpp"
#include "uiobank/io.hpp"

namespace fs = std::filesystem;
using namespace uiobank;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "  ok  " : "  FAIL", what.c_str());
    if (!ok) ++failures;
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const fs::path log = fs::path(UIOBANK_CLI_WORKDIR) / "last_run.log";
    const std::string cmd =
        std::string(UIOBANK_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream in(log);
    std::ostringstream buf;
    buf << in.rdbuf();
    int code = -1;
    if (raw != -1) code = WEXITSTATUS(raw);
    return {code, buf.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

int main() {
    const fs::path work(UIOBANK_CLI_WORKDIR);
    fs::remove_all(work);
    fs::create_directories(work);

    const fs::path plant1 = work / "plant1.json";
    std::ofstream(plant1) << plant_to_json(example_plant(1));
    const fs::path plant2 = work / "plant2.json";
    std::ofstream(plant2) << plant_to_json(example_plant(2));
    const fs::path scenario1 = work / "scenario1.json";
    std::ofstream(scenario1) << scenario_to_json(example_scenario(1, 3));

    {
        RunResult r = run("analyze --plant " + plant1.string());
        check(r.exit_code == 0, "analyze exits 0 on a valid plant");
        check(r.output.find("q = 1") != std::string::npos, "analyze reports q = 1");
        check(r.output.find("complete") != std::string::npos, "analyze names the applicable scheme");
    }
    {
        const fs::path bad = work / "bad_plant.json";
        std::ofstream(bad) << R"({"A": [[1.0]], "B": [[0.0]], "C": [[1.0]]})";
        RunResult r = run("analyze --plant " + bad.string());
        check(r.exit_code == 2, "analyze exits 2 on a plant violating its invariants");
        check(r.output.find("column rank") != std::string::npos, "diagnostic names the invariant");
    }
    {
        RunResult r = run("analyze --plant " + (work / "missing.json").string());
        check(r.exit_code == 2, "analyze exits 2 on a missing file");
    }
    {
        const fs::path out = work / "design1";
        RunResult r = run("design --plant " + plant1.string() + " --out " + out.string());
        check(r.exit_code == 0, "design exits 0 for the complete scheme");
        check(fs::exists(out / "designs.json"), "design writes designs.json");
        const std::string doc = slurp(out / "designs.json");
        check(doc.find("\"kind\": \"complete\"") != std::string::npos, "design document names the scheme");
    }
    {
        RunResult r = run("design --plant " + plant2.string() + " --out " + (work / "design2").string());
        check(r.exit_code == 3, "design exits 3 when no scheme is feasible");
    }
    {
        // a plant with a fifth sensor row admits the partial scheme
        Mat a(3, 3), b(3, 3), c(5, 3);
        a << 0.5, 0, 0.1, 0.2, 0.7, 0, 1, 0, 0.3;
        b << 0.5, 0, 0.5, 1, 1, 0.1, 0, 0, 0.5;
        c << 1, 2, 0, 0, 1, 1, 0, 1, 2, 1, 1, 1, 2, 0, 1;
        const fs::path plant5 = work / "plant5.json";
        std::ofstream(plant5) << plant_to_json(PlantModel(a, b, c));
        const fs::path out = work / "design5";
        RunResult r = run("design --plant " + plant5.string() + " --out " + out.string() +
                          " --scheme partial");
        check(r.exit_code == 0, "design exits 0 for the partial scheme");
        const std::string doc = slurp(out / "designs.json");
        check(doc.find("\"kind\": \"partial\"") != std::string::npos, "partial document names the scheme");
        check(doc.find("\"T\"") != std::string::npos, "partial designs carry the known-input matrix");
        check(doc.find("\"gain_table\"") != std::string::npos, "gain table rides along");
    }
    {
        const fs::path out = work / "sim1";
        RunResult r = run("simulate --scenario " + scenario1.string() + " --out " + out.string() +
                          " --plots");
        check(r.exit_code == 0, "simulate exits 0");
        check(fs::exists(out / "trace.csv"), "simulate writes trace.csv");
        check(fs::exists(out / "summary.json"), "simulate writes summary.json");
        check(fs::exists(out / "plots" / "error_norm.dat"), "simulate writes plot series");
        const std::string csv = slurp(out / "trace.csv");
        check(csv.rfind("k,x_1,x_2,u_1,au_1,ay_1,ay_2,ay_3,ay_4,y_1,y_2,y_3,y_4,xhat_1,xhat_2,"
                        "sigma,pi_min,auhat_1,ayhat_1,ayhat_2,ayhat_3,ayhat_4,Wu,Wy,rho\n",
                        0) == 0,
              "trace.csv carries the documented column order");
    }
    {
        RunResult r = run("simulate --scenario " + scenario1.string() + " --out " +
                          (work / "sim2").string() + " --horizon 0");
        check(r.exit_code == 2, "simulate exits 2 on an invalid horizon override");
    }
    {
        // unstable three-state plant, no estimator, no control: diverges
        Scenario s{example_plant(6)};
        s.horizon = 200;
        s.estimator = EstimatorKind::none;
        s.x0.kind = InitialStateSpec::Kind::fixed;
        s.x0.value = (Vec(3) << 0, 1, 0).finished();
        const fs::path doc = work / "diverging.json";
        std::ofstream(doc) << scenario_to_json(s);
        RunResult r = run("simulate --scenario " + doc.string() + " --out " + (work / "sim3").string());
        check(r.exit_code == 4, "simulate exits 4 on divergence");
        check(r.output.find("step") != std::string::npos, "divergence diagnostic names the step");
    }
    {
        const fs::path out = work / "rep1";
        RunResult r = run("reproduce 1 --out " + out.string());
        check(r.exit_code == 0, "reproduce 1 exits 0");
        check(fs::exists(out / "report.json"), "reproduce writes report.json");
        check(fs::exists(out / "scenario.json"), "reproduce writes the scenario document");
        RunResult again = run("reproduce 1 --out " + (work / "rep1b").string());
        check(slurp(out / "trace.csv") == slurp(work / "rep1b" / "trace.csv"),
              "reproduce is idempotent for a fixed seed");
    }
    {
        RunResult r = run("reproduce 2");
        check(r.exit_code == 3, "reproduce 2 exits 3 (bank synthesis infeasible for that system)");
    }
    {
        RunResult r = run("reproduce 9");
        check(r.exit_code == 2, "reproduce rejects an out-of-range id");
        RunResult r2 = run("bogus");
        check(r2.exit_code == 2, "unknown subcommands exit 2");
    }

    std::printf("%s\n", failures == 0 ? "cli contract: all checks passed" : "cli contract: FAILURES");
    return failures == 0 ? 0 : 1;
}
