#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "becgs/run.hpp"

using namespace becgs;
namespace fs = std::filesystem;

namespace {

RunSpec small_harmonic_spec(const std::string& out_dir) {
    RunSpec spec = parse_config(R"(
[grid]
half_width = 10
n = 32, 32, 32
levels = 2

[model]
beta = 0
lambda = 0
omega = 0

[solver]
tolerance = 1e-9
max_iterations = 400
guess = c

[output]
slices = z=0
)");
    spec.output_dir = out_dir;
    return spec;
}

}  // namespace

TEST_CASE("harmonic run produces the analytic ground state and artifacts") {
    const std::string dir = "run_test_out";
    fs::remove_all(dir);
    const RunSpec spec = small_harmonic_spec(dir);
    const RunArtifacts art = run(spec);

    CHECK(art.converged);
    CHECK(art.report.total == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(art.report.chemical_potential == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(art.vortex_probe > 0.1);  // no vortex: the central patch carries the peak

    CHECK(fs::exists(fs::path(dir) / "diagnostics.csv"));
    CHECK(fs::exists(fs::path(dir) / "report.json"));
    CHECK(fs::exists(fs::path(dir) / "phi_g.field"));
    CHECK(fs::exists(fs::path(dir) / "slice_z_0.csv"));

    // diagnostics: energies strictly decrease within each (guess, level) block
    std::ifstream diag(fs::path(dir) / "diagnostics.csv");
    std::string line;
    std::getline(diag, line);  // header
    std::string prev_key;
    double prev_energy = 0.0;
    bool first = true;
    while (std::getline(diag, line)) {
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1),
                   c3 = line.find(',', c2 + 1), c4 = line.find(',', c3 + 1);
        const std::string key = line.substr(0, c2);
        const double energy = std::stod(line.substr(c3 + 1, c4 - c3 - 1));
        if (!first && key == prev_key) CHECK(energy <= prev_energy);
        prev_key = key;
        prev_energy = energy;
        first = false;
    }

    fs::remove_all(dir);
}

TEST_CASE("field dump round trips through the run artifacts") {
    const std::string dir = "run_test_out2";
    fs::remove_all(dir);
    const RunSpec spec = small_harmonic_spec(dir);
    const RunArtifacts art = run(spec);

    const FieldDump dump = load_field((fs::path(dir) / "phi_g.field").string());
    REQUIRE(dump.field.size() == art.result.final.state.size());
    for (std::size_t i = 0; i < dump.field.size(); ++i)
        REQUIRE(dump.field[i] == art.result.final.state[i]);
    fs::remove_all(dir);
}

TEST_CASE("reruns reproduce energies and iteration counts exactly") {
    const std::string dir1 = "run_repro_1", dir2 = "run_repro_2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    RunSpec spec = small_harmonic_spec(dir1);
    spec.model.beta = 20.0;  // exercise the nonlinear path
    const RunArtifacts a = run(spec);
    spec.output_dir = dir2;
    const RunArtifacts b = run(spec);

    CHECK(a.report.total == b.report.total);  // bitwise
    REQUIRE(a.outcomes.size() == b.outcomes.size());
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
        CHECK(a.outcomes[i].energy == b.outcomes[i].energy);
        CHECK(a.outcomes[i].finest_iterations == b.outcomes[i].finest_iterations);
    }
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("conjugate-pair sweep selects the first kind deterministically") {
    // without rotation, b and bbar have identical energies; the tie must
    // resolve to b (earlier in kind order)
    const std::string dir = "run_tie_out";
    fs::remove_all(dir);
    RunSpec spec = small_harmonic_spec(dir);
    spec.guesses = {GuessKind::b, GuessKind::b_bar};
    spec.stop.tolerance = 1e-8;
    const RunArtifacts art = run(spec);
    CHECK(art.chosen == GuessKind::b);
    REQUIRE(art.outcomes.size() == 2);
    CHECK(std::abs(art.outcomes[0].energy - art.outcomes[1].energy) < 1e-9);
    fs::remove_all(dir);
}

TEST_CASE("kernel cache directory is honored") {
    const std::string dir = "run_cache_out";
    const std::string cache = "run_cache_dir";
    fs::remove_all(dir);
    fs::remove_all(cache);
    RunSpec spec = small_harmonic_spec(dir);
    spec.counts = {8, 8, 8};
    spec.levels = 1;
    spec.model.beta = 5.0;
    spec.model.lambda = 4.0;
    spec.epsilon_sog = 1e-8;
    spec.stop.tolerance = 1e-7;
    spec.kernel_cache_dir = cache;
    const RunArtifacts a = run(spec);
    CHECK(!fs::is_empty(cache));

    // second run hits the cache and reproduces the result
    spec.output_dir = dir + "_b";
    const RunArtifacts b = run(spec);
    CHECK(a.report.total == b.report.total);
    fs::remove_all(dir);
    fs::remove_all(dir + "_b");
    fs::remove_all(cache);
}
