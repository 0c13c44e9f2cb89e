#include <doctest.h>

#include "sitdyn/config.hpp"
#include "sitdyn/error.hpp"

using namespace sitdyn;

TEST_CASE("presets carry the documented settings") {
    const SimConfig global = preset("paper-global");
    REQUIRE(global.ctrl.has_value());
    CHECK(global.ctrl->theta == 75.0);
    CHECK(global.ctrl->alpha == 0.25);
    CHECK(global.mask.kind == MaskKind::Whole);
    CHECK(global.t_max == 400.0);
    CHECK(global.params.d3 == 0.05);
    CHECK(global.grid.nx == 50);
    CHECK(global.grid.dx == doctest::Approx(0.1));

    const SimConfig local = preset("paper-local");
    REQUIRE(local.ctrl.has_value());
    CHECK(local.ctrl->alpha == 0.001);
    CHECK(local.mask.kind == MaskKind::Square);
    CHECK(local.mask.cx == 2.5);
    CHECK(local.mask.cy == 2.5);
    CHECK(local.mask.rho == 1.0);

    const SimConfig wild = preset("paper-uncontrolled");
    CHECK_FALSE(wild.ctrl.has_value());
    CHECK(wild.mask.kind == MaskKind::Off);

    CHECK(preset("paper-k-field").t_max == 0.0);
    CHECK(preset("ode-bifurcation").mode == "ode-bifurcation");

    CHECK_THROWS_AS(preset("nonesuch"), ConfigError);
    CHECK(preset_names().size() == 5);
}

TEST_CASE("config text round-trips through write and parse") {
    for (const auto& name : preset_names()) {
        const SimConfig cfg = preset(name);
        const SimConfig back = parse_config(write_config(cfg));
        CHECK(back == cfg);
    }
}

TEST_CASE("parser reads sectioned key-value text") {
    const std::string text =
        "# reference setup\n"
        "[params]\n"
        "beta_E = 10\n"
        "d3 = 0\n"
        "\n"
        "[control]\n"
        "theta = 60\n"
        "alpha = 0.01\n"
        "\n"
        "[grid]\n"
        "nx = 25\n"
        "ny = 25\n"
        "lx = 5\n"
        "ly = 5\n"
        "\n"
        "[run]\n"
        "t_max = 10\n"
        "snapshot_times = 0, 5, 10\n"
        "control_mask = square(2.5, 2.5, 0.75)\n"
        "initial = capacity\n"
        "stop_on_convergence = false\n";
    const SimConfig cfg = parse_config(text);
    CHECK(cfg.params.beta_E == 10.0);
    CHECK(cfg.params.d3 == 0.0);
    REQUIRE(cfg.ctrl.has_value());
    CHECK(cfg.ctrl->theta == 60.0);
    CHECK(cfg.grid.nx == 25);
    CHECK(cfg.grid.dx == doctest::Approx(0.2));
    CHECK(cfg.snapshot_times == std::vector<double>{0.0, 5.0, 10.0});
    CHECK(cfg.mask.kind == MaskKind::Square);
    CHECK(cfg.mask.rho == 0.75);
    CHECK(cfg.initial == "capacity");
    CHECK_FALSE(cfg.stop_on_convergence);
}

TEST_CASE("parser rejects unknown keys and sections") {
    CHECK_THROWS_AS(parse_config("[params]\nbeta = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[nope]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("beta_E = 1\n"), ConfigError);  // key before any section
    CHECK_THROWS_AS(parse_config("[params]\nbeta_E = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[run]\ncontrol_mask = circle(1,1,1)\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[run]\nt_max = 5\nsnapshot_times = 9\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nnx = 10\ndx = 0.1\nlx = 5\n"), ConfigError);
}

TEST_CASE("set overrides reach into the right section") {
    SimConfig cfg = preset("paper-global");

    apply_set(cfg, "d3=0.1");
    CHECK(cfg.params.d3 == 0.1);

    apply_set(cfg, "alpha=0.025");
    CHECK(cfg.ctrl->alpha == 0.025);

    apply_set(cfg, "run.t_max=250");  // still covers the preset snapshots
    CHECK(cfg.t_max == 250.0);

    apply_set(cfg, "zeta=600");
    CHECK(cfg.kfield.zeta == 600.0);

    CHECK_THROWS_AS(apply_set(cfg, "bogus=1"), ConfigError);
    CHECK_THROWS_AS(apply_set(cfg, "no-assignment"), ConfigError);
}

TEST_CASE("batched overrides validate only the combined result") {
    // paper-global carries a snapshot at t=200, so shrinking t_max first
    // passes through an invalid intermediate state; the batch must accept it.
    SimConfig cfg = preset("paper-global");
    apply_sets(cfg, {"run.t_max=20", "snapshot_times=5,20"});
    CHECK(cfg.t_max == 20.0);
    CHECK(cfg.snapshot_times == std::vector<double>{5.0, 20.0});

    // A single apply_set still validates immediately.
    SimConfig again = preset("paper-global");
    CHECK_THROWS_AS(apply_set(again, "run.t_max=20"), ConfigError);

    // The combined result must still be consistent.
    SimConfig bad = preset("paper-global");
    CHECK_THROWS_AS(apply_sets(bad, {"run.t_max=20", "snapshot_times=30"}), ConfigError);
    CHECK(bad.t_max == 400.0);  // failed batches leave the config untouched

    // An empty value clears a list-valued key.
    SimConfig cleared = preset("paper-global");
    apply_sets(cleared, {"snapshot_times=", "run.t_max=20"});
    CHECK(cleared.snapshot_times.empty());
}

TEST_CASE("grid overrides rebalance widths and extents") {
    SimConfig cfg = preset("paper-global");
    apply_set(cfg, "grid.nx=100");
    CHECK(cfg.grid.nx == 100);
    CHECK(cfg.grid.lx == doctest::Approx(5.0));  // extent kept, width recomputed
    CHECK(cfg.grid.dx == doctest::Approx(0.05));

    apply_set(cfg, "grid.dx=0.1");
    CHECK(cfg.grid.dx == doctest::Approx(0.1));  // width kept, extent recomputed
    CHECK(cfg.grid.lx == doctest::Approx(10.0));
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("setting a control key enables control with defaults") {
    SimConfig cfg = preset("paper-uncontrolled");
    REQUIRE_FALSE(cfg.ctrl.has_value());
    apply_set(cfg, "theta=80");
    REQUIRE(cfg.ctrl.has_value());
    CHECK(cfg.ctrl->theta == 80.0);
    CHECK(cfg.ctrl->alpha == 0.25);
}

TEST_CASE("validation catches inconsistent run settings") {
    SimConfig cfg = preset("paper-global");
    cfg.t_max = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = preset("paper-global");
    cfg.output_interval = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = preset("paper-local");
    cfg.mask.rho = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = preset("paper-global");
    cfg.params.nu = 2.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("config echo is deterministic") {
    const SimConfig cfg = preset("paper-local");
    CHECK(write_config(cfg) == write_config(cfg));
}
