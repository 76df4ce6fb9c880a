// SPDX-License-Identifier: Apache-2.0
//
// qlamc - Q-learning link adaptation simulator for beam-based 5G NR
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "qlamc/sim_engine.hpp"

#include <doctest.h>

#include <set>

using namespace qlamc;

namespace
{

MobilityTrack parked(double distance_m, double azimuth_deg = 0.0)
{
    return MobilityTrack(Vec2::polar(distance_m, deg_to_rad(azimuth_deg)), Vec2{}, MobilityMode::random_rectilinear,
                         10.0, 200.0);
}

// Records every call; always picks the same action
class Recorder final : public LinkAdapter
{
  public:
    explicit Recorder(std::size_t action) : action_(action) {}
    std::size_t select(double snr_db) override
    {
        selects.push_back(snr_db);
        return action_;
    }
    void observe(std::span<const TransmissionOutcome> outcomes, double next_snr_db) override
    {
        windows.push_back(outcomes.size());
        next.push_back(next_snr_db);
    }
    std::vector<double> selects;
    std::vector<std::size_t> windows;
    std::vector<double> next;

  private:
    std::size_t action_;
};

DeploymentConfig small_deployment(int runs, std::int64_t frames)
{
    DeploymentConfig d;
    d.n_runs = runs;
    d.n_frames = frames;
    d.seed = 11;
    d.keep_trace = true;
    return d;
}

} // namespace

TEST_CASE("frame schedule: one sweep slot and ten TTIs in 5 ms")
{
    const FrameSchedule s;
    CHECK(s.slots_per_frame() == 11);
    CHECK(s.slot_duration_s() == doctest::Approx(5e-3 / 11.0));
    FrameSchedule bad = s;
    bad.mcs_decision_period_ttis = 3;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("radial track reverses at both radii")
{
    MobilityTrack t(Vec2{20.0, 0.0}, Vec2{kmh_to_mps(5.0), 0.0}, MobilityMode::radial_out_and_back, 20.0, 100.0);
    double lo = 1e9, hi = 0.0;
    bool reversed_out = false;
    for (int i = 0; i < 200000; ++i)
    {
        t.advance(1e-3);
        const double r = t.position().norm();
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        reversed_out |= t.velocity().x < 0.0;
    }
    CHECK(reversed_out);
    CHECK(hi < 100.01);
    CHECK(hi > 99.9);
    CHECK(lo > 19.99);
}

TEST_CASE("run environment: frame layout and reproducibility")
{
    const SimConfig cfg;
    RunEnvironment a(cfg, parked(50.0), 3, 0);
    RunEnvironment b(cfg, parked(50.0), 3, 0);
    RunEnvironment c(cfg, parked(50.0), 3, 1);
    for (int k = 0; k < 4; ++k)
    {
        const auto fa = a.next_frame();
        const auto fb = b.next_frame();
        const auto fc = c.next_frame();
        REQUIRE(fa.ttis.size() == 10);
        CHECK(fa.frame == k);
        for (std::size_t j = 0; j < 10; ++j)
        {
            CHECK(fa.ttis[j].snr_db == fb.ttis[j].snr_db);
            CHECK(fa.ttis[j].draw == fb.ttis[j].draw);
            CHECK(fa.ttis[j].draw != fc.ttis[j].draw);
            CHECK(fa.ttis[j].draw >= 0.0);
            CHECK(fa.ttis[j].draw < 1.0);
            if (j)
                CHECK(fa.ttis[j].t_symbols > fa.ttis[j - 1].t_symbols);
        }
        CHECK(fa.ttis.front().t_symbols > k * 600);
        CHECK(fa.ttis.back().t_symbols < (k + 1) * 600);
    }
}

TEST_CASE("a parked UE sees a constant SNR and gets a constant MCS")
{
    const SimConfig cfg;
    RunEnvironment env(cfg, parked(40.0, 15.0), 5, 2);
    TableAgent agent(build_illa_table(cfg.link.bler, mcs_table(), 0.1));
    std::set<int> mcs;
    double first = 0.0;
    for (int k = 0; k < 20; ++k)
    {
        const auto f = env.next_frame();
        const auto t = run_frame(f, f.ttis.back().snr_db, agent, cfg);
        for (const auto &r : t.ttis)
        {
            if (k == 0 && r.tti == 0)
                first = r.snr_db;
            CHECK(std::abs(r.snr_db - first) < 1e-9);
            mcs.insert(r.mcs_index);
        }
    }
    CHECK(mcs.size() == 1);
}

TEST_CASE("run_frame: decision points, feedback windows and the SE identity")
{
    SimConfig cfg;
    RunEnvironment env(cfg, MobilityTrack(Vec2{30.0, 5.0}, Vec2{3.0, -1.0}, MobilityMode::random_rectilinear, 10.0,
                                          150.0),
                       9, 0);
    const auto f0 = env.next_frame();
    const auto f1 = env.next_frame();

    Recorder every(4);
    const auto t = run_frame(f0, f1.ttis.front().snr_db, every, cfg);
    CHECK(t.ttis.size() == 10);
    CHECK(every.selects.size() == 10);
    CHECK(every.windows == std::vector<std::size_t>(10, 1));
    CHECK(every.next.back() == f1.ttis.front().snr_db);
    for (std::size_t j = 0; j + 1 < 10; ++j)
        CHECK(every.next[j] == f0.ttis[j + 1].snr_db);

    cfg.schedule.mcs_decision_period_ttis = 5;
    Recorder slow(4);
    run_frame(f0, 0.0, slow, cfg);
    CHECK(slow.selects.size() == 2);
    CHECK(slow.windows == std::vector<std::size_t>{5, 5});

    RunMetrics m;
    double se = 0.0;
    int nacks = 0;
    for (const auto &r : t.ttis)
    {
        m.add(r, true);
        se += r.efficiency;
        nacks += !r.ack;
        const McsEntry &e = mcs_table()[4];
        CHECK(r.mcs_index == e.index);
        CHECK(r.efficiency == (r.ack ? e.nominal_efficiency() : 0.0));
    }
    CHECK(m.tti_count() == 10);
    CHECK(std::abs(m.mean_spectral_efficiency() - se / 10.0) <= 1e-12);
    CHECK(m.mean_bler() == doctest::Approx(nacks / 10.0));
}

TEST_CASE("SNR falls with distance (paired sign test)")
{
    SimConfig cfg;
    int wins = 0;
    for (std::uint64_t run = 0; run < 50; ++run)
    {
        RunEnvironment near(cfg, parked(20.0), 21, run);
        RunEnvironment far(cfg, parked(100.0), 21, run);
        wins += near.next_frame().sweep_snr_db > far.next_frame().sweep_snr_db;
    }
    CHECK(wins >= 45);
}

TEST_CASE("learning phase: timing, epsilon and visit bookkeeping")
{
    CHECK(LearningConfig{}.n_frames * FrameSchedule{}.t_ss_ms * 1e-3 == doctest::Approx(160.0));

    SimConfig cfg;
    LearningConfig learning;
    learning.n_frames = 200;
    learning.seed = 4;
    QlConfig ql;
    const auto r = run_learning_phase(cfg, learning, ql);
    CHECK(r.simulated_time_s == doctest::Approx(1.0));
    CHECK(r.decisions == 2000);
    CHECK(r.final_epsilon == doctest::Approx(0.05));
    CHECK(r.trace.size() == 200);
    CHECK(r.trace.front().epsilon == 0.5);
    std::uint64_t visits = 0;
    for (int s = 0; s < r.table.n_states(); ++s)
        visits += r.table.state_visits(s);
    CHECK(visits == 2000);
    CHECK(r.table.n_states() == 30);
    CHECK(r.table.n_actions() == 25);
    for (std::size_t k = 1; k < r.trace.size(); ++k)
        CHECK(r.trace[k].epsilon <= r.trace[k - 1].epsilon);

    const auto again = run_learning_phase(cfg, learning, ql);
    CHECK(again.table == r.table);
}

TEST_CASE("deployment: shapes, common random numbers and thread independence")
{
    SimConfig cfg;
    QlConfig ql;
    std::vector<DeployedAgent> agents{{AgentSpec::parse("table"), {}},
                                      {AgentSpec::parse("olla:0.1"), {}},
                                      {AgentSpec::parse("qlamc:10:se"), QTable(10, 25)}};
    const auto dep = small_deployment(4, 6);
    const auto res = run_deployment_phase(cfg, dep, ql, agents);
    REQUIRE(res.size() == 3);
    for (const auto &a : res)
    {
        REQUIRE(a.runs.size() == 4);
        for (const auto &m : a.runs)
        {
            CHECK(m.tti_count() == 60);
            CHECK(m.trace().size() == 60);
        }
    }
    // every agent of a run sees the same SNR sequence
    for (std::size_t run = 0; run < 4; ++run)
        for (std::size_t i = 0; i < 60; ++i)
        {
            CHECK(res[0].runs[run].trace()[i].snr_db == res[1].runs[run].trace()[i].snr_db);
            CHECK(res[0].runs[run].trace()[i].snr_db == res[2].runs[run].trace()[i].snr_db);
        }

    auto par = dep;
    par.parallel = 3;
    const auto res2 = run_deployment_phase(cfg, par, ql, agents);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t run = 0; run < 4; ++run)
        {
            CHECK(res2[i].runs[run].mean_bler() == res[i].runs[run].mean_bler());
            CHECK(res2[i].runs[run].mean_spectral_efficiency() == res[i].runs[run].mean_spectral_efficiency());
        }

    double sum = 0.0;
    for (const auto &m : res[1].runs)
        sum += m.mean_spectral_efficiency();
    CHECK(std::abs(res[1].mean_spectral_efficiency() - sum / 4.0) <= 1e-12);
}

TEST_CASE("deployment tracks start inside the sector and the distance range")
{
    DeploymentConfig d;
    for (std::uint64_t run = 0; run < 500; ++run)
    {
        const auto t = deployment_track(d, run);
        const double r = t.position().norm();
        CHECK(r >= 25.0);
        CHECK(r <= 90.0);
        CHECK(std::abs(t.position().azimuth()) <= pi / 3.0 + 1e-12);
        const double v = t.velocity().norm() * 3.6;
        CHECK(v >= 10.0);
        CHECK(v <= 20.0);
    }
}

TEST_CASE("deployment rejects mismatched tables and empty agent lists")
{
    SimConfig cfg;
    QlConfig ql;
    const auto dep = small_deployment(1, 1);
    CHECK_THROWS_AS(run_deployment_phase(cfg, dep, ql, {{AgentSpec::parse("qlamc:30:se"), QTable(10, 25)}}),
                    ConfigError);
    CHECK_THROWS_AS(run_deployment_phase(cfg, dep, ql, {{AgentSpec::parse("qlamc:30:se"), {}}}), ConfigError);
    CHECK_THROWS_AS(run_deployment_phase(cfg, dep, ql, {}), ConfigError);
}

TEST_CASE("agent ids round trip")
{
    for (const char *id : {"qlamc:60:se", "qlamc:10:bler", "table", "olla:0.1", "olla:1", "olla:0.01"})
        CHECK(AgentSpec::parse(id).id() == id);
    CHECK(AgentSpec::parse("olla:0.1").type_label() == "OLLA");
    for (const char *bad : {"qlamc:60", "qlamc:1:se", "qlamc:30:xx", "table:1", "olla:-1", "olla", "foo"})
        CHECK_THROWS_AS(AgentSpec::parse(bad), ConfigError);
}

TEST_CASE("empirical CDF")
{
    const std::vector<double> one{2.5};
    const auto c1 = aggregate_cdf(one);
    REQUIRE(c1.size() == 1);
    CHECK(c1[0].probability == 1.0);
    CHECK(cdf_at(c1, 2.4) == 0.0);
    CHECK(cdf_at(c1, 2.5) == 1.0);

    const std::vector<double> four{4.0, 1.0, 3.0, 2.0};
    CHECK(cdf_at(aggregate_cdf(four), 2.5) == 0.5);

    Rng rng(1);
    std::vector<double> many(200);
    for (auto &v : many)
        v = uniform01(rng) * 5.0;
    const auto c = aggregate_cdf(many);
    CHECK(c.size() == 200);
    CHECK(c.back().probability == 1.0);
    for (std::size_t i = 1; i < c.size(); ++i)
    {
        CHECK(c[i].value >= c[i - 1].value);
        CHECK(c[i].probability > c[i - 1].probability);
    }
    CHECK_THROWS_AS(aggregate_cdf(std::vector<double>{}), ConfigError);
}
