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


#include "oracles.hpp"
#include "qlamc/beam_management.hpp"
#include "qlamc/channel_model.hpp"

#include <doctest.h>

#include <Eigen/SVD>

using namespace qlamc;

namespace
{
ChannelConfig small_config(int n_paths)
{
    ChannelConfig c;
    c.n_paths = n_paths;
    c.bs_array = {4, 2, 0.5};
    c.ue_array = {2, 1, 0.5};
    return c;
}

double rel_frobenius(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) { return (a - b).norm() / b.norm(); }
} // namespace

TEST_CASE("steering vector: single element is [1]")
{
    const auto a = steering_vector({1, 1, 0.5}, 0.3, 1.2);
    REQUIRE(a.size() == 1);
    CHECK(std::abs(a(0) - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("steering vector: unit norm and equal element magnitude")
{
    Rng rng(11);
    std::uniform_real_distribution<double> az(0.0, 2.0 * pi), el(0.0, pi);
    for (int i = 0; i < 500; ++i)
    {
        const auto a = steering_vector({16, 4, 0.5}, az(rng), el(rng));
        CHECK(std::abs(a.norm() - 1.0) < 1e-12);
        for (Eigen::Index k = 0; k < a.size(); ++k)
            CHECK(std::abs(std::abs(a(k)) - 0.125) < 1e-14);
    }
}

TEST_CASE("steering vector: zero phase argument gives a flat vector")
{
    // azimuth 0 and elevation 90 deg zero both phase terms
    const auto a = steering_vector({8, 1, 0.5}, 0.0, pi / 2);
    for (Eigen::Index k = 0; k < 8; ++k)
        CHECK(std::abs(a(k) - cplx(1.0 / std::sqrt(8.0), 0.0)) < 1e-15);
}

TEST_CASE("steering vector matches the element-wise oracle, azimuth index slowest")
{
    Rng rng(5);
    std::uniform_real_distribution<double> az(0.0, 2.0 * pi), el(0.0, pi);
    for (int i = 0; i < 50; ++i)
    {
        const double a0 = az(rng), e0 = el(rng);
        const auto lib = steering_vector({5, 3, 0.7}, a0, e0);
        const auto ref = oracle::steering(5, 3, 0.7, a0, e0);
        for (std::size_t k = 0; k < ref.size(); ++k)
            CHECK(std::abs(lib(static_cast<Eigen::Index>(k)) - ref[k]) < 1e-13);
    }
}

TEST_CASE("array geometry rejects non-positive element counts")
{
    CHECK_THROWS_AS(steering_vector({0, 4, 0.5}, 0.0, 0.0), ConfigError);
    CHECK_THROWS_AS(steering_vector({4, -1, 0.5}, 0.0, 0.0), ConfigError);
    CHECK(ArrayGeometry{16, 4, 0.5}.size() == 64);
}

TEST_CASE("pathloss matches the closed-form oracle and is monotone")
{
    for (double d : {5.0, 10.0, 20.0, 50.0, 100.0, 150.0, 300.0, 1000.0, 5000.0})
        CHECK(pathloss_uma_nlos(d, 15.0, 1.5, 28.0) == doctest::Approx(oracle::uma_nlos_db(d, 15.0, 1.5, 28.0)).epsilon(1e-12));
    CHECK(pathloss_uma_nlos(100.0, 15, 1.5, 28) > pathloss_uma_nlos(20.0, 15, 1.5, 28));
    CHECK(pathloss_uma_nlos(50.0, 15, 1.5, 28) > pathloss_uma_nlos(50.0, 15, 1.5, 2));
    CHECK(pathloss_uma_nlos(3.0, 15, 1.5, 28) == pathloss_uma_nlos(10.0, 15, 1.5, 28));
    double prev = -1e9;
    for (double d = 1.0; d < 5000.0; d += 0.5)
    {
        const double pl = pathloss_uma_nlos(d, 15.0, 1.5, 28.0);
        CHECK(pl >= prev);
        prev = pl;
    }
}

TEST_CASE("scatterer draws respect the angular sector and are reproducible")
{
    ChannelConfig cfg;
    Rng a(3), b(3);
    const auto s1 = draw_scatterer_set(cfg, {50.0, 0.0}, a);
    const auto s2 = draw_scatterer_set(cfg, {50.0, 0.0}, b);
    REQUIRE(s1.scatterers.size() == 10);
    for (std::size_t i = 0; i < s1.scatterers.size(); ++i)
    {
        const auto &s = s1.scatterers[i];
        CHECK(rad_to_deg(s.position.azimuth()) >= -60.0);
        CHECK(rad_to_deg(s.position.azimuth()) <= 60.0);
        CHECK(rad_to_deg(s.elevation_bs) >= 60.0);
        CHECK(rad_to_deg(s.elevation_bs) <= 120.0);
        CHECK(s.complex_gain == s2.scatterers[i].complex_gain);
        CHECK(s.position.x == s2.scatterers[i].position.x);
    }
    CHECK(s1.shadowing_db == s2.shadowing_db);
}

TEST_CASE("path gains have unit total mean power")
{
    ChannelConfig cfg;
    Rng rng(9);
    double total = 0.0;
    const int draws = 4000;
    for (int i = 0; i < draws; ++i)
        for (const auto &s : draw_scatterer_set(cfg, {50.0, 0.0}, rng).scatterers)
            total += std::norm(s.complex_gain);
    CHECK(total / draws == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("factored and summed channel agree on random draws")
{
    Rng rng(21);
    std::uniform_real_distribution<double> pos(-80.0, 80.0), vel(-6.0, 6.0);
    std::uniform_int_distribution<std::int64_t> t(0, 200000);
    ChannelConfig cfg;
    for (int i = 0; i < 100; ++i)
    {
        const Vec2 ue{std::abs(pos(rng)) + 10.0, pos(rng)};
        const auto set = draw_scatterer_set(cfg, ue, rng);
        const Vec2 v{vel(rng), vel(rng)};
        const auto ts = t(rng);
        const auto f = channel_at(cfg, set, ue, v, ts);
        const auto s = channel_at_summation(cfg, set, ue, v, ts);
        CHECK(rel_frobenius(s.entries, f.entries) <= 1e-10);
    }
}

TEST_CASE("two-path channel matches a hand-built sum")
{
    ChannelConfig cfg = small_config(2);
    ScattererSet set;
    set.pathloss_db = 80.0;
    set.shadowing_db = 3.0;
    Scatterer s1, s2;
    s1.position = {40.0, 10.0};
    s1.elevation_bs = 1.4;
    s1.elevation_ue = 1.7;
    s1.complex_gain = {0.6, -0.2};
    s2.position = {-5.0, 70.0};
    s2.elevation_bs = 1.6;
    s2.elevation_ue = 1.3;
    s2.complex_gain = {-0.1, 0.4};
    set.scatterers = {s1, s2};

    const Vec2 ue{30.0, -20.0}, v{3.0, 1.0};
    const std::int64_t t = 777;
    const double lambda = speed_of_light / 28e9;
    const double ts = 1.0 / 120e3;

    std::vector<oracle::C> ref(2 * 8, 0.0);
    for (const auto *s : {&s1, &s2})
    {
        const double aod = std::atan2(s->position.y, s->position.x);
        const double dx = s->position.x - ue.x, dy = s->position.y - ue.y;
        const double aoa = std::atan2(dy, dx);
        const double fd = (v.x * dx + v.y * dy) / std::hypot(dx, dy) / lambda;
        const auto beta = s->complex_gain * std::exp(oracle::C(0.0, 2.0 * oracle::PI * fd * t * ts));
        const auto atx = oracle::steering(4, 2, 0.5, aod, s->elevation_bs);
        const auto arx = oracle::steering(2, 1, 0.5, aoa, s->elevation_ue);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 8; ++j)
                ref[static_cast<std::size_t>(i * 8 + j)] += beta * arx[static_cast<std::size_t>(i)] *
                                                            std::conj(atx[static_cast<std::size_t>(j)]);
    }
    const double scale = std::sqrt(std::pow(10.0, -83.0 / 10.0) * 2 * 8);
    const auto h = channel_at(cfg, set, ue, v, t);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 8; ++j)
            CHECK(std::abs(h.entries(i, j) - scale * ref[static_cast<std::size_t>(i * 8 + j)]) <=
                  1e-12 * h.entries.norm());
}

TEST_CASE("static UE: channel does not change over time")
{
    ChannelConfig cfg;
    Rng rng(4);
    const Vec2 ue{60.0, 5.0};
    const auto set = draw_scatterer_set(cfg, ue, rng);
    const auto h0 = channel_at(cfg, set, ue, {0.0, 0.0}, 0);
    for (std::int64_t t : {1, 17, 600, 123456})
        CHECK((channel_at(cfg, set, ue, {0.0, 0.0}, t).entries - h0.entries).norm() == 0.0);

    // at t = 0 the phase factors are all one
    const auto paths = path_states(cfg, set, ue, {4.0, -2.0});
    const auto beta = path_coefficients(cfg, set, paths, 0);
    for (std::size_t i = 0; i < set.scatterers.size(); ++i)
        CHECK(beta(static_cast<Eigen::Index>(i)) == set.scatterers[i].complex_gain);
}

TEST_CASE("Doppler only rotates path phases")
{
    ChannelConfig cfg;
    Rng rng(8);
    const Vec2 ue{45.0, 12.0};
    const auto set = draw_scatterer_set(cfg, ue, rng);
    const auto paths = path_states(cfg, set, ue, {5.5, 0.3});
    for (std::int64_t t : {0, 1, 1000, 99999})
    {
        const auto beta = path_coefficients(cfg, set, paths, t);
        for (std::size_t i = 0; i < set.scatterers.size(); ++i)
            CHECK(std::abs(beta(static_cast<Eigen::Index>(i))) ==
                  doctest::Approx(std::abs(set.scatterers[i].complex_gain)).epsilon(1e-14));
    }
}

TEST_CASE("Doppler shift follows the projection of the velocity on the arrival direction")
{
    ChannelConfig cfg;
    ScattererSet set;
    Scatterer s;
    s.position = {100.0, 0.0};
    set.scatterers = {s};
    const double v = kmh_to_mps(20.0);
    const auto toward = path_states(cfg, set, {50.0, 0.0}, {v, 0.0});
    CHECK(toward[0].doppler_hz == doctest::Approx(v / cfg.wavelength_m()).epsilon(1e-12));
    const auto across = path_states(cfg, set, {50.0, 0.0}, {0.0, v});
    CHECK(std::abs(across[0].doppler_hz) < 1e-9);
}

TEST_CASE("channel rank never exceeds the path count")
{
    Rng rng(31);
    for (int s : {1, 2, 3, 5})
    {
        ChannelConfig cfg;
        cfg.n_paths = s;
        cfg.ue_array = {4, 2, 0.5};
        for (int i = 0; i < 25; ++i)
        {
            const auto set = draw_scatterer_set(cfg, {70.0, -10.0}, rng);
            const auto h = channel_at(cfg, set, {70.0, -10.0}, {1.0, 2.0}, 1000 * i);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h.entries);
            const auto sv = svd.singularValues();
            int rank = 0;
            for (Eigen::Index k = 0; k < sv.size(); ++k)
                rank += sv(k) > 1e-8 * sv(0);
            CHECK(rank <= s);
            if (s == 1)
                CHECK(rank == 1);
        }
    }
}

TEST_CASE("shadowing keeps its marginal spread under correlated updates")
{
    ChannelConfig cfg;
    Rng rng(77);
    auto set = draw_scatterer_set(cfg, {30.0, 0.0}, rng);
    double sum = 0.0, sum2 = 0.0;
    const int steps = 200000;
    Vec2 pos{30.0, 0.0};
    for (int i = 0; i < steps; ++i)
    {
        pos.x += 0.5;
        if (pos.x > 140.0)
            pos.x = 30.0;
        update_large_scale(set, cfg, pos, rng);
        sum += set.shadowing_db;
        sum2 += set.shadowing_db * set.shadowing_db;
    }
    const double mean = sum / steps;
    CHECK(std::abs(mean) < 0.5);
    CHECK(std::sqrt(sum2 / steps - mean * mean) == doctest::Approx(6.0).epsilon(0.05));

    // no movement: shadowing is frozen
    const double frozen = set.shadowing_db;
    update_large_scale(set, cfg, pos, rng);
    CHECK(set.shadowing_db == frozen);
}
