#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "tcsc/station.hpp"

using namespace tcsc;

namespace {

std::filesystem::path temp_csv(const std::string& name, const std::string& body) {
    const auto p = std::filesystem::temp_directory_path() / ("tcsc_test_" + name + ".csv");
    std::ofstream(p) << body;
    return p;
}

std::string clock(int minutes) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "2023-01-15 %02d:%02d", minutes / 60, minutes % 60);
    return buf;
}

}  // namespace

TEST_CASE("tou tariff bands") {
    CHECK(tou_price(7.0) == doctest::Approx(12.48));
    CHECK(tou_price(9.0) == doctest::Approx(17.22));
    CHECK(tou_price(13.0) == doctest::Approx(22.09));
    CHECK(tou_price(18.0) == doctest::Approx(12.48));
    const TimeGrid g;
    const Tariff t = build_tou_tariff(g);
    REQUIRE(t.price.size() == 60u);
    CHECK(t.price[0] == doctest::Approx(12.48));   // 7:00
    CHECK(t.price[4] == doctest::Approx(17.22));   // 8:00
    CHECK(t.price[24] == doctest::Approx(22.09));  // 13:00
    CHECK(t.price[59] == doctest::Approx(12.48));  // 21:45
}

TEST_CASE("rng is platform independent and splits") {
    Rng a(42), b(42);
    for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
    Rng c(7);
    for (int k = 0; k < 1000; ++k) {
        const double u = c.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const int j = c.uniform_int(-2, 3);
        CHECK(j >= -2);
        CHECK(j <= 3);
    }
    const Rng root(1);
    CHECK(root.split(0).split(0).split(1).uniform() != root.split(1).uniform());
    CHECK(Rng(0).next() == 0xe220a8397b1dcdafULL);
}

TEST_CASE("generated fleet respects the fluctuation band") {
    const TimeGrid g;
    for (std::uint64_t seed : {1u, 2u, 99u}) {
        const auto fleet = gen_fleet(25, seed, g);
        REQUIRE(fleet.size() == 25u);
        std::set<std::string> ids;
        for (const auto& v : fleet) {
            ids.insert(v.id);
            CHECK(v.capacity >= 35.15);
            CHECK(v.capacity <= 38.85);
            CHECK(v.mass >= 235.88 * 0.95);
            CHECK(v.mass <= 235.88 * 1.05);
            CHECK(v.p_max >= 7.4 * 0.95);
            CHECK(v.p_max <= 7.4 * 1.05);
            CHECK(v.soc_arr >= 0.0);
            CHECK(v.soc_arr <= 0.4);
            CHECK(v.soc_dep == doctest::Approx(0.9));
            CHECK(v.ta < v.td);
            CHECK(v.ta >= 0);
            CHECK(v.td <= g.n_steps);
            CHECK_NOTHROW(v.validate(g));
        }
        CHECK(ids.size() == 25u);
        const auto again = gen_fleet(25, seed, g);
        for (int i = 0; i < 25; ++i) {
            CHECK(again[i].capacity == fleet[i].capacity);
            CHECK(again[i].ta == fleet[i].ta);
        }
    }
    CHECK_THROWS_AS(gen_fleet(0, 1, g), Error);
}

TEST_CASE("scenario envelope for a flat cold profile") {
    const std::vector<double> solar(60, 4.0), temp(60, -5.0);
    const auto s = gen_scenarios(solar, temp, 40, 3);
    REQUIRE(s.size() == 40);
    double psum = 0.0;
    for (int w = 0; w < s.size(); ++w) {
        psum += s.prob[w];
        for (int t = 0; t < 60; ++t) {
            CHECK(s.temp_amb[w][t] >= -6.75);
            CHECK(s.temp_amb[w][t] <= -3.25);
            CHECK(s.pv_cap[w][t] >= 3.6 - 1e-12);
            CHECK(s.pv_cap[w][t] <= 4.4 + 1e-12);
        }
    }
    CHECK(psum == doctest::Approx(1.0));
    CHECK_NOTHROW(s.validate(60));
    const auto s2 = gen_scenarios(solar, temp, 40, 3);
    CHECK(s2.temp_amb == s.temp_amb);
    std::vector<double> bad = solar;
    bad[5] = -1.0;
    CHECK_THROWS_AS(gen_scenarios(bad, temp, 3, 1), Error);
}

TEST_CASE("validation rejects broken inputs") {
    StationModel m;
    m.tariff = build_tou_tariff(m.grid);
    VehicleSpec v;
    m.fleet.push_back(v);
    CHECK_NOTHROW(m.validate());
    m.fleet[0].ta = 30;
    m.fleet[0].td = 30;
    CHECK_THROWS_AS(m.validate(), Error);
    m.fleet[0].td = 61;
    CHECK_THROWS_AS(m.validate(), Error);
    m.fleet[0].td = 60;
    m.fleet[0].soc_arr = 1.2;
    CHECK_THROWS_AS(m.validate(), Error);
    m.fleet[0].soc_arr = 0.2;
    m.fleet.clear();
    CHECK_THROWS_AS(m.validate(), Error);

    ScenarioSet s;
    s.prob = {0.5, 0.6};
    s.pv_cap.assign(2, std::vector<double>(60, 1.0));
    s.temp_amb.assign(2, std::vector<double>(60, 0.0));
    CHECK_THROWS_AS(s.validate(60), Error);
    s.prob = {0.5, 0.5};
    CHECK_NOTHROW(s.validate(60));
    s.pv_cap[1][3] = -0.1;
    CHECK_THROWS_AS(s.validate(60), Error);
}

TEST_CASE("time series alignment") {
    const TimeGrid g;
    SUBCASE("one row per step is the identity") {
        std::string body = "timestamp,kw\n";
        for (int k = 0; k < 60; ++k) body += clock(420 + 15 * k) + "," + std::to_string(k * 0.5) + "\n";
        const auto v = load_timeseries(temp_csv("identity", body), SeriesKind::Solar, g);
        REQUIRE(v.size() == 60u);
        for (int k = 0; k < 60; ++k) CHECK(v[k] == doctest::Approx(k * 0.5));
    }
    SUBCASE("two rows per step are averaged") {
        std::string body;
        for (int k = 0; k < 120; ++k) {
            const int mins = 420 * 2 + 15 * k;  // half-minutes
            char ts[32];
            std::snprintf(ts, sizeof ts, "2023-01-15T%02d:%02d:%02d", mins / 120, (mins / 2) % 60, (mins % 2) * 30);
            body += std::string(ts) + "," + std::to_string(k) + "\n";
        }
        const auto v = load_timeseries(temp_csv("halves", body), SeriesKind::Temperature, g);
        REQUIRE(v.size() == 60u);
        for (int k = 0; k < 60; ++k) CHECK(v[k] == doctest::Approx(2 * k + 0.5));
    }
    SUBCASE("short series does not cover the horizon") {
        std::string body;
        for (int k = 0; k < 30; ++k) body += clock(420 + 15 * k) + ",1\n";
        try {
            load_timeseries(temp_csv("short", body), SeriesKind::Solar, g);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Parse);
            CHECK(std::string(e.what()).find("horizon not covered") != std::string::npos);
        }
    }
    SUBCASE("non-numeric value reports its row") {
        std::string body = "time,value\n";
        for (int k = 0; k < 60; ++k) body += clock(420 + 15 * k) + (k == 9 ? ",abc\n" : ",1\n");
        try {
            load_timeseries(temp_csv("nonnum", body), SeriesKind::Solar, g);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Parse);
            CHECK(std::string(e.what()).find("row 11") != std::string::npos);
        }
    }
    SUBCASE("negative solar is rejected") {
        std::string body;
        for (int k = 0; k < 60; ++k) body += clock(420 + 15 * k) + (k == 3 ? ",-2\n" : ",1\n");
        CHECK_THROWS_AS(load_timeseries(temp_csv("neg", body), SeriesKind::Solar, g), Error);
    }
    SUBCASE("sparse hourly rows forward fill") {
        std::string body;
        for (int h = 6; h <= 23; ++h) body += clock(60 * h) + "," + std::to_string(h) + "\n";
        const auto v = load_timeseries(temp_csv("hourly", body), SeriesKind::Temperature, g);
        CHECK(v[0] == doctest::Approx(7.0));
        CHECK(v[3] == doctest::Approx(7.0));
        CHECK(v[4] == doctest::Approx(8.0));
    }
    SUBCASE("missing file") {
        try {
            load_timeseries("/nonexistent/x.csv", SeriesKind::Solar, g);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Io);
        }
    }
}

TEST_CASE("synthetic profiles") {
    const TimeGrid g;
    const auto pv = synthetic_solar(g, 10.0);
    double peak = 0.0;
    for (double x : pv) {
        CHECK(x >= 0.0);
        peak = std::max(peak, x);
    }
    CHECK(peak <= 10.0 + 1e-12);
    CHECK(peak > 9.5);
    CHECK(pv.back() == 0.0);  // after sunset
    const auto tp = synthetic_temperature(g, -3.0, 3.2);
    for (double x : tp) {
        CHECK(x >= -3.0 - 1e-12);
        CHECK(x <= 3.2 + 1e-12);
    }
    CHECK(tp[32] > 3.1);  // 15:00
    CHECK(tp[0] < -2.5);   // 7:00

    auto scaled = pv;
    const std::vector<VehicleSpec> fleet(4);
    scale_solar(scaled, fleet, 0.4);
    double mx = 0.0;
    for (double x : scaled) mx = std::max(mx, x);
    CHECK(mx == doctest::Approx(0.4 * 4 * 7.4));
}
