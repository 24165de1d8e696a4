#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stsir/csv.hpp"
#include "stsir/dates.hpp"
#include "stsir/rng.hpp"

using namespace stsir;

TEST_CASE("date parse/format round trip", "[foundation]") {
    Date d = Date::parse("2020-01-22");
    CHECK(d.to_string() == "2020-01-22");
    CHECK((Date::parse("2020-04-12") - d) == 81); // the paper's 82-day window
    CHECK((d + 1).to_string() == "2020-01-23");
    CHECK(Date::parse("2020-02-29").to_string() == "2020-02-29"); // leap day
    CHECK_THROWS_AS(Date::parse("2020-02-30"), DataError);
    CHECK_THROWS_AS(Date::parse("not-a-date"), DataError);
    CHECK(Date::parse("2020-03-01") > Date::parse("2020-02-29"));
}

TEST_CASE("csv split handles quoting", "[foundation]") {
    auto f = csv::split("2020-03-07,\"Kershaw, SC\",45055,1,0");
    REQUIRE(f.size() == 5);
    CHECK(f[1] == "Kershaw, SC");
    CHECK(csv::split("a,,b").size() == 3);
    CHECK(csv::split("a,,b")[1].empty());
}

TEST_CASE("rng is deterministic and stream-stable", "[foundation]") {
    Rng a(42), b(42);
    for (int k = 0; k < 1000; ++k) {
        CHECK(a.uniform() == b.uniform());
        CHECK(a.normal() == b.normal());
        CHECK(a.gamma(2.0, 0.5) == b.gamma(2.0, 0.5));
        CHECK(a.poisson(3.7) == b.poisson(3.7));
    }
}

TEST_CASE("rng moments match their distributions", "[foundation]") {
    Rng rng(7);
    const int n = 200000;

    double sum = 0, sum2 = 0;
    for (int k = 0; k < n; ++k) {
        double x = rng.normal();
        sum += x;
        sum2 += x * x;
    }
    CHECK(std::fabs(sum / n) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::fabs(sum2 / n - 1.0) < 3.0 * std::sqrt(2.0 / n));

    // gamma(2, 0.5): mean 4, var 8
    sum = sum2 = 0;
    for (int k = 0; k < n; ++k) {
        double x = rng.gamma(2.0, 0.5);
        sum += x;
        sum2 += (x - 4.0) * (x - 4.0);
    }
    CHECK(std::fabs(sum / n - 4.0) < 3.0 * std::sqrt(8.0 / n));
    CHECK(std::fabs(sum2 / n - 8.0) < 0.3);

    // gamma with shape < 1 (the ICAR hyperprior regime)
    sum = 0;
    for (int k = 0; k < n; ++k) sum += rng.gamma(0.51, 1.01);
    CHECK(std::fabs(sum / n - 0.51 / 1.01) < 0.01);

    // poisson across both algorithm branches
    for (double mu : {0.5, 8.0, 50.0, 3000.0}) {
        sum = sum2 = 0;
        for (int k = 0; k < n / 4; ++k) {
            double x = static_cast<double>(rng.poisson(mu));
            sum += x;
            sum2 += (x - mu) * (x - mu);
        }
        const double nn = n / 4;
        CHECK(std::fabs(sum / nn - mu) < 4.0 * std::sqrt(mu / nn));
        CHECK(std::fabs(sum2 / nn - mu) / mu < 0.05);
    }

    // binomial waiting-time sampler, small and large n*p
    sum = 0;
    for (int k = 0; k < n / 4; ++k) sum += static_cast<double>(rng.binomial(1000, 0.02));
    CHECK(std::fabs(sum / (n / 4) - 20.0) < 0.25);
    CHECK(rng.binomial(10, 0.0) == 0);
    CHECK(rng.binomial(10, 1.0) == 10);
}

TEST_CASE("atomic_write replaces files", "[foundation]") {
    const std::string path = "test_atomic_write.tmp.csv";
    csv::atomic_write(path, "a,b\n1,2\n");
    csv::atomic_write(path, "a,b\n3,4\n");
    csv::Reader r(path);
    REQUIRE(r.rows().size() == 1);
    CHECK(r.rows()[0].fields[0] == "3");
    std::remove(path.c_str());
}
