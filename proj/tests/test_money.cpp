#include <doctest.h>

#include <cstdint>
#include <random>

#include "rebal/money.hpp"

using rebal::Usd;

TEST_CASE("construction and exact decimal round trips") {
    CHECK(Usd::from_value(0.0).micros() == 0);
    CHECK(Usd::from_value(1.0).micros() == 1'000'000);
    CHECK(Usd::from_value(-2.5).micros() == -2'500'000);
    CHECK(Usd::from_micros(123).value() == doctest::Approx(0.000123));
    CHECK(Usd::from_value(25000.0).to_string() == "25000");
    CHECK(Usd::from_value(0.25).to_string() == "0.25");
    CHECK(Usd::from_value(-6666.666667).to_string() == "-6666.666667");
    CHECK(Usd::from_micros(1).to_string() == "0.000001");
    CHECK(Usd::from_micros(-1).to_string() == "-0.000001");
}

TEST_CASE("half-even rounding at the micro boundary") {
    // 0.0000005 sits exactly between 0 and 1 micro -> rounds to the even side.
    CHECK(Usd::from_value(0.0000005).micros() == 0);
    CHECK(Usd::from_value(0.0000015).micros() == 2);
    CHECK(Usd::from_value(-0.0000005).micros() == 0);
    CHECK(Usd::from_value(-0.0000015).micros() == -2);
}

TEST_CASE("arithmetic is exact at the representation") {
    const Usd a = Usd::from_value(0.1);
    Usd sum{};
    for (int i = 0; i < 10; ++i) sum += a;
    CHECK(sum == Usd::from_value(1.0));  // would fail in binary floating point
    CHECK((a - a).is_zero());
    CHECK((-a).micros() == -a.micros());
    CHECK(rebal::min(a, -a) == -a);
    CHECK(rebal::max(a, -a) == a);
    CHECK(a.abs() == a);
    CHECK((-a).abs() == a);
    CHECK(Usd{}.sign() == 0);
    CHECK(a.sign() == 1);
    CHECK((-a).sign() == -1);
}

TEST_CASE("div_round halves to even and stays within one micro") {
    CHECK(Usd::from_micros(10).div_round(4).micros() == 2);   // 2.5 -> 2 (even)
    CHECK(Usd::from_micros(14).div_round(4).micros() == 4);   // 3.5 -> 4 (even)
    CHECK(Usd::from_micros(-10).div_round(4).micros() == -2);
    CHECK(Usd::from_micros(-14).div_round(4).micros() == -4);
    CHECK(Usd::from_micros(7).div_round(1) == Usd::from_micros(7));

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> value_dist(-2'000'000'000'000, 2'000'000'000'000);
    std::uniform_int_distribution<std::int64_t> div_dist(1, 5000);
    for (int it = 0; it < 100000; ++it) {
        const std::int64_t v = value_dist(rng);
        const std::int64_t n = div_dist(rng);
        const std::int64_t q = Usd::from_micros(v).div_round(n).micros();
        // |q*n - v| <= n/2, i.e. the quotient is a nearest multiple.
        const std::int64_t err = q * n - v;
        CHECK(2 * (err < 0 ? -err : err) <= n);
    }
}

TEST_CASE("div_floor_abs matches integer division of magnitudes") {
    CHECK(Usd::from_value(32000.0).div_floor_abs(Usd::from_value(10000.0)) == 3);
    CHECK(Usd::from_value(-32000.0).div_floor_abs(Usd::from_value(10000.0)) == 3);
    CHECK(Usd::from_value(9999.999999).div_floor_abs(Usd::from_value(10000.0)) == 0);
    CHECK(Usd::from_value(20000.0).div_floor_abs(Usd::from_value(10000.0)) == 2);
}

TEST_CASE("scaled applies a double factor with one rounding step") {
    const Usd total = Usd::from_value(120000.0);
    CHECK(total.scaled(0.4) == Usd::from_value(48000.0));
    CHECK(total.scaled(0.0).is_zero());
    CHECK(Usd::from_value(20000.0).scaled(1.0 / 3.0).micros() == 6'666'666'667);
}

TEST_CASE("ordering follows the numeric value") {
    CHECK(Usd::from_value(1.0) < Usd::from_value(2.0));
    CHECK(Usd::from_value(-3.0) < Usd{});
    CHECK(Usd::from_value(5.0) >= Usd::from_value(5.0));
}
