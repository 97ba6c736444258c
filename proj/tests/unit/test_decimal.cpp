#include <doctest.h>

#include "pricing/decimal.hpp"
#include "pricing/model.hpp"

using pricing::Decimal;

namespace {

Decimal d(const char* text)
{
    auto v = Decimal::parse(text);
    REQUIRE(v);
    return *v;
}

}  // namespace

TEST_CASE("parse and render")
{
    CHECK(d("15.99").to_string() == "15.99");
    CHECK(d("50").to_string() == "50");
    CHECK(d("50.00").to_string() == "50");
    CHECK(d("+7.10").to_string() == "7.1");
    CHECK(d("-0.5").to_string() == "-0.5");
    CHECK(d("-0").to_string() == "0");
    CHECK(d("1e3").to_string() == "1000");
    CHECK(d("2.5E-2").to_string() == "0.025");
    CHECK(d("1e17").to_string() == "100000000000000000");
    CHECK(d(".5").to_string() == "0.5");
    CHECK(d("0.0001").fraction_digits() == 4);
    CHECK(d("3.10").fraction_digits() == 1);
}

TEST_CASE("rejects")
{
    for (const char* bad : {"", "-", "1.2.3", "abc", "1e", "0.00001", "1e31", "12a", " 1", "1,5"})
        CHECK_MESSAGE(!Decimal::parse(bad), bad);
}

TEST_CASE("exact arithmetic")
{
    CHECK(d("15.99") + d("50") == d("65.99"));
    CHECK((d("15.99") + d("50")).to_string() == "65.99");
    CHECK(d("0.1") + d("0.2") == d("0.3"));
    Decimal sum;
    for (int i = 0; i < 1000; ++i) sum += d("0.01");
    CHECK(sum == Decimal::from_int(10));
    CHECK(d("-5") + d("5") == Decimal());
    CHECK(Decimal::from_int(-3).is_negative());
    CHECK(Decimal().is_zero());
}

TEST_CASE("ordering")
{
    CHECK(d("9.99") < d("10"));
    CHECK(d("-1") < d("0"));
    CHECK(d("100") > d("99.9999"));
    CHECK(d("1.50") == d("1.5"));
    CHECK(d("21.99").to_double() == doctest::Approx(21.99));
}

TEST_CASE("prices")
{
    using pricing::Price;
    auto sum = Price::amount(d("15.99")) + Price::amount(d("50"));
    CHECK(sum == Price::amount(d("65.99")));
    CHECK((Price::amount(d("1")) + Price::contact()).is_contact());
    CHECK((Price::contact("Ask us") + Price::amount(d("1"))).contact_label() == "Ask us");
    CHECK(Price::contact().to_string() == "Contact Sales");
}
