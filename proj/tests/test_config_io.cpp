#include <doctest.h>

#include "auditgame/config_io.hpp"
#include "fixtures.hpp"

using namespace auditgame;

TEST_CASE("parse a two-type config with exact values") {
  const auto cfg = parse_config(R"({
    "types": ["L", "H"], "prior": [0.5, "1/2"], "alloc": {"H": 105, "L": 50},
    "audit_cost": 25, "fine": "100", "budget": 7.165, "num_users": 2, "coalition_size": 2
  })");
  CHECK(cfg.types == std::vector<std::string>{"L", "H"});
  CHECK(cfg.prior[0] == Rational(1, 2));
  CHECK(cfg.alloc == std::vector<Rational>{50, 105});
  CHECK(*cfg.budget == Rational(7165, 1000));
  CHECK(cfg.num_users == 2);
  CHECK(cfg.coalition_size == 2);
}

TEST_CASE("decimal floats are read as written") {
  const auto cfg = parse_config(R"({"types":["a","b","c"],"prior":[0.1,0.2,0.7],"alloc":[0,1,2],"audit_cost":1,"fine":1})");
  CHECK(cfg.prior[0] == Rational(1, 10));
  CHECK(cfg.prior[2] == Rational(7, 10));
}

TEST_CASE("config errors") {
  const std::string ok_tail = R"("alloc":[50,105],"audit_cost":25,"fine":100)";
  CHECK_THROWS_AS(parse_config("not json"), InputError);
  CHECK_THROWS_AS(parse_config("[]"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"types":["L","H"],"prior":[0.5,0.5],)" + ok_tail + R"(,"extra":1})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"types":["L","H"],"prior":[0.5,0.6],)" + ok_tail + "}"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"types":["L","H"],"prior":[0.5],)" + ok_tail + "}"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"types":["L","H"],"prior":{"L":0.5,"X":0.5},)" + ok_tail + "}"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"types":["L","H"],"prior":[0.5,0.5],"alloc":[50,105],"audit_cost":25})"),
                  InputError);
  CHECK_THROWS_AS(parse_config(R"({"types":["L","H"],"prior":[0.5,0.5],"alloc":[50,105],"audit_cost":25,"fine":10})"),
                  InputError);
  CHECK_NOTHROW(parse_config(R"({"types":["L","H"],"prior":[0.5,0.5],"alloc":[50,105],"audit_cost":25,"fine":10})",
                             true));
  CHECK_THROWS_AS(parse_config(R"({"types":["L","H"],"prior":[0.5,0.5],)" + ok_tail + R"(,"num_users":1.5})"),
                  InputError);
  CHECK_THROWS_AS(load_config("/nonexistent/auditgame.json"), InputError);
}

TEST_CASE("config JSON round trip") {
  auto cfg = fixtures::cfg_a();
  cfg.budget = Rational(28875, 4030);
  const auto back = parse_config(config_to_json(cfg).dump());
  CHECK(back.prior == cfg.prior);
  CHECK(back.alloc == cfg.alloc);
  CHECK(*back.budget == *cfg.budget);
}

TEST_CASE("number rendering") {
  CHECK(number_json(Rational(5, 26)) == "5/26");
  CHECK(number_json(0.5) == 0.5);
}

TEST_CASE("flat CSV quotes awkward values") {
  nlohmann::json doc;
  doc["a"] = 1;
  doc["b"] = "x,y";
  doc["c"] = {1, 2};
  CHECK(flat_csv(doc) == "key,value\na,1\nb,\"x,y\"\nc,\"[1,2]\"\n");
}
