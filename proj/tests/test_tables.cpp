#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "scifit/rng.hpp"
#include "scifit/tables.hpp"
#include "support/oracles.hpp"

using namespace scifit;

TEST_CASE("format_double round-trips arbitrary values") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    double v = (rng.next_double() - 0.5) * std::pow(10.0, static_cast<double>(rng.next_below(40)) - 20.0);
    CHECK(parse_double(format_double(v), "test") == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(parse_double("1e-3", "test") == doctest::Approx(0.001));
}

TEST_CASE("split keeps empty fields") {
  const auto cells = split("a,,c,", ',');
  REQUIRE(cells.size() == 4);
  CHECK(cells[1].empty());
  CHECK(cells[3].empty());
}

TEST_CASE("table writer/reader round trip with config hash") {
  const auto dir = oracles::make_temp_dir("tables");
  const auto path = dir / "t.csv";
  {
    TableWriter w(path, {"geo", "value"}, "cafe0123");
    w.row({"US", format_double(1.5)});
    w.row({"DE", format_double(0.25)});
    w.commit();
  }
  const Table t = read_table(path);
  CHECK(t.config_hash == "cafe0123");
  REQUIRE(t.columns == std::vector<std::string>{"geo", "value"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][1] == "0.25");
  std::filesystem::remove_all(dir);
}

TEST_CASE("uncommitted writer leaves no file behind") {
  const auto dir = oracles::make_temp_dir("tables_abort");
  const auto path = dir / "t.csv";
  {
    TableWriter w(path, {"a"}, "");
    w.row({"1"});
    // no commit
  }
  CHECK(!std::filesystem::exists(path));
  CHECK(!std::filesystem::exists(dir / "t.csv.tmp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("row width mismatch is rejected") {
  const auto dir = oracles::make_temp_dir("tables_width");
  TableWriter w(dir / "t.csv", {"a", "b"}, "");
  CHECK_THROWS(w.row({"only-one"}));
  std::filesystem::remove_all(dir);
}

TEST_CASE("fnv1a64 is stable") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(to_hex(fnv1a64("hello")).size() == 16);
  CHECK(fnv1a64("a") != fnv1a64("b"));
}
