#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "experiments/config.hpp"
#include "experiments/csv.hpp"
#include "pswarm/rng.hpp"
#include "support/temp_dir.hpp"

namespace pswarm::experiments {
namespace {

TEST(FormatReal, RoundTripsExactly) {
  RngStream rng(3);
  for (int i = 0; i < 20000; ++i) {
    const double magnitude = std::ldexp(1.0, static_cast<int>(rng.uniform() * 200.0) - 100);
    const double value = rng.normal() * magnitude;
    ASSERT_EQ(parse_real_cell(format_real(value)), value) << format_real(value);
  }
  for (double v : {0.0, -0.0, 1.0, 0.1, 1e-308, 5e-324, 1.7976931348623157e308}) {
    EXPECT_EQ(parse_real_cell(format_real(v)), v);
  }
}

TEST(FormatReal, NonFiniteValues) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(format_real(inf), "inf");
  EXPECT_EQ(format_real(-inf), "-inf");
  EXPECT_EQ(format_real(std::nan("")), "nan");
  EXPECT_TRUE(std::isnan(parse_real_cell("")));
  EXPECT_EQ(parse_real_cell("-inf"), -inf);
  EXPECT_THROW(parse_real_cell("1.5x"), DataError);
}

TEST(Csv, TableRoundTrip) {
  testing::TempDir dir;
  CsvTable table;
  table.header = {"t", "value", "note"};
  table.add_row({"1", format_real(0.1), ""});
  table.add_row({"2", format_real(-2.5e-7), "x"});
  write_csv(dir.file("a.csv"), table);
  EXPECT_EQ(testing::slurp(dir.file("a.csv")), "t,value,note\n1,0.1,\n2,-2.5e-07,x\n");
  const CsvTable back = read_csv(dir.file("a.csv"));
  EXPECT_EQ(back.header, table.header);
  EXPECT_EQ(back.rows, table.rows);
  EXPECT_EQ(back.number(1, "value"), -2.5e-7);
  EXPECT_TRUE(std::isnan(back.number(0, "note")));
  EXPECT_THROW(back.column("missing"), DataError);
}

TEST(Csv, AcceptsCrlfAndRejectsRaggedRows) {
  EXPECT_EQ(parse_csv("a,b\r\n1,2\r\n").rows.size(), 1u);
  EXPECT_THROW(parse_csv("a,b\n1\n"), DataError);
  EXPECT_THROW(parse_csv(""), DataError);
}

TEST(ReadObservations, ValidSeries) {
  testing::TempDir dir;
  const auto path = dir.write("y.csv", "t,y\n1,0.5\n2,-1\n3,2.25\n");
  EXPECT_EQ(read_observations(path), (std::vector<double>{0.5, -1.0, 2.25}));
}

TEST(ReadObservations, RejectsBadSeries) {
  testing::TempDir dir;
  EXPECT_THROW(read_observations(dir.write("gap.csv", "t,y\n1,0.5\n3,1\n")), DataError);
  EXPECT_THROW(read_observations(dir.write("zero.csv", "t,y\n0,0.5\n")), DataError);
  EXPECT_THROW(read_observations(dir.write("nan.csv", "t,y\n1,nan\n")), DataError);
  EXPECT_THROW(read_observations(dir.write("noy.csv", "t,z\n1,1\n")), DataError);
  EXPECT_THROW(read_observations(dir.write("empty.csv", "t,y\n")), DataError);
  EXPECT_THROW(read_observations(dir.file("absent.csv")), DataError);
}

}  // namespace
}  // namespace pswarm::experiments
