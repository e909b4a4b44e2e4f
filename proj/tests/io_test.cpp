#include <gtest/gtest.h>

#include "crossmap/io.hpp"
#include "support/fixtures.hpp"
#include "support/random_crossmap.hpp"

namespace crossmap {
namespace {

std::size_t parse_error_line(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(Csv, QuotingAndLineEndings) {
  const auto records = csv::parse("\xEF\xBB\xBFkey,value\r\n\"a,b\",\"say \"\"hi\"\"\"\r\n\r\nc,1\n");
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0].fields, (std::vector<std::string>{"key", "value"}));
  EXPECT_EQ(records[1].fields, (std::vector<std::string>{"a,b", "say \"hi\""}));
  EXPECT_EQ(records[2].line, 4u);
  EXPECT_EQ(csv::escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::escape("plain"), "plain");
  EXPECT_THROW(csv::parse("a,\"b\n"), ParseError);
}

TEST(ReadEdgeList, CountryTable) {
  const EdgeListDraft draft = read_edge_list(testing::read_data("country_table.csv"));
  ASSERT_EQ(draft.edges.size(), 5u);
  EXPECT_EQ(draft.edges[0], (Edge{"BLX", "BEL", Rational(1, 2)}));
  EXPECT_EQ(require_crossmap(draft), testing::country_crossmap());
}

TEST(ReadEdgeList, RejectsZeroWeight) {
  try {
    read_edge_list("from,to,weight\na,b,0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("weight must be in (0,1]"), std::string::npos);
  }
  EXPECT_THROW(read_edge_list("from,to,weight\na,b,1.5\n"), ParseError);
  EXPECT_THROW(read_edge_list("from,to\na,b\n"), ParseError);
  EXPECT_THROW(read_edge_list("from,to,weight\na,b\n"), ParseError);
  EXPECT_EQ(parse_error_line([] { read_edge_list("from,to,weight\na,b,1\n ,c,1\n"); }), 3u);
}

TEST(WriteEdgeList, IdentityMap) {
  EXPECT_EQ(write_edge_list(identity_crossmap({"AUS"})), "from,to,weight\nAUS,AUS,1\n");
}

TEST(WriteEdgeList, DecimalStyle) {
  EXPECT_EQ(write_edge_list(testing::country_crossmap(), WeightStyle::decimal),
            "from,to,weight\nAUS,AUS,1\nBLX,BEL,0.5\nBLX,LUX,0.5\nE.GER,DEU,1\nW.GER,DEU,1\n");
}

TEST(RoundTrip, CanonicalFilesAreByteIdentical) {
  const std::string edges = testing::read_data("country.csv");
  EXPECT_EQ(write_edge_list(require_crossmap(read_edge_list(edges))), edges);
  const std::string isco = testing::read_data("isco_subset.csv");
  EXPECT_EQ(write_edge_list(require_crossmap(read_edge_list(isco))), isco);
  const std::string array = testing::read_data("country_obs.csv");
  EXPECT_EQ(write_array(read_array(array)), array);
  const std::string cw = testing::read_data("country_crosswalk.csv");
  EXPECT_EQ(write_crosswalk(read_crosswalk(cw)), cw);
}

TEST(RoundTrip, RandomMapsAndArrays) {
  testing::Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const Crossmap map = testing::random_crossmap(rng);
    const std::string text = write_edge_list(map);
    EXPECT_EQ(write_edge_list(require_crossmap(read_edge_list(text))), text);
    SharedMassArray array = testing::random_array(rng, map.sources());
    if (trial % 3 == 0) array.insert_missing("zz missing");
    const std::string atext = write_array(array);
    EXPECT_EQ(read_array(atext), array);
    EXPECT_EQ(write_array(read_array(atext)), atext);
  }
}

TEST(ReadArray, MissingAndDuplicates) {
  const SharedMassArray a = read_array("key,value\nx5555,NA\ny,2\n");
  EXPECT_FALSE(a.at("x5555").has_value());
  EXPECT_EQ(*a.at("y"), Rational(2));
  try {
    read_array("key,value\na,1\nb,2\na,3\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(read_array("key,value\na,abc\n"), ParseError);
}

TEST(ReadCrosswalk, DuplicateLinks) {
  EXPECT_EQ(parse_error_line([] { read_crosswalk("from,to\na,b\na,b\n"); }), 3u);
}

TEST(ImportCrosswalk, OneToOneCodes) {
  const auto imported = import_crosswalk(read_crosswalk(testing::read_data("iso_crosswalk.csv")),
                                         SplitPolicy::reject_splits);
  ASSERT_TRUE(imported);
  EXPECT_TRUE(imported.report.findings.empty());
  EXPECT_EQ(imported->edges().size(), 5u);
  for (const Edge& e : imported->edges()) EXPECT_EQ(e.weight, Rational(1));
}

TEST(ImportCrosswalk, SplitPolicies) {
  const Crosswalk cw = read_crosswalk(testing::read_data("country_crosswalk.csv"));
  const auto rejected = import_crosswalk(cw, SplitPolicy::reject_splits);
  EXPECT_FALSE(rejected);
  ASSERT_EQ(rejected.report.findings.size(), 1u);
  EXPECT_EQ(rejected.report.findings[0].code, "split_source");
  EXPECT_EQ(rejected.report.findings[0].subject, "BLX");

  const auto split = import_crosswalk(cw, SplitPolicy::equal_split);
  ASSERT_TRUE(split);
  EXPECT_EQ(*split, testing::country_crossmap());
  ASSERT_EQ(split.report.findings.size(), 1u);
  EXPECT_EQ(split.report.findings[0].severity, Severity::warning);
  EXPECT_EQ(split.report.findings[0].code, "imputed_equal_split");
}

TEST(ExportDot, CountryMap) {
  const std::string dot = export_dot(testing::country_crossmap());
  EXPECT_EQ(dot, export_dot(require_crossmap(read_edge_list(testing::read_data("country_table.csv")))));
  EXPECT_NE(dot.find("rankdir=LR;"), std::string::npos);
  EXPECT_NE(dot.find("\"s:BLX\" -> \"t:BEL\" [style=dashed, label=\"1/2\"];"), std::string::npos);
  EXPECT_NE(dot.find("\"s:AUS\" -> \"t:AUS\" [style=solid];"), std::string::npos);
  EXPECT_NE(dot.find("label=\"many_to_one\";"), std::string::npos);
  EXPECT_EQ(dot_quote("a\"b"), "\"a\\\"b\"");
}

TEST(WriteMatrixCsv, CountryGrid) {
  EXPECT_EQ(write_matrix_csv(to_matrix(testing::country_crossmap())),
            "from\\to,AUS,BEL,DEU,LUX\nAUS,1,0,0,0\nBLX,0,1/2,0,1/2\nE.GER,0,0,1,0\nW.GER,0,0,1,0\n");
}

}  // namespace
}  // namespace crossmap
