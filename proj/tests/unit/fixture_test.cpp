#include <gtest/gtest.h>

#include "ammlab/fixtures.hpp"
#include "test_support.hpp"

using namespace ammlab;

class CommittedFixtures : public ::testing::TestWithParam<std::string> {};

TEST_P(CommittedFixtures, ClosedFormsAgreeWithOracle) {
  const json items = ammlab::testing::load_fixture("oracle/" + GetParam() + ".json");
  ASSERT_TRUE(items.is_array());
  ASSERT_FALSE(items.empty());
  FixtureCheck c = check_fixtures(items, 5e-4);
  EXPECT_EQ(c.count, items.size());
  EXPECT_EQ(c.failures, 0u) << (c.messages.empty() ? "" : c.messages.front());
}

INSTANTIATE_TEST_SUITE_P(Kinds, CommittedFixtures, ::testing::Values("swap", "arb", "route2", "route3", "sync"));

TEST(FixtureGeneration, IsDeterministicAcrossJobCounts) {
  for (const char* kind : {"swap", "sync", "route2"}) {
    EXPECT_EQ(generate_fixtures(kind, 8, 99, 1).dump(), generate_fixtures(kind, 8, 99, 3).dump()) << kind;
  }
}

TEST(FixtureGeneration, ItemsCarryTheirSeed) {
  const json items = generate_fixtures("arb", 3, 5);
  for (std::size_t i = 0; i < items.size(); ++i) {
    EXPECT_TRUE(items[i].contains("inputs"));
    EXPECT_TRUE(items[i].contains("oracle_output"));
    EXPECT_TRUE(items[i].contains("spec"));
    EXPECT_TRUE(items[i]["seed"].is_number_unsigned() || items[i]["seed"].is_string());
  }
}

TEST(FixtureGeneration, UnknownKindIsRejected) { EXPECT_THROW(generate_fixtures("bogus", 1, 1), Error); }

TEST(FixtureCheck, DetectsATamperedSwap) {
  json items = generate_fixtures("swap", 4, 17);
  FixtureCheck clean = check_fixtures(items, 5e-4);
  EXPECT_EQ(clean.failures, 0u);
  json& fl = items[1]["oracle_output"]["floor"];
  fl = (Amount::parse(fl.get<std::string>()) + Amount{1}).str();
  EXPECT_EQ(check_fixtures(items, 5e-4).failures, 1u);
}
