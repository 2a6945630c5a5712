#include "netcover/instance_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"

namespace netcover {
namespace {

const char* kTriangle = R"({
  "alpha": 0.25,
  "vertices": [{"id": 10, "x": 0, "y": 0}, {"id": 11, "x": 3, "y": 0}, {"id": 12, "x": 0, "y": 4}],
  "edges": [{"u": 10, "w": 11}, {"u": 11, "w": 12, "length": 6.5}, {"u": 12, "w": 10}],
  "facilities": [{"id": 0, "x": -1, "y": -1}, {"id": 1, "x": 4, "y": 5}],
  "pairs": [{"i": 0, "j": 1, "t": 3, "d": 6.0}]
})";

TEST(InstanceIo, ParsesAndDefaultsLengths) {
  const ProblemInstance inst = parse_instance(kTriangle);
  EXPECT_DOUBLE_EQ(inst.alpha, 0.25);
  ASSERT_EQ(inst.network.edge_count(), 3u);
  EXPECT_DOUBLE_EQ(inst.network.edges()[0].length, 3.0);
  EXPECT_DOUBLE_EQ(inst.network.edges()[1].length, 6.5);
  EXPECT_DOUBLE_EQ(inst.network.edges()[2].length, 4.0);
  ASSERT_EQ(inst.pairs.size(), 1u);
  EXPECT_EQ(inst.pairs[0].origin, 0);
  EXPECT_EQ(inst.pairs[0].dest, 1);
  EXPECT_DOUBLE_EQ(inst.pairs[0].weight, 3.0);
  EXPECT_TRUE(validate_instance(inst).ok());
}

TEST(InstanceIo, MalformedDocuments) {
  EXPECT_THROW(parse_instance("{"), InstanceFormatError);
  EXPECT_THROW(parse_instance("[]"), InstanceFormatError);
  EXPECT_THROW(parse_instance(R"({"alpha": "x", "vertices": [], "edges": [], "facilities": [], "pairs": []})"),
               InstanceFormatError);
  EXPECT_THROW(parse_instance(R"({"alpha": 0.5, "vertices": [{"id": 0}], "edges": [], "facilities": [], "pairs": []})"),
               InstanceFormatError);
}

TEST(InstanceIo, MissingFile) {
  EXPECT_THROW(load_instance("/nonexistent/netcover/instance.json"), std::ios_base::failure);
}

TEST(InstanceIo, RoundTrip) {
  const ProblemInstance a = testing::random_instance(3);
  const ProblemInstance b = parse_instance(serialize_instance(a));
  EXPECT_EQ(a.alpha, b.alpha);
  ASSERT_EQ(a.network.edge_count(), b.network.edge_count());
  for (std::size_t k = 0; k < a.network.edge_count(); ++k) {
    EXPECT_EQ(a.network.edges()[k].length, b.network.edges()[k].length);
  }
  ASSERT_EQ(a.pairs.size(), b.pairs.size());
  for (std::size_t k = 0; k < a.pairs.size(); ++k) EXPECT_EQ(a.pairs[k].acceptance, b.pairs[k].acceptance);
  EXPECT_EQ(serialize_instance(a), serialize_instance(b));
}

TEST(InstanceIo, LoadsFromDisk) {
  const auto path = std::filesystem::temp_directory_path() / "netcover_io_test.json";
  std::ofstream(path) << kTriangle;
  EXPECT_EQ(load_instance(path).facilities.size(), 2u);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace netcover
