#include <gtest/gtest.h>

#include "support.hpp"

using namespace testing_support;

TEST(Golden, GcodeMatchesCorpus) {
  for (const std::string& name : corpus_names()) {
    const std::string expect = golden(name + ".gcode");
    ASSERT_FALSE(expect.empty()) << name << ": run tools/update_goldens.sh";
    EXPECT_EQ(corpus_gcode(name), expect) << name;
  }
}

TEST(Golden, SvgMatchesCorpus) {
  for (const std::string& name : corpus_names()) {
    const std::string expect = golden(name + ".svg");
    ASSERT_FALSE(expect.empty()) << name << ": run tools/update_goldens.sh";
    EXPECT_EQ(corpus_svg(name), expect) << name;
  }
}

TEST(Golden, OutputsAreLfOnly) {
  for (const std::string& name : corpus_names()) {
    EXPECT_EQ(corpus_gcode(name).find('\r'), std::string::npos);
    EXPECT_EQ(corpus_svg(name).find('\r'), std::string::npos);
  }
}
