#pragma once

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// Compares text against tests/golden/<name>. With ARR_UPDATE_GOLDEN=1 the file
// is rewritten instead.
inline void expect_golden(const std::string& name, const std::string& text) {
  const std::string path = std::string(ARR_GOLDEN_DIR) + "/" + name;
  if (const char* u = std::getenv("ARR_UPDATE_GOLDEN"); u && std::string(u) == "1") {
    std::ofstream(path, std::ios::binary) << text;
    return;
  }
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in) << "missing golden file " << path << " (run with ARR_UPDATE_GOLDEN=1)";
  std::ostringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), text) << "golden mismatch: " << path;
}
