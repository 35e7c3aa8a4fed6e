#ifndef MULL_TEST_UTIL_HPP
#define MULL_TEST_UTIL_HPP

#include <fstream>
#include <sstream>
#include <string>

#ifndef MULL_DATA_DIR
#define MULL_DATA_DIR "."
#endif

inline std::string read_data_file(const std::string& name) {
  std::ifstream in(std::string(MULL_DATA_DIR) + "/" + name);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

#endif
