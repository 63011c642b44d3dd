#pragma once

#include <fstream>
#include <sstream>
#include <string>

#ifndef ADME_FIXTURE_DIR
#define ADME_FIXTURE_DIR "tests/fixtures"
#endif

inline std::string fixture_path(const std::string& name) {
    return std::string(ADME_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string read_fixture(const std::string& name) {
    return read_file(fixture_path(name));
}
