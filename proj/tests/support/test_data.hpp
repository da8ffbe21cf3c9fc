#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sprw/value.hpp"

namespace sprw::test {

inline std::filesystem::path data_dir() { return SPRW_TEST_DATA; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::filesystem::path> list_dir(const std::filesystem::path& dir, const std::string& ext = {}) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (ext.empty() || e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string corpus(const std::string& name) { return read_file(data_dir() / "corpus" / (name + ".sprw")); }

/// Message with id and seq taken from `n`.
inline Message msg(MsgId n, TimeMs ts, const std::string& type, std::vector<Value> attrs) {
  return Message{n, n, ts, Symbol{type}, std::move(attrs)};
}

inline Value sym(const std::string& s) { return Value::sym(s); }

}  // namespace sprw::test
