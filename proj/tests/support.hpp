#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "amalgam/fundgroup.hpp"
#include "amalgam/gog.hpp"

namespace amalgam::testing {

inline std::string corpus_path(const std::string& name) {
  return std::string(AMALGAM_CORPUS_DIR) + "/" + name + ".gog";
}

inline std::string corpus_text(const std::string& name) {
  std::ifstream in(corpus_path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline GraphOfGroups corpus(const std::string& name) { return parse_gog(corpus_text(name)); }

inline FundamentalGroup corpus_group(const std::string& name) { return FundamentalGroup(corpus(name)); }

/// Product of generator letters: +k is generator k-1, -k its inverse.
inline NormalForm evaluate(const FundamentalGroup& fg, const Word& w) {
  NormalForm x = fg.identity();
  for (int letter : w) {
    const NormalForm& s = fg.generators()[std::abs(letter) - 1].element;
    x = fg.multiply(x, letter > 0 ? s : fg.invert(s));
  }
  return x;
}

}  // namespace amalgam::testing
