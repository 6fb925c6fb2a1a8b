#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "momentforge/parser.hpp"
#include "momentforge/pipeline.hpp"

namespace momentforge::testing {

inline std::string programs_dir() { return MOMENTFORGE_PROGRAMS_DIR; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus_source(const std::string& name) {
  return read_file(programs_dir() + "/" + name + ".prob");
}

inline Program parse_corpus(const std::string& name) {
  return parse_program(corpus_source(name));
}

inline Rational rat(long n, long d = 1) { return momentforge::rat(n, d); }

inline Scalar sc(long n, long d = 1) { return Scalar(rat(n, d)); }

inline Surd sd(long n, long d = 1) { return Surd(sc(n, d)); }

}  // namespace momentforge::testing
