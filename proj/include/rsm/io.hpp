#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rsm/element_set.hpp"
#include "rsm/graph.hpp"
#include "rsm/kmeans.hpp"
#include "rsm/set_function.hpp"

namespace rsm {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// "%.9g" double formatting; CSV and goldens rely on it being stable.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::string(buf);
}

/// Shortest round-trip-exact formatting, for data files that are read back.
inline std::string format_double_exact(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

namespace detail {

/// Line reader that skips blank lines and '#' comments, tracking numbers for
/// error messages.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& out) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::size_t start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      out = line;
      return true;
    }
    return false;
  }

  std::string require(const std::string& what) {
    std::string line;
    if (!next(line)) throw ParseError("expected " + what + ", got end of file", line_no_ + 1);
    return line;
  }

  int line_no() const { return line_no_; }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_no_); }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

inline std::vector<double> parse_doubles(const std::string& line, const LineReader& reader) {
  std::istringstream iss(line);
  std::vector<double> out;
  double v;
  while (iss >> v) out.push_back(v);
  if (!iss.eof()) reader.fail("malformed number in '" + line + "'");
  return out;
}

inline std::vector<long long> parse_ints(const std::string& line, const LineReader& reader) {
  std::istringstream iss(line);
  std::vector<long long> out;
  long long v;
  while (iss >> v) out.push_back(v);
  if (!iss.eof()) reader.fail("malformed integer in '" + line + "'");
  return out;
}

}  // namespace detail

/// Function-specification grammar (one function per file, '#' comments):
///
///   modular <n>
///   <w_0> ... <w_{n-1}>
///   [constant <c>]
///
///   com <n> <exponent>
///   clusters <k>
///   <size> <e_1> ... <e_size>      (k lines)
///   weights
///   <w_0> ... <w_{n-1}>
inline SetFunctionPtr read_set_function(std::istream& in) {
  detail::LineReader reader(in);
  std::istringstream head(reader.require("function header"));
  std::string kind;
  head >> kind;

  if (kind == "modular") {
    int n = 0;
    if (!(head >> n) || n <= 0) reader.fail("modular header needs a positive ground-set size");
    auto weights = detail::parse_doubles(reader.require("weight line"), reader);
    if (static_cast<int>(weights.size()) != n)
      reader.fail("expected " + std::to_string(n) + " weights");
    double constant = 0.0;
    std::string extra;
    if (reader.next(extra)) {
      std::istringstream iss(extra);
      std::string tag;
      iss >> tag;
      if (tag != "constant" || !(iss >> constant))
        reader.fail("expected optional 'constant <c>' line");
    }
    return std::make_shared<ModularFunction>(std::move(weights), constant);
  }

  if (kind == "com") {
    int n = 0;
    double p = 0.0;
    if (!(head >> n >> p) || n <= 0)
      reader.fail("com header needs '<n> <exponent>'");
    std::istringstream cl(reader.require("clusters line"));
    std::string tag;
    int k = 0;
    cl >> tag >> k;
    if (tag != "clusters" || k <= 0) reader.fail("expected 'clusters <k>'");
    std::vector<ElementSet> clusters;
    for (int i = 0; i < k; ++i) {
      auto ids = detail::parse_ints(reader.require("cluster member line"), reader);
      if (ids.empty()) reader.fail("cluster line needs '<size> <elements...>'");
      ElementSet c(n);
      if (static_cast<int>(ids.size()) != ids[0] + 1)
        reader.fail("cluster size does not match element count");
      for (std::size_t j = 1; j < ids.size(); ++j) {
        if (ids[j] < 0 || ids[j] >= n) reader.fail("cluster element out of range");
        c.set(static_cast<std::size_t>(ids[j]));
      }
      clusters.push_back(std::move(c));
    }
    std::istringstream wl(reader.require("weights marker"));
    wl >> tag;
    if (tag != "weights") reader.fail("expected 'weights'");
    auto weights = detail::parse_doubles(reader.require("weight line"), reader);
    if (static_cast<int>(weights.size()) != n)
      reader.fail("expected " + std::to_string(n) + " weights");
    return std::make_shared<ConcaveOverModular>(std::move(clusters), std::move(weights), p);
  }

  reader.fail("unknown function kind '" + kind + "' (expected 'modular' or 'com')");
}

/// Graph grammar: first meaningful line "n m", "n m L", "n m s t" or
/// "n m s t L" (L = bipartition size: vertices 0..L-1 left), then m lines
/// "u v".
inline Graph read_graph(std::istream& in) {
  detail::LineReader reader(in);
  auto head = detail::parse_ints(reader.require("graph header"), reader);
  if (head.size() < 2 || head.size() > 5) reader.fail("graph header needs 2 to 5 integers");
  int n = static_cast<int>(head[0]);
  int m = static_cast<int>(head[1]);
  std::optional<int> s, t, left;
  if (head.size() == 3) left = static_cast<int>(head[2]);
  if (head.size() >= 4) {
    s = static_cast<int>(head[2]);
    t = static_cast<int>(head[3]);
  }
  if (head.size() == 5) left = static_cast<int>(head[4]);

  std::vector<Edge> edges;
  edges.reserve(m);
  for (int e = 0; e < m; ++e) {
    auto pair = detail::parse_ints(reader.require("edge line"), reader);
    if (pair.size() != 2) reader.fail("edge line needs exactly 'u v'");
    edges.push_back({static_cast<int>(pair[0]), static_cast<int>(pair[1])});
  }
  try {
    return Graph(n, std::move(edges), s, t, left);
  } catch (const std::invalid_argument& e) {
    reader.fail(e.what());
  }
}

/// Cover grammar: first meaningful line is the universe size, then one line
/// per covering set listing its universe elements.
inline std::pair<int, std::vector<ElementSet>> read_cover(std::istream& in) {
  detail::LineReader reader(in);
  auto head = detail::parse_ints(reader.require("universe size"), reader);
  if (head.size() != 1 || head[0] <= 0) reader.fail("first line must be the universe size");
  int universe = static_cast<int>(head[0]);
  std::vector<ElementSet> sets;
  std::string line;
  while (reader.next(line)) {
    auto ids = detail::parse_ints(line, reader);
    ElementSet s(universe);
    for (long long id : ids) {
      if (id < 0 || id >= universe) reader.fail("cover element out of range");
      s.set(static_cast<std::size_t>(id));
    }
    sets.push_back(std::move(s));
  }
  if (sets.empty()) reader.fail("cover file has no covering sets");
  return {universe, std::move(sets)};
}

/// Keypoint grammar: one "x y" pair per line.
inline std::vector<Point2> read_keypoints(std::istream& in) {
  detail::LineReader reader(in);
  std::vector<Point2> points;
  std::string line;
  while (reader.next(line)) {
    auto vals = detail::parse_doubles(line, reader);
    if (vals.size() != 2) reader.fail("keypoint line needs exactly 'x y'");
    points.push_back({vals[0], vals[1]});
  }
  if (points.empty()) throw ParseError("keypoint file is empty", reader.line_no());
  return points;
}

inline void write_keypoints(std::ostream& out, const std::vector<Point2>& points) {
  for (const Point2& p : points)
    out << format_double_exact(p.x) << ' ' << format_double_exact(p.y) << '\n';
}

template <class Reader>
auto read_file(const std::string& path, Reader&& reader) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return reader(in);
}

}  // namespace rsm
