#pragma once

// Line-oriented text formats: trajectory dumps (run-length encoded),
// cross and bond config dumps, and per-sample geodesic trace records.

#include <charconv>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cross.hpp"
#include "geodesics.hpp"
#include "percolation.hpp"
#include "tasep.hpp"

namespace percshape::io {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string expect_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(std::string("unexpected end of input reading ") + what);
  return line;
}

inline void expect_tag(std::istringstream& ss, const std::string& tag) {
  std::string got;
  if (!(ss >> got) || got != tag) throw FormatError("expected '" + tag + "' header");
}

inline std::string bits_to_string(const BitRow& row) {
  std::string s(row.size(), '0');
  for (std::size_t k = 0; k < row.size(); ++k)
    if (row.test(k)) s[k] = '1';
  return s;
}

inline void string_to_bits(const std::string& s, BitRow& row) {
  if (s.size() != row.size()) throw FormatError("bit line has wrong length");
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] != '0' && s[k] != '1') throw FormatError("bit line contains a non-binary character");
    row.set(k, s[k] == '1');
  }
}

// Shortest text that reads back to the same double.
inline void write_double(std::ostream& out, double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.write(buf, res.ptr - buf);
}

}  // namespace detail

// --- trajectory --------------------------------------------------------------
//
//   trajectory <window_lo> <window_hi> <steps>
//   <time> <first bit> <run length> <run length> ...
//
// Runs alternate starting with the value of the lowest site and sum to the
// window length.

inline void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << "trajectory " << traj.window_lo() << ' ' << traj.window_hi() << ' ' << traj.steps() << '\n';
  for (const ParticleField& f : traj.snapshots) {
    const BitRow& b = f.bits();
    bool cur = b.size() > 0 && b.test(0);
    out << f.time() << ' ' << (cur ? 1 : 0);
    std::size_t run = 0;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (b.test(k) == cur) {
        ++run;
      } else {
        out << ' ' << run;
        cur = !cur;
        run = 1;
      }
    }
    out << ' ' << run << '\n';
  }
}

inline Trajectory read_trajectory(std::istream& in) {
  std::istringstream head(detail::expect_line(in, "trajectory header"));
  detail::expect_tag(head, "trajectory");
  int lo = 0;
  int hi = 0;
  long steps = 0;
  if (!(head >> lo >> hi >> steps) || lo > hi || steps < 0) throw FormatError("bad trajectory header");
  Trajectory traj;
  for (long t = 0; t <= steps; ++t) {
    std::istringstream ss(detail::expect_line(in, "trajectory line"));
    long time = 0;
    int first = 0;
    if (!(ss >> time >> first) || time != t || (first != 0 && first != 1)) throw FormatError("bad trajectory line");
    ParticleField f(lo, hi, time);
    bool cur = first == 1;
    std::size_t pos = 0;
    std::size_t run = 0;
    while (ss >> run) {
      if (pos + run > f.size()) throw FormatError("trajectory runs overflow the window");
      for (std::size_t k = 0; k < run; ++k) f.bits().set(pos + k, cur);
      pos += run;
      cur = !cur;
    }
    if (pos != f.size()) throw FormatError("trajectory runs do not cover the window");
    traj.snapshots.push_back(std::move(f));
  }
  return traj;
}

// --- cross config ------------------------------------------------------------
//
//   cross <n_cols> <row_lo> <row_hi> <epsilon> <seed>
//   one line per column i: '1' = open, rows row_lo..row_hi left to right

inline void write_cross(std::ostream& out, const CrossConfig& c) {
  out << "cross " << c.n_cols << ' ' << c.row_lo << ' ' << c.row_hi << ' ';
  detail::write_double(out, c.epsilon);
  out << ' ' << c.seed << '\n';
  for (std::size_t i = 0; i < c.h_open.lines(); ++i) out << detail::bits_to_string(c.h_open.line(i)) << '\n';
}

inline CrossConfig read_cross(std::istream& in) {
  std::istringstream head(detail::expect_line(in, "cross header"));
  detail::expect_tag(head, "cross");
  int n = 0, lo = 0, hi = 0;
  double eps = 0;
  std::uint64_t seed = 0;
  if (!(head >> n >> lo >> hi >> eps >> seed)) throw FormatError("bad cross header");
  CrossConfig c(n, lo, hi, eps, seed);
  for (std::size_t i = 0; i < c.h_open.lines(); ++i) detail::string_to_bits(detail::expect_line(in, "cross line"), c.h_open.line(i));
  return c;
}

// --- bond config -------------------------------------------------------------
//
//   bonds <x_lo> <x_hi> <y_lo> <y_hi> <p> <seed>
//   h
//   one line per x in [x_lo, x_hi-1]: edges (x,y)->(x+1,y), y = y_lo..y_hi
//   v
//   one line per x in [x_lo, x_hi]: edges (x,y)->(x,y+1), y = y_lo..y_hi-1

inline void write_bonds(std::ostream& out, const BondConfig& c) {
  out << "bonds " << c.box.x_lo << ' ' << c.box.x_hi << ' ' << c.box.y_lo << ' ' << c.box.y_hi << ' ';
  detail::write_double(out, c.p);
  out << ' ' << c.seed << "\nh\n";
  for (std::size_t i = 0; i < c.h.lines(); ++i) out << detail::bits_to_string(c.h.line(i)) << '\n';
  out << "v\n";
  for (std::size_t i = 0; i < c.v.lines(); ++i) out << detail::bits_to_string(c.v.line(i)) << '\n';
}

inline BondConfig read_bonds(std::istream& in) {
  std::istringstream head(detail::expect_line(in, "bonds header"));
  detail::expect_tag(head, "bonds");
  Box b;
  double p = 0;
  std::uint64_t seed = 0;
  if (!(head >> b.x_lo >> b.x_hi >> b.y_lo >> b.y_hi >> p >> seed)) throw FormatError("bad bonds header");
  BondConfig c(b, p, seed);
  if (detail::expect_line(in, "h marker") != "h") throw FormatError("expected 'h' plane");
  for (std::size_t i = 0; i < c.h.lines(); ++i) detail::string_to_bits(detail::expect_line(in, "h line"), c.h.line(i));
  if (detail::expect_line(in, "v marker") != "v") throw FormatError("expected 'v' plane");
  for (std::size_t i = 0; i < c.v.lines(); ++i) detail::string_to_bits(detail::expect_line(in, "v line"), c.v.line(i));
  return c;
}

// --- geodesic trace ----------------------------------------------------------

/// One regression record per sample, written as a single line of
/// space-separated key=value fields.
struct TraceRecord {
  std::uint64_t seed = 0;
  double epsilon = 0;
  double lambda = 0;
  int n = 0;
  Point target;
  std::string cases;
  std::int64_t k_size = 0;
  std::int64_t b_size = 0;
  std::vector<std::int64_t> cluster_sizes;
  std::int64_t boundary_size = 0;
  std::string bypass_status;
  std::int64_t bypass_length = 0;
  std::vector<Point> path;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

inline void write_trace(std::ostream& out, const TraceRecord& r) {
  out << "sample seed=" << r.seed << " eps=";
  detail::write_double(out, r.epsilon);
  out << " lambda=";
  detail::write_double(out, r.lambda);
  out << " n=" << r.n << " target=" << r.target.x << ',' << r.target.y << " cases=" << (r.cases.empty() ? "-" : r.cases)
      << " K=" << r.k_size << " B=" << r.b_size << " clusters=";
  if (r.cluster_sizes.empty()) out << '-';
  for (std::size_t k = 0; k < r.cluster_sizes.size(); ++k) out << (k ? "," : "") << r.cluster_sizes[k];
  out << " boundary=" << r.boundary_size << " bypass=" << r.bypass_status << ':' << r.bypass_length << " path=";
  for (std::size_t k = 0; k < r.path.size(); ++k) out << (k ? ";" : "") << r.path[k].x << ',' << r.path[k].y;
  out << '\n';
}

inline TraceRecord parse_trace(const std::string& line) {
  std::istringstream ss(line);
  detail::expect_tag(ss, "sample");
  TraceRecord r;
  std::string field;
  int seen = 0;
  while (ss >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw FormatError("trace field without '='");
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    std::istringstream v(val);
    char sep = 0;
    ++seen;
    if (key == "seed") {
      v >> r.seed;
    } else if (key == "eps") {
      v >> r.epsilon;
    } else if (key == "lambda") {
      v >> r.lambda;
    } else if (key == "n") {
      v >> r.n;
    } else if (key == "target") {
      v >> r.target.x >> sep >> r.target.y;
    } else if (key == "cases") {
      r.cases = val == "-" ? "" : val;
    } else if (key == "K") {
      v >> r.k_size;
    } else if (key == "B") {
      v >> r.b_size;
    } else if (key == "clusters") {
      if (val != "-") {
        std::int64_t x = 0;
        while (v >> x) {
          r.cluster_sizes.push_back(x);
          v >> sep;
        }
      }
    } else if (key == "boundary") {
      v >> r.boundary_size;
    } else if (key == "bypass") {
      const auto colon = val.find(':');
      if (colon == std::string::npos) throw FormatError("bypass field needs status:length");
      r.bypass_status = val.substr(0, colon);
      r.bypass_length = std::stoll(val.substr(colon + 1));
    } else if (key == "path") {
      Point p;
      while (v >> p.x >> sep >> p.y) {
        r.path.push_back(p);
        v >> sep;
      }
    } else {
      throw FormatError("unknown trace field '" + key + "'");
    }
  }
  if (seen != 12) throw FormatError("trace record is missing fields");
  return r;
}

}  // namespace percshape::io
