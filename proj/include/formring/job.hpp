#pragma once

// Job files: line-oriented "key = value" pairs grouped under [section]
// headers. '#' starts a comment. Lists are comma separated.
//
//   [ring]      vars = x, y          field = Q | Fp 101 | Fp:101
//   [module]    J = y^2 - x^3        (omit for M = A)
//   [ideal]     q = maximal | x^2, y
//   [sequence]  a = ..., b = ...     (b optional)
//   [job]       command, n_range = lo..hi, trunc_start, trunc_step,
//               trunc_max, agree_window, out
//
// Polynomials stay as text here; they are parsed once the field is known.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "formring/field.hpp"

namespace formring {

class job_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& job_commands() {
  static const std::vector<std::string> cmds{"hs",       "initform",  "regseq", "homology", "formula",   "multiplicity",
                                             "decompose", "bezout",   "chi",    "euler",    "verify-all"};
  return cmds;
}

struct FieldSpec {
  bool prime = false;
  std::uint32_t p = 0;

  std::string name() const { return prime ? "Fp:" + std::to_string(p) : "Q"; }
};

struct JobFile {
  std::vector<std::string> vars;
  FieldSpec field;
  std::vector<std::string> J;
  bool q_maximal = true;
  std::vector<std::string> q;
  std::vector<std::string> a;
  std::vector<std::string> b;
  std::string command;
  std::optional<long> n_lo, n_hi;
  std::optional<std::uint32_t> trunc_start, trunc_step, trunc_max, agree_window;
  std::string out;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto lo = s.find_first_not_of(" \t\r");
  if (lo == std::string::npos) return {};
  const auto hi = s.find_last_not_of(" \t\r");
  return s.substr(lo, hi - lo + 1);
}

/// Splits on commas outside parentheses; empty items are dropped.
inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      if (auto t = trim(cur); !t.empty()) out.push_back(t);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (auto t = trim(cur); !t.empty()) out.push_back(t);
  return out;
}

inline long parse_long(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw job_error("expected an integer for " + what + ", got '" + s + "'");
  }
}

inline std::uint32_t parse_count(const std::string& s, const std::string& what) {
  long v = parse_long(s, what);
  if (v < 0) throw job_error(what + " must be non-negative");
  return static_cast<std::uint32_t>(v);
}

}  // namespace detail

/// "Q", "Fp 101" or "Fp:101".
inline FieldSpec parse_field_spec(const std::string& text) {
  const std::string t = detail::trim(text);
  if (t == "Q" || t == "QQ") return {};
  if (t.rfind("Fp", 0) == 0) {
    std::string rest = detail::trim(t.substr(2));
    if (!rest.empty() && rest.front() == ':') rest = detail::trim(rest.substr(1));
    FieldSpec f;
    f.prime = true;
    const long p = detail::parse_long(rest, "field prime");
    if (p < 2 || p > 0xFFFFFFFFL) throw job_error("field prime out of range");
    try {
      PrimeField check(static_cast<std::uint32_t>(p));
    } catch (const field_error& e) {
      throw job_error(e.what());
    }
    f.p = static_cast<std::uint32_t>(p);
    return f;
  }
  throw job_error("unknown field '" + t + "' (expected Q or Fp:<p>)");
}

inline JobFile parse_job(std::istream& in) {
  static const std::map<std::string, std::set<std::string>> keys{
      {"ring", {"vars", "field"}},
      {"module", {"J"}},
      {"ideal", {"q"}},
      {"sequence", {"a", "b"}},
      {"job", {"command", "n_range", "trunc_start", "trunc_step", "trunc_max", "agree_window", "out"}}};
  JobFile job;
  std::string section, line;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw job_error(where + "unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (!keys.count(section)) throw job_error(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw job_error(where + "expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (section.empty()) throw job_error(where + "key '" + key + "' outside a section");
    if (!keys.at(section).count(key)) throw job_error(where + "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(section + "." + key).second) throw job_error(where + "duplicate key '" + key + "'");
    try {
      if (key == "vars") job.vars = detail::split_list(value);
      else if (key == "field") job.field = parse_field_spec(value);
      else if (key == "J") job.J = detail::split_list(value);
      else if (key == "q") {
        job.q_maximal = value == "maximal";
        if (!job.q_maximal) job.q = detail::split_list(value);
      } else if (key == "a") job.a = detail::split_list(value);
      else if (key == "b") job.b = detail::split_list(value);
      else if (key == "command") job.command = value;
      else if (key == "n_range") {
        const auto dots = value.find("..");
        if (dots == std::string::npos) {
          job.n_lo = 1;
          job.n_hi = detail::parse_long(value, "n_range");
        } else {
          job.n_lo = detail::parse_long(detail::trim(value.substr(0, dots)), "n_range");
          job.n_hi = detail::parse_long(detail::trim(value.substr(dots + 2)), "n_range");
        }
        if (*job.n_lo < 1 || *job.n_hi < *job.n_lo) throw job_error("n_range must satisfy 1 <= lo <= hi");
      } else if (key == "trunc_start") job.trunc_start = detail::parse_count(value, key);
      else if (key == "trunc_step") job.trunc_step = detail::parse_count(value, key);
      else if (key == "trunc_max") job.trunc_max = detail::parse_count(value, key);
      else if (key == "agree_window") job.agree_window = detail::parse_count(value, key);
      else if (key == "out") job.out = value;
    } catch (const job_error& e) {
      throw job_error(where + e.what());
    }
  }
  if (job.vars.empty()) throw job_error("[ring] vars is required");
  if (!job.q_maximal && job.q.empty()) throw job_error("[ideal] q has no generators");
  if (!job.command.empty()) {
    bool known = false;
    for (const auto& c : job_commands()) known = known || c == job.command;
    if (!known) throw job_error("unknown command '" + job.command + "'");
  }
  return job;
}

inline JobFile parse_job_text(const std::string& text) {
  std::istringstream in(text);
  return parse_job(in);
}

inline JobFile load_job(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw job_error("cannot open job file '" + path + "'");
  return parse_job(in);
}

}  // namespace formring
