#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "flow.hpp"
#include "gm.hpp"
#include "lattice.hpp"
#include "rees.hpp"
#include "smallmonoid.hpp"

namespace gmflow {

// Parsed system file. Sections: [group] [action dim=N] [gen NAME] [unit NAME]
// [ideal] [automaton] [flow].
struct InputFile {
  GroupPtr group;
  size_t dim = 0;
  std::vector<std::pair<std::string, RowMonomialMatrix>> gens;
  std::vector<std::pair<std::string, RowMonomialMatrix>> units;
  ReesPtr ideal;
  std::optional<Automaton> automaton;
  std::vector<std::pair<std::string, std::string>> states;  // automaton state -> SPC text
  std::vector<std::pair<std::string, std::string>> covers;  // generator (or "ideal") -> letter
};

inline uint64_t fnv1a(std::string const& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string digest(std::string const& s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(s)));
  return buf;
}

inline std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

struct Section {
  std::string head;                 // e.g. "gen a"
  std::vector<std::pair<size_t, std::string>> lines;  // line number, text
};

inline std::vector<Section> sections(std::string const& text) {
  std::vector<Section> out;
  std::istringstream in(text);
  std::string line;
  size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::ParseError, "line " + std::to_string(no) + ": unterminated section header");
      out.push_back(Section{trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    if (out.empty()) throw Error(ErrorKind::ParseError, "line " + std::to_string(no) + ": text before the first section");
    out.back().lines.emplace_back(no, line);
  }
  return out;
}

[[noreturn]] inline void fail(size_t no, std::string const& why) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(no) + ": " + why);
}

inline GroupPtr parse_group(Section const& s) {
  if (s.lines.empty()) throw Error(ErrorKind::ParseError, "[group] section is empty");
  auto [no, first] = s.lines[0];
  auto w = split_ws(first);
  if (w[0] == "cyclic") {
    if (w.size() < 2 || w.size() > 3) fail(no, "expected 'cyclic N [generator]'");
    size_t n = 0;
    try {
      n = std::stoul(w[1]);
    } catch (std::exception const&) {
      fail(no, "bad group order");
    }
    if (n < 1 || n > 4096) fail(no, "group order out of range");
    return make_cyclic(n, w.size() == 3 ? w[2] : (n == 2 ? "-1" : "x"));
  }
  if (w[0] == "table") {
    std::vector<std::string> labels(w.begin() + 1, w.end());
    size_t n = labels.size();
    if (n == 0 || s.lines.size() != n + 1) fail(no, "table needs one row per label");
    std::map<std::string, gid> ix;
    for (gid i = 0; i < n; ++i) ix[labels[i]] = i;
    std::vector<gid> t;
    for (size_t r = 1; r <= n; ++r) {
      auto row = split_ws(s.lines[r].second);
      if (row.size() != n) fail(s.lines[r].first, "row has the wrong length");
      for (auto const& e : row) {
        auto it = ix.find(e);
        if (it == ix.end()) fail(s.lines[r].first, "unknown label '" + e + "'");
        t.push_back(it->second);
      }
    }
    return std::make_shared<GroupTable const>(GroupTable(n, std::move(t), std::move(labels)));
  }
  fail(no, "expected 'cyclic' or 'table'");
}

inline Automaton parse_automaton(Section const& s) {
  if (s.lines.empty()) throw Error(ErrorKind::ParseError, "[automaton] section is empty");
  auto w = split_ws(s.lines[0].second);
  if (w[0] == "rz") {
    if (w.size() != 2) fail(s.lines[0].first, "expected 'rz K'");
    size_t k = std::stoul(w[1]);
    if (k < 1) fail(s.lines[0].first, "K must be positive");
    return rz_automaton(k);
  }
  Automaton a;
  for (auto const& [no, line] : s.lines) {
    auto v = split_ws(line);
    if (v[0] == "states") a.states.assign(v.begin() + 1, v.end());
    else if (v[0] == "letters") a.letters.assign(v.begin() + 1, v.end());
    else if (v[0] == "delta") {
      if (v.size() != 4) fail(no, "expected 'delta STATE LETTER STATE'");
      if (a.delta.empty()) a.delta.assign(a.states.size(), std::vector<int32_t>(a.letters.size(), -1));
      auto q = a.state(v[1]), t = a.letter(v[2]), r = a.state(v[3]);
      if (!q || !t || !r) fail(no, "unknown state or letter");
      a.delta[*q][*t] = static_cast<int32_t>(*r);
    } else {
      fail(no, "expected 'states', 'letters' or 'delta'");
    }
  }
  if (a.states.empty() || a.letters.empty()) throw Error(ErrorKind::ParseError, "automaton needs states and letters");
  if (a.delta.empty()) a.delta.assign(a.states.size(), std::vector<int32_t>(a.letters.size(), -1));
  return a;
}

}  // namespace detail

inline InputFile parse_input(std::string const& text) {
  InputFile f;
  auto secs = detail::sections(text);
  for (auto const& s : secs) {
    auto head = split_ws(s.head);
    if (head.empty()) throw Error(ErrorKind::ParseError, "empty section header");
    auto const& kind = head[0];
    if (kind == "group") {
      f.group = detail::parse_group(s);
    } else if (kind == "action") {
      if (head.size() != 2 || head[1].rfind("dim=", 0) != 0) throw Error(ErrorKind::ParseError, "expected [action dim=N]");
      f.dim = std::stoul(head[1].substr(4));
      if (f.dim == 0) throw Error(ErrorKind::ParseError, "dimension must be positive");
    } else if (kind == "gen" || kind == "unit") {
      if (head.size() != 2) throw Error(ErrorKind::ParseError, "expected [" + kind + " NAME]");
      if (!f.group || !f.dim) throw Error(ErrorKind::ParseError, "[group] and [action] must precede generators");
      std::string body;
      for (auto const& [no, line] : s.lines) body += (body.empty() ? "" : ", ") + line;
      auto m = parse_matrix(*f.group, f.dim, body);
      (kind == "gen" ? f.gens : f.units).emplace_back(head[1], m);
    } else if (kind == "ideal") {
      if (!f.group || !f.dim) throw Error(ErrorKind::ParseError, "[group] and [action] must precede [ideal]");
      std::vector<std::vector<std::string>> rows;
      for (auto const& [no, line] : s.lines) {
        if (line.rfind("A=", 0) == 0) continue;
        rows.push_back(split_ws(line));
        if (rows.back().size() != rows.front().size()) detail::fail(no, "ragged structure matrix");
      }
      if (rows.size() != f.dim) throw Error(ErrorKind::ParseError, "structure matrix needs one row per b");
      f.ideal = rees_from_rows(f.group, rows);
    } else if (kind == "automaton") {
      f.automaton = detail::parse_automaton(s);
    } else if (kind == "flow") {
      for (auto const& [no, line] : s.lines) {
        if (line.rfind("cover ", 0) == 0) {
          auto rest = line.substr(6);
          auto arrow = rest.find("->");
          if (arrow == std::string::npos) detail::fail(no, "expected 'cover NAME -> LETTER'");
          f.covers.emplace_back(trim(rest.substr(0, arrow)), trim(rest.substr(arrow + 2)));
          continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) detail::fail(no, "expected 'STATE = SPC' or a cover line");
        f.states.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
      }
    } else {
      throw Error(ErrorKind::ParseError, "unknown section [" + s.head + "]");
    }
  }
  if (!f.group) throw Error(ErrorKind::ParseError, "missing [group]");
  if (!f.dim) throw Error(ErrorKind::ParseError, "missing [action dim=N]");
  return f;
}

// Units, then generators, then every element of the ideal.
inline Action action_of(InputFile const& f) {
  Action act;
  act.group = f.group;
  act.b_size = f.dim;
  for (auto const& [n, m] : f.units) {
    act.names.push_back(n);
    act.gens.push_back(m);
  }
  for (auto const& [n, m] : f.gens) {
    act.names.push_back(n);
    act.gens.push_back(m);
  }
  if (f.ideal)
    for (auto const& e : rees_elements(*f.ideal)) {
      act.names.push_back(format_rees(*f.ideal, e));
      act.gens.push_back(rees_to_matrix(*f.ideal, e));
    }
  if (act.gens.empty()) throw Error(ErrorKind::ParseError, "no generators");
  return act;
}

inline SmallMonoid small_monoid_of(InputFile const& f) {
  if (!f.ideal) throw Error(ErrorKind::ParseError, "small monoid needs an [ideal]");
  if (f.units.empty()) throw Error(ErrorKind::ParseError, "small monoid needs [unit] generators");
  if (!f.gens.empty()) throw Error(ErrorKind::ParseError, "small monoid takes units and an ideal only");
  SmallMonoid m;
  m.group = f.group;
  m.ideal = f.ideal;
  for (auto const& [n, u] : f.units) {
    m.unit_names.push_back(n);
    m.units.push_back(u);
  }
  return m;
}

inline FlowCandidate flow_of(InputFile const& f, Action const& act) {
  if (!f.automaton) throw Error(ErrorKind::ParseError, "missing [automaton]");
  FlowCandidate c;
  c.action = act;
  c.automaton = *f.automaton;
  std::vector<std::optional<Spc>> asg(c.automaton.n_states());
  for (auto const& [q, text] : f.states) {
    auto i = c.automaton.state(q);
    if (!i) throw Error(ErrorKind::ParseError, "unknown automaton state '" + q + "'");
    asg[*i] = parse_spc(*act.group, act.b_size, text);
  }
  for (size_t i = 0; i < asg.size(); ++i) {
    if (!asg[i]) throw Error(ErrorKind::ParseError, "state '" + c.automaton.states[i] + "' has no value");
    c.assignment.push_back(*asg[i]);
  }
  std::vector<std::optional<size_t>> cover(act.gens.size());
  size_t n_ideal = f.ideal ? act.gens.size() - f.units.size() - f.gens.size() : 0;
  for (auto const& [name, letter] : f.covers) {
    auto t = c.automaton.letter(letter);
    if (!t) throw Error(ErrorKind::ParseError, "unknown automaton letter '" + letter + "'");
    if (name == "ideal") {
      for (size_t k = act.gens.size() - n_ideal; k < act.gens.size(); ++k) cover[k] = *t;
      continue;
    }
    if (name == "*") {
      for (auto& v : cover)
        if (!v) v = *t;
      continue;
    }
    auto k = act.letter(name);
    if (!k) throw Error(ErrorKind::ParseError, "unknown generator '" + name + "'");
    cover[*k] = *t;
  }
  for (size_t k = 0; k < cover.size(); ++k) {
    if (!cover[k]) throw Error(ErrorKind::ParseError, "generator '" + act.names[k] + "' has no cover");
    c.cover.push_back(*cover[k]);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Writers

inline std::string write_group(GroupTable const& G) {
  std::string out = "[group]\n";
  if (G.is_cyclic_presentation()) return out + "cyclic " + std::to_string(G.order()) + " " + G.cyclic_generator() + "\n";
  out += "table";
  for (auto const& l : G.labels()) out += " " + l;
  out += "\n";
  for (gid a = 0; a < G.order(); ++a) {
    for (gid b = 0; b < G.order(); ++b) out += (b ? " " : "") + G.label(G.mul(a, b));
    out += "\n";
  }
  return out;
}

inline std::string write_ideal(ReesMatrixSemigroup const& r) {
  std::string out = "[ideal]\nA=" + std::to_string(r.a_size) + "\n";
  for (size_t b = 0; b < r.b_size; ++b) {
    for (size_t a = 0; a < r.a_size; ++a) {
      if (a) out += " ";
      out += r.nonzero(b, a) ? r.group->label(r.entry(b, a)) : "0";
    }
    out += "\n";
  }
  return out;
}

inline std::string write_system(GroupTable const& G, size_t dim,
                                std::vector<std::pair<std::string, RowMonomialMatrix>> const& units,
                                std::vector<std::pair<std::string, RowMonomialMatrix>> const& gens,
                                ReesMatrixSemigroup const* ideal) {
  std::string out = write_group(G);
  out += "\n[action dim=" + std::to_string(dim) + "]\n";
  for (auto const& [n, m] : units) out += "\n[unit " + n + "]\n" + format_matrix(G, m) + "\n";
  for (auto const& [n, m] : gens) out += "\n[gen " + n + "]\n" + format_matrix(G, m) + "\n";
  if (ideal) out += "\n" + write_ideal(*ideal);
  return out;
}

inline std::string write_small_monoid(SmallMonoid const& m) {
  std::vector<std::pair<std::string, RowMonomialMatrix>> units;
  for (size_t i = 0; i < m.units.size(); ++i) units.emplace_back(m.unit_names[i], m.units[i]);
  return write_system(*m.group, m.b_size(), units, {}, m.ideal.get());
}

inline std::string write_flow(FlowCandidate const& c) {
  auto const& G = *c.action.group;
  std::string out = "[automaton]\n";
  auto const& a = c.automaton;
  out += "states";
  for (auto const& s : a.states) out += " " + s;
  out += "\nletters";
  for (auto const& l : a.letters) out += " " + l;
  out += "\n";
  for (size_t q = 0; q < a.n_states(); ++q)
    for (size_t t = 0; t < a.n_letters(); ++t)
      if (a.delta[q][t] >= 0) out += "delta " + a.states[q] + " " + a.letters[t] + " " + a.states[a.delta[q][t]] + "\n";
  out += "\n[flow]\n";
  for (size_t q = 0; q < a.n_states(); ++q) out += a.states[q] + " = " + format_spc(G, c.assignment[q]) + "\n";
  for (size_t k = 0; k < c.cover.size(); ++k) out += "cover " + c.action.names[k] + " -> " + a.letters[c.cover[k]] + "\n";
  return out;
}

// Key-value report; the timing line is the only non-deterministic field.
struct RunReport {
  std::string command;
  std::string input_digest;
  std::vector<std::pair<std::string, std::string>> fields;
  double timing_ms = 0;

  void add(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, size_t value) { add(std::move(key), std::to_string(value)); }
  void flag(std::string key, bool value) { add(std::move(key), std::string(value ? "true" : "false")); }

  std::string str() const {
    std::string out = "command: " + command + "\n";
    if (!input_digest.empty()) out += "input_digest: " + input_digest + "\n";
    for (auto const& [k, v] : fields) out += k + ": " + v + "\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", timing_ms);
    out += std::string("timing_ms: ") + buf + "\n";
    return out;
  }
};

}  // namespace gmflow
