// Copyright 2026 The sfsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sfsync/scenario.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sfsync/errors.hpp"
#include "sfsync/lti.hpp"

namespace sfsync {

namespace {

namespace fs = std::filesystem;

struct Node {
  bool is_list = false;
  std::string atom;
  std::vector<Node> items;
};

struct Entry {
  Node value;
  std::string raw;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(std::string s) {
  if (auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
  return s;
}

int bracket_balance(const std::string& s) {
  int depth = 0;
  for (char c : s) depth += c == '[' ? 1 : c == ']' ? -1 : 0;
  return depth;
}

class ValueParser {
 public:
  ValueParser(const std::string& text, int line) : s_(text), line_(line) {}

  Node parse() {
    Node n = value();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing text");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Node value() {
    skip_ws();
    Node n;
    if (pos_ < s_.size() && s_[pos_] == '[') {
      ++pos_;
      n.is_list = true;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return n;
      }
      while (true) {
        n.items.push_back(value());
        skip_ws();
        if (pos_ >= s_.size()) fail("unterminated list");
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (s_[pos_] == ']') {
          ++pos_;
          return n;
        }
        fail(std::string("unexpected character '") + s_[pos_] + "'");
      }
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '[' && s_[pos_] != ']' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected a value");
    n.atom = s_.substr(start, pos_ - start);
    return n;
  }

  const std::string& s_;
  int line_;
  std::size_t pos_ = 0;
};

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

double to_number(const Node& n, int line) {
  double v = 0.0;
  if (n.is_list || !parse_double(n.atom, v))
    throw ParseError("expected a number, got '" + (n.is_list ? "[...]" : n.atom) + "'", line);
  return v;
}

Complex to_complex(const Node& n, int line) {
  if (n.is_list) throw ParseError("expected a complex number", line);
  const std::string& s = n.atom;
  double re = 0.0;
  if (parse_double(s, re)) return {re, 0.0};
  if (s.size() >= 1 && (s.back() == 'i' || s.back() == 'j')) {
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    double im = 0.0;
    if (split == std::string::npos) {
      const std::string only = body.empty() || body == "+" || body == "-" ? body + "1" : body;
      if (parse_double(only, im)) return {0.0, im};
    } else {
      std::string imag = body.substr(split);
      if (imag == "+" || imag == "-") imag += "1";
      if (parse_double(body.substr(0, split), re) && parse_double(imag, im)) return {re, im};
    }
  }
  throw ParseError("expected a complex number, got '" + s + "'", line);
}

Vector to_vector(const Node& n, int line) {
  if (!n.is_list) return Vector::Constant(1, to_number(n, line));
  Vector v(static_cast<Eigen::Index>(n.items.size()));
  for (std::size_t k = 0; k < n.items.size(); ++k)
    v(static_cast<Eigen::Index>(k)) = to_number(n.items[k], line);
  return v;
}

Matrix to_matrix(const Node& n, int line) {
  if (!n.is_list) return Matrix::Constant(1, 1, to_number(n, line));
  if (n.items.empty()) return Matrix(0, 0);
  if (!n.items.front().is_list) return to_vector(n, line).transpose();
  const auto rows = static_cast<Eigen::Index>(n.items.size());
  const auto cols = static_cast<Eigen::Index>(n.items.front().items.size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Node& row = n.items[static_cast<std::size_t>(i)];
    if (!row.is_list || static_cast<Eigen::Index>(row.items.size()) != cols)
      throw ParseError("matrix rows must have equal length", line);
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = to_number(row.items[static_cast<std::size_t>(j)], line);
  }
  return m;
}

ComplexList to_complex_list(const Node& n, int line) {
  if (!n.is_list) return {to_complex(n, line)};
  ComplexList out;
  for (const Node& item : n.items) out.push_back(to_complex(item, line));
  return out;
}

int to_int(const Node& n, int line) {
  const double v = to_number(n, line);
  if (v != std::floor(v)) throw ParseError("expected an integer", line);
  return static_cast<int>(v);
}

const std::set<std::string>& allowed_keys(const std::string& section) {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"simulation", {"mode", "T", "dt", "seed", "name"}},
      {"target", {"A", "B", "C", "nq"}},
      {"exosystem", {"Ar", "Cr", "x0"}},
      {"gains", {"k_poles", "h_poles"}},
      {"agent", {"A", "B", "C", "Cm", "x0"}},
      {"graph", {"file", "nodes"}},
      {"rootset", {"members"}},
  };
  return keys.at(section);
}

std::string section_kind(const std::string& name) {
  return name.rfind("agent.", 0) == 0 ? "agent" : name;
}

const Entry* find(const Section& s, const std::string& key) {
  auto it = s.find(key);
  return it == s.end() ? nullptr : &it->second;
}

const Entry& require(const Section& s, const std::string& section, const std::string& key,
                     int section_line) {
  const Entry* e = find(s, key);
  if (!e) throw ParseError("[" + section + "] is missing '" + key + "'", section_line);
  return *e;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'", 0);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* yes_no(bool v) { return v ? "yes" : "no"; }

std::string complex_list_text(const ComplexList& zs) {
  std::string out = "{";
  for (std::size_t k = 0; k < zs.size(); ++k) {
    if (k) out += ", ";
    out += format_complex(zs[k]);
  }
  return out + "}";
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& base_dir) {
  std::map<std::string, Section> sections;
  std::map<std::string, int> section_lines;
  std::string graph_lines;
  int graph_line_count = 0;

  std::istringstream in(text);
  std::string line, current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[' && body.back() == ']' && body.find('=') == std::string::npos &&
        body.find('[', 1) == std::string::npos) {
      current = trim(body.substr(1, body.size() - 2));
      const std::string kind = section_kind(current);
      static const std::set<std::string> known = {"simulation", "target", "exosystem", "gains",
                                                  "agent",      "graph",  "rootset"};
      if (!known.count(kind)) throw ParseError("unknown section [" + current + "]", lineno);
      if (sections.count(current)) throw ParseError("duplicate section [" + current + "]", lineno);
      sections[current];
      section_lines[current] = lineno;
      continue;
    }
    if (current.empty()) throw ParseError("content before the first section", lineno);
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      if (current != "graph") throw ParseError("expected 'key = value'", lineno);
      while (graph_line_count < lineno - 1) {
        graph_lines += '\n';
        ++graph_line_count;
      }
      graph_lines += body + '\n';
      ++graph_line_count;
      continue;
    }
    const std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    const int key_line = lineno;
    if (!allowed_keys(section_kind(current)).count(key))
      throw ParseError("unknown key '" + key + "' in [" + current + "]", key_line);
    while (bracket_balance(value) > 0) {
      if (!std::getline(in, line)) throw ParseError("unterminated '[' in '" + key + "'", key_line);
      ++lineno;
      value += ' ' + trim(strip_comment(line));
    }
    if (bracket_balance(value) < 0) throw ParseError("unbalanced ']'", key_line);
    Section& sec = sections[current];
    if (sec.count(key)) throw ParseError("duplicate key '" + key + "'", key_line);
    Entry entry;
    entry.raw = value;
    entry.line = key_line;
    // Paths and mode names are taken verbatim.
    if (key != "file" && key != "mode" && key != "name")
      entry.value = ValueParser(value, key_line).parse();
    sec.emplace(key, std::move(entry));
  }

  Scenario s;
  const Section empty;
  auto section = [&](const std::string& name) -> const Section& {
    auto it = sections.find(name);
    return it == sections.end() ? empty : it->second;
  };
  auto line_of = [&](const std::string& name) {
    auto it = section_lines.find(name);
    return it == section_lines.end() ? 0 : it->second;
  };

  const Section& sim = section("simulation");
  if (const Entry* e = find(sim, "mode")) {
    if (e->raw == "output_sync")
      s.mode = ProtocolMode::output_sync;
    else if (e->raw == "regulated")
      s.mode = ProtocolMode::regulated;
    else
      throw ParseError("mode must be output_sync or regulated", e->line);
  }
  if (const Entry* e = find(sim, "T")) s.T = to_number(e->value, e->line);
  if (const Entry* e = find(sim, "dt")) s.dt = to_number(e->value, e->line);
  if (const Entry* e = find(sim, "seed")) {
    const double v = to_number(e->value, e->line);
    if (v < 0 || v != std::floor(v)) throw ParseError("seed must be a nonnegative integer", e->line);
    s.seed = static_cast<std::uint64_t>(v);
  }
  if (const Entry* e = find(sim, "name")) s.name = e->raw;

  std::map<int, std::string> agent_sections;
  for (const auto& [name, sec] : sections) {
    if (section_kind(name) != "agent") continue;
    char* end = nullptr;
    const std::string idx = name.substr(6);
    const long i = std::strtol(idx.c_str(), &end, 10);
    if (idx.empty() || *end != '\0' || i < 1)
      throw ParseError("agent sections are named [agent.<1-based index>]", line_of(name));
    agent_sections[static_cast<int>(i)] = name;
  }
  int expected = 1;
  for (const auto& [i, name] : agent_sections) {
    if (i != expected)
      throw ParseError("agent indices must be consecutive from 1; missing agent " +
                           std::to_string(expected),
                       line_of(name));
    ++expected;
    const Section& sec = sections.at(name);
    const int sl = line_of(name);
    LtiAgent a;
    a.id = i;
    const Entry& ea = require(sec, name, "A", sl);
    const Entry& eb = require(sec, name, "B", sl);
    const Entry& ec = require(sec, name, "C", sl);
    a.A = to_matrix(ea.value, ea.line);
    a.B = to_matrix(eb.value, eb.line);
    a.C = to_matrix(ec.value, ec.line);
    const Entry* em = find(sec, "Cm");
    if (!em || (!em->value.is_list && em->value.atom == "I"))
      a.Cm = Matrix::Identity(a.A.rows(), a.A.rows());
    else
      a.Cm = to_matrix(em->value, em->line);
    Vector x0;
    if (const Entry* ex = find(sec, "x0")) x0 = to_vector(ex->value, ex->line);
    s.agents.push_back(std::move(a));
    s.x0.push_back(std::move(x0));
  }
  if (s.agents.empty()) throw ParseError("scenario defines no [agent.<i>] sections", 0);
  const int n = static_cast<int>(s.agents.size());

  if (sections.count("graph")) {
    const Section& g = sections.at("graph");
    const Entry* file = find(g, "file");
    int nodes = n;
    if (const Entry* e = find(g, "nodes")) nodes = to_int(e->value, e->line);
    if (file) {
      if (graph_line_count > 0)
        throw ParseError("[graph] has both 'file' and inline edges", file->line);
      fs::path p(file->raw);
      if (p.is_relative()) p = fs::path(base_dir) / p;
      try {
        s.graph = parse_edge_list(read_file(p.string()), nodes);
      } catch (const ParseError& e) {
        throw ParseError(p.string() + ": " + e.what(), 0);
      }
    } else {
      s.graph = parse_edge_list(graph_lines, nodes);
    }
  } else if (n == 1) {
    s.graph = DiGraph(Matrix::Zero(1, 1));
  } else {
    throw ParseError("scenario with several agents needs a [graph] section", 0);
  }

  if (sections.count("rootset")) {
    const Section& r = sections.at("rootset");
    const Entry& m = require(r, "rootset", "members", line_of("rootset"));
    std::vector<int> members;
    const Node& list = m.value;
    if (!list.is_list) {
      members.push_back(to_int(list, m.line) - 1);
    } else {
      for (const Node& item : list.items) members.push_back(to_int(item, m.line) - 1);
    }
    for (int k : members)
      if (k < 0 || k >= n) throw ParseError("root-set member out of range", m.line);
    try {
      s.roots = RootSet(members);
    } catch (const Error& e) {
      throw ParseError(e.what(), m.line);
    }
  }

  if (sections.count("exosystem")) {
    const Section& e = sections.at("exosystem");
    const int sl = line_of("exosystem");
    Exosystem exo;
    const Entry& ar = require(e, "exosystem", "Ar", sl);
    const Entry& cr = require(e, "exosystem", "Cr", sl);
    exo.Ar = to_matrix(ar.value, ar.line);
    exo.Cr = to_matrix(cr.value, cr.line);
    if (const Entry* x = find(e, "x0")) exo.xr0 = to_vector(x->value, x->line);
    else exo.xr0 = Vector::Zero(exo.Ar.rows());
    s.exosystem = std::move(exo);
  }

  if (sections.count("target")) {
    const Section& t = sections.at("target");
    const int sl = line_of("target");
    TargetModel tm;
    const Entry& ea = require(t, "target", "A", sl);
    const Entry& eb = require(t, "target", "B", sl);
    const Entry& ec = require(t, "target", "C", sl);
    tm.A = to_matrix(ea.value, ea.line);
    tm.B = to_matrix(eb.value, eb.line);
    tm.C = to_matrix(ec.value, ec.line);
    tm.nq = static_cast<int>(tm.A.rows());
    if (const Entry* q = find(t, "nq")) tm.nq = to_int(q->value, q->line);
    s.target = std::move(tm);
  }

  if (sections.count("gains")) {
    const Section& g = sections.at("gains");
    if (const Entry* e = find(g, "k_poles")) s.k_poles = to_complex_list(e->value, e->line);
    if (const Entry* e = find(g, "h_poles")) s.h_poles = to_complex_list(e->value, e->line);
  }
  return s;
}

Scenario parse_scenario(const std::string& path) {
  const fs::path p(path);
  Scenario s = parse_scenario_text(read_file(path), p.parent_path().string());
  if (s.name.empty()) s.name = p.stem().string();
  validate_scenario(s);
  return s;
}

std::string check_report(const Scenario& s) {
  std::ostringstream os;
  os << "scenario: " << (s.name.empty() ? "(unnamed)" : s.name) << '\n';
  os << "mode: " << to_string(s.mode) << '\n';
  os << "agents: " << s.agents.size() << '\n';
  bool degree_ok = true;
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const LtiAgent& a = s.agents[i];
    os << "agent " << (i + 1) << ": n=" << a.states() << " m=" << a.inputs()
       << " p=" << a.outputs() << " q=" << a.measurements();
    try {
      a.validate();
      const SpectralReport r = analyze(a);
      os << " relative_degree=" << r.infinite_zero_order
         << " stabilizable=" << yes_no(r.stabilizable) << " detectable=" << yes_no(r.detectable)
         << " right_invertible=" << yes_no(r.right_invertible)
         << " measurement_detectable="
         << yes_no(pbh_test(a, PbhMode::detectable, Observation::measurement))
         << " zeros=" << complex_list_text(r.invariant_zeros);
    } catch (const Error& e) {
      degree_ok = false;
      os << " error=\"" << e.what() << '"';
    }
    os << '\n';
  }
  os << "graph: nodes=" << s.graph.nodes() << " edges=" << s.graph.edges().size()
     << " spanning_tree=" << yes_no(s.graph.nodes() > 0 && contains_spanning_tree(s.graph));
  if (s.roots) {
    os << " rootset={";
    for (std::size_t k = 0; k < s.roots->members().size(); ++k)
      os << (k ? "," : "") << s.roots->members()[k] + 1;
    os << "} rootset_connected=" << yes_no(is_rootset_connected(s.graph, *s.roots));
  }
  os << '\n';
  if (degree_ok && !s.agents.empty()) {
    try {
      os << "nbar_d=" << max_relative_degree(s.agents) << '\n';
    } catch (const Error& e) {
      os << "nbar_d=unavailable (" << e.what() << ")\n";
    }
  }
  const std::vector<std::string> diag = scenario_diagnostics(s);
  if (diag.empty()) {
    os << "status: ok\n";
  } else {
    os << "status: violations\n";
    for (const std::string& d : diag) os << "  - " << d << '\n';
  }
  return os.str();
}

}  // namespace sfsync
