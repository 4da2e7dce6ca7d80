#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "imexllg/error.hpp"
#include "imexllg/tableau.hpp"

namespace llg {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<double> parse_numbers(const std::string& text, int line_no) {
  std::istringstream ss(text);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": not a number: '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

void write_row(std::ostream& os, const char* key, const std::vector<double>& v) {
  os << key << " =";
  for (double x : v) os << ' ' << x;
  os << '\n';
}

}  // namespace

ImexTableau parse_tableau(std::istream& in) {
  std::map<std::string, std::vector<std::vector<double>>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = values'");
    }
    const std::string key = trim(line.substr(0, eq));
    static const char* const kKeys[] = {"s", "A", "A_explicit", "b", "b_explicit", "c",
                                        "c_explicit"};
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    entries[key].push_back(parse_numbers(line.substr(eq + 1), line_no));
  }

  auto single = [&](const std::string& key) -> const std::vector<double>& {
    const auto it = entries.find(key);
    if (it == entries.end()) throw ParseError("missing key '" + key + "'");
    if (it->second.size() != 1) throw ParseError("key '" + key + "' given more than once");
    return it->second.front();
  };

  const auto& s_entry = single("s");
  if (s_entry.size() != 1 || s_entry[0] < 1 || s_entry[0] != static_cast<int>(s_entry[0])) {
    throw ParseError("'s' must be one positive integer");
  }
  const int s = static_cast<int>(s_entry[0]);
  ImexTableau t = ImexTableau::zeros(s);

  auto read_matrix = [&](const std::string& key, CoefficientMatrix& m) {
    const auto it = entries.find(key);
    if (it == entries.end()) throw ParseError("missing key '" + key + "'");
    if (static_cast<int>(it->second.size()) != s) {
      throw ParseError("'" + key + "' needs " + std::to_string(s) + " rows");
    }
    for (int i = 0; i < s; ++i) {
      const auto& row = it->second[i];
      if (static_cast<int>(row.size()) != s) {
        throw ParseError("'" + key + "' row " + std::to_string(i + 1) + " needs " +
                         std::to_string(s) + " entries");
      }
      for (int j = 0; j < s; ++j) m(i, j) = row[j];
    }
  };
  auto read_vector = [&](const std::string& key) {
    const auto& v = single(key);
    if (static_cast<int>(v.size()) != s) {
      throw ParseError("'" + key + "' needs " + std::to_string(s) + " entries");
    }
    return v;
  };

  read_matrix("A", t.a_implicit);
  read_matrix("A_explicit", t.a_explicit);
  t.b = read_vector("b");
  t.c = read_vector("c");
  t.b_tilde = entries.count("b_explicit") ? read_vector("b_explicit") : t.b;
  t.c_tilde = entries.count("c_explicit") ? read_vector("c_explicit") : t.c;
  return t;
}

ImexTableau load_tableau(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open tableau file '" + path + "'");
  return parse_tableau(in);
}

void write_tableau(std::ostream& os, const ImexTableau& t) {
  const auto old = os.precision(17);
  os << "s = " << t.s << '\n';
  for (int i = 0; i < t.s; ++i) {
    std::vector<double> row(t.s);
    for (int j = 0; j < t.s; ++j) row[j] = t.a_implicit(i, j);
    write_row(os, "A", row);
  }
  for (int i = 0; i < t.s; ++i) {
    std::vector<double> row(t.s);
    for (int j = 0; j < t.s; ++j) row[j] = t.a_explicit(i, j);
    write_row(os, "A_explicit", row);
  }
  write_row(os, "b", t.b);
  write_row(os, "b_explicit", t.b_tilde);
  write_row(os, "c", t.c);
  write_row(os, "c_explicit", t.c_tilde);
  os.precision(old);
}

void write_residual_csv(std::ostream& os, const std::vector<OrderResidual>& residuals) {
  const auto old = os.precision(17);
  os << "condition_name,lhs,rhs,residual\n";
  for (const auto& r : residuals) {
    os << r.name << ',' << r.lhs << ',' << r.rhs << ',' << r.residual << '\n';
  }
  os.precision(old);
}

}  // namespace llg
