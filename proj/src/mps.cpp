#include "rgsc/mps.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace rgsc {

namespace {

/// Shortest %g rendering that fits the 12-character numeric field.
std::string number(double v) {
  char buf[40];
  for (int prec = 12; prec >= 1; --prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::char_traits<char>::length(buf) <= 12) return buf;
  }
  throw std::runtime_error("mps: value does not fit a 12-character field");
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

/// Field layout: columns 2-3, 5-12, 15-22, 25-36, 40-47, 50-61.
std::string line(const std::string& code, const std::string& f1, const std::string& f2 = {},
                 const std::string& f3 = {}, const std::string& f4 = {},
                 const std::string& f5 = {}) {
  std::string out = " " + pad(code, 2) + " " + pad(f1, 8) + "  " + pad(f2, 8) + "  " +
                    pad(f3, 12) + "   " + pad(f4, 8) + "  " + f5;
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string col_name(const LinearProgram& lp, int j) {
  return j < static_cast<int>(lp.col_names.size()) && !lp.col_names[j].empty()
             ? lp.col_names[j]
             : "C" + std::to_string(j + 1);
}
std::string row_name(const LinearProgram& lp, int r) {
  return r < static_cast<int>(lp.row_names.size()) && !lp.row_names[r].empty()
             ? lp.row_names[r]
             : "R" + std::to_string(r + 1);
}

enum class RowType { N, L, G, E };

RowType row_type(const LinearProgram& lp, int r) {
  const double lo = lp.row_lower[r], hi = lp.row_upper[r];
  if (lo == hi) return RowType::E;
  if (std::isinf(lo) && std::isinf(hi)) return RowType::N;
  if (std::isinf(lo)) return RowType::L;
  return RowType::G;
}

}  // namespace

void write_mps(const LinearProgram& lp, std::ostream& out) {
  const int n = lp.num_cols(), m = lp.num_rows();
  out << "NAME          " << lp.name << "\n";
  out << "ROWS\n";
  out << line("N", "OBJ") << "\n";
  static const char* codes[] = {"N", "L", "G", "E"};
  for (int r = 0; r < m; ++r)
    out << line(codes[static_cast<int>(row_type(lp, r))], row_name(lp, r)) << "\n";

  // Transpose to column-major.
  std::vector<std::vector<std::pair<int, double>>> by_col(n);
  for (int r = 0; r < m; ++r)
    for (std::size_t p = lp.row_start[r]; p < lp.row_start[r + 1]; ++p)
      by_col[lp.row_index[p]].emplace_back(r, lp.row_value[p]);

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < n; ++j) {
    const bool integer = lp.is_integer[j] != 0;
    if (integer != in_int) {
      char name[16];
      std::snprintf(name, sizeof name, "MARKER%02d", marker++ % 100);
      out << line("", name, "'MARKER'", "", integer ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = integer;
    }
    std::vector<std::pair<std::string, double>> entries;
    if (lp.cost[j] != 0.0) entries.emplace_back("OBJ", lp.cost[j]);
    for (const auto& [r, v] : by_col[j]) entries.emplace_back(row_name(lp, r), v);
    const std::string name = col_name(lp, j);
    if (entries.empty()) out << line("", name, "OBJ", "0") << "\n";
    for (std::size_t p = 0; p < entries.size(); p += 2) {
      if (p + 1 < entries.size())
        out << line("", name, entries[p].first, number(entries[p].second), entries[p + 1].first,
                    number(entries[p + 1].second))
            << "\n";
      else
        out << line("", name, entries[p].first, number(entries[p].second)) << "\n";
    }
  }
  if (in_int) {
    char name[16];
    std::snprintf(name, sizeof name, "MARKER%02d", marker % 100);
    out << line("", name, "'MARKER'", "", "'INTEND'") << "\n";
  }

  out << "RHS\n";
  if (lp.objective_offset != 0.0)
    out << line("", "RHS", "OBJ", number(-lp.objective_offset)) << "\n";
  for (int r = 0; r < m; ++r) {
    double rhs = 0.0;
    switch (row_type(lp, r)) {
      case RowType::L: rhs = lp.row_upper[r]; break;
      case RowType::G:
      case RowType::E: rhs = lp.row_lower[r]; break;
      case RowType::N: break;
    }
    if (rhs != 0.0) out << line("", "RHS", row_name(lp, r), number(rhs)) << "\n";
  }

  bool ranges = false;
  for (int r = 0; r < m; ++r) {
    if (row_type(lp, r) != RowType::G || std::isinf(lp.row_upper[r])) continue;
    if (!ranges) out << "RANGES\n";
    ranges = true;
    out << line("", "RNG", row_name(lp, r), number(lp.row_upper[r] - lp.row_lower[r])) << "\n";
  }

  bool bounds = false;
  auto bound = [&](const char* type, const std::string& name, const std::string& value) {
    if (!bounds) out << "BOUNDS\n";
    bounds = true;
    out << line(type, "BND", name, value) << "\n";
  };
  for (int j = 0; j < n; ++j) {
    const double lo = lp.col_lower[j], hi = lp.col_upper[j];
    const std::string name = col_name(lp, j);
    if (lo == hi) {
      bound("FX", name, number(lo));
      continue;
    }
    if (std::isinf(lo) && std::isinf(hi)) {
      bound("FR", name, "");
      continue;
    }
    if (std::isinf(lo)) bound("MI", name, "");
    else if (lo != 0.0) bound("LO", name, number(lo));
    if (!std::isinf(hi)) bound("UP", name, number(hi));
    else if (lp.is_integer[j]) bound("PL", name, "");
  }
  out << "ENDATA\n";
}

std::string to_mps(const LinearProgram& lp) {
  std::ostringstream os;
  write_mps(lp, os);
  return os.str();
}

void write_mps(const LinearProgram& lp, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_mps(lp, f);
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

LinearProgram read_mps(std::istream& in) {
  enum class Section { None, Rows, Columns, Rhs, Ranges, Bounds, End } section = Section::None;
  LinearProgram lp;
  lp.name.clear();
  std::string objective;
  std::unordered_map<std::string, int> rows, cols;
  std::vector<RowType> types;
  std::vector<std::vector<std::pair<int, double>>> row_entries;
  std::vector<double> rhs, range;
  std::vector<char> has_range;
  bool in_int = false;

  std::string text;
  long lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("mps line " + std::to_string(lineno) + ": " + msg);
  };
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) fail("bad number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("bad number '" + s + "'");
    }
    return 0.0;
  };
  auto find_row = [&](const std::string& name) {
    auto it = rows.find(name);
    if (it == rows.end()) fail("unknown row '" + name + "'");
    return it->second;
  };
  auto find_col = [&](const std::string& name) {
    auto it = cols.find(name);
    if (it == cols.end()) fail("unknown column '" + name + "'");
    return it->second;
  };

  while (std::getline(in, text)) {
    ++lineno;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty() || text[0] == '*') continue;
    std::istringstream ss(text);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (text[0] != ' ') {
      const std::string& head = tok[0];
      if (head == "NAME") lp.name = tok.size() > 1 ? tok[1] : "";
      else if (head == "ROWS") section = Section::Rows;
      else if (head == "COLUMNS") section = Section::Columns;
      else if (head == "RHS") section = Section::Rhs;
      else if (head == "RANGES") section = Section::Ranges;
      else if (head == "BOUNDS") section = Section::Bounds;
      else if (head == "ENDATA") {
        section = Section::End;
        break;
      } else fail("unknown section '" + head + "'");
      continue;
    }

    switch (section) {
      case Section::Rows: {
        if (tok.size() != 2) fail("expected row type and name");
        const std::string& t = tok[0];
        if (t == "N") {
          if (objective.empty()) objective = tok[1];
          else rows.emplace(tok[1], -2);  // extra free rows are ignored
          break;
        }
        RowType type;
        if (t == "L") type = RowType::L;
        else if (t == "G") type = RowType::G;
        else if (t == "E") type = RowType::E;
        else fail("unknown row type '" + t + "'");
        if (!rows.emplace(tok[1], static_cast<int>(types.size())).second)
          fail("duplicate row '" + tok[1] + "'");
        types.push_back(type);
        lp.row_names.push_back(tok[1]);
        row_entries.emplace_back();
        rhs.push_back(0.0);
        range.push_back(0.0);
        has_range.push_back(0);
        break;
      }
      case Section::Columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'") in_int = true;
          else if (tok[2] == "'INTEND'") in_int = false;
          else fail("unknown marker " + tok[2]);
          break;
        }
        if (tok.size() != 3 && tok.size() != 5) fail("expected name and 1 or 2 entries");
        int j;
        if (auto it = cols.find(tok[0]); it != cols.end()) {
          j = it->second;
        } else {
          j = lp.add_col(0.0, 0.0, kInf, in_int, tok[0]);
          cols.emplace(tok[0], j);
        }
        for (std::size_t p = 1; p + 1 < tok.size(); p += 2) {
          const double v = to_double(tok[p + 1]);
          if (tok[p] == objective) {
            lp.cost[j] += v;
            continue;
          }
          const int r = find_row(tok[p]);
          if (r >= 0 && v != 0.0) row_entries[r].emplace_back(j, v);
        }
        break;
      }
      case Section::Rhs:
      case Section::Ranges: {
        // The set name is optional in free MPS: odd token count means it is present.
        const std::size_t first = tok.size() % 2 == 1 ? 1 : 0;
        for (std::size_t p = first; p + 1 < tok.size(); p += 2) {
          const double v = to_double(tok[p + 1]);
          if (section == Section::Rhs && tok[p] == objective) {
            lp.objective_offset = -v;
            continue;
          }
          const int r = find_row(tok[p]);
          if (r < 0) continue;
          if (section == Section::Rhs) rhs[r] = v;
          else {
            range[r] = v;
            has_range[r] = 1;
          }
        }
        break;
      }
      case Section::Bounds: {
        if (tok.size() < 3) fail("expected bound type, set and column");
        const std::string& type = tok[0];
        const int j = find_col(tok[2]);
        const bool needs_value = !(type == "FR" || type == "MI" || type == "PL" || type == "BV");
        if (needs_value && tok.size() < 4) fail("bound " + type + " needs a value");
        const double v = needs_value ? to_double(tok[3]) : 0.0;
        if (type == "UP") lp.col_upper[j] = v;
        else if (type == "LO") lp.col_lower[j] = v;
        else if (type == "FX") lp.col_lower[j] = lp.col_upper[j] = v;
        else if (type == "FR") {
          lp.col_lower[j] = -kInf;
          lp.col_upper[j] = kInf;
        } else if (type == "MI") lp.col_lower[j] = -kInf;
        else if (type == "PL") lp.col_upper[j] = kInf;
        else if (type == "BV") {
          lp.col_lower[j] = 0.0;
          lp.col_upper[j] = 1.0;
          lp.is_integer[j] = 1;
        } else if (type == "LI") {
          lp.col_lower[j] = v;
          lp.is_integer[j] = 1;
        } else if (type == "UI") {
          lp.col_upper[j] = v;
          lp.is_integer[j] = 1;
        } else fail("unknown bound type '" + type + "'");
        break;
      }
      default:
        fail("data outside a section");
    }
  }
  if (section != Section::End) throw std::runtime_error("mps: missing ENDATA");

  std::vector<std::string> names = lp.row_names;
  lp.row_names.clear();
  for (std::size_t r = 0; r < types.size(); ++r) {
    double lo = -kInf, hi = kInf;
    switch (types[r]) {
      case RowType::L:
        hi = rhs[r];
        if (has_range[r]) lo = rhs[r] - std::abs(range[r]);
        break;
      case RowType::G:
        lo = rhs[r];
        if (has_range[r]) hi = rhs[r] + std::abs(range[r]);
        break;
      case RowType::E:
        lo = hi = rhs[r];
        if (has_range[r]) (range[r] >= 0 ? hi : lo) = rhs[r] + range[r];
        break;
      case RowType::N:
        break;
    }
    lp.add_row(row_entries[r], lo, hi, names[r]);
  }
  return lp;
}

LinearProgram read_mps(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  return read_mps(f);
}

}  // namespace rgsc
