#include "tables.hpp"

#include <array>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace sbpwave::detail {

double parse_number(const std::string& tok) {
  const auto slash = tok.find('/');
  char* end = nullptr;
  if (slash == std::string::npos) {
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw std::runtime_error("bad number in table: " + tok);
    return v;
  }
  const std::string a = tok.substr(0, slash), b = tok.substr(slash + 1);
  const double num = std::strtod(a.c_str(), &end);
  if (*end != '\0') throw std::runtime_error("bad numerator in table: " + tok);
  const double den = std::strtod(b.c_str(), &end);
  if (*end != '\0' || den == 0.0) throw std::runtime_error("bad denominator in table: " + tok);
  return num / den;
}

namespace {

struct Line {
  std::string key;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    if (raw.empty() || raw[0] == '#') continue;
    std::istringstream ls(raw);
    Line l;
    if (!(ls >> l.key)) continue;
    std::string t;
    while (ls >> t) l.tokens.push_back(t);
    out.push_back(std::move(l));
  }
  return out;
}

std::vector<double> numbers(const Line& l) {
  std::vector<double> v;
  v.reserve(l.tokens.size());
  for (const auto& t : l.tokens) v.push_back(parse_number(t));
  return v;
}

const std::string& raw_table(const std::string& name) {
  const auto& all = operator_tables();
  auto it = all.find(name);
  if (it == all.end()) throw std::runtime_error("missing operator table " + name);
  return it->second;
}

ConstantTable load_constant(int p) {
  ConstantTable t;
  for (const auto& l : tokenize(raw_table("constant_p" + std::to_string(p)))) {
    if (l.key == "H") t.H = numbers(l);
    else if (l.key == "d1") t.d1 = numbers(l);
    else if (l.key == "interior") t.interior = numbers(l);
    else if (l.key == "M") t.M.push_back(numbers(l));
    else throw std::runtime_error("unknown key in constant table: " + l.key);
  }
  if (t.H.empty() || t.d1.empty() || t.interior.size() != static_cast<size_t>(2 * p + 1) || t.M.empty())
    throw std::runtime_error("incomplete constant table for p=" + std::to_string(p));
  return t;
}

VariableTable load_variable(int p) {
  VariableTable t;
  const auto lines = tokenize(raw_table("variable_p" + std::to_string(p)));
  std::vector<Correction> full;
  for (size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.key == "closure") {
      t.closure = std::stoi(l.tokens.at(0));
    } else if (l.key == "interior") {
      t.interior.push_back(numbers(l));
    } else if (l.key == "template") {
      Correction c;
      c.k = std::stoi(l.tokens.at(0));
      c.first = std::stoi(l.tokens.at(1));
      const int m = std::stoi(l.tokens.at(2));
      for (int r = 0; r < m; ++r) {
        const auto& row = lines.at(++i);
        if (row.key != "row") throw std::runtime_error("expected template row");
        c.block.push_back(numbers(row));
        if (c.block.back().size() != static_cast<size_t>(m)) throw std::runtime_error("ragged template");
      }
      full.push_back(std::move(c));
    } else {
      throw std::runtime_error("unknown key in variable table: " + l.key);
    }
  }
  if (t.interior.size() != static_cast<size_t>(2 * p + 1)) throw std::runtime_error("bad interior template");
  // subtract the central template so that only boundary corrections remain
  for (auto& c : full) {
    if (c.k >= p) {
      for (int a = 0; a <= 2 * p; ++a)
        for (int b = 0; b <= 2 * p; ++b) {
          const int i = c.k - p + a - c.first, j = c.k - p + b - c.first;
          if (i < 0 || j < 0 || i >= static_cast<int>(c.block.size()) || j >= static_cast<int>(c.block.size()))
            throw std::runtime_error("template does not cover its central stencil");
          c.block[i][j] -= t.interior[a][b];
        }
    }
    bool any = false;
    for (const auto& r : c.block)
      for (double v : r) any = any || v != 0.0;
    if (any) t.corrections.push_back(std::move(c));
  }
  return t;
}

}  // namespace

const ConstantTable& constant_table(int p) {
  if (p < 1 || p > 3) throw std::invalid_argument("half-order must be 1, 2 or 3");
  static std::array<ConstantTable, 3> cache;
  static std::array<std::once_flag, 3> flags;
  std::call_once(flags[p - 1], [p] { cache[p - 1] = load_constant(p); });
  return cache[p - 1];
}

const VariableTable& variable_table(int p) {
  if (p < 1 || p > 3) throw std::invalid_argument("half-order must be 1, 2 or 3");
  static std::array<VariableTable, 3> cache;
  static std::array<std::once_flag, 3> flags;
  std::call_once(flags[p - 1], [p] { cache[p - 1] = load_variable(p); });
  return cache[p - 1];
}

}  // namespace sbpwave::detail
