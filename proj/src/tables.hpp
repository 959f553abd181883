#pragma once

// Parsed operator tables (internal).

#include <map>
#include <string>
#include <vector>

namespace sbpwave::detail {

const std::map<std::string, std::string>& operator_tables();

struct ConstantTable {
  std::vector<double> H;         // boundary weights, unit spacing
  std::vector<double> d1;        // boundary derivative stencil, unit spacing
  std::vector<double> interior;  // central second-derivative stencil
  std::vector<std::vector<double>> M;  // boundary rows of h*A from column 0
};

// A boundary correction block added to the central template of node k.
struct Correction {
  int k = 0;
  int first = 0;
  std::vector<std::vector<double>> block;
};

struct VariableTable {
  int closure = 0;
  std::vector<std::vector<double>> interior;  // (2p+1) x (2p+1) nodal template
  std::vector<Correction> corrections;        // nonzero left corrections only
};

const ConstantTable& constant_table(int p);
const VariableTable& variable_table(int p);

// "a/b", integers and decimals.
double parse_number(const std::string& tok);

}  // namespace sbpwave::detail
