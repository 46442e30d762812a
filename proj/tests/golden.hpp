#pragma once

// Reader for the printed two-site Hamiltonians in tests/data. Each file holds
// "# prefactor p/q" followed by "<sign><factor> <operator>" lines, where the
// operator is a Pauli string or "lA lB" (site 1 first).

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace golden {

struct Term {
  double coeff;
  std::string op;
};

inline double symbol(const std::string& s) {
  static const std::map<std::string, double> table = {
      {"c", std::sqrt(3.0)},        {"f", 2.0 / std::sqrt(3.0)},  {"a", std::sqrt(3.0) / 2.0},
      {"b1", 2.0 / std::sqrt(3.0)}, {"b2", 1.0 / std::sqrt(3.0)}, {"b3", std::sqrt(2.0 / 3.0)},
      {"sqrt2", std::sqrt(2.0)}};
  if (auto it = table.find(s); it != table.end()) return it->second;
  if (auto slash = s.find('/'); slash != std::string::npos)
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
  return std::stod(s);
}

inline std::vector<Term> load(const std::string& name) {
  std::ifstream in(std::string(SPINENC_TEST_DATA) + "/" + name + ".txt");
  if (!in) throw std::runtime_error("missing golden file " + name);
  std::vector<Term> out;
  double prefactor = 1.0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# prefactor ", 0) == 0) {
      prefactor = symbol(line.substr(12));
      continue;
    }
    const auto space = line.find(' ');
    const double sign = line[0] == '-' ? -1.0 : 1.0;
    out.push_back({sign * prefactor * symbol(line.substr(1, space - 1)), line.substr(space + 1)});
  }
  return out;
}

}  // namespace golden
