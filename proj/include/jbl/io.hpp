#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp" // vendored nlohmann single header

#include "jbl/floquet.hpp"
#include "jbl/lattice.hpp"

namespace jbl {

using json = nlohmann::json;

using OperatorSpec = std::variant<PeriodicJacobi, LimitPeriodicFamily>;

// {"q":..,"a":[..],"b":[..]}
json to_json(const PeriodicJacobi& J);
// {"eta":..,"kappa":..,"c0":..,"stages":[..]}
json to_json(const LimitPeriodicFamily& F);
json fiber_to_json(const FloquetFiber& f);

PeriodicJacobi periodic_from_json(const json& j);
LimitPeriodicFamily family_from_json(const json& j);

// Accepts a periodic operator, a stored family, or the constructive
// {"ec_family": {"eta","kappa","depth","base",("c0")}} shorthand.
OperatorSpec operator_from_json(const json& j);

const PeriodicJacobi& deepest(const OperatorSpec& spec);
double spec_class_bound(const OperatorSpec& spec);

// Parse with a line-anchored error message on failure (ValidationError).
json parse_json_text(const std::string& text, const std::string& origin);
json load_json_file(const std::string& path);

// Deterministic CSV: header row, '.' decimal, %.17g doubles, '\n' endings.
class CsvWriter {
public:
  CsvWriter(std::string path, std::vector<std::string> columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  using Cell = std::variant<double, std::int64_t, std::string>;
  void row(const std::vector<Cell>& cells);

private:
  struct Impl;
  Impl* impl_;
};

std::string format_double(double v);
void write_text_file(const std::string& path, const std::string& text);

} // namespace jbl
