#include "jbl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "jbl/defaults.hpp"
#include "jbl/dynamics.hpp"

namespace jbl {

namespace {

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw ValidationError(std::string(what) + ": expected a nonempty array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ValidationError(std::string(what) + ": expected numbers");
    v(i) = j[i].get<double>();
  }
  return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

} // namespace

json to_json(const PeriodicJacobi& J) {
  return json{{"q", J.q}, {"a", vector_to_json(J.a)}, {"b", vector_to_json(J.b)}};
}

json to_json(const LimitPeriodicFamily& F) {
  json stages = json::array();
  for (const auto& s : F.stages) stages.push_back(to_json(s));
  return json{{"eta", F.eta}, {"kappa", F.kappa}, {"c0", F.c0}, {"stages", stages}};
}

json fiber_to_json(const FloquetFiber& f) {
  auto cmat = [](const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
      rows.push_back(row);
    }
    return rows;
  };
  return json{{"q", f.q},
              {"theta", f.theta},
              {"j_theta", cmat(f.j_theta)},
              {"a_theta", cmat(f.a_theta)},
              {"lambdas", vector_to_json(f.lambdas)},
              {"lambda_dots", vector_to_json(f.lambda_dots)},
              {"vectors", cmat(f.vectors)}};
}

PeriodicJacobi periodic_from_json(const json& j) {
  if (!j.is_object() || !j.contains("q") || !j.contains("a") || !j.contains("b"))
    throw ValidationError("operator: expected {\"q\", \"a\", \"b\"}");
  if (!j["q"].is_number_integer())
    throw ValidationError("operator: q must be an integer");
  return PeriodicJacobi(j["q"].get<int>(), vector_from_json(j["a"], "a"),
                        vector_from_json(j["b"], "b"));
}

LimitPeriodicFamily family_from_json(const json& j) {
  if (!j.contains("stages") || !j["stages"].is_array() || j["stages"].empty())
    throw ValidationError("family: expected a nonempty \"stages\" array");
  std::vector<PeriodicJacobi> stages;
  for (const auto& s : j["stages"]) stages.push_back(periodic_from_json(s));
  const double eta = j.value("eta", 1.0);
  const double kappa = j.value("kappa", defaults().ec_kappa);
  const double c0 = j.value("c0", defaults().ec_c0);
  return LimitPeriodicFamily(std::move(stages), eta, kappa, c0);
}

OperatorSpec operator_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("operator: expected an object");
  if (j.contains("ec_family")) {
    const json& e = j["ec_family"];
    if (!e.contains("base"))
      throw ValidationError("ec_family: missing \"base\" operator");
    return build_ec_family(e.value("eta", 1.0),
                           e.value("kappa", defaults().ec_kappa),
                           e.value("depth", 3), periodic_from_json(e["base"]),
                           e.value("c0", defaults().ec_c0));
  }
  if (j.contains("stages")) return family_from_json(j);
  return periodic_from_json(j);
}

const PeriodicJacobi& deepest(const OperatorSpec& spec) {
  if (std::holds_alternative<PeriodicJacobi>(spec))
    return std::get<PeriodicJacobi>(spec);
  return std::get<LimitPeriodicFamily>(spec).deepest();
}

double spec_class_bound(const OperatorSpec& spec) {
  if (std::holds_alternative<PeriodicJacobi>(spec))
    return std::get<PeriodicJacobi>(spec).class_bound();
  return std::get<LimitPeriodicFamily>(spec).class_bound();
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based; count newlines up to it for a line anchor.
    std::size_t line = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < upto; ++i)
      if (text[i] == '\n') ++line;
    std::ostringstream msg;
    msg << origin << ":" << line << ": " << e.what();
    throw ValidationError(msg.str());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
  std::size_t columns = 0;
  std::string path;
};

CsvWriter::CsvWriter(std::string path, std::vector<std::string> columns)
    : impl_(new Impl) {
  impl_->path = path;
  impl_->columns = columns.size();
  impl_->out.open(path, std::ios::binary | std::ios::trunc);
  if (!impl_->out) {
    delete impl_;
    throw ValidationError(path + ": cannot open for writing");
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << columns[i];
  }
  impl_->out << '\n';
}

CsvWriter::~CsvWriter() {
  impl_->out.flush();
  delete impl_;
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != impl_->columns)
    throw ValidationError(impl_->path + ": row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) impl_->out << ',';
    if (std::holds_alternative<double>(cells[i]))
      impl_->out << format_double(std::get<double>(cells[i]));
    else if (std::holds_alternative<std::int64_t>(cells[i]))
      impl_->out << std::get<std::int64_t>(cells[i]);
    else
      impl_->out << std::get<std::string>(cells[i]);
  }
  impl_->out << '\n';
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError(path + ": cannot open for writing");
  out << text;
}

} // namespace jbl
