#include "nctwist/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nctwist {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("triple document: " + where + ": " + what);
}

ojson matrix_to_json(const CMatrix& m) {
  ojson rows = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(ojson::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a finite number");
  double x = v.get<double>();
  if (!std::isfinite(x)) fail(where, "non-finite value");
  return x;
}

CMatrix matrix_from_json(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(v.size());
  Eigen::Index cols = -1;
  CMatrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    if (!row.is_array()) fail(where, "row " + std::to_string(r) + " is not an array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      if (cols == 0) fail(where, "empty row");
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      fail(where, "ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2)
        fail(where, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                        ") is not an [re, im] pair");
      std::string entry = where + "(" + std::to_string(r) + "," + std::to_string(c) + ")";
      m(r, c) = Complex(number_at(e[0], entry), number_at(e[1], entry));
    }
  }
  return m;
}

CMatrix square_matrix(const json& v, Eigen::Index n, const std::string& where) {
  CMatrix m = matrix_from_json(v, where);
  if (m.rows() != m.cols()) fail(where, "matrix is not square");
  if (n > 0 && m.rows() != n)
    fail(where, "dimension " + std::to_string(m.rows()) + " does not match " + std::to_string(n));
  return m;
}

}  // namespace

ojson serialize(const TwistedTriple& t) {
  ojson doc;
  doc["schema"] = kTripleSchema;
  ojson algebra;
  ojson summands = ojson::array();
  for (const Summand& s : t.algebra.summands)
    summands.push_back(ojson{{"field", std::string(1, s.field)}, {"k", s.k}});
  algebra["summands"] = std::move(summands);
  ojson basis = ojson::array();
  for (const CMatrix& b : t.algebra.rep_basis) basis.push_back(matrix_to_json(b));
  algebra["rep_basis"] = std::move(basis);
  doc["algebra"] = std::move(algebra);
  doc["D"] = matrix_to_json(t.dirac());
  doc["J"] = ojson{{"matrix", matrix_to_json(t.J.mat)}, {"parity", "antilinear"}};
  if (t.grading) doc["gamma"] = matrix_to_json(*t.grading);
  ojson twists = ojson::array();
  for (const TwistComponent& c : t.components)
    twists.push_back(ojson{{"D_l", matrix_to_json(c.dirac)}, {"nu_l", matrix_to_json(c.twist)}});
  doc["twists"] = std::move(twists);
  doc["metadata"] = ojson{{"name", t.name}};
  return doc;
}

TwistedTriple deserialize(const json& doc) {
  if (!doc.is_object()) fail("root", "expected an object");
  if (!doc.contains("schema") || !doc["schema"].is_string())
    fail("schema", "missing schema id");
  if (doc["schema"].get<std::string>() != kTripleSchema)
    fail("schema", "unsupported schema '" + doc["schema"].get<std::string>() + "', expected " +
                       std::string(kTripleSchema));
  for (const char* field : {"algebra", "D", "J", "twists"})
    if (!doc.contains(field)) fail(field, "missing required field");

  TwistedTriple t;

  const json& jj = doc["J"];
  if (!jj.is_object() || !jj.contains("matrix") || !jj.contains("parity"))
    fail("J", "expected {matrix, parity}");
  if (!jj["parity"].is_string() || jj["parity"].get<std::string>() != "antilinear")
    fail("J.parity", "only antilinear real structures are supported");
  CMatrix f = square_matrix(jj["matrix"], 0, "J.matrix");
  const Eigen::Index n = f.rows();
  t.J = Op::antilin(f);

  const json& alg = doc["algebra"];
  if (!alg.is_object() || !alg.contains("summands") || !alg.contains("rep_basis"))
    fail("algebra", "expected {summands, rep_basis}");
  if (!alg["summands"].is_array()) fail("algebra.summands", "expected an array");
  for (std::size_t i = 0; i < alg["summands"].size(); ++i) {
    const json& s = alg["summands"][i];
    std::string where = "algebra.summands[" + std::to_string(i) + "]";
    if (!s.is_object() || !s.contains("field") || !s.contains("k")) fail(where, "expected {field, k}");
    std::string fld = s["field"].get<std::string>();
    if (fld != "R" && fld != "C" && fld != "H") fail(where + ".field", "expected R, C or H");
    if (!s["k"].is_number_integer() || s["k"].get<int>() < 1)
      fail(where + ".k", "expected a positive integer");
    t.algebra.summands.push_back(Summand{fld[0], s["k"].get<int>()});
  }
  if (!alg["rep_basis"].is_array() || alg["rep_basis"].empty())
    fail("algebra.rep_basis", "expected a non-empty array");
  for (std::size_t i = 0; i < alg["rep_basis"].size(); ++i)
    t.algebra.rep_basis.push_back(
        square_matrix(alg["rep_basis"][i], n, "algebra.rep_basis[" + std::to_string(i) + "]"));

  CMatrix d_total = square_matrix(doc["D"], n, "D");

  if (doc.contains("gamma") && !doc["gamma"].is_null())
    t.grading = square_matrix(doc["gamma"], n, "gamma");

  if (!doc["twists"].is_array() || doc["twists"].empty())
    fail("twists", "expected a non-empty array");
  for (std::size_t i = 0; i < doc["twists"].size(); ++i) {
    const json& c = doc["twists"][i];
    std::string where = "twists[" + std::to_string(i) + "]";
    if (!c.is_object() || !c.contains("D_l") || !c.contains("nu_l"))
      fail(where, "expected {D_l, nu_l}");
    t.components.push_back(TwistComponent{square_matrix(c["D_l"], n, where + ".D_l"),
                                          square_matrix(c["nu_l"], n, where + ".nu_l")});
  }

  if (doc.contains("metadata") && doc["metadata"].is_object()) {
    const json& meta = doc["metadata"];
    if (meta.contains("name") && meta["name"].is_string())
      t.name = meta["name"].get<std::string>();
  }

  Tolerance tol;
  double sa = (d_total - d_total.adjoint()).norm();
  if (sa > tol.threshold(d_total.norm(), d_total.norm())) {
    std::ostringstream msg;
    msg << "total D is not self-adjoint (defect " << sa << ")";
    fail("D", msg.str());
  }
  CMatrix sum = t.dirac();
  double gap = (sum - d_total).norm();
  if (gap > tol.threshold(d_total.norm(), sum.norm())) {
    std::ostringstream msg;
    msg << "component sum disagrees with D (gap " << gap << ")";
    fail("twists", msg.str());
  }
  return t;
}

std::string write_triple(const TwistedTriple& t) { return serialize(t).dump(2) + "\n"; }

TwistedTriple read_triple(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("triple document: JSON parse error: ") + e.what());
  }
  return deserialize(doc);
}

TwistedTriple load_triple_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_triple(buf.str());
}

void save_triple_file(const TwistedTriple& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
  out << write_triple(t);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace nctwist
