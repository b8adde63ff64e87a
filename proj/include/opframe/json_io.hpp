// Copyright 2026 The opframe authors
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

#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "opframe/frames.hpp"
#include "opframe/quasiprob.hpp"

namespace opframe {

using Json = nlohmann::json;

/// Operator interchange format:
///   {"factors": [d1, ...], "re": [[...], ...], "im": [[...], ...]}
/// with row-major matrices. Readers reject non-square or mismatched shapes.
inline Json operator_to_json(const Operator& op) {
  Json j;
  j["factors"] = Json::array();
  for (Index f : op.factors()) j["factors"].push_back(f);
  Json re = Json::array(), im = Json::array();
  for (Index r = 0; r < op.dim(); ++r) {
    Json re_row = Json::array(), im_row = Json::array();
    for (Index c = 0; c < op.dim(); ++c) {
      re_row.push_back(op.matrix()(r, c).real());
      im_row.push_back(op.matrix()(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

inline Operator operator_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("factors") || !j.contains("re") || !j.contains("im"))
    throw std::invalid_argument("operator JSON must contain 'factors', 're' and 'im'");
  std::vector<Index> factors;
  Index total = 1;
  for (const auto& f : j.at("factors")) {
    const Index d = f.get<Index>();
    if (d <= 0) throw std::invalid_argument("operator JSON: factor dims must be positive");
    factors.push_back(d);
    total *= d;
  }
  const Json& re = j.at("re");
  const Json& im = j.at("im");
  if (!re.is_array() || !im.is_array() || re.size() != im.size())
    throw std::invalid_argument("operator JSON: 're' and 'im' shapes do not match");
  const Index n = static_cast<Index>(re.size());
  if (n != total)
    throw std::invalid_argument("operator JSON: matrix side does not equal the factor product");
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const Json& re_row = re.at(r);
    const Json& im_row = im.at(r);
    if (static_cast<Index>(re_row.size()) != n || static_cast<Index>(im_row.size()) != n)
      throw std::invalid_argument("operator JSON: matrix is not square");
    for (Index c = 0; c < n; ++c)
      m(r, c) = Complex(re_row.at(c).get<double>(), im_row.at(c).get<double>());
  }
  return Operator(std::move(m), std::move(factors));
}

inline Operator read_operator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  Json j = Json::parse(in);  // throws with byte location on malformed input
  return operator_from_json(j);
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

inline IndexScheme index_scheme_from_string(const std::string& s) {
  if (s == "single") return IndexScheme::single;
  if (s == "pair") return IndexScheme::pair;
  if (s == "phase_point") return IndexScheme::phase_point;
  throw std::invalid_argument("unknown index scheme '" + s + "'");
}

inline FrameFlavor frame_flavor_from_string(const std::string& s) {
  if (s == "orthogonal_basis") return FrameFlavor::orthogonal_basis;
  if (s == "quasi_probability") return FrameFlavor::quasi_probability;
  if (s == "povm") return FrameFlavor::povm;
  throw std::invalid_argument("unknown frame flavor '" + s + "'");
}

inline Json frame_to_json(const OperatorFrame& f, bool include_duals = true) {
  Json j;
  j["name"] = f.name();
  j["dim"] = f.dim();
  j["index_scheme"] = to_string(f.index_scheme());
  j["flavor"] = to_string(f.flavor());
  j["elements"] = Json::array();
  for (const Operator& e : f.elements()) j["elements"].push_back(operator_to_json(e));
  if (include_duals && f.has_duals()) {
    j["duals"] = Json::array();
    for (const Operator& r : f.duals()) j["duals"].push_back(operator_to_json(r));
  }
  if (f.has_weights()) {
    j["weights"] = Json::array();
    for (const Complex& w : f.weights()) j["weights"].push_back({w.real(), w.imag()});
  }
  j["labels"] = Json::array();
  for (const auto& l : f.labels()) j["labels"].push_back({l[0], l[1]});
  return j;
}

inline OperatorFrame frame_from_json(const Json& j, const Tolerance& tol = Tolerance::defaults()) {
  OperatorFrame::Spec spec;
  spec.name = j.value("name", std::string("custom"));
  spec.dim = j.at("dim").get<Index>();
  spec.scheme = index_scheme_from_string(j.at("index_scheme").get<std::string>());
  spec.flavor = frame_flavor_from_string(j.at("flavor").get<std::string>());
  for (const auto& e : j.at("elements")) spec.elements.push_back(operator_from_json(e));
  if (j.contains("duals"))
    for (const auto& r : j.at("duals")) spec.duals.push_back(operator_from_json(r));
  if (j.contains("weights"))
    for (const auto& w : j.at("weights"))
      spec.weights.push_back(Complex(w.at(0).get<double>(), w.at(1).get<double>()));
  if (j.contains("labels"))
    for (const auto& l : j.at("labels"))
      spec.labels.push_back({l.at(0).get<int>(), l.at(1).get<int>()});
  return OperatorFrame::assemble(std::move(spec), tol);
}

inline Json tolerance_to_json(const Tolerance& tol) {
  return Json{{"absolute", tol.absolute}, {"relative", tol.relative}};
}

inline Json condition_report_to_json(const ConditionReport& rep) {
  Json j;
  j["positivity"] = {{"ok", rep.positivity.ok},
                     {"min_eigenvalue", rep.positivity.witness},
                     {"argmin_index", rep.positivity.index},
                     {"max_asymmetry", rep.max_asymmetry},
                     {"asymmetry_index", rep.asymmetry_index}};
  j["orthogonality"] = {{"ok", rep.orthogonality.ok},
                        {"max_dual_overlap", rep.orthogonality.witness},
                        {"element_overlap", rep.element_overlap},
                        {"scaling_residual", rep.scaling_residual}};
  j["completeness"] = {{"ok", rep.completeness.ok}, {"rank", rep.rank}};
  j["satisfied_count"] = rep.satisfied_count;
  return j;
}

inline Json no_go_to_json(const NoGoCertificate& cert) {
  Json j;
  j["kind"] = to_string(cert.kind);
  j["index"] = cert.index;
  switch (cert.kind) {
    case NoGoCertificate::Kind::dual_negativity:
    case NoGoCertificate::Kind::element_negativity: {
      j["negative_eigenvalue"] = cert.negative_eigenvalue;
      Json re = Json::array(), im = Json::array();
      for (Index k = 0; k < cert.eigenvector.size(); ++k) {
        re.push_back(cert.eigenvector(k).real());
        im.push_back(cert.eigenvector(k).imag());
      }
      j["eigenvector_re"] = std::move(re);
      j["eigenvector_im"] = std::move(im);
      break;
    }
    case NoGoCertificate::Kind::nonhermitian_element:
      j["asymmetry"] = cert.asymmetry;
      break;
    case NoGoCertificate::Kind::rank_deficit:
      j["rank"] = cert.rank;
      j["deficit"] = cert.deficit;
      break;
  }
  j["satisfied_count"] = cert.report.satisfied_count;
  return j;
}

/// CSV dump of a quasi-probability distribution. Pair and phase-point
/// schemes get two label columns; complex values are split into re/im.
inline std::string distribution_to_csv(const OperatorFrame& frame, const QuasiDistribution& q) {
  std::string header = "index,re,im\n";
  if (frame.index_scheme() == IndexScheme::pair) header = "index,a,b,re,im\n";
  if (frame.index_scheme() == IndexScheme::phase_point) header = "index,q,p,re,im\n";
  std::string csv = header;
  for (std::size_t i = 0; i < q.values.size(); ++i) {
    csv += std::to_string(i);
    if (frame.index_scheme() != IndexScheme::single) {
      const auto l = frame.label(i);
      csv += "," + std::to_string(l[0]) + "," + std::to_string(l[1]);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g\n", q.values[i].real(), q.values[i].imag());
    csv += buf;
  }
  return csv;
}

}  // namespace opframe
