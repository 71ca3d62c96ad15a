#include "qcommit/json_io.hpp"

#include <stdexcept>

namespace qcommit {

using nlohmann::json;

json to_json(const Mat& m) {
  json j;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  std::vector<double> re(m.a.size()), im(m.a.size());
  for (std::size_t i = 0; i < m.a.size(); ++i) {
    re[i] = m.a[i].real();
    im[i] = m.a[i].imag();
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

Mat mat_from_json(const json& j) {
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != rows * cols || im.size() != rows * cols)
    throw std::invalid_argument("mat_from_json: entry count mismatch");
  Mat m(rows, cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] = cplx(re[i], im[i]);
  return m;
}

json to_json(const PureState& s) {
  json j;
  j["rows"] = s.dim();
  j["cols"] = 1;
  std::vector<double> re(s.dim()), im(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    re[i] = s.amp[i].real();
    im[i] = s.amp[i].imag();
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

PureState pure_from_json(const json& j) {
  const Mat m = mat_from_json(j);
  if (m.cols != 1) throw std::invalid_argument("pure_from_json: not a column");
  return PureState(m.a);
}

json to_json(const Circuit& c) {
  json j;
  j["wires"] = c.wires.factors;
  j["ancillas"] = c.ancilla_count;
  json gates = json::array();
  for (const auto& g : c.gates) {
    json jg;
    jg["matrix"] = to_json(g.matrix);
    jg["targets"] = g.targets;
    gates.push_back(std::move(jg));
  }
  j["gates"] = std::move(gates);
  j["discards"] = c.discards;
  j["split"] = json::array({c.split_o, c.split_g});
  return j;
}

Circuit circuit_from_json(const json& j) {
  Circuit c;
  c.wires = SubsystemShape(j.at("wires").get<std::vector<std::size_t>>());
  c.ancilla_count = j.at("ancillas").get<std::size_t>();
  for (const auto& jg : j.at("gates")) {
    Gate g;
    g.matrix = mat_from_json(jg.at("matrix"));
    g.targets = jg.at("targets").get<std::vector<std::size_t>>();
    c.gates.push_back(std::move(g));
  }
  c.discards = j.at("discards").get<std::vector<std::size_t>>();
  c.split_o = j.at("split").at(0).get<std::vector<std::size_t>>();
  c.split_g = j.at("split").at(1).get<std::vector<std::size_t>>();
  c.validate();
  return c;
}

namespace {

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::yes: return "Y";
    case Kind::no: return "N";
    default: return "raw";
  }
}

Kind kind_from_name(const std::string& s) {
  if (s == "Y") return Kind::yes;
  if (s == "N") return Kind::no;
  if (s == "raw") return Kind::raw;
  throw std::invalid_argument("unknown instance kind: " + s);
}

}  // namespace

json to_json(const QSDInstance& inst) {
  json j;
  j["kind"] = kind_name(inst.kind);
  j["mu"] = inst.mu;
  j["c0"] = to_json(inst.c0);
  j["c1"] = to_json(inst.c1);
  return j;
}

QSDInstance qsd_from_json(const json& j) {
  Circuit c0 = circuit_from_json(j.at("c0"));
  Circuit c1 = circuit_from_json(j.at("c1"));
  return make_qsd_instance(std::move(c0), std::move(c1), j.at("mu").get<double>(),
                           kind_from_name(j.at("kind").get<std::string>()));
}

}  // namespace qcommit
