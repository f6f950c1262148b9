#include "ergokit/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace ergokit {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(errc::parse_error, what);
}

double number_at(const json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  return j.get<double>();
}

int int_at(const json& j, const std::string& what) {
  if (!j.is_number_integer()) bad(what + " must be an integer");
  return j.get<int>();
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) bad("invalid JSON in " + path);
  return j;
}

StochasticKernel kernel_from_json(const json& j) {
  if (!j.is_object()) bad("kernel must be a JSON object");
  if (!j.contains("n")) bad("kernel is missing field n");
  int n = int_at(j.at("n"), "n");
  if (n < 1) bad("n must be >= 1");
  std::string format = j.value("format", std::string("dense"));

  Eigen::MatrixXd rows;
  if (format == "dense") {
    if (!j.contains("rows") || !j.at("rows").is_array())
      bad("dense kernel needs a rows array");
    const json& jr = j.at("rows");
    if (static_cast<int>(jr.size()) != n) bad("rows count differs from n");
    rows.resize(n, n);
    for (int i = 0; i < n; ++i) {
      if (!jr[i].is_array() || static_cast<int>(jr[i].size()) != n)
        bad("row " + std::to_string(i) + " has wrong length");
      for (int c = 0; c < n; ++c)
        rows(i, c) = number_at(jr[i][c], "kernel entry");
    }
  } else if (format == "triplets") {
    if (!j.contains("entries") || !j.at("entries").is_array())
      bad("triplet kernel needs an entries array");
    rows = Eigen::MatrixXd::Zero(n, n);  // unlisted entries are exactly zero
    std::set<std::pair<int, int>> seen;
    for (const json& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 3) bad("entry must be [i, j, p]");
      int r = int_at(e[0], "entry row");
      int c = int_at(e[1], "entry column");
      if (r < 0 || r >= n || c < 0 || c >= n) bad("entry index out of range");
      if (!seen.insert({r, c}).second)
        bad("duplicate entry (" + std::to_string(r) + ", " +
            std::to_string(c) + ")");
      rows(r, c) = number_at(e[2], "entry value");
    }
  } else {
    bad("unknown kernel format " + format);
  }

  std::vector<std::string> labels;
  if (j.contains("labels")) {
    const json& jl = j.at("labels");
    if (!jl.is_array() || static_cast<int>(jl.size()) != n)
      bad("labels must be an array of n strings");
    for (const json& l : jl) {
      if (!l.is_string()) bad("labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return StochasticKernel::validate(std::move(rows), std::move(labels));
}

json kernel_to_json(const StochasticKernel& p) {
  json rows = json::array();
  for (int i = 0; i < p.size(); ++i) {
    json row = json::array();
    for (int c = 0; c < p.size(); ++c) row.push_back(p(i, c));
    rows.push_back(std::move(row));
  }
  json j{{"n", p.size()}, {"format", "dense"}, {"rows", std::move(rows)}};
  if (!p.labels().empty()) j["labels"] = p.labels();
  return j;
}

ProbMeasure measure_from_json(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    bad("measure must be an array of length " + std::to_string(n));
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = number_at(j[i], "measure weight");
  return ProbMeasure::validated(std::move(w));
}

json measure_to_json(const ProbMeasure& mu) {
  json j = json::array();
  for (int i = 0; i < mu.size(); ++i) j.push_back(mu[i]);
  return j;
}

StateFunction function_from_json(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    bad("observable must be an array of length " + std::to_string(n));
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = number_at(j[i], "observable value");
  return StateFunction::of(std::move(v));
}

json function_to_json(const StateFunction& f) {
  json arr = json::array();
  for (int i = 0; i < f.size(); ++i) arr.push_back(f[i]);
  return arr;
}

json state_set_to_json(const StateSet& s) {
  json j = json::array();
  for (int i : s.indices()) j.push_back(i);
  return j;
}

StateSet state_set_from_json(const json& j, int universe) {
  if (!j.is_array()) bad("state set must be an array of indices");
  StateSet s(universe);
  for (const json& e : j) {
    int i = int_at(e, "state index");
    if (i < 0 || i >= universe) bad("state index out of range");
    s.insert(i);
  }
  return s;
}

json analysis_to_json(const ClassDecomposition& dec,
                      const IndecomposabilityCertificate& cert) {
  json classes = json::array();
  for (int k : dec.closed_class_indices())
    classes.push_back(state_set_to_json(dec.classes[k]));
  json j;
  j["closed_classes"] = std::move(classes);
  j["transient"] = state_set_to_json(dec.transient_states);
  bool decomposable =
      cert.verdict == IndecomposabilityCertificate::Verdict::kDecomposable;
  j["verdict"] = decomposable ? "decomposable" : "indecomposable";
  if (cert.witness)
    j["witness"] = {{"A", state_set_to_json(cert.witness->first)},
                    {"B", state_set_to_json(cert.witness->second)}};
  else
    j["witness"] = nullptr;
  return j;
}

IndecomposabilityCertificate indecomposability_from_json(const json& j,
                                                         int n) {
  if (!j.is_object() || !j.contains("verdict")) bad("missing verdict");
  IndecomposabilityCertificate cert;
  std::string verdict = j.at("verdict").get<std::string>();
  if (verdict == "decomposable") {
    cert.verdict = IndecomposabilityCertificate::Verdict::kDecomposable;
    if (!j.contains("witness") || j.at("witness").is_null())
      bad("decomposable certificate needs a witness");
    cert.witness = {state_set_from_json(j.at("witness").at("A"), n),
                    state_set_from_json(j.at("witness").at("B"), n)};
  } else if (verdict == "indecomposable") {
    cert.verdict = IndecomposabilityCertificate::Verdict::kIndecomposable;
  } else {
    bad("unknown verdict " + verdict);
  }
  return cert;
}

json uniqueness_to_json(const UniquenessCertificate& cert) {
  json j;
  if (cert.verdict == UniquenessCertificate::Verdict::kUnique) {
    j["verdict"] = "unique";
    j["measure"] = measure_to_json(*cert.unique_measure);
    j["ergodic"] = *cert.ergodic;
    j["witness"] = nullptr;
  } else {
    j["verdict"] = "multiple";
    j["measure"] = nullptr;
    j["ergodic"] = nullptr;
    const MultiplicityWitness& w = *cert.witness;
    json density = json::array();
    for (int i = 0; i < w.singularity.density.size(); ++i)
      density.push_back(w.singularity.density[i]);
    j["witness"] = {{"mu1", measure_to_json(w.singularity.mu1)},
                    {"mu2", measure_to_json(w.singularity.mu2)},
                    {"separator", state_set_to_json(w.singularity.separator)},
                    {"density", std::move(density)},
                    {"B1", state_set_to_json(w.b1)},
                    {"B2", state_set_to_json(w.b2)}};
  }
  return j;
}

UniquenessCertificate uniqueness_from_json(const json& j, int n) {
  if (!j.is_object() || !j.contains("verdict")) bad("missing verdict");
  UniquenessCertificate cert;
  std::string verdict = j.at("verdict").get<std::string>();
  if (verdict == "unique") {
    cert.verdict = UniquenessCertificate::Verdict::kUnique;
    cert.unique_measure = measure_from_json(j.at("measure"), n);
    if (!j.contains("ergodic") || !j.at("ergodic").is_boolean())
      bad("unique certificate needs an ergodic flag");
    cert.ergodic = j.at("ergodic").get<bool>();
  } else if (verdict == "multiple") {
    cert.verdict = UniquenessCertificate::Verdict::kMultiple;
    if (!j.contains("witness") || j.at("witness").is_null())
      bad("multiple certificate needs a witness");
    const json& w = j.at("witness");
    Eigen::VectorXd density(n);
    const json& jd = w.at("density");
    if (!jd.is_array() || static_cast<int>(jd.size()) != n)
      bad("density must be an array of length n");
    for (int i = 0; i < n; ++i) density[i] = number_at(jd[i], "density value");
    cert.witness = MultiplicityWitness{
        SingularityCertificate{measure_from_json(w.at("mu1"), n),
                               measure_from_json(w.at("mu2"), n),
                               state_set_from_json(w.at("separator"), n),
                               StateFunction::of(std::move(density))},
        state_set_from_json(w.at("B1"), n),
        state_set_from_json(w.at("B2"), n)};
  } else {
    bad("unknown verdict " + verdict);
  }
  return cert;
}

json decomposition_to_json(const ErgodicDecomposition& dec) {
  json comps = json::array();
  for (const auto& c : dec.components)
    comps.push_back({{"weight", c.weight},
                     {"measure", measure_to_json(c.measure)},
                     {"class", state_set_to_json(c.cls)}});
  return json{{"components", std::move(comps)},
              {"residual_error", dec.residual_error}};
}

json stability_to_json(const StabilityReport& report) {
  json obs = json::array();
  for (int i = 0; i < report.observable.size(); ++i)
    obs.push_back(report.observable[i]);
  return json{{"observable", std::move(obs)},
              {"time_average", report.time_average},
              {"target", report.target},
              {"abs_error", report.abs_error},
              {"n", report.n},
              {"seed", report.seed}};
}

std::string format_double(double x) {
  // Shortest-round-trip rendering, identical to the JSON encoder's.
  return json(x).dump();
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream os;
  os << "n,tv\n";
  for (const CurvePoint& pt : curve)
    os << pt.n << "," << format_double(pt.tv) << "\n";
  return os.str();
}

std::string doeblin_to_csv(const DoeblinReport& report) {
  std::ostringstream os;
  os << "n,tv,bound\n";
  for (const DoeblinPoint& pt : report.curve)
    os << pt.n << "," << format_double(pt.tv) << ","
       << format_double(pt.bound) << "\n";
  return os.str();
}

}  // namespace ergokit
