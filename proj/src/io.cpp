#include "stoqkit/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace stoqkit::io {

namespace {

const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw FormatError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(where + ": missing field '" + key + "'");
  return *it;
}

int int_field(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) throw FormatError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

double number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw FormatError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw FormatError(where + ": value is not finite");
  return x;
}

const Json& array_field(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_array()) throw FormatError(where + "." + key + ": expected an array");
  return v;
}

void check_version(const Json& j, const std::string& where) {
  const Json& v = field(j, "version", where);
  if (!v.is_string() || v.get<std::string>() != kFormatVersion) {
    throw FormatError(where + ".version: unsupported format version (expected \"1\")");
  }
}

int register_size(const Json& j, const std::string& where) {
  const int n = int_field(j, "n", where);
  if (n < 0 || n > 30) throw FormatError(where + ".n: out of range");
  return n;
}

std::vector<int> qubit_list(const Json& v, const std::string& where) {
  if (!v.is_array()) throw FormatError(where + ": expected an array of qubit indices");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) throw FormatError(where + "[" + std::to_string(i) + "]: expected an integer");
    out.push_back(v[i].get<int>());
  }
  return out;
}

Json dense_to_json(const DenseMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

DenseMatrix dense_from_json(const Json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw FormatError(where + ": expected a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(v.size());
  DenseMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!v[r].is_array() || static_cast<Eigen::Index>(v[r].size()) != n) {
      throw FormatError(rw + ": expected a row of length " + std::to_string(n));
    }
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(v[r][c], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

Json entries_to_json(const OperatorMatrix& m) {
  // Column-major traversal gives a canonical order.
  Json entries = Json::array();
  const SparseMatrix& s = m.sparse();
  for (Eigen::Index col = 0; col < s.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(s, col); it; ++it) {
      entries.push_back(Json::array({it.row(), it.col(), complex_to_json(it.value())}));
    }
  }
  return entries;
}

OperatorMatrix entries_from_json(int n, const Json& entries, const std::string& where) {
  const Index d = Index{1} << n;
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string ew = where + "[" + std::to_string(i) + "]";
    const Json& e = entries[i];
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw FormatError(ew + ": expected [row, col, [re, im]]");
    }
    const auto row = e[0].get<std::int64_t>();
    const auto col = e[1].get<std::int64_t>();
    if (row < 0 || col < 0 || static_cast<Index>(row) >= d || static_cast<Index>(col) >= d) {
      throw FormatError(ew + ": index out of range");
    }
    triplets.emplace_back(row, col, complex_from_json(e[2], ew + "[2]"));
  }
  return OperatorMatrix::from_triplets(n, triplets);
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {number(j, where), 0.0};
  if (!j.is_array() || j.size() != 2) throw FormatError(where + ": expected [re, im]");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

// ---------------------------------------------------------------------------

Json hamiltonian_to_json(const LocalHamiltonian& h) {
  Json terms = Json::array();
  for (const auto& [coeff, s] : h.signed_terms()) {
    Json paulis = Json::array();
    for (const auto& [q, p] : s.factors()) {
      paulis.push_back({{"qubit", q}, {"op", std::string(1, pauli_symbol(p))}});
    }
    terms.push_back({{"coeff", coeff * s.sign()}, {"paulis", std::move(paulis)}});
  }
  return {{"version", kFormatVersion}, {"n", h.num_qubits()}, {"terms", std::move(terms)}};
}

LocalHamiltonian hamiltonian_from_json(const Json& j) {
  const std::string root = "hamiltonian";
  check_version(j, root);
  const int n = register_size(j, root);
  const Json& terms = array_field(j, "terms", root);
  std::vector<std::pair<double, PauliString>> parsed;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string tw = root + ".terms[" + std::to_string(t) + "]";
    const double coeff = number(field(terms[t], "coeff", tw), tw + ".coeff");
    const Json& paulis = array_field(terms[t], "paulis", tw);
    std::map<int, Pauli> factors;
    for (std::size_t k = 0; k < paulis.size(); ++k) {
      const std::string pw = tw + ".paulis[" + std::to_string(k) + "]";
      const int q = int_field(paulis[k], "qubit", pw);
      if (q < 0 || q >= n) throw FormatError(pw + ".qubit: out of range");
      const Json& op = field(paulis[k], "op", pw);
      if (!op.is_string() || op.get<std::string>().size() != 1 ||
          std::string("XYZ").find(op.get<std::string>()[0]) == std::string::npos) {
        throw FormatError(pw + ".op: expected \"X\", \"Y\" or \"Z\"");
      }
      if (!factors.emplace(q, pauli_from_symbol(op.get<std::string>()[0])).second) {
        throw FormatError(pw + ": duplicate qubit " + std::to_string(q) + " within one term");
      }
    }
    parsed.emplace_back(coeff, PauliString(std::move(factors)));
  }
  return LocalHamiltonian(n, parsed);
}

LocalHamiltonian parse_hamiltonian(const std::string& path) { return hamiltonian_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------

Json circuit_to_json(const QuantumCircuit& c) {
  Json gates = Json::array();
  for (const auto& g : c.gates()) {
    Json entry;
    switch (g.kind) {
      case GateKind::CNOT: entry = {{"name", "CNOT"}, {"qubits", g.qubits}}; break;
      case GateKind::ROT: entry = {{"name", "ROT"}, {"qubits", g.qubits}, {"angle", g.angle}}; break;
      case GateKind::Identity: entry = {{"name", "ID"}, {"qubits", Json::array()}}; break;
      case GateKind::Custom:
        entry = {{"name", "CUSTOM"}, {"qubits", g.qubits}, {"matrix", dense_to_json(g.unitary)}};
        break;
    }
    gates.push_back(std::move(entry));
  }
  return {{"version", kFormatVersion}, {"n", c.num_qubits()}, {"gates", std::move(gates)}};
}

QuantumCircuit circuit_from_json(const Json& j) {
  const std::string root = "circuit";
  check_version(j, root);
  const int n = register_size(j, root);
  const Json& gates = array_field(j, "gates", root);
  std::vector<Gate> parsed;
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const std::string gw = root + ".gates[" + std::to_string(k) + "]";
    const Json& name = field(gates[k], "name", gw);
    if (!name.is_string()) throw FormatError(gw + ".name: expected a string");
    const std::string kind = name.get<std::string>();
    std::vector<int> qubits;
    if (gates[k].contains("qubits")) qubits = qubit_list(gates[k]["qubits"], gw + ".qubits");
    if (kind == "CNOT") {
      if (qubits.size() != 2) throw FormatError(gw + ".qubits: CNOT takes [control, target]");
      parsed.push_back(Gate::cnot(qubits[0], qubits[1]));
    } else if (kind == "ROT") {
      if (qubits.size() != 1) throw FormatError(gw + ".qubits: ROT takes one qubit");
      parsed.push_back(Gate::rot(qubits[0], number(field(gates[k], "angle", gw), gw + ".angle")));
    } else if (kind == "ID") {
      if (!qubits.empty()) throw FormatError(gw + ".qubits: ID takes no qubits");
      parsed.push_back(Gate::identity());
    } else if (kind == "CUSTOM") {
      parsed.push_back(Gate::custom(qubits, dense_from_json(field(gates[k], "matrix", gw), gw + ".matrix")));
    } else {
      throw FormatError(gw + ".name: unknown gate '" + kind + "'");
    }
  }
  return QuantumCircuit(n, std::move(parsed));
}

QuantumCircuit parse_circuit(const std::string& path) { return circuit_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------

Json operator_to_json(const OperatorMatrix& m) {
  return {{"version", kFormatVersion}, {"n", m.num_qubits()}, {"entries", entries_to_json(m)}};
}

OperatorMatrix operator_from_json(const Json& j) {
  const std::string root = "operator";
  check_version(j, root);
  const int n = register_size(j, root);
  return entries_from_json(n, array_field(j, "entries", root), root + ".entries");
}

Json sat_to_json(const SatInstance& s) {
  Json ops = Json::array();
  for (const auto& op : s.operators()) ops.push_back({{"entries", entries_to_json(op)}});
  Json out = {{"version", kFormatVersion},
              {"n", s.num_qubits()},
              {"epsilon", s.epsilon()},
              {"class", to_string(s.tag())},
              {"operators", std::move(ops)}};
  if (s.n_max) out["n_max"] = *s.n_max;
  if (s.source_epsilon) out["source_epsilon"] = *s.source_epsilon;
  return out;
}

SatInstance sat_from_json(const Json& j) {
  const std::string root = "sat";
  check_version(j, root);
  const int n = register_size(j, root);
  const double eps = number(field(j, "epsilon", root), root + ".epsilon");
  SatClass tag = SatClass::Quantum;
  if (j.contains("class")) {
    if (!j["class"].is_string()) throw FormatError(root + ".class: expected a string");
    tag = sat_class_from_string(j["class"].get<std::string>());
  }
  const Json& ops = array_field(j, "operators", root);
  std::vector<OperatorMatrix> parsed;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const std::string ow = root + ".operators[" + std::to_string(k) + "]";
    if (ops[k].contains("entries")) {
      parsed.push_back(entries_from_json(n, array_field(ops[k], "entries", ow), ow + ".entries"));
    } else {
      LocalOperator local{qubit_list(field(ops[k], "qubits", ow), ow + ".qubits"),
                          dense_from_json(field(ops[k], "matrix", ow), ow + ".matrix"),
                          "operator " + std::to_string(k)};
      parsed.push_back(local.embed(n));
    }
  }
  SatInstance out(n, std::move(parsed), eps, tag);
  if (j.contains("n_max")) out.n_max = number(j["n_max"], root + ".n_max");
  if (j.contains("source_epsilon")) out.source_epsilon = number(j["source_epsilon"], root + ".source_epsilon");
  return out;
}

SatInstance parse_sat(const std::string& path) { return sat_from_json(read_json_file(path)); }

}  // namespace stoqkit::io
