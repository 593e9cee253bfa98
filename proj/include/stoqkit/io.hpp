#pragma once

#include <string>

#include <json.hpp>

#include "stoqkit/clock.hpp"
#include "stoqkit/errors.hpp"
#include "stoqkit/operator_core.hpp"
#include "stoqkit/protocols.hpp"

namespace stoqkit::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "1";

// Malformed file content. The message names the offending field.
class FormatError : public ContractError {
 public:
  using ContractError::ContractError;
};

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& field);

// {version, n, terms: [{coeff, paulis: [{qubit, op}]}]}
Json hamiltonian_to_json(const LocalHamiltonian& h);
LocalHamiltonian hamiltonian_from_json(const Json& j);
LocalHamiltonian parse_hamiltonian(const std::string& path);

// {version, n, gates: [{name, qubits, angle?, matrix?}]}
Json circuit_to_json(const QuantumCircuit& c);
QuantumCircuit circuit_from_json(const Json& j);
QuantumCircuit parse_circuit(const std::string& path);

// {version, n, entries: [[row, col, [re, im]], ...]}
Json operator_to_json(const OperatorMatrix& m);
OperatorMatrix operator_from_json(const Json& j);

// {version, n, epsilon, class, operators: [...]}; each operator is either
// {qubits, matrix} (dense, local) or {entries} (sparse, full register).
Json sat_to_json(const SatInstance& s);
SatInstance sat_from_json(const Json& j);
SatInstance parse_sat(const std::string& path);

}  // namespace stoqkit::io
