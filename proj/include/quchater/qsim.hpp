#pragma once

#include <complex>
#include <vector>

#include "quchater/errors.hpp"

namespace quchater {

/// Exact statevector of a Q-qubit register. Qubit 0 owns the most
/// significant bit of the amplitude index.
struct StateVector {
    std::vector<std::complex<double>> amplitudes;
    int qubit_count = 0;

    static StateVector zero_state(int qubits);
    double norm() const;
};

/// Rotation angles theta[layer][qubit] of the variational embedding.
struct CircuitParams {
    std::vector<std::vector<double>> theta;

    int layers() const { return static_cast<int>(theta.size()); }
    int qubits() const { return theta.empty() ? 0 : static_cast<int>(theta.front().size()); }
    void validate() const;
};

struct Gate {
    enum class Kind { ry, rz, cnot };
    Kind kind;
    double angle = 0.0;
    int target = 0;
    int control = 0; // cnot only

    static Gate RY(double angle, int qubit) { return {Kind::ry, angle, qubit, 0}; }
    static Gate RZ(double angle, int qubit) { return {Kind::rz, angle, qubit, 0}; }
    static Gate CNOT(int control, int target) { return {Kind::cnot, 0.0, target, control}; }
};

void apply_ry(StateVector& state, double theta, int qubit);
void apply_rz(StateVector& state, double phi, int qubit);
void apply_cnot(StateVector& state, int control, int target);
void apply_gate(StateVector& state, const Gate& gate);

/// Run the layered embedding on |0...0>: per layer, RY(theta[l][q]) on every
/// qubit, RZ(x[q]) on every qubit, then the CNOT ring q -> (q+1) mod Q. The
/// ring degenerates to a single CNOT(0,1) at Q = 2 and is skipped at Q = 1,
/// so no wire pair is entangled twice per layer.
StateVector run_embedding(const std::vector<double>& x, const CircuitParams& params);

/// Pauli-Z expectation of one qubit, in [-1, 1].
double expect_z(const StateVector& state, int qubit);

/// All Q Pauli-Z expectations of the embedding output.
std::vector<double> embedding_forward(const std::vector<double>& x, const CircuitParams& params);

/// Parameter-shift gradients of sum_j upstream[j] * <Z_j> with respect to
/// the RY angles: d<Z>/dtheta = ( <Z>(theta+pi/2) - <Z>(theta-pi/2) ) / 2.
std::vector<std::vector<double>> parameter_shift_grad(const std::vector<double>& x,
                                                      const CircuitParams& params,
                                                      const std::vector<double>& upstream);

/// Same shift rule applied to the data angles x[q]; each x[q] enters once
/// per layer so its derivative sums L per-occurrence shifts.
std::vector<double> input_shift_grad(const std::vector<double>& x,
                                     const CircuitParams& params,
                                     const std::vector<double>& upstream);

} // namespace quchater
