#include "quchater/qsim.hpp"

#include <cmath>
#include <string>

namespace quchater {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

void check_qubit(const StateVector& state, int qubit) {
    if (qubit < 0 || qubit >= state.qubit_count)
        throw IndexOutOfRange("qubit index " + std::to_string(qubit) +
                              " out of range for " + std::to_string(state.qubit_count) +
                              " qubits");
}

// Optional single-angle shift applied while running the embedding, used by
// the parameter-shift rule. `on_theta` selects between the RY parameter and
// the RZ data angle at (layer, qubit).
struct AngleShift {
    bool active = false;
    bool on_theta = true;
    int layer = 0;
    int qubit = 0;
    double delta = 0.0;
};

StateVector run_embedding_shifted(const std::vector<double>& x,
                                  const CircuitParams& params,
                                  const AngleShift& shift) {
    params.validate();
    const int q_count = params.qubits();
    if (static_cast<int>(x.size()) != q_count)
        throw LengthMismatch("data vector length must equal the qubit count");

    StateVector state = StateVector::zero_state(q_count);
    for (int l = 0; l < params.layers(); ++l) {
        for (int q = 0; q < q_count; ++q) {
            double angle = params.theta[static_cast<std::size_t>(l)][static_cast<std::size_t>(q)];
            if (shift.active && shift.on_theta && shift.layer == l && shift.qubit == q)
                angle += shift.delta;
            apply_ry(state, angle, q);
        }
        for (int q = 0; q < q_count; ++q) {
            double angle = x[static_cast<std::size_t>(q)];
            if (shift.active && !shift.on_theta && shift.layer == l && shift.qubit == q)
                angle += shift.delta;
            apply_rz(state, angle, q);
        }
        if (q_count == 2) {
            apply_cnot(state, 0, 1);
        } else if (q_count >= 3) {
            for (int q = 0; q < q_count; ++q)
                apply_cnot(state, q, (q + 1) % q_count);
        }
    }
    return state;
}

std::vector<double> measure_all(const StateVector& state) {
    std::vector<double> out(static_cast<std::size_t>(state.qubit_count));
    for (int q = 0; q < state.qubit_count; ++q)
        out[static_cast<std::size_t>(q)] = expect_z(state, q);
    return out;
}

double contract(const std::vector<double>& values, const std::vector<double>& upstream) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += values[i] * upstream[i];
    return acc;
}

} // namespace

StateVector StateVector::zero_state(int qubits) {
    if (qubits < 1) throw std::invalid_argument("need at least one qubit");
    if (qubits > 24) throw std::invalid_argument("qubit count too large for dense simulation");
    StateVector sv;
    sv.qubit_count = qubits;
    sv.amplitudes.assign(std::size_t{1} << qubits, {0.0, 0.0});
    sv.amplitudes[0] = {1.0, 0.0};
    return sv;
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const auto& a : amplitudes) acc += std::norm(a);
    return std::sqrt(acc);
}

void CircuitParams::validate() const {
    if (theta.empty()) throw ShapeMismatch("circuit needs at least one layer");
    const std::size_t q = theta.front().size();
    if (q == 0) throw ShapeMismatch("circuit needs at least one qubit");
    for (const auto& row : theta) {
        if (row.size() != q) throw ShapeMismatch("ragged theta matrix");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite rotation angle");
    }
}

void apply_ry(StateVector& state, double theta, int qubit) {
    check_qubit(state, qubit);
    const double c = std::cos(theta * 0.5);
    const double s = std::sin(theta * 0.5);
    const std::size_t stride = std::size_t{1} << (state.qubit_count - 1 - qubit);
    const std::size_t dim = state.amplitudes.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + stride;
            const std::complex<double> a0 = state.amplitudes[i0];
            const std::complex<double> a1 = state.amplitudes[i1];
            state.amplitudes[i0] = c * a0 - s * a1;
            state.amplitudes[i1] = s * a0 + c * a1;
        }
    }
}

void apply_rz(StateVector& state, double phi, int qubit) {
    check_qubit(state, qubit);
    const std::complex<double> e0 = std::polar(1.0, -phi * 0.5);
    const std::complex<double> e1 = std::polar(1.0, phi * 0.5);
    const std::size_t stride = std::size_t{1} << (state.qubit_count - 1 - qubit);
    const std::size_t dim = state.amplitudes.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            state.amplitudes[base + off] *= e0;
            state.amplitudes[base + off + stride] *= e1;
        }
    }
}

void apply_cnot(StateVector& state, int control, int target) {
    check_qubit(state, control);
    check_qubit(state, target);
    if (control == target)
        throw ControlEqualsTarget("CNOT control and target must differ");
    const std::size_t cbit = std::size_t{1} << (state.qubit_count - 1 - control);
    const std::size_t tbit = std::size_t{1} << (state.qubit_count - 1 - target);
    const std::size_t dim = state.amplitudes.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & cbit) && !(i & tbit))
            std::swap(state.amplitudes[i], state.amplitudes[i | tbit]);
    }
}

void apply_gate(StateVector& state, const Gate& gate) {
    switch (gate.kind) {
    case Gate::Kind::ry: apply_ry(state, gate.angle, gate.target); break;
    case Gate::Kind::rz: apply_rz(state, gate.angle, gate.target); break;
    case Gate::Kind::cnot: apply_cnot(state, gate.control, gate.target); break;
    }
}

StateVector run_embedding(const std::vector<double>& x, const CircuitParams& params) {
    return run_embedding_shifted(x, params, AngleShift{});
}

double expect_z(const StateVector& state, int qubit) {
    check_qubit(state, qubit);
    const std::size_t bit = std::size_t{1} << (state.qubit_count - 1 - qubit);
    double acc = 0.0;
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        const double p = std::norm(state.amplitudes[i]);
        acc += (i & bit) ? -p : p;
    }
    return acc;
}

std::vector<double> embedding_forward(const std::vector<double>& x,
                                      const CircuitParams& params) {
    return measure_all(run_embedding(x, params));
}

std::vector<std::vector<double>> parameter_shift_grad(const std::vector<double>& x,
                                                      const CircuitParams& params,
                                                      const std::vector<double>& upstream) {
    params.validate();
    if (upstream.size() != static_cast<std::size_t>(params.qubits()))
        throw LengthMismatch("upstream length must equal the qubit count");

    std::vector<std::vector<double>> grad(
        static_cast<std::size_t>(params.layers()),
        std::vector<double>(static_cast<std::size_t>(params.qubits()), 0.0));
    AngleShift shift;
    shift.active = true;
    shift.on_theta = true;
    for (int l = 0; l < params.layers(); ++l) {
        for (int q = 0; q < params.qubits(); ++q) {
            shift.layer = l;
            shift.qubit = q;
            shift.delta = kHalfPi;
            const auto plus = measure_all(run_embedding_shifted(x, params, shift));
            shift.delta = -kHalfPi;
            const auto minus = measure_all(run_embedding_shifted(x, params, shift));
            grad[static_cast<std::size_t>(l)][static_cast<std::size_t>(q)] =
                0.5 * (contract(plus, upstream) - contract(minus, upstream));
        }
    }
    return grad;
}

std::vector<double> input_shift_grad(const std::vector<double>& x,
                                     const CircuitParams& params,
                                     const std::vector<double>& upstream) {
    params.validate();
    if (upstream.size() != static_cast<std::size_t>(params.qubits()))
        throw LengthMismatch("upstream length must equal the qubit count");

    std::vector<double> grad(static_cast<std::size_t>(params.qubits()), 0.0);
    AngleShift shift;
    shift.active = true;
    shift.on_theta = false;
    for (int l = 0; l < params.layers(); ++l) {
        for (int q = 0; q < params.qubits(); ++q) {
            shift.layer = l;
            shift.qubit = q;
            shift.delta = kHalfPi;
            const auto plus = measure_all(run_embedding_shifted(x, params, shift));
            shift.delta = -kHalfPi;
            const auto minus = measure_all(run_embedding_shifted(x, params, shift));
            grad[static_cast<std::size_t>(q)] +=
                0.5 * (contract(plus, upstream) - contract(minus, upstream));
        }
    }
    return grad;
}

} // namespace quchater
