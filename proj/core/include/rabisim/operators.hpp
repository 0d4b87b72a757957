#ifndef RABISIM_OPERATORS_HPP
#define RABISIM_OPERATORS_HPP

#include "rabisim/types.hpp"

namespace rabisim {

struct FieldOps {
    QOperator a;      // annihilation, tensored with the atomic identity
    QOperator a_dag;  // creation
    QOperator n_op;   // a_dag * a
};

struct AtomOps {
    QOperator sigma_z;
    QOperator sigma_plus;
    QOperator sigma_minus;
};

FieldOps field_ops(const HilbertSpace& space);
AtomOps atom_ops(const HilbertSpace& space);

/// H = w a^t a + (w0/2) sz + g (s+ + s-)(a + a^t)
QOperator rabi_hamiltonian(const SimParams& params, const HilbertSpace& space);

/// Rotating-wave approximation of the above: coupling g (a s+ + a^t s-).
QOperator jc_hamiltonian(const SimParams& params, const HilbertSpace& space);

/// Rabi Hamiltonian with a, a^t replaced by the exponential phase operators
/// E- = (n+1)^{-1/2} a and E+ = E-^t, which shift Fock states with unit weight.
QOperator phase_hamiltonian(const SimParams& params, const HilbertSpace& space);

/// Total number of quanta N = a^t a + (sz + I)/2.
QOperator total_quanta(const HilbertSpace& space);

/// Initial-state description: (atomic part) tensor (field part).
struct StateSpec {
    enum class Atom { ground, excited, superposition };  // superposition = (|g>+|e>)/sqrt(2)
    enum class Field { fock, coherent };

    Atom atom = Atom::ground;
    Field field = Field::fock;
    int fock_n = 0;         // used when field == fock
    Complex alpha = 0.0;    // used when field == coherent

    static StateSpec fock(Atom a, int n) { return {a, Field::fock, n, 0.0}; }
    static StateSpec coherent(Atom a, Complex alpha) { return {a, Field::coherent, 0, alpha}; }
};

/// Unit-norm vector on the truncated space. Coherent amplitudes are built up
/// to n_max and renormalized; if the discarded tail exceeds 1e-10 the cutoff
/// is considered too small and std::invalid_argument is thrown.
Vector prepare_state(const StateSpec& spec, const HilbertSpace& space);

/// Parses "g,fock:0", "e,fock:5", "plus,coh:0.2236", ... (see docs/config).
StateSpec parse_state_spec(const std::string& text);
std::string format_state_spec(const StateSpec& spec);

} // namespace rabisim

#endif
