#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qamp/qubo.hpp"
#include "qamp/state.hpp"

namespace qamp {

// Shortest round-trippable decimal form, locale-independent.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string bitstring_of(std::uint64_t index, int n_qubits) {
    std::string s(n_qubits, '0');
    for (int i = 0; i < n_qubits; ++i)
        if ((index >> i) & 1u) s[n_qubits - 1 - i] = '1'; // qubit 0 rightmost
    return s;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

inline void write_energy_table_csv(std::ostream& out, const EnergyTable& table) {
    out << "bitstring,energy\n";
    for (std::uint64_t k = 0; k < table.energies.size(); ++k)
        out << bitstring_of(k, table.n_qubits) << "," << format_double(table.energies[k]) << "\n";
}

inline void write_state_csv(std::ostream& out, const AncillaBranchState& s) {
    out << "basis_index,re0,im0,re1,im1\n";
    for (std::uint64_t k = 0; k < s.dim(); ++k)
        out << k << "," << format_double(s.branch0[k].real()) << ","
            << format_double(s.branch0[k].imag()) << "," << format_double(s.branch1[k].real())
            << "," << format_double(s.branch1[k].imag()) << "\n";
}

} // namespace qamp
