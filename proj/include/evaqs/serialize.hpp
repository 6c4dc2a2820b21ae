// serialize.hpp
// Plain-text circuit format for reproducibility and cross-implementation
// exchange. One rotation/gate per line; masks as bitstrings (most significant
// qubit first, qubit 0 = rightmost character), angles in radians, 4x4
// matrices as 16 complex pairs row-major. Doubles are printed with 17
// significant digits so a write/read round trip is bit-exact.
//
//   iqp <n> <m>
//   <mask> <theta>                          (m lines)
//
//   random <n> <m>
//   <q1> <q2> <re00> <im00> ... <re33> <im33>   (m lines)
//
//   supremacy <rows> <cols> <cycles>
//   cycle <pattern> <gate id per qubit...>      (per cycle, then its
//   ent <q1> <q2> <theta> <phi>                  entangler lines)

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include "evaqs/iqp.hpp"
#include "evaqs/random_circuit.hpp"
#include "evaqs/supremacy.hpp"

namespace evaqs {

using AnyCircuit = std::variant<IqpCircuit, RandomCircuit, SupremacyCircuit>;

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string mask_to_bitstring(std::uint64_t mask, int n_qubits) {
    std::string s(n_qubits, '0');
    for (int q = 0; q < n_qubits; ++q)
        if ((mask >> q) & 1) s[n_qubits - 1 - q] = '1';
    return s;
}

inline std::uint64_t bitstring_to_mask(const std::string& s) {
    std::uint64_t mask = 0;
    const int n = static_cast<int>(s.size());
    for (int i = 0; i < n; ++i) {
        if (s[i] == '1')
            mask |= std::uint64_t{1} << (n - 1 - i);
        else if (s[i] != '0')
            throw std::invalid_argument("mask bitstring must contain only 0/1");
    }
    return mask;
}

}  // namespace detail

inline std::string circuit_to_text(const IqpCircuit& c) {
    std::ostringstream out;
    out << "iqp " << c.n_qubits << ' ' << c.depth() << '\n';
    for (const auto& r : c.rotations)
        out << detail::mask_to_bitstring(r.mask, c.n_qubits) << ' '
            << detail::format_double(r.theta) << '\n';
    return out.str();
}

inline std::string circuit_to_text(const RandomCircuit& c) {
    std::ostringstream out;
    out << "random " << c.n_qubits << ' ' << c.depth() << '\n';
    for (const auto& g : c.gates) {
        out << g.q1 << ' ' << g.q2;
        for (const auto& z : g.gate.m)
            out << ' ' << detail::format_double(z.real()) << ' '
                << detail::format_double(z.imag());
        out << '\n';
    }
    return out.str();
}

inline std::string circuit_to_text(const SupremacyCircuit& c) {
    std::ostringstream out;
    out << "supremacy " << c.rows << ' ' << c.cols << ' ' << c.n_cycles() << '\n';
    for (const auto& cycle : c.cycles) {
        out << "cycle " << cycle.pattern;
        for (int id : cycle.gate_ids) out << ' ' << id;
        out << '\n';
        for (const auto& e : cycle.entanglers)
            out << "ent " << e.q1 << ' ' << e.q2 << ' ' << detail::format_double(e.theta)
                << ' ' << detail::format_double(e.phi) << '\n';
    }
    return out.str();
}

inline std::string circuit_to_text(const AnyCircuit& c) {
    return std::visit([](const auto& v) { return circuit_to_text(v); }, c);
}

inline AnyCircuit circuit_from_text(std::istream& in) {
    std::string kind;
    if (!(in >> kind)) throw std::invalid_argument("empty circuit description");
    if (kind == "iqp") {
        int n, m;
        if (!(in >> n >> m)) throw std::invalid_argument("bad iqp header");
        IqpCircuit c;
        c.n_qubits = n;
        c.rotations.reserve(m);
        for (int i = 0; i < m; ++i) {
            std::string mask;
            double theta;
            if (!(in >> mask >> theta)) throw std::invalid_argument("truncated iqp rotation list");
            if (static_cast<int>(mask.size()) != n)
                throw std::invalid_argument("mask width does not match qubit count");
            c.rotations.push_back({detail::bitstring_to_mask(mask), theta});
        }
        return c;
    }
    if (kind == "random") {
        int n, m;
        if (!(in >> n >> m)) throw std::invalid_argument("bad random-circuit header");
        RandomCircuit c;
        c.n_qubits = n;
        c.gates.reserve(m);
        for (int i = 0; i < m; ++i) {
            RandomGate g;
            if (!(in >> g.q1 >> g.q2)) throw std::invalid_argument("truncated gate list");
            if (g.q1 == g.q2 || g.q1 < 0 || g.q2 < 0 || g.q1 >= n || g.q2 >= n)
                throw std::invalid_argument("gate qubits must be distinct and in range");
            for (auto& z : g.gate.m) {
                double re, im;
                if (!(in >> re >> im)) throw std::invalid_argument("truncated gate matrix");
                z = {re, im};
            }
            if (!g.gate.is_unitary(1e-10))
                throw std::invalid_argument("gate matrix is not unitary to 1e-10");
            c.gates.push_back(g);
        }
        return c;
    }
    if (kind == "supremacy") {
        int rows, cols, cycles;
        if (!(in >> rows >> cols >> cycles)) throw std::invalid_argument("bad supremacy header");
        SupremacyCircuit c;
        c.rows = rows;
        c.cols = cols;
        const int n = rows * cols;
        std::string tag;
        bool pending_tag = false;
        for (int cy = 0; cy < cycles; ++cy) {
            if (!pending_tag && !(in >> tag))
                throw std::invalid_argument("truncated cycle list");
            pending_tag = false;
            if (tag != "cycle") throw std::invalid_argument("expected cycle line");
            SupremacyCycle cycle;
            if (!(in >> cycle.pattern)) throw std::invalid_argument("bad cycle pattern");
            if (cycle.pattern < 0 || cycle.pattern > 3)
                throw std::invalid_argument("cycle pattern must be 0..3");
            cycle.gate_ids.resize(n);
            for (int& id : cycle.gate_ids) {
                if (!(in >> id)) throw std::invalid_argument("truncated gate id list");
                if (id < 0 || id > 2) throw std::invalid_argument("gate id must be 0..2");
            }
            // entangler lines belong to this cycle until the next "cycle"
            while (in >> tag) {
                if (tag != "ent") {
                    pending_tag = true;
                    break;
                }
                SupremacyEntangler e;
                if (!(in >> e.q1 >> e.q2 >> e.theta >> e.phi))
                    throw std::invalid_argument("bad entangler line");
                if (e.q1 == e.q2 || e.q1 < 0 || e.q2 < 0 || e.q1 >= n || e.q2 >= n)
                    throw std::invalid_argument("entangler qubits must be distinct and in range");
                cycle.entanglers.push_back(e);
            }
            c.cycles.push_back(std::move(cycle));
        }
        return c;
    }
    throw std::invalid_argument("unknown circuit kind: " + kind);
}

inline AnyCircuit circuit_from_text(const std::string& text) {
    std::istringstream in(text);
    return circuit_from_text(in);
}

inline void save_circuit(const std::string& path, const AnyCircuit& c) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << circuit_to_text(c);
}

inline AnyCircuit load_circuit(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return circuit_from_text(in);
}

}  // namespace evaqs
