#pragma once

// Line-oriented text formats.
//
// Instance:
//   DMDGP <n> <K>
//   INIT <v> <c1> ... <cK>      (one line for each v = 1..K)
//   EDGE <u> <v> <d>            (at most one line per unordered pair)
//
// Solutions / embeddings:
//   SOL <index> <chirality as a +/- string>
//   X <v> <c1> ... <cK>         (n lines)
//
// '#' starts a comment. Reals are written with 17 significant digits.

#include "dmdgp/errors.hpp"
#include "dmdgp/instance.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace dmdgp {

inline std::string format_real(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline std::string strip_comment(const std::string& line)
{
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::string> split_ws(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

inline long parse_int(const std::string& tok, const std::string& where)
{
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(tok, &used);
    } catch (const std::exception&) {
        throw ParseError(where, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size())
        throw ParseError(where, "expected an integer, got '" + tok + "'");
    return value;
}

inline double parse_real(const std::string& tok, const std::string& where)
{
    std::size_t used = 0;
    double value = 0;
    try {
        value = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw ParseError(where, "expected a number, got '" + tok + "'");
    }
    if (used != tok.size() || !std::isfinite(value))
        throw ParseError(where, "expected a finite number, got '" + tok + "'");
    return value;
}

} // namespace detail

inline DgpInstance parse_instance(std::istream& in, const std::string& name = "<input>")
{
    using namespace detail;
    std::string line;
    int lineno = 0;
    std::optional<DgpInstance> inst;
    std::set<Vertex> seen_init;
    auto where = [&] { return name + ":" + std::to_string(lineno); };

    while (std::getline(in, line)) {
        ++lineno;
        const auto tok = split_ws(strip_comment(line));
        if (tok.empty())
            continue;
        if (!inst) {
            if (tok[0] != "DMDGP" || tok.size() != 3)
                throw ParseError(where(), "expected header 'DMDGP <n> <K>'");
            const auto n = parse_int(tok[1], where());
            const auto K = parse_int(tok[2], where());
            try {
                inst.emplace(static_cast<int>(n), static_cast<int>(K));
            } catch (const InvalidArgument& e) {
                throw ParseError(where(), e.what());
            }
            continue;
        }
        const int K = inst->K();
        if (tok[0] == "INIT") {
            if (tok.size() != static_cast<std::size_t>(K) + 2)
                throw ParseError(where(), "INIT needs a vertex and " + std::to_string(K) + " coordinates");
            const auto v = parse_int(tok[1], where());
            if (v < 1 || v > K)
                throw ParseError(where(), "INIT vertex must be in 1..K");
            if (!seen_init.insert(static_cast<Vertex>(v)).second)
                throw ParseError(where(), "duplicate INIT for vertex " + tok[1]);
            Point p(K);
            for (int i = 0; i < K; ++i)
                p(i) = parse_real(tok[static_cast<std::size_t>(i) + 2], where());
            inst->set_initial(static_cast<Vertex>(v), std::move(p));
        } else if (tok[0] == "EDGE") {
            if (tok.size() != 4)
                throw ParseError(where(), "EDGE needs '<u> <v> <d>'");
            const auto u = parse_int(tok[1], where());
            const auto v = parse_int(tok[2], where());
            const auto d = parse_real(tok[3], where());
            if (u < 1 || v < 1 || u > inst->n() || v > inst->n() || u == v)
                throw ParseError(where(), "EDGE endpoints must be distinct vertices in 1..n");
            if (d < 0)
                throw ParseError(where(), "negative distance");
            if (inst->has_edge(static_cast<Vertex>(u), static_cast<Vertex>(v)))
                throw ParseError(where(), "duplicate edge {" + tok[1] + "," + tok[2] + "}");
            inst->set_distance(static_cast<Vertex>(u), static_cast<Vertex>(v), d);
        } else {
            throw ParseError(where(), "unknown record '" + tok[0] + "'");
        }
    }
    if (!inst)
        throw ParseError(name, "missing 'DMDGP <n> <K>' header");
    if (seen_init.size() != static_cast<std::size_t>(inst->K()))
        throw ParseError(name, "missing INIT lines: need one per vertex 1..K");
    return std::move(*inst);
}

inline DgpInstance read_instance(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path);
    return parse_instance(in, path);
}

inline void write_instance(std::ostream& out, const DgpInstance& inst)
{
    out << "DMDGP " << inst.n() << ' ' << inst.K() << '\n';
    for (Vertex v = 1; v <= inst.K(); ++v) {
        out << "INIT " << v;
        for (int i = 0; i < inst.K(); ++i)
            out << ' ' << format_real(inst.initial(v)(i));
        out << '\n';
    }
    for (const auto& [e, d] : inst.edges())
        out << "EDGE " << e.u << ' ' << e.v << ' ' << format_real(d) << '\n';
}

inline void write_instance(const DgpInstance& inst, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path);
    write_instance(out, inst);
}

inline void write_embedding(std::ostream& out, const Embedding& x, std::size_t index)
{
    out << "SOL " << index << ' ' << chirality_string(x.chirality) << '\n';
    for (Vertex v = 1; v <= x.size(); ++v) {
        out << "X " << v;
        for (Eigen::Index i = 0; i < x.at(v).size(); ++i)
            out << ' ' << format_real(x.at(v)(i));
        out << '\n';
    }
}

inline void write_solutions(std::ostream& out, const std::vector<Embedding>& sols)
{
    for (std::size_t i = 0; i < sols.size(); ++i)
        write_embedding(out, sols[i], i + 1);
}

/// Reads SOL blocks. A chirality field made of anything other than +/- is
/// rejected; an absent one leaves the chirality empty.
inline std::vector<Embedding> parse_embeddings(std::istream& in, int K, const std::string& name = "<input>")
{
    using namespace detail;
    std::vector<Embedding> out;
    std::string line;
    int lineno = 0;
    auto where = [&] { return name + ":" + std::to_string(lineno); };
    while (std::getline(in, line)) {
        ++lineno;
        const auto tok = split_ws(strip_comment(line));
        if (tok.empty())
            continue;
        if (tok[0] == "SOL") {
            if (tok.size() < 2 || tok.size() > 3)
                throw ParseError(where(), "expected 'SOL <index> [chirality]'");
            Embedding x;
            if (tok.size() == 3)
                for (char c : tok[2]) {
                    if (c != '+' && c != '-')
                        throw ParseError(where(), "chirality must be a +/- string");
                    x.chirality.push_back(c == '+' ? 1 : -1);
                }
            out.push_back(std::move(x));
        } else if (tok[0] == "X") {
            if (out.empty())
                throw ParseError(where(), "X line before any SOL line");
            if (tok.size() != static_cast<std::size_t>(K) + 2)
                throw ParseError(where(), "X needs a vertex and " + std::to_string(K) + " coordinates");
            const auto v = parse_int(tok[1], where());
            auto& x = out.back();
            if (v != x.size() + 1)
                throw ParseError(where(), "X lines must list vertices 1..n in order");
            Point p(K);
            for (int i = 0; i < K; ++i)
                p(i) = parse_real(tok[static_cast<std::size_t>(i) + 2], where());
            x.points.push_back(std::move(p));
        } else {
            throw ParseError(where(), "unknown record '" + tok[0] + "'");
        }
    }
    return out;
}

inline std::vector<Embedding> read_embeddings(const std::string& path, int K)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path);
    return parse_embeddings(in, K, path);
}

} // namespace dmdgp
