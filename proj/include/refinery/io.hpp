#pragma once

#include "refinery/refinement.hpp"

#include <iosfwd>
#include <string>

namespace refinery::io {

struct parse_error : std::runtime_error {
    parse_error(const std::string& msg, std::size_t line_, std::size_t col_)
        : std::runtime_error("line " + std::to_string(line_) + ", column " + std::to_string(col_) +
                             ": " + msg),
          line(line_), col(col_) {}
    std::size_t line, col;
};

/// Polytope text format:
///   ambient <n> field <Q | Qsqrt(d)>
///   V                      (one point per line), or
///   H                      (`a1 .. an <= b` / `a1 .. an == b` per line)
Polytope parse_polytope(const std::string& text);
std::string write_polytope(const Polytope& P);

/// Map text format: `map source <n> target <m>`, a `linear` block of m rows,
/// an `offset` row, and a `domain` polytope block.
PartialAffineMap parse_map(const std::string& text);
std::string write_map(const PartialAffineMap& f);

/// Refinement file: labelled blocks T (polytope), f and g (maps); the form
/// spaces are rebuilt from T and the model when the bundle is assembled.
struct RefinementFile {
    Polytope T;
    PartialAffineMap f, g;
};
RefinementFile parse_refinement(const std::string& text);
std::string write_refinement(const Refinement& R);
Refinement assemble_refinement(const StatisticalModel& M, RefinementFile file);

/// OFF export with 12-significant-digit decimal coordinates. Requires a
/// 3-dimensional polytope; with project=true a higher-dimensional polytope is
/// orthogonally projected to 3-space and all its 2-faces are listed.
std::string export_off(const Polytope& P, bool project = false);

std::string fnv1a_digest(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace refinery::io
