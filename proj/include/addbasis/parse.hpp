#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "addbasis/perset.hpp"
#include "addbasis/structure.hpp"

namespace addbasis {

// Parses a set literal (malformed input raises ParseError, the message
// naming the byte offset of the offending character):
//
//   SET     := [TORSION ';'] CLAUSE (',' CLAUSE)*
//   TORSION := 'C=' d1 'x' d2 ...            invariant factors, each >= 2
//   CLAUSE  := [TUPLE] '{' items '}'         finite points
//            | [TUPLE] a '+' p 'N'           right tail a, a+p, a+2p, ...
//            | [TUPLE] a '-' p 'N'           left tail a, a-p, a-2p, ...
//            | [TUPLE] a '+' p 'Z'           full line a + pZ
//   TUPLE   := '(' c1 ',' ... ',' ck ')'     torsion coordinates
//
// Inside braces an item is either a bare integer n or, when the ambient
// has torsion, a tuple '(c1,...,ck,n)'.  A tuple prefix on a clause fixes
// the torsion coordinates of every point the clause contributes; bare
// clauses in a torsion ambient default to coordinates (0,...,0).
// Whitespace is ignored between tokens.  The empty set is '{}'.
//
// The grammar round-trips PeriodicSet::to_string: parsing an emitted
// literal reproduces the canonical set exactly.
PeriodicSet parse_set(const std::string& text);

// Parses a literal that must denote a finite set and returns its points.
// The ambient must match `amb` (PreconditionError otherwise); a literal
// without a torsion prefix is reinterpreted in `amb` with zero torsion
// coordinates when `amb` has torsion and the literal is torsion-free.
std::vector<GroupElement> parse_elements(const std::string& text,
                                         const AmbientGroup& amb);

// The literal of one group element: the bare integer for a torsion-free
// ambient, '(c1,...,ck,n)' otherwise.  parse_elements accepts the output
// wrapped in braces.
std::string element_literal(const GroupElement& e, const AmbientGroup& amb);

}  // namespace addbasis
