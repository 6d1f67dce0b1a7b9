#pragma once

#include <string>

#include "fockbench/symbols.hpp"

namespace fockbench {

/// Parses an expression over z into a Symbol with forward-mode Wirtinger derivatives.
///
/// Grammar: numbers, z, zbar, i, pi, + - * / ^, parentheses and the functions
/// exp sin cos sqrt conj re im abs abs2. Boundedness is inferred conservatively
/// (e.g. sin(re(z)) and exp(i*re(z)) are bounded by 1). Throws InvalidInput on errors.
Symbol parse_symbol(const std::string& text);

/// Built-in id or expression.
Symbol symbol_from_spec(const std::string& spec);

}  // namespace fockbench
