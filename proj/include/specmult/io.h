// SPDX-License-Identifier: Apache-2.0
#ifndef SPECMULT_IO_H_
#define SPECMULT_IO_H_

#include <iosfwd>
#include <string>
#include <variant>

#include "specmult/group.h"
#include "specmult/symbol.h"

namespace specmult {

inline constexpr int kSymbolFormatVersion = 1;

// %.17g: enough digits to round-trip any double.
std::string format_double(double v);

// Text symbol file, see docs/symbol_format.md. Values are written with 17
// significant digits, so write followed by read reproduces them bit for bit.
void write_symbol(std::ostream& out, const Symbol& sigma);
void write_group_symbol(std::ostream& out, const GroupSymbol& tau);

using SymbolFile = std::variant<Symbol, GroupSymbol>;

// Parses either kind. Errors are ValidationError with a "line N:" prefix.
SymbolFile read_symbol_file(std::istream& in);
Symbol read_symbol(std::istream& in);
GroupSymbol read_group_symbol(std::istream& in);

SymbolFile load_symbol_file(const std::string& path);
void save_symbol_file(const std::string& path, const SymbolFile& file);

}  // namespace specmult

#endif  // SPECMULT_IO_H_
