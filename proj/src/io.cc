// SPDX-License-Identifier: Apache-2.0
#include "specmult/io.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "specmult/error.h"

namespace specmult {

namespace {

// Line-oriented tokenizer that skips blank lines and '#' comments.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      tokens_.clear();
      for (std::string t; ss >> t;) tokens_.push_back(t);
      if (!tokens_.empty()) return true;
    }
    tokens_.clear();
    return false;
  }

  void require_next(const char* what) {
    if (!next()) fail(std::string("unexpected end of file, expected ") + what);
  }

  const std::vector<std::string>& tokens() const { return tokens_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError("line " + std::to_string(number_) + ": " + msg);
  }

  // "key value" line.
  std::string expect_key(const std::string& key) {
    require_next(key.c_str());
    if (tokens_.size() != 2 || tokens_[0] != key) {
      fail("expected '" + key + " <value>'");
    }
    return tokens_[1];
  }

  double to_double(const std::string& s, const char* field) const {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
      fail(std::string("field '") + field + "': '" + s + "' is not a finite number");
    }
    return v;
  }

  long to_int(const std::string& s, const char* field) const {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
      fail(std::string("field '") + field + "': '" + s + "' is not an integer");
    }
    return v;
  }

 private:
  std::istream& in_;
  std::vector<std::string> tokens_;
  int number_ = 0;
};

void write_matrix(std::ostream& out, const CMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(m(i, j).real()) << ' ' << format_double(m(i, j).imag());
    }
    out << '\n';
  }
}

CMatrix read_matrix(LineReader& r, std::size_t d) {
  CMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    r.require_next("a matrix row");
    const auto& t = r.tokens();
    if (t.size() != 2 * d) {
      r.fail("matrix row has " + std::to_string(t.size()) + " numbers, expected " +
             std::to_string(2 * d) + " (" + std::to_string(d) + " re/im pairs)");
    }
    for (std::size_t j = 0; j < d; ++j) {
      m(i, j) = Complex(r.to_double(t[2 * j], "re"), r.to_double(t[2 * j + 1], "im"));
    }
  }
  return m;
}

Symbol read_symbol_body(LineReader& r) {
  const std::string manifold_name = r.expect_key("manifold");
  ManifoldId id = ManifoldId::SU2();
  try {
    id = ManifoldId::Parse(manifold_name);
  } catch (const ValidationError& e) {
    r.fail(e.what());
  }
  const long n = r.to_int(r.expect_key("n"), "n");
  if (n != id.dim()) r.fail("n = " + std::to_string(n) + " does not match " + id.name());
  const double nu = r.to_double(r.expect_key("nu"), "nu");
  const double cutoff = r.to_double(r.expect_key("cutoff"), "cutoff");
  const long levels = r.to_int(r.expect_key("levels"), "levels");

  PartitionPtr partition;
  try {
    partition = enumerate_partition(id, nu, cutoff);
  } catch (const ValidationError& e) {
    r.fail(e.what());
  }
  if (levels != static_cast<long>(partition->size())) {
    r.fail("header declares " + std::to_string(levels) + " levels but cutoff " +
           format_double(cutoff) + " on " + id.name() + " retains " +
           std::to_string(partition->size()));
  }
  std::vector<CMatrix> blocks;
  double prev_lambda = -1.0;
  for (long l = 0; l < levels; ++l) {
    r.require_next("a level record");
    const auto t = r.tokens();
    if (t.size() != 6 || t[0] != "level" || t[2] != "lambda" || t[4] != "dim") {
      r.fail("expected 'level <i> lambda <x> dim <d>'");
    }
    if (r.to_int(t[1], "level") != l) r.fail("expected level index " + std::to_string(l));
    const double lambda = r.to_double(t[3], "lambda");
    if (!(lambda > prev_lambda)) r.fail("lambda must be strictly increasing");
    prev_lambda = lambda;
    const Level& lv = partition->level(static_cast<std::size_t>(l));
    if (lambda != lv.lambda) {
      r.fail("lambda " + t[3] + " does not match the partition value " +
             format_double(lv.lambda));
    }
    const long dim = r.to_int(t[5], "dim");
    if (dim != static_cast<long>(lv.dim)) {
      r.fail("dim " + t[5] + " does not match the multiplicity " + std::to_string(lv.dim));
    }
    blocks.push_back(read_matrix(r, lv.dim));
  }
  if (r.next()) r.fail("trailing content after the last level");
  return Symbol(partition, std::move(blocks));
}

GroupSymbol read_group_body(LineReader& r) {
  if (r.expect_key("manifold") != "su2") r.fail("group symbols live on su2");
  const long max_two_l = r.to_int(r.expect_key("max_two_l"), "max_two_l");
  if (max_two_l < 0 || max_two_l > kMaxTwoL) {
    r.fail("max_two_l must lie in [0, " + std::to_string(kMaxTwoL) + "]");
  }
  std::vector<CMatrix> by_rep;
  for (long two_l = 0; two_l <= max_two_l; ++two_l) {
    r.require_next("a rep record");
    const auto t = r.tokens();
    if (t.size() != 4 || t[0] != "rep" || t[2] != "dim") {
      r.fail("expected 'rep <two_l> dim <d>'");
    }
    if (r.to_int(t[1], "rep") != two_l) r.fail("expected rep " + std::to_string(two_l));
    if (r.to_int(t[3], "dim") != two_l + 1) {
      r.fail("rep " + std::to_string(two_l) + " has dimension " +
             std::to_string(two_l + 1));
    }
    by_rep.push_back(read_matrix(r, static_cast<std::size_t>(two_l + 1)));
  }
  if (r.next()) r.fail("trailing content after the last rep");
  return GroupSymbol(std::move(by_rep));
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_symbol(std::ostream& out, const Symbol& sigma) {
  const Partition& p = sigma.partition();
  out << "format_version " << kSymbolFormatVersion << '\n'
      << "kind symbol\n"
      << "manifold " << p.manifold().name() << '\n'
      << "n " << p.dim_n() << '\n'
      << "nu " << format_double(p.order_nu()) << '\n'
      << "cutoff " << format_double(p.cutoff()) << '\n'
      << "levels " << p.size() << '\n';
  for (std::size_t l = 0; l < p.size(); ++l) {
    out << "level " << l << " lambda " << format_double(p.level(l).lambda) << " dim "
        << p.level(l).dim << '\n';
    write_matrix(out, sigma[l]);
  }
}

void write_group_symbol(std::ostream& out, const GroupSymbol& tau) {
  out << "format_version " << kSymbolFormatVersion << '\n'
      << "kind group_symbol\n"
      << "manifold su2\n"
      << "max_two_l " << tau.max_two_l() << '\n';
  for (int two_l = 0; two_l <= tau.max_two_l(); ++two_l) {
    out << "rep " << two_l << " dim " << two_l + 1 << '\n';
    write_matrix(out, tau[two_l]);
  }
}

SymbolFile read_symbol_file(std::istream& in) {
  LineReader r(in);
  const long version = r.to_int(r.expect_key("format_version"), "format_version");
  if (version != kSymbolFormatVersion) {
    r.fail("unsupported format_version " + std::to_string(version));
  }
  const std::string kind = r.expect_key("kind");
  if (kind == "symbol") return read_symbol_body(r);
  if (kind == "group_symbol") return read_group_body(r);
  r.fail("kind must be 'symbol' or 'group_symbol', got '" + kind + "'");
}

Symbol read_symbol(std::istream& in) {
  SymbolFile f = read_symbol_file(in);
  if (auto* s = std::get_if<Symbol>(&f)) return std::move(*s);
  throw ValidationError("expected a symbol file, got a group symbol");
}

GroupSymbol read_group_symbol(std::istream& in) {
  SymbolFile f = read_symbol_file(in);
  if (auto* g = std::get_if<GroupSymbol>(&f)) return std::move(*g);
  throw ValidationError("expected a group symbol file, got a symbol");
}

SymbolFile load_symbol_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return read_symbol_file(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void save_symbol_file(const std::string& path, const SymbolFile& file) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  std::visit(
      [&out](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Symbol>) {
          write_symbol(out, v);
        } else {
          write_group_symbol(out, v);
        }
      },
      file);
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

}  // namespace specmult
