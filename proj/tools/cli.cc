// SPDX-License-Identifier: Apache-2.0
#include "cli.h"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "specmult/error.h"
#include "specmult/group.h"
#include "specmult/io.h"
#include "specmult/kernel.h"
#include "specmult/manifold.h"
#include "specmult/nuclear.h"
#include "specmult/operators.h"
#include "specmult/symbol.h"

namespace specmult {

namespace {

// One output line: "type key=value ..." or a JSON object.
class Record {
 public:
  explicit Record(std::string type) : type_(std::move(type)) {}

  Record& num(const std::string& key, double v) {
    fields_.push_back({key, format_double(v), std::isfinite(v) ? kNumber : kString});
    return *this;
  }
  Record& integer(const std::string& key, long long v) {
    fields_.push_back({key, std::to_string(v), kNumber});
    return *this;
  }
  Record& str(const std::string& key, const std::string& v) {
    fields_.push_back({key, v, kString});
    return *this;
  }
  Record& flag(const std::string& key, bool v) {
    fields_.push_back({key, v ? "true" : "false", kNumber});
    return *this;
  }

  void emit(std::ostream& out, bool json) const {
    if (json) {
      out << "{\"record\":" << nlohmann::json(type_).dump();
      for (const Field& f : fields_) {
        out << ',' << nlohmann::json(f.key).dump() << ':'
            << (f.kind == kString ? nlohmann::json(f.text).dump() : f.text);
      }
      out << "}\n";
      return;
    }
    out << type_;
    for (const Field& f : fields_) {
      const bool quote = f.text.empty() || f.text.find_first_of(" \t\"") != std::string::npos;
      out << ' ' << f.key << '=' << (quote ? nlohmann::json(f.text).dump() : f.text);
    }
    out << '\n';
  }

 private:
  enum Kind { kNumber, kString };
  struct Field {
    std::string key;
    std::string text;
    Kind kind;
  };
  std::string type_;
  std::vector<Field> fields_;
};

double parse_exponent(const std::string& s, const char* what) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw ValidationError(std::string(what) + ": '" + s + "' is not a number or 'inf'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_exponent(item, what));
  if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
  return out;
}

Symbol as_symbol(const SymbolFile& file) {
  if (const auto* s = std::get_if<Symbol>(&file)) return *s;
  const GroupSymbol& tau = std::get<GroupSymbol>(file);
  return tau_to_sigma(tau, enumerate_partition(ManifoldId::SU2(), 2.0,
                                               su2_casimir(tau.max_two_l())));
}

void emit_partition(const Partition& p, const std::vector<double>& qs, std::ostream& out,
                    bool json) {
  Record("partition")
      .str("manifold", p.manifold().name())
      .integer("n", p.dim_n())
      .num("nu", p.order_nu())
      .num("cutoff", p.cutoff())
      .integer("levels", static_cast<long long>(p.size()))
      .integer("total_dim", static_cast<long long>(p.total_dim()))
      .emit(out, json);
  for (std::size_t l = 0; l < p.size(); ++l) {
    const Level& lv = p.level(l);
    Record r("level");
    r.integer("index", static_cast<long long>(l)).num("lambda", lv.lambda);
    r.integer("dim", static_cast<long long>(lv.dim));
    if (lv.two_l >= 0) r.integer("two_l", lv.two_l);
    r.emit(out, json);
  }
  if (p.size() < 10) {
    Record("weyl").str("skipped", "fewer than 10 levels").emit(out, json);
    return;
  }
  const WeylReport w = weyl_check(p, qs);
  Record("weyl")
      .num("fitted_C", w.fitted_C)
      .num("exponent", w.exponent)
      .flag("exponent_ok", w.exponent_ok)
      .num("ratio_min", w.ratio_min)
      .num("ratio_max", w.ratio_max)
      .emit(out, json);
  for (const auto& [q, e] : w.summability) {
    Record("summability")
        .num("q", q)
        .str("verdict", e.verdict == Summability::kConvergent ? "convergent" : "divergent")
        .num("partial_sum", e.partial_sum)
        .emit(out, json);
  }
}

CoefficientMap make_operator(const std::string& spec,
                             std::shared_ptr<const FourierTransform> transform) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ValidationError("--operator: expected <kind>:<comma separated values>");
  }
  const std::string kind = spec.substr(0, colon);
  const std::vector<double> v = parse_list(spec.substr(colon + 1), "--operator");
  if (kind == "translate") return torus_translation(std::move(transform), v);
  if (kind == "character") {
    std::vector<int> j;
    for (double x : v) {
      if (x != std::round(x)) throw ValidationError("--operator: character needs integers");
      j.push_back(static_cast<int>(x));
    }
    return character_multiplication(std::move(transform), j);
  }
  if (kind == "left" || kind == "right") {
    if (v.size() != 3) throw ValidationError("--operator: SU(2) needs three Euler angles");
    const Point g{v[0], v[1], v[2]};
    return kind == "left" ? su2_left_translation(std::move(transform), g)
                          : su2_right_translation(std::move(transform), g);
  }
  throw ValidationError("--operator: unknown kind '" + kind +
                        "'; expected translate, character, left or right");
}

struct Options {
  bool json = false;
  // partition / make-symbol / invariance
  std::string manifold;
  double cutoff = 0.0;
  double nu = 2.0;
  std::string qs;
  bool identity = false;
  double power = std::numeric_limits<double>::quiet_NaN();
  bool group = false;
  // file based
  std::string input;
  std::string output;
  // analyze
  bool l2 = false;
  std::vector<double> schatten_r;
  bool trace = false;
  bool sobolev = false;
  // nuclearity
  double r = 1.0;
  std::string p1 = "2";
  std::string p2 = "2";
  std::string control = "uniform";
  std::string form = "schatten";
  double constant = 1.0;
  // kernel
  double band = -1.0;
  std::vector<std::string> mixed;
  int samples = 0;
  // invariance
  std::string op;
  double tol = kDefaultInvarianceTolerance;
};

int cmd_partition(const Options& o, std::ostream& out) {
  const PartitionPtr p = enumerate_partition(ManifoldId::Parse(o.manifold), o.nu, o.cutoff);
  const double crit = p->dim_n() / p->order_nu();
  const std::vector<double> qs =
      o.qs.empty() ? std::vector<double>{crit - 0.1, crit + 0.5} : parse_list(o.qs, "--q");
  emit_partition(*p, qs, out, o.json);
  return kExitOk;
}

int cmd_make_symbol(const Options& o, std::ostream& out) {
  if (o.identity == !std::isnan(o.power)) {
    throw ValidationError("make-symbol: give exactly one of --identity or --power");
  }
  const PartitionPtr p = enumerate_partition(ManifoldId::Parse(o.manifold), o.nu, o.cutoff);
  Symbol sigma = o.identity ? Symbol::Identity(p) : power_symbol(p, o.power);
  if (o.group) {
    save_symbol_file(o.output, sigma_to_tau(sigma));
  } else {
    save_symbol_file(o.output, sigma);
  }
  Record("make_symbol")
      .str("kind", o.group ? "group_symbol" : "symbol")
      .str("out", o.output)
      .integer("levels", static_cast<long long>(p->size()))
      .emit(out, o.json);
  return kExitOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  const Symbol sigma = as_symbol(load_symbol_file(o.input));
  const bool all = !o.l2 && o.schatten_r.empty() && !o.trace && !o.sobolev;
  if (o.l2 || all) Record("l2").num("value", l2_bound(sigma)).emit(out, o.json);
  for (double r : o.schatten_r) {
    const SchattenValue s = schatten(sigma, r);
    const NuclearityReport m = schatten_membership(sigma, r);
    Record rec("schatten");
    rec.num("r", r).num("value", s.value).num("value_pow_r", std::pow(s.value, r));
    rec.flag("finite_on_truncation", s.finite_on_truncation);
    rec.num("tail_exponent", m.tail_exponent).num("critical_exponent", m.critical_exponent);
    rec.str("membership", m.verdict == NuclearVerdict::kHolds   ? "member"
                          : m.verdict == NuclearVerdict::kFails ? "not_member"
                                                                : "inconclusive");
    rec.flag("analytic", m.analytic);
    if (m.recognized_alpha) rec.num("recognized_alpha", *m.recognized_alpha);
    rec.emit(out, o.json);
  }
  if (o.trace || all) {
    const TraceResult t = trace_formula(sigma);
    Record("trace").num("re", t.value.real()).num("im", t.value.imag()).emit(out, o.json);
    for (const std::string& w : t.warnings) Record("warning").str("message", w).emit(out, o.json);
  }
  if (o.sobolev) {
    const SobolevOrder s = sobolev_order(sigma);
    Record("sobolev").num("m_est", s.m_est).num("C_est", s.C_est).emit(out, o.json);
  }
  return kExitOk;
}

int cmd_nuclearity(const Options& o, std::ostream& out) {
  const double p1 = parse_exponent(o.p1, "--p1");
  const double p2 = parse_exponent(o.p2, "--p2");
  if (!(o.r > 0.0 && o.r <= 1.0)) {
    throw ValidationError("--r must lie in (0, 1], got " + format_double(o.r));
  }
  const Symbol sigma = as_symbol(load_symbol_file(o.input));
  const PartitionPtr& p = sigma.partition_ptr();
  LambdaControl control = LambdaControl::Uniform();
  switch (LambdaControl::ParseKind(o.control)) {
    case LambdaControl::Kind::kUniform:
      control = LambdaControl::Uniform(o.constant);
      break;
    case LambdaControl::Kind::kHormander:
      control = LambdaControl::Hormander(o.constant);
      break;
    case LambdaControl::Kind::kGroupSqrtDim:
      control = LambdaControl::GroupSqrtDim();
      break;
    case LambdaControl::Kind::kEmpirical:
      control = LambdaControl::Empirical(*p, *build_quadrature(*p, p->max_lambda()));
      break;
  }
  NuclearForm form = NuclearForm::kSchattenBlock;
  if (o.form == "entrywise") {
    form = NuclearForm::kEntryWise;
  } else if (o.form != "schatten") {
    throw ValidationError("--form must be 'schatten' or 'entrywise'");
  }
  const NuclearityReport rep = nuclearity_sum(sigma, o.r, p1, p2, control, form);
  Record rec("nuclearity");
  rec.num("r", o.r).num("p1", p1).num("p2", p2);
  rec.str("control", LambdaControl::KindName(control.kind())).str("form", o.form);
  rec.num("partial_sum", rep.partial_sum);
  rec.num("tail_exponent", rep.tail_exponent).num("critical_exponent", rep.critical_exponent);
  rec.str("verdict", verdict_name(rep.verdict)).flag("analytic", rep.analytic);
  if (rep.threshold_alpha) rec.num("threshold_alpha", *rep.threshold_alpha);
  if (rep.recognized_alpha) rec.num("recognized_alpha", *rep.recognized_alpha);
  if (!rep.analytic) rec.num("fit_stderr", rep.fit_stderr);
  rec.emit(out, o.json);
  return kExitOk;
}

int cmd_convert(const Options& o, std::ostream& out) {
  const SymbolFile in = load_symbol_file(o.input);
  const bool from_symbol = std::holds_alternative<Symbol>(in);
  if (from_symbol) {
    const Symbol& sigma = std::get<Symbol>(in);
    if (!sigma.partition().manifold().is_su2()) {
      throw ValidationError("convert: only su2 symbols have a group form");
    }
    save_symbol_file(o.output, sigma_to_tau(sigma));
  } else {
    save_symbol_file(o.output, as_symbol(in));
  }
  Record("convert")
      .str("from", from_symbol ? "symbol" : "group_symbol")
      .str("to", from_symbol ? "group_symbol" : "symbol")
      .str("out", o.output)
      .emit(out, o.json);
  return kExitOk;
}

int cmd_kernel(const Options& o, std::ostream& out) {
  const Symbol sigma = as_symbol(load_symbol_file(o.input));
  const Partition& p = sigma.partition();
  const double band = o.band < 0.0 ? p.max_lambda() : o.band;
  const GridPtr grid = build_quadrature(p, band);
  const GridKernel k = synthesize(sigma, grid);
  const Complex tr = kernel_trace(k);
  Record("kernel")
      .integer("nodes", static_cast<long long>(k.size()))
      .num("band", band)
      .num("trace_re", tr.real())
      .num("trace_im", tr.imag())
      .num("hilbert_schmidt", schatten(sigma, 2.0).value)
      .emit(out, o.json);
  if (!o.mixed.empty()) {
    if (o.mixed.size() != 2) throw ValidationError("--mixed-norm takes two exponents");
    const double p1 = parse_exponent(o.mixed[0], "--mixed-norm");
    const double p2 = parse_exponent(o.mixed[1], "--mixed-norm");
    const MixedNorm m = mixed_norm(k, p1, p2);
    Record("mixed_norm")
        .num("p1", p1)
        .num("p2", p2)
        .num("xy", m.xy)
        .num("yx", m.yx)
        .num("lp1p2", m.lp1p2)
        .emit(out, o.json);
  }
  if (o.samples < 0) throw ValidationError("--samples must be non-negative");
  const std::size_t n = k.size();
  for (std::size_t s = 0; s < std::min<std::size_t>(o.samples, n * n); ++s) {
    const std::size_t i = s / n;
    const std::size_t j = s % n;
    const Point& x = grid->nodes[i];
    const Point& y = grid->nodes[j];
    Record("sample")
        .integer("i", static_cast<long long>(i))
        .integer("j", static_cast<long long>(j))
        .num("x0", x[0]).num("x1", x[1]).num("x2", x[2])
        .num("y0", y[0]).num("y1", y[1]).num("y2", y[2])
        .num("re", k.values(i, j).real())
        .num("im", k.values(i, j).imag())
        .emit(out, o.json);
  }
  if (!o.output.empty()) {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + o.output + "'");
    write_kernel(f, k);
    Record("kernel_file").str("out", o.output).emit(out, o.json);
  }
  return kExitOk;
}

int cmd_invariance(const Options& o, std::ostream& out) {
  const PartitionPtr p = enumerate_partition(ManifoldId::Parse(o.manifold), o.nu, o.cutoff);
  auto transform =
      std::make_shared<const FourierTransform>(p, build_quadrature(*p, p->max_lambda()));
  const InvarianceReport rep = check_invariance(make_operator(o.op, transform), p, o.tol);
  Record("invariance")
      .str("operator", o.op)
      .num("max_offblock", rep.max_offblock)
      .num("tolerance", rep.tolerance)
      .flag("verdict", rep.verdict)
      .emit(out, o.json);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix symbols of invariant operators on tori and SU(2)", "specmult"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "Emit JSON lines instead of text records");

  auto* part = app.add_subcommand("partition", "Eigenvalue levels and Weyl-law report");
  part->add_option("--manifold", o.manifold, "torus1|torus2|torus3|su2")->required();
  part->add_option("--cutoff", o.cutoff, "Largest retained eigenvalue")->required();
  part->add_option("--nu", o.nu, "Order of the reference operator");
  part->add_option("--q", o.qs, "Comma separated summability exponents");
  part->add_flag("--json", o.json);

  auto* make = app.add_subcommand("make-symbol", "Write an identity or power symbol file");
  make->add_option("--manifold", o.manifold)->required();
  make->add_option("--cutoff", o.cutoff)->required();
  make->add_option("--nu", o.nu);
  make->add_flag("--identity", o.identity, "sigma = I");
  make->add_option("--power", o.power, "sigma = (I + E)^{-alpha/nu}");
  make->add_flag("--group", o.group, "Write the SU(2) group symbol instead");
  make->add_option("--out", o.output)->required();
  make->add_flag("--json", o.json);

  auto* analyze = app.add_subcommand("analyze", "L2 bound, Schatten norms, trace, Sobolev order");
  analyze->add_option("file", o.input)->required();
  analyze->add_flag("--l2", o.l2);
  analyze->add_option("--schatten", o.schatten_r, "Schatten exponent r (repeatable)");
  analyze->add_flag("--trace", o.trace);
  analyze->add_flag("--sobolev", o.sobolev);
  analyze->add_flag("--json", o.json);

  auto* nuc = app.add_subcommand("nuclearity", "Sufficient condition for r-nuclearity");
  nuc->add_option("file", o.input)->required();
  nuc->add_option("--r", o.r);
  nuc->add_option("--p1", o.p1);
  nuc->add_option("--p2", o.p2);
  nuc->add_option("--control", o.control, "uniform|hormander|group-sqrt-dim|empirical");
  nuc->add_option("--form", o.form, "schatten|entrywise");
  nuc->add_option("--constant", o.constant, "Constant of the uniform/hormander control");
  nuc->add_flag("--json", o.json);

  auto* conv = app.add_subcommand("convert", "Group symbol <-> symbol on SU(2)");
  conv->add_option("file", o.input)->required();
  conv->add_option("--out", o.output)->required();
  conv->add_flag("--json", o.json);

  auto* kern = app.add_subcommand("kernel", "Synthesize the kernel on a quadrature grid");
  kern->add_option("file", o.input)->required();
  kern->add_option("--grid-band", o.band, "Grid band limit (default: largest eigenvalue)");
  kern->add_option("--mixed-norm", o.mixed, "p1 p2")->expected(2);
  kern->add_option("--samples", o.samples, "Print the first N kernel values");
  kern->add_option("--out", o.output, "Binary kernel export");
  kern->add_flag("--json", o.json);

  auto* inv = app.add_subcommand("invariance", "Test a concrete operator for invariance");
  inv->add_option("--manifold", o.manifold)->required();
  inv->add_option("--cutoff", o.cutoff)->required();
  inv->add_option("--nu", o.nu);
  inv->add_option("--operator", o.op,
                  "translate:a[,b,c] | character:j[,k,l] | left:a,b,g | right:a,b,g")
      ->required();
  inv->add_option("--tol", o.tol);
  inv->add_flag("--json", o.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*part) return cmd_partition(o, out);
    if (*make) return cmd_make_symbol(o, out);
    if (*analyze) return cmd_analyze(o, out);
    if (*nuc) return cmd_nuclearity(o, out);
    if (*conv) return cmd_convert(o, out);
    if (*kern) return cmd_kernel(o, out);
    if (*inv) return cmd_invariance(o, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace specmult
