#include "valtree/cli.hpp"

#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "valtree/render.hpp"
#include "valtree/verify.hpp"

namespace valtree::cli {
namespace {

struct Options {
  std::string polynomial;
  std::string number;
  std::uint64_t prime = 0;
  unsigned depth = 6;
  unsigned arity = 0;  // 0: infer from the polynomial
  std::size_t window = 8;
  std::string format = "ascii";
  std::uint64_t seed = 1;
  std::size_t budget = kDefaultNodeBudget;
  std::string residues;
  unsigned level = 1;
  unsigned k = 1;
  unsigned witnesses = kDefaultWitnesses;
  std::string suite;
  unsigned degree = 2;
  std::size_t samples = 100;
  std::uint64_t n_max = 0;
  bool factorial = false;
  bool digit_sum = false;
};

// Errors that name the offending argument.
class ArgumentError : public std::runtime_error {
 public:
  ArgumentError(const std::string& arg, const std::string& what)
      : std::runtime_error(arg + ": " + what) {}
};

Prime prime_arg(std::uint64_t value) {
  try {
    return Prime(value);
  } catch (const std::invalid_argument& e) {
    throw ArgumentError("-p", e.what());
  }
}

Polynomial polynomial_arg(const std::string& text) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ArgumentError("polynomial '" + text + "'", e.what());
  }
}

Integer integer_arg(const std::string& name, const std::string& text) {
  Integer v;
  const bool negative = !text.empty() && text[0] == '-';
  if (text.empty() || v.set_str(negative ? text.substr(1) : text, 10) != 0 ||
      text.find_first_not_of("-0123456789") != std::string::npos)
    throw ArgumentError(name, "'" + text + "' is not an integer");
  return negative ? Integer(-v) : v;
}

unsigned arity_for(const Options& o, const Polynomial& f) {
  return o.arity != 0 ? o.arity : infer_arity(f);
}

int cmd_val(const Options& o, std::ostream& out) {
  const Prime p = prime_arg(o.prime);
  const Integer n = integer_arg("n", o.number);
  if (o.factorial || o.digit_sum) {
    if (n < 0) throw ArgumentError("n", "must be non-negative");
    if (!mpz_fits_ulong_p(n.get_mpz_t())) throw ArgumentError("n", "too large");
    out << (o.factorial ? factorial_valuation(n.get_ui(), p) : digit_sum(n, p)) << '\n';
    return kExitOk;
  }
  out << valuation(n, p).to_string() << '\n';
  return kExitOk;
}

int cmd_tree(const Options& o, std::ostream& out, std::ostream& err) {
  const Prime p = prime_arg(o.prime);
  const Polynomial f = polynomial_arg(o.polynomial);
  const unsigned arity = arity_for(o, f);
  try {
    const ValuationTree t = build_tree(f, p, arity, o.depth, o.budget);
    if (o.format == "dot")
      out << render_dot(t);
    else if (o.format == "json")
      out << render_json(t);
    else
      out << render_ascii(t);
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    if (o.format == "json") out << render_truncated_json(f, p, arity, o.depth, o.budget);
    err << "error: " << e.what() << " (raise --budget or lower --depth)\n";
    return kExitBudget;
  }
}

int cmd_classify(const Options& o, std::ostream& out) {
  const Prime p = prime_arg(o.prime);
  const Polynomial f = polynomial_arg(o.polynomial);
  const unsigned arity = arity_for(o, f);
  if (o.level < 1) throw ArgumentError("--level", "must be at least 1");

  TreeNode node{ResidueClass::root(arity), Star{}, {}, std::nullopt};
  node.cls.level = o.level;
  mpz_ui_pow_ui(node.cls.modulus.get_mpz_t(), p.value(), o.level);
  std::vector<std::string> parts;
  std::stringstream ss(o.residues);
  for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
  if (parts.size() != arity)
    throw ArgumentError("--residues", "expected " + std::to_string(arity) + " comma-separated values");
  for (unsigned v = 0; v < arity; ++v) {
    Integer r = integer_arg("--residues", parts[v]);
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), node.cls.modulus.get_mpz_t());
    node.cls.residues[v] = r;
  }
  if (arity == 1 && f.depends_on(Var::y))
    throw ArgumentError("--arity", "1 requested but the polynomial depends on y");

  node.label = node_label(f, node.cls, p);
  if (!is_star(node.label))
    throw ArgumentError("--residues", "class " + to_string(node.cls) + " is terminal with valuation " +
                                          to_string(node.label) + ", not a star node");
  const SplitAnalysis predicted = classify_star(f, p, node);
  const SplitAnalysis observed = brute_force_classify(f, p, node);
  if (o.format == "json") {
    Json j{{"class", to_string(node.cls)}, {"split", to_json(predicted)}};
    j["star_digits"] = predicted.star_digits;
    j["oracle_agrees"] = predicted == observed;
    out << j.dump(2) << '\n';
  } else {
    out << to_string(node.cls) << '\n' << render_ascii(predicted)
        << (predicted == observed ? "oracle agrees\n" : "ORACLE DISAGREES\n");
  }
  return predicted == observed ? kExitOk : kExitError;
}

int cmd_closed_form(const Options& o, std::ostream& out, std::ostream& err) {
  const Prime p = prime_arg(o.prime);
  const Polynomial f = polynomial_arg(o.polynomial);
  try {
    const ClosedFormReport r = closed_form(build_tree(f, p, arity_for(o, f), o.depth, o.budget));
    out << (o.format == "json" ? to_json(r).dump(2) + "\n" : render_ascii(r));
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  }
}

int cmd_grid(const Options& o, std::ostream& out) {
  const Prime p = prime_arg(o.prime);
  const Polynomial f = polynomial_arg(o.polynomial);
  const PeriodReport r = period_report(f, p, o.window, arity_for(o, f));
  if (o.format == "json")
    out << to_json(r).dump(2) << '\n';
  else if (o.format == "csv")
    out << render_csv(r);
  else {
    std::string csv = render_csv(r);
    for (auto& c : csv)
      if (c == ',') c = ' ';
    out << csv;
  }
  return kExitOk;
}

int cmd_period(const Options& o, std::ostream& out) {
  const Prime p = prime_arg(o.prime);
  const Polynomial f = polynomial_arg(o.polynomial);
  const PeriodReport r = period_report(f, p, o.window, arity_for(o, f));
  if (o.format == "json") {
    out << to_json(r).dump(2) << '\n';
    return kExitOk;
  }
  out << render_ascii(r) << "values on 0 <= m <= n < " << o.window << " {";
  bool first = true;
  for (auto v : vset(f, p, o.window)) {
    out << (first ? "" : ", ") << v;
    first = false;
  }
  out << "}\n";
  return kExitOk;
}

int cmd_stirling(const Options& o, std::ostream& out) {
  const Prime p = prime_arg(o.prime);
  try {
    const EmpiricalTreeReport r = stirling_tree(o.k, p, o.depth, o.witnesses);
    out << (o.format == "json" ? to_json(r).dump(2) + "\n" : render_ascii(r));
  } catch (const std::invalid_argument& e) {
    throw ArgumentError("stirling", e.what());
  }
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  VerifyOutcome result;
  if (o.suite == "trichotomy") {
    if (o.degree < 1) throw ArgumentError("--degree", "must be at least 1");
    result = verify_trichotomy(o.degree, prime_arg(o.prime), o.samples, o.seed, o.depth, o.budget);
  } else if (o.suite == "gradient") {
    result = verify_gradient_coefficients(o.samples, o.seed);
  } else if (o.suite == "legendre") {
    result = verify_legendre(o.n_max ? o.n_max : 500);
  } else if (o.suite == "central-binomial") {
    result = verify_central_binomial(o.n_max ? o.n_max : 200);
  } else if (o.suite == "stirling") {
    result = verify_stirling_closed_forms(static_cast<unsigned>(o.n_max ? o.n_max : 60));
  } else {
    result = verify_n2_plus_7(o.depth);
  }
  out << result.summary << '\n';
  if (!result.ok) out << result.details;
  return result.ok ? kExitOk : kExitError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic valuation trees of integer polynomials", "valtree"};
  app.require_subcommand(1);
  Options o;

  auto add_prime = [&](CLI::App* sub) { sub->add_option("-p,--prime", o.prime, "prime p")->required(); };
  auto add_poly = [&](CLI::App* sub) {
    sub->add_option("polynomial", o.polynomial, "polynomial in x, y, e.g. \"x^2 + 7\"")->required();
    sub->add_option("--arity", o.arity, "number of variables (default: inferred)")
        ->check(CLI::IsMember({1u, 2u}));
  };
  auto add_format = [&](CLI::App* sub, std::vector<std::string> formats) {
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats));
  };

  auto* val = app.add_subcommand("val", "p-adic valuation of an integer");
  val->add_option("n", o.number, "integer")->required();
  add_prime(val);
  val->add_flag("--factorial", o.factorial, "valuation of n! instead");
  val->add_flag("--digit-sum", o.digit_sum, "base-p digit sum of n instead");

  auto* tree = app.add_subcommand("tree", "build the valuation tree");
  add_poly(tree);
  add_prime(tree);
  tree->add_option("--depth", o.depth, "maximum depth")->check(CLI::Range(1u, 64u));
  tree->add_option("--budget", o.budget, "node budget");
  add_format(tree, {"ascii", "dot", "json"});

  auto* classify = app.add_subcommand("classify", "split analysis of one star node");
  add_poly(classify);
  add_prime(classify);
  classify->add_option("--residues", o.residues, "class residues, comma separated")->required();
  classify->add_option("--level", o.level, "class level k >= 1")->required();
  add_format(classify, {"ascii", "json"});

  auto* closed = app.add_subcommand("closed-form", "piecewise valuation from a finite tree");
  add_poly(closed);
  add_prime(closed);
  closed->add_option("--depth", o.depth, "maximum depth")->check(CLI::Range(1u, 64u));
  closed->add_option("--budget", o.budget, "node budget");
  add_format(closed, {"ascii", "json"});

  auto* grid = app.add_subcommand("grid", "valuations over a window");
  add_poly(grid);
  add_prime(grid);
  grid->add_option("--window", o.window, "window side N")->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  add_format(grid, {"ascii", "csv", "json"});

  auto* period = app.add_subcommand("period", "minimal period of the valuation grid");
  add_poly(period);
  add_prime(period);
  period->add_option("--window", o.window, "window side N")->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  add_format(period, {"ascii", "json"});

  auto* stirling = app.add_subcommand("stirling", "empirical class tree of nu_p(S(n,k))");
  stirling->add_option("-k", o.k, "Stirling parameter k")->required();
  add_prime(stirling);
  stirling->add_option("--depth", o.depth, "maximum depth");
  stirling->add_option("--witnesses", o.witnesses, "members sampled per class");
  add_format(stirling, {"ascii", "json"});

  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", o.suite, "suite name")
      ->required()
      ->check(CLI::IsMember({"trichotomy", "gradient", "legendre", "central-binomial", "stirling", "n2plus7"}));
  verify->add_option("-p,--prime", o.prime, "prime p (trichotomy)");
  verify->add_option("--degree", o.degree, "polynomial degree (trichotomy)");
  verify->add_option("--samples", o.samples, "number of samples");
  verify->add_option("--seed", o.seed, "random seed");
  verify->add_option("--depth", o.depth, "tree depth");
  verify->add_option("--budget", o.budget, "node budget per tree");
  verify->add_option("--n-max", o.n_max, "upper index (legendre, central-binomial, stirling)");

  std::vector<const char*> argv{"valtree"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*val) return cmd_val(o, out);
    if (*tree) return cmd_tree(o, out, err);
    if (*classify) return cmd_classify(o, out);
    if (*closed) return cmd_closed_form(o, out, err);
    if (*grid) return cmd_grid(o, out);
    if (*period) return cmd_period(o, out);
    if (*stirling) return cmd_stirling(o, out);
    return cmd_verify(o, out);
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace valtree::cli
