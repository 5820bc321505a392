#include "valtree/sequences.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace valtree {
namespace {

bool is_power_of(std::size_t d, std::uint32_t p) {
  while (d > 1 && d % p == 0) d /= p;
  return d == 1;
}

bool shift_invariant(const PeriodReport& r, std::size_t d) {
  const std::size_t rows = r.window, cols = r.arity == 2 ? r.window : 1;
  for (std::size_t n = 0; n < rows; ++n)
    for (std::size_t m = 0; m < cols; ++m) {
      if (n + d < rows && r.at(n, m) != r.at(n + d, m)) return false;
      if (r.arity == 2 && m + d < cols && r.at(n, m) != r.at(n, m + d)) return false;
    }
  return true;
}

// Upper bound on the sequence index the Stirling class tree can touch.
constexpr std::uint64_t kMaxStirlingIndex = 1u << 16;

class StirlingExplorer {
 public:
  StirlingExplorer(unsigned k, Prime p, unsigned depth, unsigned witnesses)
      : k_(k), p_(p), depth_(depth), witnesses_(witnesses) {
    Integer bound = 1;
    for (unsigned i = 0; i < depth; ++i) bound *= p.value();
    bound = bound * (witnesses + k) + k;
    if (bound > static_cast<unsigned long>(kMaxStirlingIndex))
      throw std::invalid_argument("stirling tree: depth " + std::to_string(depth) +
                                  " needs indices past " + std::to_string(kMaxStirlingIndex));
    const auto column = stirling_column(k, static_cast<unsigned>(bound.get_ui()));
    valuations_.reserve(column.size());
    for (const auto& s : column) valuations_.push_back(valuation(s, p));
  }

  EmpiricalTreeReport run() {
    EmpiricalTreeReport report{k_, p_, depth_, witnesses_, std::vector<std::size_t>(depth_ + 1, 0), {}};
    report.root = explore(0, Integer(0), Integer(1), report);
    return report;
  }

 private:
  EmpiricalNode explore(unsigned level, const Integer& residue, const Integer& modulus,
                        EmpiricalTreeReport& report) {
    EmpiricalNode node;
    node.level = level;
    node.residue = residue;
    node.modulus = modulus;

    const std::uint64_t step = modulus.get_ui();
    std::uint64_t n = residue.get_ui();
    if (n < k_) n += (k_ - n + step - 1) / step * step;
    for (unsigned w = 0; w < witnesses_; ++w, n += step) {
      const Valuation& v = valuations_.at(n);
      node.witnesses.emplace_back(n, v.value());
    }
    const unsigned first = node.witnesses.front().second;
    const bool uniform = std::all_of(node.witnesses.begin(), node.witnesses.end(),
                                     [&](const auto& w) { return w.second == first; });
    if (uniform) {
      node.status = EmpiricalNode::Status::TerminalByWitness;
      node.valuation = first;
      return node;
    }
    node.status = EmpiricalNode::Status::Mixed;
    ++report.non_terminal_per_level[level];
    if (level == depth_) return node;
    const Integer child_modulus = modulus * p_.value();
    for (std::uint32_t d = 0; d < p_.value(); ++d)
      node.children.push_back(explore(level + 1, residue + modulus * d, child_modulus, report));
    return node;
  }

  unsigned k_;
  Prime p_;
  unsigned depth_;
  unsigned witnesses_;
  std::vector<Valuation> valuations_;
};

}  // namespace

PeriodReport valuation_grid(const Polynomial& f, Prime p, std::size_t window, unsigned arity) {
  if (window < 1) throw std::invalid_argument("window must be at least 1");
  if (arity != 1 && arity != 2) throw std::invalid_argument("arity must be 1 or 2");
  if (arity == 1 && f.depends_on(Var::y))
    throw std::invalid_argument("arity 1 requested but the polynomial depends on y");

  PeriodReport r{p, window, arity, {}, {}, std::nullopt};
  const std::size_t cols = arity == 2 ? window : 1;
  r.grid.reserve(window * cols);
  for (std::size_t n = 0; n < window; ++n)
    for (std::size_t m = 0; m < cols; ++m) {
      const Valuation v = valuation(evaluate(f, Integer(static_cast<unsigned long>(n)),
                                             Integer(static_cast<unsigned long>(m))),
                                    p);
      r.grid.push_back(v);
      if (v.is_finite()) r.vset.insert(v.value());
    }
  return r;
}

std::optional<Period> minimal_period(const PeriodReport& report) {
  if (std::any_of(report.grid.begin(), report.grid.end(),
                  [](const Valuation& v) { return !v.is_finite(); }))
    return std::nullopt;
  for (std::size_t d = 1; d <= report.window / 2; ++d)
    if (report.window % d == 0 && shift_invariant(report, d))
      return Period{d, is_power_of(d, report.p.value())};
  return std::nullopt;
}

PeriodReport period_report(const Polynomial& f, Prime p, std::size_t window, unsigned arity) {
  PeriodReport r = valuation_grid(f, p, window, arity);
  r.period = minimal_period(r);
  return r;
}

std::set<unsigned> vset(const Polynomial& f, Prime p, std::size_t bound, VsetRange range) {
  if (bound < 1) throw std::invalid_argument("bound must be at least 1");
  std::set<unsigned> values;
  const bool bivariate = f.depends_on(Var::y);
  for (std::size_t n = 0; n < bound; ++n) {
    const std::size_t m_end = !bivariate ? 1 : range == VsetRange::Triangle ? n + 1 : bound;
    for (std::size_t m = 0; m < m_end; ++m) {
      const Valuation v = valuation(evaluate(f, Integer(static_cast<unsigned long>(n)),
                                             Integer(static_cast<unsigned long>(m))),
                                    p);
      if (v.is_finite()) values.insert(v.value());
    }
  }
  return values;
}

EmpiricalTreeReport stirling_tree(unsigned k, Prime p, unsigned depth, unsigned witnesses) {
  if (k < 1) throw std::invalid_argument("stirling tree: k must be at least 1");
  if (depth < 1) throw std::invalid_argument("stirling tree: depth must be at least 1");
  if (witnesses < 2) throw std::invalid_argument("stirling tree: need at least 2 witnesses");
  return StirlingExplorer(k, p, depth, witnesses).run();
}

}  // namespace valtree
