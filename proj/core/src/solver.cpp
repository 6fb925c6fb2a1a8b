#include "momentforge/solver.hpp"

#include <algorithm>
#include <functional>

#include "momentforge/printer.hpp"

namespace momentforge {

const ExpPoly& SolveResult::closed_form(const Monomial& m) const {
  auto it = solved.find(m);
  if (it != solved.end()) return it->second;
  for (const auto& f : failures) {
    for (const auto& fm : f.monomials) {
      if (fm == m) throw Error(f.code, f.reason);
    }
  }
  fail(ErrorCode::Internal, "monomial not in solve result: " + monomial_to_string(m));
}

ExpPoly SolveResult::combo_closed_form(const GoalCombo& combo) const {
  ExpPoly out;
  for (const auto& [mono, coeff] : combo) {
    out = out + closed_form(mono).scaled(Surd(coeff));
  }
  return out.simplified();
}

namespace {

// Tarjan SCC; emits components with all dependencies in earlier components
// (edges i -> j mean row i references column j).
std::vector<std::vector<std::size_t>> scc_components(
    const std::vector<std::vector<Scalar>>& matrix) {
  const std::size_t n = matrix.size();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  int counter = 0;

  std::function<void(std::size_t)> strongconnect = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (matrix[v][w].is_zero()) continue;
      if (index[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      while (true) {
        std::size_t w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
        if (w == v) break;
      }
      std::sort(comp.begin(), comp.end());
      components.push_back(std::move(comp));
    }
  };

  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) strongconnect(v);
  }
  return components;
}

struct Candidate {
  Surd base;
  unsigned max_degree;  // polynomial degree bound in the ansatz
};

// Gauss-Jordan over the quadratic extension with several right-hand sides
// (columns of rhs); returns nullopt when singular.
std::optional<std::vector<std::vector<Surd>>> solve_linear_multi(
    std::vector<std::vector<Surd>> m, std::vector<std::vector<Surd>> rhs) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t r = col; r < n; ++r) {
      if (!m[r][col].is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot == n) return std::nullopt;
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    Surd inv = m[col][col].inverse();
    for (std::size_t c = col; c < n; ++c) m[col][c] = m[col][c] * inv;
    for (auto& v : rhs[col]) v = v * inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      Surd f = m[r][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] = m[r][c] - f * m[col][c];
      for (std::size_t k = 0; k < rhs[r].size(); ++k) {
        rhs[r][k] = rhs[r][k] - f * rhs[col][k];
      }
    }
  }
  return rhs;
}

}  // namespace

SolveResult solve(const RecurrenceSystem& sys) {
  SolveResult result;
  const std::size_t dim = sys.size();
  if (dim == 0) return result;

  auto components = scc_components(sys.matrix);

  // One forward sweep covers fitting, verification and corrections for every
  // component: the largest window is dim + unknowns + 5 <= 2*dim + 6.
  const std::uint64_t n0 = dim + 1;
  const std::uint64_t horizon = n0 + dim + 6;
  auto seq = forward_eval_sequence(sys, horizon);

  std::vector<char> failed(dim, 0);

  for (const auto& comp : components) {
    std::vector<Monomial> comp_monomials;
    for (auto i : comp) comp_monomials.push_back(sys.monomials[i]);

    auto record_failure = [&](ErrorCode code, const std::string& reason) {
      result.failures.push_back(BlockFailure{comp_monomials, code, reason});
      for (auto i : comp) {
        failed[i] = 1;
        result.solved.erase(sys.monomials[i]);
      }
    };

    // Forcing must be fully solved.
    bool dep_failed = false;
    for (auto i : comp) {
      for (std::size_t j = 0; j < dim; ++j) {
        if (sys.matrix[i][j].is_zero()) continue;
        if (failed[j]) dep_failed = true;
      }
    }
    if (dep_failed) {
      record_failure(ErrorCode::UnsupportedAlgebraicDegree,
                     "depends on a block without a closed form");
      continue;
    }

    // Candidate bases: component eigenvalues and forcing bases. Eigenvalues
    // outside the supported field are dropped here; symbolic verification
    // below proves whether the solution actually avoids those modes.
    std::map<Surd, unsigned> root_mult;
    std::string unresolved_modes;
    bool symbolic_entries = false;
    for (auto i : comp) {
      for (auto j : comp) {
        if (!sys.matrix[i][j].is_rational() && !sys.matrix[i][j].is_zero()) {
          symbolic_entries = true;
        }
      }
    }
    try {
      if (symbolic_entries) {
        if (comp.size() > 1) {
          record_failure(ErrorCode::SymbolicCharPoly,
                         "coupled block of size " + std::to_string(comp.size()) +
                             " with symbolic coefficients");
          continue;
        }
        Scalar c = sys.matrix[comp[0]][comp[0]];
        if (!c.is_zero()) root_mult[Surd(c)] = 1;
      } else {
        std::vector<std::vector<Rational>> block(comp.size(),
                                                 std::vector<Rational>(comp.size()));
        for (std::size_t bi = 0; bi < comp.size(); ++bi) {
          for (std::size_t bj = 0; bj < comp.size(); ++bj) {
            block[bi][bj] = sys.matrix[comp[bi]][comp[bj]].as_rational();
          }
        }
        CharRoots roots = factor_char_poly(char_poly(block));
        for (const auto& r : roots.roots) root_mult[r.value] += r.multiplicity;
        unresolved_modes = roots.unresolved;
      }

      // Forcing from already-solved components, as explicit functions.
      std::vector<ExpPoly> forcing(comp.size());
      std::map<Surd, int> forcing_degree;  // max coefficient-poly degree per base
      for (std::size_t k = 0; k < comp.size(); ++k) {
        std::size_t i = comp[k];
        for (std::size_t j = 0; j < dim; ++j) {
          if (sys.matrix[i][j].is_zero()) continue;
          if (std::find(comp.begin(), comp.end(), j) != comp.end()) continue;
          const ExpPoly& f = result.solved.at(sys.monomials[j]);
          forcing[k] = forcing[k] + f.scaled(Surd(sys.matrix[i][j]));
          for (const auto& t : f.terms()) {
            auto it = forcing_degree.find(t.base);
            int d = static_cast<int>(t.degree());
            if (it == forcing_degree.end() || it->second < d) forcing_degree[t.base] = d;
          }
        }
      }

      std::vector<Candidate> candidates;
      for (const auto& [base, mult] : root_mult) {
        auto fit = forcing_degree.find(base);
        unsigned deg = (fit == forcing_degree.end())
                           ? mult - 1
                           : mult + static_cast<unsigned>(fit->second);
        candidates.push_back(Candidate{base, deg});
      }
      for (const auto& [base, d] : forcing_degree) {
        if (root_mult.count(base)) continue;
        candidates.push_back(Candidate{base, static_cast<unsigned>(d)});
      }

      // One quadratic extension per value.
      std::uint64_t ext = 1;
      for (const auto& c : candidates) {
        if (c.base.d() == 1) continue;
        if (ext == 1) {
          ext = c.base.d();
        } else if (ext != c.base.d()) {
          fail(ErrorCode::UnsupportedAlgebraicDegree,
               "bases require two distinct quadratic extensions (sqrt(" +
                   std::to_string(ext) + ") and sqrt(" + std::to_string(c.base.d()) + "))");
        }
      }

      std::size_t unknowns = 0;
      for (const auto& c : candidates) unknowns += c.max_degree + 1;

      auto unresolved_failure = [&](const std::string& where) -> void {
        if (!unresolved_modes.empty()) {
          fail(ErrorCode::UnsupportedAlgebraicDegree,
               unresolved_modes + " contributes to " + where);
        }
        fail(ErrorCode::Internal, "ansatz verification failed for " + where);
      };

      std::vector<ExpPoly> sols(comp.size());
      if (unknowns > 0) {
        // Fit matrix rows at n = n0 .. n0+unknowns-1, shared by all components.
        std::vector<std::vector<Surd>> fit(unknowns, std::vector<Surd>(unknowns));
        std::vector<std::vector<Surd>> rhs(unknowns, std::vector<Surd>(comp.size()));
        for (std::size_t r = 0; r < unknowns; ++r) {
          std::uint64_t n = n0 + r;
          std::size_t c = 0;
          for (const auto& cand : candidates) {
            Surd pw = cand.base.pow(n);
            Surd npow(Scalar(Rational(1)));
            Surd nval(Scalar(Rational(static_cast<long>(n))));
            for (unsigned dgr = 0; dgr <= cand.max_degree; ++dgr) {
              fit[r][c++] = npow * pw;
              npow = npow * nval;
            }
          }
          for (std::size_t k = 0; k < comp.size(); ++k) {
            rhs[r][k] = Surd(seq[n][comp[k]]);
          }
        }
        auto all_coeffs = solve_linear_multi(fit, rhs);
        if (!all_coeffs) {
          fail(ErrorCode::Internal, "singular ansatz system");
        }
        for (std::size_t k = 0; k < comp.size(); ++k) {
          ExpPoly f;
          std::size_t c = 0;
          for (const auto& cand : candidates) {
            std::vector<Surd> poly;
            for (unsigned dgr = 0; dgr <= cand.max_degree; ++dgr) {
              poly.push_back((*all_coeffs)[c++][k]);
            }
            f.add_term(ExpTerm{std::move(poly), cand.base});
          }
          sols[k] = f.simplified();
        }
      }

      // Five extra forward terms catch a wrong tail cheaply.
      for (std::size_t k = 0; k < comp.size(); ++k) {
        for (std::uint64_t n = n0 + unknowns; n < n0 + unknowns + 5 && n < seq.size(); ++n) {
          if (!(sols[k].eval_tail(n) == Surd(seq[n][comp[k]]))) {
            unresolved_failure(monomial_to_string(sys.monomials[comp[k]]));
          }
        }
        // Transient corrections below the fitting window make the form exact
        // at every n.
        for (std::uint64_t n = 0; n < n0; ++n) {
          Surd want(seq[n][comp[k]]);
          Surd have = sols[k].eval_tail(n);
          if (!(want == have)) sols[k].add_correction(n, want - have);
        }
        sols[k] = sols[k].simplified();
      }

      // Proof by substitution: f_k(n+1) = sum over the component + forcing,
      // as an identity of exact functions, plus the initial value. Together
      // with induction this pins the closed form for every n.
      for (std::size_t k = 0; k < comp.size(); ++k) {
        std::size_t i = comp[k];
        ExpPoly rhs_fn = forcing[k];
        for (std::size_t l = 0; l < comp.size(); ++l) {
          const Scalar& cij = sys.matrix[i][comp[l]];
          if (cij.is_zero()) continue;
          rhs_fn = rhs_fn + sols[l].scaled(Surd(cij));
        }
        ExpPoly residual = sols[k].shifted() - rhs_fn;
        if (!residual.simplified().is_zero()) {
          unresolved_failure(monomial_to_string(sys.monomials[i]));
        }
        if (!(sols[k].eval(0) == Surd(sys.initials[i]))) {
          fail(ErrorCode::Internal, "initial value mismatch in solved form");
        }
      }

      for (std::size_t k = 0; k < comp.size(); ++k) {
        result.solved[sys.monomials[comp[k]]] = sols[k];
      }
    } catch (const Error& e) {
      record_failure(e.code(), e.what());
      continue;
    }
  }
  return result;
}

}  // namespace momentforge
