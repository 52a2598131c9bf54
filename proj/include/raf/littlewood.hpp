#pragma once

// Exhaustive root sets of polynomials with coefficients from a fixed finite
// alphabet: Z_n (coefficients +-1) and W_n (coefficients +-1 +-i).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "raf/error.hpp"
#include "raf/parallel.hpp"
#include "raf/polynomial.hpp"
#include "raf/zerofinder.hpp"

namespace raf {

enum class Alphabet { PlusMinusOne, Quaternary };

inline std::vector<cplx> alphabet_atoms(Alphabet a) {
  if (a == Alphabet::PlusMinusOne) return {cplx{1.0, 0.0}, cplx{-1.0, 0.0}};
  return {cplx{1.0, 1.0}, cplx{1.0, -1.0}, cplx{-1.0, 1.0}, cplx{-1.0, -1.0}};
}

inline std::string alphabet_name(Alphabet a) { return a == Alphabet::PlusMinusOne ? "pm1" : "quaternary"; }

inline Alphabet parse_alphabet(std::string_view s) {
  if (s == "pm1" || s == "plus-minus-one" || s == "rademacher") return Alphabet::PlusMinusOne;
  if (s == "quaternary" || s == "quad") return Alphabet::Quaternary;
  throw DomainError("unknown alphabet '" + std::string(s) + "' (expected pm1 or quaternary)");
}

/// |alphabet|^(n+1), or nullopt-like max on overflow.
inline std::uint64_t sequence_count(std::size_t n, Alphabet a) {
  const std::uint64_t base = alphabet_atoms(a).size();
  std::uint64_t total = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    if (total > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
    total *= base;
  }
  return total;
}

/// Coefficients of the sequence with base-|A| index `index`, digit k (little-endian) selecting X_k.
inline Polynomial sequence_polynomial(std::uint64_t index, std::size_t n, std::span<const cplx> atoms) {
  std::vector<cplx> c(n + 1);
  const std::uint64_t base = atoms.size();
  for (std::size_t k = 0; k <= n; ++k) {
    c[k] = atoms[index % base];
    index /= base;
  }
  return Polynomial(std::move(c));
}

struct RootAtlas {
  std::size_t n = 0;
  Alphabet alphabet = Alphabet::PlusMinusOne;
  /// n roots per coefficient sequence, repeated by multiplicity, sorted by (re, im).
  std::vector<cplx> roots;
};

struct EnumerateOptions {
  std::uint64_t budget = 10'000'000;
  /// Solve one sequence per orbit of global unit scaling (X -> -X, and X -> iX for
  /// the quaternary alphabet) and copy its roots to the rest of the orbit.
  bool quotient = false;
  unsigned workers = 1;
};

/// Roots of every polynomial sum_k X_k z^k, k = 0..n, with all X_k in the alphabet.
inline RootAtlas enumerate_roots(std::size_t n, Alphabet alphabet, const EnumerateOptions& opt = {}) {
  if (n == 0) throw DomainError("enumerate_roots: degree must be at least 1");
  const auto atoms = alphabet_atoms(alphabet);
  const std::uint64_t sequences = sequence_count(n, alphabet);
  if (sequences == std::numeric_limits<std::uint64_t>::max() || sequences > opt.budget / n)
    throw BudgetExceeded("enumerating degree " + std::to_string(n) + " over " + alphabet_name(alphabet) +
                         " exceeds the root budget of " + std::to_string(opt.budget));

  RootAtlas atlas{n, alphabet, std::vector<cplx>(sequences * n)};
  const std::uint64_t base = atoms.size();
  if (!opt.quotient) {
    parallel_for(sequences, opt.workers, [&](std::size_t idx) {
      const auto roots = aberth_root_list(sequence_polynomial(idx, n, atoms));
      std::copy(roots.begin(), roots.end(), atlas.roots.begin() + static_cast<std::ptrdiff_t>(idx * n));
    });
  } else {
    // Unit scaling acts simply transitively on the alphabet, so fixing the leading
    // coefficient to atoms[0] picks one sequence per orbit. Monic normalization makes
    // the orbit members' polynomials bitwise identical.
    const std::uint64_t reps = sequences / base;
    parallel_for(reps, opt.workers, [&](std::size_t idx) {
      const auto roots = aberth_root_list(sequence_polynomial(idx, n, atoms));
      for (std::uint64_t g = 0; g < base; ++g) {
        const std::uint64_t slot = (idx * base + g) * n;
        std::copy(roots.begin(), roots.end(), atlas.roots.begin() + static_cast<std::ptrdiff_t>(slot));
      }
    });
  }
  std::sort(atlas.roots.begin(), atlas.roots.end(), detail::lex_less);
  return atlas;
}

/// Distance from `center` to the nearest root farther than exclusion_tol; +infinity if none.
inline double hole_radius(std::span<const cplx> roots, cplx center, double exclusion_tol = 1e-6) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& z : roots) {
    const double d = std::abs(z - center);
    if (d > exclusion_tol) best = std::min(best, d);
  }
  return best;
}

inline double hole_radius(const RootAtlas& atlas, cplx center, double exclusion_tol = 1e-6) {
  return hole_radius(atlas.roots, center, exclusion_tol);
}

/// True when a and b can be paired one-to-one with every pair within tol.
/// Greedy matching on a grid of cell size tol.
inline bool multiset_match(std::span<const cplx> a, std::span<const cplx> b, double tol) {
  if (a.size() != b.size()) return false;
  using Key = std::tuple<std::int64_t, std::int64_t, std::uint32_t>;
  auto cell = [tol](double v) { return static_cast<std::int64_t>(std::floor(v / tol)); };
  std::vector<Key> grid(b.size());
  for (std::size_t k = 0; k < b.size(); ++k)
    grid[k] = {cell(b[k].real()), cell(b[k].imag()), static_cast<std::uint32_t>(k)};
  std::sort(grid.begin(), grid.end());
  std::vector<bool> used(b.size(), false);
  for (const auto& z : a) {
    const std::int64_t cx = cell(z.real());
    const std::int64_t cy = cell(z.imag());
    bool found = false;
    for (std::int64_t dx = -1; dx <= 1 && !found; ++dx) {
      for (std::int64_t dy = -1; dy <= 1 && !found; ++dy) {
        auto lo = std::lower_bound(grid.begin(), grid.end(), Key{cx + dx, cy + dy, 0});
        for (auto it = lo; it != grid.end() && std::get<0>(*it) == cx + dx && std::get<1>(*it) == cy + dy; ++it) {
          const auto k = std::get<2>(*it);
          if (!used[k] && std::abs(b[k] - z) <= tol) {
            used[k] = true;
            found = true;
            break;
          }
        }
      }
    }
    if (!found) return false;
  }
  return true;
}

/// Whether the root multiset is mapped onto itself by `transform`, within tol.
inline bool closed_under(std::span<const cplx> roots, const std::function<cplx(cplx)>& transform, double tol = 1e-9) {
  std::vector<cplx> image(roots.size());
  std::transform(roots.begin(), roots.end(), image.begin(), transform);
  return multiset_match(image, roots, tol);
}

}  // namespace raf
