#pragma once

// Occupation-word utilities for fermionic Fock configurations on a ring.
//
// A configuration holds one L-bit word per spin species; bit j (0-based) is
// the occupation of site j+1. Fermionic mode order for sign purposes is all
// spin-up modes (sites 1..L) followed by all spin-down modes, so Jordan-Wigner
// parities for same-spin hops are local to that spin's word.

#include <cstdint>
#include <optional>
#include <utility>

namespace ehmep {

using Word = std::uint64_t;

enum class Spin : int { up = 0, down = 1 };

inline constexpr Spin kSpins[2] = {Spin::up, Spin::down};

struct Config {
  Word up = 0;
  Word down = 0;

  friend bool operator==(const Config&, const Config&) = default;
  friend auto operator<=>(const Config& a, const Config& b) {
    if (a.up != b.up) return a.up <=> b.up;
    return a.down <=> b.down;
  }

  Word word(Spin s) const { return s == Spin::up ? up : down; }
  Word& word(Spin s) { return s == Spin::up ? up : down; }
};

inline int popcount(Word w) { return __builtin_popcountll(w); }

inline Word mask_bits(int L) {
  return L >= 64 ? ~Word{0} : ((Word{1} << L) - 1);
}

// Cyclic shift moving bit j to bit j+1 (site j -> j+1).
inline Word rotl_ring(Word w, int L) {
  return ((w << 1) | (w >> (L - 1))) & mask_bits(L);
}

// Cyclic shift moving bit j+1 to bit j.
inline Word rotr_ring(Word w, int L) {
  return ((w >> 1) | (w << (L - 1))) & mask_bits(L);
}

inline bool occupied(Word w, int site) { return (w >> site) & 1; }

// Number of occupied modes strictly below `site` within one spin's word.
inline int parity_below(Word w, int site) {
  return popcount(w & ((Word{1} << site) - 1));
}

// Jordan-Wigner phase of one annihilation/creation at (site, spin); the mode
// index of (site, up) is site, of (site, down) is L + site.
inline int jw_exponent(Config c, Spin s, int site) {
  int p = parity_below(c.word(s), site);
  if (s == Spin::down) p += popcount(c.up);
  return p;
}

// a_{site,spin} |c>; empty optional when the mode is unoccupied.
inline std::optional<std::pair<Config, int>> apply_annihilate(Config c, Spin s,
                                                              int site) {
  if (!occupied(c.word(s), site)) return std::nullopt;
  const int sign = (jw_exponent(c, s, site) & 1) ? -1 : 1;
  c.word(s) &= ~(Word{1} << site);
  return std::pair{c, sign};
}

// a^dag_{site,spin} |c>; empty optional when the mode is occupied.
inline std::optional<std::pair<Config, int>> apply_create(Config c, Spin s,
                                                          int site) {
  if (occupied(c.word(s), site)) return std::nullopt;
  const int sign = (jw_exponent(c, s, site) & 1) ? -1 : 1;
  c.word(s) |= Word{1} << site;
  return std::pair{c, sign};
}

struct HopResult {
  Config target;
  int sign;  // +1 or -1
};

// Matrix element of a^dag_{to,s} a_{from,s}: hop of one fermion, with the
// Jordan-Wigner parity of the modes crossed. Empty when the term kills |c>.
inline std::optional<HopResult> hop(Config c, Spin s, int from, int to) {
  auto ann = apply_annihilate(c, s, from);
  if (!ann) return std::nullopt;
  auto cre = apply_create(ann->first, s, to);
  if (!cre) return std::nullopt;
  return HopResult{cre->first, ann->second * cre->second};
}

struct Translated {
  Config config;
  int sign;
};

// One-site translation j -> j+1 on the ring, with the fermionic sign picked
// up by cycling the top mode of each spin word past the other n-1 occupied
// modes of that species.
inline Translated translate_one(Config c, int L) {
  int exponent = 0;
  for (Spin s : kSpins) {
    const Word w = c.word(s);
    if (occupied(w, L - 1)) exponent += popcount(w) - 1;
  }
  return {Config{rotl_ring(c.up, L), rotl_ring(c.down, L)},
          (exponent & 1) ? -1 : 1};
}

// Density helpers used by the diagonal Hamiltonian terms.
inline int double_occupancy(Config c) { return popcount(c.up & c.down); }

// Sum over ring bonds of n_j * n_{j+1}, n_j = n_{j,up} + n_{j,down}.
inline int neighbor_density_sum(Config c, int L) {
  const Word u = c.up, d = c.down;
  const Word ru = rotl_ring(u, L), rd = rotl_ring(d, L);
  return popcount(u & ru) + popcount(u & rd) + popcount(d & ru) +
         popcount(d & rd);
}

}  // namespace ehmep
