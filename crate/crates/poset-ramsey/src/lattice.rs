//! Ground representation of Boolean lattices: vertex sets as bitmasks,
//! blue/red colorings as bit vectors, and the order predicates everything
//! else builds on.
//!
//! The ground set of `Q_N` is always the index set `{0, …, N−1}`; a vertex
//! is a subset encoded as an `N`-bit mask. Vertex iteration order is colex
//! within layers, numeric mask order globally, and every "first found"
//! result in the crate is defined relative to this order.

use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported lattice dimension; a full coloring of `Q_N` stores
/// `2^N` bits, so 24 keeps everything desk-scale.
pub const MAX_DIM: u8 = 24;

/// A vertex of a Boolean lattice: a subset of `{0, …, N−1}` as a bitmask.
///
/// The ambient dimension is contextual; operations that need it take it as
/// a parameter and require `mask < 2^N`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct VertexSet(u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_mask(mask: u32) -> Self {
        VertexSet(mask)
    }

    /// The full ground set of `Q_n`.
    pub fn full(n: u8) -> Self {
        debug_assert!(n <= 32);
        if n == 32 {
            VertexSet(u32::MAX)
        } else {
            VertexSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(elem: u8) -> Self {
        VertexSet(1 << elem)
    }

    pub fn from_elements(elems: &[u8]) -> Self {
        VertexSet(elems.iter().fold(0, |m, &e| m | (1 << e)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// Number of elements.
    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, elem: u8) -> bool {
        self.0 & (1 << elem) != 0
    }

    pub fn insert(self, elem: u8) -> Self {
        VertexSet(self.0 | (1 << elem))
    }

    pub fn remove(self, elem: u8) -> Self {
        VertexSet(self.0 & !(1 << elem))
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset_of(self, other: Self) -> bool {
        self != other && self.is_subset_of(other)
    }

    /// True iff the two sets are comparable under inclusion.
    pub fn comparable(self, other: Self) -> bool {
        self.is_subset_of(other) || other.is_subset_of(self)
    }

    pub fn fits_in(self, n: u8) -> bool {
        self.is_subset_of(Self::full(n))
    }

    pub fn complement_in(self, n: u8) -> Self {
        Self::full(n).difference(self)
    }

    /// Elements in increasing index order.
    pub fn elements(self) -> impl Iterator<Item = u8> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let e = rest.trailing_zeros() as u8;
                rest &= rest - 1;
                Some(e)
            }
        })
    }

    /// Lowest element index, if nonempty.
    pub fn min_element(self) -> Option<u8> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as u8)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One of the two colors of a lattice coloring.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Blue => Color::Red,
            Color::Red => Color::Blue,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Blue => write!(f, "blue"),
            Color::Red => write!(f, "red"),
        }
    }
}

/// A blue/red coloring of all `2^N` vertices of `Q_N`.
///
/// Stored as a bit vector indexed by vertex mask; a set bit means blue.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeColoring {
    n: u8,
    blue: Vec<u64>,
}

fn word_count(n: u8) -> usize {
    ((1usize << n) + 63) / 64
}

impl LatticeColoring {
    fn check_dim(n: u8) -> Result<()> {
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                n: n as u32,
                max: MAX_DIM as u32,
            });
        }
        Ok(())
    }

    pub fn all_red(n: u8) -> Result<Self> {
        Self::check_dim(n)?;
        Ok(LatticeColoring {
            n,
            blue: vec![0; word_count(n)],
        })
    }

    pub fn all_blue(n: u8) -> Result<Self> {
        let mut c = Self::all_red(n)?;
        for v in 0..c.vertex_count() {
            c.blue[v >> 6] |= 1u64 << (v & 63);
        }
        Ok(c)
    }

    /// Coloring with exactly the given vertices blue.
    pub fn with_blue_set(n: u8, blue: &[VertexSet]) -> Result<Self> {
        let mut c = Self::all_red(n)?;
        for &v in blue {
            if !v.fits_in(n) {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} does not fit in Q_{n}"
                )));
            }
            c.set_color(v, Color::Blue);
        }
        Ok(c)
    }

    pub fn dim(&self) -> u8 {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        1usize << self.n
    }

    pub fn is_blue(&self, v: VertexSet) -> bool {
        let i = v.mask() as usize;
        debug_assert!(i < self.vertex_count());
        self.blue[i >> 6] & (1u64 << (i & 63)) != 0
    }

    pub fn color_of(&self, v: VertexSet) -> Color {
        if self.is_blue(v) {
            Color::Blue
        } else {
            Color::Red
        }
    }

    pub fn set_color(&mut self, v: VertexSet, color: Color) {
        let i = v.mask() as usize;
        debug_assert!(i < self.vertex_count());
        match color {
            Color::Blue => self.blue[i >> 6] |= 1u64 << (i & 63),
            Color::Red => self.blue[i >> 6] &= !(1u64 << (i & 63)),
        }
    }

    /// All vertices in increasing mask order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexSet> {
        (0..self.vertex_count() as u32).map(VertexSet::from_mask)
    }

    /// Vertices of one color, in increasing mask order.
    pub fn vertices_of(&self, color: Color) -> Vec<VertexSet> {
        self.vertices()
            .filter(|&v| self.color_of(v) == color)
            .collect()
    }

    pub fn count_of(&self, color: Color) -> usize {
        let blues: usize = self.blue.iter().map(|w| w.count_ones() as usize).sum();
        match color {
            Color::Blue => blues,
            Color::Red => self.vertex_count() - blues,
        }
    }

    /// Hex encoding of the blue bit vector: digit `d` covers vertex masks
    /// `4d..4d+4` (little-endian by vertex mask), so the string has exactly
    /// `ceil(2^N / 4)` lowercase digits.
    pub fn blue_hex(&self) -> String {
        let digits = (self.vertex_count() + 3) / 4;
        let mut s = String::with_capacity(digits);
        for d in 0..digits {
            let nibble = (self.blue[d >> 4] >> ((d & 15) * 4)) & 0xf;
            s.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        s
    }

    pub fn from_blue_hex(n: u8, hex: &str) -> Result<Self> {
        Self::check_dim(n)?;
        let digits = ((1usize << n) + 3) / 4;
        if hex.len() != digits {
            return Err(Error::MalformedColoring(format!(
                "expected exactly {digits} hex digits for n={n}, got {}",
                hex.len()
            )));
        }
        let mut c = Self::all_red(n)?;
        for (d, ch) in hex.chars().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::MalformedColoring(format!("bad hex digit {ch:?}")))?
                as u64;
            c.blue[d >> 4] |= nibble << ((d & 15) * 4);
        }
        // Bits above 2^N must be clear (they can only appear for n < 2).
        let vc = c.vertex_count();
        if vc < 4 {
            let extra = c.blue[0] >> vc;
            if extra != 0 {
                return Err(Error::MalformedColoring(
                    "hex digit sets bits beyond 2^N".into(),
                ));
            }
        }
        Ok(c)
    }
}

impl fmt::Debug for LatticeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeColoring(n={}, blue={})", self.n, self.blue_hex())
    }
}

#[derive(Serialize, Deserialize)]
struct ColoringRepr {
    n: u8,
    blue: String,
}

impl Serialize for LatticeColoring {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ColoringRepr {
            n: self.n,
            blue: self.blue_hex(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LatticeColoring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ColoringRepr::deserialize(deserializer)?;
        LatticeColoring::from_blue_hex(repr.n, &repr.blue).map_err(D::Error::custom)
    }
}

/// A chain: vertices strictly increasing under inclusion. May be empty.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(transparent)]
pub struct Chain {
    vertices: Vec<VertexSet>,
}

impl Chain {
    pub fn new(vertices: Vec<VertexSet>) -> Result<Self> {
        if vertices
            .windows(2)
            .any(|w| !w[0].is_strict_subset_of(w[1]))
        {
            return Err(Error::NotAChain);
        }
        Ok(Chain { vertices })
    }

    pub fn vertices(&self) -> &[VertexSet] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn bottom(&self) -> Option<VertexSet> {
        self.vertices.first().copied()
    }

    pub fn top(&self) -> Option<VertexSet> {
        self.vertices.last().copied()
    }

    /// Smallest vertex size in the chain.
    pub fn min_size(&self) -> Option<u32> {
        self.bottom().map(VertexSet::size)
    }

    pub fn max_size(&self) -> Option<u32> {
        self.top().map(VertexSet::size)
    }

    pub fn contains(&self, v: VertexSet) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let vertices = Vec::<VertexSet>::deserialize(deserializer)?;
        Chain::new(vertices).map_err(D::Error::custom)
    }
}

/// An antichain: pairwise incomparable vertices, kept sorted by mask.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(transparent)]
pub struct Antichain {
    vertices: Vec<VertexSet>,
}

impl Antichain {
    pub fn new(mut vertices: Vec<VertexSet>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        for (i, &a) in vertices.iter().enumerate() {
            for &b in &vertices[i + 1..] {
                if a.comparable(b) {
                    return Err(Error::InvalidParameter(format!(
                        "vertices {a} and {b} are comparable"
                    )));
                }
            }
        }
        Ok(Antichain { vertices })
    }

    pub fn vertices(&self) -> &[VertexSet] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// All `C(N, i)` vertices of size `i`, in colex (= increasing mask) order.
pub fn layer(n: u8, i: u8) -> Result<Vec<VertexSet>> {
    if n > MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n: n as u32,
            max: MAX_DIM as u32,
        });
    }
    if i > n {
        return Err(Error::LayerOutOfRange { n, layer: i });
    }
    if i == 0 {
        return Ok(vec![VertexSet::EMPTY]);
    }
    let mut out = Vec::with_capacity(binomial(n as u32, i as u32) as usize);
    let limit = 1u64 << n;
    let mut v = (1u64 << i) - 1;
    while v < limit {
        out.push(VertexSet::from_mask(v as u32));
        // Gosper's hack: next mask with the same popcount.
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    Ok(out)
}

/// Vertex count of the longest chain whose vertices all have the given
/// color; 0 if the color class is empty.
///
/// Longest-path DP over the cover relation: `best[v]` carries the best
/// monochromatic chain length over all subsets of `v`, so color gaps in a
/// chain are handled without scanning non-cover pairs.
pub fn mono_height(c: &LatticeColoring, color: Color) -> u32 {
    let vc = c.vertex_count();
    // ends[v]: longest chain of `color` ending exactly at v (0 if v is the
    // other color); best[v]: max of ends over all subsets of v.
    let mut best = vec![0u8; vc];
    let mut height = 0u32;
    for vm in 0..vc as u32 {
        let v = VertexSet::from_mask(vm);
        let mut pred = 0u8;
        for e in v.elements() {
            pred = pred.max(best[v.remove(e).mask() as usize]);
        }
        let ends = if c.color_of(v) == color { pred + 1 } else { 0 };
        best[vm as usize] = pred.max(ends);
        height = height.max(ends as u32);
    }
    height
}

/// Deterministic pseudo-random coloring: vertex `v` (in increasing mask
/// order) draws one `next_u64` from `ChaCha8Rng::seed_from_u64(seed)` and is
/// blue iff `draw % density.1 < density.0`.
pub fn random_coloring(n: u8, seed: u64, blue_density: (u32, u32)) -> Result<LatticeColoring> {
    let (num, den) = blue_density;
    if den == 0 || num > den {
        return Err(Error::InvalidParameter(format!(
            "blue density {num}/{den} is not a ratio in [0, 1]"
        )));
    }
    let mut c = LatticeColoring::all_red(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in c.vertices().collect::<Vec<_>>() {
        if rng.next_u64() % (den as u64) < num as u64 {
            c.set_color(v, Color::Blue);
        }
    }
    Ok(c)
}

/// Exact binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        let f = n as u128 - k as u128 + i;
        acc = match acc.checked_mul(f) {
            Some(x) => x / i,
            // Once saturated, stay saturated: the true value only grows.
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(elems: &[u8]) -> VertexSet {
        VertexSet::from_elements(elems)
    }

    #[test]
    fn comparable_basics() {
        assert!(vs(&[0]).comparable(vs(&[0, 1])));
        assert!(!vs(&[0]).comparable(vs(&[1])));
        assert!(vs(&[0, 2]).comparable(vs(&[0, 2])));
    }

    #[test]
    fn inclusion_transitive_exhaustive_q4() {
        let all: Vec<VertexSet> = (0..16).map(VertexSet::from_mask).collect();
        for &a in &all {
            assert!(a.comparable(a));
            for &b in &all {
                for &c in &all {
                    if a.is_subset_of(b) && b.is_subset_of(c) {
                        assert!(a.is_subset_of(c));
                    }
                }
            }
        }
    }

    #[test]
    fn layer_small_cases() {
        assert_eq!(layer(3, 0).unwrap(), vec![VertexSet::EMPTY]);
        assert_eq!(
            layer(3, 1).unwrap(),
            vec![vs(&[0]), vs(&[1]), vs(&[2])]
        );
        // Oracle: direct enumeration by popcount.
        let expect: Vec<VertexSet> = (0..16u32)
            .filter(|m| m.count_ones() == 2)
            .map(VertexSet::from_mask)
            .collect();
        assert_eq!(layer(4, 2).unwrap(), expect);
        assert_eq!(expect.len(), 6);
        assert!(layer(3, 4).is_err());
    }

    #[test]
    fn layer_sizes_sum_to_power() {
        for n in 0..=16u8 {
            let total: usize = (0..=n).map(|i| layer(n, i).unwrap().len()).sum();
            assert_eq!(total, 1usize << n);
        }
    }

    #[test]
    fn mono_height_all_red() {
        for n in 0..=6u8 {
            let c = LatticeColoring::all_red(n).unwrap();
            assert_eq!(mono_height(&c, Color::Red), n as u32 + 1);
            assert_eq!(mono_height(&c, Color::Blue), 0);
        }
    }

    /// Oracle: O(4^N) longest chain by scanning all strict-subset pairs.
    fn mono_height_oracle(c: &LatticeColoring, color: Color) -> u32 {
        let vc = c.vertex_count();
        let mut ends = vec![0u32; vc];
        let mut best = 0;
        for vm in 0..vc as u32 {
            let v = VertexSet::from_mask(vm);
            if c.color_of(v) != color {
                continue;
            }
            let mut e = 1;
            for um in 0..vm {
                let u = VertexSet::from_mask(um);
                if c.color_of(u) == color && u.is_strict_subset_of(v) {
                    e = e.max(ends[um as usize] + 1);
                }
            }
            ends[vm as usize] = e;
            best = best.max(e);
        }
        best
    }

    #[test]
    fn mono_height_matches_oracle_on_random_colorings() {
        for n in 0..=4u8 {
            for seed in 0..20 {
                let c = random_coloring(n, seed, (1, 3)).unwrap();
                assert_eq!(mono_height(&c, Color::Red), mono_height_oracle(&c, Color::Red));
                assert_eq!(mono_height(&c, Color::Blue), mono_height_oracle(&c, Color::Blue));
            }
        }
    }

    #[test]
    fn random_coloring_extremes() {
        let c = random_coloring(3, 7, (0, 1)).unwrap();
        assert_eq!(c.count_of(Color::Blue), 0);
        let c = random_coloring(3, 7, (1, 1)).unwrap();
        assert_eq!(c.count_of(Color::Red), 0);
    }

    #[test]
    fn random_coloring_reference_pattern() {
        // Frozen reference output of the documented PRNG scheme.
        let c = random_coloring(3, 42, (1, 2)).unwrap();
        assert_eq!(c.blue_hex(), REFERENCE_HEX_3_42_HALF);
    }

    // Generated once by `random_coloring(3, 42, (1, 2))` and frozen.
    const REFERENCE_HEX_3_42_HALF: &str = "ef";

    #[test]
    fn hex_roundtrip_and_exact_format() {
        // N=2, blue {∅, {0,1}}: vertices 0 and 3 blue -> digit 0b1001 = 9.
        let c = LatticeColoring::with_blue_set(2, &[VertexSet::EMPTY, VertexSet::full(2)]).unwrap();
        assert_eq!(c.blue_hex(), "9");
        let back = LatticeColoring::from_blue_hex(2, "9").unwrap();
        assert_eq!(back, c);
        // Exactly ceil(2^N/4) digits required.
        assert!(LatticeColoring::from_blue_hex(2, "09").is_err());
        assert!(LatticeColoring::from_blue_hex(3, "9").is_err());
        // N=0 and N=1 use one digit with unused high bits forbidden.
        assert_eq!(LatticeColoring::all_blue(0).unwrap().blue_hex(), "1");
        assert!(LatticeColoring::from_blue_hex(0, "2").is_err());
        assert!(LatticeColoring::from_blue_hex(1, "4").is_err());
    }

    #[test]
    fn coloring_json_shape() {
        let c = LatticeColoring::with_blue_set(2, &[VertexSet::EMPTY, VertexSet::full(2)]).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"n":2,"blue":"9"}"#);
        let back: LatticeColoring = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(16, 8), 12870);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(130, 65), u128::MAX); // saturates
    }

    #[test]
    fn dimension_cap_enforced() {
        assert!(LatticeColoring::all_red(25).is_err());
        assert!(random_coloring(25, 0, (1, 2)).is_err());
    }
}
