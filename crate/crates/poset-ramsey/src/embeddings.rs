//! Detection, certification, and canonicalization of monochromatic cube
//! copies inside a colored Boolean lattice.
//!
//! A copy of `Q_n` is always handled in canonical form: a ground subset 𝒳
//! of size `n` plus a monotone tail map `g` into the complement, the copy
//! being `X ↦ X ∪ g(X)`. Every canonical form is a copy (images meet 𝒳
//! exactly in `X`, so the map preserves and reflects inclusion), and every
//! copy admits a canonical form over some 𝒳, which makes searching
//! canonical forms over all ground subsets exhaustive.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{Color, LatticeColoring, VertexSet};
use crate::sequences::LinearOrdering;

/// Dimension cap for the unconstrained counting oracle.
pub const MAX_ORACLE_DIM: u8 = 4;

/// Compress `mask` onto the bit positions of `ground` (software pext).
pub(crate) fn compress(mask: u32, ground: u32) -> u32 {
    let mut out = 0;
    let mut bit = 0;
    let mut g = ground;
    while g != 0 {
        let lowest = g & g.wrapping_neg();
        if mask & lowest != 0 {
            out |= 1 << bit;
        }
        bit += 1;
        g &= g - 1;
    }
    out
}

/// Expand a compressed index back onto the bit positions of `ground`
/// (software pdep).
pub(crate) fn expand(idx: u32, ground: u32) -> u32 {
    let mut out = 0;
    let mut bit = 0;
    let mut g = ground;
    while g != 0 {
        let lowest = g & g.wrapping_neg();
        if idx & (1 << bit) != 0 {
            out |= lowest;
        }
        bit += 1;
        g &= g - 1;
    }
    out
}

/// A cube copy in canonical form: ground 𝒳 plus the tail of every subset.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalEmbedding {
    ground: VertexSet,
    /// Indexed by the subset of 𝒳 compressed onto 0..n.
    tails: Vec<VertexSet>,
}

impl CanonicalEmbedding {
    pub fn new(ground: VertexSet, tails: Vec<VertexSet>) -> Result<Self> {
        if tails.len() != 1usize << ground.size() {
            return Err(Error::InvalidParameter(format!(
                "tail map must assign all {} subsets of the ground set",
                1usize << ground.size()
            )));
        }
        Ok(CanonicalEmbedding { ground, tails })
    }

    /// The identity copy of `Q(ground)` itself: every tail empty.
    pub fn identity(ground: VertexSet) -> Self {
        CanonicalEmbedding {
            ground,
            tails: vec![VertexSet::EMPTY; 1usize << ground.size()],
        }
    }

    pub fn ground(&self) -> VertexSet {
        self.ground
    }

    pub fn cube_dim(&self) -> u8 {
        self.ground.size() as u8
    }

    /// Subsets of the ground set in increasing compressed order.
    pub fn subsets(&self) -> impl Iterator<Item = VertexSet> + '_ {
        (0..self.tails.len() as u32).map(|i| VertexSet::from_mask(expand(i, self.ground.mask())))
    }

    pub fn tail_of(&self, sub: VertexSet) -> VertexSet {
        debug_assert!(sub.is_subset_of(self.ground));
        self.tails[compress(sub.mask(), self.ground.mask()) as usize]
    }

    pub fn image_of(&self, sub: VertexSet) -> VertexSet {
        sub.union(self.tail_of(sub))
    }

    /// All image vertices, ordered by their ground subset.
    pub fn image_family(&self) -> Vec<VertexSet> {
        self.subsets().map(|s| self.image_of(s)).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct EmbeddingRepr {
    ground: u32,
    tail: Vec<(u32, u32)>,
}

impl Serialize for CanonicalEmbedding {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        EmbeddingRepr {
            ground: self.ground.mask(),
            tail: self
                .subsets()
                .map(|s| (s.mask(), self.tail_of(s).mask()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CanonicalEmbedding {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = EmbeddingRepr::deserialize(deserializer)?;
        let ground = VertexSet::from_mask(repr.ground);
        let n = ground.size();
        if repr.tail.len() != 1usize << n {
            return Err(D::Error::custom("tail map must cover all ground subsets"));
        }
        let mut tails = vec![None; 1usize << n];
        for (sub, tail) in repr.tail {
            let s = VertexSet::from_mask(sub);
            if !s.is_subset_of(ground) {
                return Err(D::Error::custom("tail key is not a ground subset"));
            }
            let slot = &mut tails[compress(sub, ground.mask()) as usize];
            if slot.replace(VertexSet::from_mask(tail)).is_some() {
                return Err(D::Error::custom("duplicate tail key"));
            }
        }
        Ok(CanonicalEmbedding {
            ground,
            tails: tails.into_iter().map(Option::unwrap).collect(),
        })
    }
}

/// Check a claimed embedding: tails avoid the ground set and fit the
/// ambient lattice, the tail map is monotone, and every image has the
/// stated color. Monotonicity is checked on cover pairs, which suffices by
/// transitivity.
pub fn verify_embedding(e: &CanonicalEmbedding, c: &LatticeColoring, color: Color) -> bool {
    let n = e.cube_dim() as u32;
    let dim = c.dim();
    if !e.ground.fits_in(dim) {
        return false;
    }
    let subs = 1u32 << n;
    for idx in 0..subs {
        let tail = e.tails[idx as usize];
        if !tail.intersection(e.ground).is_empty() || !tail.fits_in(dim) {
            return false;
        }
        let image = VertexSet::from_mask(expand(idx, e.ground.mask())).union(tail);
        if c.color_of(image) != color {
            return false;
        }
        for b in 0..n {
            if idx & (1 << b) == 0 {
                let above = e.tails[(idx | 1 << b) as usize];
                if !tail.is_subset_of(above) {
                    return false;
                }
            }
        }
    }
    true
}

/// Backtracking monotone-tail search over one ground set. Subsets are
/// assigned in increasing (size, mask) order; each tail candidate ranges
/// over supersets of the union of the already-assigned cover tails, in
/// increasing mask order, so the first solution is deterministic.
fn monotone_tail_search(
    c: &LatticeColoring,
    ground: u32,
    color: Color,
) -> Option<Vec<VertexSet>> {
    let n = ground.count_ones();
    let subs = 1usize << n;
    let comp = VertexSet::from_mask(ground).complement_in(c.dim()).mask();

    let mut order: Vec<u32> = (0..subs as u32).collect();
    order.sort_unstable_by_key(|&i| (i.count_ones(), i));

    struct Frame {
        idx: u32,
        lb: u32,
        free: u32,
        sub: u32,
        fresh: bool,
    }
    let mut tails = vec![0u32; subs];
    let mut stack: Vec<Frame> = Vec::with_capacity(subs);

    let make_frame = |idx: u32, tails: &[u32]| {
        let mut lb = 0u32;
        let mut rest = idx;
        while rest != 0 {
            let b = rest.trailing_zeros();
            lb |= tails[(idx & !(1 << b)) as usize];
            rest &= rest - 1;
        }
        Frame {
            idx,
            lb,
            free: comp & !lb,
            sub: 0,
            fresh: true,
        }
    };
    stack.push(make_frame(order[0], &tails));

    while let Some(frame) = stack.last_mut() {
        // Next candidate submask of `free`, ascending.
        let cand = if frame.fresh {
            frame.fresh = false;
            Some(0)
        } else if frame.sub == frame.free {
            None
        } else {
            Some(frame.sub.wrapping_sub(frame.free) & frame.free)
        };
        let Some(s) = cand else {
            stack.pop();
            continue;
        };
        frame.sub = s;
        let tail = frame.lb | s;
        let image = expand(frame.idx, ground) | tail;
        if c.color_of(VertexSet::from_mask(image)) != color {
            continue;
        }
        tails[frame.idx as usize] = tail;
        if stack.len() == subs {
            return Some(tails.into_iter().map(VertexSet::from_mask).collect());
        }
        let next = order[stack.len()];
        stack.push(make_frame(next, &tails));
    }
    None
}

/// Search for a red copy of `Q_n`, trying canonical forms over every ground
/// subset in increasing mask order; the lowest ground set with a copy wins.
/// Returns a verified embedding, or `None` when no red copy exists.
pub fn find_red_cube(c: &LatticeColoring, n: u8) -> Option<CanonicalEmbedding> {
    find_mono_cube(c, n, Color::Red)
}

/// As [`find_red_cube`] for either color.
pub fn find_mono_cube(c: &LatticeColoring, n: u8, color: Color) -> Option<CanonicalEmbedding> {
    let dim = c.dim();
    assert!(n <= dim, "cube dimension exceeds the lattice dimension");
    if c.count_of(color) < 1usize << n {
        return None;
    }
    let limit = 1u64 << dim;
    let mut ground = if n == 0 { 0u64 } else { (1u64 << n) - 1 };
    loop {
        if let Some(tails) = monotone_tail_search(c, ground as u32, color) {
            let e = CanonicalEmbedding::new(VertexSet::from_mask(ground as u32), tails)
                .expect("search assigns every subset");
            debug_assert!(verify_embedding(&e, c, color));
            return Some(e);
        }
        if n == 0 {
            return None;
        }
        // Gosper's hack.
        let low = ground & ground.wrapping_neg();
        let r = ground + low;
        ground = (((r ^ ground) >> 2) / low) | r;
        if ground >= limit {
            return None;
        }
    }
}

/// Recover the atom structure of a family that claims to be a cube copy:
/// the unique minimum, the `n` atoms, and the member for every atom subset.
fn cube_structure(family: &[VertexSet]) -> Result<(Vec<VertexSet>, Vec<VertexSet>)> {
    let count = family.len();
    if !count.is_power_of_two() {
        return Err(Error::NotACubeCopy {
            reason: "family size is not a power of two",
        });
    }
    let n = count.trailing_zeros() as usize;
    let bottom = family[0];
    if family.iter().any(|f| !bottom.is_subset_of(*f)) {
        return Err(Error::NotACubeCopy {
            reason: "no unique minimum",
        });
    }
    let rest = &family[1..];
    let atoms: Vec<VertexSet> = rest
        .iter()
        .filter(|&&f| !rest.iter().any(|&g| g != f && g.is_strict_subset_of(f)))
        .copied()
        .collect();
    if atoms.len() != n {
        return Err(Error::NotACubeCopy {
            reason: "atom count does not match the family size",
        });
    }
    let mut by_key: Vec<Option<VertexSet>> = vec![None; count];
    for &f in family {
        let key: usize = atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_subset_of(f))
            .map(|(i, _)| 1usize << i)
            .sum();
        if by_key[key].replace(f).is_some() {
            return Err(Error::NotACubeCopy {
                reason: "two members contain the same atom set",
            });
        }
    }
    let by_key: Vec<VertexSet> = by_key.into_iter().map(Option::unwrap).collect();
    Ok((atoms, by_key))
}

/// Direct order-isomorphism test against `Q_n`: reconstruct the candidate
/// isomorphism from the atom structure, then check that it preserves and
/// reflects inclusion on every pair.
pub fn is_cube_copy(family: &[VertexSet]) -> bool {
    let mut fam = family.to_vec();
    fam.sort_unstable();
    fam.dedup();
    if fam.len() != family.len() {
        return false;
    }
    let Ok((_, by_key)) = cube_structure(&fam) else {
        return false;
    };
    let count = fam.len();
    for k1 in 0..count {
        for k2 in 0..count {
            let keys_sub = k1 & !k2 == 0;
            if keys_sub != by_key[k1].is_subset_of(by_key[k2]) {
                return false;
            }
        }
    }
    true
}

/// Put a copy of `Q_n` (given as its `2^n` image vertices) into canonical
/// form: a ground set 𝒳 and monotone tail map with exactly that image.
///
/// The ground set is recovered by picking, for each atom, the smallest
/// element that lies in the atom's image but not in the opposite coatom's
/// image; membership of that element then tracks membership of the atom.
pub fn canonicalize_copy(family: &[VertexSet], ambient_dim: u8) -> Result<CanonicalEmbedding> {
    let mut fam = family.to_vec();
    fam.sort_unstable();
    fam.dedup();
    if fam.len() != family.len() {
        return Err(Error::NotACubeCopy {
            reason: "family has repeated vertices",
        });
    }
    if fam.iter().any(|v| !v.fits_in(ambient_dim)) {
        return Err(Error::NotACubeCopy {
            reason: "family does not fit the ambient lattice",
        });
    }
    let (atoms, by_key) = cube_structure(&fam)?;
    let n = atoms.len();
    let full_key = (1usize << n) - 1;

    let mut picks = Vec::with_capacity(n);
    let mut ground = VertexSet::EMPTY;
    for (i, atom) in atoms.iter().enumerate() {
        let coatom = by_key[full_key & !(1 << i)];
        let candidate = atom
            .difference(coatom)
            .min_element()
            .ok_or(Error::NotACubeCopy {
                reason: "atom image lies inside the opposite coatom image",
            })?;
        picks.push(candidate);
        ground = ground.insert(candidate);
    }
    if ground.size() as usize != n {
        return Err(Error::NotACubeCopy {
            reason: "distinguishing elements are not distinct",
        });
    }

    // Tail of a ground subset X: the member whose atom set matches X, minus
    // the ground set.
    let mut tails = vec![VertexSet::EMPTY; 1usize << n];
    for idx in 0..(1u32 << n) {
        let sub = VertexSet::from_mask(expand(idx, ground.mask()));
        let key: usize = picks
            .iter()
            .enumerate()
            .filter(|(_, &p)| sub.contains(p))
            .map(|(i, _)| 1usize << i)
            .sum();
        let image = by_key[key];
        if image.intersection(ground) != sub {
            return Err(Error::NotACubeCopy {
                reason: "image does not meet the ground set in its subset",
            });
        }
        tails[idx as usize] = image.difference(ground);
    }
    let e = CanonicalEmbedding::new(ground, tails)?;
    // Final certificate: monotone, and the image family is exactly the input.
    let mut images = e.image_family();
    images.sort_unstable();
    if images != fam {
        return Err(Error::NotACubeCopy {
            reason: "canonical form does not reproduce the family",
        });
    }
    for idx in 0..(1u32 << n) {
        for b in 0..n as u32 {
            if idx & (1 << b) == 0 && !e.tails[idx as usize].is_subset_of(e.tails[(idx | 1 << b) as usize]) {
                return Err(Error::NotACubeCopy {
                    reason: "tail map is not monotone",
                });
            }
        }
    }
    Ok(e)
}

/// A blue chain produced by the dichotomy: nested parts `X_0 ⊆ … ⊆ X_k` of
/// 𝒳 whose unions with the prefixes of the 𝒴-ordering are all blue.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlueChainWitness {
    y_order: LinearOrdering,
    x_parts: Vec<VertexSet>,
}

impl BlueChainWitness {
    pub fn y_order(&self) -> &LinearOrdering {
        &self.y_order
    }

    pub fn x_parts(&self) -> &[VertexSet] {
        &self.x_parts
    }

    fn y_prefix(&self, i: usize) -> VertexSet {
        self.y_order.elements_in_order()[..i]
            .iter()
            .fold(VertexSet::EMPTY, |m, &e| m.insert(e as u8))
    }

    /// The `i`-th chain vertex `X_i ∪ Y(i)`.
    pub fn image(&self, i: usize) -> VertexSet {
        self.x_parts[i].union(self.y_prefix(i))
    }

    pub fn images(&self) -> Vec<VertexSet> {
        (0..self.x_parts.len()).map(|i| self.image(i)).collect()
    }

    /// Nested parts disjoint from 𝒴, all chain vertices blue.
    pub fn verify(&self, c: &LatticeColoring) -> bool {
        let k = self.y_order.len();
        if self.x_parts.len() != k + 1 {
            return false;
        }
        let y_all = self.y_prefix(k);
        self.x_parts
            .windows(2)
            .all(|w| w[0].is_subset_of(w[1]))
            && self
                .x_parts
                .iter()
                .all(|p| p.intersection(y_all).is_empty())
            && (0..=k).all(|i| c.is_blue(self.image(i)))
    }
}

/// Outcome of the chain-or-cube dichotomy.
#[derive(Clone, Debug, Serialize)]
pub enum ChainOrCube {
    RedCube(CanonicalEmbedding),
    BlueChain(BlueChainWitness),
}

/// For a partition of the ground set into 𝒳 and an ordered 𝒴 with
/// `k = |𝒴|`, produce either a red canonical copy of `Q_𝒳` whose tails are
/// prefixes of the 𝒴-order, or a blue chain `X_0∪Y(0) ⊆ … ⊆ X_k∪Y(k)`.
/// One of the two always exists; the returned branch is verified.
///
/// The dichotomy is computed by a DP over subsets `X ⊆ 𝒳`: `h(X)` is the
/// largest `i` such that a blue chain with `X_i ⊆ X` exists (−1 if none).
/// If `h(𝒳) = k` the chain is reconstructed from the DP; otherwise
/// `X ↦ X ∪ Y(h(X)+1)` is a red monotone-tail embedding, red because any
/// blue image would have extended `h(X)`.
pub fn chain_or_cube(
    c: &LatticeColoring,
    x_ground: VertexSet,
    y_order: &LinearOrdering,
) -> Result<ChainOrCube> {
    let dim = c.dim();
    if !x_ground.fits_in(dim) {
        return Err(Error::MalformedPartition);
    }
    let mut y_elems: Vec<u32> = y_order.elements_in_order().to_vec();
    y_elems.sort_unstable();
    let complement: Vec<u32> = x_ground
        .complement_in(dim)
        .elements()
        .map(u32::from)
        .collect();
    if y_elems != complement {
        return Err(Error::MalformedPartition);
    }

    let ground = x_ground.mask();
    let nx = x_ground.size() as usize;
    let k = y_order.len();
    let subs = 1usize << nx;
    let mut y_pref = Vec::with_capacity(k + 1);
    let mut acc = VertexSet::EMPTY;
    y_pref.push(acc);
    for &e in y_order.elements_in_order() {
        acc = acc.insert(e as u8);
        y_pref.push(acc);
    }

    let mut h = vec![-1i32; subs];
    let mut base_val = vec![-1i32; subs];
    let mut base_bit = vec![0u32; subs];
    for idx in 0..subs {
        let mut base = -1;
        let mut bb = 0;
        let mut rest = idx as u32;
        while rest != 0 {
            let b = rest.trailing_zeros();
            let pv = h[idx & !(1usize << b)];
            if pv > base {
                base = pv;
                bb = b;
            }
            rest &= rest - 1;
        }
        let x_vertex = expand(idx as u32, ground);
        let mut val = base;
        while val < k as i32
            && c.is_blue(VertexSet::from_mask(x_vertex | y_pref[(val + 1) as usize].mask()))
        {
            val += 1;
        }
        h[idx] = val;
        base_val[idx] = base;
        base_bit[idx] = bb;
    }

    if h[subs - 1] == k as i32 {
        let mut parts = vec![VertexSet::EMPTY; k + 1];
        let mut cur = subs - 1;
        let mut v = k as i32;
        while v >= 0 {
            if v > base_val[cur] {
                parts[v as usize] = VertexSet::from_mask(expand(cur as u32, ground));
                v -= 1;
            } else {
                cur &= !(1usize << base_bit[cur]);
            }
        }
        let witness = BlueChainWitness {
            y_order: y_order.clone(),
            x_parts: parts,
        };
        if !witness.verify(c) {
            return Err(Error::InternalCheckFailed(
                "reconstructed blue chain failed verification",
            ));
        }
        Ok(ChainOrCube::BlueChain(witness))
    } else {
        let tails: Vec<VertexSet> = (0..subs).map(|idx| y_pref[(h[idx] + 1) as usize]).collect();
        let e = CanonicalEmbedding::new(x_ground, tails)?;
        if !verify_embedding(&e, c, Color::Red) {
            return Err(Error::InternalCheckFailed(
                "dichotomy embedding failed verification",
            ));
        }
        Ok(ChainOrCube::RedCube(e))
    }
}

/// Brute-force count of distinct red copies of `Q_n` by unconstrained
/// enumeration of all `2^n`-subsets of the red vertices, with a direct
/// order-isomorphism test per family. No canonical-form shortcut is used;
/// this is the independent oracle the canonical search is tested against.
pub fn all_red_cubes_oracle(c: &LatticeColoring, n: u8) -> Result<u64> {
    if c.dim() > MAX_ORACLE_DIM {
        return Err(Error::SizeCapExceeded {
            what: "oracle lattice dimension",
            limit: MAX_ORACLE_DIM as u64,
        });
    }
    if n > c.dim() {
        return Err(Error::InvalidParameter(format!(
            "cube dimension {n} exceeds lattice dimension {}",
            c.dim()
        )));
    }
    let reds = c.vertices_of(Color::Red);
    let want = 1usize << n;
    if reds.len() < want {
        return Ok(0);
    }
    let mut count = 0;
    let limit = 1u64 << reds.len();
    let mut pick = (1u64 << want) - 1;
    while pick < limit {
        let family: Vec<VertexSet> = (0..reds.len())
            .filter(|&i| pick & (1 << i) != 0)
            .map(|i| reds[i])
            .collect();
        if is_cube_copy(&family) {
            count += 1;
        }
        if want == 0 {
            break;
        }
        let low = pick & pick.wrapping_neg();
        let r = pick + low;
        pick = (((r ^ pick) >> 2) / low) | r;
    }
    Ok(count)
}
