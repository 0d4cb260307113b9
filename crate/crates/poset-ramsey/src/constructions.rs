//! The extremal lower-bound colorings, certificate-producing verifiers for
//! their claims, and the closed-form bound calculators for `R(A_t, Q_n)`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::chains::{max_antichain, min_chain_cover, ChainCover};
use crate::embeddings::{find_red_cube, CanonicalEmbedding};
use crate::error::{Error, Result};
use crate::lattice::{binomial, mono_height, Antichain, Color, LatticeColoring, VertexSet, MAX_DIM};

fn check_construction_dim(dim: u32) -> Result<u8> {
    if dim > MAX_DIM as u32 {
        return Err(Error::DimensionTooLarge {
            n: dim,
            max: MAX_DIM as u32,
        });
    }
    Ok(dim as u8)
}

/// Coloring of `Q_{n+1}` with only the empty set and the full set blue.
/// Claims: no blue antichain of size 2, no red copy of `Q_n` (the red
/// vertices occupy only `n` layers).
pub fn construct_a2_lower(n: u32) -> Result<LatticeColoring> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let dim = check_construction_dim(n + 1)?;
    LatticeColoring::with_blue_set(dim, &[VertexSet::EMPTY, VertexSet::full(dim)])
}

/// Coloring of `Q_{n+2}` with every prefix `{0,…,i−1}` and every suffix
/// `{i,…,N−1}` of the index order blue (the empty set is the suffix at
/// `i = N`). Claims: no blue antichain of size 3 (the blue set is two
/// chains), no red copy of `Q_n`.
pub fn construct_a3_lower(n: u32) -> Result<LatticeColoring> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let dim = check_construction_dim(n + 2)?;
    let full = VertexSet::full(dim);
    let mut blue = Vec::with_capacity(2 * dim as usize);
    for i in 1..=dim {
        let prefix = VertexSet::from_mask((1u32 << i) - 1);
        blue.push(prefix);
        blue.push(full.difference(prefix));
    }
    LatticeColoring::with_blue_set(dim, &blue)
}

/// Layered coloring of `Q_{n+2r+1}`: blue iff the vertex size is at most
/// `r` or at least `n+r+1`. Claims: red height exactly `n`, and no blue
/// antichain of size `C(n+2r+1, r) + 1` (the blue set is covered by the
/// symmetric chains through layer `r`).
pub fn construct_layered_lower(n: u32, r: u32) -> Result<LatticeColoring> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let dim = check_construction_dim(n + 2 * r + 1)?;
    let mut c = LatticeColoring::all_red(dim)?;
    for v in c.vertices().collect::<Vec<_>>() {
        let s = v.size();
        if s <= r || s >= n + r + 1 {
            c.set_color(v, Color::Blue);
        }
    }
    Ok(c)
}

/// Outcome of the blue-antichain check.
#[derive(Clone, Debug, Serialize)]
pub enum AntichainCheck {
    /// The blue set is covered by at most `t−1` chains, so it contains no
    /// antichain of size `t`.
    Certified { cover: ChainCover },
    /// A blue antichain of size exactly `t`.
    Refuted { antichain: Antichain },
}

impl AntichainCheck {
    pub fn is_certified(&self) -> bool {
        matches!(self, AntichainCheck::Certified { .. })
    }
}

/// Either certify (by a Dilworth chain cover of the blue set with fewer
/// than `t` chains) that the coloring has no blue antichain of size `t`, or
/// refute with a blue antichain of exactly that size.
pub fn verify_no_blue_antichain(c: &LatticeColoring, t: u32) -> Result<AntichainCheck> {
    if t == 0 {
        return Err(Error::InvalidParameter(
            "antichain size must be at least 1".into(),
        ));
    }
    let blue = c.vertices_of(Color::Blue);
    let cover = min_chain_cover(&blue)?;
    if (cover.len() as u32) < t {
        return Ok(AntichainCheck::Certified { cover });
    }
    let anti = max_antichain(&blue)?;
    let picked: Vec<VertexSet> = anti.vertices()[..t as usize].to_vec();
    Ok(AntichainCheck::Refuted {
        antichain: Antichain::new(picked)?,
    })
}

/// Outcome of the red-cube check.
#[derive(Clone, Debug, Serialize)]
pub enum RedCubeCheck {
    /// The longest red chain has fewer than `n+1` vertices, so no red copy
    /// of `Q_n` fits.
    CertifiedByHeight { red_height: u32 },
    /// The canonical-form search over every ground subset found nothing.
    CertifiedExhaustive,
    /// A verified red embedding.
    Refuted { embedding: CanonicalEmbedding },
}

impl RedCubeCheck {
    pub fn is_certified(&self) -> bool {
        !matches!(self, RedCubeCheck::Refuted { .. })
    }
}

/// Certify that the coloring has no red copy of `Q_n`, preferring the cheap
/// height certificate and falling back to the exhaustive canonical search;
/// a refutation carries a verified red embedding. The exhaustive route is
/// only available for `N ≤ 8` or `N − n ≤ 3`.
pub fn verify_no_red_cube(c: &LatticeColoring, n: u8) -> Result<RedCubeCheck> {
    if n > c.dim() {
        // A copy of Q_n cannot fit at all.
        return Ok(RedCubeCheck::CertifiedByHeight {
            red_height: mono_height(c, Color::Red),
        });
    }
    let red_height = mono_height(c, Color::Red);
    if red_height < n as u32 + 1 {
        return Ok(RedCubeCheck::CertifiedByHeight { red_height });
    }
    if c.dim() > 8 && c.dim() - n > 3 {
        return Err(Error::SizeCapExceeded {
            what: "exhaustive red-cube certificate (needs N ≤ 8 or N − n ≤ 3)",
            limit: 8,
        });
    }
    match find_red_cube(c, n) {
        Some(embedding) => Ok(RedCubeCheck::Refuted { embedding }),
        None => Ok(RedCubeCheck::CertifiedExhaustive),
    }
}

/// The Sperner number α(t): the least `N` with `C(N, ⌊N/2⌋) ≥ t`, i.e. the
/// dimension of the smallest Boolean lattice containing an antichain of
/// size `t`.
pub fn sperner_number(t: u64) -> u32 {
    assert!(t >= 1);
    let mut n = 0;
    while binomial(n, n / 2) < t as u128 {
        n += 1;
    }
    n
}

/// The known two-value window for α(t), `⌊log₂ t + (log₂ log₂ t)/2⌋ + {1, 2}`,
/// valid for `t ≥ 2`.
pub fn sperner_number_window(t: u64) -> (u32, u32) {
    assert!(t >= 2);
    let log_t = (t as f64).log2();
    let base = floor_stable(log_t + log_t.log2() / 2.0) as u32 + 1;
    (base, base + 1)
}

fn floor_stable(x: f64) -> f64 {
    (x + 1e-9).floor()
}

fn ceil_stable(x: f64) -> f64 {
    (x - 1e-9).ceil()
}

/// The largest `r ≥ 0` with `t > C(n+2r+1, r)`; 0-layer case always holds
/// for `t ≥ 2` since `C(n+1, 0) = 1`.
pub fn best_layered_r(n: u32, t: u64) -> u32 {
    assert!(n >= 1 && t >= 2);
    let mut r = 0;
    while t as u128 > binomial(n + 2 * (r + 1) + 1, r + 1) {
        r += 1;
    }
    r
}

/// Which construction realizes the reported lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerBoundSource {
    /// Two blue vertices (bottom and top) on `Q_{n+1}`.
    TopBottom,
    /// The regime where `R(A_t, Q_n) = n + 3` exactly.
    ExactRegime,
    /// The layered coloring on `Q_{n+2r+1}`.
    Layered { r: u32 },
}

impl fmt::Display for LowerBoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LowerBoundSource::TopBottom => write!(f, "top-bottom"),
            LowerBoundSource::ExactRegime => write!(f, "exact-regime"),
            LowerBoundSource::Layered { r } => write!(f, "layered(r={r})"),
        }
    }
}

impl Serialize for LowerBoundSource {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Bounds on `R(A_t, Q_n)` from the closed-form calculators.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n: u32,
    pub t: u64,
    pub lower: u32,
    pub lower_certificate: LowerBoundSource,
    pub upper: u32,
    /// `⌈n + 2·log₂ t / (5 + log₂ n)⌉`, reported separately for `n ≥ 3`.
    pub corollary_lower: Option<u32>,
    pub exact: Option<u32>,
}

/// `2^(2^(t−2)) − 2`, saturating: the smallest `n` for which
/// `R(A_t, Q_n) = n + 3` is claimed exactly (`t ≥ 3`).
pub fn exact_regime_threshold(t: u64) -> u128 {
    debug_assert!(t >= 3);
    let e = t - 2;
    if e >= 7 {
        return u128::MAX;
    }
    (1u128 << (1u64 << e)) - 2
}

/// Bound report for `R(A_t, Q_n)`: upper bound `n + α(t)`, lower bound as
/// the best of the three constructions, exact value where one is known
/// (`t = 2` everywhere; `t ≥ 3` once `n ≥ 2^(2^(t−2)) − 2`; or whenever the
/// bounds meet).
pub fn ramsey_bounds(n: u32, t: u64) -> Result<BoundReport> {
    if n < 1 || t < 2 {
        return Err(Error::InvalidParameter(
            "bounds require n ≥ 1 and t ≥ 2".into(),
        ));
    }
    let upper = n + sperner_number(t);

    let mut lower = 0;
    let mut source = LowerBoundSource::TopBottom;
    let mut consider = |value: u32, src: LowerBoundSource| {
        if value > lower {
            lower = value;
            source = src;
        }
    };
    let r = best_layered_r(n, t);
    consider(n + 2 * r + 2, LowerBoundSource::Layered { r });
    if t == 2 {
        consider(n + 2, LowerBoundSource::TopBottom);
    }
    let in_exact_regime = t >= 3 && n as u128 >= exact_regime_threshold(t);
    if in_exact_regime {
        consider(n + 3, LowerBoundSource::ExactRegime);
    }

    let exact = if t == 2 {
        Some(n + 2)
    } else if in_exact_regime {
        Some(n + 3)
    } else if lower == upper {
        Some(lower)
    } else {
        None
    };

    let corollary_lower = (n >= 3).then(|| {
        let v = n as f64 + 2.0 * (t as f64).log2() / (5.0 + (n as f64).log2());
        ceil_stable(v) as u32
    });

    assert!(
        lower <= upper,
        "lower bound {lower} exceeds upper bound {upper} for n={n}, t={t}"
    );
    Ok(BoundReport {
        n,
        t,
        lower,
        lower_certificate: source,
        upper,
        corollary_lower,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{chains_through_layer, symmetric_chain_decomposition};
    use crate::lattice::layer;

    #[test]
    fn a2_construction_shape() {
        let c = construct_a2_lower(1).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.vertices_of(Color::Blue), vec![VertexSet::EMPTY, VertexSet::full(2)]);
        assert!(construct_a2_lower(0).is_err());
        assert!(construct_a2_lower(24).is_err());
    }

    #[test]
    fn a2_red_height_is_n() {
        for n in 1..=10u32 {
            let c = construct_a2_lower(n).unwrap();
            assert_eq!(mono_height(&c, Color::Red), n);
        }
    }

    #[test]
    fn a3_construction_shape() {
        let c = construct_a3_lower(1).unwrap();
        assert_eq!(c.dim(), 3);
        let blue = c.vertices_of(Color::Blue);
        let expect = vec![
            VertexSet::EMPTY,            // suffix at i = N
            VertexSet::from_elements(&[0]),
            VertexSet::from_elements(&[0, 1]),
            VertexSet::from_elements(&[2]),
            VertexSet::from_elements(&[1, 2]),
            VertexSet::from_elements(&[0, 1, 2]),
        ];
        assert_eq!(blue.len(), 6);
        for v in expect {
            assert!(blue.contains(&v), "{v} should be blue");
        }
    }

    #[test]
    fn a3_blue_set_is_two_chains() {
        let c = construct_a3_lower(2).unwrap();
        let cover = min_chain_cover(&c.vertices_of(Color::Blue)).unwrap();
        assert_eq!(cover.len(), 2);
    }

    #[test]
    fn layered_construction_shape() {
        let c = construct_layered_lower(1, 1).unwrap();
        assert_eq!(c.dim(), 4);
        for v in c.vertices() {
            let expect_blue = v.size() != 2;
            assert_eq!(c.is_blue(v), expect_blue);
        }
        // Blue antichain exactly C(4,1) = 4.
        let anti = max_antichain(&c.vertices_of(Color::Blue)).unwrap();
        assert_eq!(anti.len(), 4);

        // r = 0 degenerates to the top-bottom coloring.
        assert_eq!(construct_layered_lower(2, 0).unwrap(), construct_a2_lower(2).unwrap());
    }

    #[test]
    fn layered_q5_blue_antichain_size() {
        let c = construct_layered_lower(2, 1).unwrap(); // Q_5, sizes {0,1,4,5} blue
        let anti = max_antichain(&c.vertices_of(Color::Blue)).unwrap();
        assert_eq!(anti.len(), 5);
    }

    #[test]
    fn antichain_verifier_examples() {
        let check = verify_no_blue_antichain(&construct_a2_lower(3).unwrap(), 2).unwrap();
        match check {
            AntichainCheck::Certified { cover } => assert_eq!(cover.len(), 1),
            _ => panic!("expected certificate"),
        }

        let layered = construct_layered_lower(1, 1).unwrap();
        match verify_no_blue_antichain(&layered, 5).unwrap() {
            AntichainCheck::Certified { cover } => assert_eq!(cover.len(), 4),
            _ => panic!("expected certificate"),
        }
        match verify_no_blue_antichain(&layered, 4).unwrap() {
            AntichainCheck::Refuted { antichain } => {
                assert_eq!(antichain.len(), 4);
                assert!(antichain.vertices().iter().all(|&v| layered.is_blue(v)));
            }
            _ => panic!("expected refutation"),
        }
    }

    #[test]
    fn red_cube_verifier_routes() {
        match verify_no_red_cube(&construct_layered_lower(2, 1).unwrap(), 2).unwrap() {
            RedCubeCheck::CertifiedByHeight { red_height } => assert_eq!(red_height, 2),
            other => panic!("expected height certificate, got {other:?}"),
        }
        match verify_no_red_cube(&construct_a3_lower(2).unwrap(), 2).unwrap() {
            RedCubeCheck::CertifiedExhaustive => {}
            other => panic!("expected exhaustive certificate, got {other:?}"),
        }
        match verify_no_red_cube(&LatticeColoring::all_red(3).unwrap(), 2).unwrap() {
            RedCubeCheck::Refuted { embedding } => {
                assert_eq!(embedding.cube_dim(), 2);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn layered_blue_covered_by_symmetric_chains_through_r() {
        for (n, r) in [(1u32, 1u32), (2, 1), (1, 2), (3, 1), (2, 2)] {
            let dim = (n + 2 * r + 1) as u8;
            let c = construct_layered_lower(n, r).unwrap();
            let d = symmetric_chain_decomposition(dim).unwrap();
            let fam = chains_through_layer(&d, r as u8).unwrap();
            let mut covered = vec![false; 1 << dim];
            for ch in &fam {
                for v in ch.vertices() {
                    covered[v.mask() as usize] = true;
                }
            }
            for v in c.vertices_of(Color::Blue) {
                assert!(covered[v.mask() as usize]);
            }
            assert_eq!(fam.len() as u128, binomial(dim as u32, r));
        }
    }

    #[test]
    fn sperner_number_values() {
        assert_eq!(sperner_number(1), 0);
        assert_eq!(sperner_number(2), 2);
        assert_eq!(sperner_number(3), 3);
        assert_eq!(sperner_number(5), 4);
        assert_eq!(sperner_number(7), 5); // C(4,2)=6 < 7 ≤ C(5,2)=10
    }

    #[test]
    fn sperner_number_in_window_samples() {
        for t in 2..=2000u64 {
            let a = sperner_number(t);
            let (lo, hi) = sperner_number_window(t);
            assert!(a == lo || a == hi, "α({t}) = {a} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn best_layered_r_examples() {
        assert_eq!(best_layered_r(1, 5), 1);
        assert_eq!(best_layered_r(3, 7), 1);
        assert_eq!(best_layered_r(5, 2), 0);
    }

    #[test]
    fn bounds_examples() {
        let b = ramsey_bounds(100, 3).unwrap();
        assert_eq!(b.exact, Some(103));
        assert_eq!(b.lower, 103);

        for n in 1..=20 {
            let b = ramsey_bounds(n, 2).unwrap();
            assert_eq!(b.exact, Some(n + 2));
            assert_eq!((b.lower, b.upper), (n + 2, n + 2));
        }

        let b = ramsey_bounds(1, 5).unwrap();
        assert_eq!(b.upper, 5); // α(5) = 4
        assert_eq!(b.lower, 5); // layered r = 1
        assert_eq!(b.exact, Some(5));
    }

    #[test]
    fn bounds_sanity_grid() {
        for n in 1..=50u32 {
            for t in [2u64, 3, 4, 5, 10, 100, 1000, 10_000] {
                let b = ramsey_bounds(n, t).unwrap();
                assert!(b.lower <= b.upper);
                if t >= n as u64 + 4 {
                    assert!(b.lower >= n + 4, "t={t} n={n}: lower {}", b.lower);
                }
                if let Some(e) = b.exact {
                    assert!(b.lower <= e && e <= b.upper);
                }
                if let Some(cl) = b.corollary_lower {
                    assert!(cl <= b.lower, "corollary bound must not beat the max");
                }
            }
        }
    }

    #[test]
    fn layer_helper_consistency() {
        // Red layers of the layered construction are exactly sizes r+1..n+r.
        let c = construct_layered_lower(3, 1).unwrap();
        for i in 0..=c.dim() {
            let want_red = (2..=4).contains(&i);
            for v in layer(c.dim(), i).unwrap() {
                assert_eq!(!c.is_blue(v), want_red);
            }
        }
        assert_eq!(mono_height(&c, Color::Red), 3);
    }
}
