//! Chain and antichain structure theory: symmetric chain decomposition,
//! Dilworth minimum chain covers with their maximum-antichain duals, and
//! full-chain machinery.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{binomial, Antichain, Chain, VertexSet};
use crate::sequences::LinearOrdering;

/// Largest dimension for which a full symmetric chain decomposition is
/// materialized (`2^N` vertices).
pub const MAX_SCD_DIM: u8 = 20;

/// Cap on the element count accepted by the Dilworth machinery.
pub const MAX_COVER_ELEMENTS: usize = 10_000;

/// A partition of all of `Q_N` into symmetric chains.
#[derive(Clone, Debug, Serialize)]
pub struct ChainDecomposition {
    n: u8,
    chains: Vec<Chain>,
}

impl ChainDecomposition {
    pub fn dim(&self) -> u8 {
        self.n
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }
}

/// A family of chains covering a given element set.
#[derive(Clone, Debug, Serialize)]
pub struct ChainCover {
    elements: Vec<VertexSet>,
    chains: Vec<Chain>,
}

impl ChainCover {
    pub fn elements(&self) -> &[VertexSet] {
        &self.elements
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Every element lies in some chain and every chain vertex is an element.
    pub fn is_valid(&self) -> bool {
        let in_chains = |v: VertexSet| self.chains.iter().any(|c| c.contains(v));
        self.elements.iter().all(|&v| in_chains(v))
            && self
                .chains
                .iter()
                .flat_map(|c| c.vertices())
                .all(|v| self.elements.binary_search(v).is_ok())
    }
}

/// Symmetric chain decomposition of `Q_N` by bracket matching.
///
/// Each vertex's characteristic string is matched like parentheses
/// (an element in the set closes, one outside opens); the matched pairs are
/// invariant along a chain, and the chain through a vertex varies the
/// unmatched positions by filling them left to right. Chains are emitted in
/// increasing order of their bottom vertex mask.
pub fn symmetric_chain_decomposition(n: u8) -> Result<ChainDecomposition> {
    if n > MAX_SCD_DIM {
        return Err(Error::DimensionTooLarge {
            n: n as u32,
            max: MAX_SCD_DIM as u32,
        });
    }
    let vc = 1usize << n;
    let mut seen = vec![false; vc];
    let mut chains = Vec::with_capacity(binomial(n as u32, n as u32 / 2) as usize);
    let mut stack: Vec<u8> = Vec::with_capacity(n as usize);
    for m in 0..vc as u32 {
        if seen[m as usize] {
            continue;
        }
        let v = VertexSet::from_mask(m);
        // Match brackets: position i is ')' when i ∈ v, '(' otherwise.
        stack.clear();
        let mut fixed = VertexSet::EMPTY; // matched ')' elements: in every member
        let mut free: Vec<u8> = Vec::new(); // unmatched ')' positions (all < unmatched '(')
        for i in 0..n {
            if v.contains(i) {
                if stack.pop().is_some() {
                    fixed = fixed.insert(i);
                } else {
                    free.push(i);
                }
            } else {
                stack.push(i);
            }
        }
        free.extend_from_slice(&stack);
        let mut members = Vec::with_capacity(free.len() + 1);
        let mut cur = fixed;
        members.push(cur);
        for &i in &free {
            cur = cur.insert(i);
            members.push(cur);
        }
        for w in &members {
            debug_assert!(!seen[w.mask() as usize]);
            seen[w.mask() as usize] = true;
        }
        chains.push(Chain::new(members).expect("bracket chain is nested"));
    }
    Ok(ChainDecomposition { n, chains })
}

/// The chains of a symmetric decomposition that contain a vertex of size
/// exactly `r`; there are `C(N, r)` of them and together they cover every
/// vertex of size at most `r` or at least `N − r`.
pub fn chains_through_layer(d: &ChainDecomposition, r: u8) -> Result<Vec<Chain>> {
    if u32::from(r) > u32::from(d.n) / 2 {
        return Err(Error::LayerOutOfRange { n: d.n, layer: r });
    }
    Ok(d.chains
        .iter()
        .filter(|c| c.min_size().is_some_and(|m| m <= r as u32))
        .cloned()
        .collect())
}

/// Strict-inclusion bipartite matching over a sorted, deduplicated element
/// list. `right_match[j] = Some(i)` means `elems[i] ⊂ elems[j]` is a cover
/// edge in the chain decomposition of the comparability digraph.
struct Matching {
    left_match: Vec<Option<usize>>,
    right_match: Vec<Option<usize>>,
    adj: Vec<Vec<usize>>,
    size: usize,
}

fn maximum_matching(elems: &[VertexSet]) -> Matching {
    let n = elems.len();
    // Sorted by mask, so strict supersets always lie to the right.
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (i + 1..n)
                .filter(|&j| elems[i].is_strict_subset_of(elems[j]))
                .collect()
        })
        .collect();
    let mut left_match = vec![None; n];
    let mut right_match = vec![None; n];
    let mut size = 0;
    // Kuhn's augmenting paths; left vertices tried in increasing mask order
    // and neighbors scanned in increasing mask order, so the matching is
    // deterministic.
    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        left_match: &mut [Option<usize>],
        right_match: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &v in &adj[u] {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            let free = match right_match[v] {
                None => true,
                Some(w) => augment(w, adj, left_match, right_match, visited),
            };
            if free {
                left_match[u] = Some(v);
                right_match[v] = Some(u);
                return true;
            }
        }
        false
    }
    for u in 0..n {
        let mut visited = vec![false; n];
        if augment(u, &adj, &mut left_match, &mut right_match, &mut visited) {
            size += 1;
        }
    }
    Matching {
        left_match,
        right_match,
        adj,
        size,
    }
}

fn normalize_elements(elements: &[VertexSet]) -> Result<Vec<VertexSet>> {
    let mut elems = elements.to_vec();
    elems.sort_unstable();
    elems.dedup();
    if elems.len() > MAX_COVER_ELEMENTS {
        return Err(Error::SizeCapExceeded {
            what: "chain cover element count",
            limit: MAX_COVER_ELEMENTS as u64,
        });
    }
    Ok(elems)
}

/// Minimum chain cover of an element family (Dilworth): the chain count
/// equals the maximum antichain size within the family.
pub fn min_chain_cover(elements: &[VertexSet]) -> Result<ChainCover> {
    let elems = normalize_elements(elements)?;
    let m = maximum_matching(&elems);
    let mut chains = Vec::with_capacity(elems.len() - m.size);
    for start in 0..elems.len() {
        if m.right_match[start].is_some() {
            continue; // not a chain head
        }
        let mut members = vec![elems[start]];
        let mut cur = start;
        while let Some(next) = m.left_match[cur] {
            members.push(elems[next]);
            cur = next;
        }
        chains.push(Chain::new(members).expect("matched path is nested"));
    }
    Ok(ChainCover {
        elements: elems,
        chains,
    })
}

/// A maximum antichain within the element family, extracted from the
/// matching's König vertex cover; its size equals the minimum chain cover
/// size.
pub fn max_antichain(elements: &[VertexSet]) -> Result<Antichain> {
    let elems = normalize_elements(elements)?;
    let m = maximum_matching(&elems);
    let n = elems.len();
    // Alternating reachability from unmatched left vertices.
    let mut left_reached = vec![false; n];
    let mut right_reached = vec![false; n];
    let mut queue: Vec<usize> = (0..n).filter(|&u| m.left_match[u].is_none()).collect();
    for &u in &queue {
        left_reached[u] = true;
    }
    while let Some(u) = queue.pop() {
        for &v in &m.adj[u] {
            if right_reached[v] {
                continue;
            }
            right_reached[v] = true;
            if let Some(w) = m.right_match[v] {
                if !left_reached[w] {
                    left_reached[w] = true;
                    queue.push(w);
                }
            }
        }
    }
    // König cover = (L \ reached) ∪ (R ∩ reached); the antichain is the set
    // of elements with neither copy in the cover.
    let picked: Vec<VertexSet> = (0..n)
        .filter(|&i| left_reached[i] && !right_reached[i])
        .map(|i| elems[i])
        .collect();
    debug_assert_eq!(picked.len(), n - m.size);
    Antichain::new(picked)
}

/// Extend a chain of `Q_N` to a full chain (N+1 vertices from the empty set
/// to the full set), filling every gap with the lowest available element
/// index first.
pub fn extend_to_full_chain(ch: &Chain, n: u8) -> Result<Chain> {
    if ch.vertices().iter().any(|v| !v.fits_in(n)) {
        return Err(Error::InvalidParameter(format!(
            "chain does not fit in Q_{n}"
        )));
    }
    let mut out = vec![VertexSet::EMPTY];
    let mut cur = VertexSet::EMPTY;
    for &v in ch.vertices() {
        for e in v.difference(cur).elements() {
            cur = cur.insert(e);
            out.push(cur);
        }
        if cur != v {
            // v lost elements relative to its predecessor: not a chain.
            return Err(Error::NotAChain);
        }
    }
    for e in VertexSet::full(n).difference(cur).elements() {
        cur = cur.insert(e);
        out.push(cur);
    }
    Chain::new(out)
}

/// The linear ordering corresponding to a full chain: position `i` holds the
/// unique element added at the `i`-th step.
pub fn full_chain_to_ordering(ch: &Chain) -> Result<LinearOrdering> {
    let verts = ch.vertices();
    if verts.is_empty() || verts[0] != VertexSet::EMPTY {
        return Err(Error::NotAFullChain { n: 0 });
    }
    let n = (verts.len() - 1) as u8;
    if verts[verts.len() - 1] != VertexSet::full(n) {
        return Err(Error::NotAFullChain { n });
    }
    let mut order = Vec::with_capacity(n as usize);
    for w in verts.windows(2) {
        let added = w[1].difference(w[0]);
        if added.size() != 1 || !w[0].is_subset_of(w[1]) {
            return Err(Error::NotAFullChain { n });
        }
        order.push(added.min_element().unwrap() as u32);
    }
    LinearOrdering::new(order)
}
