//! Aztec rectangles with removed and split vertices on the symmetry axis,
//! their perfect-matching counts, and monomer correlations on the square lattice.
//!
//! The square lattice is drawn at 45°: vertices with both coordinates odd are
//! colour A, both even colour B, and edges join `(x, y)` to `(x ± 1, y ± 1)`.
//! The Aztec rectangle of width `N` and height `H` is the union of the 4-cycles
//! centred at `(2i, 2j + 1)`, `0 ≤ i < N`, `0 ≤ j < H`. Its symmetry axis is
//! `x = N − 1`; for even `N` the axis vertices `(N − 1, 2j + 1)` have colour A.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::counting::det_integer;
use crate::table::ConvergenceTable;
use crate::{to_f64, Error, Integer, Rational, Result};

/// Which copy of a vertex: an ordinary vertex, or one half of a split vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Whole,
    Left,
    Right,
}

/// A vertex of a square-lattice graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SqVertex {
    pub x: i32,
    pub y: i32,
    pub part: Part,
}

impl SqVertex {
    fn whole(x: i32, y: i32) -> Self {
        SqVertex { x, y, part: Part::Whole }
    }

    /// Colour A (both coordinates odd) or B (both even).
    pub fn is_a(&self) -> bool {
        self.x.rem_euclid(2) == 1
    }
}

/// A bipartite subgraph of the square lattice: colour-A vertices, colour-B
/// vertices, and edges as `(A index, B index)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SquareGraph {
    pub a: Vec<SqVertex>,
    pub b: Vec<SqVertex>,
    pub edges: Vec<(usize, usize)>,
}

impl SquareGraph {
    /// Builds a graph from an edge list, collecting endpoints.
    pub fn from_edges(edges: impl IntoIterator<Item = (SqVertex, SqVertex)>) -> Self {
        let mut a_ids: HashMap<SqVertex, usize> = HashMap::new();
        let mut b_ids: HashMap<SqVertex, usize> = HashMap::new();
        let mut g = SquareGraph::default();
        for (va, vb) in edges {
            let ia = *a_ids.entry(va).or_insert_with(|| {
                g.a.push(va);
                g.a.len() - 1
            });
            let ib = *b_ids.entry(vb).or_insert_with(|| {
                g.b.push(vb);
                g.b.len() - 1
            });
            g.edges.push((ia, ib));
        }
        g
    }

    /// Induced subgraph on the vertices satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&SqVertex) -> bool) -> SquareGraph {
        let mut g = SquareGraph::default();
        let mut a_map = vec![usize::MAX; self.a.len()];
        let mut b_map = vec![usize::MAX; self.b.len()];
        for (i, v) in self.a.iter().enumerate() {
            if keep(v) {
                a_map[i] = g.a.len();
                g.a.push(*v);
            }
        }
        for (i, v) in self.b.iter().enumerate() {
            if keep(v) {
                b_map[i] = g.b.len();
                g.b.push(*v);
            }
        }
        for &(ia, ib) in &self.edges {
            if a_map[ia] != usize::MAX && b_map[ib] != usize::MAX {
                g.edges.push((a_map[ia], b_map[ib]));
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.a.len() + self.b.len()
    }

    /// Colour-A count minus colour-B count.
    pub fn charge(&self) -> i64 {
        self.a.len() as i64 - self.b.len() as i64
    }
}

/// Aztec rectangle of `width` by `height` 4-cycles.
pub fn aztec_rectangle(width: u32, height: u32) -> SquareGraph {
    let mut edges = Vec::new();
    for i in 0..width as i32 {
        for j in 0..height as i32 {
            let (cx, cy) = (2 * i, 2 * j + 1);
            for (dx, dy) in [(-1, -1), (-1, 1), (1, -1), (1, 1)] {
                edges.push((SqVertex::whole(cx + dx, cy), SqVertex::whole(cx, cy + dy)));
            }
        }
    }
    SquareGraph::from_edges(edges)
}

/// Removed and split axis labels of `AR_N(v; w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AztecSpec {
    pub n: u32,
    pub removed: Vec<u32>,
    pub split: Vec<u32>,
}

impl AztecSpec {
    pub fn new(n: u32, removed: Vec<u32>, split: Vec<u32>) -> Self {
        AztecSpec { n, removed, split }
    }

    /// Packed reference: removed `0..m`, split `m..m+n`.
    pub fn reference(n_size: u32, m: usize, n: usize) -> Self {
        let m32 = m as u32;
        AztecSpec {
            n: n_size,
            removed: (0..m32).collect(),
            split: (m32..m32 + n as u32).collect(),
        }
    }

    /// Rectangle height `N + m − n`.
    pub fn height(&self) -> i64 {
        self.n as i64 + self.removed.len() as i64 - self.split.len() as i64
    }

    /// Largest valid label `N/2 + m − n − 1`.
    pub fn max_label(&self) -> i64 {
        self.height() - self.n as i64 / 2 - 1
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n.is_multiple_of(2) {
            return Err(Error::InvalidConfig("width N must be even".into()));
        }
        for list in [&self.removed, &self.split] {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::NotStrictlyIncreasing);
            }
            if let Some(&l) = list.iter().find(|&&l| l as i64 > self.max_label()) {
                return Err(Error::LabelOutOfRange(l));
            }
        }
        if let Some(&l) = self.removed.iter().find(|l| self.split.contains(l)) {
            return Err(Error::LabelClash(l));
        }
        Ok(())
    }

    /// The `y` coordinate of the axis vertex with label `l`.
    pub fn label_y(&self, l: i64) -> i32 {
        (2 * (l + self.n as i64 / 2) + 1) as i32
    }
}

/// The graph `AR_N(v; w)`: the Aztec rectangle of width `N` and height
/// `N + m − n` with the axis vertices `v_i` removed and `w_j` split.
pub fn build_aztec(spec: &AztecSpec) -> Result<SquareGraph> {
    spec.validate()?;
    let height = spec.height();
    if height <= 0 {
        return Err(Error::InvalidConfig("rectangle height must be positive".into()));
    }
    let axis = spec.n as i32 - 1;
    let removed: Vec<i32> = spec.removed.iter().map(|&l| spec.label_y(l as i64)).collect();
    let split: Vec<i32> = spec.split.iter().map(|&l| spec.label_y(l as i64)).collect();
    let base = aztec_rectangle(spec.n, height as u32);
    let edges = base.edges.iter().filter_map(|&(ia, ib)| {
        let (mut va, vb) = (base.a[ia], base.b[ib]);
        if va.x == axis && removed.contains(&va.y) {
            return None;
        }
        if va.x == axis && split.contains(&va.y) {
            va.part = if vb.x < axis { Part::Left } else { Part::Right };
        }
        Some((va, vb))
    });
    Ok(SquareGraph::from_edges(edges))
}

/// Number of perfect matchings by non-intersecting paths. Each colour-A vertex
/// `(x, y)` is paired with the colour-B vertex `(x + 1, y + 1)` when they are
/// adjacent; unpaired B vertices are path sources and unpaired A vertices path
/// sinks. A matching corresponds to a family of vertex-disjoint paths, and the
/// count is the absolute determinant of the path matrix. This is valid when
/// sources and sinks lie on the outer face in compatible order, as they do for
/// the half-graphs produced by [`count_aztec`].
pub fn count_matchings_lgv(g: &SquareGraph) -> Integer {
    if g.a.len() != g.b.len() {
        return Integer::zero();
    }
    if g.a.is_empty() {
        return Integer::one();
    }
    let mut a_adj = vec![Vec::new(); g.a.len()];
    let mut b_adj = vec![Vec::new(); g.b.len()];
    for &(ia, ib) in &g.edges {
        a_adj[ia].push(ib);
        b_adj[ib].push(ia);
    }
    let mut pair_a = vec![None; g.a.len()];
    let mut pair_b = vec![None; g.b.len()];
    for (ia, va) in g.a.iter().enumerate() {
        if let Some(&ib) = a_adj[ia].iter().find(|&&ib| g.b[ib].x == va.x + 1 && g.b[ib].y == va.y + 1) {
            pair_a[ia] = Some(ib);
            pair_b[ib] = Some(ia);
        }
    }
    let sources: Vec<usize> = (0..g.b.len()).filter(|&ib| pair_b[ib].is_none()).collect();
    let sinks: Vec<usize> = (0..g.a.len()).filter(|&ia| pair_a[ia].is_none()).collect();
    if sources.len() != sinks.len() {
        return Integer::zero();
    }
    let mut sink_index = vec![usize::MAX; g.a.len()];
    for (k, &ia) in sinks.iter().enumerate() {
        sink_index[ia] = k;
    }
    let mut order: Vec<usize> = (0..g.b.len()).collect();
    order.sort_by_key(|&ib| (g.b[ib].x + g.b[ib].y, g.b[ib].x));
    let rows: Vec<Vec<Integer>> = sources
        .par_iter()
        .map(|&s| {
            let mut ways = vec![Integer::zero(); g.b.len()];
            let mut row = vec![Integer::zero(); sinks.len()];
            ways[s] = Integer::one();
            for &ib in &order {
                if ways[ib].is_zero() {
                    continue;
                }
                let w = std::mem::take(&mut ways[ib]);
                for &ia in &b_adj[ib] {
                    if pair_b[ib] == Some(ia) {
                        continue;
                    }
                    match pair_a[ia] {
                        Some(next) => ways[next] += &w,
                        None => row[sink_index[ia]] += &w,
                    }
                }
            }
            row
        })
        .collect();
    let d = det_integer(rows);
    if d < Integer::zero() {
        -d
    } else {
        d
    }
}

/// Vertex budget of the backtracking oracle.
pub const SQUARE_BRUTEFORCE_BUDGET: usize = 128;

/// Number of perfect matchings by memoized backtracking.
pub fn count_matchings_bruteforce(g: &SquareGraph) -> Result<Integer> {
    let n = g.vertex_count();
    if n > SQUARE_BRUTEFORCE_BUDGET {
        return Err(Error::TooLarge(format!("{n} vertices exceed the oracle budget")));
    }
    let mut verts: Vec<(i32, i32, Part, bool, usize)> = g
        .a
        .iter()
        .enumerate()
        .map(|(i, v)| (v.y, v.x, v.part, true, i))
        .chain(g.b.iter().enumerate().map(|(i, v)| (v.y, v.x, v.part, false, i)))
        .collect();
    verts.sort();
    let mut id_a = vec![0; g.a.len()];
    let mut id_b = vec![0; g.b.len()];
    for (k, v) in verts.iter().enumerate() {
        if v.3 {
            id_a[v.4] = k;
        } else {
            id_b[v.4] = k;
        }
    }
    let mut adj = vec![0u128; n];
    for &(ia, ib) in &g.edges {
        adj[id_a[ia]] |= 1 << id_b[ib];
        adj[id_b[ib]] |= 1 << id_a[ia];
    }
    let full: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut memo: HashMap<u128, Integer> = HashMap::new();
    fn go(used: u128, adj: &[u128], memo: &mut HashMap<u128, Integer>) -> Integer {
        if used == u128::MAX {
            return Integer::one();
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let first = (!used).trailing_zeros() as usize;
        let mut total = Integer::zero();
        let mut options = adj[first] & !used;
        while options != 0 {
            let k = options.trailing_zeros();
            options &= options - 1;
            total += go(used | (1 << first) | (1 << k), adj, memo);
        }
        memo.insert(used, total.clone());
        total
    }
    // vertices beyond `n` count as already matched
    Ok(go(!full, &adj, &mut memo))
}

/// The two halves of `AR_N(v; w)` produced by cutting along the axis, and the
/// number of surviving axis vertices. Axis vertices, read top to bottom, lose
/// their left and right edges alternately, starting with the left.
pub fn aztec_halves(spec: &AztecSpec) -> Result<(SquareGraph, SquareGraph, usize)> {
    let g = build_aztec(spec)?;
    let axis = spec.n as i32 - 1;
    let mut axis_y: Vec<i32> = g
        .a
        .iter()
        .filter(|v| v.x == axis && v.part == Part::Whole)
        .map(|v| v.y)
        .collect();
    axis_y.sort_unstable_by(|p, q| q.cmp(p));
    let goes_right: HashMap<i32, bool> = axis_y.iter().enumerate().map(|(t, &y)| (y, t % 2 == 0)).collect();
    let side = |v: &SqVertex| -> bool {
        match v.part {
            Part::Left => false,
            Part::Right => true,
            Part::Whole if v.x == axis => goes_right[&v.y],
            Part::Whole => v.x > axis,
        }
    };
    // B vertices never lie on the axis, so keeping the vertices of one side
    // drops exactly the cut edges
    Ok((g.filter(|v| !side(v)), g.filter(side), axis_y.len()))
}

/// Number of perfect matchings of `AR_N(v; w)`, as `2^{a/2}` times the counts of
/// the two halves, `a` being the number of surviving axis vertices.
pub fn count_aztec(spec: &AztecSpec) -> Result<Integer> {
    let (left, right, axis) = aztec_halves(spec)?;
    if axis % 2 == 1 {
        return Ok(Integer::zero());
    }
    let (l, r) = rayon::join(|| count_matchings_lgv(&left), || count_matchings_lgv(&right));
    Ok((Integer::one() << (axis / 2)) * l * r)
}

/// Finite-size correlation `M(AR_N(v; w)) / M(AR_N(reference))`.
pub fn omega_sq_ratio(n: u32, removed: &[u32], split: &[u32]) -> Result<Rational> {
    let spec = AztecSpec::new(n, removed.to_vec(), split.to_vec());
    let reference = AztecSpec::reference(n, removed.len(), split.len());
    let den = count_aztec(&reference)?;
    if den.is_zero() {
        return Err(Error::InvalidConfig(format!("reference graph has no perfect matching at N = {n}")));
    }
    Ok(Rational::new(count_aztec(&spec)?, den))
}

/// Finite-size correlations for each `N` in `sizes`. For two removed vertices
/// `0, d` the target is the limiting main term `hartwig_c()·√d`.
pub fn omega_sq_finite(removed: &[u32], split: &[u32], sizes: &[u32]) -> Result<ConvergenceTable> {
    let values: Vec<Rational> = sizes
        .par_iter()
        .map(|&n| omega_sq_ratio(n, removed, split))
        .collect::<Result<_>>()?;
    let target = match (removed, split) {
        ([0, d], []) => Some(hartwig_c() * (*d as f64).sqrt()),
        _ => None,
    };
    let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    let mut table = ConvergenceTable::new("N")
        .with_meta("removed", list(removed))
        .with_meta("split", list(split));
    for (&n, v) in sizes.iter().zip(&values) {
        table.push_exact(n as i64, v, target);
    }
    Ok(table)
}

/// Extrapolation of `f(N) = f∞ + a/N` from two sizes.
pub fn richardson(n1: f64, f1: f64, n2: f64, f2: f64) -> f64 {
    (n2 * f2 - n1 * f1) / (n2 - n1)
}

/// `ω(0, d)` estimated from sizes `8d` and `16d` by Richardson extrapolation.
pub fn omega_pair_extrapolated(d: u32) -> Result<f64> {
    let (n1, n2) = (8 * d, 16 * d);
    let f1 = to_f64(&omega_sq_ratio(n1, &[0, d], &[])?);
    let f2 = to_f64(&omega_sq_ratio(n2, &[0, d], &[])?);
    Ok(richardson(n1 as f64, f1, n2 as f64, f2))
}

/// Main term `∏(v_j − v_i)^{1/2} ∏(w_j − w_i)^{1/2} / ∏|v_i − w_j|^{1/2}`.
pub fn superposition_main(v: &[u32], w: &[u32]) -> Result<f64> {
    if let Some(&l) = v.iter().find(|l| w.contains(l)) {
        return Err(Error::LabelClash(l));
    }
    let diff = |p: u32, q: u32| (p as f64 - q as f64).abs().sqrt();
    let mut value = 1.0;
    for list in [v, w] {
        for (i, &p) in list.iter().enumerate() {
            for &q in &list[i + 1..] {
                value *= diff(p, q);
            }
        }
    }
    for &p in v {
        for &q in w {
            value /= diff(p, q);
        }
    }
    Ok(value)
}

/// Glaisher–Kinkelin constant.
pub const GLAISHER: f64 = 1.282_427_129_100_622_6;

/// `π √e / (2^{1/3} A⁶)`.
pub fn hartwig_c() -> f64 {
    std::f64::consts::PI * std::f64::consts::E.sqrt() / (2f64.cbrt() * GLAISHER.powi(6))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow2(e: u32) -> Integer {
        Integer::one() << e
    }

    #[test]
    fn aztec_diamond_counts() {
        for n in 1..=8u32 {
            let g = aztec_rectangle(n, n);
            assert_eq!(count_matchings_lgv(&g), pow2(n * (n + 1) / 2), "N = {n}");
        }
        for n in [2u32, 4, 6, 8] {
            assert_eq!(count_aztec(&AztecSpec::new(n, vec![], vec![])).unwrap(), pow2(n * (n + 1) / 2));
        }
    }

    #[test]
    fn census_of_example_graph() {
        let g = build_aztec(&AztecSpec::new(12, vec![1, 4], vec![3])).unwrap();
        assert_eq!(g.a.len(), 13 * 13 - 2 + 1);
        assert_eq!(g.b.len(), 12 * 14);
        assert_eq!(g.charge(), 0);
        let split: Vec<_> = g.a.iter().filter(|v| v.part != Part::Whole).collect();
        assert_eq!(split.len(), 2);
    }

    #[test]
    fn removal_and_split_carry_opposite_charges() {
        let plain = aztec_rectangle(6, 6).charge();
        let removed = build_aztec(&AztecSpec::new(6, vec![1], vec![])).unwrap();
        let split = build_aztec(&AztecSpec::new(6, vec![], vec![1])).unwrap();
        // compare against the rectangles of matching height
        assert_eq!(removed.charge() - aztec_rectangle(6, 7).charge(), -1);
        assert_eq!(split.charge() - aztec_rectangle(6, 5).charge(), 1);
        assert_eq!(plain, 0);
    }

    #[test]
    fn validation() {
        assert_eq!(AztecSpec::new(4, vec![1], vec![1]).validate(), Err(Error::LabelClash(1)));
        assert_eq!(AztecSpec::new(4, vec![3], vec![]).validate(), Err(Error::LabelOutOfRange(3)));
        assert_eq!(AztecSpec::new(4, vec![2, 1], vec![]).validate(), Err(Error::NotStrictlyIncreasing));
        assert!(AztecSpec::new(3, vec![], vec![]).validate().is_err());
    }

    #[test]
    fn factorized_count_matches_oracle() {
        let specs = [
            AztecSpec::new(2, vec![0], vec![]),
            AztecSpec::new(2, vec![0, 2], vec![]),
            AztecSpec::new(4, vec![0, 1], vec![]),
            AztecSpec::new(4, vec![0, 2], vec![]),
            AztecSpec::new(4, vec![1], vec![0]),
            AztecSpec::new(4, vec![0], vec![1]),
            AztecSpec::new(6, vec![0, 3], vec![]),
            AztecSpec::new(6, vec![1, 2], vec![0]),
            AztecSpec::new(6, vec![2], vec![1]),
            AztecSpec::new(6, vec![0], vec![2]),
            AztecSpec::new(6, vec![0, 2, 5], vec![]),
        ];
        for spec in specs {
            let g = build_aztec(&spec).unwrap();
            let brute = count_matchings_bruteforce(&g).unwrap();
            assert!(brute > Integer::zero(), "{spec:?}");
            assert_eq!(count_aztec(&spec).unwrap(), brute, "{spec:?}");
        }
    }

    #[test]
    fn reference_ratio_is_one() {
        assert_eq!(omega_sq_ratio(6, &[0, 1], &[]).unwrap(), Rational::one());
    }

    #[test]
    fn main_term_values() {
        assert!((superposition_main(&[0, 9], &[]).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(superposition_main(&[0], &[1]).unwrap(), 1.0);
        assert_eq!(superposition_main(&[2], &[2]), Err(Error::LabelClash(2)));
        assert!((hartwig_c() - 0.924_182_2).abs() < 1e-7);
    }

    #[test]
    fn richardson_removes_first_order_term() {
        let f = |n: f64| 2.0 + 3.0 / n;
        assert!((richardson(8.0, f(8.0), 16.0, f(16.0)) - 2.0).abs() < 1e-14);
    }
}
