//! Exact weighted lozenge-tiling counts.
//!
//! Tilings of a region are encoded as families of non-intersecting paths that
//! climb from row to row through tilted lozenges; the count is the absolute
//! value of the path-matrix determinant. Regions whose holes would make the
//! permutation sign vary are counted with an exact row transfer matrix instead.

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::lattice::{bounded_holes, Region, TriCell};
use crate::{Error, Integer, Rational, Result};

/// Default cell budget of [`count_bruteforce`].
pub const BRUTEFORCE_BUDGET: usize = 40;
/// Default state budget of [`count_transfer`].
pub const TRANSFER_STATE_BUDGET: usize = 8_000_000;

/// Path direction: paths climb across rows of the region rotated by
/// `0`, `120` or `240` degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Deg0,
    Deg120,
    Deg240,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::Deg0, Direction::Deg120, Direction::Deg240];

    fn turns(self) -> usize {
        match self {
            Direction::Deg0 => 0,
            Direction::Deg120 => 1,
            Direction::Deg240 => 2,
        }
    }

    /// The region as seen in this direction.
    pub fn orient(self, region: &Region) -> Region {
        (0..self.turns()).fold(region.clone(), |r, _| r.rotate())
    }
}

/// A path site: the horizontal edge on lattice line `line` at doubled abscissa `x2`.
pub type Site = (i32, i32);

/// Weighted path counts between boundary sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathMatrix {
    pub sources: Vec<Site>,
    pub sinks: Vec<Site>,
    /// `entries[i][j]`: weighted number of paths from `sources[i]` to `sinks[j]`.
    pub entries: Vec<Vec<Rational>>,
    /// Product of the weights of all vertical positions; the tiling count is
    /// `prefactor · |det entries|`.
    pub prefactor: Rational,
    scaled: Vec<Vec<Integer>>,
    scale: Rational,
}

impl PathMatrix {
    pub fn size(&self) -> usize {
        self.sources.len()
    }

    /// Weighted tiling count `prefactor · |det|`.
    pub fn count(&self) -> Rational {
        if self.sources.len() != self.sinks.len() {
            return Rational::zero();
        }
        let det = det_integer(self.scaled.clone()).abs();
        &self.prefactor * Rational::from_integer(det) * &self.scale
    }
}

fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Integer {
    values
        .into_iter()
        .fold(Integer::one(), |acc, w| acc.lcm(w.denom()))
}

/// Checks that every bounded hole presents an even number of path terminals,
/// all of one kind and consecutive on one line.
pub fn is_encodable(region: &Region) -> bool {
    for hole in bounded_holes(region) {
        let mut sources = BTreeSet::new();
        let mut sinks = BTreeSet::new();
        for c in &hole {
            let (x, r) = (c.x2(), c.row);
            if c.up {
                // a present down cell below an up hole cell ends a path
                let d = TriCell::at(x, r - 1);
                if region.contains(&d) {
                    sinks.insert((r, x));
                }
            } else {
                // a present up cell above a down hole cell starts a path
                let u = TriCell::at(x, r + 1);
                if region.contains(&u) {
                    sources.insert((r + 1, x));
                }
            }
        }
        if !sources.is_empty() && !sinks.is_empty() {
            return false;
        }
        let sites: Vec<Site> = sources.union(&sinks).copied().collect();
        if sites.len() % 2 == 1 {
            return false;
        }
        if let Some(&(line, x0)) = sites.first() {
            for (i, &(l, x)) in sites.iter().enumerate() {
                if l != line || x != x0 + 2 * i as i32 {
                    return false;
                }
            }
        }
    }
    true
}

/// Builds the path matrix of `region` in the given direction.
pub fn path_matrix(region: &Region, direction: Direction) -> Result<PathMatrix> {
    let region = direction.orient(region);
    if !is_encodable(&region) {
        return Err(Error::BadDirection);
    }
    Ok(build_path_matrix(&region))
}

fn build_path_matrix(region: &Region) -> PathMatrix {
    let has = |x: i32, r: i32| region.contains(&TriCell::at(x, r));
    let mut prefactor = Rational::one();
    // vertex weight of site (r+1, x): inverse weight of the vertical lozenge there
    let mut vertex_w: HashMap<Site, Rational> = HashMap::new();
    let mut step_w: HashMap<(Site, i32), Rational> = HashMap::new();
    let mut sources = Vec::new();
    let mut sinks = Vec::new();
    let mut sites: BTreeSet<Site> = BTreeSet::new();
    for c in region.cells() {
        let (x, r) = (c.x2(), c.row);
        if c.up {
            sites.insert((r, x));
            if !has(x, r - 1) {
                sources.push((r, x));
            }
            for d in [-1, 1] {
                if has(x + d, r) {
                    let w = region.weight(*c, TriCell::at(x + d, r));
                    if !w.is_one() {
                        step_w.insert(((r, x), d), w);
                    }
                }
            }
        } else {
            sites.insert((r + 1, x));
            if has(x, r + 1) {
                let w = region.weight(*c, TriCell::at(x, r + 1));
                if !w.is_one() {
                    vertex_w.insert((r + 1, x), w.recip());
                    prefactor *= w;
                }
            } else {
                sinks.push((r + 1, x));
            }
        }
    }
    sources.sort_unstable();
    sinks.sort_unstable();
    let scale_d = lcm_denominators(vertex_w.values().chain(step_w.values()));
    let dq = Rational::from_integer(scale_d.clone());
    let to_int = |w: &Rational| (w * &dq).to_integer();
    let index: HashMap<Site, usize> = sites.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let site_list: Vec<Site> = sites.iter().copied().collect();
    let vw: Vec<Integer> = site_list
        .iter()
        .map(|s| vertex_w.get(s).map(to_int).unwrap_or_else(|| scale_d.clone()))
        .collect();
    // outgoing steps (target index, scaled step weight), sites are in line order
    let out: Vec<Vec<(usize, Integer)>> = site_list
        .iter()
        .map(|&(r, x)| {
            if !has(x, r) {
                return Vec::new();
            }
            [-1, 1]
                .into_iter()
                .filter(|d| has(x + d, r))
                .map(|d| {
                    let w = step_w
                        .get(&((r, x), d))
                        .map(to_int)
                        .unwrap_or_else(|| scale_d.clone());
                    (index[&(r + 1, x + d)], w)
                })
                .collect()
        })
        .collect();
    let sink_idx: Vec<usize> = sinks.iter().map(|s| index[s]).collect();
    let scaled: Vec<Vec<Integer>> = sources
        .par_iter()
        .map(|s| {
            let start = index[s];
            let mut val = vec![Integer::zero(); site_list.len()];
            val[start] = vw[start].clone();
            for i in start..site_list.len() {
                if val[i].is_zero() {
                    continue;
                }
                let v = std::mem::take(&mut val[i]);
                for (t, w) in &out[i] {
                    val[*t] += &v * w * &vw[*t];
                }
                val[i] = v;
            }
            sink_idx.iter().map(|&j| val[j].clone()).collect()
        })
        .collect();
    let dpow = |e: i64| -> Rational {
        let p = Rational::from_integer(num_traits::pow(scale_d.clone(), e.unsigned_abs() as usize));
        if e >= 0 {
            p
        } else {
            p.recip()
        }
    };
    let entries = sources
        .iter()
        .zip(&scaled)
        .map(|(s, row)| {
            sinks
                .iter()
                .zip(row)
                .map(|(t, v)| Rational::from_integer(v.clone()) / dpow(2 * (t.0 - s.0) as i64 + 1))
                .collect()
        })
        .collect();
    let exponent: i64 = sinks.iter().map(|t| 2 * t.0 as i64 + 1).sum::<i64>()
        - sources.iter().map(|s| 2 * s.0 as i64).sum::<i64>();
    PathMatrix {
        sources,
        sinks,
        entries,
        prefactor,
        scaled,
        scale: dpow(-exponent),
    }
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn det_integer(mut a: Vec<Vec<Integer>>) -> Integer {
    let n = a.len();
    if n == 0 {
        return Integer::one();
    }
    let mut negate = false;
    let mut prev = Integer::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Integer::zero(),
            }
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        let eliminate = |row: &mut Vec<Integer>| {
            for j in k + 1..n {
                let v = (&row[j] * pivot - &row[k] * &pivot_row[j]) / &prev;
                row[j] = v;
            }
            row[k] = Integer::zero();
        };
        if n > 24 {
            rest.par_iter_mut().for_each(eliminate);
        } else {
            rest.iter_mut().for_each(eliminate);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact determinant of a rational matrix: rows are cleared of denominators,
/// then eliminated fraction-free over the integers.
pub fn det_exact(m: &[Vec<Rational>]) -> Rational {
    let mut scale = Rational::one();
    let rows = m
        .iter()
        .map(|row| {
            let l = lcm_denominators(row.iter());
            scale *= Rational::from_integer(l.clone());
            row.iter()
                .map(|v| (v * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    Rational::from_integer(det_integer(rows)) / scale
}

/// Weighted number of lozenge tilings.
///
/// Uses the path determinant in the first direction that passes
/// [`is_encodable`], otherwise the transfer-matrix counter.
pub fn count_tilings(region: &Region) -> Result<Rational> {
    if region.is_empty() {
        return Ok(Rational::one());
    }
    if region.charge() != 0 {
        return Ok(Rational::zero());
    }
    for dir in Direction::ALL {
        let oriented = dir.orient(region);
        if is_encodable(&oriented) {
            return Ok(build_path_matrix(&oriented).count());
        }
    }
    count_transfer(region, TRANSFER_STATE_BUDGET)
}

/// Exact count by a broken-profile transfer matrix over rows, run in the
/// direction with the narrowest rows.
pub fn count_transfer(region: &Region, max_states: usize) -> Result<Rational> {
    if region.is_empty() {
        return Ok(Rational::one());
    }
    if region.charge() != 0 || region.len() % 2 == 1 {
        return Ok(Rational::zero());
    }
    let width = |r: &Region| {
        let xs = r.cells().iter().map(|c| c.x2());
        xs.clone().max().unwrap() - xs.min().unwrap() + 1
    };
    let best = Direction::ALL
        .iter()
        .map(|d| d.orient(region))
        .min_by_key(width)
        .expect("three directions");
    if width(&best) > 126 {
        return Err(Error::TooLarge(format!(
            "transfer matrix needs {} profile bits (max 126)",
            width(&best)
        )));
    }
    transfer_rows(&best, max_states)
}

const PENDING: u128 = 1 << 127;

fn transfer_rows(region: &Region, max_states: usize) -> Result<Rational> {
    let cells = region.cells();
    let xmin = cells.iter().map(|c| c.x2()).min().unwrap();
    let has = |x: i32, r: i32| cells.contains(&TriCell::at(x, r));
    let dq = Rational::from_integer(lcm_denominators(region.weights().values()));
    let wt = |a: TriCell, b: TriCell| -> BigUint {
        (region.weight(a, b) * &dq)
            .to_integer()
            .to_biguint()
            .expect("weights are positive")
    };
    let unit_weights = region.weights().is_empty();
    let scaled = |a: TriCell, b: TriCell, v: &BigUint| -> BigUint {
        if unit_weights {
            v.clone()
        } else {
            v * wt(a, b)
        }
    };
    let mut rows: Vec<i32> = cells.iter().map(|c| c.row).collect();
    rows.dedup();
    let mut states: HashMap<u128, BigUint> = HashMap::from([(0u128, BigUint::one())]);
    for &r in &rows {
        let row_cells: Vec<i32> = cells.iter().filter(|c| c.row == r).map(|c| c.x2()).collect();
        let (lo, hi) = (row_cells[0], *row_cells.last().unwrap());
        for x in lo..=hi {
            let here = TriCell::at(x, r);
            let bit = 1u128 << (x - xmin);
            let present = has(x, r);
            let mut next: HashMap<u128, BigUint> = HashMap::with_capacity(states.len());
            let mut push = |k: u128, v: BigUint| {
                *next.entry(k).or_default() += v;
            };
            for (s, v) in states.drain() {
                let pend = s & PENDING != 0;
                let mask = s & !PENDING;
                let left = TriCell::at(x - 1, r);
                if !present {
                    if !pend {
                        push(mask, v);
                    }
                    continue;
                }
                if here.up {
                    if mask & bit != 0 {
                        if !pend {
                            push(mask & !bit, v);
                        }
                    } else if pend {
                        push(mask, scaled(left, here, &v));
                    } else if has(x + 1, r) {
                        push(mask | PENDING, v);
                    }
                } else if pend {
                    push(mask, scaled(left, here, &v));
                } else {
                    if has(x, r + 1) {
                        push(mask | bit, scaled(here, TriCell::at(x, r + 1), &v));
                    }
                    if has(x + 1, r) {
                        push(mask | PENDING, v.clone());
                    }
                }
            }
            if next.len() > max_states {
                return Err(Error::TooLarge(format!(
                    "transfer matrix exceeded {max_states} states"
                )));
            }
            states = next;
        }
        states.retain(|s, _| s & PENDING == 0);
    }
    let total = states.remove(&0).unwrap_or_default();
    let lozenges = region.len() / 2;
    let denom = num_traits::pow(dq, lozenges);
    Ok(Rational::from_integer(BigInt::from(total)) / denom)
}

/// Exhaustive backtracking count, limited to [`BRUTEFORCE_BUDGET`] cells.
pub fn count_bruteforce(region: &Region) -> Result<Rational> {
    count_bruteforce_with_budget(region, BRUTEFORCE_BUDGET)
}

/// Exhaustive backtracking count with an explicit cell budget (at most 64).
pub fn count_bruteforce_with_budget(region: &Region, budget: usize) -> Result<Rational> {
    let n = region.len();
    if n > budget.min(64) {
        return Err(Error::TooLarge(format!("{n} cells exceed budget {budget}")));
    }
    let cells: Vec<TriCell> = region.cells().iter().copied().collect();
    let index: HashMap<TriCell, usize> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let adj: Vec<Vec<(usize, Rational)>> = cells
        .iter()
        .map(|c| {
            c.neighbors()
                .iter()
                .filter_map(|d| index.get(d).map(|&j| (j, region.weight(*c, *d))))
                .collect()
        })
        .collect();
    fn rec(free: u64, adj: &[Vec<(usize, Rational)>], memo: &mut HashMap<u64, Rational>) -> Rational {
        if free == 0 {
            return Rational::one();
        }
        if let Some(v) = memo.get(&free) {
            return v.clone();
        }
        let i = free.trailing_zeros() as usize;
        let mut total = Rational::zero();
        for (j, w) in &adj[i] {
            if free & (1 << j) != 0 {
                total += w * rec(free & !(1 << i) & !(1 << j), adj, memo);
            }
        }
        memo.insert(free, total.clone());
        total
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(rec(full, &adj, &mut HashMap::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::semiregular_hexagon;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn macmahon(a: u32, b: u32, c: u32) -> Rational {
        let mut v = Rational::one();
        for i in 1..=a {
            for j in 1..=b {
                for k in 1..=c {
                    v *= q((i + j + k - 1) as i64, (i + j + k - 2) as i64);
                }
            }
        }
        v
    }

    #[test]
    fn determinants_by_hand() {
        let id: Vec<Vec<Rational>> = (0..3)
            .map(|i| (0..3).map(|j| q((i == j) as i64, 1)).collect())
            .collect();
        assert_eq!(det_exact(&id), q(1, 1));
        assert_eq!(det_exact(&[vec![q(1, 1), q(2, 1)], vec![q(3, 1), q(4, 1)]]), q(-2, 1));
        assert_eq!(det_exact(&[vec![q(1, 2), q(1, 1)], vec![q(1, 1), q(1, 2)]]), q(-3, 4));
        assert_eq!(det_exact(&[vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]), q(-1, 1));
        assert_eq!(det_exact(&[]), q(1, 1));
    }

    #[test]
    fn macmahon_hexagons() {
        for (a, b, c) in [(1, 1, 1), (2, 2, 2), (2, 3, 4), (3, 3, 3), (1, 4, 2)] {
            let h = semiregular_hexagon(a, b, c);
            assert_eq!(count_tilings(&h).unwrap(), macmahon(a, b, c), "({a},{b},{c})");
            assert_eq!(count_transfer(&h, 1 << 20).unwrap(), macmahon(a, b, c));
        }
        assert_eq!(count_bruteforce(&semiregular_hexagon(2, 2, 2)).unwrap(), q(20, 1));
    }

    #[test]
    fn trivial_regions() {
        assert_eq!(count_bruteforce(&Region::default()).unwrap(), q(1, 1));
        assert_eq!(count_tilings(&Region::default()).unwrap(), q(1, 1));
        let one = Region::new([TriCell::at(0, 0)]);
        assert_eq!(count_tilings(&one).unwrap(), q(0, 1));
        let mut pair = Region::new([TriCell::at(0, 0), TriCell::at(1, 0)]);
        pair.set_weight(TriCell::at(0, 0), TriCell::at(1, 0), q(1, 2)).unwrap();
        assert_eq!(count_bruteforce(&pair).unwrap(), q(1, 2));
        assert_eq!(count_tilings(&pair).unwrap(), q(1, 2));
    }

    #[test]
    fn single_lozenge_path_matrix() {
        let r = Region::new([TriCell::at(0, 0), TriCell::at(1, 0)]);
        let m = path_matrix(&r, Direction::Deg0).unwrap();
        assert_eq!(m.entries, vec![vec![q(1, 1)]]);
    }

    #[test]
    fn directions_agree_on_weighted_hexagon() {
        let mut h = semiregular_hexagon(2, 3, 2);
        let cells: Vec<TriCell> = h.cells().iter().copied().collect();
        let mut k = 0;
        for c in &cells {
            for d in c.neighbors() {
                if h.contains(&d) && c.up && k % 3 == 0 {
                    h.set_weight(*c, d, q(k as i64 % 5 + 1, 2)).unwrap();
                }
                k += 1;
            }
        }
        let counts: Vec<Rational> = Direction::ALL
            .iter()
            .map(|&d| path_matrix(&h, d).unwrap().count())
            .collect();
        assert_eq!(counts[0], counts[1]);
        assert_eq!(counts[0], counts[2]);
        assert_eq!(counts[0], count_transfer(&h, 1 << 20).unwrap());
        assert_eq!(counts[0], count_bruteforce_with_budget(&h, 64).unwrap());
    }
}
