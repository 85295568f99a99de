//! Triangular-lattice cells, weighted regions, and the builders for hexagons with
//! holes, their western and eastern halves, and the bump regions.
//!
//! Internally a cell is addressed by `(x2, row)`, where `x2` is twice the
//! x-coordinate of the midpoint of its horizontal edge (x-unit = triangle side)
//! and `row` is the lattice line its lower side lies on (y-unit = √3/2). A cell
//! is up-pointing iff `x2 + row` is even. The monomer `u` is the up cell whose
//! base midpoint is the origin; the symmetry axis `ℓ` is `x = 0`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::{format_rational, parse_rational, Error, Rational, Result};

/// One unit triangle of the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriCell {
    pub col: i32,
    pub row: i32,
    pub up: bool,
}

impl TriCell {
    pub fn new(col: i32, row: i32, up: bool) -> Self {
        TriCell { col, row, up }
    }

    /// Cell with doubled horizontal-edge midpoint `x2` on `row`; the orientation
    /// is determined by parity.
    pub fn at(x2: i32, row: i32) -> Self {
        TriCell {
            col: x2.div_euclid(2),
            row,
            up: (x2 + row).rem_euclid(2) == 0,
        }
    }

    /// Twice the x-coordinate of the midpoint of the horizontal edge.
    pub fn x2(&self) -> i32 {
        let p = (self.row + i32::from(!self.up)).rem_euclid(2);
        2 * self.col + p
    }

    /// The three edge-sharing neighbours (all of opposite orientation).
    pub fn neighbors(&self) -> [TriCell; 3] {
        let (x, r) = (self.x2(), self.row);
        let vertical = if self.up { r - 1 } else { r + 1 };
        [TriCell::at(x - 1, r), TriCell::at(x + 1, r), TriCell::at(x, vertical)]
    }

    pub fn is_adjacent(&self, other: &TriCell) -> bool {
        self.neighbors().contains(other)
    }

    /// Reflection in the vertical axis `x = 0`.
    pub fn mirror(&self) -> TriCell {
        TriCell::at(-self.x2(), self.row)
    }

    /// Rotation by 120° about a lattice vertex; three applications give the identity.
    pub fn rotate(&self) -> TriCell {
        let (x, j) = (self.x2(), self.row);
        if self.up {
            let i = (x - j) / 2;
            let (ni, nj) = (-i - j - 1, i);
            TriCell::at(2 * ni + nj, nj)
        } else {
            let i = (x - j - 1) / 2;
            let (ni, nj) = (-i - j - 2, i);
            TriCell::at(2 * ni + nj + 1, nj)
        }
    }

    /// Lattice vertices in doubled coordinates `(2x, row)`.
    pub fn vertices(&self) -> [(i32, i32); 3] {
        let (x, r) = (self.x2(), self.row);
        if self.up {
            [(x - 1, r), (x + 1, r), (x, r + 1)]
        } else {
            [(x - 1, r + 1), (x + 1, r + 1), (x, r)]
        }
    }

    fn key(&self) -> (i32, i32) {
        (self.row, self.x2())
    }
}

impl Ord for TriCell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for TriCell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Unordered lozenge position, stored with the smaller cell first.
pub type Position = (TriCell, TriCell);

fn position(a: TriCell, b: TriCell) -> Position {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A finite set of cells with positive rational weights on some lozenge positions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Region {
    cells: BTreeSet<TriCell>,
    weights: BTreeMap<Position, Rational>,
}

impl Region {
    pub fn new(cells: impl IntoIterator<Item = TriCell>) -> Self {
        Region {
            cells: cells.into_iter().collect(),
            weights: BTreeMap::new(),
        }
    }

    pub fn cells(&self) -> &BTreeSet<TriCell> {
        &self.cells
    }

    pub fn weights(&self) -> &BTreeMap<Position, Rational> {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: &TriCell) -> bool {
        self.cells.contains(c)
    }

    /// Weight of the lozenge on `a, b` (1 when unweighted).
    pub fn weight(&self, a: TriCell, b: TriCell) -> Rational {
        self.weights
            .get(&position(a, b))
            .cloned()
            .unwrap_or_else(Rational::one)
    }

    /// Sets the weight of a lozenge position; both cells must be present and adjacent.
    pub fn set_weight(&mut self, a: TriCell, b: TriCell, w: Rational) -> Result<()> {
        if !self.contains(&a) || !self.contains(&b) || !a.is_adjacent(&b) {
            return Err(Error::InvalidWeight(format!(
                "position {a:?}-{b:?} is not a lozenge of the region"
            )));
        }
        if !w.is_positive() {
            return Err(Error::InvalidWeight(format!("non-positive weight {w}")));
        }
        if w.is_one() {
            self.weights.remove(&position(a, b));
        } else {
            self.weights.insert(position(a, b), w);
        }
        Ok(())
    }

    /// Number of positions carrying a weight other than 1.
    pub fn weighted_count(&self) -> usize {
        self.weights.len()
    }

    /// Number of up cells minus number of down cells.
    pub fn charge(&self) -> i64 {
        charge(self.cells.iter())
    }

    /// Removes cells, dropping weights on positions that lose a cell.
    pub fn remove_cells<'a>(&mut self, cells: impl IntoIterator<Item = &'a TriCell>) {
        for c in cells {
            self.cells.remove(c);
        }
        let cells = &self.cells;
        self.weights
            .retain(|(a, b), _| cells.contains(a) && cells.contains(b));
    }

    /// Applies a cell map that preserves adjacency (rotation, reflection).
    pub fn map(&self, f: impl Fn(&TriCell) -> TriCell) -> Region {
        Region {
            cells: self.cells.iter().map(&f).collect(),
            weights: self
                .weights
                .iter()
                .map(|((a, b), w)| (position(f(a), f(b)), w.clone()))
                .collect(),
        }
    }

    pub fn mirror(&self) -> Region {
        self.map(TriCell::mirror)
    }

    pub fn rotate(&self) -> Region {
        self.map(TriCell::rotate)
    }

    /// Repeatedly removes cells with a unique remaining neighbour together with
    /// that neighbour. With `unit_only`, a forced lozenge is removed only when
    /// its weight is 1. Returns the stripped region and the product of the
    /// weights of removed lozenges, or `None` if some cell is left with no
    /// neighbour at all (the region has no tiling).
    pub fn strip_forced(&self, unit_only: bool) -> Option<(Region, Rational)> {
        let mut cells = self.cells.clone();
        let mut factor = Rational::one();
        let mut queue: VecDeque<TriCell> = cells.iter().copied().collect();
        while let Some(c) = queue.pop_front() {
            if !cells.contains(&c) {
                continue;
            }
            let nb: Vec<TriCell> = c
                .neighbors()
                .into_iter()
                .filter(|d| cells.contains(d))
                .collect();
            match nb.len() {
                0 => return None,
                1 => {
                    let d = nb[0];
                    let w = self.weight(c, d);
                    if unit_only && !w.is_one() {
                        continue;
                    }
                    factor *= w;
                    cells.remove(&c);
                    cells.remove(&d);
                    for e in d.neighbors() {
                        if cells.contains(&e) {
                            queue.push_back(e);
                        }
                    }
                }
                _ => {}
            }
        }
        let mut out = Region {
            cells,
            weights: self.weights.clone(),
        };
        out.remove_cells(std::iter::empty());
        Some((out, factor))
    }

    /// Line-oriented text form: `col row u|d` per cell, then
    /// `w col1 row1 o1 col2 row2 o2 p/q` per weighted position.
    pub fn to_text(&self) -> String {
        let o = |c: &TriCell| if c.up { 'u' } else { 'd' };
        let mut s = String::new();
        for c in &self.cells {
            let _ = writeln!(s, "{} {} {}", c.col, c.row, o(c));
        }
        for ((a, b), w) in &self.weights {
            let _ = writeln!(
                s,
                "w {} {} {} {} {} {} {}",
                a.col,
                a.row,
                o(a),
                b.col,
                b.row,
                o(b),
                format_rational(w)
            );
        }
        s
    }

    /// Parses the format written by [`Region::to_text`].
    pub fn from_text(text: &str) -> Result<Region> {
        fn cell(col: &str, row: &str, o: &str) -> Result<TriCell> {
            let p = |t: &str| {
                t.parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
            };
            let up = match o {
                "u" => true,
                "d" => false,
                _ => return Err(Error::Parse(format!("bad orientation {o:?}"))),
            };
            Ok(TriCell::new(p(col)?, p(row)?, up))
        }
        let mut region = Region::default();
        let mut pending = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let t: Vec<&str> = line.split_whitespace().collect();
            match t.as_slice() {
                ["w", c1, r1, o1, c2, r2, o2, w] => pending.push((
                    cell(c1, r1, o1)?,
                    cell(c2, r2, o2)?,
                    parse_rational(w)?,
                )),
                [c, r, o] => {
                    region.cells.insert(cell(c, r, o)?);
                }
                _ => return Err(Error::Parse(format!("bad region line {line:?}"))),
            }
        }
        for (a, b, w) in pending {
            region.set_weight(a, b, w)?;
        }
        Ok(region)
    }
}

/// `#up − #down` over a set of cells.
pub fn charge<'a>(cells: impl IntoIterator<Item = &'a TriCell>) -> i64 {
    cells
        .into_iter()
        .map(|c| if c.up { 1 } else { -1 })
        .sum()
}

/// Lattice hexagon with sides listed counter-clockwise from the base
/// (base, lower-right, upper-right, top, upper-left, lower-left), base on
/// line `base_row`, left end of the base at doubled abscissa `x0` (a lattice
/// vertex, so `x0 + base_row` is odd).
pub fn hexagon_at(sides: [u32; 6], base_row: i32, x0: i32) -> Result<Region> {
    if (x0 + base_row).rem_euclid(2) != 1 {
        return Err(Error::InvalidConfig(format!(
            "({x0}, {base_row}) is not a lattice vertex"
        )));
    }
    let s = sides.map(|v| v as i32);
    let h = s[1] + s[2];
    let top = 2 * s[0] + s[1] - s[2] + s[5] - s[4];
    if h != s[4] + s[5] || top != 2 * s[3] {
        return Err(Error::InvalidConfig(format!(
            "sides {sides:?} do not close up into a lattice hexagon"
        )));
    }
    let left = |y: i32| {
        if y <= s[5] {
            x0 - y
        } else {
            x0 - s[5] + (y - s[5])
        }
    };
    let right = |y: i32| {
        if y <= s[1] {
            x0 + 2 * s[0] + y
        } else {
            x0 + 2 * s[0] + s[1] - (y - s[1])
        }
    };
    let mut cells = Vec::new();
    for y in 0..h {
        let (lo, hi) = (left(y).min(left(y + 1)), right(y).max(right(y + 1)));
        for x2 in lo..=hi {
            let c = TriCell::at(x2, base_row + y);
            let inside = c.vertices().iter().all(|&(vx, vy)| {
                let yy = vy - base_row;
                left(yy) <= vx && vx <= right(yy)
            });
            if inside {
                cells.push(c);
            }
        }
    }
    Ok(Region::new(cells))
}

/// Hexagon with opposite sides `p, q, r` (sides p, q, r, p, q, r from the base).
pub fn semiregular_hexagon(p: u32, q: u32, r: u32) -> Region {
    hexagon_at([p, q, r, p, q, r], 0, 1).expect("opposite sides equal always close")
}

/// Lists of down quadromers `(R_i, v_i)` and up quadromers `(R′_j, v′_j)`,
/// each placed together with its mirror image; the monomer `u` is implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleConfig {
    pub down: Vec<(u32, u32)>,
    pub up: Vec<(u32, u32)>,
}

/// A hole of a [`HoleConfig`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HoleId {
    Monomer,
    Down(usize),
    DownMirror(usize),
    Up(usize),
    UpMirror(usize),
}

/// Selects the lattice point standing in for the monomer `u`: the closest
/// lattice point above it for factors in a numerator, below it for a denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomerPoint {
    Numerator,
    Denominator,
}

/// Down quadromer `D(R, v)`: top side on line `-(2v+1)`, centred at `x = -R`.
pub fn down_quad(r: u32, v: u32) -> [TriCell; 4] {
    let (x, y) = (-2 * r as i32, -(2 * v as i32 + 2));
    [
        TriCell::at(x - 1, y),
        TriCell::at(x + 1, y),
        TriCell::at(x, y),
        TriCell::at(x, y - 1),
    ]
}

/// Up quadromer `U(R′, v′)`: base on line `2v′+1`, centred at `x = -R′`.
pub fn up_quad(r: u32, v: u32) -> [TriCell; 4] {
    let (x, y) = (-2 * r as i32, 2 * v as i32 + 1);
    [
        TriCell::at(x - 1, y),
        TriCell::at(x + 1, y),
        TriCell::at(x, y),
        TriCell::at(x, y + 1),
    ]
}

/// The monomer `u`.
pub fn monomer() -> TriCell {
    TriCell::at(0, 0)
}

impl HoleConfig {
    pub fn new(down: Vec<(u32, u32)>, up: Vec<(u32, u32)>) -> Self {
        HoleConfig { down, up }
    }

    /// The packed configuration `(1,0), (3,0), …, (2m−1,0)` and likewise for up holes.
    pub fn reference(m: usize, n: usize) -> Self {
        let packed = |k: usize| (0..k).map(|i| (2 * i as u32 + 1, 0)).collect();
        HoleConfig {
            down: packed(m),
            up: packed(n),
        }
    }

    pub fn m(&self) -> usize {
        self.down.len()
    }

    pub fn n(&self) -> usize {
        self.up.len()
    }

    pub fn is_reference(&self) -> bool {
        let mut d = self.down.clone();
        let mut u = self.up.clone();
        d.sort_unstable();
        u.sort_unstable();
        let r = HoleConfig::reference(self.m(), self.n());
        d == r.down && u == r.up
    }

    /// All holes, monomer first.
    pub fn hole_ids(&self) -> Vec<HoleId> {
        let mut v = vec![HoleId::Monomer];
        for i in 0..self.m() {
            v.push(HoleId::Down(i));
            v.push(HoleId::DownMirror(i));
        }
        for j in 0..self.n() {
            v.push(HoleId::Up(j));
            v.push(HoleId::UpMirror(j));
        }
        v
    }

    /// Cells of one hole.
    pub fn footprint(&self, id: HoleId) -> Vec<TriCell> {
        let mirror = |q: [TriCell; 4]| q.map(|c| c.mirror()).to_vec();
        match id {
            HoleId::Monomer => vec![monomer()],
            HoleId::Down(i) => down_quad(self.down[i].0, self.down[i].1).to_vec(),
            HoleId::DownMirror(i) => mirror(down_quad(self.down[i].0, self.down[i].1)),
            HoleId::Up(j) => up_quad(self.up[j].0, self.up[j].1).to_vec(),
            HoleId::UpMirror(j) => mirror(up_quad(self.up[j].0, self.up[j].1)),
        }
    }

    /// Checks radii, duplicate coordinates and footprint disjointness.
    pub fn validate(&self) -> Result<()> {
        for list in [&self.down, &self.up] {
            let mut seen = BTreeSet::new();
            for &(r, v) in list.iter() {
                if r == 0 {
                    return Err(Error::RadiusZero);
                }
                if !seen.insert((r, v)) {
                    return Err(Error::DuplicateHole(r, v));
                }
            }
        }
        let mut used = BTreeSet::new();
        for id in self.hole_ids() {
            for c in self.footprint(id) {
                if !used.insert(c) {
                    return Err(Error::HoleOverlap);
                }
            }
        }
        Ok(())
    }

    /// Union of all hole cells.
    pub fn hole_cells(&self) -> BTreeSet<TriCell> {
        self.hole_ids()
            .into_iter()
            .flat_map(|id| self.footprint(id))
            .collect()
    }
}

/// Charge of a hole: 1 for `u`, −2 for down quadromers, 2 for up quadromers.
pub fn hole_charge(id: HoleId) -> i64 {
    match id {
        HoleId::Monomer => 1,
        HoleId::Down(_) | HoleId::DownMirror(_) => -2,
        HoleId::Up(_) | HoleId::UpMirror(_) => 2,
    }
}

/// Base-midpoint of a hole as `(x, y)` with `y` in units of √3/2.
pub fn base_point(id: HoleId, holes: &HoleConfig, side: MonomerPoint) -> (f64, f64) {
    match id {
        HoleId::Monomer => match side {
            MonomerPoint::Numerator => (0.0, 1.0),
            MonomerPoint::Denominator => (0.0, -1.0),
        },
        HoleId::Down(i) | HoleId::DownMirror(i) => {
            let (r, v) = holes.down[i];
            let x = if matches!(id, HoleId::Down(_)) { -(r as f64) } else { r as f64 };
            (x, -(2.0 * v as f64 + 1.0))
        }
        HoleId::Up(j) | HoleId::UpMirror(j) => {
            let (r, v) = holes.up[j];
            let x = if matches!(id, HoleId::Up(_)) { -(r as f64) } else { r as f64 };
            (x, 2.0 * v as f64 + 1.0)
        }
    }
}

/// Euclidean distance between the base midpoints of two holes. For pairs
/// involving `u` the lattice point above or below `u` is used according to
/// whether the pair's charge product is positive (numerator) or negative.
pub fn hole_distance(a: HoleId, b: HoleId, holes: &HoleConfig) -> Result<f64> {
    if a == b {
        return Err(Error::SameHole);
    }
    let side = if hole_charge(a) * hole_charge(b) > 0 {
        MonomerPoint::Numerator
    } else {
        MonomerPoint::Denominator
    };
    Ok(hole_distance_with(a, b, holes, side))
}

/// [`hole_distance`] with an explicit choice of the point representing `u`.
pub fn hole_distance_with(a: HoleId, b: HoleId, holes: &HoleConfig, side: MonomerPoint) -> f64 {
    let (xa, ya) = base_point(a, holes, side);
    let (xb, yb) = base_point(b, holes, side);
    let (dx, dy) = (xa - xb, ya - yb);
    (dx * dx + 0.75 * dy * dy).sqrt()
}

/// The closed-form distance attached to a pair of holes in the catalog of
/// Coulomb factors. Agrees with [`hole_distance`] except for down/up pairs,
/// where the catalog uses `3(v + v′)²` in place of the geometric `3(v + v′ + 1)²`.
pub fn catalog_distance(a: HoleId, b: HoleId, holes: &HoleConfig) -> Result<f64> {
    use HoleId::*;
    if a == b {
        return Err(Error::SameHole);
    }
    let f = |x: f64, y: f64| (x * x + 3.0 * y * y).sqrt();
    let d = |i: usize| (holes.down[i].0 as f64, holes.down[i].1 as f64);
    let u = |j: usize| (holes.up[j].0 as f64, holes.up[j].1 as f64);
    let mirrored = |h: HoleId| matches!(h, DownMirror(_) | UpMirror(_));
    let value = match (a, b) {
        (Monomer, Down(i) | DownMirror(i)) | (Down(i) | DownMirror(i), Monomer) => f(d(i).0, d(i).1),
        (Monomer, Up(j) | UpMirror(j)) | (Up(j) | UpMirror(j), Monomer) => f(u(j).0, u(j).1),
        (Down(i) | DownMirror(i), Down(j) | DownMirror(j)) => {
            let (r1, v1) = d(i);
            let (r2, v2) = d(j);
            let dr = if mirrored(a) == mirrored(b) { r2 - r1 } else { r2 + r1 };
            f(dr, v2 - v1)
        }
        (Up(i) | UpMirror(i), Up(j) | UpMirror(j)) => {
            let (r1, v1) = u(i);
            let (r2, v2) = u(j);
            let dr = if mirrored(a) == mirrored(b) { r2 - r1 } else { r2 + r1 };
            f(dr, v2 - v1)
        }
        (Down(i) | DownMirror(i), Up(j) | UpMirror(j)) | (Up(j) | UpMirror(j), Down(i) | DownMirror(i)) => {
            let (r1, v1) = d(i);
            let (r2, v2) = u(j);
            let dr = if mirrored(a) == mirrored(b) { r2 - r1 } else { r2 + r1 };
            f(dr, v2 + v1)
        }
        (Monomer, Monomer) => unreachable!(),
    };
    Ok(value)
}

/// Side lengths `(2N + 4n + 1, 2N + 4m)` of the hexagon hosting `holes`.
pub fn hexagon_sides(n_size: u32, holes: &HoleConfig) -> (u32, u32) {
    (
        2 * n_size + 4 * holes.n() as u32 + 1,
        2 * n_size + 4 * holes.m() as u32,
    )
}

fn centred_hexagon(a: u32, b: u32) -> Region {
    hexagon_at([a, b, a, b, a, b], -(b as i32), -(a as i32)).expect("alternating sides close")
}

/// Whether a cell lies west of the zig-zag cut along `ℓ`.
pub fn is_west(c: &TriCell) -> bool {
    if c.row >= 1 {
        c.x2() <= 0
    } else {
        c.x2() <= -1
    }
}

/// Vertical lozenge positions straddling `ℓ` whose lower cell sits on an odd
/// row in `rows`.
fn axis_positions(rows: impl Iterator<Item = i32>) -> Vec<Position> {
    rows.filter(|r| r.rem_euclid(2) == 1)
        .map(|r| position(TriCell::at(0, r), TriCell::at(0, r + 1)))
        .collect()
}

/// The hexagon `H_N` with sides alternating `2N+4n+1`, `2N+4m` (from the
/// base) and the monomer plus all quadromers and their mirror images removed.
pub fn build_h(n_size: u32, holes: &HoleConfig) -> Result<Region> {
    holes.validate()?;
    let (a, b) = hexagon_sides(n_size, holes);
    let mut region = centred_hexagon(a, b);
    let removed = holes.hole_cells();
    if !removed.iter().all(|c| region.contains(c)) {
        return Err(Error::HoleOutOfBounds);
    }
    region.remove_cells(removed.iter());
    Ok(region)
}

fn half_weights(region: &mut Region, positions: Vec<Position>) -> Result<()> {
    let half = Rational::new(1.into(), 2.into());
    for (p, q) in positions {
        region.set_weight(p, q, half.clone())?;
    }
    Ok(())
}

/// Western half of `H_N`, with weight 1/2 on the `N+2n` vertical positions
/// straddling the cut above `u`.
pub fn build_w(n_size: u32, holes: &HoleConfig) -> Result<Region> {
    let h = build_h(n_size, holes)?;
    let (a, _) = hexagon_sides(n_size, holes);
    let mut west = Region::new(h.cells().iter().copied().filter(is_west));
    let present: Vec<Position> = axis_positions(1..a as i32 - 1)
        .into_iter()
        .filter(|(p, q)| west.contains(p) && west.contains(q))
        .collect();
    half_weights(&mut west, present)?;
    Ok(west)
}

/// Eastern half of `H_N` after stripping forced unit-weight lozenges, with
/// weight 1/2 on the `N+2m−1` vertical positions straddling the cut below `u`.
pub fn build_e(n_size: u32, holes: &HoleConfig) -> Result<Region> {
    let h = build_h(n_size, holes)?;
    let (_, b) = hexagon_sides(n_size, holes);
    let mut east = Region::new(h.cells().iter().copied().filter(|c| !is_west(c)));
    let positions = axis_positions(-(b as i32) + 1..-2);
    let present: Vec<Position> = positions
        .into_iter()
        .filter(|(p, q)| east.contains(p) && east.contains(q))
        .collect();
    half_weights(&mut east, present)?;
    Ok(match east.strip_forced(true) {
        Some((stripped, _)) => stripped,
        None => east,
    })
}

/// Which half-region a bump region is carved from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    West,
    East,
}

/// Bump region `W_N[k; l]` or `E_N[k; l]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BumpSpec {
    pub n: u32,
    pub k: Vec<u32>,
    pub l: Vec<u32>,
    pub side: Side,
}

impl BumpSpec {
    /// The packed reference `k = [0..m−1]`, `l = [0..n−1]`.
    pub fn reference(n_size: u32, m: usize, n: usize, side: Side) -> Self {
        BumpSpec {
            n: n_size,
            k: (0..m as u32).collect(),
            l: (0..n as u32).collect(),
            side,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n) = (self.k.len() as u32, self.l.len() as u32);
        let (kmax, lmax) = match self.side {
            Side::West => (self.n + m, self.n + n),
            Side::East => ((self.n + m).saturating_sub(1), self.n + n),
        };
        for (labels, bound) in [(&self.k, kmax), (&self.l, lmax)] {
            for w in labels.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DuplicateLabel(w[0]));
                }
                if w[0] > w[1] {
                    return Err(Error::NotStrictlyIncreasing);
                }
            }
            if let Some(&x) = labels.iter().find(|&&x| x + 1 > bound) {
                return Err(Error::LabelOutOfRange(x));
            }
        }
        Ok(())
    }
}

/// Builds a bump region: the half of the hexagon with sides `2N+2n+1`,
/// `2N+2m` (minus `u`) along the cut, with the labelled bumps removed by
/// quadromers.
pub fn build_bumps(spec: &BumpSpec) -> Result<Region> {
    spec.validate()?;
    let (m, n) = (spec.k.len() as u32, spec.l.len() as u32);
    let (a, b) = (2 * spec.n + 2 * n + 1, 2 * spec.n + 2 * m);
    let mut hex = centred_hexagon(a, b);
    hex.remove_cells([monomer()].iter());
    let cell = |x2: i32, r: i32| TriCell::at(x2, r);
    match spec.side {
        Side::West => {
            let mut region = Region::new(hex.cells().iter().copied().filter(is_west));
            half_weights(&mut region, axis_positions(1..a as i32 - 1))?;
            let mut removed = Vec::new();
            for &k in &spec.k {
                let k = k as i32;
                removed.extend([cell(-2, -2 * k - 1), cell(-1, -2 * k - 1), cell(-1, -2 * k - 2)]);
            }
            for &l in &spec.l {
                let l = l as i32;
                removed.extend([cell(-1, 2 * l + 1), cell(0, 2 * l + 1), cell(0, 2 * l + 2)]);
            }
            region.remove_cells(removed.iter());
            Ok(region)
        }
        Side::East => {
            let mut region = Region::new(hex.cells().iter().copied().filter(|c| !is_west(c)));
            half_weights(&mut region, axis_positions(-(b as i32) + 1..-2))?;
            let (mut region, _) = region.strip_forced(true).ok_or_else(|| {
                Error::InvalidConfig("bump region has no tiling".into())
            })?;
            let mut removed = Vec::new();
            for &k in &spec.k {
                let k = k as i32;
                removed.extend([cell(0, -2 * k - 2), cell(1, -2 * k - 2), cell(0, -2 * k - 3)]);
            }
            for &l in &spec.l {
                let l = l as i32;
                removed.extend([cell(1, 2 * l), cell(2, 2 * l), cell(1, 2 * l + 1)]);
            }
            region.remove_cells(removed.iter());
            Ok(region)
        }
    }
}

/// Groups the cells of `cells`' complement inside a padded bounding box into
/// vertex-connected components; returns the bounded ones (holes).
pub fn bounded_holes(region: &Region) -> Vec<BTreeSet<TriCell>> {
    if region.is_empty() {
        return Vec::new();
    }
    let rows = region.cells.iter().map(|c| c.row);
    let (rmin, rmax) = (rows.clone().min().unwrap() - 1, rows.max().unwrap() + 1);
    let xs = region.cells.iter().map(|c| c.x2());
    let (xmin, xmax) = (xs.clone().min().unwrap() - 2, xs.max().unwrap() + 2);
    let in_box = |c: &TriCell| (rmin..=rmax).contains(&c.row) && (xmin..=xmax).contains(&c.x2());
    let mut by_vertex: HashMap<(i32, i32), Vec<TriCell>> = HashMap::new();
    let mut free = Vec::new();
    for r in rmin..=rmax {
        for x in xmin..=xmax {
            let c = TriCell::at(x, r);
            if !region.contains(&c) {
                free.push(c);
                for v in c.vertices() {
                    by_vertex.entry(v).or_default().push(c);
                }
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut holes = Vec::new();
    for &start in &free {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = BTreeSet::from([start]);
        let mut stack = vec![start];
        let mut bounded = true;
        while let Some(c) = stack.pop() {
            if c.row == rmin || c.row == rmax || c.x2() <= xmin + 1 || c.x2() >= xmax - 1 {
                bounded = false;
            }
            for v in c.vertices() {
                for &d in &by_vertex[&v] {
                    if in_box(&d) && seen.insert(d) {
                        comp.insert(d);
                        stack.push(d);
                    }
                }
            }
        }
        if bounded {
            holes.push(comp);
        }
    }
    holes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_coordinates_round_trip() {
        for x in -7..7 {
            for r in -5..5 {
                let c = TriCell::at(x, r);
                assert_eq!(c.x2(), x);
                assert_eq!(c.up, (x + r).rem_euclid(2) == 0);
            }
        }
        assert_eq!(monomer(), TriCell::new(0, 0, true));
    }

    #[test]
    fn adjacency_is_symmetric_and_alternating() {
        for x in -5..5 {
            for r in -5..5 {
                let c = TriCell::at(x, r);
                for d in c.neighbors() {
                    assert_ne!(c.up, d.up);
                    assert!(d.neighbors().contains(&c));
                }
            }
        }
    }

    #[test]
    fn rotation_has_order_three_and_preserves_adjacency() {
        for x in -6..6 {
            for r in -6..6 {
                let c = TriCell::at(x, r);
                assert_eq!(c.rotate().rotate().rotate(), c);
                assert_eq!(c.rotate().up, c.up);
                for d in c.neighbors() {
                    assert!(c.rotate().is_adjacent(&d.rotate()));
                }
            }
        }
    }

    #[test]
    fn small_hexagons_have_expected_cell_counts() {
        // a (p,q,r) hexagon has 2(pq+qr+rp) cells
        assert_eq!(semiregular_hexagon(1, 1, 1).len(), 6);
        assert_eq!(semiregular_hexagon(2, 3, 4).len(), 2 * (6 + 12 + 8));
        assert_eq!(semiregular_hexagon(2, 3, 4).charge(), 0);
    }

    #[test]
    fn quadromer_charges() {
        assert_eq!(charge(down_quad(2, 1).iter()), -2);
        assert_eq!(charge(up_quad(2, 1).iter()), 2);
        assert_eq!(charge([monomer()].iter()), 1);
        assert_eq!(Region::default().charge(), 0);
    }

    #[test]
    fn hexagon_with_holes_is_balanced() {
        let holes = HoleConfig::new(vec![(5, 0), (2, 1)], vec![(4, 1), (2, 2), (3, 4)]);
        let h = build_h(2, &holes).unwrap();
        assert_eq!(h.charge(), 0);
        assert_eq!(h.mirror(), h);
    }

    #[test]
    fn weighted_position_counts() {
        let holes = HoleConfig::new(vec![(1, 0), (3, 1)], vec![(1, 0), (3, 0), (5, 1)]);
        assert_eq!(build_w(2, &holes).unwrap().weighted_count(), 2 + 6);
        assert_eq!(build_e(2, &holes).unwrap().weighted_count(), 2 + 4 - 1);
    }

    #[test]
    fn hole_validation() {
        let bad = HoleConfig::new(vec![(0, 1)], vec![]);
        assert_eq!(build_h(3, &bad), Err(Error::RadiusZero));
        let overlap = HoleConfig::new(vec![(1, 0), (2, 0)], vec![]);
        assert_eq!(build_h(3, &overlap), Err(Error::HoleOverlap));
        let dup = HoleConfig::new(vec![(3, 0), (3, 0)], vec![]);
        assert_eq!(build_h(3, &dup), Err(Error::DuplicateHole(3, 0)));
        let far = HoleConfig::new(vec![(9, 0)], vec![]);
        assert_eq!(build_h(1, &far), Err(Error::HoleOutOfBounds));
    }

    #[test]
    fn distances_match_catalog_items() {
        let holes = HoleConfig::new(vec![(3, 1), (5, 2)], vec![(2, 1), (4, 3)]);
        let d = |a, b| hole_distance(a, b, &holes).unwrap();
        assert!((d(HoleId::Down(0), HoleId::DownMirror(0)) - 6.0).abs() < 1e-12);
        assert!((d(HoleId::Up(1), HoleId::Monomer) - (16.0f64 + 27.0).sqrt()).abs() < 1e-12);
        assert!((d(HoleId::Down(1), HoleId::Monomer) - (25.0f64 + 12.0).sqrt()).abs() < 1e-12);
        assert_eq!(hole_distance(HoleId::Monomer, HoleId::Monomer, &holes), Err(Error::SameHole));
    }

    #[test]
    fn text_round_trip() {
        let w = build_w(1, &HoleConfig::reference(1, 0)).unwrap();
        assert_eq!(Region::from_text(&w.to_text()).unwrap(), w);
    }

    #[test]
    fn bump_label_validation() {
        let spec = BumpSpec { n: 2, k: vec![1, 1], l: vec![], side: Side::West };
        assert_eq!(build_bumps(&spec), Err(Error::DuplicateLabel(1)));
        let spec = BumpSpec { n: 2, k: vec![3], l: vec![], side: Side::West };
        assert_eq!(build_bumps(&spec), Err(Error::LabelOutOfRange(3)));
        let spec = BumpSpec { n: 2, k: vec![2], l: vec![], side: Side::East };
        assert_eq!(build_bumps(&spec), Err(Error::LabelOutOfRange(2)));
        let spec = BumpSpec { n: 2, k: vec![2, 1], l: vec![], side: Side::East };
        assert_eq!(build_bumps(&spec), Err(Error::NotStrictlyIncreasing));
    }

    #[test]
    fn bump_regions_are_balanced() {
        for side in [Side::West, Side::East] {
            let spec = BumpSpec { n: 2, k: vec![1, 2, 3], l: vec![0, 1, 3, 4], side };
            let r = build_bumps(&spec).unwrap();
            assert_eq!(r.charge(), 0, "{side:?}");
        }
    }
}
