//! Dyadic Hausdorff content `inf Σ ℓ(Q)^β` over covers by dyadic cubes of
//! `[0, 1)^d`, computed exactly by dynamic programming over the dyadic tree.
//!
//! Only cubes inside the unit cube are considered. A larger dyadic cube has
//! side at least 2 and costs more than the unit cube itself, so the
//! restriction does not change the infimum.

mod power;

pub use power::{Beta, ContentValue, MAX_BETA_DENOMINATOR};

use std::collections::BTreeSet;

use crate::capacity::{
    check_axiom_within, finite_subadditivity_violation, monotone_violation, strong_subadditivity_violation,
    Axiom, AxiomReport, Capacity, Witness,
};
use crate::domain::{GroundSet, SubsetMask, MAX_GROUND_SET};
use crate::error::{Error, Result};
use crate::number::{Extended, Rational};

/// Cap on `d·L`, so that a cell set is at most `2^24` cells.
pub const MAX_CELL_BITS: u32 = 24;

/// Binary digits kept when an irrational content is rounded down for export.
pub const EXPORT_BITS: u32 = 110;

/// The margin used to check axioms on rounded exports, `10^(−30)`.
pub fn export_margin() -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(10u32).pow(30))
}

/// The grid of `2^(dL)` cells of side `2^(−L)` in `[0, 1)^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DyadicDomain {
    dimension: u32,
    depth: u32,
}

impl DyadicDomain {
    pub fn new(dimension: u32, depth: u32) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Invalid("dimension must be at least 1".into()));
        }
        if dimension.saturating_mul(depth) > MAX_CELL_BITS {
            return Err(Error::SizeGuard(format!("d·L = {} exceeds {MAX_CELL_BITS}", dimension * depth)));
        }
        Ok(DyadicDomain { dimension, depth })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn cell_count(&self) -> usize {
        1 << (self.dimension * self.depth)
    }

    /// Cells per axis.
    pub fn side_cells(&self) -> u64 {
        1 << self.depth
    }

    /// Linear index with the first coordinate least significant.
    pub fn cell_index(&self, coords: &[u64]) -> usize {
        coords.iter().rev().fold(0, |acc, &c| (acc << self.depth) | c as usize)
    }

    pub fn cell_coords(&self, index: usize) -> Vec<u64> {
        let mask = self.side_cells() as usize - 1;
        (0..self.dimension).map(|i| ((index >> (i * self.depth)) & mask) as u64).collect()
    }
}

/// A set of finest-level cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicCellSet {
    domain: DyadicDomain,
    cells: BTreeSet<Vec<u64>>,
}

impl DyadicCellSet {
    pub fn new(domain: DyadicDomain, cells: impl IntoIterator<Item = Vec<u64>>) -> Result<Self> {
        let cells: BTreeSet<Vec<u64>> = cells.into_iter().collect();
        for cell in &cells {
            if cell.len() != domain.dimension as usize || cell.iter().any(|&c| c >= domain.side_cells()) {
                return Err(Error::Invalid(format!("cell {cell:?} outside the {}-dimensional grid of depth {}", domain.dimension, domain.depth)));
            }
        }
        Ok(DyadicCellSet { domain, cells })
    }

    /// Cells whose linear index lies in `mask`.
    pub fn from_mask(domain: DyadicDomain, mask: SubsetMask) -> Result<Self> {
        if domain.cell_count() > MAX_GROUND_SET {
            return Err(Error::SizeGuard(format!("{} cells exceed the ground-set cap {MAX_GROUND_SET}", domain.cell_count())));
        }
        Self::new(domain, mask.iter().filter(|&i| i < domain.cell_count()).map(|i| domain.cell_coords(i)))
    }

    pub fn domain(&self) -> DyadicDomain {
        self.domain
    }

    pub fn cells(&self) -> &BTreeSet<Vec<u64>> {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// The cube `Π [c_i 2^(−level), (c_i + 1) 2^(−level))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicCube {
    pub level: u32,
    pub coords: Vec<u64>,
}

impl DyadicCube {
    /// Whether the finest cell `cell` at `depth` lies in this cube.
    pub fn contains_cell(&self, cell: &[u64], depth: u32) -> bool {
        self.level <= depth && cell.len() == self.coords.len() && cell.iter().zip(&self.coords).all(|(&x, &c)| x >> (depth - self.level) == c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSolution {
    pub beta: Beta,
    /// `Σ ℓ(Q)^β` over `cubes`.
    pub value: ContentValue,
    pub cubes: Vec<DyadicCube>,
    /// `β > d`, outside the usual range.
    pub exceeds_dimension: bool,
}

/// The optimal dyadic cover. Ties between a cube and its children prefer the
/// single cube.
pub fn content(set: &DyadicCellSet, beta: &Rational) -> Result<CoverSolution> {
    let beta = Beta::new(beta)?;
    let cells: Vec<&Vec<u64>> = set.cells.iter().collect();
    let mut cubes = Vec::new();
    let root = DyadicCube { level: 0, coords: vec![0; set.domain.dimension as usize] };
    let value = cover(&set.domain, &beta, root, &cells, &mut cubes);
    cubes.sort();
    Ok(CoverSolution { exceeds_dimension: beta.value() > Rational::from_integer(set.domain.dimension.into()), beta, value, cubes })
}

fn cover(domain: &DyadicDomain, beta: &Beta, cube: DyadicCube, cells: &[&Vec<u64>], out: &mut Vec<DyadicCube>) -> ContentValue {
    if cells.is_empty() {
        return ContentValue::zero(beta);
    }
    let whole = ContentValue::side_power(beta, cube.level);
    if cube.level == domain.depth {
        out.push(cube);
        return whole;
    }
    let shift = domain.depth - cube.level - 1;
    let d = domain.dimension as usize;
    let mut parts: Vec<Vec<&Vec<u64>>> = vec![Vec::new(); 1 << d];
    for &cell in cells {
        let child = (0..d).fold(0, |acc, i| acc | ((((cell[i] >> shift) & 1) as usize) << i));
        parts[child].push(cell);
    }
    let mut below = Vec::new();
    let mut sum = ContentValue::zero(beta);
    for (child, part) in parts.iter().enumerate() {
        let coords = (0..d).map(|i| (cube.coords[i] << 1) | ((child >> i) & 1) as u64).collect();
        let value = cover(domain, beta, DyadicCube { level: cube.level + 1, coords }, part, &mut below);
        sum = &sum + &value;
    }
    if whole <= sum {
        out.push(cube);
        whole
    } else {
        out.extend(below);
        sum
    }
}

/// Checks that `solution` covers `set` with valid cubes and that its value
/// is the sum of the cube costs. Optimality is not checked.
pub fn cover_certificate_check(set: &DyadicCellSet, beta: &Rational, solution: &CoverSolution) -> bool {
    let Ok(b) = Beta::new(beta) else { return false };
    let domain = set.domain;
    let valid = solution.cubes.iter().all(|q| {
        q.level <= domain.depth && q.coords.len() == domain.dimension as usize && q.coords.iter().all(|&c| c < 1 << q.level)
    });
    let covered = set.cells.iter().all(|cell| solution.cubes.iter().any(|q| q.contains_cell(cell, domain.depth)));
    let total = solution.cubes.iter().fold(ContentValue::zero(&b), |acc, q| &acc + &ContentValue::side_power(&b, q.level));
    valid && covered && b == solution.beta && total == solution.value
}

/// The content of every subset of the cells, exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContentTable {
    pub domain: DyadicDomain,
    pub beta: Beta,
    pub values: Vec<ContentValue>,
}

impl ContentTable {
    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.domain.cell_count()).expect("checked at export")
    }

    pub fn value(&self, set: SubsetMask) -> &ContentValue {
        &self.values[set.index()]
    }

    /// Exact check of the inequality axioms (`Monotone`, `FiniteSubadditive`,
    /// `StronglySubadditive`, and `EmptySet`).
    pub fn check_axiom(&self, axiom: Axiom) -> Result<AxiomReport> {
        let leq = |a: &ContentValue, b: &ContentValue| a <= b;
        let pair = match axiom {
            Axiom::EmptySet => {
                let holds = self.values[0].is_zero();
                return Ok(AxiomReport { axiom, holds, witness: None, note: None });
            }
            Axiom::Monotone => monotone_violation(&self.values, leq),
            Axiom::FiniteSubadditive => finite_subadditivity_violation(&self.values, leq),
            Axiom::StronglySubadditive => strong_subadditivity_violation(&self.values, leq),
            other => return Err(Error::Invalid(format!("{other} is not checked on exact content tables"))),
        };
        let witness = pair.map(|(e, f)| Witness {
            sets: vec![e, f],
            values: [e, f].iter().map(|s| Extended::Finite(self.value(*s).lower_bound(EXPORT_BITS))).collect(),
        });
        Ok(AxiomReport { axiom, holds: witness.is_none(), witness, note: None })
    }
}

fn check_exportable(domain: DyadicDomain) -> Result<GroundSet> {
    if domain.cell_count() > MAX_GROUND_SET {
        return Err(Error::SizeGuard(format!(
            "export needs 2^(dL) = {} ≤ {MAX_GROUND_SET} cells",
            domain.cell_count()
        )));
    }
    GroundSet::new(domain.cell_count())
}

pub fn export_table(domain: DyadicDomain, beta: &Rational) -> Result<ContentTable> {
    let ground = check_exportable(domain)?;
    let b = Beta::new(beta)?;
    let compute = |bits: u32| -> Result<ContentValue> {
        Ok(content(&DyadicCellSet::from_mask(domain, SubsetMask::from_bits(bits))?, beta)?.value)
    };
    let range = 0..(1u32 << ground.size());
    #[cfg(feature = "parallel")]
    let values = {
        use rayon::prelude::*;
        range.into_par_iter().map(compute).collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let values = range.map(compute).collect::<Result<Vec<_>>>()?;
    Ok(ContentTable { domain, beta: b, values })
}

/// The content table as a [`Capacity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExportedCapacity {
    pub capacity: Capacity,
    /// Every entry is exact (integer `β`, or rational values throughout).
    /// Otherwise entries are rounded down to a multiple of `2^(−EXPORT_BITS)`.
    pub exact: bool,
}

impl ExportedCapacity {
    /// Exact check when the export is exact; otherwise within [`export_margin`].
    pub fn check_axiom(&self, axiom: Axiom) -> AxiomReport {
        if self.exact {
            crate::capacity::check_axiom(&self.capacity, axiom)
        } else {
            check_axiom_within(&self.capacity, axiom, &export_margin())
        }
    }
}

pub fn export_capacity(domain: DyadicDomain, beta: &Rational) -> Result<ExportedCapacity> {
    let table = export_table(domain, beta)?;
    let exact = table.values.iter().all(|v| v.exact_rational().is_some());
    let entries = table.values.iter().map(|v| Extended::Finite(v.lower_bound(EXPORT_BITS))).collect();
    Ok(ExportedCapacity { capacity: Capacity::new(table.ground(), entries)?, exact })
}

/// `2^(−level·β)` rounded down, for display.
pub fn side_cost_lower_bound(beta: &Rational, level: u32) -> Result<Rational> {
    let b = Beta::new(beta)?;
    Ok(ContentValue::side_power(&b, level).lower_bound(EXPORT_BITS))
}
