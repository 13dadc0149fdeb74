//! Cutting-and-stacking towers with exact rational endpoints.
//!
//! Every level of the stage-`n` tower has width `x / Z(v_n)` and the support
//! is always the initial segment `[0, h_n · width)`, so a level is identified
//! by the index of the unit cell it occupies. Passing to stage `n + 1` cuts
//! each cell into `q_n` subcells (column `i` of cell `c` is `q_n c + i`) and
//! allocates the spacers left to right after the current support.

mod intervals;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

pub use intervals::IntervalSet;

use crate::error::{Error, Result};
use crate::rational::{floor_div, from_big, int, ratio, Rational};
use crate::words::{Bits, BitsRef, Tail, WordPresentation};
use crate::DEFAULT_BUDGET;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    stage: usize,
    base: Rational,
    width: Rational,
    /// Cell occupied by each level.
    cells: Vec<u64>,
    /// Level occupying each cell.
    level_of: Vec<u64>,
    labels: Bits,
}

fn overflows(h: u64, zeros: u64, x: &Rational) -> bool {
    int(h) * x > int(zeros)
}

/// `a = 1 / (1 + rho_V)`.
pub fn default_base(p: &WordPresentation) -> Result<Rational> {
    let rho = p.rho_limit().ok_or(Error::DivergentWord)?;
    Ok(Rational::one() / (Rational::one() + rho))
}

/// Stage-`n` tower of `p` started from `F_0 = [0, x)`.
pub fn build_tower(p: &WordPresentation, n: usize, x: Option<Rational>) -> Result<Tower> {
    let x = match x {
        Some(x) => x,
        None => default_base(p)?,
    };
    if x <= Rational::zero() || x > Rational::one() {
        return Err(Error::BadBaseLength);
    }
    let labels = p.expand(n, DEFAULT_BUDGET)?.bits().to_bitvec();

    // Stage 0: zeros of the stem fill [0, x), ones are allocated after it.
    let stem = p.stem().bits();
    let stem_zeros = p.stem().zeros();
    let (mut next_zero, mut next_one) = (0u64, stem_zeros);
    let mut cells: Vec<u64> = stem
        .iter()
        .map(|b| {
            let slot = if *b { &mut next_one } else { &mut next_zero };
            *slot += 1;
            *slot - 1
        })
        .collect();
    let mut zeros = stem_zeros;
    if overflows(cells.len() as u64, zeros, &x) {
        return Err(Error::SpacerOverflow { stage: 0 });
    }

    for m in 0..n {
        let stage = p.stage(m).ok_or(Error::StageUnavailable(m))?;
        let q = stage.cut as u64;
        let h = cells.len() as u64;
        let mut next = Vec::with_capacity((q * h + stage.spacer_sum()) as usize);
        let mut spacer = q * h;
        for i in 0..q {
            next.extend(cells.iter().map(|c| q * c + i));
            if let Some(&a) = stage.spacers.get(i as usize) {
                next.extend(spacer..spacer + a);
                spacer += a;
            }
        }
        cells = next;
        zeros *= q;
        if overflows(cells.len() as u64, zeros, &x) {
            return Err(Error::SpacerOverflow { stage: m + 1 });
        }
    }

    let mut level_of = vec![0u64; cells.len()];
    for (level, &c) in cells.iter().enumerate() {
        level_of[c as usize] = level as u64;
    }
    Ok(Tower { stage: n, width: &x / int(zeros), base: x, cells, level_of, labels })
}

/// One row of the exported level table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRow {
    pub level: usize,
    pub left: Rational,
    pub right: Rational,
    pub label: u8,
    /// Translation applied by `T` on this level; `None` on the top level.
    pub image_offset: Option<Rational>,
}

impl Tower {
    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn width(&self) -> &Rational {
        &self.width
    }

    pub fn height(&self) -> usize {
        self.cells.len()
    }

    pub fn labels(&self) -> &BitsRef {
        &self.labels
    }

    pub fn level(&self, k: usize) -> (Rational, Rational) {
        let left = int(self.cells[k]) * &self.width;
        let right = &left + &self.width;
        (left, right)
    }

    pub fn levels(&self) -> Vec<(Rational, Rational)> {
        (0..self.height()).map(|k| self.level(k)).collect()
    }

    /// `[0, h_n · width)`.
    pub fn support(&self) -> IntervalSet {
        IntervalSet::interval(Rational::zero(), int(self.height() as u64) * &self.width)
    }

    pub fn unallocated(&self) -> IntervalSet {
        IntervalSet::interval(Rational::zero(), Rational::one()).difference(&self.support())
    }

    pub fn offset(&self, k: usize) -> Option<Rational> {
        let next = *self.cells.get(k + 1)?;
        Some((int(next) - int(self.cells[k])) * &self.width)
    }

    /// Level containing `point`, if any.
    pub fn level_at(&self, point: &Rational) -> Option<usize> {
        if *point < Rational::zero() {
            return None;
        }
        let q = point / &self.width;
        let cell = floor_div(&q.numer().to_biguint()?, &q.denom().to_biguint()?).to_usize()?;
        self.level_of.get(cell).map(|&l| l as usize)
    }

    /// Domain of `T` at this stage: every level but the top.
    pub fn domain(&self) -> IntervalSet {
        self.support().difference(&self.top())
    }

    fn top(&self) -> IntervalSet {
        let (l, r) = self.level(self.height() - 1);
        IntervalSet::interval(l, r)
    }

    /// `T(A ∩ domain)`.
    pub fn image(&self, a: &IntervalSet) -> IntervalSet {
        let mut parts = Vec::new();
        for (l, r) in a.intersection(&self.domain()).parts() {
            let first = self.level_at(l).expect("inside support");
            let cell0 = self.cells[first];
            let mut cell = cell0;
            loop {
                let cl = int(cell) * &self.width;
                if cl >= *r {
                    break;
                }
                let cr = &cl + &self.width;
                let level = self.level_of[cell as usize] as usize;
                if let Some(off) = self.offset(level) {
                    let lo = if l > &cl { l.clone() } else { cl };
                    let hi = if r < &cr { r.clone() } else { cr };
                    parts.push((lo + &off, hi + &off));
                }
                cell += 1;
            }
        }
        IntervalSet::from_intervals(parts)
    }

    pub fn rows(&self) -> Vec<LevelRow> {
        (0..self.height())
            .map(|k| {
                let (left, right) = self.level(k);
                LevelRow { level: k, left, right, label: self.labels[k] as u8, image_offset: self.offset(k) }
            })
            .collect()
    }

    /// Whitespace-separated table `level_index left right label image_offset`.
    pub fn export_table(&self) -> String {
        let mut out = String::from("level_index left right label image_offset\n");
        for row in self.rows() {
            let off = row.image_offset.map_or_else(|| "-".to_string(), |o| o.to_string());
            writeln!(out, "{} {} {} {} {}", row.level, row.left, row.right, row.label, off).expect("write to String");
        }
        out
    }
}

/// `T(point)`, undefined on the top level and outside the support.
pub fn tower_map(t: &Tower, point: &Rational) -> Option<Rational> {
    let k = t.level_at(point)?;
    t.offset(k).map(|off| point + off)
}

/// Labels of the first `steps` levels visited by the orbit of `point`.
pub fn code_orbit(t: &Tower, point: &Rational, steps: usize) -> Result<String> {
    let mut x = Some(point.clone());
    let mut out = String::with_capacity(steps);
    for i in 0..steps {
        let Some(p) = x else {
            return Err(Error::OrbitEscaped(i));
        };
        let k = t.level_at(&p).ok_or(Error::OrbitEscaped(i))?;
        out.push(if t.labels[k] { '1' } else { '0' });
        x = tower_map(t, &p);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    pub stage: usize,
    pub indices: BTreeSet<usize>,
    pub intervals: IntervalSet,
}

impl LevelSet {
    pub fn measure(&self) -> Rational {
        self.intervals.measure()
    }
}

pub fn tower_set(t: &Tower, indices: &BTreeSet<usize>) -> Result<LevelSet> {
    if let Some(&bad) = indices.iter().find(|&&k| k >= t.height()) {
        return Err(Error::IndexOutOfRange(bad));
    }
    let intervals = IntervalSet::from_intervals(indices.iter().map(|&k| t.level(k)).collect());
    Ok(LevelSet { stage: t.stage, indices: indices.clone(), intervals })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakDistance {
    pub lower: Rational,
    pub upper: Rational,
}

/// `lower = λ(T_A(A ∩ dom_A) Δ T_B(A ∩ dom_B))`; `upper` adds the part of `A`
/// where either map is undefined.
pub fn weak_distance(ta: &Tower, tb: &Tower, a: &IntervalSet) -> WeakDistance {
    let lower = ta.image(a).symmetric_difference(&tb.image(a)).measure();
    let undefined = a.difference(&ta.domain().intersection(&tb.domain())).measure();
    WeakDistance { upper: &lower + undefined, lower }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummabilityReport {
    pub terms: Vec<Rational>,
    pub partial_sums: Vec<Rational>,
    pub converges: Option<bool>,
    /// Upper bound on the full series.
    pub bound: Option<Rational>,
}

/// Partial sums of `Σ (h_{n+1} - q_n h_n) / h_{n+1}` with a geometric bound
/// on the tail for periodic presentations.
pub fn summability_report(p: &WordPresentation) -> SummabilityReport {
    let count = match p.tail() {
        Tail::Finite => p.stages().len(),
        Tail::Periodic(k) => p.stages().len().max(8) + k,
    };
    let mut h = BigUint::from(p.stem().len());
    let mut heights = vec![h.clone()];
    let mut terms = Vec::with_capacity(count);
    for n in 0..count {
        let stage = p.stage(n).expect("within range");
        let next = &h * BigUint::from(stage.cut) + BigUint::from(stage.spacer_sum());
        terms.push(ratio(stage.spacer_sum(), 1) / from_big(&next));
        h = next;
        heights.push(h.clone());
    }
    let partial_sums: Vec<Rational> = terms
        .iter()
        .scan(Rational::zero(), |acc, t| {
            *acc += t;
            Some(acc.clone())
        })
        .collect();
    let Tail::Periodic(k) = p.tail() else {
        return SummabilityReport { terms, partial_sums, converges: None, bound: None };
    };
    // From t on, h_{i+1} >= q_i h_i and every block multiplies h by at least Q.
    let t = p.tail_start().expect("periodic");
    let mut block = Rational::zero();
    let mut q_block = BigUint::one();
    for (i, h) in heights.iter().enumerate().skip(t).take(k) {
        let stage = p.stage(i).expect("periodic");
        q_block *= BigUint::from(stage.cut);
        block += ratio(stage.spacer_sum(), 1) / from_big(&(h * BigUint::from(stage.cut)));
    }
    let q = from_big(&q_block);
    let head = if t == 0 { Rational::zero() } else { partial_sums[t - 1].clone() };
    let bound = head + block * &q / (q - Rational::one());
    SummabilityReport { terms, partial_sums, converges: Some(true), bound: Some(bound) }
}
