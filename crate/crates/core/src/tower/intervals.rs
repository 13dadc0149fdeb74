//! Finite unions of half-open rational intervals `[l, r)`.

use std::fmt;

use num_traits::Zero;

use crate::rational::Rational;

/// Sorted, pairwise disjoint, non-adjacent nonempty intervals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntervalSet {
    parts: Vec<(Rational, Rational)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn interval(l: Rational, r: Rational) -> Self {
        IntervalSet::from_intervals(vec![(l, r)])
    }

    /// Normalizes an arbitrary list; empty intervals are dropped.
    pub fn from_intervals(mut parts: Vec<(Rational, Rational)>) -> Self {
        parts.retain(|(l, r)| l < r);
        parts.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(parts.len());
        for (l, r) in parts {
            match out.last_mut() {
                Some(last) if l <= last.1 => {
                    if r > last.1 {
                        last.1 = r;
                    }
                }
                _ => out.push((l, r)),
            }
        }
        IntervalSet { parts: out }
    }

    pub fn parts(&self) -> &[(Rational, Rational)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.parts.iter().fold(Rational::zero(), |acc, (l, r)| acc + (r - l))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let i = self.parts.partition_point(|(_, r)| r <= x);
        self.parts.get(i).is_some_and(|(l, _)| l <= x)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(self.parts.iter().chain(&other.parts).cloned().collect())
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.parts, &other.parts);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let l = (&a[i].0).max(&b[j].0);
            let r = (&a[i].1).min(&b[j].1);
            if l < r {
                out.push((l.clone(), r.clone()));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { parts: out }
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for (l, r) in &self.parts {
            let mut start = l.clone();
            for (ol, or) in &other.parts {
                if or <= &start || ol >= r {
                    continue;
                }
                if ol > &start {
                    out.push((start.clone(), ol.clone()));
                }
                if or > &start {
                    start = or.clone();
                }
            }
            if &start < r {
                out.push((start, r.clone()));
            }
        }
        IntervalSet::from_intervals(out)
    }

    pub fn symmetric_difference(&self, other: &IntervalSet) -> IntervalSet {
        self.difference(other).union(&other.difference(self))
    }

    pub fn translate(&self, by: &Rational) -> IntervalSet {
        IntervalSet { parts: self.parts.iter().map(|(l, r)| (l + by, r + by)).collect() }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("{}");
        }
        for (i, (l, r)) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" u ")?;
            }
            write!(f, "[{l},{r})")?;
        }
        Ok(())
    }
}
