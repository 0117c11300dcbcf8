use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::FreeComplex;
use crate::error::Result;
use crate::monomial::ExponentVector;

/// Graded and multigraded Betti numbers of a quotient `S/I`, indexed by the
/// homological position in its resolution (so `β_{0,0} = 1`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    graded: BTreeMap<(usize, u32), usize>,
    multigraded: BTreeMap<(usize, ExponentVector), usize>,
}

#[derive(Serialize, Deserialize)]
struct GradedEntry {
    position: usize,
    degree: u32,
    rank: usize,
}

#[derive(Serialize, Deserialize)]
struct MultigradedEntry {
    position: usize,
    shift: ExponentVector,
    rank: usize,
}

#[derive(Serialize, Deserialize)]
struct BettiJson {
    graded: Vec<GradedEntry>,
    multigraded: Vec<MultigradedEntry>,
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BettiJson {
            graded: self
                .graded
                .iter()
                .map(|(&(position, degree), &rank)| GradedEntry {
                    position,
                    degree,
                    rank,
                })
                .collect(),
            multigraded: self
                .multigraded
                .iter()
                .map(|((position, shift), &rank)| MultigradedEntry {
                    position: *position,
                    shift: shift.clone(),
                    rank,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BettiJson::deserialize(d)?;
        Ok(BettiTable {
            graded: raw
                .graded
                .into_iter()
                .map(|e| ((e.position, e.degree), e.rank))
                .collect(),
            multigraded: raw
                .multigraded
                .into_iter()
                .map(|e| ((e.position, e.shift), e.rank))
                .collect(),
        })
    }
}

impl BettiTable {
    /// Reads the table off a minimal complex.
    pub fn from_complex(complex: &FreeComplex) -> Result<Self> {
        complex.require_minimal()?;
        let mut table = BettiTable::default();
        for (k, shifts) in complex.all_shifts().iter().enumerate() {
            for s in shifts {
                *table.graded.entry((k, s.total_degree())).or_default() += 1;
                *table.multigraded.entry((k, s.clone())).or_default() += 1;
            }
        }
        Ok(table)
    }

    /// Builds the table from multigraded ranks; zero ranks are dropped.
    pub fn from_multigraded(ranks: BTreeMap<(usize, ExponentVector), usize>) -> Self {
        let mut table = BettiTable::default();
        for ((k, b), n) in ranks {
            if n > 0 {
                *table.graded.entry((k, b.total_degree())).or_default() += n;
                table.multigraded.insert((k, b), n);
            }
        }
        table
    }

    pub fn graded(&self) -> &BTreeMap<(usize, u32), usize> {
        &self.graded
    }

    pub fn multigraded(&self) -> &BTreeMap<(usize, ExponentVector), usize> {
        &self.multigraded
    }

    pub fn get(&self, position: usize, degree: u32) -> usize {
        self.graded.get(&(position, degree)).copied().unwrap_or(0)
    }

    /// Total Betti number at a position.
    pub fn total(&self, position: usize) -> usize {
        self.graded
            .iter()
            .filter(|((k, _), _)| *k == position)
            .map(|(_, &n)| n)
            .sum()
    }

    pub fn projective_dimension(&self) -> usize {
        self.graded.keys().map(|&(k, _)| k).max().unwrap_or(0)
    }

    /// Largest degree appearing at `position`.
    pub fn top_degree(&self, position: usize) -> Option<u32> {
        self.graded
            .keys()
            .filter(|(k, _)| *k == position)
            .map(|&(_, j)| j)
            .max()
    }

    /// `t_k(I) = max{j : β_{k,j}(I) != 0}` for the ideal, i.e. position `k + 1`.
    pub fn ideal_top_degree(&self, k: usize) -> Option<u32> {
        self.top_degree(k + 1)
    }

    /// `max_k (t_k - k)`, over the ideal (`of_ideal`) or the quotient.
    /// `None` for the table of the zero ideal.
    pub fn regularity(&self, of_ideal: bool) -> Option<i64> {
        let shift = usize::from(of_ideal);
        self.graded
            .keys()
            .filter(|(k, _)| *k >= shift)
            .map(|&(k, j)| j as i64 - (k - shift) as i64)
            .max()
    }

    /// True when the ideal has a `d`-linear resolution: all `β_{k,j}(I)` vanish
    /// for `j != d + k`.
    pub fn is_linear_resolution(&self, d: u32) -> bool {
        let mut any = false;
        for &(k, j) in self.graded.keys() {
            if k == 0 {
                continue;
            }
            any = true;
            if j as i64 != d as i64 + (k as i64 - 1) {
                return false;
            }
        }
        any
    }

    /// Linear in the degree of its first generators, if any.
    pub fn is_linear(&self) -> bool {
        match self.graded.keys().find(|(k, _)| *k == 1) {
            Some(&(_, d)) => self.is_linear_resolution(d),
            None => false,
        }
    }

    /// Conventional text layout: columns are positions, row `r` holds `β_{k, k + r}`.
    pub fn format_triangle(&self) -> String {
        let pd = self.projective_dimension();
        let reg = self.regularity(false).unwrap_or(0).max(0) as u32;
        let min_row = self
            .graded
            .keys()
            .map(|&(k, j)| j as i64 - k as i64)
            .min()
            .unwrap_or(0)
            .min(0);
        let cell = |n: usize| if n == 0 { ".".to_string() } else { n.to_string() };
        let mut grid: Vec<Vec<String>> = Vec::new();
        grid.push(
            std::iter::once(String::new())
                .chain((0..=pd).map(|k| k.to_string()))
                .collect(),
        );
        grid.push(
            std::iter::once("total:".to_string())
                .chain((0..=pd).map(|k| self.total(k).to_string()))
                .collect(),
        );
        for row in min_row..=reg as i64 {
            let mut line = vec![format!("{row}:")];
            for k in 0..=pd {
                let j = row + k as i64;
                line.push(if j < 0 { ".".into() } else { cell(self.get(k, j as u32)) });
            }
            grid.push(line);
        }
        let widths: Vec<usize> = (0..=pd + 1)
            .map(|c| grid.iter().map(|l| l[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in grid {
            let mut s = String::new();
            for (c, item) in line.iter().enumerate() {
                if c > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{:>w$}", item, w = widths[c]);
            }
            out.push_str(s.trim_end());
            out.push('\n');
        }
        out
    }
}
