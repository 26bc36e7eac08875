use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A partition, parts weakly decreasing and positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|p| p[0] < p[1]) || parts.contains(&0) {
            return Err(Error::Parse(format!("{parts:?} is not a partition")));
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Self {
        let width = self.0.first().copied().unwrap_or(0);
        Self((0..width).map(|c| self.0.iter().filter(|&&p| p > c).count()).collect())
    }

    /// `(row, column)` of every cell, row by row.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        self.0.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect()
    }
}

impl fmt::Display for Partition {
    /// Parts concatenated (`"21"`), or comma-separated once a part exceeds 9.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.0.iter().any(|&p| p > 9) { "," } else { "" };
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parts: Option<Vec<usize>> = if s.contains(',') {
            s.split(',').map(|p| p.trim().parse().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        Self::new(parts.ok_or_else(|| Error::Parse(format!("bad partition {s:?}")))?)
    }
}

/// All partitions of `n`, in decreasing lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// A pair of partitions labelling a character of `W(B_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiPartition(pub Partition, pub Partition);

impl BiPartition {
    pub fn size(&self) -> usize {
        self.0.size() + self.1.size()
    }

    /// `(component, row, column)` of every cell.
    pub fn cells(&self) -> Vec<(usize, usize, usize)> {
        let a = self.0.cells().into_iter().map(|(r, c)| (0, r, c));
        let b = self.1.cells().into_iter().map(|(r, c)| (1, r, c));
        a.chain(b).collect()
    }

    fn component(&self, i: usize) -> &Partition {
        if i == 0 {
            &self.0
        } else {
            &self.1
        }
    }
}

impl fmt::Display for BiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0, self.1)
    }
}

impl FromStr for BiPartition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once('.').ok_or_else(|| Error::Parse(format!("bad bipartition {s:?}")))?;
        Ok(Self(a.parse()?, b.parse()?))
    }
}

/// All bipartitions of `n`: by decreasing size of the first component, then
/// each component in decreasing lexicographic order.
pub fn bipartitions(n: usize) -> Vec<BiPartition> {
    let mut out = Vec::new();
    for k in (0..=n).rev() {
        for a in partitions(k) {
            for b in partitions(n - k) {
                out.push(BiPartition(a.clone(), b));
            }
        }
    }
    out
}

/// A standard (bi)tableau, stored as the cell `(component, row, column)` of
/// each letter `1..=n` in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau(pub Vec<(usize, usize, usize)>);

impl Tableau {
    pub fn cell(&self, letter: usize) -> (usize, usize, usize) {
        self.0[letter - 1]
    }

    pub fn content(&self, letter: usize) -> i32 {
        let (_, r, c) = self.cell(letter);
        c as i32 - r as i32
    }

    /// The tableau with letters `a` and `b` exchanged.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut cells = self.0.clone();
        cells.swap(a - 1, b - 1);
        Self(cells)
    }
}

fn fill(shape: &[&Partition], n: usize) -> Vec<Tableau> {
    fn go(
        shape: &[&Partition],
        filled: &mut Vec<Vec<usize>>,
        cur: &mut Vec<(usize, usize, usize)>,
        n: usize,
        out: &mut Vec<Tableau>,
    ) {
        if cur.len() == n {
            out.push(Tableau(cur.clone()));
            return;
        }
        for comp in 0..shape.len() {
            for r in 0..shape[comp].parts().len() {
                let c = filled[comp][r];
                let fits = c < shape[comp].parts()[r] && (r == 0 || filled[comp][r - 1] > c);
                if fits {
                    filled[comp][r] += 1;
                    cur.push((comp, r, c));
                    go(shape, filled, cur, n, out);
                    cur.pop();
                    filled[comp][r] -= 1;
                }
            }
        }
    }
    let mut filled: Vec<Vec<usize>> = shape.iter().map(|p| vec![0; p.parts().len()]).collect();
    let mut out = Vec::new();
    go(shape, &mut filled, &mut Vec::new(), n, &mut out);
    out
}

pub fn standard_tableaux(shape: &Partition) -> Vec<Tableau> {
    fill(&[shape], shape.size())
}

pub fn standard_bitableaux(shape: &BiPartition) -> Vec<Tableau> {
    fill(&[shape.component(0), shape.component(1)], shape.size())
}

/// Number of standard tableaux, by the hook length formula.
pub fn hook_dimension(shape: &Partition) -> u128 {
    let conj = shape.conjugate();
    let mut hooks: u128 = 1;
    for (r, c) in shape.cells() {
        hooks *= (shape.parts()[r] - c + conj.parts()[c] - r - 1) as u128;
    }
    (1..=shape.size() as u128).product::<u128>() / hooks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
        let labels: Vec<String> = partitions(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(labels, vec!["3", "21", "111"]);
    }

    #[test]
    fn bipartition_labels() {
        let labels: Vec<String> = bipartitions(2).iter().map(|p| p.to_string()).collect();
        assert_eq!(labels, vec!["2.", "11.", "1.1", ".2", ".11"]);
        assert_eq!(bipartitions(3).len(), 10);
        assert_eq!("21.1".parse::<BiPartition>().unwrap().size(), 4);
    }

    #[test]
    fn tableaux_match_hook_formula() {
        for n in 1..=6 {
            for p in partitions(n) {
                assert_eq!(standard_tableaux(&p).len() as u128, hook_dimension(&p), "{p}");
            }
        }
    }

    #[test]
    fn bitableaux_counts() {
        let b: BiPartition = "1.1".parse().unwrap();
        assert_eq!(standard_bitableaux(&b).len(), 2);
        let b: BiPartition = "21.1".parse().unwrap();
        // choose the letter in the second component, then fill the first
        assert_eq!(standard_bitableaux(&b).len(), 4 * 2);
    }

    #[test]
    fn parse_and_conjugate() {
        let p: Partition = "221".parse().unwrap();
        assert_eq!(p.conjugate().to_string(), "32");
        assert!("12".parse::<Partition>().is_err());
        assert_eq!("".parse::<Partition>().unwrap(), Partition::default());
    }
}
