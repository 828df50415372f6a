use std::fmt;

use super::Color;
use crate::error::{Error, Result};

/// Per-color total weights, sorted by color id. The type-2 answer.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Histogram {
    entries: Vec<(Color, u64)>,
}

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Accepts entries already sorted by strictly increasing color with
    /// positive weights.
    pub fn from_sorted(entries: Vec<(Color, u64)>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) || entries.iter().any(|e| e.1 == 0) {
            return Err(Error::UnsortedPart);
        }
        Ok(Histogram { entries })
    }

    /// Sums weights of arbitrary `(color, weight)` items.
    pub fn from_items<I: IntoIterator<Item = (Color, u64)>>(items: I) -> Self {
        let mut v: Vec<(Color, u64)> = items.into_iter().collect();
        v.sort_unstable_by_key(|e| e.0);
        let mut entries: Vec<(Color, u64)> = Vec::with_capacity(v.len());
        for (c, w) in v {
            match entries.last_mut() {
                Some(last) if last.0 == c => last.1 += w,
                _ => entries.push((c, w)),
            }
        }
        Histogram { entries }
    }

    pub fn entries(&self) -> &[(Color, u64)] {
        &self.entries
    }

    pub fn colors(&self) -> Vec<Color> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Weight of `c`, 0 if absent.
    pub fn get(&self, c: Color) -> u64 {
        self.entries
            .binary_search_by_key(&c, |e| e.0)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// Appends a histogram whose colors all exceed this one's.
    pub(crate) fn append_disjoint(&mut self, other: Histogram) {
        debug_assert!(match (self.entries.last(), other.entries.first()) {
            (Some(a), Some(b)) => a.0 < b.0,
            _ => true,
        });
        self.entries.extend(other.entries);
    }
}

/// Merges sorted histograms, summing weights of shared colors.
pub fn merge_histograms(parts: &[&Histogram]) -> Result<Histogram> {
    for p in parts {
        if p.entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::UnsortedPart);
        }
    }
    let mut cursors = vec![0usize; parts.len()];
    let mut out = Vec::new();
    loop {
        let next = parts
            .iter()
            .zip(&cursors)
            .filter_map(|(p, &i)| p.entries.get(i).map(|e| e.0))
            .min();
        let Some(c) = next else { break };
        let mut w = 0;
        for (p, i) in parts.iter().zip(cursors.iter_mut()) {
            if let Some(&(pc, pw)) = p.entries.get(*i) {
                if pc == c {
                    w += pw;
                    *i += 1;
                }
            }
        }
        out.push((c, w));
    }
    Ok(Histogram { entries: out })
}

impl fmt::Display for Histogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, w)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}:{w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(items: &[(u32, u64)]) -> Histogram {
        Histogram::from_sorted(items.iter().map(|&(c, w)| (Color(c), w)).collect()).unwrap()
    }

    #[test]
    fn merge_same_color() {
        let (a, b, c) = (h(&[(0, 1)]), h(&[(0, 2)]), h(&[(0, 3)]));
        assert_eq!(merge_histograms(&[&a, &b, &c]).unwrap(), h(&[(0, 6)]));
    }

    #[test]
    fn merge_with_empty() {
        let (a, b) = (h(&[]), h(&[(1, 5)]));
        assert_eq!(merge_histograms(&[&a, &b]).unwrap(), h(&[(1, 5)]));
    }

    #[test]
    fn merge_interleaved() {
        let (a, b) = (h(&[(0, 1), (2, 2)]), h(&[(1, 3)]));
        assert_eq!(merge_histograms(&[&a, &b]).unwrap(), h(&[(0, 1), (1, 3), (2, 2)]));
    }

    #[test]
    fn unsorted_part_rejected() {
        let bad = Histogram { entries: vec![(Color(2), 1), (Color(1), 1)] };
        assert_eq!(merge_histograms(&[&bad]), Err(Error::UnsortedPart));
    }

    #[test]
    fn display_format() {
        assert_eq!(h(&[(0, 7), (3, 1)]).to_string(), "0:7 3:1");
    }
}
