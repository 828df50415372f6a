//! Seeded dataset generators.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal, Zipf};

use crate::data::{RawPoint, Seed};
use crate::error::{Error, Result};
use crate::ric::adversarial_points;

/// Upper end of generated coordinates (`1..=COORD_MAX`).
pub const COORD_MAX: i64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Uniform3,
    Uniform2,
    ZipfColors,
    Clustered,
    Remark1,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "uniform3" => Family::Uniform3,
            "uniform2" => Family::Uniform2,
            "zipfColors" => Family::ZipfColors,
            "clustered" => Family::Clustered,
            "remark1" => Family::Remark1,
            _ => return Err(Error::BadSpec(format!("unknown family {s:?}"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Uniform3 => "uniform3",
            Family::Uniform2 => "uniform2",
            Family::ZipfColors => "zipfColors",
            Family::Clustered => "clustered",
            Family::Remark1 => "remark1",
        })
    }
}

/// Generator parameters. `dim` only matters for `ZipfColors` and
/// `Clustered`; `colors` is ignored by `Remark1`, whose color count is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub m: usize,
    pub colors: usize,
    pub weight_max: u64,
    pub seed: Seed,
    pub dim: usize,
}

impl GenSpec {
    pub fn new(family: Family, m: usize, colors: usize, seed: Seed) -> Self {
        let dim = if family == Family::Uniform2 { 2 } else { 3 };
        GenSpec { family, m, colors, weight_max: 1, seed, dim }
    }

    pub fn weights(mut self, weight_max: u64) -> Self {
        self.weight_max = weight_max;
        self
    }

    pub fn dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn effective_dim(&self) -> usize {
        match self.family {
            Family::Uniform3 | Family::Remark1 => 3,
            Family::Uniform2 => 2,
            Family::ZipfColors | Family::Clustered => self.dim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 || self.weight_max < 1 {
            return Err(Error::BadSpec("need m >= 1 and weightMax >= 1".into()));
        }
        if self.family != Family::Remark1 && (self.colors < 1 || self.colors > self.m) {
            return Err(Error::BadSpec(format!("colors must be in 1..={}", self.m)));
        }
        let d = self.effective_dim();
        if d != 2 && d != 3 {
            return Err(Error::UnsupportedDimension(d));
        }
        Ok(())
    }
}

/// Generates the points described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<Vec<RawPoint>> {
    spec.validate()?;
    let mut rng = spec.seed.rng();
    let dim = spec.effective_dim();
    let mut pts = match spec.family {
        Family::Remark1 => adversarial_points(spec.m)?,
        Family::Uniform3 | Family::Uniform2 => {
            let colors = dense_colors(spec.m, spec.colors, &mut rng);
            colors
                .into_iter()
                .map(|c| {
                    let coords: Vec<i64> = (0..dim).map(|_| rng.random_range(1..=COORD_MAX)).collect();
                    RawPoint::new(&coords, c)
                })
                .collect()
        }
        Family::ZipfColors => {
            let zipf = Zipf::new(spec.colors as f64, 1.0).map_err(|e| Error::BadSpec(e.to_string()))?;
            // Every color once, the rest Zipf-distributed.
            let mut colors: Vec<u32> = (0..spec.colors as u32).collect();
            colors.extend((spec.colors..spec.m).map(|_| zipf.sample(&mut rng) as u32 - 1));
            colors.shuffle(&mut rng);
            colors
                .into_iter()
                .map(|c| {
                    let coords: Vec<i64> = (0..dim).map(|_| rng.random_range(1..=COORD_MAX)).collect();
                    RawPoint::new(&coords, c)
                })
                .collect()
        }
        Family::Clustered => {
            // One Gaussian blob per color.
            let centers: Vec<Vec<f64>> = (0..spec.colors)
                .map(|_| (0..dim).map(|_| rng.random_range(1.0..COORD_MAX as f64)).collect())
                .collect();
            let spread = Normal::new(0.0, COORD_MAX as f64 / 64.0).map_err(|e| Error::BadSpec(e.to_string()))?;
            let colors = dense_colors(spec.m, spec.colors, &mut rng);
            colors
                .into_iter()
                .map(|c| {
                    let coords: Vec<i64> = centers[c as usize]
                        .iter()
                        .map(|&x| ((x + spread.sample(&mut rng)).round() as i64).clamp(1, COORD_MAX))
                        .collect();
                    RawPoint::new(&coords, c)
                })
                .collect()
        }
    };
    if spec.weight_max > 1 {
        for p in &mut pts {
            p.weight = rng.random_range(1..=spec.weight_max as i64);
        }
    }
    Ok(pts)
}

/// `m` color ids covering `0..colors`, shuffled.
fn dense_colors(m: usize, colors: usize, rng: &mut impl Rng) -> Vec<u32> {
    let mut v: Vec<u32> = (0..m).map(|i| (i % colors) as u32).collect();
    v.shuffle(rng);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{validate, Dataset};

    #[test]
    fn uniform3_is_dense() {
        let pts = generate(&GenSpec::new(Family::Uniform3, 100, 10, Seed(1))).unwrap();
        assert_eq!(pts.len(), 100);
        let ds = Dataset::reduce_to_rank_space(&pts).unwrap();
        assert_eq!(ds.num_colors(), 10);
        assert_eq!(validate(&ds), Ok(()));
    }

    #[test]
    fn every_family_validates() {
        for fam in [Family::Uniform3, Family::Uniform2, Family::ZipfColors, Family::Clustered, Family::Remark1] {
            let spec = GenSpec::new(fam, 64, 7, Seed(9)).weights(5);
            let ds = Dataset::reduce_to_rank_space(&generate(&spec).unwrap()).unwrap();
            assert_eq!(validate(&ds), Ok(()), "{fam}");
            assert_eq!(ds.dim(), spec.effective_dim());
        }
    }

    #[test]
    fn remark1_color_count() {
        let pts = generate(&GenSpec::new(Family::Remark1, 64, 1, Seed(0))).unwrap();
        let ds = Dataset::reduce_to_rank_space(&pts).unwrap();
        assert_eq!(ds.num_colors(), 33);
    }

    #[test]
    fn deterministic() {
        let s = GenSpec::new(Family::Clustered, 50, 5, Seed(4)).dim(2);
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());
    }

    #[test]
    fn bad_specs() {
        assert!(generate(&GenSpec::new(Family::Uniform3, 10, 11, Seed(0))).is_err());
        assert!(generate(&GenSpec::new(Family::Uniform3, 0, 1, Seed(0))).is_err());
        assert!("nope".parse::<Family>().is_err());
    }
}
