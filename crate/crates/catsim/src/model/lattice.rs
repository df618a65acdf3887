//! Atom arrangements: the reference geometries and their pair statistics.

use crate::error::{Error, Result};

/// Supported atom arrangements. Positions are expressed in units of the
/// nearest-neighbor spacing `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryKind {
    /// Two atoms separated by `d`.
    Pair,
    /// Four atoms on the corners of a unit square.
    Square4,
    /// Eight atoms on the corners of a unit cube.
    Cube8,
    /// All integer-coordinate sites with `|r| ≤ R0` around a site at the origin.
    SphereCut,
}

impl std::fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GeometryKind::Pair => "pair",
            GeometryKind::Square4 => "square4",
            GeometryKind::Cube8 => "cube8",
            GeometryKind::SphereCut => "sphere_cut",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for GeometryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pair" => Ok(GeometryKind::Pair),
            "square4" => Ok(GeometryKind::Square4),
            "cube8" => Ok(GeometryKind::Cube8),
            "sphere_cut" => Ok(GeometryKind::SphereCut),
            other => Err(Error::UnknownGeometry(other.to_string())),
        }
    }
}

/// A finite set of atom positions in units of the nearest-neighbor spacing,
/// together with that spacing in μm. The minimum pairwise distance is 1 (= d)
/// by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    kind: GeometryKind,
    spacing_um: f64,
    positions: Vec<[f64; 3]>,
}

impl Lattice {
    /// Builds one of the reference geometries. `r0` (in units of d) is required
    /// for — and only used by — `sphere_cut`.
    pub fn build(kind: GeometryKind, spacing_um: f64, r0: Option<f64>) -> Result<Self> {
        if !(spacing_um > 0.0) {
            return Err(Error::InvalidInput(format!(
                "lattice spacing must be positive, got {spacing_um} um"
            )));
        }
        let positions: Vec<[f64; 3]> = match kind {
            GeometryKind::Pair => vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
            GeometryKind::Square4 => vec![
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [1.0, 1.0, 0.0],
            ],
            GeometryKind::Cube8 => {
                let mut v = Vec::with_capacity(8);
                for ix in 0..2 {
                    for iy in 0..2 {
                        for iz in 0..2 {
                            v.push([ix as f64, iy as f64, iz as f64]);
                        }
                    }
                }
                v
            }
            GeometryKind::SphereCut => {
                let r0 = match r0 {
                    Some(r) if r > 0.0 => r,
                    _ => return Err(Error::MissingCutoff),
                };
                let reach = r0.floor() as i64;
                let r0_sq = r0 * r0;
                let mut sites = Vec::new();
                for x in -reach..=reach {
                    for y in -reach..=reach {
                        for z in -reach..=reach {
                            let norm_sq = (x * x + y * y + z * z) as f64;
                            // Inclusive cutoff; nudge for exact integer radii.
                            if norm_sq <= r0_sq + 1e-9 {
                                sites.push((norm_sq as i64, x, y, z));
                            }
                        }
                    }
                }
                sites.sort_unstable();
                sites
                    .into_iter()
                    .map(|(_, x, y, z)| [x as f64, y as f64, z as f64])
                    .collect()
            }
        };
        let lattice = Lattice {
            kind,
            spacing_um,
            positions,
        };
        lattice.check_spacing()?;
        Ok(lattice)
    }

    /// Keeps the first `n` sites of the deterministic site ordering. Useful for
    /// atom counts the reference geometries do not provide directly (e.g. N=3).
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.positions.len() {
            return Err(Error::InvalidInput(format!(
                "cannot truncate a {}-site lattice to {n} sites",
                self.positions.len()
            )));
        }
        Ok(Lattice {
            kind: self.kind,
            spacing_um: self.spacing_um,
            positions: self.positions[..n].to_vec(),
        })
    }

    /// Geometry label this lattice was built from.
    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    /// Nearest-neighbor spacing in μm.
    pub fn spacing_um(&self) -> f64 {
        self.spacing_um
    }

    /// Number of atoms.
    pub fn atom_count(&self) -> usize {
        self.positions.len()
    }

    /// Atom positions in units of the spacing.
    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    /// All unordered pairs `(i, j, R_ij/d)` with `i < j`.
    pub fn pairs(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.positions.len() * (self.positions.len() - 1) / 2);
        for i in 0..self.positions.len() {
            for j in (i + 1)..self.positions.len() {
                let a = self.positions[i];
                let b = self.positions[j];
                let r = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2))
                    .sqrt();
                out.push((i, j, r));
            }
        }
        out
    }

    /// Mean of `(R_ij/d)^exponent` over all unordered pairs.
    pub fn pair_average_power(&self, exponent: i32) -> Result<f64> {
        let pairs = self.pairs();
        if pairs.is_empty() {
            return Err(Error::TooFewAtoms {
                needed: 2,
                found: self.positions.len(),
            });
        }
        let sum: f64 = pairs.iter().map(|&(_, _, r)| r.powi(exponent)).sum();
        Ok(sum / pairs.len() as f64)
    }

    fn check_spacing(&self) -> Result<()> {
        let pairs = self.pairs();
        if pairs.is_empty() {
            return Ok(());
        }
        let min = pairs.iter().map(|&(_, _, r)| r).fold(f64::INFINITY, f64::min);
        if (min - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "minimum pair distance is {min}, expected the nearest-neighbor spacing 1"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_has_one_unit_pair() {
        let lat = Lattice::build(GeometryKind::Pair, 3.0, None).unwrap();
        assert_eq!(lat.atom_count(), 2);
        let pairs = lat.pairs();
        assert_eq!(pairs.len(), 1);
        assert!((pairs[0].2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cube_pair_distance_multiset() {
        let lat = Lattice::build(GeometryKind::Cube8, 3.0, None).unwrap();
        assert_eq!(lat.atom_count(), 8);
        let pairs = lat.pairs();
        assert_eq!(pairs.len(), 28);
        let mut ones = 0;
        let mut sqrt2 = 0;
        let mut sqrt3 = 0;
        for &(_, _, r) in &pairs {
            if (r - 1.0).abs() < 1e-12 {
                ones += 1;
            } else if (r - 2f64.sqrt()).abs() < 1e-12 {
                sqrt2 += 1;
            } else if (r - 3f64.sqrt()).abs() < 1e-12 {
                sqrt3 += 1;
            } else {
                panic!("unexpected cube pair distance {r}");
            }
        }
        assert_eq!((ones, sqrt2, sqrt3), (12, 12, 4));
    }

    #[test]
    fn sphere_cut_small_radii() {
        let lat = Lattice::build(GeometryKind::SphereCut, 3.0, Some(1.0)).unwrap();
        assert_eq!(lat.atom_count(), 7); // origin + 6 nearest neighbors
        assert_eq!(lat.positions()[0], [0.0, 0.0, 0.0]);
        let lat = Lattice::build(GeometryKind::SphereCut, 3.0, Some(1.5)).unwrap();
        assert_eq!(lat.atom_count(), 19); // adds the 12 second-shell sites
    }

    #[test]
    fn sphere_cut_requires_radius() {
        assert!(matches!(
            Lattice::build(GeometryKind::SphereCut, 3.0, None),
            Err(Error::MissingCutoff)
        ));
    }

    #[test]
    fn pair_average_powers() {
        let pair = Lattice::build(GeometryKind::Pair, 3.0, None).unwrap();
        assert_eq!(pair.pair_average_power(6).unwrap(), 1.0);

        let square = Lattice::build(GeometryKind::Square4, 3.0, None).unwrap();
        let avg = square.pair_average_power(6).unwrap();
        assert!((avg - 10.0 / 3.0).abs() < 1e-12, "got {avg}");

        let cube = Lattice::build(GeometryKind::Cube8, 3.0, None).unwrap();
        let avg = cube.pair_average_power(6).unwrap();
        assert!((avg - 54.0 / 7.0).abs() < 1e-12, "got {avg}");
    }

    #[test]
    fn pair_average_power_zero_exponent_is_one() {
        for kind in [GeometryKind::Pair, GeometryKind::Square4, GeometryKind::Cube8] {
            let lat = Lattice::build(kind, 2.0, None).unwrap();
            assert_eq!(lat.pair_average_power(0).unwrap(), 1.0);
        }
    }

    #[test]
    fn single_atom_pair_average_errors() {
        let lat = Lattice::build(GeometryKind::Pair, 3.0, None).unwrap();
        let single = lat.truncate(1).unwrap();
        assert!(matches!(
            single.pair_average_power(6),
            Err(Error::TooFewAtoms { .. })
        ));
    }

    #[test]
    fn truncate_keeps_prefix() {
        let square = Lattice::build(GeometryKind::Square4, 3.0, None).unwrap();
        let three = square.truncate(3).unwrap();
        assert_eq!(three.atom_count(), 3);
        assert_eq!(three.positions(), &square.positions()[..3]);
        assert!(square.truncate(5).is_err());
        assert!(square.truncate(0).is_err());
    }
}
