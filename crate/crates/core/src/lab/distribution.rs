use std::f64::consts::{PI, TAU};

use rand::Rng;

use super::geometry::{HalfPlaneConstraint, Vec2, FEASIBILITY_TOL};
use crate::error::{Error, Result};

/// Distribution of the constraint direction `a`.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    /// `a` uniform on the unit circle.
    CircleUniform,
    /// `a` uniform (by area) on the closed unit disk.
    DiskUniform,
    /// Finitely many directions with positive weights summing to one.
    DiscreteAtoms(Vec<(Vec2, f64)>),
}

impl Distribution {
    pub fn validate(&self) -> Result<()> {
        let Distribution::DiscreteAtoms(atoms) = self else {
            return Ok(());
        };
        if atoms.is_empty() {
            return Err(Error::Config(
                "discrete distribution needs at least one atom".into(),
            ));
        }
        let mut total = 0.0;
        for &(a, w) in atoms {
            HalfPlaneConstraint::new(a)?;
            if !(w > 0.0) {
                return Err(Error::Config(format!("atom weight {w} is not positive")));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("atom weights sum to {total}, not 1")));
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Distribution::CircleUniform => "circle",
            Distribution::DiskUniform => "disk",
            Distribution::DiscreteAtoms(_) => "discrete",
        }
    }

    pub fn sample_constraint<R: Rng + ?Sized>(&self, rng: &mut R) -> HalfPlaneConstraint {
        let a = match self {
            Distribution::CircleUniform => {
                let theta = rng.random::<f64>() * TAU;
                Vec2::new(theta.cos(), theta.sin())
            }
            Distribution::DiskUniform => {
                let radius = rng.random::<f64>().sqrt();
                let theta = rng.random::<f64>() * TAU;
                Vec2::new(radius * theta.cos(), radius * theta.sin())
            }
            Distribution::DiscreteAtoms(atoms) => {
                let u = rng.random::<f64>();
                let mut acc = 0.0;
                let mut chosen = atoms[atoms.len() - 1].0;
                for &(a, w) in atoms {
                    acc += w;
                    if u < acc {
                        chosen = a;
                        break;
                    }
                }
                chosen
            }
        };
        HalfPlaneConstraint { a }
    }

    /// Probability that a fresh constraint is violated by `x`, i.e. that
    /// `a^T (x - c)` exceeds one by more than the feasibility tolerance.
    pub fn exact_risk(&self, x: Vec2, c: Vec2) -> f64 {
        let y = x.sub(c);
        match self {
            Distribution::CircleUniform | Distribution::DiskUniform => {
                let len = y.norm();
                if len <= 1.0 {
                    return 0.0;
                }
                let t = 1.0 / len;
                let angle = t.acos();
                let risk = if matches!(self, Distribution::CircleUniform) {
                    angle / PI
                } else {
                    (angle - t * (1.0 - t * t).sqrt()) / PI
                };
                risk.clamp(0.0, 1.0)
            }
            Distribution::DiscreteAtoms(atoms) => atoms
                .iter()
                .filter(|(a, _)| a.dot(y) > 1.0 + FEASIBILITY_TOL)
                .map(|&(_, w)| w)
                .sum::<f64>()
                .min(1.0),
        }
    }
}

/// `sample_constraint` as a free function.
pub fn sample_constraint<R: Rng + ?Sized>(rng: &mut R, dist: &Distribution) -> HalfPlaneConstraint {
    dist.sample_constraint(rng)
}

/// `Distribution::exact_risk` as a free function.
pub fn exact_risk(x: Vec2, c: Vec2, dist: &Distribution) -> f64 {
    dist.exact_risk(x, c)
}
