//! Minimum-norm decisions under random half-plane constraints in the plane.
//!
//! A constraint with direction `a` admits `{x : a^T (x - c) <= 1}`. The solver
//! enumerates every point that can be the minimum-norm point of a polygon
//! (origin, projections onto boundary lines, pairwise vertices) and keeps the
//! best feasible one, so its output does not depend on constraint order.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Slack allowed when checking `a^T (x - c) <= 1`.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Determinant (and squared-norm) threshold below which lines are treated as
/// parallel (or absent).
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn sub(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x - other.x, self.y - other.y)
    }

    pub fn scale(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }

    pub fn distance(self, other: Vec2) -> f64 {
        self.sub(other).norm()
    }

    fn lex_cmp(self, other: Vec2) -> Ordering {
        self.x.total_cmp(&other.x).then(self.y.total_cmp(&other.y))
    }
}

/// The constraint `a^T (x - c) <= 1` for a direction with `|a| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlaneConstraint {
    pub a: Vec2,
}

impl HalfPlaneConstraint {
    pub fn new(a: Vec2) -> Result<Self> {
        if !(a.norm() <= 1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "constraint direction ({}, {}) has norm above one",
                a.x, a.y
            )));
        }
        Ok(HalfPlaneConstraint { a })
    }

    /// `a^T (x - c)`; the constraint holds when this is at most one.
    pub fn level(&self, c: Vec2, x: Vec2) -> f64 {
        self.a.dot(x.sub(c))
    }

    pub fn is_satisfied(&self, c: Vec2, x: Vec2) -> bool {
        self.level(c, x) <= 1.0 + FEASIBILITY_TOL
    }

    pub fn is_active(&self, c: Vec2, x: Vec2) -> bool {
        (self.level(c, x) - 1.0).abs() <= FEASIBILITY_TOL
    }

    /// Right-hand side of the boundary line `a^T x = 1 + a^T c`.
    fn offset(&self, c: Vec2) -> f64 {
        1.0 + self.a.dot(c)
    }
}

fn feasible(c: Vec2, constraints: &[HalfPlaneConstraint], x: Vec2) -> bool {
    constraints.iter().all(|h| h.is_satisfied(c, x))
}

/// Strict total order on candidates: squared norm, then `x`, then `y`.
fn better(candidate: Vec2, incumbent: Option<Vec2>) -> bool {
    match incumbent {
        None => true,
        Some(best) => candidate
            .norm_sq()
            .total_cmp(&best.norm_sq())
            .then(candidate.lex_cmp(best))
            .is_lt(),
    }
}

/// Intersection of two boundary lines, with the pair put in a canonical order
/// first so the arithmetic is identical whichever way round they arrive.
fn vertex(c: Vec2, h1: &HalfPlaneConstraint, h2: &HalfPlaneConstraint) -> Option<Vec2> {
    let (h1, h2) = if h1.a.lex_cmp(h2.a).is_le() {
        (h1, h2)
    } else {
        (h2, h1)
    };
    let (a1, a2) = (h1.a, h2.a);
    let det = a1.x * a2.y - a1.y * a2.x;
    if det.abs() <= DEGENERACY_TOL {
        return None;
    }
    let (b1, b2) = (h1.offset(c), h2.offset(c));
    Some(Vec2::new(
        (b1 * a2.y - b2 * a1.y) / det,
        (a1.x * b2 - a2.x * b1) / det,
    ))
}

/// Minimum-norm point of `{x : a_i^T (x - c) <= 1 for all i}`.
///
/// The feasible set always contains the unit ball around `c`, so a minimizer
/// exists; it is unique since the norm is strictly convex. An empty list
/// yields the origin.
pub fn solve_min_norm(c: Vec2, constraints: &[HalfPlaneConstraint]) -> Result<Vec2> {
    if feasible(c, constraints, Vec2::ZERO) {
        return Ok(Vec2::ZERO);
    }
    let mut best: Option<Vec2> = None;
    for h in constraints {
        let a_sq = h.a.norm_sq();
        if a_sq <= DEGENERACY_TOL {
            continue;
        }
        let p = h.a.scale(h.offset(c) / a_sq);
        if better(p, best) && feasible(c, constraints, p) {
            best = Some(p);
        }
    }
    for (i, h1) in constraints.iter().enumerate() {
        for h2 in &constraints[i + 1..] {
            if let Some(v) = vertex(c, h1, h2) {
                if better(v, best) && feasible(c, constraints, v) {
                    best = Some(v);
                }
            }
        }
    }
    best.ok_or_else(|| {
        Error::Solver(format!(
            "no feasible candidate among {} constraints",
            constraints.len()
        ))
    })
}

/// Smallest set of at most two constraint indices whose min-norm solution
/// reproduces `x` to within the feasibility tolerance.
///
/// Tries the empty set, then single active constraints, then active pairs, in
/// lexicographic index order.
pub fn support_set(c: Vec2, constraints: &[HalfPlaneConstraint], x: Vec2) -> Result<Vec<usize>> {
    let reproduces = |subset: &[HalfPlaneConstraint]| -> Result<bool> {
        Ok(solve_min_norm(c, subset)?.distance(x) <= FEASIBILITY_TOL)
    };
    if reproduces(&[])? {
        return Ok(Vec::new());
    }
    let active: Vec<usize> = (0..constraints.len())
        .filter(|&i| constraints[i].is_active(c, x))
        .collect();
    for &i in &active {
        if reproduces(&[constraints[i]])? {
            return Ok(vec![i]);
        }
    }
    for (k, &i) in active.iter().enumerate() {
        for &j in &active[k + 1..] {
            if reproduces(&[constraints[i], constraints[j]])? {
                return Ok(vec![i, j]);
            }
        }
    }
    Err(Error::Solver(format!(
        "no compression set of size <= 2 reproduces ({}, {})",
        x.x, x.y
    )))
}

/// Indices of the `N - r` constraints with smallest `|a|`, ascending.
/// Norm ties keep the smaller index.
pub fn discard_select(constraints: &[HalfPlaneConstraint], r: usize) -> Result<Vec<usize>> {
    let n = constraints.len();
    if r > n {
        return Err(crate::error::domain(format!(
            "cannot discard {r} of {n} constraints"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        constraints[i]
            .a
            .norm()
            .total_cmp(&constraints[j].a.norm())
            .then(i.cmp(&j))
    });
    order.truncate(n - r);
    order.sort_unstable();
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(x: f64, y: f64) -> HalfPlaneConstraint {
        HalfPlaneConstraint::new(Vec2::new(x, y)).unwrap()
    }

    #[test]
    fn origin_when_feasible() {
        assert_eq!(
            solve_min_norm(Vec2::ZERO, &[h(1.0, 0.0)]).unwrap(),
            Vec2::ZERO
        );
        assert_eq!(
            solve_min_norm(Vec2::new(-3.0, 0.0), &[]).unwrap(),
            Vec2::ZERO
        );
    }

    #[test]
    fn projection_onto_a_line() {
        let c = Vec2::new(-3.0, 0.0);
        let x = solve_min_norm(c, &[h(1.0, 0.0)]).unwrap();
        assert!(x.distance(Vec2::new(-2.0, 0.0)) < 1e-15);
        let x = solve_min_norm(c, &[h(1.0, 0.0), h(0.0, 1.0)]).unwrap();
        assert!(x.distance(Vec2::new(-2.0, 0.0)) < 1e-15);
        assert_eq!(
            support_set(c, &[h(1.0, 0.0), h(0.0, 1.0)], x).unwrap(),
            vec![0]
        );
    }

    #[test]
    fn vertex_solution_needs_two_constraints() {
        // x1 <= -2 and x2 <= -2: each projection violates the other constraint.
        let c = Vec2::new(-3.0, -3.0);
        let cons = [h(1.0, 0.0), h(0.0, 1.0)];
        let x = solve_min_norm(c, &cons).unwrap();
        assert!(x.distance(Vec2::new(-2.0, -2.0)) < 1e-15);
        for k in &cons {
            assert!(k.is_active(c, x));
        }
        assert_eq!(support_set(c, &cons, x).unwrap(), vec![0, 1]);
    }

    #[test]
    fn empty_support_when_origin_feasible() {
        let c = Vec2::new(0.5, 0.0);
        let cons = [h(0.3, 0.1)];
        let x = solve_min_norm(c, &cons).unwrap();
        assert_eq!(x, Vec2::ZERO);
        assert!(support_set(c, &cons, x).unwrap().is_empty());
    }

    #[test]
    fn parallel_lines_contribute_no_vertex() {
        let c = Vec2::new(-3.0, 0.0);
        let x = solve_min_norm(c, &[h(1.0, 0.0), h(0.5, 0.0)]).unwrap();
        assert!(x.distance(Vec2::new(-2.0, 0.0)) < 1e-15);
    }

    #[test]
    fn zero_direction_is_never_binding() {
        let c = Vec2::new(-3.0, 0.0);
        assert_eq!(solve_min_norm(c, &[h(0.0, 0.0)]).unwrap(), Vec2::ZERO);
    }

    #[test]
    fn discard_examples() {
        let cons = [h(0.9, 0.0), h(0.1, 0.0), h(0.0, 0.5)];
        assert_eq!(discard_select(&cons, 0).unwrap(), vec![0, 1, 2]);
        assert_eq!(discard_select(&cons, 1).unwrap(), vec![1, 2]);
        let equal = [h(0.5, 0.0), h(0.0, 0.5), h(-0.5, 0.0)];
        assert_eq!(discard_select(&equal, 1).unwrap(), vec![0, 1]);
        assert!(discard_select(&equal, 4).is_err());
    }

    #[test]
    fn rejects_long_directions() {
        assert!(HalfPlaneConstraint::new(Vec2::new(1.0, 0.1)).is_err());
        assert!(HalfPlaneConstraint::new(Vec2::new(f64::NAN, 0.0)).is_err());
    }
}
