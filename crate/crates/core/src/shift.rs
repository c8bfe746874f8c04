//! Shifting a diagram along a line, and the resulting bounds for the
//! cumulative function of transition measures of nearby diagrams.
//!
//! For a diagram `Ω`, `ε > 0` and a line `f(z) = z + b`, the blue curve is
//! `Ω(z - ε) - ε` and the red curve is `Ω(z - ε) + ε`. Every diagram within
//! distance `ε` of `Ω` lies between them. The shifted diagram follows the blue
//! curve up to its first meeting `z₋` with `f`, then `f`, then the red curve
//! from its last meeting `z₊` with `f` on.

use num_complex::Complex;
use serde::Serialize;

use crate::approximation::inner_partition;
use crate::diagrams::{AffineLine, PiecewiseLinearDiagram, Zigzag};
use crate::error::ShiftError;
use crate::metric::distance;
use crate::scalar::{Rat, Scalar};
use crate::transition::{transition_measure, AtomicMeasure, TransitionLaw};

fn check_epsilon<T: Scalar>(epsilon: &T) -> Result<(), ShiftError> {
    if *epsilon <= T::zero() {
        Err(ShiftError::NonPositiveEpsilon)
    } else {
        Ok(())
    }
}

/// Solves `g(z) = 0` on the segment between shifted breakpoints `k` and `k+1`,
/// where `g` changes sign from `g0 > 0` (or `≥ 0`) to `g1`.
fn crossing<T: Scalar>(w0: &T, w1: &T, g0: &T, g1: &T) -> T {
    w0.clone() + g0.clone() * (w1.clone() - w0.clone()) / (g0.clone() - g1.clone())
}

/// Minimal root of `Ω(z - ε) - ε = z + b`.
fn minimal_blue_root<T: Scalar>(omega: &PiecewiseLinearDiagram<T>, epsilon: &T, b: &T) -> T {
    let pts = omega.breakpoints();
    // g(w_k) with w_k = u_k + ε; g is nonincreasing
    let g: Vec<T> = pts
        .iter()
        .map(|(u, v)| v.clone() - u.clone() - T::two() * epsilon.clone() - b.clone())
        .collect();
    if g[0] <= T::zero() {
        return -b.clone() / T::two();
    }
    let k = g.partition_point(|x| *x > T::zero());
    let w = |i: usize| pts[i].0.clone() + epsilon.clone();
    crossing(&w(k - 1), &w(k), &g[k - 1], &g[k])
}

/// Maximal root of `Ω(z - ε) + ε = z + b`, or `None` when the root set is
/// empty or unbounded above (`b ≤ 0`).
fn maximal_red_root<T: Scalar>(omega: &PiecewiseLinearDiagram<T>, epsilon: &T, b: &T) -> Option<T> {
    if *b <= T::zero() {
        return None;
    }
    let pts = omega.breakpoints();
    let r: Vec<T> = pts
        .iter()
        .map(|(u, v)| v.clone() - u.clone() - b.clone())
        .collect();
    let count = r.partition_point(|x| *x >= T::zero());
    if count == 0 {
        return Some(epsilon.clone() - b.clone() / T::two());
    }
    let k = count - 1;
    let w = |i: usize| pts[i].0.clone() + epsilon.clone();
    // r at the last breakpoint is -b < 0, so k + 1 exists
    Some(crossing(&w(k), &w(k + 1), &r[k], &r[k + 1]))
}

/// `(z₋, z₊)`: the minimal root of `f = Ω(· - ε) - ε` and the maximal root of
/// `f = Ω(· - ε) + ε`.
pub fn intersections<T: Scalar>(
    omega: &PiecewiseLinearDiagram<T>,
    epsilon: &T,
    line: &AffineLine<T>,
) -> Result<(T, T), ShiftError> {
    check_epsilon(epsilon)?;
    let b = line.intercept();
    let z_minus = minimal_blue_root(omega, epsilon, b);
    let z_plus = maximal_red_root(omega, epsilon, b).ok_or(ShiftError::NoIntersection)?;
    Ok((z_minus, z_plus))
}

/// `min(max(Ω(z - ε) - ε, f(z)), Ω(z - ε) + ε)`.
pub fn minmax_value<T: Scalar>(
    omega: &PiecewiseLinearDiagram<T>,
    epsilon: &T,
    line: &AffineLine<T>,
    z: &T,
) -> T {
    let base = omega.evaluate(&(z.clone() - epsilon.clone()));
    let blue = base.clone() - epsilon.clone();
    let red = base + epsilon.clone();
    T::min_of(T::max_of(blue, line.eval(z)), red)
}

/// The ε-shift of a diagram along a line.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftReport<T> {
    pub z_minus: T,
    pub z_plus: T,
    pub shifted: PiecewiseLinearDiagram<T>,
    pub epsilon: T,
    pub line: AffineLine<T>,
}

impl<T: Scalar> ShiftReport<T> {
    /// Corners of the shifted diagram when it is a zigzag.
    pub fn shifted_zigzag(&self) -> Option<Zigzag<T>> {
        self.shifted.as_zigzag()
    }
}

pub fn shifted_diagram<T: Scalar>(
    omega: &PiecewiseLinearDiagram<T>,
    epsilon: &T,
    line: &AffineLine<T>,
) -> Result<ShiftReport<T>, ShiftError> {
    let (z_minus, z_plus) = intersections(omega, epsilon, line)?;
    let pts = omega.breakpoints();
    let (u_first, u_last) = omega.support();
    let one = T::one();
    let left = T::min_of(
        T::min_of(u_first + epsilon.clone(), z_minus.clone()),
        T::zero(),
    ) - one.clone();
    let right = T::max_of(
        T::max_of(u_last + epsilon.clone(), z_plus.clone()),
        T::zero(),
    ) + one;

    let mut out = vec![(left.clone(), -left)];
    for (u, v) in pts {
        let w = u.clone() + epsilon.clone();
        if w < z_minus {
            out.push((w, v.clone() - epsilon.clone()));
        }
    }
    out.push((z_minus.clone(), line.eval(&z_minus)));
    if !z_plus.approx_eq(&z_minus) {
        out.push((z_plus.clone(), line.eval(&z_plus)));
    }
    for (u, v) in pts {
        let w = u.clone() + epsilon.clone();
        if w > z_plus {
            out.push((w, v.clone() + epsilon.clone()));
        }
    }
    out.push((right.clone(), right));
    let shifted = PiecewiseLinearDiagram::new(out)?;
    Ok(ShiftReport {
        z_minus,
        z_plus,
        shifted,
        epsilon: epsilon.clone(),
        line: line.clone(),
    })
}

/// `(z - z₊) / (z + ε - z₊)` for `z ≥ z₊`, and `0` below.
pub fn p_min<T: Scalar>(z_plus: &T, epsilon: &T, z: &T) -> T {
    if z < z_plus {
        return T::zero();
    }
    (z.clone() - z_plus.clone()) / (z.clone() + epsilon.clone() - z_plus.clone())
}

/// Corner indices `(i, j)` of a zigzag `Ω` bracketing the stretch replaced by
/// the line: `i` convex corners lie (after shifting by `ε`) strictly left of
/// `z₋`, and `j` lie at or left of `z₊`.
pub fn corner_window<T: Scalar>(
    zig: &Zigzag<T>,
    epsilon: &T,
    z_minus: &T,
    z_plus: &T,
) -> (usize, usize) {
    let shifted = |y: &T| y.clone() + epsilon.clone();
    let i = zig
        .convex()
        .iter()
        .filter(|y| shifted(y) < *z_minus)
        .count();
    let j = zig
        .convex()
        .iter()
        .filter(|y| shifted(y) <= *z_plus)
        .count();
    (i, j)
}

/// `ε + Σ_{i ≤ k < j} (y_{k+1} - x_k)`, which equals `z₊ - z₋`.
pub fn kerov_centered_rhs<T: Scalar>(zig: &Zigzag<T>, epsilon: &T, window: (usize, usize)) -> T {
    let (i, j) = window;
    (i..j).fold(epsilon.clone(), |acc, k| {
        acc + zig.convex()[k].clone() - zig.concave()[k].clone()
    })
}

/// `P(z) = (z - z₊)/(z - z₋) · Π_{i ≤ k < j} (z - x_k - ε)/(z - y_{k+1} - ε)`,
/// the factor with `G_Ω̄(z) = G_Ω(z - ε) P(z)`.
pub fn magic_product<T: Scalar>(
    zig: &Zigzag<T>,
    report: &ShiftReport<T>,
    z: &Complex<T>,
) -> Complex<T> {
    let eps = &report.epsilon;
    let (i, j) = corner_window(zig, eps, &report.z_minus, &report.z_plus);
    let c = |t: T| Complex::new(t, T::zero());
    let mut acc = (z.clone() - c(report.z_plus.clone())) / (z.clone() - c(report.z_minus.clone()));
    for k in i..j {
        let x = zig.concave()[k].clone() + eps.clone();
        let y = zig.convex()[k].clone() + eps.clone();
        acc = acc * (z.clone() - c(x)) / (z.clone() - c(y));
    }
    acc
}

/// `∫ P_min(z₊, ε, z + ε) dμ_Ω(z)`, a lower bound for `μ_Ω̄((z₊, ∞))`.
pub fn tail_lower_bound<T: Scalar>(
    zig: &Zigzag<T>,
    epsilon: &T,
    line: &AffineLine<T>,
) -> Result<T, ShiftError> {
    let (_, z_plus) = intersections(&zig.to_piecewise(), epsilon, line)?;
    let mu = transition_measure(zig);
    Ok(mu.atoms().iter().fold(T::zero(), |acc, (x, w)| {
        acc + w.clone() * p_min(&z_plus, epsilon, &(x.clone() + epsilon.clone()))
    }))
}

/// Maximal solution `z` of `Ω(z - ε) - Ω(z₀ - ε) = z - z₀ - 2ε`; `None` when
/// there is none or the solution set is unbounded above.
pub fn z_plus_max<T: Scalar>(
    omega: &PiecewiseLinearDiagram<T>,
    z0: &T,
    epsilon: &T,
) -> Result<Option<T>, ShiftError> {
    check_epsilon(epsilon)?;
    let b = omega.evaluate(&(z0.clone() - epsilon.clone())) - epsilon.clone() - z0.clone();
    Ok(maximal_red_root(omega, epsilon, &b))
}

/// The mirror of [`z_plus_max`]: `-z_plus_max(Ωᵀ, -z₀, ε)`.
pub fn z_minus_min<T: Scalar>(
    omega: &PiecewiseLinearDiagram<T>,
    z0: &T,
    epsilon: &T,
) -> Result<Option<T>, ShiftError> {
    Ok(z_plus_max(&omega.transpose(), &-z0.clone(), epsilon)?.map(|z| -z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

/// An evaluated bound for the cumulative function at `z0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport<T> {
    /// `z₊^max` for the upper bound, `z₋^min` for the lower bound.
    pub z_star: T,
    pub bound_value: T,
    pub side: Side,
    pub epsilon: T,
    pub z0: T,
}

impl<T: Scalar> BoundReport<T> {
    pub fn to_f64(&self) -> BoundReport<f64> {
        BoundReport {
            z_star: self.z_star.to_f64(),
            bound_value: self.bound_value.to_f64(),
            side: self.side,
            epsilon: self.epsilon.to_f64(),
            z0: self.z0.to_f64(),
        }
    }
}

fn clamp_unit<T: Scalar>(x: T) -> T {
    T::min_of(T::max_of(x, T::zero()), T::one())
}

/// `1 - ∫_{[z* - ε, ∞)} (1 - ε/(z + 2ε - z*)) dμ(z)`.
pub fn upper_bound_from_measure<T: Scalar>(mu: &AtomicMeasure<T>, z_star: &T, epsilon: &T) -> T {
    let start = z_star.clone() - epsilon.clone();
    let tail = mu
        .atoms()
        .iter()
        .filter(|(z, _)| *z >= start)
        .fold(T::zero(), |acc, (z, w)| {
            let gap = z.clone() + T::two() * epsilon.clone() - z_star.clone();
            acc + w.clone() * (T::one() - epsilon.clone() / gap)
        });
    clamp_unit(T::one() - tail)
}

/// `∫_{(-∞, z* + ε]} (1 - ε/(z* + 2ε - z)) dμ(z)`.
pub fn lower_bound_from_measure<T: Scalar>(mu: &AtomicMeasure<T>, z_star: &T, epsilon: &T) -> T {
    let end = z_star.clone() + epsilon.clone();
    let head = mu
        .atoms()
        .iter()
        .filter(|(z, _)| *z <= end)
        .fold(T::zero(), |acc, (z, w)| {
            let gap = z_star.clone() + T::two() * epsilon.clone() - z.clone();
            acc + w.clone() * (T::one() - epsilon.clone() / gap)
        });
    clamp_unit(head)
}

/// [`upper_bound_from_measure`] for a general law.
pub fn upper_bound_from_law(law: &dyn TransitionLaw, z_star: f64, epsilon: f64) -> f64 {
    use std::ops::Bound;
    let tail = law.integrate(Bound::Included(z_star - epsilon), Bound::Unbounded, &|z| {
        1.0 - epsilon / (z + 2.0 * epsilon - z_star)
    });
    (1.0 - tail).clamp(0.0, 1.0)
}

/// [`lower_bound_from_measure`] for a general law.
pub fn lower_bound_from_law(law: &dyn TransitionLaw, z_star: f64, epsilon: f64) -> f64 {
    use std::ops::Bound;
    let head = law.integrate(Bound::Unbounded, Bound::Included(z_star + epsilon), &|z| {
        1.0 - epsilon / (z_star + 2.0 * epsilon - z)
    });
    head.clamp(0.0, 1.0)
}

/// Transition measure of `Ω`: exact for zigzags, otherwise the measure of the
/// inner approximation at resolution `n_max` (ignored for zigzags).
pub fn reference_measure<T: Scalar>(
    omega: &PiecewiseLinearDiagram<T>,
    n_max: usize,
) -> AtomicMeasure<T> {
    if let Some(zig) = omega.as_zigzag() {
        return transition_measure(&zig);
    }
    let n_max = n_max.max(1);
    let lambda = inner_partition(omega, n_max);
    let scale = Rat::from_integer(n_max.into());
    let exact = transition_measure(&lambda.zigzag::<Rat>());
    let atoms = exact
        .atoms()
        .iter()
        .map(|(x, w)| (T::from_rat(&(x / &scale)), T::from_rat(w)))
        .collect();
    AtomicMeasure::new(atoms).expect("rescaled measure")
}

/// Upper bound for `lim_{τ→0⁺} K_ω(z₀ - τ)` over all `ω` within distance `ε`
/// of `Ω`.
pub fn upper_bound_cdf<T: Scalar>(
    omega: &PiecewiseLinearDiagram<T>,
    z0: &T,
    epsilon: &T,
    n_max: usize,
) -> Result<BoundReport<T>, ShiftError> {
    let z_star = z_plus_max(omega, z0, epsilon)?.ok_or(ShiftError::NoExtremeRoot)?;
    let mu = reference_measure(omega, n_max);
    Ok(BoundReport {
        bound_value: upper_bound_from_measure(&mu, &z_star, epsilon),
        z_star,
        side: Side::Upper,
        epsilon: epsilon.clone(),
        z0: z0.clone(),
    })
}

/// Lower bound for `K_ω(z₀)` over all `ω` within distance `ε` of `Ω`.
pub fn lower_bound_cdf<T: Scalar>(
    omega: &PiecewiseLinearDiagram<T>,
    z0: &T,
    epsilon: &T,
    n_max: usize,
) -> Result<BoundReport<T>, ShiftError> {
    let z_star = z_minus_min(omega, z0, epsilon)?.ok_or(ShiftError::NoExtremeRoot)?;
    let mu = reference_measure(omega, n_max);
    Ok(BoundReport {
        bound_value: lower_bound_from_measure(&mu, &z_star, epsilon),
        z_star,
        side: Side::Lower,
        epsilon: epsilon.clone(),
        z0: z0.clone(),
    })
}

/// Shifts `Ω` along `f(z) = z - z₀ + ω(z₀)`; the transition measure of the
/// result dominates that of `ω` at `z₀`: `K_ω(z₀⁻) ≤ K_Ω̄(z₀)`.
pub fn steepest_reference<T: Scalar>(
    omega_ref: &PiecewiseLinearDiagram<T>,
    omega: &PiecewiseLinearDiagram<T>,
    z0: &T,
    epsilon: &T,
) -> Result<ShiftReport<T>, ShiftError> {
    check_epsilon(epsilon)?;
    let b = omega.evaluate(z0) - z0.clone();
    if b.approx_le(&T::zero()) {
        return Err(ShiftError::Degenerate);
    }
    let d = distance(omega_ref, omega);
    if *epsilon < d {
        return Err(ShiftError::OutsideBall {
            epsilon: epsilon.to_f64(),
            distance: d.to_f64(),
        });
    }
    shifted_diagram(omega_ref, epsilon, &AffineLine::new(b)?)
}
