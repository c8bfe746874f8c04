//! Transition measures, Cauchy transforms and the arcsine law.

use std::ops::Bound;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::Zero;

use crate::diagrams::{PiecewiseLinearDiagram, Zigzag};
use crate::error::TransitionError;
use crate::scalar::{Rat, Scalar};

/// Tolerance on the total mass of a floating-point measure.
const FLOAT_MASS_TOLERANCE: f64 = 1e-9;

/// A probability measure with finitely many atoms, stored by increasing
/// location.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure<T> {
    atoms: Vec<(T, T)>,
}

impl<T: Scalar> AtomicMeasure<T> {
    pub fn new(atoms: Vec<(T, T)>) -> Result<Self, TransitionError> {
        if atoms.is_empty() {
            return Err(TransitionError::InvalidMeasure("no atoms".into()));
        }
        if atoms.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(TransitionError::InvalidMeasure(
                "locations must be strictly increasing".into(),
            ));
        }
        if let Some((x, w)) = atoms.iter().find(|(_, w)| *w <= T::zero()) {
            return Err(TransitionError::InvalidMeasure(format!(
                "atom at {x} has non-positive weight {w}"
            )));
        }
        let total = atoms.iter().fold(T::zero(), |a, (_, w)| a + w.clone());
        let ok = if T::is_exact() {
            total == T::one()
        } else {
            (total.to_f64() - 1.0).abs() <= FLOAT_MASS_TOLERANCE
        };
        if !ok {
            return Err(TransitionError::InvalidMeasure(format!(
                "total mass {total} differs from 1"
            )));
        }
        Ok(AtomicMeasure { atoms })
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `μ((-∞, t])`.
    pub fn cdf(&self, t: &T) -> T {
        let k = self.atoms.partition_point(|(x, _)| x <= t);
        self.prefix_mass(k)
    }

    /// `μ((-∞, t))`.
    pub fn cdf_left_limit(&self, t: &T) -> T {
        let k = self.atoms.partition_point(|(x, _)| x < t);
        self.prefix_mass(k)
    }

    fn prefix_mass(&self, k: usize) -> T {
        self.atoms[..k]
            .iter()
            .fold(T::zero(), |a, (_, w)| a + w.clone())
    }

    pub fn mean(&self) -> T {
        self.atoms
            .iter()
            .fold(T::zero(), |a, (x, w)| a + x.clone() * w.clone())
    }

    pub fn max_weight(&self) -> T {
        self.atoms
            .iter()
            .fold(T::zero(), |a, (_, w)| T::max_of(a, w.clone()))
    }

    pub fn to_f64(&self) -> AtomicMeasure<f64> {
        AtomicMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|(x, w)| (x.to_f64(), w.to_f64()))
                .collect(),
        }
    }
}

fn is_pole<T: Scalar>(zig: &Zigzag<T>, z: &Complex<T>) -> bool {
    z.im.approx_eq(&T::zero()) && zig.concave().iter().any(|x| x.approx_eq(&z.re))
}

/// `G(z) = Π (z - y_j) / Π (z - x_i)`.
pub fn cauchy_transform<T: Scalar>(
    zig: &Zigzag<T>,
    z: &Complex<T>,
) -> Result<Complex<T>, TransitionError> {
    if is_pole(zig, z) {
        return Err(TransitionError::Pole(z.to_string()));
    }
    let mut acc = Complex::new(T::one(), T::zero());
    for (k, x) in zig.concave().iter().enumerate() {
        if let Some(y) = zig.convex().get(k) {
            acc = acc * (z.clone() - Complex::new(y.clone(), T::zero()));
        }
        acc = acc / (z.clone() - Complex::new(x.clone(), T::zero()));
    }
    Ok(acc)
}

/// Residues of the Cauchy transform at the concave corners.
pub fn transition_measure<T: Scalar>(zig: &Zigzag<T>) -> AtomicMeasure<T> {
    let xs = zig.concave();
    let ys = zig.convex();
    let atoms = xs
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            let num: Vec<T> = ys.iter().map(|y| xi.clone() - y.clone()).collect();
            let den: Vec<T> = xs
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, x)| xi.clone() - x.clone())
                .collect();
            (xi.clone(), T::ratio_of_products(&num, &den))
        })
        .collect();
    AtomicMeasure::new(atoms).expect("residues of a zigzag form a probability measure")
}

/// The Cauchy transform of an arbitrary piecewise linear diagram, from
/// `log(z G(z)) = -∫ σ'(u) / (z - u) du` with `σ(u) = (ω(u) - |u|)/2`.
pub fn log_cauchy_piecewise(
    d: &PiecewiseLinearDiagram<f64>,
    z: Complex64,
) -> Result<Complex64, TransitionError> {
    if z.im == 0.0 {
        return Err(TransitionError::OnRealAxis);
    }
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(d.breakpoints().len() + 1);
    for w in d.breakpoints().windows(2) {
        pts.push(w[0]);
        if w[0].0 < 0.0 && w[1].0 > 0.0 {
            pts.push((0.0, d.evaluate(&0.0)));
        }
    }
    pts.push(*d.breakpoints().last().expect("nonempty"));

    let mut log_zg = Complex64::zero();
    for w in pts.windows(2) {
        let (u0, v0) = w[0];
        let (u1, v1) = w[1];
        let sign = if u0 + u1 < 0.0 { -1.0 } else { 1.0 };
        let sigma = ((v1 - v0) / (u1 - u0) - sign) / 2.0;
        if sigma != 0.0 {
            log_zg -= sigma * ((z - u0).ln() - (z - u1).ln());
        }
    }
    Ok(log_zg.exp() / z)
}

/// `-Im G(x + iη) / π`, the Poisson smoothing of the transition measure.
pub fn stieltjes_density(
    d: &PiecewiseLinearDiagram<f64>,
    x: f64,
    eta: f64,
) -> Result<f64, TransitionError> {
    if eta <= 0.0 {
        return Err(TransitionError::NonPositiveWidth);
    }
    let g = log_cauchy_piecewise(d, Complex64::new(x, eta))?;
    Ok(-g.im / std::f64::consts::PI)
}

/// CDF of the arcsine law on `[-√2, √2]`.
pub fn arcsine_cdf(t: f64) -> f64 {
    let s = std::f64::consts::SQRT_2;
    if t <= -s {
        0.0
    } else if t >= s {
        1.0
    } else {
        0.5 + (t / s).asin() / std::f64::consts::PI
    }
}

/// Density `1 / (π √(2 - z²))` of the arcsine law, zero outside the support.
pub fn arcsine_density(z: f64) -> f64 {
    let r = 2.0 - z * z;
    if r <= 0.0 {
        0.0
    } else {
        1.0 / (std::f64::consts::PI * r.sqrt())
    }
}

/// The symmetric binomial-type law with weights
/// `4^{-N} C(2k, k) C(2N - 2k, N - k)` at `2k - N`.
pub fn feller_measure(n: usize) -> AtomicMeasure<Rat> {
    let denom = BigInt::from(4u8).pow(n as u32);
    let binom = |a: usize, b: usize| num_integer::binomial(BigInt::from(a), BigInt::from(b));
    let atoms = (0..=n)
        .map(|k| {
            let w = binom(2 * k, k) * binom(2 * n - 2 * k, n - k);
            (
                Rat::from_integer(BigInt::from(2 * k as i64 - n as i64)),
                Rat::new(w, denom.clone()),
            )
        })
        .collect();
    AtomicMeasure::new(atoms).expect("weights sum to one")
}

/// A probability law on the line that can be integrated against.
pub trait TransitionLaw: Sync {
    /// `∫ f dμ` over the interval with the given ends.
    fn integrate(&self, lo: Bound<f64>, hi: Bound<f64>, f: &dyn Fn(f64) -> f64) -> f64;

    fn mass(&self, lo: Bound<f64>, hi: Bound<f64>) -> f64 {
        self.integrate(lo, hi, &|_| 1.0)
    }

    fn cdf(&self, t: f64) -> f64 {
        self.mass(Bound::Unbounded, Bound::Included(t))
    }

    fn cdf_left(&self, t: f64) -> f64 {
        self.mass(Bound::Unbounded, Bound::Excluded(t))
    }
}

fn contains(lo: &Bound<f64>, hi: &Bound<f64>, x: f64) -> bool {
    let above = match *lo {
        Bound::Included(a) => x >= a,
        Bound::Excluded(a) => x > a,
        Bound::Unbounded => true,
    };
    let below = match *hi {
        Bound::Included(b) => x <= b,
        Bound::Excluded(b) => x < b,
        Bound::Unbounded => true,
    };
    above && below
}

impl<T: Scalar> TransitionLaw for AtomicMeasure<T> {
    fn integrate(&self, lo: Bound<f64>, hi: Bound<f64>, f: &dyn Fn(f64) -> f64) -> f64 {
        self.atoms
            .iter()
            .map(|(x, w)| (x.to_f64(), w.to_f64()))
            .filter(|&(x, _)| contains(&lo, &hi, x))
            .map(|(x, w)| w * f(x))
            .sum()
    }
}

/// The arcsine law, integrated in the angle variable `z = √2 sin θ`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ArcsineLaw;

impl TransitionLaw for ArcsineLaw {
    fn integrate(&self, lo: Bound<f64>, hi: Bound<f64>, f: &dyn Fn(f64) -> f64) -> f64 {
        let s = std::f64::consts::SQRT_2;
        let angle = |b: Bound<f64>, default: f64| match b {
            Bound::Included(t) | Bound::Excluded(t) => (t / s).clamp(-1.0, 1.0).asin(),
            Bound::Unbounded => default,
        };
        let half_pi = std::f64::consts::FRAC_PI_2;
        let a = angle(lo, -half_pi);
        let b = angle(hi, half_pi);
        if b <= a {
            return 0.0;
        }
        let g = |t: f64| f(s * t.sin()) / std::f64::consts::PI;
        adaptive_simpson(&g, a, b, 1e-13, 40)
    }

    fn cdf(&self, t: f64) -> f64 {
        arcsine_cdf(t)
    }

    fn cdf_left(&self, t: f64) -> f64 {
        arcsine_cdf(t)
    }
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, a, b);
    rec(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{staircase, triangle_diagram, Partition};
    use crate::scalar::ratio;

    fn measure_of(rows: &[usize]) -> AtomicMeasure<Rat> {
        transition_measure(&Partition::new(rows.to_vec()).unwrap().zigzag::<Rat>())
    }

    #[test]
    fn single_box_measure() {
        let m = measure_of(&[1]);
        assert_eq!(
            m.atoms(),
            &[(ratio(-1, 1), ratio(1, 2)), (ratio(1, 1), ratio(1, 2))]
        );
    }

    #[test]
    fn empty_measure_is_dirac() {
        let m = measure_of(&[]);
        assert_eq!(m.atoms(), &[(ratio(0, 1), ratio(1, 1))]);
    }

    #[test]
    fn two_one_measure() {
        let m = measure_of(&[2, 1]);
        assert_eq!(
            m.atoms(),
            &[
                (ratio(-2, 1), ratio(3, 8)),
                (ratio(0, 1), ratio(1, 4)),
                (ratio(2, 1), ratio(3, 8))
            ]
        );
    }

    #[test]
    fn measures_are_centered() {
        for rows in [&[3, 1][..], &[4, 2, 2, 2], &[5, 5, 1], &[1, 1, 1]] {
            assert_eq!(measure_of(rows).mean(), ratio(0, 1), "{rows:?}");
        }
    }

    #[test]
    fn staircase_three_is_feller() {
        assert_eq!(
            transition_measure(&staircase(3).zigzag::<Rat>()),
            feller_measure(3)
        );
        let w: Vec<Rat> = feller_measure(3)
            .atoms()
            .iter()
            .map(|a| a.1.clone())
            .collect();
        assert_eq!(
            w,
            vec![ratio(5, 16), ratio(3, 16), ratio(3, 16), ratio(5, 16)]
        );
    }

    #[test]
    fn cauchy_transform_matches_residues() {
        let zig = Partition::new(vec![3, 1]).unwrap().zigzag::<Rat>();
        let m = transition_measure(&zig);
        let z = Complex::new(ratio(1, 3), ratio(2, 1));
        let g = cauchy_transform(&zig, &z).unwrap();
        let mut sum = Complex::new(ratio(0, 1), ratio(0, 1));
        for (x, w) in m.atoms() {
            sum += Complex::new(w.clone(), ratio(0, 1))
                / (z.clone() - Complex::new(x.clone(), ratio(0, 1)));
        }
        assert_eq!(g, sum);
    }

    #[test]
    fn cauchy_transform_rejects_pole() {
        let zig = Partition::new(vec![1]).unwrap().zigzag::<f64>();
        assert!(matches!(
            cauchy_transform(&zig, &Complex::new(1.0, 0.0)),
            Err(TransitionError::Pole(_))
        ));
        assert!(cauchy_transform(&zig, &Complex::new(0.5, 0.0)).is_ok());
    }

    #[test]
    fn triangle_cauchy_transform() {
        let t = triangle_diagram();
        let z = Complex64::new(0.3, 0.7);
        let g = log_cauchy_piecewise(&t, z).unwrap();
        let expected = 1.0 / (z * z - 2.0).sqrt();
        assert!((g - expected).norm() < 1e-12, "{g} vs {expected}");
        assert_eq!(
            log_cauchy_piecewise(&t, Complex64::new(0.3, 0.0)),
            Err(TransitionError::OnRealAxis)
        );
    }

    #[test]
    fn log_form_agrees_with_rational_form() {
        let zig = Partition::new(vec![4, 2, 2, 2]).unwrap().zigzag::<f64>();
        let d = zig.to_piecewise();
        for z in [
            Complex64::new(0.1, 1.0),
            Complex64::new(-3.0, -0.2),
            Complex64::new(5.0, 0.01),
        ] {
            let a = log_cauchy_piecewise(&d, z).unwrap();
            let b = cauchy_transform(&zig, &z).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn stieltjes_needs_positive_width() {
        assert_eq!(
            stieltjes_density(&triangle_diagram(), 0.0, 0.0),
            Err(TransitionError::NonPositiveWidth)
        );
    }

    #[test]
    fn arcsine_values() {
        assert_eq!(arcsine_cdf(0.0), 0.5);
        assert!((arcsine_cdf(1.0) - 0.75).abs() < 1e-15);
        assert_eq!(arcsine_cdf(-2.0), 0.0);
        assert_eq!(arcsine_cdf(2.0), 1.0);
        assert!((arcsine_density(0.0) - 1.0 / (std::f64::consts::PI * 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(arcsine_density(1.5), 0.0);
    }

    #[test]
    fn arcsine_law_quadrature() {
        let law = ArcsineLaw;
        assert!((law.mass(Bound::Unbounded, Bound::Unbounded) - 1.0).abs() < 1e-12);
        let second = law.integrate(Bound::Unbounded, Bound::Unbounded, &|z| z * z);
        assert!((second - 1.0).abs() < 1e-12);
        let part = law.mass(Bound::Included(-1.0), Bound::Excluded(1.0));
        assert!((part - (arcsine_cdf(1.0) - arcsine_cdf(-1.0))).abs() < 1e-12);
    }

    #[test]
    fn atomic_law_respects_bounds() {
        let m = feller_measure(2);
        assert_eq!(m.cdf(&ratio(0, 1)), ratio(5, 8));
        assert_eq!(m.cdf_left_limit(&ratio(0, 1)), ratio(3, 8));
        let open = m.mass(Bound::Excluded(-2.0), Bound::Excluded(2.0));
        assert!((open - 0.25).abs() < 1e-15);
    }

    #[test]
    fn invalid_measures() {
        assert!(AtomicMeasure::new(vec![(0.0, 0.5)]).is_err());
        assert!(AtomicMeasure::new(vec![(1.0, 0.5), (0.0, 0.5)]).is_err());
        assert!(AtomicMeasure::new(vec![(0.0, 1.5), (1.0, -0.5)]).is_err());
        assert!(AtomicMeasure::<f64>::new(vec![]).is_err());
    }
}
