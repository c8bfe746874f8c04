//! Distance between continual diagrams, defined as the larger of the
//! Hausdorff distances between the vertical and horizontal sections of the
//! two curves.
//!
//! The curve of a diagram `ω` in French coordinates is
//! `{(x, y) : x, y ≥ 0, ω(x - y) = x + y}`. With `h(u) = ω(u) + u`, which is
//! nondecreasing, the section at abscissa `x` is `{x - u : h(u) = 2x}`, a
//! single closed interval. At `x = 0` it is a ray, which is capped at the
//! common support bound plus one.

use crate::diagrams::PiecewiseLinearDiagram;
use crate::error::MetricError;
use crate::scalar::Scalar;

/// A nonempty finite union of sorted, disjoint closed intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionSet<T> {
    intervals: Vec<(T, T)>,
}

impl<T: Scalar> ProjectionSet<T> {
    pub fn new(intervals: Vec<(T, T)>) -> Result<Self, MetricError> {
        if intervals.is_empty() {
            return Err(MetricError::Empty);
        }
        let ordered =
            intervals.iter().all(|(a, b)| a <= b) && intervals.windows(2).all(|w| w[0].1 < w[1].0);
        if !ordered {
            return Err(MetricError::Malformed);
        }
        Ok(ProjectionSet { intervals })
    }

    pub fn point(p: T) -> Self {
        ProjectionSet {
            intervals: vec![(p.clone(), p)],
        }
    }

    pub fn interval(lo: T, hi: T) -> Result<Self, MetricError> {
        Self::new(vec![(lo, hi)])
    }

    pub fn intervals(&self) -> &[(T, T)] {
        &self.intervals
    }

    /// Distance from `p` to the set.
    pub fn distance_to(&self, p: &T) -> T {
        self.intervals
            .iter()
            .map(|(a, b)| {
                if p < a {
                    a.clone() - p.clone()
                } else if p > b {
                    p.clone() - b.clone()
                } else {
                    T::zero()
                }
            })
            .fold(None, |best: Option<T>, d| {
                Some(match best {
                    Some(b) => T::min_of(b, d),
                    None => d,
                })
            })
            .expect("nonempty")
    }

    /// `sup_{a ∈ self} dist(a, other)`.
    fn excess_over(&self, other: &Self) -> T {
        let mut candidates: Vec<T> = Vec::new();
        for (a, b) in &self.intervals {
            candidates.push(a.clone());
            candidates.push(b.clone());
            // the distance to `other` peaks at midpoints of its gaps
            for w in other.intervals.windows(2) {
                let mid = (w[0].1.clone() + w[1].0.clone()) / T::two();
                if *a <= mid && mid <= *b {
                    candidates.push(mid);
                }
            }
        }
        candidates
            .iter()
            .map(|c| other.distance_to(c))
            .fold(T::zero(), T::max_of)
    }
}

/// Hausdorff distance between two projection sets.
pub fn hausdorff<T: Scalar>(a: &ProjectionSet<T>, b: &ProjectionSet<T>) -> T {
    T::max_of(a.excess_over(b), b.excess_over(a))
}

fn h_values<T: Scalar>(d: &PiecewiseLinearDiagram<T>) -> Vec<T> {
    d.breakpoints()
        .iter()
        .map(|(u, v)| u.clone() + v.clone())
        .collect()
}

/// Solves `h(u) = target` on segment `k-1..k`, where `h_{k-1} <= target <= h_k`.
fn interpolate<T: Scalar>(pts: &[(T, T)], h: &[T], k: usize, target: &T) -> T {
    let (u0, u1) = (&pts[k - 1].0, &pts[k].0);
    let (h0, h1) = (&h[k - 1], &h[k]);
    u0.clone()
        + (target.clone() - h0.clone()) * (u1.clone() - u0.clone()) / (h1.clone() - h0.clone())
}

fn section<T: Scalar>(d: &PiecewiseLinearDiagram<T>, h: &[T], x: &T, cap: &T) -> (T, T) {
    let pts = d.breakpoints();
    let target = x.clone() * T::two();
    let n = pts.len();
    let u_hi = {
        let k = h.partition_point(|v| *v <= target);
        if k == n {
            x.clone()
        } else {
            interpolate(pts, h, k, &target)
        }
    };
    if *x <= T::zero() {
        let lo = -u_hi;
        let hi = T::max_of(cap.clone(), lo.clone());
        return (lo, hi);
    }
    let u_lo = {
        let k = h.partition_point(|v| *v < target);
        if k == n {
            x.clone()
        } else {
            interpolate(pts, h, k, &target)
        }
    };
    (x.clone() - u_hi, x.clone() - u_lo)
}

/// `{y ≥ 0 : d(x - y) = x + y}`; the ray at `x = 0` is cut off at `cap`.
pub fn project_y<T: Scalar>(d: &PiecewiseLinearDiagram<T>, x: &T, cap: &T) -> ProjectionSet<T> {
    let (lo, hi) = section(d, &h_values(d), x, cap);
    ProjectionSet {
        intervals: vec![(lo, hi)],
    }
}

/// `{x ≥ 0 : d(x - y) = x + y}`; the ray at `y = 0` is cut off at `cap`.
pub fn project_x<T: Scalar>(d: &PiecewiseLinearDiagram<T>, y: &T, cap: &T) -> ProjectionSet<T> {
    project_y(&d.transpose(), y, cap)
}

/// The cap used for the rays of two diagrams: their common support bound
/// plus one.
pub fn common_cap<T: Scalar>(a: &PiecewiseLinearDiagram<T>, b: &PiecewiseLinearDiagram<T>) -> T {
    T::max_of(a.support_bound(), b.support_bound()) + T::one()
}

fn interval_hausdorff<T: Scalar>(a: &(T, T), b: &(T, T)) -> T {
    T::max_of(
        (a.0.clone() - b.0.clone()).abs(),
        (a.1.clone() - b.1.clone()).abs(),
    )
}

/// `sup_x d_H(Π_Y^a(x), Π_Y^b(x))`, evaluated at `x = 0` and at every level
/// `h_k / 2` of either diagram. Between consecutive levels both sections move
/// affinely, and at a level the section contains both one-sided limits.
pub fn distance_y<T: Scalar>(a: &PiecewiseLinearDiagram<T>, b: &PiecewiseLinearDiagram<T>) -> T {
    let cap = common_cap(a, b);
    let ha = h_values(a);
    let hb = h_values(b);
    let mut xs: Vec<T> = ha
        .iter()
        .chain(hb.iter())
        .map(|h| h.clone() / T::two())
        .filter(|x| *x > T::zero())
        .collect();
    xs.push(T::zero());
    xs.iter()
        .map(|x| interval_hausdorff(&section(a, &ha, x, &cap), &section(b, &hb, x, &cap)))
        .fold(T::zero(), T::max_of)
}

/// `sup_y d_H(Π_X^a(y), Π_X^b(y))`.
pub fn distance_x<T: Scalar>(a: &PiecewiseLinearDiagram<T>, b: &PiecewiseLinearDiagram<T>) -> T {
    distance_y(&a.transpose(), &b.transpose())
}

/// `(d_X, d_Y)`.
pub fn distance_components<T: Scalar>(
    a: &PiecewiseLinearDiagram<T>,
    b: &PiecewiseLinearDiagram<T>,
) -> (T, T) {
    (distance_x(a, b), distance_y(a, b))
}

/// `max(d_X, d_Y)`.
pub fn distance<T: Scalar>(a: &PiecewiseLinearDiagram<T>, b: &PiecewiseLinearDiagram<T>) -> T {
    let (dx, dy) = distance_components(a, b);
    T::max_of(dx, dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{triangle_diagram, Partition};
    use crate::scalar::{ratio, Rat};

    fn profile(rows: &[usize]) -> PiecewiseLinearDiagram<Rat> {
        Partition::new(rows.to_vec()).unwrap().profile()
    }

    fn r(v: i64) -> Rat {
        ratio(v, 1)
    }

    /// Sections by dense sampling of the curve `t ↦ ((v + u)/2, (v - u)/2)`.
    fn sampled_section(d: &PiecewiseLinearDiagram<f64>, x: f64) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let steps = 200_000;
        for i in 0..=steps {
            let u = -4.0 + 8.0 * i as f64 / steps as f64;
            let v = d.evaluate(&u);
            let (fx, fy) = ((v + u) / 2.0, (v - u) / 2.0);
            if (fx - x).abs() < 1e-4 {
                lo = lo.min(fy);
                hi = hi.max(fy);
            }
        }
        (lo, hi)
    }

    #[test]
    fn empty_diagram_sections() {
        let d = PiecewiseLinearDiagram::<Rat>::abs_value();
        assert_eq!(project_y(&d, &r(3), &r(10)).intervals(), &[(r(0), r(0))]);
        assert_eq!(project_x(&d, &r(0), &r(1)).intervals(), &[(r(0), r(1))]);
    }

    #[test]
    fn single_box_sections() {
        let d = profile(&[1]);
        assert_eq!(project_y(&d, &r(1), &r(5)).intervals(), &[(r(0), r(1))]);
        assert_eq!(project_x(&d, &r(1), &r(5)).intervals(), &[(r(0), r(1))]);
        assert_eq!(
            project_y(&d, &ratio(1, 2), &r(5)).intervals(),
            &[(r(1), r(1))]
        );
    }

    #[test]
    fn triangle_sections_match_sampling() {
        let t = triangle_diagram();
        let s = std::f64::consts::SQRT_2;
        assert_eq!(project_y(&t, &0.0, &3.0).intervals(), &[(s, 3.0)]);
        assert_eq!(project_x(&t, &2.0, &3.0).intervals(), &[(0.0, 0.0)]);
        for x in [0.2, 0.5, 0.7, 1.0, 1.3, 1.5] {
            let (lo, hi) = project_y(&t, &x, &3.0).intervals()[0];
            let (slo, shi) = sampled_section(&t, x);
            assert!((lo - slo).abs() < 1e-3 && (hi - shi).abs() < 1e-3, "{x}");
        }
    }

    #[test]
    fn hausdorff_examples() {
        let a = ProjectionSet::point(r(0));
        assert_eq!(hausdorff(&a, &a), r(0));
        let a = ProjectionSet::interval(r(0), r(1)).unwrap();
        let b = ProjectionSet::point(r(2));
        assert_eq!(hausdorff(&a, &b), r(2));
        assert_eq!(hausdorff(&b, &a), r(2));
        let gap = ProjectionSet::new(vec![(r(0), r(0)), (r(4), r(4))]).unwrap();
        let full = ProjectionSet::interval(r(0), r(4)).unwrap();
        assert_eq!(hausdorff(&gap, &full), r(2));
    }

    #[test]
    fn projection_set_validation() {
        assert_eq!(ProjectionSet::<f64>::new(vec![]), Err(MetricError::Empty));
        assert_eq!(
            ProjectionSet::new(vec![(0.0, 2.0), (1.0, 3.0)]),
            Err(MetricError::Malformed)
        );
        assert_eq!(
            ProjectionSet::new(vec![(2.0, 1.0)]),
            Err(MetricError::Malformed)
        );
    }

    #[test]
    fn distance_examples() {
        let e = PiecewiseLinearDiagram::<Rat>::abs_value();
        let one = profile(&[1]);
        assert_eq!(distance(&one, &one), r(0));
        assert_eq!(distance(&e, &one), r(1));
        assert_eq!(distance_components(&e, &one), (r(1), r(1)));
        assert_eq!(distance(&profile(&[3]), &profile(&[1, 1, 1])), r(2));
    }

    #[test]
    fn distance_swaps_under_transpose() {
        let a = profile(&[4, 1]);
        let b = profile(&[2, 2, 1]);
        let (dx, dy) = distance_components(&a, &b);
        let (tx, ty) = distance_components(&a.transpose(), &b.transpose());
        assert_eq!((dx, dy), (ty, tx));
    }
}
