//! Inner zigzag approximations of continual diagrams and the resulting
//! estimates of the cumulative function of the transition measure.

use rayon::prelude::*;
use serde::Serialize;

use crate::diagrams::{Partition, PiecewiseLinearDiagram};
use crate::error::ApproximationError;
use crate::scalar::{Rat, Scalar};
use crate::transition::transition_measure;

/// The largest partition whose profile, drawn with boxes of side `1/n`, lies
/// below `d`. The box in column `i`, row `j` (both from 1) is kept iff its top
/// vertex `((i - j)/n, (i + j)/n)` lies on or below the graph of `d`.
pub fn inner_partition<T: Scalar>(d: &PiecewiseLinearDiagram<T>, n: usize) -> Partition {
    assert!(n >= 1, "resolution must be positive");
    let nt = T::from_usize(n);
    let fits = |i: usize, j: usize| {
        let u = T::from_i64(i as i64 - j as i64) / nt.clone();
        let v = T::from_usize(i + j) / nt.clone();
        v <= d.evaluate(&u)
    };
    let height = d
        .breakpoints()
        .iter()
        .fold(T::zero(), |a, (_, v)| T::max_of(a, v.clone()));
    let mut width = (height.to_f64() * n as f64).ceil() as usize + 1;
    let mut rows = Vec::new();
    for j in 1.. {
        while width > 0 && !fits(width, j) {
            width -= 1;
        }
        if width == 0 {
            break;
        }
        rows.push(width);
    }
    Partition::new(rows).expect("rows shrink monotonically")
}

/// A value of a cumulative function together with an estimated error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CdfEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub resolution: usize,
    /// `false` when the successive differences along the resolution ladder
    /// grow instead of shrinking.
    pub converging: bool,
    /// Values at `n_max/4, n_max/2, n_max`.
    pub ladder: Vec<(usize, f64)>,
}

fn cdf_at_resolution<T: Scalar>(d: &PiecewiseLinearDiagram<T>, t: &T, n: usize) -> f64 {
    let lambda = inner_partition(d, n);
    let measure = transition_measure(&lambda.zigzag::<Rat>());
    let scaled_t = t.clone() * T::from_usize(n);
    measure
        .atoms()
        .iter()
        .filter(|(x, _)| T::from_rat(x) <= scaled_t)
        .map(|(_, w)| w.to_f64())
        .sum::<f64>()
        .clamp(0.0, 1.0)
}

/// Estimates `μ_d((-∞, t])` from the transition measures of
/// `inner_partition(d, n)` for `n = n_max/4, n_max/2, n_max`.
///
/// The error bound is the largest successive difference plus `2/n_max`,
/// capped so that `value ± error_bound` stays inside `[0, 1]`. It is an
/// estimate, not a proven bound.
pub fn cdf_continual<T: Scalar>(
    d: &PiecewiseLinearDiagram<T>,
    t: &T,
    n_max: usize,
) -> Result<CdfEstimate, ApproximationError> {
    if n_max < 4 {
        return Err(ApproximationError::ResolutionTooSmall(n_max));
    }
    let (lo, hi) = d.support();
    if *t < lo || *t >= hi {
        let value = if *t < lo { 0.0 } else { 1.0 };
        return Ok(CdfEstimate {
            value,
            error_bound: 0.0,
            resolution: n_max,
            converging: true,
            ladder: Vec::new(),
        });
    }
    let resolutions = [n_max / 4, n_max / 2, n_max];
    let values: Vec<f64> = resolutions
        .par_iter()
        .map(|&n| cdf_at_resolution(d, t, n))
        .collect();
    let d1 = (values[1] - values[0]).abs();
    let d2 = (values[2] - values[1]).abs();
    let value = values[2];
    let raw = d1.max(d2) + 2.0 / n_max as f64;
    Ok(CdfEstimate {
        value,
        error_bound: raw.min(value).min(1.0 - value).max(0.0),
        resolution: n_max,
        converging: d2 <= d1,
        ladder: resolutions.iter().copied().zip(values).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{staircase, triangle_diagram};
    use crate::scalar::ratio;
    use crate::transition::arcsine_cdf;

    #[test]
    fn integer_zigzag_is_its_own_inner_partition() {
        let d = staircase(3).profile::<Rat>();
        assert_eq!(inner_partition(&d, 1), staircase(3));
        assert_eq!(inner_partition(&d, 2).size(), 4 * staircase(3).size());
    }

    #[test]
    fn abs_value_gives_empty_partition() {
        let d = PiecewiseLinearDiagram::<f64>::abs_value();
        assert!(inner_partition(&d, 16).is_empty());
    }

    #[test]
    fn triangle_at_unit_resolution_matches_scan() {
        // the smallest top vertex has height 2 > sqrt 2
        assert!(inner_partition(&triangle_diagram(), 1).is_empty());
        let d = triangle_diagram();
        let n = 5;
        let s = std::f64::consts::SQRT_2;
        let mut rows = Vec::new();
        for j in 1..20usize {
            let len = (1..20usize)
                .filter(|&i| {
                    let u = (i as f64 - j as f64) / n as f64;
                    let v = (i + j) as f64 / n as f64;
                    let top = if u.abs() < s { s } else { u.abs() };
                    v <= top
                })
                .count();
            if len == 0 {
                break;
            }
            rows.push(len);
        }
        assert_eq!(inner_partition(&d, n).rows(), &rows[..]);
    }

    #[test]
    fn rejects_small_resolution() {
        let d = triangle_diagram();
        assert_eq!(
            cdf_continual(&d, &0.0, 2),
            Err(ApproximationError::ResolutionTooSmall(2))
        );
    }

    #[test]
    fn outside_support_is_exact() {
        let d = staircase(5)
            .profile::<f64>()
            .rescale(&15f64.sqrt())
            .unwrap();
        let e = cdf_continual(&d, &10.0, 16).unwrap();
        assert_eq!((e.value, e.error_bound), (1.0, 0.0));
        let e = cdf_continual(&d, &-10.0, 16).unwrap();
        assert_eq!((e.value, e.error_bound), (0.0, 0.0));
    }

    #[test]
    fn triangle_estimates() {
        let d = triangle_diagram();
        let half = cdf_continual(&d, &0.0, 256).unwrap();
        assert!(
            (half.value - 0.5).abs() <= half.error_bound + 1e-12,
            "{half:?}"
        );
        let e = cdf_continual(&d, &1.0, 256).unwrap();
        assert!((e.value - arcsine_cdf(1.0)).abs() <= e.error_bound, "{e:?}");
        assert!(e.value - e.error_bound >= -1e-12 && e.value + e.error_bound <= 1.0 + 1e-12);
    }

    #[test]
    fn grid_zigzag_reproduces_exact_cdf() {
        let p = Partition::new(vec![4, 2, 2, 2]).unwrap();
        let d = p.scaled_profile::<Rat>(2);
        let m = transition_measure(&p.zigzag::<Rat>());
        // t = 1/4 sits between atoms at contents 0 and 1 (locations 0, 1/2)
        let e = cdf_continual(&d, &ratio(1, 4), 8).unwrap();
        assert_eq!(e.value, m.cdf(&ratio(1, 2)).to_f64());
        assert!(e.ladder.iter().all(|(_, v)| *v == e.value));
    }
}
