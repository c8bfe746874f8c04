//! Young diagrams, zigzags and continual diagrams.
//!
//! Diagrams are drawn in Russian coordinates `u = x - y`, `v = x + y`, where
//! `(x, y)` are the French (Cartesian) coordinates of the box picture. The
//! profile of a diagram is a 1-Lipschitz function `v = ω(u)` that equals `|u|`
//! away from a compact set.

use serde::{Deserialize, Serialize};

use crate::error::DiagramError;
use crate::scalar::Scalar;

/// An integer partition `λ_1 ≥ λ_2 ≥ … ≥ λ_ℓ ≥ 1`, rows counted from the bottom.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    rows: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = DiagramError;

    fn try_from(rows: Vec<usize>) -> Result<Self, Self::Error> {
        Partition::new(rows)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.rows
    }
}

impl Partition {
    pub fn new(rows: Vec<usize>) -> Result<Self, DiagramError> {
        let decreasing = rows.windows(2).all(|w| w[0] >= w[1]);
        if !decreasing || rows.contains(&0) {
            return Err(DiagramError::InvalidPartition(rows));
        }
        Ok(Partition { rows })
    }

    pub fn empty() -> Self {
        Partition { rows: Vec::new() }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn row(&self, j: usize) -> usize {
        self.rows.get(j).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.row(0);
        let rows = (1..=width)
            .map(|i| self.rows.iter().take_while(|&&r| r >= i).count())
            .collect();
        Partition { rows }
    }

    /// Zero-based row indices at the end of which a box can be added.
    pub fn addable_rows(&self) -> Vec<usize> {
        (0..=self.rows.len())
            .filter(|&j| j == 0 || self.row(j - 1) > self.row(j))
            .collect()
    }

    /// Zero-based row indices whose last box can be removed.
    pub fn removable_rows(&self) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&j| self.row(j) > self.row(j + 1))
            .collect()
    }

    /// Content (column minus row) of the box that would be added to row `j`.
    pub fn addable_content(&self, j: usize) -> i64 {
        self.row(j) as i64 - j as i64
    }

    /// Content of the last box of row `j`.
    pub fn removable_content(&self, j: usize) -> i64 {
        self.row(j) as i64 - 1 - j as i64
    }

    pub fn with_box_added(&self, j: usize) -> Option<Partition> {
        if j > self.rows.len() || (j > 0 && self.row(j - 1) <= self.row(j)) {
            return None;
        }
        let mut rows = self.rows.clone();
        if j == rows.len() {
            rows.push(1);
        } else {
            rows[j] += 1;
        }
        Some(Partition { rows })
    }

    pub fn with_box_removed(&self, j: usize) -> Option<Partition> {
        if j >= self.rows.len() || self.row(j) <= self.row(j + 1) {
            return None;
        }
        let mut rows = self.rows.clone();
        rows[j] -= 1;
        if rows[j] == 0 {
            rows.pop();
        }
        Some(Partition { rows })
    }

    /// Contents of the addable boxes, increasing. These are the concave
    /// corners of the profile.
    pub fn addable_contents(&self) -> Vec<i64> {
        let mut c: Vec<i64> = self
            .addable_rows()
            .into_iter()
            .map(|j| self.addable_content(j))
            .collect();
        c.reverse();
        c
    }

    /// Contents of the removable boxes, increasing. These are the convex
    /// corners of the profile.
    pub fn removable_contents(&self) -> Vec<i64> {
        let mut c: Vec<i64> = self
            .removable_rows()
            .into_iter()
            .map(|j| self.removable_content(j))
            .collect();
        c.reverse();
        c
    }

    /// Corner data of the profile.
    pub fn zigzag<T: Scalar>(&self) -> Zigzag<T> {
        self.scaled_zigzag(1)
    }

    /// Corner data of the profile of the diagram drawn with boxes of side `1/q`.
    pub fn scaled_zigzag<T: Scalar>(&self, q: usize) -> Zigzag<T> {
        let q = T::from_usize(q);
        let conv = |c: i64| T::from_i64(c) / q.clone();
        Zigzag {
            concave: self.addable_contents().into_iter().map(conv).collect(),
            convex: self.removable_contents().into_iter().map(conv).collect(),
        }
    }

    pub fn profile<T: Scalar>(&self) -> PiecewiseLinearDiagram<T> {
        self.zigzag::<T>().to_piecewise()
    }

    pub fn scaled_profile<T: Scalar>(&self, q: usize) -> PiecewiseLinearDiagram<T> {
        self.scaled_zigzag::<T>(q).to_piecewise()
    }

    /// Hook lengths of all boxes, row by row.
    pub fn hooks(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size());
        for (j, &len) in self.rows.iter().enumerate() {
            for i in 0..len {
                let arm = len - i - 1;
                let leg = conj.rows[i] - j - 1;
                out.push(arm + leg + 1);
            }
        }
        out
    }
}

/// Profile corners of a Young diagram with `n` boxes.
pub fn profile_of_partition<T: Scalar>(p: &Partition) -> Zigzag<T> {
    p.zigzag()
}

/// The staircase `(N, N-1, …, 1)`; `N = 0` gives the empty partition.
pub fn staircase(n: usize) -> Partition {
    Partition {
        rows: (1..=n).rev().collect(),
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition {
                rows: prefix.clone(),
            });
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Corner data of a zigzag diagram: concave corners `x_0 < … < x_L` and
/// convex corners `y_1 < … < y_L`, strictly interlacing and centered
/// (`Σ x_i = Σ y_j`).
#[derive(Clone, Debug, PartialEq)]
pub struct Zigzag<T> {
    concave: Vec<T>,
    convex: Vec<T>,
}

impl<T: Scalar> Zigzag<T> {
    pub fn new(concave: Vec<T>, convex: Vec<T>) -> Result<Self, DiagramError> {
        if concave.len() != convex.len() + 1 {
            return Err(DiagramError::CornerCount {
                concave: concave.len(),
                convex: convex.len(),
                expected: concave.len().saturating_sub(1),
            });
        }
        for (k, y) in convex.iter().enumerate() {
            if !(concave[k] < *y && *y < concave[k + 1]) {
                return Err(DiagramError::NotInterlacing);
            }
        }
        let sx = concave.iter().fold(T::zero(), |a, b| a + b.clone());
        let sy = convex.iter().fold(T::zero(), |a, b| a + b.clone());
        if !sx.approx_eq(&sy) {
            return Err(DiagramError::NotCentered {
                concave: sx.to_string(),
                convex: sy.to_string(),
            });
        }
        Ok(Zigzag { concave, convex })
    }

    /// The profile `v = |u|` of the empty diagram.
    pub fn empty() -> Self {
        Zigzag {
            concave: vec![T::zero()],
            convex: Vec::new(),
        }
    }

    pub fn concave(&self) -> &[T] {
        &self.concave
    }

    pub fn convex(&self) -> &[T] {
        &self.convex
    }

    /// Number of convex corners `L`.
    pub fn num_convex(&self) -> usize {
        self.convex.len()
    }

    /// Breakpoints `(x_0, |x_0|), (y_1, ·), (x_1, ·), …, (x_L, |x_L|)` of the
    /// slope ±1 profile.
    pub fn to_piecewise(&self) -> PiecewiseLinearDiagram<T> {
        let mut pts = Vec::with_capacity(2 * self.concave.len());
        let mut v = -self.concave[0].clone();
        pts.push((self.concave[0].clone(), v.clone()));
        for (k, y) in self.convex.iter().enumerate() {
            v = v + (y.clone() - self.concave[k].clone());
            pts.push((y.clone(), v.clone()));
            let x = &self.concave[k + 1];
            v = v - (x.clone() - y.clone());
            pts.push((x.clone(), v.clone()));
        }
        PiecewiseLinearDiagram::new(pts).expect("centered interlacing corners form a diagram")
    }

    /// Corners of the transposed diagram `u ↦ ω(-u)`.
    pub fn transpose(&self) -> Self {
        Zigzag {
            concave: self.concave.iter().rev().map(|x| -x.clone()).collect(),
            convex: self.convex.iter().rev().map(|y| -y.clone()).collect(),
        }
    }

    pub fn to_f64(&self) -> Zigzag<f64> {
        Zigzag {
            concave: self.concave.iter().map(Scalar::to_f64).collect(),
            convex: self.convex.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// A continual diagram given by breakpoints in Russian coordinates, extended by
/// `v = |u|` outside `[u_first, u_last]`.
///
/// The stored breakpoints are canonical: consecutive collinear points are
/// merged, end segments that coincide with `|u|` are dropped, and
/// `u_first ≤ 0 ≤ u_last`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinearDiagram<T> {
    points: Vec<(T, T)>,
}

fn slope<T: Scalar>(a: &(T, T), b: &(T, T)) -> T {
    (b.1.clone() - a.1.clone()) / (b.0.clone() - a.0.clone())
}

impl<T: Scalar> PiecewiseLinearDiagram<T> {
    pub fn new(points: Vec<(T, T)>) -> Result<Self, DiagramError> {
        if points.is_empty() {
            return Err(DiagramError::NoBreakpoints);
        }
        let mut pts: Vec<(T, T)> = Vec::with_capacity(points.len() + 2);
        for (i, (u, v)) in points.into_iter().enumerate() {
            if let Some((pu, pv)) = pts.last() {
                if u.approx_eq(pu) {
                    if !v.approx_eq(pv) {
                        return Err(DiagramError::SlopeOutOfRange(i - 1));
                    }
                    continue;
                }
                if u < *pu {
                    return Err(DiagramError::UnorderedBreakpoints(i));
                }
            }
            pts.push((u, v));
        }

        let first = pts.first().expect("nonempty");
        let last = pts.last().expect("nonempty");
        if !first.1.approx_eq(&first.0.abs()) || !last.1.approx_eq(&last.0.abs()) {
            return Err(DiagramError::Boundary);
        }
        for (i, (u, v)) in pts.iter().enumerate() {
            if !u.abs().approx_le(v) {
                return Err(DiagramError::BelowAbsoluteValue(i));
            }
        }
        for (i, w) in pts.windows(2).enumerate() {
            let du = w[1].0.clone() - w[0].0.clone();
            let dv = w[1].1.clone() - w[0].1.clone();
            if !dv.abs().approx_le(&du) {
                return Err(DiagramError::SlopeOutOfRange(i));
            }
        }

        if pts[0].0 > T::zero() {
            pts.insert(0, (T::zero(), T::zero()));
        }
        if pts[pts.len() - 1].0 < T::zero() {
            pts.push((T::zero(), T::zero()));
        }

        let mut merged: Vec<(T, T)> = Vec::with_capacity(pts.len());
        for p in pts {
            while merged.len() >= 2 {
                let n = merged.len();
                let s1 = slope(&merged[n - 2], &merged[n - 1]);
                let s2 = slope(&merged[n - 1], &p);
                if s1.approx_eq(&s2) {
                    merged.pop();
                } else {
                    break;
                }
            }
            merged.push(p);
        }

        let one = T::one();
        while merged.len() >= 2
            && slope(&merged[0], &merged[1]).approx_eq(&-one.clone())
            && merged[1].0.approx_le(&T::zero())
        {
            merged.remove(0);
        }
        while merged.len() >= 2 {
            let n = merged.len();
            if slope(&merged[n - 2], &merged[n - 1]).approx_eq(&one)
                && T::zero().approx_le(&merged[n - 2].0)
            {
                merged.pop();
            } else {
                break;
            }
        }
        // snap the boundary onto |u| so the extension is exactly continuous
        let n = merged.len();
        merged[0].1 = merged[0].0.abs();
        merged[n - 1].1 = merged[n - 1].0.abs();

        Ok(PiecewiseLinearDiagram { points: merged })
    }

    /// `v = |u|`, the empty diagram.
    pub fn abs_value() -> Self {
        PiecewiseLinearDiagram {
            points: vec![(T::zero(), T::zero())],
        }
    }

    pub fn breakpoints(&self) -> &[(T, T)] {
        &self.points
    }

    pub fn evaluate(&self, u: &T) -> T {
        let first = &self.points[0];
        let last = &self.points[self.points.len() - 1];
        if *u <= first.0 || *u >= last.0 {
            return u.abs();
        }
        let k = self.points.partition_point(|p| p.0 <= *u);
        let (u0, v0) = &self.points[k - 1];
        let (u1, v1) = &self.points[k];
        v0.clone()
            + (v1.clone() - v0.clone()) * (u.clone() - u0.clone()) / (u1.clone() - u0.clone())
    }

    /// `u ↦ (1/c)·ω(c·u)`.
    pub fn rescale(&self, c: &T) -> Result<Self, DiagramError> {
        if *c <= T::zero() {
            return Err(DiagramError::NonPositiveScale);
        }
        Ok(PiecewiseLinearDiagram {
            points: self
                .points
                .iter()
                .map(|(u, v)| (u.clone() / c.clone(), v.clone() / c.clone()))
                .collect(),
        })
    }

    /// `u ↦ ω(-u)`.
    pub fn transpose(&self) -> Self {
        PiecewiseLinearDiagram {
            points: self
                .points
                .iter()
                .rev()
                .map(|(u, v)| (-u.clone(), v.clone()))
                .collect(),
        }
    }

    /// Slopes of the stored segments, left to right.
    pub fn slopes(&self) -> Vec<T> {
        self.points
            .windows(2)
            .map(|w| slope(&w[0], &w[1]))
            .collect()
    }

    /// `[u_first, u_last]`; the diagram equals `|u|` outside.
    pub fn support(&self) -> (T, T) {
        (
            self.points[0].0.clone(),
            self.points[self.points.len() - 1].0.clone(),
        )
    }

    /// Smallest `C ≥ 0` with `ω(u) = |u|` for `|u| ≥ C`.
    pub fn support_bound(&self) -> T {
        let (lo, hi) = self.support();
        T::max_of(-lo, hi)
    }

    /// Recovers the corner data when every slope is ±1.
    pub fn as_zigzag(&self) -> Option<Zigzag<T>> {
        let one = T::one();
        let mut slopes = vec![-one.clone()];
        slopes.extend(self.slopes());
        slopes.push(one.clone());
        if !slopes
            .iter()
            .all(|s| s.approx_eq(&one) || s.approx_eq(&-one.clone()))
        {
            return None;
        }
        let mut concave = Vec::new();
        let mut convex = Vec::new();
        for (k, (u, _)) in self.points.iter().enumerate() {
            let rising_left = slopes[k] > T::zero();
            let rising_right = slopes[k + 1] > T::zero();
            match (rising_left, rising_right) {
                (false, true) => concave.push(u.clone()),
                (true, false) => convex.push(u.clone()),
                _ => {}
            }
        }
        Zigzag::new(concave, convex).ok()
    }

    pub fn is_zigzag(&self) -> bool {
        self.as_zigzag().is_some()
    }

    /// Largest `|slope|` of the diagram over `[a, b]` (the `|u|` extension
    /// counts as slope 1).
    pub fn max_abs_slope_on(&self, a: &T, b: &T) -> T {
        let (lo, hi) = self.support();
        let mut best = T::zero();
        if *a < lo || *b > hi {
            best = T::one();
        }
        for w in self.points.windows(2) {
            if w[1].0 > *a && w[0].0 < *b {
                best = T::max_of(best, slope(&w[0], &w[1]).abs());
            }
        }
        best
    }

    pub fn to_f64(&self) -> PiecewiseLinearDiagram<f64> {
        PiecewiseLinearDiagram {
            points: self
                .points
                .iter()
                .map(|(u, v)| (u.to_f64(), v.to_f64()))
                .collect(),
        }
    }
}

/// The triangle diagram: `√2` on `[-√2, √2]`, `|u|` outside.
pub fn triangle_diagram() -> PiecewiseLinearDiagram<f64> {
    let r = std::f64::consts::SQRT_2;
    PiecewiseLinearDiagram::new(vec![(-r, r), (r, r)]).expect("triangle is a diagram")
}

/// The affine function `f(z) = z + b` with `b > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineLine<T> {
    intercept: T,
}

impl<T: Scalar> AffineLine<T> {
    pub fn new(intercept: T) -> Result<Self, DiagramError> {
        if intercept <= T::zero() {
            return Err(DiagramError::NonPositiveIntercept);
        }
        Ok(AffineLine { intercept })
    }

    pub fn intercept(&self) -> &T {
        &self.intercept
    }

    pub fn eval(&self, z: &T) -> T {
        z.clone() + self.intercept.clone()
    }
}
