//! Numerical experiments: convergence of staircases to the triangle, and
//! randomized checks of the cumulative-function bounds.

use std::fmt::Write as _;
use std::ops::Bound;

use rand::prelude::*;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::approximation::inner_partition;
use crate::diagrams::{staircase, triangle_diagram, Partition, PiecewiseLinearDiagram};
use crate::error::ExperimentError;
use crate::metric::distance;
use crate::scalar::{Rat, Scalar};
use crate::shift::{
    lower_bound_from_law, lower_bound_from_measure, reference_measure, upper_bound_from_law,
    upper_bound_from_measure, z_minus_min, z_plus_max,
};
use crate::transition::{arcsine_cdf, transition_measure, AtomicMeasure, TransitionLaw};

/// Formats a float with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row of the staircase convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    /// Staircase order `N`.
    pub order: usize,
    /// Number of boxes `N(N+1)/2`.
    pub boxes: usize,
    /// `sup |K_{ω_n} - K_Ω|` over the evaluation points in `[a0, b0]`.
    pub sup_error: f64,
    /// `N · sup_error`.
    pub scaled_error: f64,
    /// Largest atom of the rescaled staircase measure inside `(a0, b0)`.
    pub largest_atom: f64,
}

fn check_interval(a0: f64, b0: f64) -> Result<(), ExperimentError> {
    let s = std::f64::consts::SQRT_2;
    if !(-s < a0 && a0 < b0 && b0 < s) {
        return Err(ExperimentError::IntervalOutsideSupport(a0, b0));
    }
    Ok(())
}

/// Transition measure of the staircase of order `N` resized to unit area
/// (coordinates divided by `√n`), with locations as floats.
pub fn rescaled_staircase_measure(order: usize) -> AtomicMeasure<f64> {
    let n = order * (order + 1) / 2;
    let scale = (n.max(1) as f64).sqrt();
    let exact = transition_measure(&staircase(order).zigzag::<Rat>());
    let atoms = exact
        .atoms()
        .iter()
        .map(|(x, w)| (x.to_f64() / scale, w.to_f64()))
        .collect();
    AtomicMeasure::new(atoms).expect("rescaled measure")
}

fn staircase_row(order: usize, a0: f64, b0: f64, grid_points: usize) -> ExperimentRow {
    let mu = rescaled_staircase_measure(order);
    let mut points: Vec<f64> = (0..grid_points)
        .map(|k| a0 + (b0 - a0) * k as f64 / (grid_points - 1) as f64)
        .collect();
    points.extend(
        mu.atoms()
            .iter()
            .map(|a| a.0)
            .filter(|&x| a0 <= x && x <= b0),
    );
    let sup_error = points
        .iter()
        .map(|&z| {
            let k = arcsine_cdf(z);
            (mu.cdf(&z) - k)
                .abs()
                .max((mu.cdf_left_limit(&z) - k).abs())
        })
        .fold(0.0, f64::max);
    let largest_atom = mu
        .atoms()
        .iter()
        .filter(|a| a0 < a.0 && a.0 < b0)
        .map(|a| a.1)
        .fold(0.0, f64::max);
    ExperimentRow {
        order,
        boxes: order * (order + 1) / 2,
        sup_error,
        scaled_error: order as f64 * sup_error,
        largest_atom,
    }
}

/// Distance in the uniform norm on `[a0, b0]` between the cumulative functions
/// of resized staircases and of the arcsine law. The supremum is taken over a
/// uniform grid together with all atoms in the interval, where a step
/// function minus a continuous one attains its extremes.
pub fn staircase_rate_table(
    orders: &[usize],
    a0: f64,
    b0: f64,
    grid_points: usize,
) -> Result<Vec<ExperimentRow>, ExperimentError> {
    check_interval(a0, b0)?;
    if grid_points < 100 {
        return Err(ExperimentError::GridTooCoarse(grid_points));
    }
    Ok(orders
        .par_iter()
        .map(|&order| staircase_row(order, a0, b0, grid_points))
        .collect())
}

pub fn staircase_rate_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from("N,n,sup_error,scaled_error,largest_atom\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.order,
            r.boxes,
            fmt_float(r.sup_error),
            fmt_float(r.scaled_error),
            fmt_float(r.largest_atom)
        );
    }
    out
}

/// Distance between a resized staircase and the triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricRow {
    pub order: usize,
    pub distance: f64,
    pub scaled_distance: f64,
}

/// Profile of the staircase of order `N` resized to unit area.
pub fn rescaled_staircase_profile(order: usize) -> PiecewiseLinearDiagram<f64> {
    let n = order * (order + 1) / 2;
    staircase(order)
        .profile::<f64>()
        .rescale(&(n.max(1) as f64).sqrt())
        .expect("positive scale")
}

pub fn metric_rate_table(orders: &[usize]) -> Vec<MetricRow> {
    let triangle = triangle_diagram();
    orders
        .par_iter()
        .map(|&order| {
            let d = distance(&rescaled_staircase_profile(order), &triangle);
            MetricRow {
                order,
                distance: d,
                scaled_distance: order as f64 * d,
            }
        })
        .collect()
}

pub fn metric_rate_csv(rows: &[MetricRow]) -> String {
    let mut out = String::from("N,distance,scaled_distance\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            r.order,
            fmt_float(r.distance),
            fmt_float(r.scaled_distance)
        );
    }
    out
}

/// Random zigzags with boxes of side `1/q` inside the closed `ε`-ball around a
/// diagram, produced by a random walk of single-box moves started at the
/// inner approximation and rejecting moves that leave the ball.
pub struct BallSampler<'a, T> {
    omega: &'a PiecewiseLinearDiagram<T>,
    epsilon: T,
    q: usize,
    start: Partition,
}

impl<'a, T: Scalar> BallSampler<'a, T> {
    /// With `q = None` the box side is the largest power `1/2^k` for which the
    /// inner approximation lies in the ball.
    pub fn new(
        omega: &'a PiecewiseLinearDiagram<T>,
        epsilon: T,
        q: Option<usize>,
    ) -> Result<Self, ExperimentError> {
        let candidates: Vec<usize> = match q {
            Some(q) => vec![q],
            None => (0..12).map(|k| 1usize << k).collect(),
        };
        for q in candidates {
            let start = inner_partition(omega, q);
            if distance(&start.scaled_profile::<T>(q), omega) <= epsilon {
                return Ok(BallSampler {
                    omega,
                    epsilon,
                    q,
                    start,
                });
            }
        }
        Err(ExperimentError::NoStartingDiagram(epsilon.to_f64()))
    }

    pub fn resolution(&self) -> usize {
        self.q
    }

    pub fn start(&self) -> &Partition {
        &self.start
    }

    fn inside(&self, p: &Partition) -> bool {
        distance(&p.scaled_profile::<T>(self.q), self.omega) <= self.epsilon
    }

    pub fn sample<R: Rng>(&self, rng: &mut R, steps: usize) -> Partition {
        let mut current = self.start.clone();
        for _ in 0..steps {
            let adds = current.addable_rows();
            let removes = current.removable_rows();
            let k = rng.random_range(0..adds.len() + removes.len());
            let candidate = if k < adds.len() {
                current.with_box_added(adds[k])
            } else {
                current.with_box_removed(removes[k - adds.len()])
            }
            .expect("legal move");
            if self.inside(&candidate) {
                current = candidate;
            }
        }
        current
    }
}

/// Hypotheses on the reference diagram on `[a, b] ⊃ [a0, b0]`: contraction
/// (slope bounded by `1 - δ`) and a density cap `ρ_max` of its transition
/// measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypotheses {
    pub a: f64,
    pub b: f64,
    pub a0: f64,
    pub b0: f64,
    pub rho_max: f64,
}

impl Hypotheses {
    /// The triangle on `[-1.2, 1.2] ⊃ [-1, 1]`, where the arcsine density is
    /// at most `1/(π √(2 - 1.44))`.
    pub fn triangle() -> Self {
        Hypotheses {
            a: -1.2,
            b: 1.2,
            a0: -1.0,
            b0: 1.0,
            rho_max: 1.0 / (std::f64::consts::PI * (2.0f64 - 1.44).sqrt()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig<T> {
    pub epsilons: Vec<T>,
    /// Samples per value of `ε`.
    pub samples: usize,
    pub walk_steps: usize,
    pub z0_grid: Vec<T>,
    pub seed: u64,
    /// Box side `1/q` of the sampled diagrams; `None` picks a power of two.
    pub resolution: Option<usize>,
    /// Tolerance on violations; zero for exact references.
    pub slack: f64,
    pub hypotheses: Option<Hypotheses>,
    /// Resolution of the inner approximation used when `Ω` is not a zigzag
    /// and no law is supplied.
    pub n_max: usize,
}

/// Aggregated results for one `(ε, z0)` pair.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub z0: f64,
    pub samples: usize,
    pub resolution: usize,
    pub z_plus_max: Option<f64>,
    pub z_minus_min: Option<f64>,
    pub upper_bound: Option<f64>,
    pub lower_bound: Option<f64>,
    pub reference_cdf: f64,
    pub violations_upper: usize,
    pub violations_lower: usize,
    /// `min (upper - K_ω(z0⁻))` over samples.
    pub min_margin_upper: Option<f64>,
    /// `min (K_ω(z0) - lower)` over samples.
    pub min_margin_lower: Option<f64>,
    pub excess_upper: Option<f64>,
    pub excess_lower: Option<f64>,
    /// `max(excess) / (ε log(1/ε))`.
    pub envelope_ratio: Option<f64>,
    /// `(μ((z0, z* - ε)), ε∫_{[z*-ε, b)}, ε∫_{[b, ∞)})` of the upper excess.
    pub terms: Option<[f64; 3]>,
    /// The caps `ρ(2ε/δ - ε)`, `ερ log((b + 2ε - z*)/ε)`, `ε/(b + 2ε - z*)`.
    pub caps: Option<[f64; 3]>,
    pub delta: Option<f64>,
}

impl SweepRow {
    pub fn violations(&self) -> usize {
        self.violations_upper + self.violations_lower
    }
}

pub const SWEEP_CSV_HEADER: &str = "epsilon,z0,samples,resolution,z_plus_max,z_minus_min,\
upper_bound,lower_bound,reference_cdf,violations_upper,violations_lower,min_margin_upper,\
min_margin_lower,excess_upper,excess_lower,envelope_ratio,term_first,term_middle,term_tail,\
cap_first,cap_middle,cap_tail,delta";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let opt = |x: Option<f64>| x.map(fmt_float).unwrap_or_default();
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let terms = r.terms.map(|t| t.map(Some)).unwrap_or([None; 3]);
        let caps = r.caps.map(|t| t.map(Some)).unwrap_or([None; 3]);
        let fields = [
            fmt_float(r.epsilon),
            fmt_float(r.z0),
            r.samples.to_string(),
            r.resolution.to_string(),
            opt(r.z_plus_max),
            opt(r.z_minus_min),
            opt(r.upper_bound),
            opt(r.lower_bound),
            fmt_float(r.reference_cdf),
            r.violations_upper.to_string(),
            r.violations_lower.to_string(),
            opt(r.min_margin_upper),
            opt(r.min_margin_lower),
            opt(r.excess_upper),
            opt(r.excess_lower),
            opt(r.envelope_ratio),
            opt(terms[0]),
            opt(terms[1]),
            opt(terms[2]),
            opt(caps[0]),
            opt(caps[1]),
            opt(caps[2]),
            opt(r.delta),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

enum Reference<'a, T> {
    Exact(AtomicMeasure<T>),
    Law(&'a dyn TransitionLaw),
}

impl<T: Scalar> Reference<'_, T> {
    fn as_law(&self) -> &dyn TransitionLaw {
        match self {
            Reference::Exact(mu) => mu,
            Reference::Law(law) => *law,
        }
    }

    fn cdf(&self, z0: &T) -> Rat {
        match self {
            Reference::Exact(mu) => mu.cdf(z0).to_rat(),
            Reference::Law(law) => law.cdf(z0.to_f64()).to_rat(),
        }
    }

    fn upper(&self, z_star: &T, eps: &T) -> Rat {
        match self {
            Reference::Exact(mu) => upper_bound_from_measure(mu, z_star, eps).to_rat(),
            Reference::Law(law) => {
                upper_bound_from_law(*law, z_star.to_f64(), eps.to_f64()).to_rat()
            }
        }
    }

    fn lower(&self, z_star: &T, eps: &T) -> Rat {
        match self {
            Reference::Exact(mu) => lower_bound_from_measure(mu, z_star, eps).to_rat(),
            Reference::Law(law) => {
                lower_bound_from_law(*law, z_star.to_f64(), eps.to_f64()).to_rat()
            }
        }
    }
}

fn validate_hypotheses<T: Scalar>(
    omega: &PiecewiseLinearDiagram<T>,
    h: &Hypotheses,
    z0_grid: &[T],
) -> Result<f64, ExperimentError> {
    if !(h.a < h.a0 && h.a0 < h.b0 && h.b0 < h.b) {
        return Err(ExperimentError::Hypothesis(format!(
            "need a < a0 < b0 < b, got {} {} {} {}",
            h.a, h.a0, h.b0, h.b
        )));
    }
    let to_t = |x: f64| T::from_rat(&x.to_rat());
    let slope = omega.max_abs_slope_on(&to_t(h.a), &to_t(h.b)).to_f64();
    let delta = 1.0 - slope;
    if delta <= 0.0 {
        return Err(ExperimentError::Hypothesis(format!(
            "diagram is not a contraction on [{}, {}] (max |slope| = {slope})",
            h.a, h.b
        )));
    }
    if let Some(z) = z0_grid
        .iter()
        .map(Scalar::to_f64)
        .find(|z| !(h.a0 <= *z && *z <= h.b0))
    {
        return Err(ExperimentError::Hypothesis(format!(
            "z0 = {z} outside [{}, {}]",
            h.a0, h.b0
        )));
    }
    Ok(delta)
}

/// Left limits and values of `K_ω` at every `z0` of the grid.
fn sampled_cdfs(p: &Partition, q: usize, z0_grid: &[Rat]) -> Vec<(Rat, Rat)> {
    let mu = transition_measure(&p.scaled_zigzag::<Rat>(q));
    z0_grid
        .iter()
        .map(|z| (mu.cdf_left_limit(z), mu.cdf(z)))
        .collect()
}

/// Samples diagrams in `ε`-balls around `Ω` and checks, at every `z0` of the
/// grid, `lower ≤ K_ω(z0)` and `K_ω(z0⁻) ≤ upper`, reporting violations,
/// margins and how the excess of the upper bound over `K_Ω(z0)` splits.
///
/// The reference measure is exact when `Ω` is a zigzag; otherwise `law` is
/// used, falling back to the inner approximation at `config.n_max`.
pub fn theorem_sweep<T: Scalar>(
    omega: &PiecewiseLinearDiagram<T>,
    law: Option<&dyn TransitionLaw>,
    config: &SweepConfig<T>,
) -> Result<Vec<SweepRow>, ExperimentError> {
    let delta = match &config.hypotheses {
        Some(h) => Some(validate_hypotheses(omega, h, &config.z0_grid)?),
        None => None,
    };
    let reference = match (omega.as_zigzag(), law) {
        (Some(zig), _) => Reference::Exact(transition_measure(&zig)),
        (None, Some(law)) => Reference::Law(law),
        (None, None) => Reference::Exact(reference_measure(omega, config.n_max)),
    };
    let z0_rat: Vec<Rat> = config.z0_grid.iter().map(Scalar::to_rat).collect();
    let slack = config.slack.to_rat();

    let mut rows = Vec::new();
    for (e_idx, eps) in config.epsilons.iter().enumerate() {
        let sampler = BallSampler::new(omega, eps.clone(), config.resolution)?;
        let q = sampler.resolution();
        let cdfs: Vec<Vec<(Rat, Rat)>> = (0..config.samples)
            .into_par_iter()
            .map(|s| {
                let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
                rng.set_stream((e_idx * config.samples + s) as u64);
                let p = sampler.sample(&mut rng, config.walk_steps);
                sampled_cdfs(&p, q, &z0_rat)
            })
            .collect();

        for (z_idx, z0) in config.z0_grid.iter().enumerate() {
            let zp = z_plus_max(omega, z0, eps)?;
            let zm = z_minus_min(omega, z0, eps)?;
            let upper = zp.as_ref().map(|z| reference.upper(z, eps));
            let lower = zm.as_ref().map(|z| reference.lower(z, eps));
            let k_ref = reference.cdf(z0);

            let mut row = SweepRow {
                epsilon: eps.to_f64(),
                z0: z0.to_f64(),
                samples: config.samples,
                resolution: q,
                z_plus_max: zp.as_ref().map(Scalar::to_f64),
                z_minus_min: zm.as_ref().map(Scalar::to_f64),
                upper_bound: upper.as_ref().map(Scalar::to_f64),
                lower_bound: lower.as_ref().map(Scalar::to_f64),
                reference_cdf: k_ref.to_f64(),
                violations_upper: 0,
                violations_lower: 0,
                min_margin_upper: None,
                min_margin_lower: None,
                excess_upper: upper.as_ref().map(|u| (u - &k_ref).to_f64()),
                excess_lower: lower.as_ref().map(|l| (&k_ref - l).to_f64()),
                envelope_ratio: None,
                terms: None,
                caps: None,
                delta,
            };
            let mut margin_up: Option<Rat> = None;
            let mut margin_lo: Option<Rat> = None;
            for sample in &cdfs {
                let (left, value) = &sample[z_idx];
                if let Some(u) = &upper {
                    let m = u - left;
                    if m < -slack.clone() {
                        row.violations_upper += 1;
                    }
                    margin_up = Some(margin_up.map_or(m.clone(), |x| x.min(m)));
                }
                if let Some(l) = &lower {
                    let m = value - l;
                    if m < -slack.clone() {
                        row.violations_lower += 1;
                    }
                    margin_lo = Some(margin_lo.map_or(m.clone(), |x| x.min(m)));
                }
            }
            row.min_margin_upper = margin_up.as_ref().map(Scalar::to_f64);
            row.min_margin_lower = margin_lo.as_ref().map(Scalar::to_f64);

            let e = eps.to_f64();
            if e < 1.0 {
                let worst = row
                    .excess_upper
                    .into_iter()
                    .chain(row.excess_lower)
                    .fold(None, |acc: Option<f64>, x| {
                        Some(acc.map_or(x, |a| a.max(x)))
                    });
                row.envelope_ratio = worst.map(|w| w / (e * (1.0 / e).ln()));
            }
            if let (Some(h), Some(d), Some(z)) = (&config.hypotheses, delta, row.z_plus_max) {
                let law = reference.as_law();
                let z_0 = z0.to_f64();
                let first = law.mass(Bound::Excluded(z_0), Bound::Excluded(z - e));
                let kernel = |t: f64| e / (t + 2.0 * e - z);
                let middle = law.integrate(Bound::Included(z - e), Bound::Excluded(h.b), &kernel);
                let tail = law.integrate(Bound::Included(h.b), Bound::Unbounded, &kernel);
                row.terms = Some([first, middle, tail]);
                let span = h.b + 2.0 * e - z;
                row.caps = Some([
                    h.rho_max * (2.0 * e / d - e),
                    e * h.rho_max * (span / e).ln(),
                    e / span,
                ]);
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// A random pair `(λ¹, λ²)` where `λ²` arises from `λ¹` by adding boxes of
/// content `≥ z0 + 1` and removing boxes of content `≤ z0 - 1`, so that the
/// profiles satisfy `ω¹ ≥ ω²` left of `z0` and `ω¹ ≤ ω²` right of it.
#[derive(Clone, Debug, PartialEq)]
pub struct TiltPair {
    pub first: Partition,
    pub second: Partition,
    pub z0: Rat,
}

pub fn random_tilt_pair<R: Rng>(rng: &mut R, max_size: usize, max_moves: usize) -> TiltPair {
    let mut first = Partition::empty();
    let size = rng.random_range(0..=max_size);
    for _ in 0..size {
        let rows = first.addable_rows();
        let j = rows[rng.random_range(0..rows.len())];
        first = first.with_box_added(j).expect("addable");
    }
    let bound = (first.rows().first().copied().unwrap_or(0) + first.num_rows() + 2) as i64;
    // half-integers land on atoms of neither diagram, integers may
    let z0 = Rat::new(rng.random_range(-2 * bound..=2 * bound).into(), 2.into());
    let mut second = first.clone();
    let moves = rng.random_range(1..=max_moves);
    for _ in 0..moves {
        let mut options: Vec<Partition> = Vec::new();
        for j in second.addable_rows() {
            if Rat::from_i64(second.addable_content(j)) >= &z0 + Rat::from_i64(1) {
                options.push(second.with_box_added(j).expect("addable"));
            }
        }
        for j in second.removable_rows() {
            if Rat::from_i64(second.removable_content(j)) <= &z0 - Rat::from_i64(1) {
                options.push(second.with_box_removed(j).expect("removable"));
            }
        }
        if options.is_empty() {
            break;
        }
        let k = rng.random_range(0..options.len());
        second = options.swap_remove(k);
    }
    TiltPair { first, second, z0 }
}
