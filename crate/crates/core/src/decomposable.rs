//! Lower-bound functionals for the edge density of decomposable mosaics in
//! terms of planar component data `(a_i, e_i)` and an optional segment length.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecompError {
    #[error("invalid component: {0}")]
    InvalidComponent(String),
    #[error("area product constraint violated (residual {residual:e})")]
    ConstraintViolated { residual: f64 },
    #[error("a segment component is required")]
    MissingSegment,
    #[error("no segment component is allowed")]
    UnexpectedSegment,
    #[error("dimension {0} is out of range")]
    Dimension(usize),
    #[error("certificate failed: {0}")]
    CertificateFailed(String),
}

/// Relative tolerance on the area product constraint.
pub const CONSTRAINT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanarComponent {
    pub area: f64,
    pub e_hat: f64,
}

impl PlanarComponent {
    pub fn new(area: f64, e_hat: f64) -> Result<Self, DecompError> {
        if !(area.is_finite() && area > 0.0) {
            return Err(DecompError::InvalidComponent(format!("area {area}")));
        }
        if !(3.0..=6.0).contains(&e_hat) {
            return Err(DecompError::InvalidComponent(format!("e_hat {e_hat} outside [3, 6]")));
        }
        Ok(Self { area, e_hat })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SegmentComponent {
    pub length: f64,
}

impl SegmentComponent {
    pub fn new(length: f64) -> Result<Self, DecompError> {
        if !(length.is_finite() && length > 0.0) {
            return Err(DecompError::InvalidComponent(format!("segment length {length}")));
        }
        Ok(Self { length })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionSpec {
    pub planars: Vec<PlanarComponent>,
    pub segment: Option<SegmentComponent>,
}

impl DecompositionSpec {
    pub fn new(planars: Vec<PlanarComponent>, segment: Option<SegmentComponent>) -> Result<Self, DecompError> {
        if planars.is_empty() {
            return Err(DecompError::InvalidComponent("at least one planar component".into()));
        }
        Ok(Self { planars, segment })
    }

    pub fn dimension(&self) -> usize {
        2 * self.planars.len() + usize::from(self.segment.is_some())
    }

    /// `|prod a_i * l - 1|`, with `l = 1` when there is no segment.
    pub fn constraint_residual(&self) -> f64 {
        let p: f64 = self.planars.iter().map(|c| c.area).product();
        (p * self.segment.map_or(1.0, |s| s.length) - 1.0).abs()
    }

    fn check_constraint(&self) -> Result<(), DecompError> {
        let residual = self.constraint_residual();
        if residual > CONSTRAINT_TOL {
            return Err(DecompError::ConstraintViolated { residual });
        }
        Ok(())
    }
}

/// `sqrt(x tan(pi / x))`.
pub fn phi(x: f64) -> f64 {
    (x * (PI / x).tan()).sqrt()
}

/// Vertices per unit area, `(e - 2) / (2a)`.
pub fn planar_vertex_density(c: &PlanarComponent) -> f64 {
    (c.e_hat - 2.0) / (2.0 * c.area)
}

/// Skeleton length per unit area is at least `sqrt(e tan(pi/e) / a)`.
pub fn planar_skeleton_density_bound(c: &PlanarComponent) -> f64 {
    phi(c.e_hat) / c.area.sqrt()
}

fn planar_sum(planars: &[PlanarComponent]) -> f64 {
    let k = planars.len();
    let mut total = 0.0;
    for (i, c) in planars.iter().enumerate() {
        let others: f64 = planars
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, d)| d.e_hat - 2.0)
            .product();
        total += phi(c.e_hat) * c.area.sqrt() * others;
    }
    total / 2f64.powi(k as i32 - 1)
}

fn raw_bound(planars: &[PlanarComponent], segment: Option<f64>) -> f64 {
    let k = planars.len();
    let mut v = planar_sum(planars);
    if let Some(l) = segment {
        let p: f64 = planars.iter().map(|c| c.e_hat - 2.0).product();
        v += l / 2f64.powi(k as i32) * p;
    }
    v
}

/// `(1 / 2^(k-1)) sum_i sqrt(e_i tan(pi/e_i) a_i) prod_{j != i} (e_j - 2)`.
pub fn density_bound_even(spec: &DecompositionSpec) -> Result<f64, DecompError> {
    if spec.segment.is_some() {
        return Err(DecompError::UnexpectedSegment);
    }
    spec.check_constraint()?;
    Ok(raw_bound(&spec.planars, None))
}

/// The even-case sum plus `(l / 2^k) prod_j (e_j - 2)`.
pub fn density_bound_odd(spec: &DecompositionSpec) -> Result<f64, DecompError> {
    let s = spec.segment.ok_or(DecompError::MissingSegment)?;
    spec.check_constraint()?;
    Ok(raw_bound(&spec.planars, Some(s.length)))
}

pub fn density_bound(spec: &DecompositionSpec) -> Result<f64, DecompError> {
    match spec.segment {
        Some(_) => density_bound_odd(spec),
        None => density_bound_even(spec),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMinimum {
    pub dimension: usize,
    pub value: f64,
    pub spec: DecompositionSpec,
}

/// Minimum of the bound for `n = 2k` or `n = 2k + 1`.
///
/// `n = 2`: unit hexagons. `n = 2k >= 4`: `k` unit-area triangle components.
/// `n = 2k + 1`: `k` triangle components of area `l^(-1/k)` and a segment of
/// length `l = 3^(3k / (2(2k+1)))`, with value `(2k + 1) l / 2^k`.
pub fn minimize_density(n: usize) -> Result<DensityMinimum, DecompError> {
    if n < 2 {
        return Err(DecompError::Dimension(n));
    }
    let k = n / 2;
    let (planars, segment) = if n == 2 {
        (vec![PlanarComponent::new(1.0, 6.0)?], None)
    } else if n.is_multiple_of(2) {
        (vec![PlanarComponent::new(1.0, 3.0)?; k], None)
    } else {
        let l = odd_optimal_length(k);
        let a = l.powf(-1.0 / k as f64);
        (vec![PlanarComponent::new(a, 3.0)?; k], Some(SegmentComponent::new(l)?))
    };
    let spec = DecompositionSpec::new(planars, segment)?;
    let value = density_bound(&spec)?;
    Ok(DensityMinimum { dimension: n, value, spec })
}

/// Optimal segment length `(3 sqrt 3)^(k / (2k + 1))` for `n = 2k + 1`.
pub fn odd_optimal_length(k: usize) -> f64 {
    let k = k as f64;
    3f64.powf(3.0 * k / (2.0 * (2.0 * k + 1.0)))
}

/// Closed form of the minimum.
pub fn minimum_closed_form(n: usize) -> Result<f64, DecompError> {
    let k = (n / 2) as f64;
    match n {
        0 | 1 => Err(DecompError::Dimension(n)),
        2 => Ok((2.0 * 3f64.sqrt()).sqrt()),
        _ if n.is_multiple_of(2) => Ok(k * (3.0 * 3f64.sqrt()).sqrt() / 2f64.powf(k - 1.0)),
        _ => Ok((2.0 * k + 1.0) * odd_optimal_length(n / 2) / 2f64.powf(k)),
    }
}

/// `3 sqrt(3) k^(2/3) / 2^k`, the odd-dimension value obtained by bounding
/// `sum sqrt(a_i)` below by `k / sqrt(l)`; exact only for `k = 1`.
pub fn odd_value_with_sqrt_amgm(k: usize) -> f64 {
    let k = k as f64;
    3.0 * 3f64.sqrt() * k.powf(2.0 / 3.0) / 2f64.powf(k)
}

/// The configuration `e = 3`, `a_i = 3^(-1/(2k)) k^(-2/(3k))`,
/// `l = sqrt(3) k^(2/3)` that goes with [`odd_value_with_sqrt_amgm`].
pub fn odd_configuration_with_sqrt_amgm(k: usize) -> Result<DecompositionSpec, DecompError> {
    let kf = k as f64;
    let a = 3f64.powf(-1.0 / (2.0 * kf)) * kf.powf(-2.0 / (3.0 * kf));
    let l = 3f64.sqrt() * kf.powf(2.0 / 3.0);
    DecompositionSpec::new(vec![PlanarComponent::new(a, 3.0)?; k], Some(SegmentComponent::new(l)?))
}

/// Largest dimension accepted by [`brute_force_minimize`].
pub const ORACLE_MAX_DIM: usize = 7;
const ORACLE_BUDGET: f64 = 4.0e6;
const LOG_AREA_RANGE: (f64, f64) = (-2.5, 2.5);
const LOG_LENGTH_RANGE: (f64, f64) = (-2.5, 3.5);

/// Decodes the search vector `(e_1..e_k, ln a_1..ln a_{k-1}, [ln l])`;
/// `a_k` is eliminated through the product constraint.
fn decode(x: &[f64], k: usize, odd: bool) -> (Vec<PlanarComponent>, Option<f64>) {
    let l = odd.then(|| x[2 * k - 1].exp());
    let mut log_a: Vec<f64> = x[k..2 * k - 1].to_vec();
    let rest = -log_a.iter().sum::<f64>() - l.map_or(0.0, f64::ln);
    log_a.push(rest);
    let planars = (0..k).map(|i| PlanarComponent { area: log_a[i].exp(), e_hat: x[i] }).collect();
    (planars, l)
}

fn oracle_bounds(k: usize, odd: bool) -> Vec<(f64, f64)> {
    let mut b = vec![(3.0, 6.0); k];
    b.extend(std::iter::repeat_n(LOG_AREA_RANGE, k - 1));
    if odd {
        b.push(LOG_LENGTH_RANGE);
    }
    b
}

/// Grid search over `e_i in [3, 6]`, log-areas and log-length, followed by
/// compass search with step halving from the best grid point.
pub fn brute_force_minimize(n: usize, grid_n: usize) -> Result<f64, DecompError> {
    if !(2..=ORACLE_MAX_DIM).contains(&n) {
        return Err(DecompError::Dimension(n));
    }
    let (k, odd) = (n / 2, n % 2 == 1);
    let bounds = oracle_bounds(k, odd);
    let d = bounds.len();
    let per_dim = (grid_n.max(2) as f64).min(ORACLE_BUDGET.powf(1.0 / d as f64).floor()).max(2.0) as usize;
    let f = |x: &[f64]| {
        let (p, l) = decode(x, k, odd);
        raw_bound(&p, l)
    };
    let point = |mut idx: usize| -> Vec<f64> {
        bounds
            .iter()
            .map(|&(lo, hi)| {
                let i = idx % per_dim;
                idx /= per_dim;
                lo + (hi - lo) * i as f64 / (per_dim - 1) as f64
            })
            .collect()
    };
    let total = per_dim.pow(d as u32);
    let (best_idx, _) = (0..total)
        .into_par_iter()
        .map(|i| (i, f(&point(i))))
        .reduce(|| (usize::MAX, f64::INFINITY), |a, b| if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
    let mut x = point(best_idx);
    let mut value = f(&x);
    let mut steps: Vec<f64> = bounds.iter().map(|(lo, hi)| (hi - lo) / (per_dim - 1) as f64).collect();
    for _ in 0..80 {
        loop {
            let mut improved = false;
            for c in 0..d {
                for dir in [-1.0, 1.0] {
                    let mut y = x.clone();
                    y[c] = (y[c] + dir * steps[c]).clamp(bounds[c].0, bounds[c].1);
                    let v = f(&y);
                    if v < value {
                        x = y;
                        value = v;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        for s in &mut steps {
            *s *= 0.5;
        }
    }
    Ok(value)
}

/// Bound on the symmetric line `e_i = e`, `a_i` equal: `a = 1` for even `n`,
/// and the segment length minimizing the bound for odd `n`.
pub fn symmetric_bound(n: usize, e_hat: f64) -> Result<f64, DecompError> {
    if n < 2 {
        return Err(DecompError::Dimension(n));
    }
    let k = n / 2;
    let kf = k as f64;
    let p = e_hat - 2.0;
    if n.is_multiple_of(2) {
        return Ok(kf * phi(e_hat) * p.powf(kf - 1.0) / 2f64.powf(kf - 1.0));
    }
    let l = (phi(e_hat) / p).powf(2.0 * kf / (2.0 * kf + 1.0));
    Ok((2.0 * kf + 1.0) * l * p.powf(kf) / 2f64.powf(kf))
}

/// Rows `e_hat,bound` of [`symmetric_bound`] on `samples` points of `[3, 6]`.
pub fn symmetric_bound_csv(n: usize, samples: usize) -> Result<String, DecompError> {
    let mut out = String::from("e_hat,bound\n");
    for i in 0..samples.max(2) {
        let e = 3.0 + 3.0 * i as f64 / (samples.max(2) - 1) as f64;
        out.push_str(&format!("{e},{}\n", symmetric_bound(n, e)?));
    }
    Ok(out)
}

/// `g(x) = ln((e^x + 2) tan(pi / (e^x + 2)))`.
pub fn g(x: f64) -> f64 {
    let y = x.exp() + 2.0;
    (y * (PI / y).tan()).ln()
}

/// Closed-form second derivative of [`g`].
pub fn g_second_derivative(x: f64) -> f64 {
    let y = x.exp() + 2.0;
    let u = 2.0 * PI / y;
    let (s, c) = u.sin_cos();
    let h1 = 1.0 / y - 2.0 * PI / (y * y * s);
    let h2 = -1.0 / (y * y) + 4.0 * PI / (y.powi(3) * s) - 4.0 * PI * PI * c / (y.powi(4) * s * s);
    h2 * (y - 2.0).powi(2) + h1 * (y - 2.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub grid_points: usize,
    /// Smallest value of the quantity required to be positive.
    pub min_margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub certificates: Vec<Certificate>,
    /// Largest relative gap between [`g_second_derivative`] and a central
    /// difference of [`g`].
    pub g2_fd_gap: f64,
}

impl CertificateReport {
    pub fn pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass)
    }
}

pub const CERTIFICATE_GRID: usize = 10_000;

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn certificate(name: &str, values: impl Iterator<Item = f64>) -> Certificate {
    let v: Vec<f64> = values.collect();
    let min_margin = v.iter().cloned().fold(f64::INFINITY, f64::min);
    Certificate { name: name.into(), grid_points: v.len(), min_margin, pass: min_margin > 0.0 }
}

/// Sign checks on `n`-point grids.
pub fn proof_certificates_on(n: usize) -> CertificateReport {
    let xs = grid(3.0, 6.0, n.max(3));
    let diffs = |f: &dyn Fn(f64) -> f64| -> Vec<f64> { xs.windows(2).map(|w| f(w[1]) - f(w[0])).collect() };
    let gs = grid(0.0, 4f64.ln(), n.max(3));
    let h = 1e-4;
    let g2_fd_gap = gs
        .iter()
        .map(|&x| {
            let fd = (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
            let exact = g_second_derivative(x);
            (fd - exact).abs() / exact.abs()
        })
        .fold(0.0, f64::max);
    let certificates = vec![
        certificate("phi_decreasing", diffs(&phi).into_iter().map(|d| -d)),
        certificate("shifted_phi_increasing", diffs(&|x| (x - 2.0) * phi(x)).into_iter()),
        certificate("x_tan_shifted_increasing", diffs(&|x| x * (PI / x).tan() * (x - 2.0)).into_iter()),
        certificate("phi_convex", xs.windows(3).map(|w| phi(w[0]) - 2.0 * phi(w[1]) + phi(w[2]))),
        certificate("g_convex", gs.iter().map(|&x| g_second_derivative(x))),
        certificate("phi_endpoints", std::iter::once(phi(3.0) - phi(6.0))),
    ];
    CertificateReport { certificates, g2_fd_gap }
}

pub fn proof_certificates() -> Result<CertificateReport, DecompError> {
    let r = proof_certificates_on(CERTIFICATE_GRID);
    match r.certificates.iter().find(|c| !c.pass) {
        Some(c) => Err(DecompError::CertificateFailed(format!("{} (margin {:e})", c.name, c.min_margin))),
        None => Ok(r),
    }
}
