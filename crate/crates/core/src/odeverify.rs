//! Numerical integration of the normal form, periodic-orbit location and
//! detection of spatio-temporal symmetry pairs (H, K).
//!
//! A symmetry of a T-periodic orbit x(t) is a pair (g, θ) with
//! g·x(t + θ) = x(t) for all t. H collects the g that admit some θ and K
//! those with θ = 0.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::branches::{solve_z1z2, solve_zz_x, BranchError, Classification};
use crate::group::{FiniteGroup, GroupElement, GroupKind, Subgroup};
use crate::hmodk::{hopf_catalog, interpret, BranchKind, HmodKError, Interpretation};
use crate::normalform::{eval_vf, norm, relative_equilibrium, sub, NFParams, C3};
use crate::twisted::{check_denominator, IsotropyConfig, TwistedElement, TwistedError, TwistedSubgroup};

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_TRANSIENT: f64 = 200.0;
pub const DEFAULT_HORIZON: f64 = 1000.0;
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-5;
/// Rejected candidates must score at least this multiple of the tolerance.
pub const GAP_FACTOR: f64 = 10.0;
/// Largest accepted closure error of a located orbit.
pub const CLOSURE_TOL: f64 = 1e-6;
/// States with norm above this count as divergent.
const BLOWUP: f64 = 1e150;
/// Number of time samples used in the max-over-t symmetry score.
const SCORE_SAMPLES: usize = 256;
const GOLDEN_ITERS: usize = 80;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size must be positive, got {0}")]
    BadStep(f64),
    #[error("trajectory diverged at t = {t}")]
    Divergence { t: f64 },
    #[error("state is an equilibrium (|f| = {speed:e}), not a periodic orbit")]
    Equilibrium { speed: f64 },
    #[error("no return to the Poincaré section within t = {horizon}")]
    NotPeriodic { horizon: f64 },
    #[error("orbit closure error {closure:e} exceeds tol/10 = {limit:e}")]
    ClosureTooLarge { closure: f64, limit: f64 },
    #[error("ambiguous symmetry test: element {element} scores {score:e}, between tol and {GAP_FACTOR}·tol")]
    Ambiguous { element: String, score: f64 },
    #[error("accepted symmetries are inconsistent: {0}")]
    Inconsistent(String),
    #[error("row ({0}) carries no primary branch for these coefficients")]
    NoSeed(char),
    #[error("no supercritical γ found by the scan")]
    NotSupercritical,
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    HmodK(#[from] HmodKError),
    #[error(transparent)]
    Branch(#[from] BranchError),
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<C3>,
}

impl Trajectory {
    /// Rows `t,re1,im1,re2,im2,re3,im3`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re1,im1,re2,im2,re3,im3\n");
        for (t, z) in self.times.iter().zip(&self.states) {
            out.push_str(&format!(
                "{t:.6},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12}\n",
                z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im
            ));
        }
        out
    }
}

fn axpy(x: &C3, a: f64, y: &C3) -> C3 {
    std::array::from_fn(|i| x[i] + y[i] * a)
}

fn rk4_step(p: &NFParams, z: &C3, h: f64) -> C3 {
    let k1 = eval_vf(z, p);
    let k2 = eval_vf(&axpy(z, h / 2.0, &k1), p);
    let k3 = eval_vf(&axpy(z, h / 2.0, &k2), p);
    let k4 = eval_vf(&axpy(z, h, &k3), p);
    std::array::from_fn(|i| z[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0))
}

fn finite(z: &C3) -> bool {
    let n = norm(z);
    n.is_finite() && n < BLOWUP
}

/// Number of equal steps of size at most `dt` covering `t_end`.
fn step_count(t_end: f64, dt: f64) -> usize {
    ((t_end / dt) - 1e-9).ceil().max(1.0) as usize
}

/// Final state only; used for transients.
fn advance(p: &NFParams, z0: &C3, t_end: f64, dt: f64) -> Result<C3, OdeError> {
    if t_end <= 0.0 {
        return Ok(*z0);
    }
    let n = step_count(t_end, dt);
    let h = t_end / n as f64;
    let mut z = *z0;
    for i in 0..n {
        z = rk4_step(p, &z, h);
        if !finite(&z) {
            return Err(OdeError::Divergence { t: (i + 1) as f64 * h });
        }
    }
    Ok(z)
}

/// Fixed-step RK4 from `z0` to `t_end`. The step is shrunk slightly so that
/// a whole number of steps lands on `t_end`.
pub fn integrate(p: &NFParams, z0: &C3, t_end: f64, dt: f64) -> Result<Trajectory, OdeError> {
    if !(dt > 0.0) {
        return Err(OdeError::BadStep(dt));
    }
    let n = step_count(t_end.max(0.0), dt);
    let h = t_end.max(0.0) / n as f64;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut z = *z0;
    times.push(0.0);
    states.push(z);
    for i in 1..=n {
        z = rk4_step(p, &z, h);
        let t = i as f64 * h;
        if !finite(&z) {
            return Err(OdeError::Divergence { t });
        }
        times.push(t);
        states.push(z);
    }
    Ok(Trajectory { times, states })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerifyConfig {
    pub dt: f64,
    pub transient: f64,
    pub horizon: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            dt: DEFAULT_DT,
            transient: DEFAULT_TRANSIENT,
            horizon: DEFAULT_HORIZON,
        }
    }
}

/// One period of a periodic orbit, sampled uniformly with the vector field
/// stored alongside for Hermite interpolation.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitSample {
    pub times: Vec<f64>,
    pub states: Vec<C3>,
    #[serde(skip)]
    pub velocities: Vec<C3>,
    pub period: f64,
    pub closure_error: f64,
    /// +1 if the orbit turns like e^{+it} (mean Im⟨x, ẋ⟩ > 0), else −1.
    pub orientation: i8,
    pub params: NFParams,
}

impl OrbitSample {
    /// x(t) for any real t, by periodicity and cubic Hermite interpolation.
    pub fn at(&self, t: f64) -> C3 {
        let m = self.states.len() - 1;
        let h = self.period / m as f64;
        let tau = t.rem_euclid(self.period);
        let i = ((tau / h).floor() as usize).min(m - 1);
        let u = (tau - i as f64 * h) / h;
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = (u3 - 2.0 * u2 + u) * h;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = (u3 - u2) * h;
        let (x0, x1, f0, f1) = (&self.states[i], &self.states[i + 1], &self.velocities[i], &self.velocities[i + 1]);
        std::array::from_fn(|k| x0[k] * h00 + f0[k] * h10 + x1[k] * h01 + f1[k] * h11)
    }

    pub fn amplitude(&self) -> f64 {
        self.states.iter().map(norm).fold(0.0, f64::max)
    }
}

fn inner(a: &C3, b: &C3) -> Complex64 {
    (0..3).map(|i| a[i].conj() * b[i]).sum()
}

/// Sample exactly one period starting from `x0`.
fn sample_period(p: &NFParams, x0: &C3, period: f64, dt: f64) -> Result<OrbitSample, OdeError> {
    let traj = integrate(p, x0, period, dt)?;
    let velocities: Vec<C3> = traj.states.iter().map(|z| eval_vf(z, p)).collect();
    let closure_error = norm(&sub(traj.states.last().unwrap(), x0));
    let turn: f64 = traj.states.iter().zip(&velocities).map(|(z, f)| inner(z, f).im).sum();
    Ok(OrbitSample {
        times: traj.times,
        states: traj.states,
        velocities,
        period,
        closure_error,
        orientation: if turn >= 0.0 { 1 } else { -1 },
        params: *p,
    })
}

/// Integrate past the transient and measure one period. Relative equilibria
/// (ẋ = iωx) take the period 2π/|ω| from the phase velocity; other orbits
/// use the first return to the hyperplane through the point normal to the
/// flow, refined by bisection.
pub fn find_periodic(p: &NFParams, seed: &C3, config: &VerifyConfig) -> Result<OrbitSample, OdeError> {
    if !(config.dt > 0.0) {
        return Err(OdeError::BadStep(config.dt));
    }
    let x0 = advance(p, seed, config.transient, config.dt)?;
    let f0 = eval_vf(&x0, p);
    let speed = norm(&f0);
    let scale = norm(&x0).max(1e-300);
    if speed <= 1e-12 * scale.max(1.0) {
        return Err(OdeError::Equilibrium { speed });
    }
    let omega = inner(&x0, &f0).im / (scale * scale);
    let rotation: C3 = std::array::from_fn(|i| x0[i] * Complex64::new(0.0, omega));
    if omega != 0.0 && norm(&sub(&f0, &rotation)) <= 1e-9 * speed {
        return sample_period(p, &x0, 2.0 * PI / omega.abs(), config.dt);
    }
    let period = first_return(p, &x0, &f0, config)?;
    sample_period(p, &x0, period, config.dt)
}

fn first_return(p: &NFParams, x0: &C3, normal: &C3, config: &VerifyConfig) -> Result<f64, OdeError> {
    let section = |z: &C3| inner(normal, &sub(z, x0)).re;
    let h = config.dt;
    let steps = step_count(config.horizon, h);
    let mut z = *x0;
    let mut prev = 0.0;
    for i in 0..steps {
        let next = rk4_step(p, &z, h);
        if !finite(&next) {
            return Err(OdeError::Divergence { t: (i + 1) as f64 * h });
        }
        let s = section(&next);
        if prev < 0.0 && s >= 0.0 {
            let (mut lo, mut hi) = (0.0, h);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if section(&rk4_step(p, &z, mid)) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let hit = rk4_step(p, &z, hi);
            if norm(&sub(&hit, x0)) < CLOSURE_TOL.sqrt() * norm(x0).max(1.0) {
                return Ok(i as f64 * h + hi);
            }
        }
        prev = s;
        z = next;
    }
    Err(OdeError::NotPeriodic { horizon: config.horizon })
}

/// Cubic coefficient μ along the ray through `v`: the cubic part of the
/// vector field at v equals μ·v. `None` if the ray is not invariant.
pub fn ray_coefficient(p: &NFParams, v: &C3) -> Option<Complex64> {
    let cubic = NFParams {
        lambda: Complex64::new(0.0, 0.0),
        ..*p
    };
    let nv = eval_vf(v, &cubic);
    let vv = inner(v, v).re;
    if vv == 0.0 {
        return None;
    }
    let mu = inner(v, &nv) / vv;
    let along: C3 = std::array::from_fn(|i| v[i] * mu);
    (norm(&sub(&nv, &along)) <= 1e-9 * norm(&nv).max(1e-300)).then_some(mu)
}

/// Point of the relative equilibrium on the ray through `v` and its angular
/// frequency, when the ray is invariant and the branch is supercritical.
pub fn ray_relative_equilibrium(p: &NFParams, v: &C3) -> Option<(C3, f64)> {
    let mu = ray_coefficient(p, v)?;
    let (r2, omega) = relative_equilibrium(p.lambda, mu)?;
    let a = r2.sqrt();
    Some((std::array::from_fn(|i| v[i] * a), omega))
}

/// Scan Re γ = 0, −step, −2·step, … (other coefficients fixed) for the first
/// value at which every ray has Re μ ≤ −margin and a nonzero frequency.
pub fn scan_supercritical(base: &NFParams, rays: &[C3], step: f64, margin: f64, max_steps: usize) -> Option<NFParams> {
    (0..=max_steps).find_map(|i| {
        let p = NFParams {
            gamma: Complex64::new(-(i as f64) * step, base.gamma.im),
            ..*base
        };
        rays.iter()
            .all(|v| {
                ray_coefficient(&p, v).is_some_and(|mu| mu.re <= -margin)
                    && ray_relative_equilibrium(&p, v).is_some_and(|(_, w)| w.abs() > margin)
            })
            .then_some(p)
    })
}

/// One accepted element of H.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftedElement {
    pub element: String,
    #[serde(skip)]
    pub g: GroupElement,
    /// Time shift as a fraction of the period, in [0, 1).
    pub shift: f64,
    /// Phase e^{2πik/N} of the matching twisted element.
    pub k: u32,
    pub score: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectedSymmetry {
    pub group: GroupKind,
    pub n: u32,
    pub h_members: Vec<ShiftedElement>,
    /// Elements of H with zero shift.
    pub k_members: Vec<String>,
    #[serde(skip)]
    pub sigma: TwistedSubgroup,
    #[serde(skip)]
    pub h: Subgroup,
    #[serde(skip)]
    pub k: Subgroup,
    /// Smallest score among rejected elements.
    pub best_rejected: Option<f64>,
    pub interpretations: Vec<Interpretation>,
}

impl DetectedSymmetry {
    /// (H, K) after dropping the (−Id, ½) half, as in the catalog's reduced reading.
    pub fn reduced(&self, group: &FiniteGroup) -> (Subgroup, Subgroup) {
        let r = self.sigma.reduced(group);
        let k = r.kernel();
        (r.subgroup, k)
    }
}

/// max over sampled t of ‖g·x(t + s) − x(t)‖.
fn score(orbit: &OrbitSample, g: &GroupElement, s: f64) -> f64 {
    let m = orbit.states.len() - 1;
    let stride = (m / SCORE_SAMPLES).max(1);
    let h = orbit.period / m as f64;
    (0..m)
        .step_by(stride)
        .map(|i| {
            let t = i as f64 * h;
            let shifted = orbit.at(t + s);
            let moved: C3 = std::array::from_fn(|r| {
                let (c, sign) = g.row_entry(r);
                shifted[c] * sign as f64
            });
            norm(&sub(&moved, &orbit.states[i]))
        })
        .fold(0.0, f64::max)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Best shift for `g`: grid of spacing period/N, the three best grid points
/// refined by golden-section search.
fn best_shift(orbit: &OrbitSample, g: &GroupElement, n: u32) -> (f64, f64) {
    let p = orbit.period;
    let cell = p / n as f64;
    let mut grid: Vec<(f64, f64)> = (0..n).map(|j| (j as f64 * cell, score(orbit, g, j as f64 * cell))).collect();
    grid.sort_by(|a, b| a.1.total_cmp(&b.1));
    grid.iter()
        .take(3)
        .map(|&(s, sc)| {
            let (rs, rsc) = golden_min(|x| score(orbit, g, x), s - cell, s + cell);
            if rsc < sc {
                (rs.rem_euclid(p), rsc)
            } else {
                (s, sc)
            }
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

/// Spatio-temporal symmetries of `orbit` in Γ, with phases in Z_N.
pub fn detect_symmetries(orbit: &OrbitSample, kind: GroupKind, n: u32, tol: f64) -> Result<DetectedSymmetry, OdeError> {
    check_denominator(n)?;
    let limit = tol / 10.0;
    if !(orbit.closure_error < limit) {
        return Err(OdeError::ClosureTooLarge {
            closure: orbit.closure_error,
            limit,
        });
    }
    let group = kind.build();
    let mut accepted = Vec::new();
    let mut best_rejected: Option<(f64, usize)> = None;
    for (idx, g) in group.elements().iter().enumerate() {
        let (s, sc) = best_shift(orbit, g, n);
        if sc < tol {
            let frac = s / orbit.period;
            let q = if orbit.orientation > 0 { frac } else { -frac };
            let steps = q * n as f64;
            let k = steps.round();
            if (steps - k).abs() > 1e-3 {
                return Err(OdeError::Inconsistent(format!(
                    "shift {frac} of {} is not a multiple of 1/{n}",
                    group.word_string(idx)
                )));
            }
            accepted.push(ShiftedElement {
                element: group.word_string(idx),
                g: *g,
                shift: if (1.0 - frac) * n as f64 <= 1e-3 { 0.0 } else { frac },
                k: (k as i64).rem_euclid(n as i64) as u32,
                score: sc,
            });
        } else if best_rejected.map_or(true, |(b, _)| sc < b) {
            best_rejected = Some((sc, idx));
        }
    }
    if let Some((sc, idx)) = best_rejected {
        if sc < GAP_FACTOR * tol {
            return Err(OdeError::Ambiguous {
                element: group.word_string(idx),
                score: sc,
            });
        }
    }
    let elems: Vec<TwistedElement> = accepted.iter().map(|a| TwistedElement::new(a.g, a.k as i64, n)).collect();
    let sigma = TwistedSubgroup::from_elements(&group, &elems)
        .ok_or_else(|| OdeError::Inconsistent("accepted (g, shift) pairs do not form a subgroup".into()))?;
    let k_sub = sigma.kernel();
    let k_members = accepted.iter().filter(|a| a.k == 0).map(|a| a.element.clone()).collect();
    Ok(DetectedSymmetry {
        group: kind,
        n,
        h: sigma.subgroup.clone(),
        k: k_sub,
        interpretations: GroupKind::ALL.iter().map(|&t| interpret(&group, &sigma, t)).collect(),
        h_members: accepted,
        k_members,
        sigma,
        best_rejected: best_rejected.map(|b| b.0),
    })
}

/// Starting coefficients for verification runs; Re γ is then scanned.
pub fn base_params(alpha: Complex64, beta: Complex64) -> NFParams {
    NFParams {
        lambda: Complex64::new(1.0, 1.0),
        alpha,
        beta,
        gamma: Complex64::new(0.0, 0.5),
    }
}

pub const SCAN_STEP: f64 = 0.5;
pub const SCAN_MARGIN: f64 = 0.1;
pub const SCAN_MAX_STEPS: usize = 400;

/// Seed directions for the branches of one row: the Fix basis vector of
/// every C-axial row for (b)–(f), the submaximal solutions of the branch
/// equations in {(ξz, z, 0)} for (g) and in {(z, z, ξz)} for (h).
pub fn seed_rays(kind: GroupKind, row: char, alpha: Complex64, beta: Complex64, n: u32) -> Result<Vec<C3>, OdeError> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let submaximal = |sols: Vec<crate::branches::BranchSolution>| {
        sols.into_iter()
            .filter(|s| s.classification == Classification::Submaximal)
            .map(|s| s.xi)
            .collect::<Vec<_>>()
    };
    let rays: Vec<C3> = match row {
        'g' => submaximal(solve_z1z2(alpha, beta)?).into_iter().map(|xi| [xi, one, zero]).collect(),
        'h' => submaximal(solve_zz_x(alpha, beta)?).into_iter().map(|xi| [one, one, xi]).collect(),
        _ => {
            let config = IsotropyConfig {
                n,
                ..IsotropyConfig::default()
            };
            let catalog = hopf_catalog(&kind.build(), &config)?;
            catalog
                .iter()
                .filter(|r| r.row == row && r.kind == BranchKind::CAxial)
                .map(|r| r.fix.numeric_basis()[0])
                .collect()
        }
    };
    if rays.is_empty() {
        return Err(OdeError::NoSeed(row));
    }
    Ok(rays)
}

#[derive(Clone, Debug)]
pub struct BranchRun {
    pub row: char,
    pub params: NFParams,
    pub seed: C3,
    pub orbit: OrbitSample,
    pub detected: DetectedSymmetry,
}

/// Integrate the branch of `row` and detect its symmetries. For C-axial rows
/// γ comes from a scan over all five C-axial directions, so one parameter
/// set serves every row.
pub fn verify_row(
    kind: GroupKind,
    row: char,
    alpha: Complex64,
    beta: Complex64,
    n: u32,
    tol: f64,
    config: &VerifyConfig,
) -> Result<BranchRun, OdeError> {
    if row == 'a' {
        let zero = [Complex64::new(0.0, 0.0); 3];
        find_periodic(&base_params(alpha, beta), &zero, config)?;
    }
    let (rays, pick) = if ('b'..='f').contains(&row) {
        let all: Vec<C3> = ('b'..='f')
            .map(|r| seed_rays(kind, r, alpha, beta, n).map(|v| v[0]))
            .collect::<Result<_, _>>()?;
        let own = seed_rays(kind, row, alpha, beta, n)?[0];
        (all, own)
    } else if row == 'g' || row == 'h' {
        let v = seed_rays(kind, row, alpha, beta, n)?;
        let first = v[0];
        (v, first)
    } else {
        return Err(OdeError::NoSeed(row));
    };
    let params = scan_supercritical(&base_params(alpha, beta), &rays, SCAN_STEP, SCAN_MARGIN, SCAN_MAX_STEPS)
        .ok_or(OdeError::NotSupercritical)?;
    let (seed, _) = ray_relative_equilibrium(&params, &pick).ok_or(OdeError::NotSupercritical)?;
    let orbit = find_periodic(&params, &seed, config)?;
    let detected = detect_symmetries(&orbit, kind, n, tol)?;
    Ok(BranchRun {
        row,
        params,
        seed,
        orbit,
        detected,
    })
}
