//! Submaximal branches of the cubic normal form inside the four-dimensional
//! fixed-point subspaces {(z1,z2,0)} and {(z1,z1,z2)}.
//!
//! Only the ratio ρ = α/β matters. For {(z1,z1,z2)} the branch through
//! (z, z, ξz), ξ = r·e^{−iψ}, corresponds to a point (x, y) = (cos 2ψ, sin 2ψ)
//! of the unit circle on the curve I(x,y) = 0 with R(x,y) > 0.

use std::f64::consts::{PI, TAU};
use std::fmt::{self, Write as _};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// R above this is a submaximal candidate; |R| below it is a boundary case.
pub const R_THRESHOLD: f64 = 1e-10;
pub const GRID_POINTS: usize = 4096;
/// Target |g| for bisection refinement of circle intersections.
pub const ROOT_TOL: f64 = 1e-13;
/// A local minimum of |g| below this without a sign change is a tangency.
pub const TANGENCY_TOL: f64 = 1e-8;
/// Distance to the existence-region boundary treated as "on" the boundary.
pub const BOUNDARY_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BranchError {
    #[error("β = 0: the branch equations degenerate")]
    DegenerateBeta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BranchSubspace {
    /// {(ξz, z, 0)}, ξ = r·e^{iφ}
    #[serde(rename = "z1z2_0")]
    Z1Z2Zero,
    /// {(z, z, ξz)}, ξ = r·e^{−iψ}
    #[serde(rename = "zz_x")]
    ZzX,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Submaximal,
    MaximalZzz,
    MaximalZz0,
    RZeroBoundary,
    RInfinityBoundary,
    Tangency,
    /// R < 0 on the circle: r² would be negative. Kept for plotting only.
    Rejected,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::Submaximal => "submaximal",
            Classification::MaximalZzz => "maximal_zzz",
            Classification::MaximalZz0 => "maximal_zz0",
            Classification::RZeroBoundary => "r_zero_boundary",
            Classification::RInfinityBoundary => "r_infinity_boundary",
            Classification::Tangency => "tangency",
            Classification::Rejected => "rejected",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchSolution {
    pub subspace: BranchSubspace,
    pub xi: Complex64,
    /// φ for {(z1,z2,0)}, ψ for {(z1,z1,z2)}.
    pub angle: f64,
    /// (cos 2φ, sin 2φ) or (cos 2ψ, sin 2ψ).
    pub circle_point: (f64, f64),
    pub r_squared: f64,
    pub residual: f64,
    pub classification: Classification,
}

fn ratio(alpha: Complex64, beta: Complex64) -> Result<Complex64, BranchError> {
    if beta.norm() == 0.0 {
        return Err(BranchError::DegenerateBeta);
    }
    Ok(alpha / beta)
}

/// Residual of α + βe^{−2iφ} = r²(α + βe^{2iφ}), the relative-equilibrium
/// condition for (ξz, z, 0).
pub fn z1z2_residual(alpha: Complex64, beta: Complex64, r2: f64, phi: f64) -> f64 {
    let e = Complex64::from_polar(1.0, 2.0 * phi);
    (alpha + beta * e.conj() - r2 * (alpha + beta * e)).norm()
}

/// Branches (ξz, z, 0) off the C-axial subspaces. Inside the existence
/// region there are two, with reciprocal r²; on its boundary the
/// degenerate limits are reported with boundary tags.
pub fn solve_z1z2(alpha: Complex64, beta: Complex64) -> Result<Vec<BranchSolution>, BranchError> {
    let rho = ratio(alpha, beta)?;
    let (a, b) = (rho.re, rho.im);
    let mut out = Vec::new();
    let make = |x: f64, y: f64, r2: f64, class: Classification| {
        let phi = y.atan2(x) / 2.0;
        let xi = Complex64::from_polar(r2.sqrt(), phi);
        BranchSolution {
            subspace: BranchSubspace::Z1Z2Zero,
            xi,
            angle: phi,
            circle_point: (x, y),
            r_squared: r2,
            residual: if r2.is_finite() { z1z2_residual(alpha, beta, r2, phi) } else { f64::NAN },
            classification: class,
        }
    };
    if (a.abs() - 1.0).abs() <= BOUNDARY_EPS {
        // pitchfork off {(±iz,z,0)} at Re ρ = 1 or {(±z,z,0)} at Re ρ = −1
        out.push(make(-a.signum(), 0.0, 1.0, Classification::MaximalZz0));
        return Ok(out);
    }
    if a.abs() > 1.0 {
        return Ok(out);
    }
    let x = -a;
    let s = (1.0 - a * a).sqrt();
    if (rho.norm() - 1.0).abs() <= BOUNDARY_EPS {
        for y in [s, -s] {
            let class = if (b - y).abs() < (b + y).abs() {
                Classification::RZeroBoundary
            } else {
                Classification::RInfinityBoundary
            };
            let r2 = if class == Classification::RZeroBoundary { 0.0 } else { f64::INFINITY };
            out.push(make(x, y, r2, class));
        }
        return Ok(out);
    }
    if rho.norm() < 1.0 {
        return Ok(out);
    }
    for y in [s, -s] {
        let r2 = (b - y) / (b + y);
        if r2 > 0.0 {
            out.push(make(x, y, r2, Classification::Submaximal));
        }
    }
    Ok(out)
}

/// Coefficients of R(x,y) = (x−x0)² − (y−y0)² + Kr and
/// I(x,y) = (x−x0)(y−y0) + Ki.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveData {
    pub x0: f64,
    pub y0: f64,
    pub kr: f64,
    pub ki: f64,
    pub ratio: Complex64,
}

impl CurveData {
    pub fn r(&self, x: f64, y: f64) -> f64 {
        (x - self.x0).powi(2) - (y - self.y0).powi(2) + self.kr
    }

    pub fn i(&self, x: f64, y: f64) -> f64 {
        (x - self.x0) * (y - self.y0) + self.ki
    }

    fn g(&self, tau: f64) -> f64 {
        self.i(tau.cos(), tau.sin())
    }
}

pub fn curve_coefficients(ratio: Complex64) -> CurveData {
    let (a, b) = (ratio.re, ratio.im);
    CurveData {
        x0: (1.0 - 3.0 * a) / 4.0,
        y0: b / 4.0,
        kr: ((3.0 * b).powi(2) - (a + 1.0).powi(2)) / 16.0,
        ki: 3.0 * b * (a + 1.0) / 16.0,
        ratio,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CirclePoint {
    pub tau: f64,
    pub x: f64,
    pub y: f64,
    pub tangency: bool,
}

/// Real roots of g(τ) = I(cos τ, sin τ) on [0, 2π): grid bracketing, then
/// bisection; grid minima of |g| below the tangency tolerance without a sign
/// change are reported as tangencies.
pub fn intersect_circle(curve: &CurveData) -> Vec<CirclePoint> {
    let n = GRID_POINTS;
    let taus: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let vals: Vec<f64> = taus.iter().map(|&t| curve.g(t)).collect();
    let mut roots: Vec<(f64, bool)> = Vec::new();
    for k in 0..n {
        let (prev, next) = (vals[(k + n - 1) % n], vals[(k + 1) % n]);
        let here = vals[k];
        if here.abs() < ROOT_TOL {
            let tangent = prev.signum() == next.signum() && prev.abs() >= ROOT_TOL && next.abs() >= ROOT_TOL;
            roots.push((taus[k], tangent));
            continue;
        }
        if next.abs() >= ROOT_TOL && here.signum() != next.signum() {
            let hi = if k + 1 == n { TAU } else { taus[k + 1] };
            roots.push((bisect(curve, taus[k], hi), false));
            continue;
        }
        // local minimum of |g| without sign change
        if here.abs() < TANGENCY_TOL
            && here.abs() <= prev.abs()
            && here.abs() <= next.abs()
            && here.signum() == prev.signum()
            && here.signum() == next.signum()
        {
            let lo = taus[k] - TAU / n as f64;
            let t = golden_min(|t| curve.g(t).abs(), lo, lo + 2.0 * TAU / n as f64);
            roots.push((t.rem_euclid(TAU), true));
        }
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, bool)> = Vec::new();
    for (t, tan) in roots {
        match merged.last_mut() {
            Some(last) if (t - last.0).abs() < 1e-9 => last.1 |= tan,
            _ => merged.push((t, tan)),
        }
    }
    if merged.len() > 1 {
        let (first, last) = (merged[0].0, merged[merged.len() - 1].0);
        if (first + TAU - last).abs() < 1e-9 {
            let tan = merged.pop().unwrap().1;
            merged[0].1 |= tan;
        }
    }
    merged
        .into_iter()
        .map(|(tau, tangency)| CirclePoint {
            tau,
            x: tau.cos(),
            y: tau.sin(),
            tangency,
        })
        .collect()
}

fn bisect(curve: &CurveData, mut lo: f64, mut hi: f64) -> f64 {
    let mut glo = curve.g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = curve.g(mid);
        if gm.abs() < ROOT_TOL || hi - lo < 1e-16 {
            return mid;
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    for _ in 0..200 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - phi * (b - a);
        d = a + phi * (b - a);
        if b - a < 1e-15 {
            break;
        }
    }
    0.5 * (a + b)
}

/// Residual of β − α + r²α + β(r²e^{−2iψ} − 2e^{2iψ}) = 0.
pub fn zz_x_residual(alpha: Complex64, beta: Complex64, r2: f64, psi: f64) -> f64 {
    let e = Complex64::from_polar(1.0, 2.0 * psi);
    (beta - alpha + r2 * alpha + beta * (r2 * e.conj() - 2.0 * e)).norm()
}

fn classify_point(curve: &CurveData, p: &CirclePoint, alpha: Complex64, beta: Complex64) -> BranchSolution {
    let psi = p.tau / 2.0;
    let r_val = curve.r(p.x, p.y);
    let denom = (Complex64::from_polar(1.0, -p.tau) + curve.ratio).norm_sqr();
    let is_one_zero = (p.x - 1.0).abs() < 1e-9 && p.y.abs() < 1e-9;
    let (class, r2) = if is_one_zero {
        (Classification::MaximalZzz, 1.0)
    } else if p.tangency {
        (Classification::Tangency, 2.0 * r_val / denom)
    } else if r_val > R_THRESHOLD {
        (Classification::Submaximal, 2.0 * r_val / denom)
    } else if r_val.abs() <= R_THRESHOLD {
        if denom.sqrt() < 1e-6 {
            (Classification::RInfinityBoundary, f64::INFINITY)
        } else {
            (Classification::RZeroBoundary, 0.0)
        }
    } else {
        (Classification::Rejected, 2.0 * r_val / denom)
    };
    BranchSolution {
        subspace: BranchSubspace::ZzX,
        xi: if r2.is_finite() {
            Complex64::from_polar(r2.max(0.0).sqrt(), -psi)
        } else {
            Complex64::new(f64::INFINITY, 0.0)
        },
        angle: psi,
        circle_point: (p.x, p.y),
        r_squared: r2,
        residual: if r2.is_finite() { zz_x_residual(alpha, beta, r2, psi) } else { f64::NAN },
        classification: class,
    }
}

/// Every circle intersection with its classification, including rejected
/// points (R < 0).
pub fn classify_intersections(alpha: Complex64, beta: Complex64) -> Result<Vec<BranchSolution>, BranchError> {
    let rho = ratio(alpha, beta)?;
    let curve = curve_coefficients(rho);
    Ok(intersect_circle(&curve)
        .iter()
        .map(|p| classify_point(&curve, p, alpha, beta))
        .collect())
}

/// Branches through (z, z, ξz); the submaximal entries are the branch count.
pub fn solve_zz_x(alpha: Complex64, beta: Complex64) -> Result<Vec<BranchSolution>, BranchError> {
    Ok(classify_intersections(alpha, beta)?
        .into_iter()
        .filter(|s| s.classification != Classification::Rejected)
        .collect())
}

pub fn count_submaximal(sols: &[BranchSolution]) -> usize {
    sols.iter()
        .filter(|s| s.classification == Classification::Submaximal)
        .count()
}

/// Everything needed to draw the circle/hyperbola picture for one ratio.
#[derive(Clone, Debug, Serialize)]
pub struct FigureData {
    pub curve: CurveData,
    pub circle: Vec<(f64, f64)>,
    /// Polylines of I(x,y) = 0 inside the plotting box.
    pub hyperbola: Vec<Vec<(f64, f64)>>,
    /// Polylines of R(x,y) = 0.
    pub r_zero: Vec<Vec<(f64, f64)>>,
    /// Centres of grid cells with R < 0 (cell size `cell`).
    pub shaded: Vec<(f64, f64)>,
    pub cell: f64,
    pub markers: Vec<BranchSolution>,
}

const BOX: f64 = 1.6;

/// Sample the two branches of (u)(v) = c or, for c = 0, the two lines.
fn product_curve(x0: f64, y0: f64, c: f64) -> Vec<Vec<(f64, f64)>> {
    let n = 400;
    if c.abs() < 1e-15 {
        return vec![vec![(x0, -BOX), (x0, BOX)], vec![(-BOX, y0), (BOX, y0)]];
    }
    let mut out = Vec::new();
    for side in [-1.0, 1.0] {
        let pts: Vec<(f64, f64)> = (1..=n)
            .map(|k| {
                let u = side * 4.0 * BOX * (k as f64 / n as f64).powi(2);
                (x0 + u, y0 + c / u)
            })
            .filter(|(x, y)| x.abs() <= BOX && y.abs() <= BOX)
            .collect();
        if pts.len() > 1 {
            out.push(pts);
        }
    }
    out
}

/// (x−x0)² − (y−y0)² = −Kr
fn difference_curve(x0: f64, y0: f64, kr: f64) -> Vec<Vec<(f64, f64)>> {
    let n = 400;
    let span = |k: usize| -2.0 * BOX + 4.0 * BOX * k as f64 / n as f64;
    let mut out = Vec::new();
    for side in [-1.0, 1.0] {
        let pts: Vec<(f64, f64)> = if kr <= 0.0 {
            (0..=n)
                .map(|k| {
                    let v = span(k);
                    (x0 + side * (v * v - kr).sqrt(), y0 + v)
                })
                .collect()
        } else {
            (0..=n)
                .map(|k| {
                    let u = span(k);
                    (x0 + u, y0 + side * (u * u + kr).sqrt())
                })
                .collect()
        };
        let pts: Vec<(f64, f64)> = pts.into_iter().filter(|(x, y)| x.abs() <= BOX && y.abs() <= BOX).collect();
        if pts.len() > 1 {
            out.push(pts);
        }
    }
    out
}

pub fn figure_geometry(ratio: Complex64) -> FigureData {
    let curve = curve_coefficients(ratio);
    let cell = 0.05;
    let cells = (2.0 * BOX / cell) as usize;
    let mut shaded = Vec::new();
    for i in 0..cells {
        for j in 0..cells {
            let (x, y) = (-BOX + (i as f64 + 0.5) * cell, -BOX + (j as f64 + 0.5) * cell);
            if curve.r(x, y) < 0.0 {
                shaded.push((x, y));
            }
        }
    }
    FigureData {
        curve,
        circle: (0..=360)
            .map(|k| {
                let t = TAU * k as f64 / 360.0;
                (t.cos(), t.sin())
            })
            .collect(),
        hyperbola: product_curve(curve.x0, curve.y0, -curve.ki),
        r_zero: difference_curve(curve.x0, curve.y0, curve.kr),
        shaded,
        cell,
        markers: classify_intersections(ratio, Complex64::new(1.0, 0.0)).expect("β = 1"),
    }
}

impl FigureData {
    pub fn submaximal_count(&self) -> usize {
        count_submaximal(&self.markers)
    }

    /// One row per intersection: x, y, R, classification, r_squared, psi.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,R,classification,r_squared,psi\n");
        for m in &self.markers {
            let (x, y) = m.circle_point;
            let _ = writeln!(
                out,
                "{x:.12},{y:.12},{:.12},{},{},{:.12}",
                self.curve.r(x, y),
                m.classification,
                fmt_r2(m.r_squared),
                m.angle
            );
        }
        out
    }

    pub fn to_svg(&self) -> String {
        let size = 480.0;
        let scale = size / (2.0 * BOX);
        let px = |x: f64| (x + BOX) * scale;
        let py = |y: f64| (BOX - y) * scale;
        let poly = |pts: &[(f64, f64)]| {
            pts.iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
        );
        let _ = writeln!(s, "<rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>");
        s.push_str("<g fill=\"#cccccc\" stroke=\"none\">\n");
        let c = self.cell * scale;
        for &(x, y) in &self.shaded {
            let _ = writeln!(
                s,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{c:.2}\" height=\"{c:.2}\"/>",
                px(x - self.cell / 2.0),
                py(y + self.cell / 2.0)
            );
        }
        s.push_str("</g>\n");
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\" points=\"{}\"/>",
            poly(&self.circle)
        );
        for branch in &self.hyperbola {
            let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"1.5\" points=\"{}\"/>", poly(branch));
        }
        for branch in &self.r_zero {
            let _ = writeln!(
                s,
                "<polyline fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\" points=\"{}\"/>",
                poly(branch)
            );
        }
        for m in &self.markers {
            let (x, y) = m.circle_point;
            let (fill, r) = match m.classification {
                Classification::Submaximal => ("black", 5.0),
                Classification::Tangency => ("orange", 5.0),
                Classification::Rejected => ("none", 3.0),
                _ => ("white", 5.0),
            };
            let _ = writeln!(
                s,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{r}\" fill=\"{fill}\" stroke=\"black\"><title>{}</title></circle>",
                px(x),
                py(y),
                m.classification
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn fmt_r2(r2: f64) -> String {
    if r2.is_infinite() {
        "inf".into()
    } else {
        format!("{r2:.12}")
    }
}

/// Angle helper kept public for callers reporting φ/ψ in degrees.
pub fn degrees(rad: f64) -> f64 {
    rad * 180.0 / PI
}
