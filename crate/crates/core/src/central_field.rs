//! Planar motion in a power-law central potential `V = −sgn(n)·k·r^{−n}`.
//!
//! With `k > 0` every row of the classic table is a bound problem:
//! `n = −2` is the isotropic oscillator (`V = k r²`), `n = −1` a uniform
//! radial field (`V = k r`), `n = 0` a free particle, `n = 1` Kepler and
//! `n = 2` the inverse-cube force. Orbits are computed two ways, by
//! quadrature of the energy and angular-momentum integrals and by direct
//! Cartesian integration, and the latter feeds the virial averages and the
//! period-amplitude sweep.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, atan2, cos, expm1, ln, ln_1p, powf, sin, sqrt};
use crate::ode::{hermite, Stepper, StepperOptions};
use crate::quad::{integrate, QuadOptions};
use crate::roots::bisect;

const PI: f64 = core::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PotentialSpec {
    /// Exponent in `V ∝ 1/rⁿ`.
    pub n: f64,
    /// Strength; positive is attractive (confining for `n < 0`).
    pub k: f64,
    /// Particle mass.
    pub m: f64,
}

impl PotentialSpec {
    pub fn new(n: f64, k: f64, m: f64) -> Result<Self> {
        if !n.is_finite() {
            return Err(Error::Domain { what: "potential exponent", value: n });
        }
        if !k.is_finite() {
            return Err(Error::Domain { what: "potential strength", value: k });
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Domain { what: "particle mass", value: m });
        }
        Ok(Self { n, k, m })
    }

    pub fn potential(&self, r: f64) -> f64 {
        if self.n == 0.0 {
            0.0
        } else {
            -self.n.signum() * self.k * powf(r, -self.n)
        }
    }

    /// `dV/dr`.
    pub fn dpotential(&self, r: f64) -> f64 {
        abs(self.n) * self.k * powf(r, -self.n - 1.0)
    }

    pub fn energy(&self, r: f64, rdot: f64, l: f64) -> f64 {
        0.5 * self.m * rdot * rdot + 0.5 * l * l / (self.m * r * r) + self.potential(r)
    }

    /// `ṙ²` at radius `r` for given `E` and `l`; negative where forbidden.
    pub fn radial_speed_sq(&self, e: f64, l: f64, r: f64) -> f64 {
        2.0 / self.m * (e - self.potential(r)) - l * l / (self.m * self.m * r * r)
    }

    /// Speed of the circular orbit of radius `r` (requires an attractive force).
    pub fn circular_speed(&self, r: f64) -> Result<f64> {
        let f = r * self.dpotential(r) / self.m;
        if f > 0.0 {
            Ok(sqrt(f))
        } else {
            Err(Error::Unbounded)
        }
    }

    /// Attractive with a finite period for every bound orbit.
    pub fn has_periods(&self) -> bool {
        self.k > 0.0 && self.n != 0.0 && self.n < 2.0
    }

    fn energy_scale(&self, e: f64, l: f64, r: f64) -> f64 {
        abs(e) + abs(self.potential(r)) + l * l / (self.m * r * r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrbitState {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub rdot: f64,
    pub thetadot: f64,
    pub e: f64,
    pub l: f64,
}

impl OrbitState {
    pub fn new(spec: &PotentialSpec, t: f64, r: f64, theta: f64, rdot: f64, thetadot: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain { what: "orbit radius", value: r });
        }
        let l = spec.m * r * r * thetadot;
        Ok(Self { t, r, theta, rdot, thetadot, e: spec.energy(r, rdot, l), l })
    }

    pub fn kinetic(&self, spec: &PotentialSpec) -> f64 {
        0.5 * spec.m * (self.rdot * self.rdot + self.r * self.r * self.thetadot * self.thetadot)
    }

    /// The virial `A = p·r = m r ṙ`.
    pub fn virial(&self, spec: &PotentialSpec) -> f64 {
        spec.m * self.r * self.rdot
    }
}

/// Radii where `ṙ = 0` bracketing the allowed region that contains the
/// circular radius. A radial orbit (`l = 0`) has inner turning point 0.
pub fn turning_points(spec: &PotentialSpec, e: f64, l: f64) -> Result<(f64, f64)> {
    if !spec.has_periods() {
        return Err(Error::Unbounded);
    }
    let n = spec.n;
    if l == 0.0 {
        // −sgn(n) k r^{−n} = E
        let ratio = -n.signum() * e / spec.k;
        if !(ratio > 0.0) {
            return Err(Error::Unbounded);
        }
        return Ok((0.0, powf(ratio, -1.0 / n)));
    }
    // V_eff′ = 0: l²/(m r³) = |n| k r^{−n−1}.
    let rc = powf(l * l / (spec.m * abs(n) * spec.k), 1.0 / (2.0 - n));
    let q = |r: f64| r * r * spec.radial_speed_sq(e, l, r);
    let qc = q(rc);
    let tol = 1e-12 * rc * rc * spec.energy_scale(e, l, rc) / spec.m;
    if qc < -tol {
        return Err(Error::ForbiddenRegion { r: rc });
    }
    if qc <= tol {
        return Ok((rc, rc));
    }
    let mut hi = 2.0 * rc;
    while q(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e15 * rc {
            return Err(Error::Unbounded);
        }
    }
    let mut lo = 0.5 * rc;
    while q(lo) > 0.0 {
        lo *= 0.5;
        if lo < 1e-15 * rc {
            return Err(Error::Domain { what: "inner turning point", value: lo });
        }
    }
    let r_min = bisect(q, lo, rc, 1e-15 * rc)?;
    let r_max = bisect(q, rc, hi, 1e-15 * hi)?;
    Ok((r_min, r_max))
}

/// Angle and time reached at radius `r` moving monotonically from `r0`:
/// `θ = θ₀ + ∫ (l/mr²) dr/|ṙ|`, `t = t₀ + ∫ dr/|ṙ|`.
///
/// Either endpoint may be a turning point; the interval is split at its
/// midpoint and each half is mapped with `r = a + s²` or `r = b − s²`, which
/// turns the inverse-square-root endpoint into a smooth integrand.
pub fn orbit_quadrature(
    spec: &PotentialSpec,
    e: f64,
    l: f64,
    r0: f64,
    theta0: f64,
    t0: f64,
    r: f64,
) -> Result<(f64, f64)> {
    for x in [r0, r] {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Domain { what: "orbit radius", value: x });
        }
    }
    let (a, b) = if r0 <= r { (r0, r) } else { (r, r0) };
    let q = |x: f64| spec.radial_speed_sq(e, l, x);
    // Radicand at each endpoint; within rounding of zero it is a turning point.
    let mut ends = [0.0; 2];
    for (slot, x) in ends.iter_mut().zip([a, b]) {
        let tol = 1e-10 * spec.energy_scale(e, l, x) / spec.m;
        let v = q(x);
        if v < -tol {
            return Err(Error::ForbiddenRegion { r: x });
        }
        *slot = if v <= tol { 0.0 } else { v };
    }
    if a == b {
        return Ok((theta0, t0));
    }
    const PROBES: usize = 256;
    for i in 1..PROBES {
        let x = a + (b - a) * i as f64 / PROBES as f64;
        if q(x) <= 0.0 {
            return Err(Error::TurningPointCrossing { r: x });
        }
    }
    // ṙ² at `end + d` as its endpoint value plus an increment computed
    // without cancellation, so the integrand stays clean as d → 0.
    let radicand = |end: f64, at_end: f64, d: f64| {
        let lp = ln_1p(d / end);
        let dv = if spec.n == 0.0 {
            0.0
        } else {
            -spec.n.signum() * spec.k * powf(end, -spec.n) * expm1(-spec.n * lp)
        };
        let dc = l * l / (spec.m * spec.m * end * end) * expm1(-2.0 * lp);
        at_end - 2.0 / spec.m * dv - dc
    };
    let mid = 0.5 * (a + b);
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-12, max_panels: 4000 };
    let piece = |weight: &dyn Fn(f64) -> f64| -> Result<f64> {
        let g = |x: f64, v: f64| if v > 0.0 { weight(x) / sqrt(v) } else { 0.0 };
        let lower = integrate(|s| 2.0 * s * g(a + s * s, radicand(a, ends[0], s * s)), 0.0, sqrt(mid - a), opts)?;
        let upper = integrate(|s| 2.0 * s * g(b - s * s, radicand(b, ends[1], -s * s)), 0.0, sqrt(b - mid), opts)?;
        Ok(lower + upper)
    };
    let dt = piece(&|_| 1.0)?;
    let dtheta = if l == 0.0 { 0.0 } else { piece(&|x| l / (spec.m * x * x))? };
    Ok((theta0 + dtheta, t0 + dt))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrbitOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Largest step; 0 means `t_end/4000`.
    pub h_max: f64,
    pub max_steps: usize,
    /// Stop once this many same-direction radial turning points are seen.
    pub stop_after_turns: Option<usize>,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-14, h_max: 0.0, max_steps: 2_000_000, stop_after_turns: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum StopReason {
    Completed,
    TurnLimit,
    /// The particle reached the center; the trajectory ends just before.
    Collision { t: f64, r: f64 },
}

/// Cartesian node `(x, y, vx, vy)` with its time derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectoryNode {
    pub t: f64,
    pub y: [f64; 4],
    pub dy: [f64; 4],
    /// Unwrapped polar angle.
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TurnKind {
    Pericenter,
    Apocenter,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trajectory {
    pub spec: PotentialSpec,
    pub nodes: Vec<TrajectoryNode>,
    pub stop: StopReason,
    pub e0: f64,
    pub l0: f64,
}

fn rhs(spec: &PotentialSpec) -> impl Fn(f64, &[f64; 4]) -> [f64; 4] + '_ {
    move |_, y| {
        let r = sqrt(y[0] * y[0] + y[1] * y[1]);
        let a = -spec.dpotential(r) / (spec.m * r);
        [y[2], y[3], a * y[0], a * y[1]]
    }
}

fn polar(spec: &PotentialSpec, t: f64, y: &[f64; 4], theta: f64) -> OrbitState {
    let r = sqrt(y[0] * y[0] + y[1] * y[1]);
    let rdot = (y[0] * y[2] + y[1] * y[3]) / r;
    let l = spec.m * (y[0] * y[3] - y[1] * y[2]);
    let thetadot = l / (spec.m * r * r);
    OrbitState { t, r, theta, rdot, thetadot, e: spec.energy(r, rdot, l), l }
}

fn unwrap(prev: f64, y: &[f64; 4]) -> f64 {
    let raw = atan2(y[1], y[0]);
    let mut d = raw - prev % (2.0 * PI);
    while d > PI {
        d -= 2.0 * PI;
    }
    while d < -PI {
        d += 2.0 * PI;
    }
    prev + d
}

/// Integrate `r̈ = −V′(r) r̂/m` in Cartesian coordinates from `start` to
/// `t_end`. Approaching the center ends the run with a partial trajectory
/// flagged [`StopReason::Collision`].
pub fn integrate_orbit(spec: &PotentialSpec, start: &OrbitState, t_end: f64, opts: OrbitOptions) -> Result<Trajectory> {
    if !(t_end > start.t) {
        return Err(Error::Domain { what: "orbit end time", value: t_end });
    }
    let (c, s) = (cos(start.theta), sin(start.theta));
    let vr = start.rdot;
    let vt = start.r * start.thetadot;
    let y0 = [start.r * c, start.r * s, vr * c - vt * s, vr * s + vt * c];
    let f = rhs(spec);
    let span = t_end - start.t;
    let h_max = if opts.h_max > 0.0 { opts.h_max } else { span / 4000.0 };
    let stepper_opts = StepperOptions {
        rtol: opts.rtol,
        atol: opts.atol,
        h_init: h_max.min(1e-3 * span),
        h_max,
        h_min: 1e-14 * span,
        max_steps: opts.max_steps,
    };
    let mut stepper = Stepper::new(&f, start.t, y0, stepper_opts);
    let mut nodes = alloc::vec![TrajectoryNode { t: start.t, y: y0, dy: stepper.dydt, theta: start.theta }];
    let mut r_peak = start.r;
    let mut turns = [0usize; 2];
    let mut stop = StopReason::Completed;
    while stepper.t < t_end {
        let step = match stepper.step(&f, t_end) {
            Ok(s) => s,
            Err(err) => {
                let last = nodes.last().map(|n| polar(spec, n.t, &n.y, n.theta)).unwrap_or(*start);
                if last.r < 1e-3 * r_peak && last.rdot < 0.0 {
                    stop = StopReason::Collision { t: last.t, r: last.r };
                    break;
                }
                return Err(err);
            }
        };
        let prev = *nodes.last().unwrap();
        let theta = unwrap(prev.theta, &step.y1);
        let node = TrajectoryNode { t: step.t1, y: step.y1, dy: step.dy1, theta };
        let a = polar(spec, prev.t, &prev.y, prev.theta);
        let b = polar(spec, node.t, &node.y, node.theta);
        nodes.push(node);
        r_peak = r_peak.max(b.r);
        if b.r < 1e-9 * r_peak {
            stop = StopReason::Collision { t: b.t, r: b.r };
            break;
        }
        if a.rdot < 0.0 && b.rdot >= 0.0 {
            turns[0] += 1;
        } else if a.rdot > 0.0 && b.rdot <= 0.0 {
            turns[1] += 1;
        }
        if let Some(limit) = opts.stop_after_turns {
            if turns[0].max(turns[1]) >= limit {
                stop = StopReason::TurnLimit;
                break;
            }
        }
    }
    Ok(Trajectory { spec: *spec, nodes, stop, e0: start.e, l0: start.l })
}

impl Trajectory {
    pub fn t_start(&self) -> f64 {
        self.nodes[0].t
    }

    pub fn t_end(&self) -> f64 {
        self.nodes[self.nodes.len() - 1].t
    }

    /// Polar state at every accepted step.
    pub fn states(&self) -> Vec<OrbitState> {
        self.nodes.iter().map(|n| polar(&self.spec, n.t, &n.y, n.theta)).collect()
    }

    fn segment(&self, t: f64) -> usize {
        let i = self.nodes.partition_point(|n| n.t <= t);
        i.clamp(1, self.nodes.len() - 1) - 1
    }

    fn cartesian_at(&self, t: f64) -> ([f64; 4], [f64; 4], usize) {
        let i = self.segment(t);
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        let mut y = [0.0; 4];
        let mut dy = [0.0; 4];
        for k in 0..4 {
            let (v, d) = hermite(a.t, a.y[k], a.dy[k], b.t, b.y[k], b.dy[k], t);
            y[k] = v;
            dy[k] = d;
        }
        (y, dy, i)
    }

    /// Interpolated polar state inside the stored span.
    pub fn state_at(&self, t: f64) -> Result<OrbitState> {
        if !(t >= self.t_start() && t <= self.t_end()) {
            return Err(Error::Domain { what: "time outside trajectory", value: t });
        }
        let (y, _, i) = self.cartesian_at(t);
        Ok(polar(&self.spec, t, &y, unwrap(self.nodes[i].theta, &y)))
    }

    fn rdot_at(&self, t: f64) -> f64 {
        let (y, _, _) = self.cartesian_at(t);
        (y[0] * y[2] + y[1] * y[3]) / sqrt(y[0] * y[0] + y[1] * y[1])
    }

    /// Times where `ṙ` changes sign, polished by bisection on the
    /// interpolant.
    pub fn turning_times(&self) -> Vec<(f64, TurnKind)> {
        let mut out = Vec::new();
        for w in self.nodes.windows(2) {
            let ra = polar(&self.spec, w[0].t, &w[0].y, 0.0).rdot;
            let rb = polar(&self.spec, w[1].t, &w[1].y, 0.0).rdot;
            let kind = if ra < 0.0 && rb >= 0.0 {
                TurnKind::Pericenter
            } else if ra > 0.0 && rb <= 0.0 {
                TurnKind::Apocenter
            } else {
                continue;
            };
            let t = bisect(|t| self.rdot_at(t), w[0].t, w[1].t, 1e-15 * abs(w[1].t).max(1.0))
                .unwrap_or(w[1].t);
            out.push((t, kind));
        }
        out
    }

    /// First and last turning point of the more frequent kind, and the
    /// number of radial periods between them.
    fn period_window(&self) -> Option<(f64, f64, usize)> {
        let turns = self.turning_times();
        let pick = |kind: TurnKind| -> Vec<f64> {
            turns.iter().filter(|p| p.1 == kind).map(|p| p.0).collect()
        };
        let (peri, apo) = (pick(TurnKind::Pericenter), pick(TurnKind::Apocenter));
        let times = if apo.len() >= peri.len() { apo } else { peri };
        if times.len() < 2 {
            return None;
        }
        Some((times[0], times[times.len() - 1], times.len() - 1))
    }

    /// Mean spacing of same-direction turning points.
    pub fn radial_period(&self) -> Result<f64> {
        let (a, b, k) = self.period_window().ok_or(Error::NotFound { what: "two same-direction turning points" })?;
        Ok((b - a) / k as f64)
    }

    /// Largest deviation of `E` and `l` from their initial values, scaled
    /// by `K₀ + |V₀|` and by `|l₀|` (or `m r₀ v₀` for radial orbits).
    pub fn drift(&self) -> (f64, f64) {
        let s0 = polar(&self.spec, self.nodes[0].t, &self.nodes[0].y, 0.0);
        let e_scale = s0.kinetic(&self.spec) + abs(self.spec.potential(s0.r));
        let [_, _, vx, vy] = self.nodes[0].y;
        let v0 = sqrt(vx * vx + vy * vy);
        let l_scale = if self.l0 != 0.0 { abs(self.l0) } else { self.spec.m * s0.r * v0 };
        self.nodes.iter().fold((0.0, 0.0), |(de, dl), n| {
            let s = polar(&self.spec, n.t, &n.y, 0.0);
            let ee = abs(s.e - self.e0) / e_scale;
            let ll = if l_scale > 0.0 { abs(s.l - self.l0) / l_scale } else { abs(s.l) };
            (de.max(ee), dl.max(ll))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VirialReport {
    pub n: f64,
    pub t_from: f64,
    pub t_to: f64,
    /// Whole radial periods in the window; 0 for a circular orbit.
    pub periods: usize,
    pub k_avg: f64,
    pub v_avg: f64,
    /// `(A(t_to) − A(t_from)) / (t_to − t_from)`.
    pub a_drift: f64,
}

impl VirialReport {
    /// `⟨2K + nV⟩` relative to `⟨K⟩ + |⟨V⟩|`; zero for a bounded orbit.
    pub fn residual(&self) -> f64 {
        let scale = abs(self.k_avg) + abs(self.v_avg);
        abs(2.0 * self.k_avg + self.n * self.v_avg) / scale
    }
}

/// Time averages of `K` and `V` over a whole number of radial periods, or
/// over the full span for a circular orbit.
pub fn virial_average(traj: &Trajectory) -> Result<VirialReport> {
    let spec = traj.spec;
    let (t_from, t_to, periods) = match traj.period_window() {
        Some(w) => w,
        None => {
            let states = traj.states();
            let (lo, hi) = states.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), s| (lo.min(s.r), hi.max(s.r)));
            if hi - lo > 1e-6 * hi || !matches!(traj.stop, StopReason::Completed) {
                return Err(Error::Unbounded);
            }
            (traj.t_start(), traj.t_end(), 0)
        }
    };
    // Trapezoid with the endpoint-slope correction on each step, using the
    // exact derivatives K′ = m v·a and V′ = V′(r) ṙ.
    let sample = |t: f64, y: &[f64; 4], dy: &[f64; 4]| {
        let s = polar(&spec, t, y, 0.0);
        let k = s.kinetic(&spec);
        let dk = spec.m * (y[2] * dy[2] + y[3] * dy[3]);
        let v = spec.potential(s.r);
        let dv = spec.dpotential(s.r) * s.rdot;
        (k, dk, v, dv, s.virial(&spec))
    };
    let (ya, dya, _) = traj.cartesian_at(t_from);
    let (yb, dyb, _) = traj.cartesian_at(t_to);
    let mut knots: Vec<(f64, [f64; 4], [f64; 4])> = alloc::vec![(t_from, ya, dya)];
    knots.extend(traj.nodes.iter().filter(|n| n.t > t_from && n.t < t_to).map(|n| (n.t, n.y, n.dy)));
    knots.push((t_to, yb, dyb));
    let mut k_int = 0.0;
    let mut v_int = 0.0;
    for w in knots.windows(2) {
        let h = w[1].0 - w[0].0;
        let a = sample(w[0].0, &w[0].1, &w[0].2);
        let b = sample(w[1].0, &w[1].1, &w[1].2);
        k_int += 0.5 * h * (a.0 + b.0) + h * h / 12.0 * (a.1 - b.1);
        v_int += 0.5 * h * (a.2 + b.2) + h * h / 12.0 * (a.3 - b.3);
    }
    let span = t_to - t_from;
    let a0 = sample(t_from, &ya, &dya).4;
    let a1 = sample(t_to, &yb, &dyb).4;
    Ok(VirialReport {
        n: spec.n,
        t_from,
        t_to,
        periods,
        k_avg: k_int / span,
        v_avg: v_int / span,
        a_drift: (a1 - a0) / span,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeriodSweep {
    pub n: f64,
    /// Tangential speed at the apocenter in units of the circular speed.
    pub shape: f64,
    pub amplitudes: Vec<f64>,
    pub periods: Vec<f64>,
    pub slope: f64,
    pub expected: f64,
}

/// Radial period of geometrically similar orbits started at apocenter
/// `r = a` with tangential speed `shape·v_c(a)`, fitted as `T ∝ a^slope`.
pub fn period_amplitude_exponent(spec: &PotentialSpec, amplitudes: &[f64], shape: f64) -> Result<PeriodSweep> {
    if !spec.has_periods() {
        return Err(Error::Unbounded);
    }
    if amplitudes.len() < 5 {
        return Err(Error::Domain { what: "amplitude count (need at least 5)", value: amplitudes.len() as f64 });
    }
    if !(shape > 0.0 && shape < 1.0) {
        return Err(Error::Domain { what: "orbit shape", value: shape });
    }
    let mut periods = Vec::with_capacity(amplitudes.len());
    for &a in amplitudes {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain { what: "amplitude", value: a });
        }
        let vc = spec.circular_speed(a)?;
        let start = OrbitState::new(spec, 0.0, a, 0.0, 0.0, shape * vc / a)?;
        // Generous horizon; the run stops after three full radial periods.
        let t_circ = 2.0 * PI * a / vc;
        let opts = OrbitOptions { h_max: t_circ / 200.0, stop_after_turns: Some(4), ..OrbitOptions::default() };
        let traj = integrate_orbit(spec, &start, 100.0 * t_circ, opts)?;
        periods.push(traj.radial_period()?);
    }
    let pts: Vec<(f64, f64)> = amplitudes.iter().zip(&periods).map(|(a, t)| (ln(*a), ln(*t))).collect();
    Ok(PeriodSweep {
        n: spec.n,
        shape,
        amplitudes: amplitudes.to_vec(),
        periods,
        slope: crate::astro::fit_slope(&pts),
        expected: 1.0 + 0.5 * spec.n,
    })
}
