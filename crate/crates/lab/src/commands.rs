//! One function per subcommand, each turning a run configuration into a
//! [`Report`].

use std::path::Path;

use emden_core::approximants::{compare, comparison_table, Approximant, ApproximantKind};
use emden_core::astro::{self, DEFAULT_KAPPA, DEFAULT_MU};
use emden_core::central_field::{
    integrate_orbit, period_amplitude_exponent, turning_points, virial_average, OrbitOptions, OrbitState,
    PotentialSpec, StopReason,
};
use emden_core::constants::{L_SUN, M_SUN};
use emden_core::emden::{dimensionalize, HomologyInvariants};
use emden_core::invariant_plane::{integrate_wu, picard_w, reconstruct};
use emden_core::roots::bisect;
use emden_core::noether::{check_nonconservation, energy_crossing, CHARGE_UNIT};
use emden_core::series::{q, Q};
use emden_core::{EmdenProfile, IntegratorOptions, PolytropeIndex, SurfaceConstants};

use crate::config::{Command, Params, RunConfig};
use crate::error::{Context, LabError, LabResult};
use crate::report::{capped, fixed, Cell, Report, Section, Table};

pub const TABLE2_N: [f64; 8] = [0.0, 1.0, 1.5, 2.0, 3.0, 4.0, 4.5, 5.0];
const NOETHER_N: [f64; 5] = [0.0, 2.0, 3.0, 4.0, 5.0];
const SWEEP_AMPLITUDES: [f64; 6] = [0.5, 0.75, 1.0, 1.5, 2.0, 3.0];
const APPROX_SAMPLES: usize = 101;

pub fn run(cfg: &RunConfig) -> LabResult<Report> {
    let p = &cfg.params;
    match &cfg.command {
        Command::Table2 { sig6 } => table2(p, *sig6),
        Command::Profile => profile(p),
        Command::Invariants => invariants(p),
        Command::Reconstruct => reconstruction(p),
        Command::Approx { kind } => approx(p, kind),
        Command::Noether => noether(p),
        Command::Wd => wd(p),
        Command::Zams { batch } => zams(p, batch.as_deref()),
        Command::Orbit { sweep: false } => orbit(p),
        Command::Orbit { sweep: true } => sweep(p),
    }
}

fn indices(p: &Params, default: &[f64]) -> LabResult<Vec<PolytropeIndex>> {
    p.n.as_deref()
        .unwrap_or(default)
        .iter()
        .map(|&n| PolytropeIndex::new(n).map_err(|e| LabError::Usage(format!("--n {n}: {e}"))))
        .collect()
}

fn options(p: &Params) -> IntegratorOptions {
    match p.tol {
        Some(t) => IntegratorOptions::default().with_rtol(t),
        None => IntegratorOptions::default(),
    }
}

fn solve(n: PolytropeIndex, p: &Params) -> LabResult<EmdenProfile> {
    EmdenProfile::solve(n, options(p)).context(|| format!("profile n = {n}"))
}

fn surface(prof: &EmdenProfile) -> SurfaceConstants {
    *prof.surface().expect("solved profiles carry their surface")
}

/// `n` as a small-denominator fraction, when it is one.
fn as_fraction(n: f64) -> Option<Q> {
    (1..=12i128).find_map(|d| {
        let num = (n * d as f64).round();
        ((n * d as f64 - num).abs() < 1e-9).then(|| q(num as i128, d))
    })
}

fn omega_tilde_cell(n: PolytropeIndex) -> Cell {
    match (n.omega_tilde(), as_fraction(n.value())) {
        (None, _) => Cell::Shown(f64::INFINITY, String::new()),
        (Some(_), Some(f)) => Cell::text((q(2, 1) / (f - q(1, 1))).to_string()),
        (Some(w), None) => Cell::Num(w),
    }
}

fn mass_radius_note(n: PolytropeIndex) -> String {
    let v = n.value();
    if n.is_n5() {
        return "R = inf for any M".into();
    }
    if n.is_n1() {
        return "R independent of M".into();
    }
    if v == 3.0 {
        return "M independent of R".into();
    }
    let exponent = match as_fraction(v) {
        Some(f) => ((q(1, 1) - f) / (q(3, 1) - f)).to_string(),
        None => crate::report::sig6((1.0 - v) / (3.0 - v)),
    };
    let note = format!("R ~ M^({exponent})");
    if n.is_n0() {
        note + "; uniform density"
    } else {
        note
    }
}

fn table2(p: &Params, sig6: bool) -> LabResult<Report> {
    let mut t = Table::new(&[
        "n",
        "omega_tilde",
        "xi1",
        "rho_ratio",
        "omega0",
        "r_core_frac",
        "m_core_frac",
        "mass_radius_note",
    ]);
    for n in indices(p, &TABLE2_N)? {
        let s = surface(&solve(n, p)?);
        let row = if sig6 {
            vec![
                Cell::Num(s.xi1),
                Cell::Num(s.rho_ratio),
                Cell::opt(s.omega0),
                Cell::Num(s.r_core_frac),
                Cell::Num(s.m_core_frac),
            ]
        } else {
            vec![
                fixed(s.xi1, 3),
                capped(s.rho_ratio, 6, 3),
                s.omega0.map_or(Cell::Undefined, |w| capped(w, 4, 3)),
                fixed(s.r_core_frac, 2),
                fixed(s.m_core_frac, 2),
            ]
        };
        let mut full = vec![Cell::Num(n.value()), omega_tilde_cell(n)];
        full.extend(row);
        full.push(Cell::Text(mass_radius_note(n)));
        t.push(full);
    }
    let mut r = Report::new("table2");
    r.sections.push(Section { summary: Vec::new(), table: Some(t) });
    Ok(r)
}

fn surface_summary(sec: &mut Section, n: PolytropeIndex, s: &SurfaceConstants) {
    sec.put("n", Cell::Num(n.value()));
    sec.put("xi1", Cell::Num(s.xi1));
    sec.put("m1", Cell::Num(s.m1));
    sec.put("omega0", Cell::opt(s.omega0));
    sec.put("rho_ratio", Cell::Num(s.rho_ratio));
    sec.put("xi_core", Cell::Num(s.xi_core));
    sec.put("r_core_frac", Cell::Num(s.r_core_frac));
    sec.put("m_core_frac", Cell::Num(s.m_core_frac));
}

fn profile(p: &Params) -> LabResult<Report> {
    let dimensional = match (p.k, p.rho_c) {
        (Some(k), Some(rho_c)) => Some((k, rho_c)),
        (None, None) => None,
        _ => return Err(LabError::Usage("profile needs both --k and --rho-c for physical units".into())),
    };
    let mut cols = vec!["n", "xi", "theta", "dtheta", "u", "v", "w", "z", "r_frac", "m_frac", "rho_frac"];
    if dimensional.is_some() {
        cols.extend(["r", "m", "rho"]);
    }
    let mut r = Report::new("profile");
    for n in indices(p, &[3.0])? {
        let prof = solve(n, p)?;
        let s = surface(&prof);
        let nv = n.value();
        let mut sec = Section::default();
        surface_summary(&mut sec, n, &s);
        let meta = prof.meta();
        sec.put("accepted_steps", Cell::Int(meta.accepted_steps as i64));
        sec.put("rejected_steps", Cell::Int(meta.rejected_steps as i64));

        let scale = match dimensional {
            Some((k, rho_c)) => {
                let phys = dimensionalize(&prof, k, rho_c).context(|| format!("physical units n = {n}"))?;
                sec.put("k", Cell::Num(k));
                sec.put("rho_c", Cell::Num(rho_c));
                sec.put("alpha_cm", Cell::Num(phys.alpha));
                sec.put("mass_msun", Cell::Num(phys.total_mass() / M_SUN));
                sec.put("radius_cm", Cell::Num(phys.radius()));
                Some((phys.alpha, rho_c, phys.total_mass() / s.m1))
            }
            None => None,
        };

        // Center, the stored nodes, and the core radius in order.
        let mut xs: Vec<(f64, f64, f64)> = vec![(0.0, 1.0, 0.0)];
        xs.extend(prof.nodes().iter().map(|nd| (nd.xi, nd.theta, nd.dtheta)));
        if s.xi_core > 0.0 && s.xi_core < prof.xi_end() {
            let (t, d) = prof.state_at(s.xi_core).context(|| format!("core state n = {n}"))?;
            let at = xs.partition_point(|x| x.0 < s.xi_core);
            if xs.get(at).is_none_or(|x| x.0 != s.xi_core) {
                xs.insert(at, (s.xi_core, t, d));
            }
        }
        let mut t = Table::new(&cols);
        for (xi, theta, dtheta) in xs {
            let inv = HomologyInvariants::from_state(n, xi, theta, dtheta);
            let rho_frac = if n.is_n0() { 1.0 } else { theta.max(0.0).powf(nv) };
            let m_dimless = -xi * xi * dtheta;
            let mut row = vec![
                Cell::Num(nv),
                Cell::Num(xi),
                Cell::Num(theta),
                Cell::Num(dtheta),
                Cell::Num(inv.u),
                Cell::Num(inv.v),
                Cell::Num(inv.w),
                Cell::Num(inv.z),
                Cell::Num(xi / s.xi1),
                Cell::Num(m_dimless / s.m1),
                Cell::Num(rho_frac),
            ];
            if let Some((alpha, rho_c, m_unit)) = scale {
                row.extend([Cell::Num(alpha * xi), Cell::Num(m_unit * m_dimless), Cell::Num(rho_c * rho_frac)]);
            }
            t.push(row);
        }
        sec.table = Some(t);
        r.sections.push(sec);
    }
    Ok(r)
}

fn invariants(p: &Params) -> LabResult<Report> {
    let mut r = Report::new("invariants");
    for n in indices(p, &[3.0])? {
        let curve = integrate_wu(n).context(|| format!("(u, w) curve n = {n}"))?;
        let mut sec = Section::default();
        sec.put("n", Cell::Num(n.value()));
        sec.put("z_max", Cell::Num(curve.z_max()));
        sec.put("terminal_coefficient", Cell::opt(curve.terminal.map(|t| t.coefficient)));
        sec.put("terminal_exponent", Cell::opt(curve.terminal.map(|t| t.exponent)));
        let mut t = Table::new(&["n", "u", "w", "z", "w_picard"]);
        for (u, w) in curve.samples() {
            let z = 3.0 - u;
            t.push(vec![
                Cell::Num(n.value()),
                Cell::Num(u),
                Cell::Num(w),
                Cell::Num(z),
                Cell::opt(picard_w(n, z).ok()),
            ]);
        }
        sec.table = Some(t);
        r.sections.push(sec);
    }
    Ok(r)
}

fn reconstruction(p: &Params) -> LabResult<Report> {
    let mut r = Report::new("reconstruct");
    for n in indices(p, &[3.0])? {
        let rec = integrate_wu(n)
            .and_then(|c| reconstruct(&c))
            .context(|| format!("reconstruction n = {n}"))?;
        let mut sec = Section::default();
        sec.put("n", Cell::Num(n.value()));
        sec.put("xi1", Cell::Num(rec.surface.xi1));
        sec.put("m1", Cell::Num(rec.surface.m1));
        sec.put("rho_ratio", Cell::Num(rec.surface.rho_ratio));
        sec.put("omega0", Cell::opt(rec.surface.omega0));
        let mut t = Table::new(&["n", "z", "w", "rho_frac", "m_frac", "r_frac", "theta"]);
        for pt in &rec.points {
            t.push(vec![
                Cell::Num(n.value()),
                Cell::Num(pt.z),
                Cell::Num(pt.w),
                Cell::Num(pt.rho_frac),
                Cell::Num(pt.m_frac),
                Cell::Num(pt.r_frac),
                Cell::Num(pt.theta),
            ]);
        }
        sec.table = Some(t);
        r.sections.push(sec);
    }
    Ok(r)
}

fn parse_kind(s: &str) -> LabResult<ApproximantKind> {
    Ok(match s {
        "picard" => ApproximantKind::Picard,
        "pade3" => ApproximantKind::Pade3,
        "poly10" => ApproximantKind::Poly10_3,
        _ => match s.strip_prefix("taylor").and_then(|k| k.parse().ok()) {
            Some(order) => ApproximantKind::Taylor { order },
            None => return Err(LabError::Usage(format!("unknown approximant `{s}`"))),
        },
    })
}

fn kind_name(k: ApproximantKind) -> String {
    match k {
        ApproximantKind::Picard => "picard".into(),
        ApproximantKind::Pade3 => "pade3".into(),
        ApproximantKind::Poly10_3 => "poly10".into(),
        ApproximantKind::Taylor { order } => format!("taylor{order}"),
    }
}

/// First sign change of the approximant on `(0, hi]`, polished by bisection.
fn first_zero(a: &Approximant, hi: f64) -> Option<f64> {
    let hi = hi.min(a.domain.1);
    let steps = 4000;
    let f = |x: f64| a.eval(x).unwrap_or(f64::NAN);
    let xs: Vec<f64> = (0..=steps).map(|i| hi * i as f64 / steps as f64).collect();
    let k = xs.windows(2).position(|w| f(w[0]) > 0.0 && f(w[1]) <= 0.0)?;
    bisect(f, xs[k], xs[k + 1], 1e-13).ok()
}

fn approx(p: &Params, kinds: &[String]) -> LabResult<Report> {
    let requested: Vec<ApproximantKind> = kinds.iter().map(|s| parse_kind(s)).collect::<LabResult<_>>()?;
    let samples = p.samples.unwrap_or(APPROX_SAMPLES);
    let mut r = Report::new("approx");
    for n in indices(p, &[3.0])? {
        let prof = solve(n, p)?;
        let hi = p.xi_max.unwrap_or_else(|| surface(&prof).xi1);
        let kinds = if !requested.is_empty() {
            requested.clone()
        } else if n.value() == 3.0 {
            vec![ApproximantKind::Picard, ApproximantKind::Poly10_3, ApproximantKind::Pade3]
        } else if n.picard_exponent().is_some() {
            vec![ApproximantKind::Picard, ApproximantKind::Taylor { order: 6 }]
        } else {
            vec![ApproximantKind::Taylor { order: 6 }]
        };
        for kind in kinds {
            let what = || format!("{} for n = {n}", kind_name(kind));
            let a = Approximant::new(kind, n).map_err(|e| LabError::Usage(format!("{}: {e}", what())))?;
            let rep = compare(&a, &prof, (0.0, hi)).context(what)?;
            let mut sec = Section::default();
            sec.put("n", Cell::Num(n.value()));
            sec.put("kind", Cell::Text(kind_name(kind)));
            sec.put("xi_from", Cell::Num(rep.xi_range.0));
            sec.put("xi_to", Cell::Num(rep.xi_range.1));
            sec.put("max_abs_error", Cell::Num(rep.max_abs_error));
            sec.put("xi_at_max_abs", Cell::Num(rep.xi_at_max_abs));
            sec.put("max_rel_error", Cell::Num(rep.max_rel_error));
            sec.put("xi_at_max_rel", Cell::Num(rep.xi_at_max_rel));
            sec.put("zero_offset", Cell::opt(rep.zero_offset));
            sec.put("first_zero", Cell::opt(first_zero(&a, 2.0 * hi)));
            let mut t = Table::new(&["n", "kind", "xi", "exact", "approx", "error"]);
            for pt in comparison_table(&a, &prof, (0.0, hi), samples).context(what)? {
                t.push(vec![
                    Cell::Num(n.value()),
                    Cell::Text(kind_name(kind)),
                    Cell::Num(pt.xi),
                    Cell::Num(pt.exact),
                    Cell::Num(pt.approx),
                    Cell::Num(pt.approx - pt.exact),
                ]);
            }
            sec.table = Some(t);
            r.sections.push(sec);
        }
    }
    Ok(r)
}

fn noether(p: &Params) -> LabResult<Report> {
    let mut r = Report::new("noether");
    for n in indices(p, &NOETHER_N)? {
        let prof = solve(n, p)?;
        let rep = check_nonconservation(&prof).context(|| format!("charge balance n = {n}"))?;
        let mut sec = Section::default();
        sec.put("n", Cell::Num(n.value()));
        sec.put("unit", Cell::text(CHARGE_UNIT));
        sec.put("max_abs_charge", Cell::Num(rep.max_abs_charge));
        sec.put("max_abs_rhs", Cell::Num(rep.max_abs_rhs));
        sec.put("max_abs_residual", Cell::Num(rep.max_abs_residual));
        sec.put("relative_residual", Cell::Num(rep.relative_residual()));
        sec.put("energy_crossing_xi", Cell::opt(energy_crossing(&prof).ok()));
        let mut t = Table::new(&["n", "xi", "G", "dG_dxi", "rhs", "residual"]);
        for s in &rep.samples {
            t.push(vec![
                Cell::Num(n.value()),
                Cell::Num(s.xi),
                Cell::Num(s.g_value),
                Cell::Num(s.dg_dxi_numeric),
                Cell::Num(s.dg_dxi_analytic),
                Cell::Num(s.dg_dxi_numeric - s.dg_dxi_analytic),
            ]);
        }
        sec.table = Some(t);
        r.sections.push(sec);
    }
    Ok(r)
}

fn wd(p: &Params) -> LabResult<Report> {
    let n3 = astro::n3_surface().context(|| "n = 3 surface".into())?;
    let mu_e = p.mu_e.unwrap_or(2.0);
    let m = astro::white_dwarf(mu_e, &n3).context(|| format!("white dwarf mu_e = {mu_e}"))?;
    let mut sec = Section::default();
    sec.put("mu_e", Cell::Num(m.mu_e));
    sec.put("k_wd", Cell::Num(m.k_wd));
    sec.put("m_star_msun", Cell::Num(astro::m_star(n3.m1) / M_SUN));
    sec.put("m_ch_msun", Cell::Num(m.m_ch / M_SUN));
    sec.put("m_ch_pipeline_msun", Cell::Num(m.m_ch_pipeline / M_SUN));
    let mut r = Report::new("wd");
    r.sections.push(sec);
    Ok(r)
}

#[derive(serde::Deserialize)]
struct BatchRow {
    #[serde(rename = "M")]
    m: f64,
    mu: Option<f64>,
}

fn read_batch(path: &Path) -> LabResult<Vec<BatchRow>> {
    let mut rd = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|source| LabError::Csv { path: path.into(), source })?;
    let mut rows = Vec::new();
    for (i, rec) in rd.deserialize::<BatchRow>().enumerate() {
        let row = rec.map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => LabError::Csv { path: path.into(), source: e },
            _ => LabError::Usage(format!("{} row {}: {e}", path.display(), i + 1)),
        })?;
        if !(row.m > 0.0) || row.mu.is_some_and(|mu| !(mu > 0.0)) {
            return Err(LabError::Usage(format!("{} row {}: M and mu must be positive", path.display(), i + 1)));
        }
        rows.push(row);
    }
    Ok(rows)
}

fn zams(p: &Params, batch: Option<&Path>) -> LabResult<Report> {
    let n3 = astro::n3_surface().context(|| "n = 3 surface".into())?;
    let ms = astro::m_star(n3.m1);
    let mu_default = p.mu.unwrap_or(DEFAULT_MU);
    let kappa = p.kappa_p.unwrap_or(DEFAULT_KAPPA);
    let runs: Vec<(f64, f64)> = match batch {
        Some(path) => read_batch(path)?.into_iter().map(|b| (b.m, b.mu.unwrap_or(mu_default))).collect(),
        None => p.mass.as_deref().unwrap_or(&[1.0]).iter().map(|&m| (m, mu_default)).collect(),
    };
    let mut r = Report::new("zams");
    for (m, mu) in runs {
        let z = astro::zams_model(m * M_SUN, mu, kappa, ms).context(|| format!("ZAMS model M = {m}, mu = {mu}"))?;
        let mut sec = Section::default();
        sec.put("m_msun", Cell::Num(m));
        sec.put("mu", Cell::Num(z.mu));
        sec.put("kappa_p", Cell::Num(z.kappa_p));
        sec.put("beta", Cell::Num(z.beta));
        sec.put("k", Cell::Num(z.k));
        sec.put("l_edd_lsun", Cell::Num(z.l_edd / L_SUN));
        sec.put("l_lsun", Cell::Num(z.l / L_SUN));
        sec.put("l_fit_lsun", Cell::Num(z.l_fit / L_SUN));
        r.sections.push(sec);
    }
    Ok(r)
}

fn potential(n: f64, p: &Params) -> LabResult<PotentialSpec> {
    PotentialSpec::new(n, p.k.unwrap_or(1.0), 1.0).map_err(|e| LabError::Usage(format!("--n {n}: {e}")))
}

fn orbit_options(p: &Params) -> OrbitOptions {
    let mut o = OrbitOptions::default();
    if let Some(t) = p.tol {
        o.rtol = t;
    }
    o
}

fn orbit(p: &Params) -> LabResult<Report> {
    let r0 = p.r0.unwrap_or(1.0);
    let t_end = p.t_end.unwrap_or(50.0);
    let mut r = Report::new("orbit");
    for &n in p.n.as_deref().unwrap_or(&[1.0]) {
        let spec = potential(n, p)?;
        let vt = p.vt.unwrap_or(0.8);
        let start = OrbitState::new(&spec, 0.0, r0, 0.0, p.vr.unwrap_or(0.0), vt / r0)
            .map_err(|e| LabError::Usage(e.to_string()))?;
        let traj = integrate_orbit(&spec, &start, t_end, orbit_options(p)).context(|| format!("orbit n = {n}"))?;
        let mut sec = Section::default();
        sec.put("n", Cell::Num(n));
        sec.put("k", Cell::Num(spec.k));
        sec.put("energy", Cell::Num(traj.e0));
        sec.put("angular_momentum", Cell::Num(traj.l0));
        let (stop, t_stop) = match traj.stop {
            StopReason::Completed => ("completed", traj.t_end()),
            StopReason::TurnLimit => ("turn_limit", traj.t_end()),
            StopReason::Collision { t, .. } => ("collision", t),
        };
        sec.put("stop", Cell::text(stop));
        sec.put("t_stop", Cell::Num(t_stop));
        let (de, dl) = traj.drift();
        sec.put("energy_drift", Cell::Num(de));
        sec.put("momentum_drift", Cell::Num(dl));
        let turns = turning_points(&spec, traj.e0, traj.l0).ok();
        sec.put("r_min", Cell::opt(turns.map(|t| t.0)));
        sec.put("r_max", Cell::opt(turns.map(|t| t.1)));
        sec.put("radial_period", Cell::opt(traj.radial_period().ok()));
        let vir = virial_average(&traj).ok();
        sec.put("k_avg", Cell::opt(vir.map(|v| v.k_avg)));
        sec.put("v_avg", Cell::opt(vir.map(|v| v.v_avg)));
        sec.put("virial_residual", Cell::opt(vir.map(|v| v.residual())));
        sec.put("a_drift", Cell::opt(vir.map(|v| v.a_drift)));
        let mut t = Table::new(&["t", "r", "theta", "K", "V", "A"]);
        for s in traj.states() {
            t.push(vec![
                Cell::Num(s.t),
                Cell::Num(s.r),
                Cell::Num(s.theta),
                Cell::Num(s.kinetic(&spec)),
                Cell::Num(spec.potential(s.r)),
                Cell::Num(s.virial(&spec)),
            ]);
        }
        sec.table = Some(t);
        r.sections.push(sec);
    }
    Ok(r)
}

fn sweep(p: &Params) -> LabResult<Report> {
    let amps = p.amplitudes.as_deref().unwrap_or(&SWEEP_AMPLITUDES);
    let shape = p.shape.unwrap_or(0.5);
    if shape >= 1.0 {
        return Err(LabError::Usage(format!("shape must lie in (0, 1), got {shape}")));
    }
    if amps.len() < 5 {
        return Err(LabError::Usage(format!("the sweep needs at least 5 amplitudes, got {}", amps.len())));
    }
    let mut r = Report::new("orbit");
    for &n in p.n.as_deref().unwrap_or(&[1.0]) {
        let spec = potential(n, p)?;
        let sw = period_amplitude_exponent(&spec, amps, shape).context(|| format!("period sweep n = {n}"))?;
        let mut sec = Section::default();
        sec.put("n", Cell::Num(sw.n));
        sec.put("shape", Cell::Num(sw.shape));
        sec.put("slope", Cell::Num(sw.slope));
        sec.put("expected", Cell::Num(sw.expected));
        let mut t = Table::new(&["n", "amplitude", "period"]);
        for (a, per) in sw.amplitudes.iter().zip(&sw.periods) {
            t.push(vec![Cell::Num(n), Cell::Num(*a), Cell::Num(*per)]);
        }
        sec.table = Some(t);
        r.sections.push(sec);
    }
    Ok(r)
}
