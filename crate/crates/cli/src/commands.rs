use std::time::Instant;

use brownloop::doob::RelativizedSpace;
use brownloop::evolve::{self, DataKind, InitialData};
use brownloop::hkernel::{HyperbolicModel, KernelPath, ModelDim, QuadratureSpec, SpacePoint};
use brownloop::loopmc::{self, MCConfig};
use brownloop::rootsys::{EpsilonSchedule, RootDatum};
use brownloop::scalar::loglog_slope;
use brownloop::{Error, HyperbolicModel64, RelativizedSpace64};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{jnum, num, BoxResult, Plot, Sink, Table};

struct Outcome {
    files: Vec<(&'static str, Table, Option<Plot>)>,
    results: Value,
    lines: Vec<String>,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Structure(a) => &a.common,
            Command::Kernel(a) => &a.common,
            Command::Ratiogap(a) => &a.common,
            Command::Relativized(a) => &a.common,
            Command::Checks(a) => &a.common,
            Command::Converge(a) => &a.common,
            Command::Mass(a) => &a.common,
            Command::Region(a) => &a.common,
            Command::Mcloop(a) => &a.common,
            Command::Bridge(a) => &a.common,
        }
    }

    fn echo(&self) -> BoxResult<Value> {
        Ok(match self {
            Command::Structure(a) => serde_json::to_value(a)?,
            Command::Kernel(a) => serde_json::to_value(a)?,
            Command::Ratiogap(a) => serde_json::to_value(a)?,
            Command::Relativized(a) => serde_json::to_value(a)?,
            Command::Checks(a) => serde_json::to_value(a)?,
            Command::Converge(a) => serde_json::to_value(a)?,
            Command::Mass(a) => serde_json::to_value(a)?,
            Command::Region(a) => serde_json::to_value(a)?,
            Command::Mcloop(a) => serde_json::to_value(a)?,
            Command::Bridge(a) => serde_json::to_value(a)?,
        })
    }
}

pub fn run(cmd: Command) -> BoxResult<()> {
    let start = Instant::now();
    let common = cmd.common().clone();
    if common.workers == 0 {
        return Err(Error::NonPositive("workers").into());
    }
    // a second initialization in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(common.workers).build_global();
    let sink = Sink::new(&common.out)?;
    let outcome = match &cmd {
        Command::Structure(a) => structure(a)?,
        Command::Kernel(a) => kernel(a)?,
        Command::Ratiogap(a) => ratiogap(a)?,
        Command::Relativized(a) => relativized(a)?,
        Command::Checks(a) => checks(a)?,
        Command::Converge(a) => converge(a)?,
        Command::Mass(a) => mass(a)?,
        Command::Region(a) => region(a)?,
        Command::Mcloop(a) => mcloop(a)?,
        Command::Bridge(a) => bridge(a)?,
    };
    let mut files = Vec::new();
    for (name, table, plot) in &outcome.files {
        files.push(sink.csv(name, table)?.display().to_string());
        if let (true, Some(p)) = (common.plot, plot) {
            files.push(sink.plot(name, table, p)?.display().to_string());
        }
    }
    let summary = json!({
        "subcommand": cmd.name(),
        "config": cmd.echo()?,
        "results": outcome.results,
        "files": files,
        "elapsed_s": start.elapsed().as_secs_f64(),
    });
    sink.summary(&summary)?;
    for l in &outcome.lines {
        println!("{l}");
    }
    println!("{}", serde_json::to_string(&summary)?);
    Ok(())
}

fn positive(name: &'static str, xs: &[f64]) -> BoxResult<()> {
    if xs.is_empty() || xs.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
        return Err(Error::NonPositive(name).into());
    }
    Ok(())
}

fn schedule(c: &Common) -> BoxResult<EpsilonSchedule<f64>> {
    if !(c.eps_scale > 0.0) {
        return Err(Error::NonPositive("eps_scale").into());
    }
    Ok(EpsilonSchedule::power(c.eps_gamma)?.scaled(c.eps_scale))
}

fn model(c: &Common) -> BoxResult<HyperbolicModel64> {
    RootDatum::<f64>::from_name(&c.model)?;
    let dim = ModelDim::from_name(&c.model)?;
    let quad = QuadratureSpec {
        node_count: c.nodes,
        tolerance: c.tol,
        ..QuadratureSpec::default()
    };
    Ok(HyperbolicModel::new(dim, quad)?)
}

fn space(c: &Common) -> BoxResult<RelativizedSpace64> {
    Ok(RelativizedSpace::new(model(c)?))
}

fn radii(rmax: Option<f64>, t: f64, points: usize) -> BoxResult<Vec<f64>> {
    let top = rmax.unwrap_or(4.0 * t.sqrt() + 1.0);
    positive("rmax", &[top])?;
    if points < 2 {
        return Err(Error::InvalidParameter("points must be at least 2".into()).into());
    }
    Ok((0..points).map(|i| top * i as f64 / (points - 1) as f64).collect())
}

fn slope_of(xs: &[f64], ys: &[f64]) -> Value {
    if xs.len() >= 2 && ys.iter().all(|y| *y > 0.0) {
        jnum(loglog_slope(xs, ys))
    } else {
        Value::Null
    }
}

fn strictly_decreasing(ys: &[f64]) -> bool {
    ys.windows(2).all(|w| w[1] < w[0])
}

fn structure(a: &StructureArgs) -> BoxResult<Outcome> {
    positive("t", &a.t)?;
    let datum = RootDatum::<f64>::from_name(&a.common.model)?;
    let d = datum.dimensions();
    let eps = schedule(&a.common)?;
    let mut table = Table::new(&["t", "eps", "inner", "outer"]);
    for &t in &a.t {
        let r = eps.radii(t)?;
        table.push(vec![num(t), num(r.eps), num(r.inner), num(r.outer)]);
    }
    let rho: Vec<String> = datum.rho().iter().map(|x| format!("{x}")).collect();
    let line = format!(
        "ℓ={}, n={}, ν={}, ρ=({}), |ρ|²={}",
        datum.rank(),
        d.n,
        d.nu,
        rho.join(", "),
        datum.rho_norm_sq()
    );
    Ok(Outcome {
        files: vec![("report.csv", table, None)],
        results: json!({
            "datum": datum.name(),
            "rank": datum.rank(),
            "n": d.n,
            "nu": d.nu,
            "rho": datum.rho(),
            "rho_norm_sq": jnum(datum.rho_norm_sq()),
        }),
        lines: vec![line],
    })
}

fn kernel(a: &KernelArgs) -> BoxResult<Outcome> {
    positive("t", &a.t)?;
    let mut m = model(&a.common)?;
    if let Some(p) = &a.path {
        let path = match p.as_str() {
            "closed" => KernelPath::ClosedForm,
            "spectral" => KernelPath::Spectral,
            other => return Err(Error::InvalidParameter(format!("unknown kernel path '{other}'")).into()),
        };
        m = m.with_path(path)?;
    }
    let mut table = Table::new(&["t", "r", "h_t", "envelope_lo", "envelope_hi", "phi0"]);
    let mut inside = 0usize;
    for &t in &a.t {
        for r in radii(a.rmax, t, a.points)? {
            let h = m.heat_kernel(t, r)?;
            let (lo, hi) = m.heat_kernel_envelope(t, r)?;
            if lo <= h && h <= hi {
                inside += 1;
            }
            table.push(vec![num(t), num(r), num(h), num(lo), num(hi), num(m.phi0(r)?)]);
        }
    }
    let rows = table.rows.len();
    Ok(Outcome {
        files: vec![("report.csv", table, Some(Plot { x: 1, ys: vec![2, 3, 4], logx: false, logy: true }))],
        results: json!({ "rows": rows, "inside_envelope": inside }),
        lines: vec![],
    })
}

fn ratiogap(a: &RatiogapArgs) -> BoxResult<Outcome> {
    positive("t", &a.t)?;
    positive("xi", &[a.xi])?;
    positive("rg_scale", &[a.rg_scale])?;
    let m = model(&a.common)?;
    let mut table = Table::new(&["t", "r_g", "sup_gap"]);
    let mut sups = Vec::new();
    for &t in &a.t {
        let rg = a.rg_scale * t.sqrt();
        let s = m.ratio_gap_sup(t, rg, a.xi)?;
        sups.push(s);
        table.push(vec![num(t), num(rg), num(s)]);
    }
    Ok(Outcome {
        files: vec![("report.csv", table, Some(Plot { x: 0, ys: vec![2], logx: true, logy: true }))],
        results: json!({
            "sup_gap": sups.iter().map(|x| jnum(*x)).collect::<Vec<_>>(),
            "slope": slope_of(&a.t, &sups),
            "decreasing": strictly_decreasing(&sups),
        }),
        lines: vec![],
    })
}

fn relativized(a: &RelativizedArgs) -> BoxResult<Outcome> {
    positive("t", &a.t)?;
    let s = space(&a.common)?;
    let mut table = Table::new(&["t", "r", "htilde", "w"]);
    for &t in &a.t {
        for r in radii(a.rmax, t, a.points)? {
            table.push(vec![num(t), num(r), num(s.relativized_kernel_origin(t, r)?), num(s.weight(r))]);
        }
    }
    let rows = table.rows.len();
    Ok(Outcome {
        files: vec![("report.csv", table, Some(Plot { x: 1, ys: vec![2], logx: false, logy: true }))],
        results: json!({ "rows": rows }),
        lines: vec![],
    })
}

/// Deterministic scatter over `r ≤ r_max` and all directions.
fn scatter(count: usize, r_max: f64) -> Vec<SpacePoint<f64>> {
    (0..count)
        .map(|i| {
            let a = (i as f64 + 0.5) / count as f64;
            let b = (i as f64 * 0.618_033_988_749_895).fract();
            let c = (i as f64 * 0.414_213_562_373_095).fract();
            SpacePoint {
                r: r_max * a,
                theta: std::f64::consts::PI * b,
                phi: std::f64::consts::TAU * c,
            }
        })
        .collect()
}

fn checks(a: &ChecksArgs) -> BoxResult<Outcome> {
    positive("t", &a.t)?;
    let s = space(&a.common)?;
    let m = s.model();
    let model_name = m.dim().to_string();
    let mut table = Table::new(&["check", "model", "parameter", "residual", "threshold", "pass"]);
    let mut all = true;
    let mut row = |table: &mut Table, check: &str, param: String, residual: f64, threshold: f64, pass: bool| {
        all &= pass;
        table.push(vec![
            check.to_string(),
            model_name.clone(),
            param,
            num(residual),
            num(threshold),
            pass.to_string(),
        ]);
    };
    for &t in &a.t {
        let n = s.check_normalization(t)?;
        let res = (n.value - 1.0).abs();
        row(&mut table, "normalization", format!("t={t}"), res, 1e-6, res < 1e-6);
    }
    let f = |r: f64| (-r * r).exp();
    let coarse = brownloop::doob::RadialGrid::new(1e-3, 5.0, 201)?;
    let fine = brownloop::doob::RadialGrid::new(1e-3, 5.0, 401)?;
    let gc = s.relativized_generator_apply(&coarse.points().into_iter().map(f).collect::<Vec<_>>(), &coarse)?;
    let gf = s.relativized_generator_apply(&fine.points().into_iter().map(f).collect::<Vec<_>>(), &fine)?;
    let ratio = gc.max_discrepancy / gf.max_discrepancy;
    row(&mut table, "generator_discrepancy", "nodes=201".into(), gc.max_discrepancy, 1e-2, gc.max_discrepancy < 1e-2);
    row(&mut table, "generator_halving_ratio", "nodes=201/401".into(), ratio, 4.0, (3.5..=4.5).contains(&ratio));
    let bump = |r: f64| if r < 2.0 { (1.0 - 1.0 / (1.0 - r * r / 4.0)).exp() } else { 0.0 };
    for &t in &a.t {
        let res = s.semigroup_identity_check(t, bump, 2.0)?;
        row(&mut table, "semigroup", format!("t={t}"), res, 1e-8, res < 1e-8);
    }
    let pts = scatter(40, 4.0);
    let mut worst = 0.0_f64;
    for pair in pts.chunks(2) {
        worst = worst.max(m.phi0_product_check(&pair[0], &pair[1])?.abs());
    }
    row(&mut table, "phi0_product", "pairs=20".into(), worst, 1e-8, worst < 1e-8);
    let rho = m.rho();
    let mut violations = 0usize;
    let mut excess = f64::NEG_INFINITY;
    for p in scatter(a.ic_points, 10.0) {
        let e = m.busemann_rho(&p) - rho * p.r;
        excess = excess.max(e);
        if e > 1e-12 {
            violations += 1;
        }
    }
    row(
        &mut table,
        "iwasawa_cartan",
        format!("points={} max_excess={excess:.3e}", a.ic_points),
        violations as f64,
        0.0,
        violations == 0,
    );
    let lines: Vec<String> = table
        .rows
        .iter()
        .map(|r| format!("{:<24} {:<28} {:>24} {}", r[0], r[2], r[3], if r[5] == "true" { "PASS" } else { "FAIL" }))
        .collect();
    Ok(Outcome {
        files: vec![("report.csv", table, None)],
        results: json!({ "all_passed": all, "generator_ratio": jnum(ratio) }),
        lines,
    })
}

fn unit_data(s: &RelativizedSpace64, name: &str) -> BoxResult<InitialData<f64>> {
    let kind = DataKind::from_name(name)?;
    Ok(evolve::normalize_unit_mass(s, InitialData::standard(kind, s.dim())?)?)
}

fn converge(a: &ConvergeArgs) -> BoxResult<Outcome> {
    positive("t", &a.tgrid)?;
    let s = space(&a.common)?;
    let f = unit_data(&s, &a.data)?;
    let eps = schedule(&a.common)?;
    let rep = evolve::run_convergence_experiment(&s, &f, &a.tgrid, &a.p, &eps)?;
    let mut header = vec!["t".to_string(), "mass".into(), "l1".into(), "l1_tail_bound".into(), "linf_scaled".into()];
    header.extend(a.p.iter().map(|p| format!("lp_{p}")));
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for r in &rep.rows {
        let mut v = vec![num(r.t), num(r.mass), num(r.l1), num(r.l1_tail_bound), num(r.linf_scaled)];
        v.extend(r.lp.iter().map(|(_, x)| num(*x)));
        table.push(v);
    }
    let ys: Vec<usize> = (2..table.header.len()).filter(|&i| i != 3).collect();
    Ok(Outcome {
        files: vec![("report.csv", table, Some(Plot { x: 0, ys, logx: true, logy: true }))],
        results: json!({
            "l1_slope": rep.l1_slope().map(jnum),
            "linf_slope": rep.linf_slope().map(jnum),
            "l1_strictly_decreasing": rep.l1_strictly_decreasing(),
            "linf_strictly_decreasing": rep.linf_strictly_decreasing(),
            "wall_clock_s": rep.rows.iter().map(|r| jnum(r.wall_clock_s)).collect::<Vec<_>>(),
        }),
        lines: vec![],
    })
}

fn mass(a: &MassArgs) -> BoxResult<Outcome> {
    let s = space(&a.common)?;
    let f = unit_data(&s, &a.data)?;
    let pts: Vec<SpacePoint<f64>> = a
        .at
        .iter()
        .map(|p| SpacePoint::new(p[0], p[1], p[2]))
        .collect::<Result<_, _>>()?;
    let values = evolve::mass_function_many(&s, &f, &pts)?;
    let mut table = Table::new(&["r", "theta", "phi", "mass"]);
    let mut lines = Vec::new();
    for (p, v) in pts.iter().zip(&values) {
        table.push(vec![num(p.r), num(p.theta), num(p.phi), num(*v)]);
        lines.push(format!("M({}, {}, {}) = {}", p.r, p.theta, p.phi, num(*v)));
    }
    Ok(Outcome {
        files: vec![("report.csv", table, None)],
        results: json!({ "mass": values.iter().map(|v| jnum(*v)).collect::<Vec<_>>() }),
        lines,
    })
}

fn region(a: &RegionArgs) -> BoxResult<Outcome> {
    positive("t", &a.t)?;
    let s = space(&a.common)?;
    let eps = schedule(&a.common)?;
    let mut table = Table::new(&["t", "eps", "inner", "outer", "concentration", "degenerate", "linf_outside_r"]);
    let mut conc = Vec::new();
    for &t in &a.t {
        let c = evolve::concentration_outside_omega(&s, t, &eps)?;
        let l = evolve::linf_outside_r(&s, t, &eps)?;
        conc.push(c.value);
        table.push(vec![
            num(t),
            num(c.radii.eps),
            num(c.radii.inner),
            num(c.radii.outer),
            num(c.value),
            c.degenerate.to_string(),
            num(l),
        ]);
    }
    Ok(Outcome {
        files: vec![("report.csv", table, Some(Plot { x: 0, ys: vec![4, 6], logx: true, logy: true }))],
        results: json!({ "concentration": conc.iter().map(|v| jnum(*v)).collect::<Vec<_>>() }),
        lines: vec![],
    })
}

fn mcloop(a: &McloopArgs) -> BoxResult<Outcome> {
    let s = space(&a.common)?;
    let cfg = MCConfig {
        n_paths: a.paths,
        dt: a.dt,
        t_end: a.t_end,
        r0: a.r0,
        seed: a.seed,
        worker_count: a.common.workers,
    };
    let sample = loopmc::simulate_loop(s.model(), &cfg)?;
    let mut samples = Table::new(&["path", "r"]);
    for (i, r) in sample.radii().iter().enumerate() {
        samples.push(vec![i.to_string(), num(*r)]);
    }
    let from_origin = a.r0 == 0.0;
    let cdf = if from_origin { Some(loopmc::loop_marginal_cdf(&s, sample.t)?) } else { None };
    let ks = match &cdf {
        Some(c) => Some(loopmc::ks_distance(&sample, |r| c.eval(r))?),
        None => None,
    };
    let top = sample.sorted().last().copied().unwrap_or(1.0).max(1e-12);
    let mut hist = Table::new(&["lo", "hi", "count", "empirical_density", "analytic_density"]);
    let n = sample.len() as f64;
    for (lo, hi, c) in sample.histogram(a.bins, top) {
        let analytic = if from_origin {
            num(loopmc::loop_marginal_density(&s, sample.t, (lo + hi) / 2.0)?)
        } else {
            String::new()
        };
        hist.push(vec![num(lo), num(hi), c.to_string(), num(c as f64 / (n * (hi - lo))), analytic]);
    }
    let expected = if from_origin && s.dim() == ModelDim::H3 { jnum(6.0 * sample.t) } else { Value::Null };
    Ok(Outcome {
        files: vec![
            ("sample.csv", samples, None),
            ("report.csv", hist, Some(Plot { x: 0, ys: vec![3, 4], logx: false, logy: false })),
        ],
        results: json!({
            "n": sample.len(),
            "t": jnum(sample.t),
            "mean_r": jnum(sample.moment(1)),
            "mean_r2": jnum(sample.moment(2)),
            "mean_r2_stderr": jnum(sample.moment_stderr(2)),
            "expected_mean_r2": expected,
            "ks": ks.map(jnum),
            "pole_steps": sample.pole_steps,
            "reflections": sample.reflections,
        }),
        lines: vec![],
    })
}

fn bridge(a: &BridgeArgs) -> BoxResult<Outcome> {
    positive("t", &[a.t])?;
    positive("L", &a.lengths)?;
    let s = space(&a.common)?;
    let gaps = loopmc::bridge_to_loop_gap(&s, &a.lengths, a.t, a.rmax)?;
    let mut table = Table::new(&["L", "sup_gap", "bridge_mass"]);
    for &(l, g) in &gaps {
        table.push(vec![num(l), num(g), num(loopmc::bridge_mass(s.model(), l, a.t)?)]);
    }
    let ys: Vec<f64> = gaps.iter().map(|g| g.1).collect();
    let ls: Vec<f64> = gaps.iter().map(|g| g.0).collect();
    Ok(Outcome {
        files: vec![("report.csv", table, Some(Plot { x: 0, ys: vec![1], logx: true, logy: true }))],
        results: json!({
            "sup_gap": ys.iter().map(|v| jnum(*v)).collect::<Vec<_>>(),
            "decreasing": strictly_decreasing(&ys),
            "slope": slope_of(&ls, &ys),
        }),
        lines: vec![],
    })
}
