//! One builder per subcommand. Everything is computed in thermal units
//! (energies in k_BT, times in τ_Pl); `--beta` only adds natural-unit
//! columns for times.

use planckian::bound::{chi_lower_optimized, pairwise_chi, ChiBoundResult, Epsilon, Witness, EPS_MAX};
use planckian::metrology::{chi_tilde_gapped, chi_tilde_qubit, diagonal_bound};
use planckian::quantum::HermitianOperator;
use planckian::rlm::{
    bures_to_thermal_occupation, forbidden_region_check, rlm_steady_state_constant, thermalization_times,
    CouplingSchedule, RlmConfig, ThermalizationOutcome,
};
use planckian::special::fermi_dirac;
use rayon::prelude::*;

use crate::dataset::{Cell, Dataset};
use crate::CliError;

pub const DEFAULT_FIG_EPS: [f64; 5] = [0.0, 0.05, 0.1, 0.2, 0.3];
pub const DEFAULT_RLM_EPS: [f64; 7] = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35];
pub const DEFAULT_COUPLINGS: [f64; 8] = [0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0];
pub const DEFAULT_DIMS: [usize; 5] = [2, 3, 10, 30, 100];
pub const DEFAULT_DECAYING_PAIRS: [(f64, f64); 3] = [(0.0, 1.0), (-1.0, 1.0), (0.0, 3.0)];

/// Settings shared by every subcommand, echoed into the metadata.
#[derive(Clone, Debug)]
pub struct Common {
    pub command: &'static str,
    pub beta: f64,
    pub seed: u64,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn header(common: &Common, columns: &[&str]) -> Dataset {
    let mut d = Dataset::new(columns);
    d.meta("tool", format!("planckian {}", env!("CARGO_PKG_VERSION")));
    d.meta("command", common.command);
    d.meta("units", "hbar = k_B = 1; energies in k_B T, times in tau_Pl = hbar/(k_B T) unless suffixed _natural");
    d.meta("beta", common.beta);
    d.meta("seed", common.seed);
    d
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn check_fractions(eps: &[f64]) -> Result<(), CliError> {
    if eps.is_empty() {
        return Err(usage("at least one --eps value is required"));
    }
    if let Some(e) = eps.iter().find(|e| !(0.0..=1.0).contains(*e)) {
        return Err(usage(format!("--eps {e} outside [0, 1] (units of eps_max)")));
    }
    Ok(())
}

fn check_p0(p0: &[f64]) -> Result<(), CliError> {
    if p0.is_empty() {
        return Err(usage("at least one --p0 value is required"));
    }
    if let Some(p) = p0.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(usage(format!("--p0 {p} outside [0, 1]")));
    }
    Ok(())
}

/// `k/(n+1)` for `k = 1..=n`: an open grid on (0, 1) that contains ½ for odd `n`.
fn open_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / (n + 1) as f64).collect()
}

fn ansatz_cells(r: &ChiBoundResult) -> [Cell; 3] {
    match r.witness {
        Witness::Ansatz { alpha, delta, .. } => [r.value.into(), alpha.into(), delta.into()],
        _ => [r.value.into(), Cell::Missing, Cell::Missing],
    }
}

pub fn fig_bounds(common: &Common, eps: &[f64], pstar_grid: usize) -> Result<Dataset, CliError> {
    check_fractions(eps)?;
    if pstar_grid == 0 {
        return Err(usage("--pstar-grid must be at least 1"));
    }
    let mut d = header(common, &["p_star", "eps", "chi_lower", "alpha", "delta"]);
    d.meta("eps", list(eps));
    d.meta("pstar_grid", pstar_grid);
    let jobs: Vec<(f64, f64)> = eps.iter().flat_map(|&e| open_grid(pstar_grid).into_iter().map(move |p| (p, e))).collect();
    let results = jobs
        .par_iter()
        .map(|&(p, e)| chi_lower_optimized(p, Epsilon::fraction_of_max(e)?))
        .collect::<planckian::Result<Vec<_>>>()?;
    for (&(p, e), r) in jobs.iter().zip(&results) {
        let [chi, alpha, delta] = ansatz_cells(r);
        d.push(vec![p.into(), e.into(), chi, alpha, delta]);
    }
    Ok(d)
}

pub fn fig_qfi(common: &Common, grid: usize, dims: &[usize]) -> Result<Dataset, CliError> {
    if grid == 0 {
        return Err(usage("--grid must be at least 1"));
    }
    if let Some(bad) = dims.iter().find(|&&k| k < 2) {
        return Err(usage(format!("--dim {bad} must be at least 2")));
    }
    let gapped: Vec<String> = dims.iter().map(|k| format!("gapped_d{k}")).collect();
    let mut columns = vec!["p", "chi_diagonal", "chi_qubit"];
    columns.extend(gapped.iter().map(String::as_str));
    let mut d = header(common, &columns);
    d.meta("grid", grid);
    d.meta("dims", dims.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","));
    for p in open_grid(grid) {
        let mut row: Vec<Cell> = vec![p.into(), diagonal_bound(p).into(), chi_tilde_qubit(p)?.into()];
        row.extend(dims.iter().map(|&k| Cell::from(chi_tilde_gapped(p, k))));
        d.push(row);
    }
    Ok(d)
}

pub fn tradeoff(common: &Common, grid: usize) -> Result<Dataset, CliError> {
    if grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    let mut d = header(common, &["eps", "eps_rad", "chi_lower", "alpha", "delta"]);
    d.meta("p_star", 0.5);
    d.meta("grid", grid);
    let fractions: Vec<f64> = (0..grid).map(|k| k as f64 / (grid - 1) as f64).collect();
    let results = fractions
        .par_iter()
        .map(|&f| chi_lower_optimized(0.5, Epsilon::fraction_of_max(f)?))
        .collect::<planckian::Result<Vec<_>>>()?;
    for (&f, r) in fractions.iter().zip(&results) {
        let [chi, alpha, delta] = ansatz_cells(r);
        d.push(vec![f.into(), (f * EPS_MAX).into(), chi, alpha, delta]);
    }
    Ok(d)
}

fn qubit(e: f64) -> HermitianOperator {
    HermitianOperator::from_real_diagonal(&[0.0, e])
}

fn time_cell(o: Option<ThermalizationOutcome>) -> Cell {
    match o {
        Some(ThermalizationOutcome::Reached(t)) => t.into(),
        Some(ThermalizationOutcome::Unreachable) => "unreachable".into(),
        None => Cell::Missing,
    }
}

fn slower(a: ThermalizationOutcome, b: ThermalizationOutcome) -> ThermalizationOutcome {
    use ThermalizationOutcome::*;
    match (a, b) {
        (Reached(x), Reached(y)) => Reached(x.max(y)),
        _ => Unreachable,
    }
}

fn natural(t: ThermalizationOutcome, beta: f64) -> Cell {
    match t {
        ThermalizationOutcome::Reached(t) => (t * beta).into(),
        ThermalizationOutcome::Unreachable => "unreachable".into(),
    }
}

pub struct ConstantArgs<'a> {
    pub e1: f64,
    pub e2: f64,
    pub p0: &'a [f64],
    pub eps: &'a [f64],
    pub couplings: &'a [f64],
}

/// Minimal time for the constant-coupling machine to bring both dots within
/// `ε` of their Gibbs states, next to the pairwise lower bound.
pub fn rlm_constant(common: &Common, args: &ConstantArgs) -> Result<Dataset, CliError> {
    check_fractions(args.eps)?;
    check_p0(args.p0)?;
    if args.e1 == args.e2 {
        return Err(usage("--e1 and --e2 must differ"));
    }
    if args.couplings.is_empty() || args.couplings.iter().any(|g| !(*g > 0.0 && g.is_finite())) {
        return Err(usage("--g values must be positive"));
    }
    if args.eps.contains(&0.0) {
        return Err(usage("--eps must be positive for thermalization times"));
    }
    let mut d = header(
        common,
        &["g", "p0", "eps", "tau_e1", "tau_e2", "tau_min", "tau_min_natural", "bound"],
    );
    d.meta("e1", args.e1);
    d.meta("e2", args.e2);
    d.meta("p0", list(args.p0));
    d.meta("eps", list(args.eps));
    d.meta("g", list(args.couplings));
    let radians: Vec<f64> = args.eps.iter().map(|f| f * EPS_MAX).collect();
    let (h1, h2) = (qubit(args.e1), qubit(args.e2));
    let bounds = args
        .eps
        .iter()
        .map(|&f| pairwise_chi(&h1, &h2, 1.0, Epsilon::fraction_of_max(f)?))
        .collect::<planckian::Result<Vec<_>>>()?;

    let jobs: Vec<(f64, f64)> = args.couplings.iter().flat_map(|&g| args.p0.iter().map(move |&p| (g, p))).collect();
    let outcomes = jobs
        .par_iter()
        .map(|&(g, p0)| {
            let cfg = RlmConfig::new(args.e1, 1.0, p0, CouplingSchedule::constant(g)?)?;
            let first = thermalization_times(&cfg, &radians)?;
            let second = thermalization_times(&cfg.with_energy(args.e2), &radians)?;
            Ok((first, second))
        })
        .collect::<planckian::Result<Vec<_>>>()?;
    for (&(g, p0), (first, second)) in jobs.iter().zip(&outcomes) {
        for (k, &f) in args.eps.iter().enumerate() {
            let both = slower(first[k], second[k]);
            d.push(vec![
                g.into(),
                p0.into(),
                f.into(),
                time_cell(Some(first[k])),
                time_cell(Some(second[k])),
                time_cell(Some(both)),
                natural(both, common.beta),
                bounds[k].max(0.0).into(),
            ]);
        }
    }
    Ok(d)
}

/// Long-time occupation of the constant-coupling dot and its distance to
/// the local Gibbs state on an (E, g) grid.
pub fn rlm_constant_surface(common: &Common, grid: usize) -> Result<Dataset, CliError> {
    if grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    let mut d = header(common, &["energy", "g", "p_inf", "p_thermal", "d_inf"]);
    d.meta("grid", grid);
    d.meta("energy_range", "-5,5");
    d.meta("g_range", "0.1,3");
    for i in 0..grid {
        let energy = -5.0 + 10.0 * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let g = 0.1 + 2.9 * j as f64 / (grid - 1) as f64;
            let p_inf = rlm_steady_state_constant(energy, g, 1.0)?;
            let q = fermi_dirac(energy, 1.0);
            d.push(vec![energy.into(), g.into(), p_inf.into(), q.into(), bures_to_thermal_occupation(p_inf, q).into()]);
        }
    }
    Ok(d)
}

pub struct DecayingArgs<'a> {
    pub pairs: &'a [(f64, f64)],
    pub a: f64,
    pub b: f64,
    pub p0: &'a [f64],
    pub tmax: f64,
    pub grid: usize,
}

/// Trajectories of two dots under `g(t) = √(a/(t+b))` with the turned-around
/// speed limit and the per-time margins.
pub fn rlm_decaying(common: &Common, args: &DecayingArgs) -> Result<Dataset, CliError> {
    check_p0(args.p0)?;
    if !(args.a > 0.0 && args.b > 0.0 && args.a.is_finite() && args.b.is_finite()) {
        return Err(usage("--a and --b must be positive"));
    }
    if !(args.tmax > 0.0 && args.tmax.is_finite()) {
        return Err(usage("--tmax must be positive"));
    }
    if args.grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    if args.pairs.iter().any(|(x, y)| x == y) {
        return Err(usage("--e1 and --e2 must differ"));
    }
    let mut d = header(
        common,
        &["e1", "e2", "p0", "t", "t_natural", "p1", "p2", "d1", "d2", "rhs", "margin"],
    );
    d.meta("pairs", args.pairs.iter().map(|(x, y)| format!("({x},{y})")).collect::<Vec<_>>().join(","));
    d.meta("a", args.a);
    d.meta("b", args.b);
    d.meta("p0", list(args.p0));
    d.meta("tmax", args.tmax);
    d.meta("grid", args.grid);
    let times: Vec<f64> = (0..args.grid).map(|k| args.tmax * k as f64 / (args.grid - 1) as f64).collect();
    let jobs: Vec<((f64, f64), f64)> = args.pairs.iter().flat_map(|&pair| args.p0.iter().map(move |&p| (pair, p))).collect();
    let reports = jobs
        .par_iter()
        .map(|&((e1, e2), p0)| {
            let cfg = RlmConfig::new(e1, 1.0, p0, CouplingSchedule::decaying(args.a, args.b)?)?;
            forbidden_region_check(&cfg, e1, e2, &times)
        })
        .collect::<planckian::Result<Vec<_>>>()?;
    let mut worst = f64::INFINITY;
    for (&((e1, e2), p0), r) in jobs.iter().zip(&reports) {
        worst = worst.min(r.min_margin());
        for (k, &t) in times.iter().enumerate() {
            d.push(vec![
                e1.into(),
                e2.into(),
                p0.into(),
                t.into(),
                (t * common.beta).into(),
                r.first.p[k].into(),
                r.second.p[k].into(),
                r.first.d_to_thermal[k].into(),
                r.second.d_to_thermal[k].into(),
                r.rhs[k].into(),
                r.margins[k].into(),
            ]);
        }
    }
    d.meta("min_margin", worst);
    Ok(d)
}

/// Pairwise bound factor for the qubits `diag(0, e1)` and `diag(0, e2)`.
pub fn chi(common: &Common, e1: f64, e2: f64, eps: &[f64]) -> Result<Dataset, CliError> {
    check_fractions(eps)?;
    if e1 == e2 {
        return Err(usage("--e1 and --e2 must differ"));
    }
    let mut d = header(common, &["eps", "eps_rad", "chi", "tau_bound", "tau_bound_natural"]);
    d.meta("e1", e1);
    d.meta("e2", e2);
    d.meta("eps", list(eps));
    let (h1, h2) = (qubit(e1), qubit(e2));
    for &f in eps {
        let c = pairwise_chi(&h1, &h2, 1.0, Epsilon::fraction_of_max(f)?)?;
        let tau = c.max(0.0);
        d.push(vec![f.into(), (f * EPS_MAX).into(), c.into(), tau.into(), (tau * common.beta).into()]);
    }
    Ok(d)
}
