//! Subcommand implementations.

use std::f64::consts::PI;

use floqcool::cooling::cycle_gates;
use floqcool::dense::{cooling_lattice_1d, run_dense_cooling, stabilize_single_qubit, CoolingLattice, StabilizeConfig};
use floqcool::eigenmodes::solve_modes;
use floqcool::experiments::{limit_cycle_ratio, steady_rdm};
use floqcool::gauss_prep::{run_comparison, PrepEngine};
use floqcool::gaussian::{circuit_rotation, run_cooling, DephasingMode};
use floqcool::rdm::{edge_mask, vacuum_fidelity, OneBodyRDM};
use floqcool::secular::{default_h_grid, lamb_shift, optimize_h, rates, steady_occupations, SecularParams};
use floqcool::tfim::ground_energy;
use floqcool::validate::oracle_suite;
use floqcool::xxz::{fit_pumping_exponent, ness_summary, run_transport};
use floqcool::{CoolingConfig, CoolingLayout, NoiseRates, ObservableRecord, XxzConfig};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{CoolSection, Dephasing, Engine, GridSpec};
use crate::output::Cell;
use crate::{row, CliError, Ctx, Report, Run};

type Outcome = Result<(Run, Report), CliError>;

fn done(run: Run, summary: serde_json::Value) -> Outcome {
    Ok((run, Report { summary, failure: None }))
}

fn schema(path: &str, message: impl Into<String>) -> CliError {
    CliError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn decay_reason(noise: &NoiseRates) -> Option<&'static str> {
    (noise.gamma_decay > 0.0).then_some("amplitude damping is not Gaussian")
}

/// Why a cooling circuit needs the dense engine, if it does.
fn cooling_reason(cfg: &CoolingConfig, grid: Option<&GridSpec>) -> Result<Option<&'static str>, CliError> {
    if grid.is_some() {
        return Ok(Some("2D lattices are not free-fermion circuits"));
    }
    if let Some(r) = decay_reason(&cfg.noise) {
        return Ok(Some(r));
    }
    let layout = CoolingLayout::from_config(cfg)?;
    Ok(
        circuit_rotation(&cycle_gates(&layout, cfg.g, cfg.j, cfg.theta, cfg.h), layout.n_qubits)
            .err()
            .map(|_| "interior auxiliaries break the nearest-neighbour matchgate structure"),
    )
}

fn lattice(sec: &CoolSection) -> Result<CoolingLattice, CliError> {
    let cfg = &sec.circuit;
    match &sec.grid {
        None => Ok(cooling_lattice_1d(cfg)?),
        Some(g) => {
            if cfg.l != g.width * g.height {
                return Err(schema(
                    "cool.circuit.L",
                    format!("must equal width × height = {}", g.width * g.height),
                ));
            }
            if cfg.m != g.aux.len() {
                return Err(schema(
                    "cool.circuit.M",
                    format!("must equal the {} grid auxiliaries", g.aux.len()),
                ));
            }
            if let Some(k) = g.aux.iter().position(|&(x, y)| x >= g.width || y >= g.height) {
                return Err(schema(&format!("cool.grid.aux[{k}]"), "site outside the grid"));
            }
            Ok(CoolingLattice::grid(g.width, g.height, &g.aux)?)
        }
    }
}

/// Mean of trajectory records and the standard error of the energy.
fn average_records(runs: &[Vec<ObservableRecord>]) -> (Vec<ObservableRecord>, Vec<f64>) {
    let n = runs.len() as f64;
    let mean = |f: &dyn Fn(&ObservableRecord) -> f64, d: usize| runs.iter().map(|r| f(&r[d])).sum::<f64>() / n;
    let mut records = Vec::new();
    let mut stderr = Vec::new();
    for d in 0..runs[0].len() {
        let first = &runs[0][d];
        let e = mean(&|r| r.energy, d);
        let var = runs.iter().map(|r| (r[d].energy - e).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        stderr.push((var / n).sqrt());
        records.push(ObservableRecord {
            cycle: first.cycle,
            energy: e,
            z: (0..first.z.len()).map(|k| mean(&|r| r.z[k], d)).collect(),
            xx: (0..first.xx.len()).map(|k| mean(&|r| r.xx[k], d)).collect(),
            entropy: (0..first.entropy.len()).map(|k| mean(&|r| r.entropy[k], d)).collect(),
        });
    }
    (records, stderr)
}

pub fn cool(ctx: &Ctx) -> Outcome {
    let sec = ctx.file.cool.clone().unwrap_or_default();
    let cfg = &sec.circuit;
    cfg.validate()?;
    let lat = lattice(&sec)?;
    let engine = Engine::resolve(ctx.engine, cooling_reason(cfg, sec.grid.as_ref())?)?;
    if engine == Engine::Dense && sec.entropies {
        return Err(CliError::Core(floqcool::Error::Argument(
            "prefix entropies are computed by the Gaussian engine only".into(),
        )));
    }
    let mut run = ctx.start(Some(engine), &sec)?;
    let (records, stderr) = match engine {
        Engine::Gaussian => {
            let count = ctx
                .trajectories
                .or((sec.dephasing == Dephasing::Trajectory).then_some(1));
            match count {
                None => (
                    run_cooling(cfg, DephasingMode::Average, ctx.seed(), sec.entropies)?.records,
                    None,
                ),
                Some(n) => {
                    let runs = (0..n as u64)
                        .into_par_iter()
                        .map(|k| {
                            Ok(run_cooling(cfg, DephasingMode::Trajectory, ctx.seed() + k, sec.entropies)?.records)
                        })
                        .collect::<Result<Vec<_>, CliError>>()?;
                    let (r, e) = average_records(&runs);
                    (r, (n > 1).then_some(e))
                }
            }
        }
        Engine::Dense => {
            let r = run_dense_cooling(cfg, &lat, ctx.trajectories, ctx.seed())?;
            (r.records, r.energy_stderr)
        }
    };
    let e0 = match sec.grid {
        None => Some(ground_energy(cfg.g, cfg.j, cfg.l)?),
        Some(_) => None,
    };
    let mut columns = vec![("cycle", "cycles completed"), ("energy", "system energy -g ΣZ + J ΣXX")];
    if e0.is_some() {
        columns.push(("energy_ratio", "energy over the TFIM ground-state energy"));
    }
    if stderr.is_some() {
        columns.push(("energy_stderr", "standard error of the trajectory mean"));
    }
    let rows: Vec<Vec<Cell>> = records
        .iter()
        .enumerate()
        .map(|(d, r)| {
            let mut v = row![r.cycle, r.energy];
            if let Some(e0) = e0 {
                v.push(Cell::Num(r.energy / e0));
            }
            if let Some(s) = &stderr {
                v.push(Cell::Num(s[d]));
            }
            v
        })
        .collect();
    run.out.table("energy", &columns, &rows)?;
    let mut local = Vec::new();
    for r in &records {
        local.extend(r.z.iter().enumerate().map(|(k, &v)| row![r.cycle, "Z", k + 1, v]));
        local.extend(r.xx.iter().enumerate().map(|(k, &v)| row![r.cycle, "XX", k + 1, v]));
    }
    run.out.table(
        "local",
        &[
            ("cycle", "cycles completed"),
            ("observable", "Z per site or XX per bond"),
            ("index", "1-based site or bond"),
            ("value", "expectation value"),
        ],
        &local,
    )?;
    if sec.entropies {
        let rows: Vec<Vec<Cell>> = records
            .iter()
            .flat_map(|r| r.entropy.iter().enumerate().map(move |(k, &s)| row![r.cycle, k + 1, s]))
            .collect();
        run.out.table(
            "entropy",
            &[
                ("cycle", "cycles completed"),
                ("r", "prefix length"),
                ("entropy", "von Neumann entropy in bits"),
            ],
            &rows,
        )?;
    }
    let last = records.last().map(|r| r.energy).unwrap_or(0.0);
    done(
        run,
        json!({ "final_energy": last, "final_energy_ratio": e0.map(|e| last / e), "e0": e0 }),
    )
}

pub fn eigenmodes(ctx: &Ctx) -> Outcome {
    ctx.no_trajectories()?;
    let sec = ctx.file.eigenmodes.clone().unwrap_or_default();
    let table = solve_modes(sec.g, sec.j, sec.l)?;
    let mut run = ctx.start(None, &sec)?;
    let rows: Vec<Vec<Cell>> = table
        .rows()
        .into_iter()
        .map(|m| row![m.alpha, m.q, m.phi, m.delta, m.mu, m.xi, m.residual])
        .collect();
    run.out.table(
        "modes",
        &[
            ("alpha", "mode index by ascending quasienergy"),
            ("q", "quasimomentum (empty for modes recovered by diagonalization)"),
            ("phi", "quasienergy in radians"),
            ("delta", "boundary phase shift"),
            ("mu", "polar angle of the bulk spinor"),
            ("xi", "azimuthal angle of the bulk spinor"),
            ("residual", "largest eigen-equation residual"),
        ],
        &rows,
    )?;
    let edge = table.modes.iter().filter(|m| m.q.is_none()).count();
    done(run, json!({ "modes": table.modes.len(), "edge_modes": edge }))
}

pub fn secular(ctx: &Ctx) -> Outcome {
    ctx.no_trajectories()?;
    let sec = ctx.file.secular.clone().unwrap_or_default();
    if Engine::resolve(ctx.engine, None)? == Engine::Dense {
        return Err(CliError::Core(floqcool::Error::Capability(
            "the secular overlay compares against the exact Gaussian limit cycle".into(),
        )));
    }
    let table = solve_modes(sec.g, sec.j, sec.l)?;
    let p = SecularParams::new(table.clone(), sec.theta, sec.h, sec.m)?;
    let occ = steady_occupations(&p)?;
    let (shifts, delta0) = lamb_shift(&p)?;
    let mut cfg = CoolingConfig::edge_cooled(sec.l, sec.g, sec.j, sec.theta, sec.h, 0);
    cfg.m = 1;
    cfg.placement = vec![1];
    cfg.reset_period = sec.m;
    let (layout, state) = floqcool::gaussian::periodic_steady_state(&cfg)?;
    let s0 = layout.system[0];
    let simulated = OneBodyRDM::from_covariance(&state, s0..s0 + sec.l)
        .to_eigenbasis(&table)?
        .occupations()?;
    let mut run = ctx.start(Some(Engine::Gaussian), &sec)?;
    let rows = (0..table.modes.len())
        .map(|a| {
            let (wp, wm) = rates(&p, a)?;
            Ok(row![
                a + 1,
                table.modes[a].phi,
                occ.n[a],
                simulated[a],
                wp,
                wm,
                shifts[a],
                occ.indeterminate.contains(&a)
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    run.out.table(
        "occupations",
        &[
            ("alpha", "mode index by ascending quasienergy"),
            ("phi", "quasienergy in radians"),
            ("n_theory", "secular steady-state occupation"),
            ("n_simulated", "occupation in the exact limit cycle right after a reset"),
            ("w_plus", "creation probability per reset period"),
            ("w_minus", "annihilation probability per reset period"),
            ("lamb_shift", "auxiliary-induced quasienergy shift"),
            ("indeterminate", "both rates vanish and n_theory is set to 1/2"),
        ],
        &rows,
    )?;
    let mut summary = json!({ "delta0": delta0, "total_theory": occ.n.iter().sum::<f64>(), "total_simulated": simulated.iter().sum::<f64>() });
    if let Some(obj) = sec.objective {
        let opt = optimize_h(&p, obj, &default_h_grid())?;
        let name = serde_json::to_value(obj)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        run.out.table(
            "optimum",
            &[
                ("objective", "figure of merit"),
                ("h", "optimal auxiliary exponent"),
                ("value", "objective at the optimum"),
                ("degenerate", "objective flat over the grid"),
            ],
            &[row![name.as_str(), opt.h, opt.value, opt.degenerate]],
        )?;
        summary["h_opt"] = json!(opt.h);
    }
    done(run, summary)
}

pub fn rdm(ctx: &Ctx) -> Outcome {
    ctx.no_trajectories()?;
    let mut sec = ctx.file.rdm.clone().unwrap_or_default();
    if let Some(s) = ctx.seed {
        sec.protocol.seed = s;
    }
    let l = sec.l;
    let pr = &sec.protocol;
    let engine = Engine::resolve(ctx.engine, decay_reason(&sec.noise))?;
    let cfg = pr.config(l, sec.noise);
    let rdm = match engine {
        Engine::Gaussian if sec.noise.is_zero() => steady_rdm(l, pr.g, pr.j, pr.theta, pr.h, pr.reset_period)?,
        Engine::Gaussian => {
            let run = run_cooling(&cfg, DephasingMode::Average, pr.seed, false)?;
            let s0 = run.layout.system[0];
            OneBodyRDM::from_covariance(&run.state, s0..s0 + l)
        }
        Engine::Dense => {
            let lat = cooling_lattice_1d(&cfg)?;
            let state = run_dense_cooling(&cfg, &lat, None, pr.seed)?
                .state
                .ok_or_else(|| CliError::Io("dense run returned no state".into()))?;
            OneBodyRDM::from_dense(&state, &lat.system)?
        }
    };
    let table = solve_modes(pr.g, pr.j, l)?;
    let purified = rdm.purify();
    let pure = &purified.rdm;
    let n_raw = rdm.to_eigenbasis(&table)?.occupations()?;
    let n_pure = pure.to_eigenbasis(&table)?.occupations()?;
    let mask = edge_mask(&table, sec.edge_threshold);
    let max_r = sec.max_r.unwrap_or(l / 2).min(l);
    let mut run = ctx.start(Some(engine), &sec)?;
    let spec_pure = pure.spectrum();
    let rows: Vec<Vec<Cell>> = purified
        .spectrum
        .iter()
        .zip(&spec_pure)
        .enumerate()
        .map(|(k, (&a, &b))| row![k + 1, a, b])
        .collect();
    run.out.table(
        "spectrum",
        &[
            ("index", "eigenvalue rank, descending"),
            ("raw", "1RDM eigenvalue"),
            ("purified", "eigenvalue after purification"),
        ],
        &rows,
    )?;
    let rows: Vec<Vec<Cell>> = (0..l)
        .map(|a| row![a + 1, table.modes[a].phi, n_raw[a], n_pure[a], mask[a]])
        .collect();
    run.out.table(
        "occupations",
        &[
            ("alpha", "mode index by ascending quasienergy"),
            ("phi", "quasienergy in radians"),
            ("n_raw", "quasiparticle occupation"),
            ("n_purified", "occupation after purification"),
            ("edge", "excluded from the edge-excluded fidelity"),
        ],
        &rows,
    )?;
    let fid = [
        (
            "raw",
            vacuum_fidelity(&n_raw, None),
            vacuum_fidelity(&n_raw, Some(&mask)),
        ),
        (
            "purified",
            vacuum_fidelity(&n_pure, None),
            vacuum_fidelity(&n_pure, Some(&mask)),
        ),
    ];
    run.out.table(
        "fidelity",
        &[
            ("state", "raw or purified"),
            ("fidelity", "Floquet-vacuum fidelity over all modes"),
            ("fidelity_edge_excluded", "fidelity over modes not flagged edge"),
        ],
        &fid.iter().map(|&(s, a, b)| row![s, a, b]).collect::<Vec<_>>(),
    )?;
    let mut rows = Vec::new();
    for j in 1..=l {
        for k in j + 1..=l {
            rows.push(row![
                j,
                k,
                rdm.quantum_correlator(j, k)?,
                pure.quantum_correlator(j, k)?
            ]);
        }
    }
    run.out.table(
        "correlators",
        &[
            ("j", "first site, 1-based"),
            ("k", "second site, 1-based"),
            ("raw", "connected quadratic correlator"),
            ("purified", "correlator after purification"),
        ],
        &rows,
    )?;
    let rows = (1..=max_r)
        .map(|r| Ok(row![r, rdm.entropy(0..r)?, pure.entropy(0..r)?]))
        .collect::<Result<Vec<_>, CliError>>()?;
    run.out.table(
        "entropy",
        &[
            ("r", "prefix length"),
            ("raw", "entropy in bits"),
            ("purified", "entropy in bits after purification"),
        ],
        &rows,
    )?;
    done(
        run,
        json!({ "fidelity": fid[0].1, "fidelity_purified": fid[1].1, "purification_gap": purified.gap }),
    )
}

fn xxz_engine(ctx: &Ctx) -> Result<Engine, CliError> {
    ctx.no_trajectories()?;
    Engine::resolve(ctx.engine, Some("XXZ interactions are not free-fermion"))
}

pub fn xxz(ctx: &Ctx) -> Outcome {
    let engine = xxz_engine(ctx)?;
    let mut sec = ctx.file.xxz.clone().unwrap_or_default();
    if let Some(s) = ctx.seed {
        sec.circuit.seed = s;
    }
    let series = run_transport(&sec.circuit)?;
    let ness = ness_summary(&series, sec.tail)?;
    let fit = fit_pumping_exponent(&series, sec.window);
    let mut run = ctx.start(Some(engine), &sec)?;
    let rows: Vec<Vec<Cell>> = series
        .times
        .iter()
        .zip(&series.p1)
        .flat_map(|(&t, p)| p.iter().enumerate().map(move |(q, &v)| row![t, q, v]))
        .collect();
    run.out.table(
        "populations",
        &[
            ("t", "time in cycles, sampled every half cycle"),
            ("qubit", "0-based qubit; 0 and N-1 are the auxiliaries"),
            ("p1", "probability of |1>"),
        ],
        &rows,
    )?;
    let rows: Vec<Vec<Cell>> = series
        .currents
        .iter()
        .enumerate()
        .flat_map(|(d, c)| c.iter().enumerate().map(move |(j, &v)| row![d, j + 1, v]))
        .collect();
    run.out.table(
        "currents",
        &[
            ("d", "cycle"),
            ("bond", "system qubit j receiving the current, 1-based"),
            ("current", "population transferred into qubit j during the cycle"),
        ],
        &rows,
    )?;
    let rows: Vec<Vec<Cell>> = ness
        .bond_currents
        .iter()
        .zip(&ness.profile)
        .enumerate()
        .map(|(j, (&c, &p))| row![j + 1, c, p])
        .collect();
    run.out.table(
        "ness",
        &[
            ("bond", "system qubit, 1-based"),
            ("current", "tail-averaged current"),
            ("p1", "tail-averaged population"),
        ],
        &rows,
    )?;
    let (exponent, stderr) = match fit {
        Ok((a, e)) => (Some(a), Some(e)),
        Err(_) => (None, None),
    };
    done(
        run,
        json!({ "drift": ness.drift, "converged": ness.converged, "pumping_exponent": exponent, "exponent_stderr": stderr }),
    )
}

pub fn compare_prep(ctx: &Ctx) -> Outcome {
    ctx.no_trajectories()?;
    let mut sec = ctx.file.compare_prep.clone().unwrap_or_default();
    if let Some(s) = ctx.seed {
        sec.protocol.seed = s;
    }
    let engine = Engine::resolve(ctx.engine, decay_reason(&sec.noise))?;
    let prep = match engine {
        Engine::Gaussian => PrepEngine::Gaussian,
        Engine::Dense => PrepEngine::Dense,
    };
    let rows = run_comparison(&sec.lengths, &sec.noise, &sec.protocol, prep)?;
    let mut run = ctx.start(Some(engine), &sec)?;
    run.out.table(
        "comparison",
        &[
            ("L", "chain length"),
            ("fid_d", "vacuum fidelity after dissipative cooling"),
            ("fid_u", "vacuum fidelity after unitary preparation"),
            ("fid_d_pure", "dissipative fidelity after purification"),
            ("fid_u_pure", "unitary fidelity after purification"),
        ],
        &rows
            .iter()
            .map(|r| row![r.l, r.fid_d, r.fid_u, r.fid_d_pure, r.fid_u_pure])
            .collect::<Vec<_>>(),
    )?;
    let modes: Vec<Vec<Cell>> = rows
        .iter()
        .flat_map(|r| (0..r.l).map(move |a| row![r.l, a + 1, r.phi[a], r.occ_d[a], r.occ_u[a]]))
        .collect();
    run.out.table(
        "modes",
        &[
            ("L", "chain length"),
            ("alpha", "mode index by ascending quasienergy"),
            ("phi", "quasienergy in radians"),
            ("occ_d", "occupation after dissipative cooling"),
            ("occ_u", "occupation after unitary preparation"),
        ],
        &modes,
    )?;
    done(run, json!({ "lengths": sec.lengths.len() }))
}

pub fn stabilize(ctx: &Ctx) -> Outcome {
    ctx.no_trajectories()?;
    let engine = Engine::resolve(
        ctx.engine,
        Some("single-qubit X rotations are odd in the Majorana operators"),
    )?;
    let mut sec: StabilizeConfig = ctx.file.stabilize.clone().unwrap_or_else(StabilizeConfig::reference);
    if let Some(s) = ctx.seed {
        sec.seed = s;
    }
    let res = stabilize_single_qubit(&sec)?;
    let mut run = ctx.start(Some(engine), &sec)?;
    let rows: Vec<Vec<Cell>> = res
        .bloch
        .iter()
        .enumerate()
        .flat_map(|(i, b)| b.iter().enumerate().map(move |(d, &(x, z))| row![i + 1, d, x, z]))
        .collect();
    run.out.table(
        "bloch",
        &[
            ("initial", "initial-state index"),
            ("cycle", "cycles completed"),
            ("x", "<X> of the system qubit"),
            ("z", "<Z> of the system qubit"),
        ],
        &rows,
    )?;
    let (tx, tz) = res.target;
    let rows: Vec<Vec<Cell>> = res
        .steady
        .iter()
        .enumerate()
        .map(|(i, &(x, z))| row![i + 1, x, z, (x - tx).hypot(z - tz)])
        .collect();
    run.out.table(
        "steady",
        &[
            ("initial", "initial-state index"),
            ("x", "window-averaged <X>"),
            ("z", "window-averaged <Z>"),
            ("deviation", "distance from the target Bloch vector"),
        ],
        &rows,
    )?;
    done(run, json!({ "target": [tx, tz], "max_deviation": res.max_deviation }))
}

pub fn sweep_cooling(ctx: &Ctx) -> Outcome {
    let sec = ctx.file.sweep.clone().unwrap_or_default().cooling.unwrap_or_default();
    let thetas = sec.theta_over_pi.points("sweep.cooling.theta_over_pi")?;
    let hs = sec.h.points("sweep.cooling.h")?;
    let probe = sec.config(thetas[0] * PI, hs[0]);
    probe.validate()?;
    let engine = Engine::resolve(ctx.engine, decay_reason(&sec.noise))?;
    if engine == Engine::Gaussian && ctx.trajectories.is_some() {
        return Err(CliError::Core(floqcool::Error::Argument(
            "Gaussian sweeps use averaged dephasing".into(),
        )));
    }
    let e0 = ground_energy(sec.g, sec.j, sec.l)?;
    let grid: Vec<(f64, f64)> = thetas.iter().flat_map(|&t| hs.iter().map(move |&h| (t, h))).collect();
    let tail_mean = |records: &[ObservableRecord]| {
        let k = sec.reset_period.min(records.len());
        records[records.len() - k..].iter().map(|r| r.energy).sum::<f64>() / k as f64
    };
    let ratios = grid
        .par_iter()
        .map(|&(t, h)| {
            let cfg = sec.config(t * PI, h);
            Ok(match engine {
                Engine::Gaussian if sec.noise.is_zero() => limit_cycle_ratio(&cfg)?,
                Engine::Gaussian => {
                    tail_mean(&run_cooling(&cfg, DephasingMode::Average, ctx.seed(), false)?.records) / e0
                }
                Engine::Dense => {
                    let lat = cooling_lattice_1d(&cfg)?;
                    tail_mean(&run_dense_cooling(&cfg, &lat, ctx.trajectories, ctx.seed())?.records) / e0
                }
            })
        })
        .collect::<Result<Vec<f64>, CliError>>()?;
    let mut run = ctx.start(Some(engine), &sec)?;
    let rows: Vec<Vec<Cell>> = grid
        .iter()
        .zip(&ratios)
        .map(|(&(t, h), &r)| row![t * PI, t, h, r])
        .collect();
    run.out.table(
        "surface",
        &[
            ("theta", "partial-iSWAP angle in radians"),
            ("theta_over_pi", "theta in units of pi"),
            ("h", "auxiliary exponent"),
            (
                "ratio",
                "energy over ground-state energy, averaged over the last reset period",
            ),
        ],
        &rows,
    )?;
    let best = ratios
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, &r)| json!({ "theta_over_pi": grid[k].0, "h": grid[k].1, "ratio": r }));
    done(run, json!({ "points": grid.len(), "best": best }))
}

pub fn sweep_xxz(ctx: &Ctx) -> Outcome {
    let engine = xxz_engine(ctx)?;
    let sec = ctx.file.sweep.clone().unwrap_or_default().xxz.unwrap_or_default();
    let thetas = sec.theta_over_pi.points("sweep.xxz.theta_over_pi")?;
    let seed = ctx.seed();
    let results = thetas
        .par_iter()
        .map(|&t| {
            let mut cfg = XxzConfig::new(sec.n, t * PI, sec.phi, sec.cycles);
            cfg.noise = sec.noise;
            cfg.seed = seed;
            Ok(ness_summary(&run_transport(&cfg)?, sec.tail)?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut run = ctx.start(Some(engine), &sec)?;
    let rows: Vec<Vec<Cell>> = thetas
        .iter()
        .zip(&results)
        .flat_map(|(&t, n)| {
            n.bond_currents
                .iter()
                .enumerate()
                .map(move |(j, &c)| row![t * PI, t, j + 1, c, n.converged])
        })
        .collect();
    run.out.table(
        "ness",
        &[
            ("theta", "fSim swap angle in radians"),
            ("theta_over_pi", "theta in units of pi"),
            ("bond", "system qubit receiving the current, 1-based"),
            ("j_ness", "tail-averaged current"),
            ("converged", "pumping current drifted less than 5% over the tail"),
        ],
        &rows,
    )?;
    done(run, json!({ "points": thetas.len() }))
}

pub fn validate(ctx: &Ctx) -> Outcome {
    ctx.no_trajectories()?;
    let sec = ctx.file.validate.clone().unwrap_or_default();
    let cases = oracle_suite(sec.count, sec.max_qubits, ctx.seed())?;
    let mut run = ctx.start(None, &sec)?;
    let rows: Vec<Vec<Cell>> = cases
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let f = &c.config;
            row![
                k + 1,
                f.l,
                f.m,
                f.g,
                f.j,
                f.theta,
                f.h,
                f.reset_period,
                f.cycles,
                c.observables,
                c.max_deviation
            ]
        })
        .collect();
    run.out.table(
        "oracle",
        &[
            ("case", "circuit index"),
            ("L", "chain length"),
            ("M", "auxiliaries"),
            ("g", "field"),
            ("J", "coupling"),
            ("theta", "partial-iSWAP angle in radians"),
            ("h", "auxiliary exponent"),
            ("reset_period", "cycles between resets"),
            ("cycles", "cycles run"),
            ("observables", "Pauli strings compared"),
            ("max_deviation", "largest difference between the engines"),
        ],
        &rows,
    )?;
    let worst = cases.iter().map(|c| c.max_deviation).fold(0.0, f64::max);
    let failure = (worst > sec.tolerance).then(|| format!("engines differ by {worst:.3e} > {:.1e}", sec.tolerance));
    Ok((
        run,
        Report {
            summary: json!({ "cases": cases.len(), "max_deviation": worst }),
            failure,
        },
    ))
}
