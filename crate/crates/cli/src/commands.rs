use std::path::Path;

use anyhow::{Context, Result};
use drce_core::bench::{random_stochastic, time_cost_sequences, time_power};
use drce_core::finite::{cost_sequence_naive, cost_sequence_sabs, rce_finite, CostSequence};
use drce_core::infinite::{decompose, geometric_drce, rce_infinite, RceInfKind};
use drce_core::markov::{to_gas, MarkovChain};
use drce_core::scenarios::{
    build_csoc_overtime, build_health_chain, compare_report, sample_horizons, ComparisonReport, CsocParams, HealthModel,
    HealthParams,
};
use drce_core::wasserstein::{drce_finite, AmbiguitySet, DrceCase};
use drce_core::{Matrix, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{load_model, load_nominal, reduce, Loaded, MatrixData, ModelFile, ModelKind};
use crate::output::{real, Table};
use crate::{Algo, Command, InputError, Scenario};

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Convert { model, out } => convert(&model, out.as_deref()),
        Command::Rce { model, horizon, algo, out } => {
            positive(horizon, "horizon")?;
            let m = load_model(&model)?;
            let seq = sequence(&m, horizon, algo)?;
            let (t, v) = rce_finite(&seq)?;
            let mut table = Table::new("t_star,value");
            table.row(&[t.to_string(), real(v)]);
            table.write(out.as_deref())
        }
        Command::Drce { model, nominal, radius, algo, out } => {
            non_negative(radius, "radius")?;
            let m = load_model(&model)?;
            let p = load_nominal(&nominal)?;
            let amb = AmbiguitySet::line(p, radius).map_err(|e| InputError(format!("nominal distribution: {e}")))?;
            let seq = sequence(&m, amb.support(), algo)?;
            let sol = drce_finite(&seq, &amb)?;
            let case = match sol.case_used {
                DrceCase::VertexEnumeration => "vertex",
                DrceCase::Lp => "lp",
            };
            let mut table = Table::new("value,case");
            table.row(&[real(sol.value), case.into()]);
            table.write(out.as_deref())
        }
        Command::RceInf { model, out } => {
            let m = load_model(&model)?.stable()?;
            let res = rce_infinite(&m.m, m.cost()?, m.x0()?)?;
            let kind = match res.kind {
                RceInfKind::Attained => "attained",
                RceInfKind::SupremumAtInfinity => "supremum_at_infinity",
            };
            let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
            let mut table = Table::new("kind,t_star,value,n0");
            table.row(&[kind.into(), opt(res.t_star), real(res.value + m.offset), opt(res.n0)]);
            table.write(out.as_deref())
        }
        Command::DrceGeom { model, rho, radius, eps, out } => {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(InputError(format!("rho = {rho} must lie in (0, 1)")).into());
            }
            non_negative(radius, "radius")?;
            if !(eps > 0.0) {
                return Err(InputError(format!("eps = {eps} must be positive")).into());
            }
            let m = load_model(&model)?.stable()?;
            let s = decompose(&m.m, m.cost()?, m.x0()?)?;
            let res = geometric_drce(&s, rho, radius, eps)?;
            let mut table = Table::new("rho_star,value,error_bound,n0,rho_lo,rho_hi");
            table.row(&[
                real(res.rho_star),
                real(res.value + m.offset),
                real(res.error_bound),
                res.n0.to_string(),
                real(res.interval.0),
                real(res.interval.1),
            ]);
            table.write(out.as_deref())
        }
        Command::Scenario { name, samples, seed, xi, out } => {
            positive(samples, "samples")?;
            let report = scenario(name, samples, seed, xi)?;
            let mut table = Table::new(ComparisonReport::CSV_HEADER);
            table.row(&[report.csv_row(real)]);
            table.write(out.as_deref())
        }
        Command::Bench { sizes, horizon, power, reps, seed, out } => {
            positive(horizon, "horizon")?;
            if sizes.iter().any(|&n| n < 2) {
                return Err(InputError("sizes must be at least 2".into()).into());
            }
            bench(&sizes, horizon, power, reps, seed)?.write(out.as_deref())
        }
    }
}

fn positive(v: usize, what: &str) -> Result<()> {
    if v == 0 {
        return Err(InputError(format!("{what} must be positive")).into());
    }
    Ok(())
}

fn non_negative(v: f64, what: &str) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(InputError(format!("{what} = {v} must be finite and non-negative")).into());
    }
    Ok(())
}

fn sequence(m: &Loaded, horizon: usize, algo: Algo) -> Result<CostSequence<f64>> {
    let (c, x0) = (m.cost()?, m.x0()?);
    let seq = match algo {
        Algo::Naive => cost_sequence_naive(&m.m, x0, c, horizon)?,
        Algo::Sabs => cost_sequence_sabs(&m.m, x0, c, horizon)?,
    };
    Ok(CostSequence::new(seq.values().iter().map(|v| v + m.offset).collect())?)
}

fn convert(path: &Path, out: Option<&Path>) -> Result<()> {
    let loaded = load_model(path)?;
    if loaded.kind != ModelKind::Markov {
        return Err(InputError("model is already reduced".into()).into());
    }
    let gas = reduce(&loaded.m)?;
    let x0 = match &loaded.x0 {
        Some(x) => Some(gas.project_state(x).map_err(|e| InputError(format!("x0: {e}")))?.into_vec()),
        None => None,
    };
    let (cost, offset) = match &loaded.cost {
        Some(c) => {
            let (reduced, offset) = gas.transfer_cost(c)?;
            (Some(reduced.into_vec()), Some(offset + loaded.offset))
        }
        None => (None, None),
    };
    let file = ModelFile {
        n: gas.m_bar.rows(),
        matrix: MatrixData::from_matrix(&gas.m_bar),
        kind: ModelKind::Gas,
        cost,
        x0,
        cost_offset: offset,
        stationary: Some(gas.stationary.as_slice().to_vec()),
        a: Some(MatrixData::from_matrix(&gas.a_op)),
        b: Some(MatrixData::from_matrix(&gas.b_op)),
    };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn scenario(name: Scenario, samples: usize, seed: u64, xi: Option<f64>) -> Result<ComparisonReport> {
    let (model, horizons, default_xi) = match name {
        Scenario::Csoc => {
            let p = CsocParams::default();
            (build_csoc_overtime(&p)?, (p.overtime_min, p.overtime_max, p.overtime_mean), 16.0)
        }
        Scenario::Sir | Scenario::Svir => {
            let model = if name == Scenario::Sir { HealthModel::Sir } else { HealthModel::Svir };
            let p = HealthParams::new(model);
            (build_health_chain(&p)?, (p.horizon_min, p.horizon_max, p.horizon_mean), 1.0)
        }
    };
    let xi = xi.unwrap_or(default_xi);
    non_negative(xi, "xi")?;
    let (lo, hi, mean) = horizons;
    let draws = sample_horizons(lo, hi, mean, samples, seed)?;
    Ok(compare_report(&model, &draws, xi, seed)?)
}

fn bench(sizes: &[usize], horizon: usize, power: u64, reps: usize, seed: u64) -> Result<Table> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new("n,horizon,naive_s,sabs_s,max_diff,power,full_pow_s,reduced_pow_s");
    for &n in sizes {
        let m: Matrix = random_stochastic(n, &mut rng);
        let gas = to_gas(&MarkovChain::new(m.clone())?)?;
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let x0: Vector = raw.iter().map(|v| v / total).collect();
        let c: Vector = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v = gas.project_state(&x0)?;
        let (reduced_c, _) = gas.transfer_cost(&c)?;
        let seq = time_cost_sequences(&gas.m_bar, &v, &reduced_c, horizon, reps)?;
        let full = time_power(&m.transpose(), power, reps)?;
        let reduced = time_power(&gas.m_bar.transpose(), power, reps)?;
        table.row(&[
            n.to_string(),
            horizon.to_string(),
            real(seq.naive.as_secs_f64()),
            real(seq.sabs.as_secs_f64()),
            real(seq.max_diff),
            power.to_string(),
            real(full.as_secs_f64()),
            real(reduced.as_secs_f64()),
        ]);
    }
    Ok(table)
}

