//! Per-temperature evaluation of the chain model, optionally through
//! simulated tomography.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thermal_cluster_core::entanglement::{ChainNegativities, EntanglementClass, DEFAULT_TOLERANCE};
use thermal_cluster_core::linalg::fidelity;
use thermal_cluster_core::mbqc::{target_map, OutcomeWeighting, PairSelection, TargetMap};
use thermal_cluster_core::thermal::{gibbs_state, thermal_state_model, TemperaturePoint};
use thermal_cluster_core::tomography::{
    mle_reconstruct_observed, monte_carlo_statistics, simulate_counts, standard_settings, MleOptions, Observations,
};
use thermal_cluster_core::DensityMatrix;

use crate::config::{Grid, SweepConfig};
use crate::{Error, Result};

/// One row of the sweep table. Errors are Monte Carlo standard deviations,
/// zero when tomography is off.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct SweepPoint {
    pub p: f64,
    #[serde(with = "extended_real")]
    pub t_over_delta: f64,
    pub neg_Ap: f64,
    pub err_Ap: f64,
    pub neg_Bp: f64,
    pub err_Bp: f64,
    pub neg_Bs: f64,
    pub err_Bs: f64,
    #[serde(with = "class_label")]
    pub class: EntanglementClass,
    pub avg_fidelity: f64,
    pub fid_error: f64,
    pub state_fidelity_vs_ideal: f64,
}

/// Offsets between the count and Monte Carlo streams of neighbouring grid
/// points, so no two points share a seed.
const POINT_STRIDE: u64 = 1 << 32;
const MC_OFFSET: u64 = 1 << 31;

pub fn count_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add((index as u64).wrapping_mul(POINT_STRIDE))
}

pub fn mc_seed(base: u64, index: usize) -> u64 {
    count_seed(base, index).wrapping_add(MC_OFFSET)
}

/// Evaluates every grid point in parallel; rows come back in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepPoint>> {
    let map = target_map(&cfg.graph, PairSelection::Teleportation).map_err(Error::numerical("target map"))?;
    let values = cfg.grid.values();
    values
        .par_iter()
        .enumerate()
        .map(|(index, &v)| {
            let point = match cfg.grid {
                Grid::P(_) => TemperaturePoint::from_p(v),
                Grid::T(_) => TemperaturePoint::from_temperature(v),
            };
            point
                .and_then(|tp| evaluate(cfg, &map, index, tp))
                .map_err(Error::numerical(format!("grid point {index} ({v})")))
        })
        .collect()
}

struct Measured {
    negs: [f64; 3],
    avg_fidelity: f64,
}

fn measure(rho: &DensityMatrix, map: &TargetMap) -> thermal_cluster_core::Result<Measured> {
    Ok(Measured {
        negs: ChainNegativities::of(rho)?.as_array(),
        avg_fidelity: map.average_fidelity(rho, OutcomeWeighting::Probability)?,
    })
}

fn evaluate(
    cfg: &SweepConfig,
    map: &TargetMap,
    index: usize,
    tp: TemperaturePoint,
) -> thermal_cluster_core::Result<SweepPoint> {
    let model = thermal_state_model(&cfg.graph, tp.p, cfg.alpha)?;
    let ideal = gibbs_state(&cfg.graph, 1.0, tp.t_over_delta)?;

    let (state, errors) = if cfg.tomography_enabled {
        let opts = MleOptions::default();
        let rec = simulate_counts(&model, &standard_settings(3), cfg.flux, count_seed(cfg.seed, index))?;
        let recon = mle_reconstruct_observed(&Observations::from(&rec), &opts)?;
        let stats = monte_carlo_statistics(&rec, cfg.mc_samples, mc_seed(cfg.seed, index), &opts, |rho| {
            let m = measure(rho, map)?;
            Ok(vec![m.negs[0], m.negs[1], m.negs[2], m.avg_fidelity])
        })?;
        (recon.rho, [stats[0].std, stats[1].std, stats[2].std, stats[3].std])
    } else {
        (model, [0.0; 4])
    };

    let m = measure(&state, map)?;
    // A cut counts as NPT when its negativity clears its error bar.
    let thresholds: Vec<f64> = errors[..3].iter().map(|e| e.max(DEFAULT_TOLERANCE)).collect();
    let class = EntanglementClass::from_negativities(&m.negs, &thresholds);
    // Negativity order: A_p (qubit 0), B_p (qubit 2), B_s (qubit 1).
    Ok(SweepPoint {
        p: tp.p,
        t_over_delta: tp.t_over_delta,
        neg_Ap: m.negs[0],
        err_Ap: errors[0],
        neg_Bp: m.negs[1],
        err_Bp: errors[1],
        neg_Bs: m.negs[2],
        err_Bs: errors[2],
        class,
        avg_fidelity: m.avg_fidelity,
        fid_error: errors[3],
        state_fidelity_vs_ideal: fidelity(&state, &ideal)?,
    })
}

/// A real that may be `+inf`, written as the string `"inf"`.
mod extended_real {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) => Err(de::Error::custom(format!("expected a number or \"inf\", got {t:?}"))),
        }
    }
}

mod class_label {
    use serde::{de, Deserialize, Deserializer, Serializer};
    use thermal_cluster_core::entanglement::EntanglementClass;

    pub fn serialize<S: Serializer>(c: &EntanglementClass, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(c.label())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<EntanglementClass, D::Error> {
        let text = String::deserialize(d)?;
        EntanglementClass::from_label(&text).ok_or_else(|| de::Error::custom(format!("unknown class {text:?}")))
    }
}
