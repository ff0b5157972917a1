use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    build_admittance, place_pmus_with, svd, AdmittanceMatrix, ComplexMatrix, GridError, Placement,
    PlacementLimits, PowerNetwork, SvdResult,
};
use crate::sched::Instance;

/// Processing times are drawn uniformly from 1..=PROC_TIME_MAX_MS.
pub const PROC_TIME_MAX_MS: u64 = 50;

/// Relative magnitude difference below which two entries count as tied.
const TIE_TOL: f64 = 1e-9;

/// Everything the instance was derived from.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub placement: Placement,
    pub svd: SvdResult,
    /// PMU buses by precedence rank, first transmitted first.
    pub chain: Vec<u32>,
    /// Weight per rank.
    pub weights: Vec<u64>,
    pub instance: Instance,
}

/// Principal submatrix on the placement buses, rows in ascending bus id.
pub fn pmu_submatrix(
    y: &AdmittanceMatrix,
    placement: &Placement,
) -> Result<ComplexMatrix, GridError> {
    let mut buses = placement.buses.clone();
    buses.sort_unstable();
    let idx = buses
        .iter()
        .map(|&b| {
            y.bus_ids
                .iter()
                .position(|&id| id == b)
                .ok_or(GridError::UnknownBus(b))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(y.matrix.select(&idx))
}

/// ⌈σₙ / N⌉ per rank n; ‖σₙuₙ‖ = σₙ since uₙ is a unit vector.
pub fn derive_weights(svd: &SvdResult, n: usize) -> Vec<u64> {
    svd.singular_values
        .iter()
        .map(|&s| (s / n as f64).ceil() as u64)
        .collect()
}

/// Ranks PMUs: vector n (descending σ) selects its largest-magnitude entry among the
/// PMUs not yet ranked. Near-equal magnitudes go to the smaller bus id.
pub fn derive_precedence(svd: &SvdResult, placement: &Placement) -> Vec<u32> {
    let mut buses = placement.buses.clone();
    buses.sort_unstable();
    let n = buses.len();
    let mut ranked = vec![false; n];
    let mut chain = Vec::with_capacity(n);
    for (k, &sigma) in svd.singular_values.iter().enumerate().take(n) {
        let mags: Vec<f64> = svd.left(k).iter().map(|z| (z * sigma).norm()).collect();
        let peak = (0..n)
            .filter(|&i| !ranked[i])
            .map(|i| mags[i])
            .fold(f64::NEG_INFINITY, f64::max);
        let pick = (0..n)
            .find(|&i| !ranked[i] && mags[i] >= peak - TIE_TOL * peak.abs())
            .expect("an unranked PMU remains");
        ranked[pick] = true;
        chain.push(buses[pick]);
    }
    chain
}

pub fn derive_instance(net: &PowerNetwork, seed: u64) -> Result<Instance, GridError> {
    derive(net, seed, PlacementLimits::default()).map(|d| d.instance)
}

/// Placement, SVD of the PMU submatrix, weights and chain, random processing times.
///
/// Jobs are the PMU buses in ascending id; labels carry the ids.
pub fn derive(
    net: &PowerNetwork,
    seed: u64,
    limits: PlacementLimits,
) -> Result<Derivation, GridError> {
    let y = build_admittance(net)?;
    let placement = place_pmus_with(net, limits);
    let sub = pmu_submatrix(&y, &placement)?;
    let svd = svd(&sub)?;
    let n = placement.n();
    let weights = derive_weights(&svd, n);
    let chain = derive_precedence(&svd, &placement);

    let buses = &placement.buses;
    let job_of = |bus: u32| buses.binary_search(&bus).expect("chain bus is placed");
    let mut w = vec![0; n];
    for (rank, &bus) in chain.iter().enumerate() {
        w[job_of(bus)] = weights[rank];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p: Vec<u64> = (0..n)
        .map(|_| rng.gen_range(1..=PROC_TIME_MAX_MS))
        .collect();
    let edges: Vec<(usize, usize)> = chain
        .windows(2)
        .map(|pair| (job_of(pair[0]), job_of(pair[1])))
        .collect();
    let instance = Instance::new(p, w, &edges)
        .expect("chain over distinct jobs is acyclic")
        .with_labels(buses.iter().map(|b| b.to_string()).collect());
    Ok(Derivation {
        placement,
        svd,
        chain,
        weights,
        instance,
    })
}
