//! Seeded synthetic data: Gaussian blobs plus uniform noise, either as a
//! plain feature matrix or shaped like the municipality table.

use std::f64::consts::PI;

use clustat_core::seed::rng_for;
use clustat_core::FeatureMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{PipelineError, Result};
use crate::ingest::Dataset;
use crate::schema::MunicipalityRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub n: usize,
    pub planted_k: usize,
    /// Minimum distance between blob centers, in units of `sd`.
    pub separation: f64,
    /// Share of the `n` points drawn as uniform noise.
    pub noise_fraction: f64,
    pub dims: usize,
    pub sd: f64,
}

impl SynthParams {
    pub fn new(n: usize, planted_k: usize, separation: f64, noise_fraction: f64) -> Self {
        Self {
            n,
            planted_k,
            separation,
            noise_fraction,
            dims: 2,
            sd: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| {
            Err(PipelineError::config(format!(
                "infeasible synthesis parameters: {msg}"
            )))
        };
        if self.planted_k == 0 || self.planted_k > self.n {
            return bad("need 1 <= planted_k <= n");
        }
        if !(self.separation > 0.0 && self.separation.is_finite()) {
            return bad("separation must be positive");
        }
        if !(0.0..1.0).contains(&self.noise_fraction) {
            return bad("noise_fraction must lie in [0, 1)");
        }
        if self.dims == 0 || !(self.sd > 0.0 && self.sd.is_finite()) {
            return bad("need dims >= 1 and a positive sd");
        }
        if self.n - self.noise_count() < self.planted_k {
            return bad("too much noise to populate every blob");
        }
        Ok(())
    }

    fn noise_count(&self) -> usize {
        (self.n as f64 * self.noise_fraction).round() as usize
    }

    /// Blob sizes, as even as possible, larger blobs first.
    fn blob_sizes(&self) -> Vec<usize> {
        let m = self.n - self.noise_count();
        (0..self.planted_k)
            .map(|c| m / self.planted_k + usize::from(c < m % self.planted_k))
            .collect()
    }
}

/// Synthetic points with their true labels (`None` for noise).
#[derive(Debug, Clone, PartialEq)]
pub struct Synthetic {
    pub matrix: FeatureMatrix<f64>,
    pub truth: Vec<Option<usize>>,
}

/// Two-dimensional unit-variance blobs.
pub fn synthesize(
    seed: u64,
    n: usize,
    planted_k: usize,
    separation: f64,
    noise_fraction: f64,
) -> Result<Synthetic> {
    synthesize_with(
        seed,
        &SynthParams::new(n, planted_k, separation, noise_fraction),
    )
}

/// Blob centers sit on a regular polygon (a line when `dims == 1`) whose
/// nearest vertices are exactly `separation * sd` apart. Blob points come
/// first, in blob order, then the noise points, drawn uniformly from the
/// bounding box of the blobs.
pub fn synthesize_with(seed: u64, params: &SynthParams) -> Result<Synthetic> {
    params.validate()?;
    let mut rng = rng_for(seed, 0);
    let centers = centers(params);
    let mut rows = Vec::with_capacity(params.n);
    let mut truth = Vec::with_capacity(params.n);
    for (c, &size) in params.blob_sizes().iter().enumerate() {
        for _ in 0..size {
            let z = centers[c].iter().map(|&m| {
                let e: f64 = rng.sample(StandardNormal);
                m + params.sd * e
            });
            rows.push(z.collect::<Vec<_>>());
            truth.push(Some(c));
        }
    }
    let noise = params.noise_count();
    if noise > 0 {
        let margin = 3.0 * params.sd;
        let bounds: Vec<(f64, f64)> = (0..params.dims)
            .map(|j| {
                let lo = centers.iter().map(|c| c[j]).fold(f64::INFINITY, f64::min) - margin;
                let hi = centers
                    .iter()
                    .map(|c| c[j])
                    .fold(f64::NEG_INFINITY, f64::max)
                    + margin;
                (lo, hi)
            })
            .collect();
        for _ in 0..noise {
            rows.push(
                bounds
                    .iter()
                    .map(|&(lo, hi)| rng.random_range(lo..hi))
                    .collect(),
            );
            truth.push(None);
        }
    }
    let matrix = FeatureMatrix::from_rows(rows).map_err(PipelineError::numeric("synthesizing"))?;
    Ok(Synthetic { matrix, truth })
}

fn centers(params: &SynthParams) -> Vec<Vec<f64>> {
    let k = params.planted_k;
    let gap = params.separation * params.sd;
    (0..k)
        .map(|c| {
            let mut v = vec![0.0; params.dims];
            if k == 1 {
                return v;
            }
            if params.dims == 1 {
                v[0] = c as f64 * gap;
            } else {
                // chord between neighbouring vertices equals `gap`
                let radius = gap / (2.0 * (PI / k as f64).sin());
                let angle = 2.0 * PI * c as f64 / k as f64;
                v[0] = radius * angle.cos();
                v[1] = radius * angle.sin();
            }
            v
        })
        .collect()
}

/// Spread of one blob on the latent `[0, 1]` scale of each table column.
const LATENT_SD: f64 = 0.02;
/// Largest allowed distance between the outermost latent blob centers.
const LATENT_SPAN: f64 = 0.9;

/// A municipality table whose rows come from `planted_k` groups. Every
/// column is an affine map of a latent score; group centers on that score
/// are `separation * 0.02` apart and ordered at random per column, except
/// that MHR shares the ordering of POPULATION.
pub fn synthesize_records(
    seed: u64,
    n: usize,
    planted_k: usize,
    separation: f64,
    noise_fraction: f64,
) -> Result<(Dataset, Vec<Option<usize>>)> {
    let params = SynthParams {
        dims: 1,
        sd: LATENT_SD,
        ..SynthParams::new(n, planted_k, separation, noise_fraction)
    };
    params.validate()?;
    if n < 2 {
        return Err(PipelineError::config(
            "infeasible synthesis parameters: need n >= 2",
        ));
    }
    let span = separation * LATENT_SD * (planted_k - 1) as f64;
    if span > LATENT_SPAN {
        return Err(PipelineError::config(format!(
            "infeasible synthesis parameters: {planted_k} groups {separation} sd apart do not fit the value ranges"
        )));
    }

    let mut rng = rng_for(seed, 1);
    let columns = 16;
    // per column, a random order of the groups along the latent axis
    let mut offsets: Vec<Vec<f64>> = (0..columns)
        .map(|_| {
            let mut order: Vec<usize> = (0..planted_k).collect();
            order.shuffle(&mut rng);
            order
                .into_iter()
                .map(|rank| 0.5 - span / 2.0 + rank as f64 * separation * LATENT_SD)
                .collect()
        })
        .collect();
    offsets[0] = offsets[1].clone();

    let mut records = Vec::with_capacity(n);
    let mut truth = Vec::with_capacity(n);
    let mut group_of = Vec::with_capacity(n);
    for (c, &size) in params.blob_sizes().iter().enumerate() {
        group_of.extend(std::iter::repeat_n(Some(c), size));
    }
    group_of.resize(n, None);

    for (i, group) in group_of.into_iter().enumerate() {
        let latent: Vec<f64> = (0..columns)
            .map(|j| match group {
                Some(c) => {
                    let e: f64 = rng.sample(StandardNormal);
                    (offsets[j][c] + LATENT_SD * e).clamp(0.0, 1.0)
                }
                None => rng.random::<f64>(),
            })
            .collect();
        records.push(record_from_latent(
            format!("Municipality {:03}", i + 1),
            &latent,
        ));
        truth.push(group);
    }
    Ok((Dataset::from_records(records)?, truth))
}

fn round_to(v: f64, digits: i32) -> f64 {
    let f = 10f64.powi(digits);
    (v * f).round() / f
}

fn record_from_latent(name: String, u: &[f64]) -> MunicipalityRecord {
    let ideb =
        |j: usize, year: usize| round_to((2.0 + 5.0 * u[j] + 0.2 * year as f64).min(10.0), 1);
    MunicipalityRecord {
        name,
        mhr: (1.0 + 600.0 * u[0]).round() as u64,
        population: (1000.0 + 500_000.0 * u[1]).round() as u64,
        demog_density: round_to(1.0 + 500.0 * u[2], 2),
        ideb: [ideb(3, 0), ideb(4, 1), ideb(5, 2), ideb(6, 3), ideb(7, 4)],
        life_expect: round_to(68.0 + 10.0 * u[8], 2),
        gini: round_to(0.3 + 0.4 * u[9], 3),
        in_richest10: round_to(25.0 + 30.0 * u[10], 2),
        educ_level: round_to(15.0 + 55.0 * u[11], 2),
        mhdi: round_to(0.55 + 0.3 * u[12], 3),
        mhdi_e: round_to(0.4 + 0.4 * u[13], 3),
        mhdi_l: round_to(0.75 + 0.15 * u[14], 3),
        mhdi_i: round_to(0.55 + 0.25 * u[15], 3),
    }
}
