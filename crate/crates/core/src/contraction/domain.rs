//! Sampled maps and fields on a chart grid over the fundamental domain.
//!
//! A deformation certificate needs uniform contraction, but the raw
//! collapse map is isometric off its strips and the raw jump field is
//! Killing off its walls. Averaging sweeps diffuse the contraction
//! concentrated there across the whole surface: values live on a uniform
//! grid in the (x, ln y) chart, every read folds the query into the
//! fundamental domain first, and equivariance is therefore exact by
//! construction rather than a property to be maintained. The measured
//! bounds are honest over the sampled region only, which equivariance
//! extends to the full orbit of that region.

use crate::error::{Error, Result};
use crate::lie::{hyp_dist, hyp_exp, HPoint, TangentVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Axis-aligned rectangle in the (x, u) = (x, ln y) chart.
#[derive(Debug, Clone, Copy)]
pub struct ChartRect {
    pub x: (f64, f64),
    pub u: (f64, f64),
}

impl ChartRect {
    pub fn contains(&self, p: HPoint) -> bool {
        let u = p.y.ln();
        p.x >= self.x.0 && p.x <= self.x.1 && u >= self.u.0 && u <= self.u.1
    }

    /// Rectangle shrunk by `margin` chart units on every side.
    pub fn inset(&self, margin: f64) -> ChartRect {
        ChartRect {
            x: (self.x.0 + margin, self.x.1 - margin),
            u: (self.u.0 + margin, self.u.1 - margin),
        }
    }
}

/// Uniform grid over a chart rectangle.
#[derive(Debug, Clone)]
pub struct ChartGrid {
    rect: ChartRect,
    nx: usize,
    nu: usize,
    hx: f64,
    hu: f64,
}

impl ChartGrid {
    /// Grid with spacing at most `spacing` in both chart directions.
    pub fn new(rect: ChartRect, spacing: f64) -> Result<ChartGrid> {
        if !(spacing > 0.0) || rect.x.1 <= rect.x.0 || rect.u.1 <= rect.u.0 {
            return Err(Error::InvalidInput(
                "chart grid needs a positive spacing and a nonempty rectangle".into(),
            ));
        }
        let nx = ((rect.x.1 - rect.x.0) / spacing).ceil() as usize + 1;
        let nu = ((rect.u.1 - rect.u.0) / spacing).ceil() as usize + 1;
        Ok(ChartGrid {
            rect,
            nx,
            nu,
            hx: (rect.x.1 - rect.x.0) / (nx - 1) as f64,
            hu: (rect.u.1 - rect.u.0) / (nu - 1) as f64,
        })
    }

    pub fn rect(&self) -> ChartRect {
        self.rect
    }

    pub fn len(&self) -> usize {
        self.nx * self.nu
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> f64 {
        self.hx.max(self.hu)
    }

    /// Node counts along the two chart axes.
    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.nu)
    }

    pub fn step_x(&self) -> f64 {
        self.hx
    }

    pub fn step_u(&self) -> f64 {
        self.hu
    }

    /// Half-plane point of the node with flat index `n`.
    pub fn node(&self, n: usize) -> HPoint {
        let (i, k) = (n % self.nx, n / self.nx);
        let x = self.rect.x.0 + i as f64 * self.hx;
        let u = self.rect.u.0 + k as f64 * self.hu;
        HPoint::new(x, u.exp()).expect("grid ordinates are positive")
    }

    /// Cell of a chart point with bilinear weights, or None outside.
    fn locate(&self, p: HPoint) -> Option<(usize, usize, f64, f64)> {
        let u = p.y.ln();
        let fx = (p.x - self.rect.x.0) / self.hx;
        let fu = (u - self.rect.u.0) / self.hu;
        if fx < 0.0 || fu < 0.0 {
            return None;
        }
        let (i, k) = (fx.floor() as usize, fu.floor() as usize);
        if i + 1 >= self.nx || k + 1 >= self.nu {
            // Top-edge queries use the last cell; beyond the edge is out.
            let (i, k) = (i.min(self.nx - 2), k.min(self.nu - 2));
            let (tx, tu) = (fx - i as f64, fu - k as f64);
            if tx > 1.0 + 1e-9 || tu > 1.0 + 1e-9 {
                return None;
            }
            return Some((i, k, tx.min(1.0), tu.min(1.0)));
        }
        Some((i, k, fx - i as f64, fu - k as f64))
    }

    fn corner_indices(&self, i: usize, k: usize) -> [usize; 4] {
        let base = k * self.nx + i;
        [base, base + 1, base + self.nx, base + self.nx + 1]
    }
}

/// Map samples on a grid, interpolated bilinearly in the chart of the
/// target values.
#[derive(Debug, Clone)]
pub struct SampledMap {
    grid: ChartGrid,
    values: Vec<HPoint>,
}

impl SampledMap {
    pub fn new(grid: ChartGrid, values: Vec<HPoint>) -> Result<SampledMap> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "{} samples for a {}-node grid",
                values.len(),
                grid.len()
            )));
        }
        Ok(SampledMap { grid, values })
    }

    pub fn grid(&self) -> &ChartGrid {
        &self.grid
    }

    pub fn values(&self) -> &[HPoint] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Vec<HPoint> {
        &mut self.values
    }

    /// Interpolated value, or None outside the grid.
    pub fn interp(&self, p: HPoint) -> Option<HPoint> {
        let (i, k, tx, tu) = self.grid.locate(p)?;
        let c = self.grid.corner_indices(i, k);
        let vals = c.map(|n| self.values[n]);
        let blend = |a: f64, b: f64, cc: f64, d: f64| {
            (a * (1.0 - tx) + b * tx) * (1.0 - tu) + (cc * (1.0 - tx) + d * tx) * tu
        };
        let x = blend(vals[0].x, vals[1].x, vals[2].x, vals[3].x);
        let u = blend(
            vals[0].y.ln(),
            vals[1].y.ln(),
            vals[2].y.ln(),
            vals[3].y.ln(),
        );
        Some(HPoint::new(x, u.exp()).expect("interpolated ordinate is positive"))
    }
}

/// Field samples on a grid: tangent components at the node bases,
/// interpolated componentwise and rebased.
#[derive(Debug, Clone)]
pub struct SampledField {
    grid: ChartGrid,
    values: Vec<TangentVector>,
}

impl SampledField {
    pub fn new(grid: ChartGrid, values: Vec<TangentVector>) -> Result<SampledField> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "{} samples for a {}-node grid",
                values.len(),
                grid.len()
            )));
        }
        Ok(SampledField { grid, values })
    }

    pub fn grid(&self) -> &ChartGrid {
        &self.grid
    }

    pub fn values(&self) -> &[TangentVector] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Vec<TangentVector> {
        &mut self.values
    }

    /// Interpolated field value at p, or None outside the grid.
    pub fn interp(&self, p: HPoint) -> Option<TangentVector> {
        let (i, k, tx, tu) = self.grid.locate(p)?;
        let c = self.grid.corner_indices(i, k);
        let blend = |f: fn(&TangentVector) -> f64| {
            let v = c.map(|n| f(&self.values[n]));
            (v[0] * (1.0 - tx) + v[1] * tx) * (1.0 - tu) + (v[2] * (1.0 - tx) + v[3] * tx) * tu
        };
        Some(TangentVector::new(p, blend(|v| v.vx), blend(|v| v.vy)))
    }
}

/// Deterministic sampler of nearby point pairs in a chart rectangle,
/// used to measure stretch and contraction bounds.
#[derive(Debug, Clone)]
pub struct PairSampler {
    pub rect: ChartRect,
    /// Pairs drawn per separation.
    pub count: usize,
    /// Hyperbolic separations of the drawn pairs.
    pub separations: Vec<f64>,
    pub seed: u64,
}

impl PairSampler {
    pub fn new(rect: ChartRect, count: usize, separations: &[f64], seed: u64) -> PairSampler {
        PairSampler {
            rect,
            count,
            separations: separations.to_vec(),
            seed,
        }
    }

    /// The sampled pairs, in a deterministic order. Both endpoints lie in
    /// the rectangle; draws whose far endpoint escapes it are rejected
    /// and redrawn, so the declared region really is what gets measured.
    pub fn pairs(&self) -> Vec<(HPoint, HPoint)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.count * self.separations.len());
        for &sep in &self.separations {
            let mut kept = 0;
            let mut budget = 64 * self.count;
            while kept < self.count && budget > 0 {
                budget -= 1;
                let x = rng.random_range(self.rect.x.0..self.rect.x.1);
                let u = rng.random_range(self.rect.u.0..self.rect.u.1);
                let th = rng.random_range(0.0..std::f64::consts::TAU);
                let p = HPoint::new(x, u.exp()).expect("chart ordinate is positive");
                let v = TangentVector::new(p, th.cos(), th.sin());
                let q = hyp_exp(&v.scale(sep / v.norm()));
                if !self.rect.contains(q) {
                    continue;
                }
                out.push((p, q));
                kept += 1;
            }
        }
        out
    }

    /// Points (first members) of the sampled pairs.
    pub fn points(&self) -> Vec<HPoint> {
        self.pairs().into_iter().map(|(p, _)| p).collect()
    }
}

/// Largest stretch ratio of a point map over the sampled pairs.
pub fn max_stretch<F>(sampler: &PairSampler, mut f: F) -> Result<f64>
where
    F: FnMut(HPoint) -> Result<HPoint>,
{
    let mut worst = f64::NEG_INFINITY;
    for (p, q) in sampler.pairs() {
        let num = hyp_dist(f(p)?, f(q)?);
        let den = hyp_dist(p, q);
        if den > 0.0 {
            worst = worst.max(num / den);
        }
    }
    if worst.is_finite() {
        Ok(worst)
    } else {
        Err(Error::InvalidInput("empty pair sample".into()))
    }
}
