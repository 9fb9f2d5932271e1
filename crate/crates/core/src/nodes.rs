//! Sampling nodes: solutions of `φ(λ_n) = nπ + α`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hb::HermiteBiehlerFunction;
use crate::par;

/// Accepted phase residual `|φ(λ_n) - (nπ + α)|`.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Iteration cap for the Newton/bisection stage of each node.
pub const MAX_ITERATIONS: usize = 200;
const MAX_DOUBLINGS: usize = 1100;

/// Solved nodes for one index window `index_lo..=index_hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    generator: HermiteBiehlerFunction,
    alpha: f64,
    index_lo: i64,
    nodes: Vec<f64>,
    residuals: Vec<f64>,
}

impl NodeSet {
    pub fn generator(&self) -> &HermiteBiehlerFunction {
        &self.generator
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn index_lo(&self) -> i64 {
        self.index_lo
    }

    pub fn index_hi(&self) -> i64 {
        self.index_lo + self.nodes.len() as i64 - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(n, λ_n)` pairs in index order.
    pub fn indexed(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .map(move |(k, &x)| (self.index_lo + k as i64, x))
    }

    /// Sub-window `lo..=hi`, which must lie inside this window.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo > hi || lo < self.index_lo || hi > self.index_hi() {
            return Err(Error::InvalidArgument(format!(
                "window [{lo}, {hi}] is not inside [{}, {}]",
                self.index_lo,
                self.index_hi()
            )));
        }
        let a = (lo - self.index_lo) as usize;
        let b = (hi - self.index_lo) as usize + 1;
        Ok(Self {
            generator: self.generator.clone(),
            alpha: self.alpha,
            index_lo: lo,
            nodes: self.nodes[a..b].to_vec(),
            residuals: self.residuals[a..b].to_vec(),
        })
    }
}

/// Solves `φ_G(λ_n) = nπ + α` for every `n` in `index_lo..=index_hi`.
pub fn solve_nodes(generator: &HermiteBiehlerFunction, alpha: f64, index_lo: i64, index_hi: i64) -> Result<NodeSet> {
    if !(0.0..PI).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} is not in [0, π)")));
    }
    if index_lo > index_hi {
        return Err(Error::InvalidArgument(format!(
            "empty window: index_lo {index_lo} > index_hi {index_hi}"
        )));
    }
    let count = (index_hi - index_lo + 1) as usize;
    let solved = par::map_indexed(count, |k| {
        let n = index_lo + k as i64;
        solve_one(generator, n as f64 * PI + alpha, n)
    });
    let mut nodes = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    for result in solved {
        let (x, residual) = result?;
        nodes.push(x);
        residuals.push(residual);
    }
    Ok(NodeSet {
        generator: generator.clone(),
        alpha,
        index_lo,
        nodes,
        residuals,
    })
}

/// Solves `φ(x) = target`; returns the root and its phase residual.
pub fn solve_phase(generator: &HermiteBiehlerFunction, target: f64) -> Result<(f64, f64)> {
    solve_one(generator, target, 0)
}

fn solve_one(g: &HermiteBiehlerFunction, target: f64, index: i64) -> Result<(f64, f64)> {
    let (inf, sup) = g.phase_range();
    if !(target > inf && target < sup) {
        return Err(Error::PhaseOutOfRange { target, inf, sup });
    }
    let residual_at = |x: f64| g.phase(x).phi - target;

    // Bracket by doubling away from the origin.
    let (mut lo, mut hi) = if residual_at(0.0) <= 0.0 {
        let mut step = 1.0;
        let mut lo = 0.0;
        let mut doublings = 0;
        while residual_at(step) < 0.0 {
            lo = step;
            step *= 2.0;
            doublings += 1;
            if doublings > MAX_DOUBLINGS {
                return Err(Error::IterationLimit {
                    index,
                    iterations: doublings,
                    lo,
                    hi: step,
                });
            }
        }
        (lo, step)
    } else {
        let mut step = -1.0;
        let mut hi = 0.0;
        let mut doublings = 0;
        while residual_at(step) > 0.0 {
            hi = step;
            step *= 2.0;
            doublings += 1;
            if doublings > MAX_DOUBLINGS {
                return Err(Error::IterationLimit {
                    index,
                    iterations: doublings,
                    lo: step,
                    hi,
                });
            }
        }
        (step, hi)
    };

    let scale = target.abs().max(1.0);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_ITERATIONS {
        let p = g.phase(x);
        let f = p.phi - target;
        if f.abs() <= 4.0 * f64::EPSILON * scale {
            return Ok((x, f.abs()));
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - f / p.phi_prime;
        x = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
    }
    let residual = residual_at(x).abs();
    if residual <= RESIDUAL_TOL {
        Ok((x, residual))
    } else {
        Err(Error::IterationLimit {
            index,
            iterations: MAX_ITERATIONS,
            lo,
            hi,
        })
    }
}
