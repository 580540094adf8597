//! Simple random walk on the gasket graphs: exact crossing times between
//! consecutive coarse-vertex visits, Monte Carlo cross-checks, and the
//! renormalized exit-time curve behind the walk dimension.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sg::build_graph;
use crate::stats::mean_stderr;
use crate::stoch::RngSpec;

/// Exact vs simulated expected steps for one `(n, m)` crossing problem.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CrossingStats {
    pub fine_level: usize,
    pub coarse_level: usize,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub exact_mean: f64,
    pub n_runs: usize,
}

/// Mean hitting time of the absorbing set for SRW on an undirected graph,
/// solved exactly: `(D − A) h = deg` on the free vertices, by conjugate
/// gradients (the free-vertex block is positive definite whenever every
/// component touches the absorbing set).
pub fn hitting_times(adj: &[Vec<usize>], absorbing: &[bool]) -> Result<Vec<f64>> {
    let n = adj.len();
    if absorbing.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: absorbing.len(),
        });
    }
    if !absorbing.iter().any(|&a| a) {
        return Err(Error::InvalidParameter("no absorbing vertices".into()));
    }
    let free: Vec<usize> = (0..n).filter(|&i| !absorbing[i]).collect();
    let pos = {
        let mut p = vec![usize::MAX; n];
        for (k, &i) in free.iter().enumerate() {
            p[i] = k;
        }
        p
    };
    let m = free.len();
    let matvec = |x: &[f64], out: &mut [f64]| {
        for (k, &i) in free.iter().enumerate() {
            let mut acc = adj[i].len() as f64 * x[k];
            for &j in &adj[i] {
                if pos[j] != usize::MAX {
                    acc -= x[pos[j]];
                }
            }
            out[k] = acc;
        }
    };
    let b: Vec<f64> = free.iter().map(|&i| adj[i].len() as f64).collect();

    // plain CG
    let mut x = vec![0.0; m];
    let mut r = b.clone();
    let mut p = r.clone();
    let mut ap = vec![0.0; m];
    let mut rs: f64 = r.iter().map(|v| v * v).sum();
    let b_norm = rs.sqrt().max(1e-300);
    for _ in 0..10 * m + 100 {
        if rs.sqrt() <= 1e-12 * b_norm {
            break;
        }
        matvec(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(pi, ai)| pi * ai).sum();
        let alpha = rs / pap;
        for k in 0..m {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        let rs_new: f64 = r.iter().map(|v| v * v).sum();
        let beta = rs_new / rs;
        rs = rs_new;
        for k in 0..m {
            p[k] = r[k] + beta * p[k];
        }
    }
    if rs.sqrt() > 1e-10 * b_norm {
        return Err(Error::InvalidParameter(
            "conjugate gradients failed to converge".into(),
        ));
    }
    let mut h = vec![0.0; n];
    for (k, &i) in free.iter().enumerate() {
        h[i] = x[k];
    }
    Ok(h)
}

/// Expected steps of SRW on `G_n` from the corner `V_0` vertex until it first
/// visits a *different* `V_m` vertex, solved exactly.
pub fn exact_crossing_mean(n: usize, m: usize) -> Result<f64> {
    if m >= n {
        return Err(Error::InvalidParameter(format!(
            "need coarse level m < fine level n, got m = {m}, n = {n}"
        )));
    }
    let g = build_graph(n)?;
    let coarse = g.coarse_vertex_indices(m)?;
    let start = g.boundary[0];
    let mut absorbing = vec![false; g.vertex_count()];
    for &i in &coarse {
        if i != start {
            absorbing[i] = true;
        }
    }
    let h = hitting_times(&g.adjacency(), &absorbing)?;
    Ok(h[start])
}

/// Exact crossing mean plus a Monte Carlo estimate from `n_runs` walks.
pub fn srw_crossing_stats(
    n: usize,
    m: usize,
    spec: RngSpec,
    n_runs: usize,
) -> Result<CrossingStats> {
    if n_runs < 100 {
        return Err(Error::NotEnoughData(format!("need ≥ 100 runs, got {n_runs}")));
    }
    let exact_mean = exact_crossing_mean(n, m)?;
    let g = build_graph(n)?;
    let adj = g.adjacency();
    let coarse = g.coarse_vertex_indices(m)?;
    let start = g.boundary[0];
    let mut absorbing = vec![false; g.vertex_count()];
    for &i in &coarse {
        if i != start {
            absorbing[i] = true;
        }
    }
    let cap = (1000.0 * exact_mean).ceil() as usize;
    let steps: Vec<f64> = (0..n_runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = spec.task_rng(run as u64);
            let mut v = start;
            for step in 1..=cap {
                v = adj[v][rng.gen_range(0..adj[v].len())];
                if absorbing[v] {
                    return step as f64;
                }
            }
            f64::NAN // effectively impossible at 1000× the mean
        })
        .collect();
    if steps.iter().any(|s| s.is_nan()) {
        return Err(Error::Censored("a walk exceeded the step cap".into()));
    }
    let (mc_mean, mc_stderr) = mean_stderr(&steps)?;
    Ok(CrossingStats {
        fine_level: n,
        coarse_level: m,
        mc_mean,
        mc_stderr,
        exact_mean,
        n_runs,
    })
}

/// Counts which coarse (`V_m`) neighbor the walk on `G_n` reaches first,
/// starting from an interior `V_m` vertex. Under decimation the trace of the
/// fine walk on `V_m` is again SRW, so the four coarse neighbors should be
/// hit uniformly.
pub fn srw_coarse_transitions(
    n: usize,
    m: usize,
    spec: RngSpec,
    n_runs: usize,
) -> Result<Vec<u64>> {
    if m == 0 || m >= n {
        return Err(Error::InvalidParameter(
            "need 1 ≤ m < n for an interior coarse vertex".into(),
        ));
    }
    let g = build_graph(n)?;
    let adj = g.adjacency();
    let coarse = g.coarse_vertex_indices(m)?;
    let start = *coarse
        .iter()
        .find(|&&i| !g.boundary.contains(&i))
        .ok_or_else(|| Error::NotEnoughData("no interior coarse vertex".into()))?;

    // the coarse neighbors of `start` in G_m, located inside G_n
    let gm = build_graph(m)?;
    let start_in_gm = gm
        .find_vertex(g.vertices[start])
        .ok_or_else(|| Error::InvalidParameter("coarse vertex not in G_m".into()))?;
    let mut targets: Vec<usize> = gm.adjacency()[start_in_gm]
        .iter()
        .map(|&j| g.find_vertex(gm.vertices[j]).unwrap())
        .collect();
    targets.sort_unstable();
    debug_assert_eq!(targets.len(), 4);

    let mut absorbing = vec![false; g.vertex_count()];
    for &i in &coarse {
        if i != start {
            absorbing[i] = true;
        }
    }
    let hits: Vec<usize> = (0..n_runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = spec.task_rng(run as u64);
            let mut v = start;
            loop {
                v = adj[v][rng.gen_range(0..adj[v].len())];
                if absorbing[v] {
                    // the first V_m vertex reached is always a coarse neighbor
                    return targets.binary_search(&v).expect("hit a coarse neighbor");
                }
            }
        })
        .collect();
    let mut counts = vec![0u64; targets.len()];
    for h in hits {
        counts[h] += 1;
    }
    Ok(counts)
}

/// The renormalized gasket exit-time curve: for each coarse level `m`, the
/// graph distance scale `2^{-m}` against the exact expected crossing time on
/// `G_n` measured in the `5^{-n}`-per-step clock.
pub fn sg_walk_curve(n: usize, m_range: std::ops::RangeInclusive<usize>) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut radii = Vec::new();
    let mut times = Vec::new();
    for m in m_range {
        let steps = exact_crossing_mean(n, m)?;
        radii.push(0.5f64.powi(m as i32));
        times.push(steps * 5f64.powi(-(n as i32)));
    }
    if radii.len() < 2 {
        return Err(Error::NotEnoughData("need ≥ 2 coarse levels".into()));
    }
    Ok((radii, times))
}
