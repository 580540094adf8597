//! Dirichlet energy forms and graph Laplacians on the gasket pre-fractals,
//! plus the log-log eigenvalue-counting fit used to read off a spectral
//! dimension.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{linear_fit, DimensionFit};
use crate::sg::{build_graph, GraphApprox};

/// Energy renormalization factor per level: the trace of the standard form on
/// `G_{n+1}` to `G_n` scales energies by 3/5, so level-`n` forms carry the
/// compensating weight `(5/3)^n`.
pub const ENERGY_SCALE: f64 = 5.0 / 3.0;

/// Laplacian time-scaling per level (`walk dimension` clock): `5^n`.
pub fn laplacian_scale(level: usize) -> f64 {
    5f64.powi(level as i32)
}

/// Fraction-of-spectrum window the counting fit defaults to.
pub const DEFAULT_WINDOW: (f64, f64) = (0.10, 0.60);

/// Real values attached to the vertices of a fixed-level graph.
#[derive(Debug, Clone)]
pub struct VertexFunction {
    pub level: usize,
    pub values: Vec<f64>,
}

impl VertexFunction {
    pub fn new(graph: &GraphApprox, values: Vec<f64>) -> Result<Self> {
        if values.len() != graph.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.vertex_count(),
                got: values.len(),
            });
        }
        Ok(VertexFunction {
            level: graph.level,
            values,
        })
    }
}

/// Graph energy `Σ_edges (u(x) − u(y))²`, optionally carrying the `(5/3)^n`
/// renormalization that makes the sequence of forms consistent across levels.
pub fn energy(graph: &GraphApprox, u: &VertexFunction, renormalized: bool) -> Result<f64> {
    if u.level != graph.level {
        return Err(Error::LevelMismatch {
            expected: graph.level,
            got: u.level,
        });
    }
    if u.values.len() != graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.vertex_count(),
            got: u.values.len(),
        });
    }
    let raw: f64 = graph
        .edges
        .iter()
        .map(|&[i, j]| {
            let d = u.values[i] - u.values[j];
            d * d
        })
        .sum();
    Ok(if renormalized {
        ENERGY_SCALE.powi(graph.level as i32) * raw
    } else {
        raw
    })
}

/// Extends `u` on `G_n` to the energy-minimizing function on `G_{n+1}`.
///
/// Within each `n`-cell with corner values `(a, b, c)`, the midpoint opposite
/// the `a`-corner receives `(a + 2b + 2c)/5`, and cyclically.
pub fn harmonic_extension(
    graph: &GraphApprox,
    u: &VertexFunction,
) -> Result<(GraphApprox, VertexFunction)> {
    if u.level != graph.level {
        return Err(Error::LevelMismatch {
            expected: graph.level,
            got: u.level,
        });
    }
    let fine = build_graph(graph.level + 1)?;
    let mut values = vec![f64::NAN; fine.vertex_count()];
    // old vertices keep their values
    for (i, &p) in graph.vertices.iter().enumerate() {
        let j = fine
            .find_vertex(p)
            .ok_or_else(|| Error::InvalidParameter("vertex lost in refinement".into()))?;
        values[j] = u.values[i];
    }
    for &[ia, ib, ic] in &graph.cells {
        let (a, b, c) = (u.values[ia], u.values[ib], u.values[ic]);
        let (pa, pb, pc) = (
            graph.vertices[ia],
            graph.vertices[ib],
            graph.vertices[ic],
        );
        let mids = [
            (mid(pb, pc), (a + 2.0 * b + 2.0 * c) / 5.0),
            (mid(pa, pc), (b + 2.0 * a + 2.0 * c) / 5.0),
            (mid(pa, pb), (c + 2.0 * a + 2.0 * b) / 5.0),
        ];
        for (p, v) in mids {
            let j = fine
                .find_vertex(p)
                .ok_or_else(|| Error::InvalidParameter("midpoint missing in fine graph".into()))?;
            values[j] = v;
        }
    }
    debug_assert!(values.iter().all(|v| v.is_finite()));
    let uf = VertexFunction {
        level: fine.level,
        values,
    };
    Ok((fine, uf))
}

fn mid(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
}

/// Dense Dirichlet Laplacian `scale · (D − A)` restricted to non-boundary
/// vertices. Returns the matrix together with the interior-vertex indices its
/// rows refer to.
pub fn dirichlet_laplacian(
    n_vertices: usize,
    edges: &[[usize; 2]],
    boundary: &[usize],
    scale: f64,
) -> (DMatrix<f64>, Vec<usize>) {
    let is_boundary: Vec<bool> = {
        let mut b = vec![false; n_vertices];
        for &i in boundary {
            b[i] = true;
        }
        b
    };
    let interior: Vec<usize> = (0..n_vertices).filter(|&i| !is_boundary[i]).collect();
    let pos: HashMap<usize, usize> = interior.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let m = interior.len();
    let mut mat = DMatrix::<f64>::zeros(m, m);
    for &[i, j] in edges {
        // degree counts all neighbors, absorbing or not
        if let Some(&ki) = pos.get(&i) {
            mat[(ki, ki)] += scale;
        }
        if let Some(&kj) = pos.get(&j) {
            mat[(kj, kj)] += scale;
        }
        if let (Some(&ki), Some(&kj)) = (pos.get(&i), pos.get(&j)) {
            mat[(ki, kj)] -= scale;
            mat[(kj, ki)] -= scale;
        }
    }
    (mat, interior)
}

/// A computed Dirichlet spectrum with its level and time normalization.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    pub level: usize,
    pub normalization: f64,
    /// Sorted ascending; tiny negative eigensolver noise is clamped to 0.
    pub eigenvalues: Vec<f64>,
}

impl SpectrumResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,eigenvalue\n");
        for (k, ev) in self.eigenvalues.iter().enumerate() {
            s.push_str(&format!("{},{ev}\n", k + 1));
        }
        s
    }
}

fn spectrum_of(mat: DMatrix<f64>, level: usize, normalization: f64) -> Result<SpectrumResult> {
    let mut eigenvalues: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if let Some(&min) = eigenvalues.first() {
        if min < -1e-9 * normalization.max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "Dirichlet Laplacian produced eigenvalue {min} < 0"
            )));
        }
    }
    for ev in &mut eigenvalues {
        *ev = ev.max(0.0);
    }
    Ok(SpectrumResult {
        level,
        normalization,
        eigenvalues,
    })
}

/// Dirichlet spectrum of `−Δ_n = 5^n (D − A)` on the level-`n` gasket graph
/// with the three corners absorbing.
pub fn sg_dirichlet_spectrum(level: usize) -> Result<SpectrumResult> {
    let g = build_graph(level)?;
    let scale = laplacian_scale(level);
    let (mat, _) = dirichlet_laplacian(g.vertex_count(), &g.edges, &g.boundary, scale);
    spectrum_of(mat, level, scale)
}

/// Path graph on `m + 1` subintervals of `[0,1]`: `m` interior vertices, the
/// two endpoints absorbing, Laplacian scale `(m+1)²` so that the spectrum
/// approximates `−d²/dx²` with Dirichlet conditions.
pub fn interval_dirichlet_spectrum(m: usize) -> Result<SpectrumResult> {
    if m < 2 {
        return Err(Error::InvalidParameter("need ≥ 2 interior vertices".into()));
    }
    let n_vertices = m + 2;
    let edges: Vec<[usize; 2]> = (0..m + 1).map(|i| [i, i + 1]).collect();
    let scale = ((m + 1) * (m + 1)) as f64;
    let (mat, _) = dirichlet_laplacian(n_vertices, &edges, &[0, m + 1], scale);
    spectrum_of(mat, 0, scale)
}

/// Five-point-stencil Dirichlet spectrum of the unit disk on a square grid
/// with spacing `h`. Grid nodes outside the disk act as absorbing boundary.
pub fn disk_dirichlet_spectrum(h: f64) -> Result<SpectrumResult> {
    if !(0.005..0.5).contains(&h) {
        return Err(Error::InvalidParameter(format!(
            "grid spacing must lie in [0.005, 0.5), got {h}"
        )));
    }
    let half = (1.0 / h).ceil() as i64 + 1;
    let inside = |i: i64, j: i64| {
        let (x, y) = (i as f64 * h, j as f64 * h);
        x * x + y * y < 1.0
    };
    // interior nodes first, then ghost neighbors as absorbing boundary
    let mut id: HashMap<(i64, i64), usize> = HashMap::new();
    for i in -half..=half {
        for j in -half..=half {
            if inside(i, j) {
                let n = id.len();
                id.insert((i, j), n);
            }
        }
    }
    let n_interior = id.len();
    let mut edges = Vec::new();
    for i in -half..=half {
        for j in -half..=half {
            if !inside(i, j) {
                continue;
            }
            let a = id[&(i, j)];
            // forward neighbors cover interior–interior edges exactly once;
            // ghost edges are added whichever side sees them
            for (di, dj) in [(1i64, 0i64), (0, 1), (-1, 0), (0, -1)] {
                let key = (i + di, j + dj);
                if inside(key.0, key.1) {
                    if di + dj > 0 {
                        edges.push([a, id[&key]]);
                    }
                } else {
                    let n = id.len();
                    let b = *id.entry(key).or_insert(n);
                    edges.push([a, b]);
                }
            }
        }
    }
    let n_vertices = id.len();
    let ghosts: Vec<usize> = (n_interior..n_vertices).collect();
    let scale = 1.0 / (h * h);
    let (mat, _) = dirichlet_laplacian(n_vertices, &edges, &ghosts, scale);
    spectrum_of(mat, 0, scale)
}

/// Eigenvalue counting function `N(x) = #{k : λ_k ≤ x}` (multiplicity counted).
pub fn eigenvalue_counting(spectrum: &SpectrumResult, x: f64) -> usize {
    spectrum.eigenvalues.partition_point(|&ev| ev <= x)
}

/// Reads `d_S/2` as the slope of `log N(λ)` vs `log λ`.
///
/// The fit runs over the corner points of the counting staircase — one point
/// per *distinct* eigenvalue (relative tolerance 1e-9), at the top of its
/// jump — restricted to corners whose count lies in the stated fraction
/// window of the full spectrum. High multiplicities on the gasket make the
/// corner set much smaller than the eigenvalue list; fitting corners rather
/// than raw indices keeps those multiplicities from dominating the fit.
pub fn spectral_dimension_fit(
    spectrum: &SpectrumResult,
    window: (f64, f64),
) -> Result<DimensionFit> {
    let evs = &spectrum.eigenvalues;
    if evs.len() < 20 {
        return Err(Error::NotEnoughData(format!(
            "spectral fit needs ≥ 20 eigenvalues, got {}",
            evs.len()
        )));
    }
    if !(0.0 < window.0 && window.0 < window.1 && window.1 <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "bad spectral window {window:?}"
        )));
    }
    // staircase corners: (λ, N(λ)) for distinct λ
    let mut corners: Vec<(f64, usize)> = Vec::new();
    for (k, &ev) in evs.iter().enumerate() {
        if ev <= 0.0 {
            continue;
        }
        match corners.last_mut() {
            Some((last, n)) if (ev - *last).abs() <= 1e-9 * ev.abs() => *n = k + 1,
            _ => corners.push((ev, k + 1)),
        }
    }
    let total = evs.len() as f64;
    let (lo, hi) = (window.0 * total, window.1 * total);
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for &(ev, n) in &corners {
        let nf = n as f64;
        if nf >= lo && nf <= hi {
            lx.push(ev.ln());
            ly.push(nf.ln());
        }
    }
    if lx.len() < 3 {
        return Err(Error::NotEnoughData(format!(
            "only {} staircase corners inside window {window:?}",
            lx.len()
        )));
    }
    Ok(DimensionFit::from_line(linear_fit(&lx, &ly)?, window))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn boundary_function(g: &GraphApprox, vals: [f64; 3]) -> VertexFunction {
        let mut values = vec![0.0; g.vertex_count()];
        for (k, &i) in g.boundary.iter().enumerate() {
            values[i] = vals[k];
        }
        VertexFunction::new(g, values).unwrap()
    }

    #[test]
    fn level0_energy_of_indicator() {
        let g = build_graph(0).unwrap();
        let u = boundary_function(&g, [1.0, 0.0, 0.0]);
        assert_relative_eq!(energy(&g, &u, false).unwrap(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn one_fifth_two_fifths_extension() {
        let g0 = build_graph(0).unwrap();
        let u0 = boundary_function(&g0, [1.0, 0.0, 0.0]);
        let (g1, u1) = harmonic_extension(&g0, &u0).unwrap();
        // midpoint opposite the 1-corner gets 1/5, the other two get 2/5
        let m_bc = g1.find_vertex([0.75, 3f64.sqrt() / 4.0]).unwrap();
        let m_ab = g1.find_vertex([0.5, 0.0]).unwrap();
        let m_ac = g1.find_vertex([0.25, 3f64.sqrt() / 4.0]).unwrap();
        assert_relative_eq!(u1.values[m_bc], 0.2, epsilon = 1e-15);
        assert_relative_eq!(u1.values[m_ab], 0.4, epsilon = 1e-15);
        assert_relative_eq!(u1.values[m_ac], 0.4, epsilon = 1e-15);
        assert_relative_eq!(energy(&g1, &u1, false).unwrap(), 1.2, epsilon = 1e-12);
    }

    #[test]
    fn energy_decays_by_three_fifths_per_level() {
        let mut g = build_graph(0).unwrap();
        let mut u = boundary_function(&g, [1.0, -0.5, 0.25]);
        let e0 = energy(&g, &u, false).unwrap();
        let renorm0 = energy(&g, &u, true).unwrap();
        for n in 1..=6 {
            let (gf, uf) = harmonic_extension(&g, &u).unwrap();
            g = gf;
            u = uf;
            let e = energy(&g, &u, false).unwrap();
            assert_relative_eq!(e, e0 * 0.6f64.powi(n), epsilon = 1e-12, max_relative = 1e-12);
            // renormalized energy is constant along the harmonic sequence
            let er = energy(&g, &u, true).unwrap();
            assert_relative_eq!(er, renorm0, epsilon = 1e-10, max_relative = 1e-10);
        }
    }

    #[test]
    fn extension_minimizes_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g0 = build_graph(2).unwrap();
        for _ in 0..200 {
            let values: Vec<f64> = (0..g0.vertex_count()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let u0 = VertexFunction::new(&g0, values).unwrap();
            let (g1, u1) = harmonic_extension(&g0, &u0).unwrap();
            let e_min = energy(&g1, &u1, false).unwrap();
            // perturb only the new (fine) vertices; old ones are constrained
            let coarse: std::collections::HashSet<usize> = g0
                .vertices
                .iter()
                .map(|&p| g1.find_vertex(p).unwrap())
                .collect();
            let mut v = u1.values.clone();
            for (i, val) in v.iter_mut().enumerate() {
                if !coarse.contains(&i) {
                    *val += rng.gen_range(-0.1..0.1);
                }
            }
            let up = VertexFunction::new(&g1, v).unwrap();
            assert!(energy(&g1, &up, false).unwrap() >= e_min - 1e-12);
        }
    }

    #[test]
    fn level1_dirichlet_matrix_values() {
        let g = build_graph(1).unwrap();
        let (mat, interior) = dirichlet_laplacian(g.vertex_count(), &g.edges, &g.boundary, 5.0);
        assert_eq!(interior.len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 20.0 } else { -5.0 };
                assert_relative_eq!(mat[(i, j)], expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn path_spectrum_closed_form() {
        let m = 40;
        let spec = interval_dirichlet_spectrum(m).unwrap();
        let h = 1.0 / (m as f64 + 1.0);
        for (k, &ev) in spec.eigenvalues.iter().enumerate() {
            let theta = (k as f64 + 1.0) * std::f64::consts::PI * h / 2.0;
            let expect = 4.0 / (h * h) * theta.sin().powi(2);
            assert_relative_eq!(ev, expect, epsilon = 1e-7, max_relative = 1e-9);
        }
    }

    #[test]
    fn quadratic_form_identity() {
        // u^T (D − A) u equals the graph energy of u on interior-supported u
        let g = build_graph(3).unwrap();
        let (mat, interior) = dirichlet_laplacian(g.vertex_count(), &g.edges, &g.boundary, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut full = vec![0.0; g.vertex_count()];
        let mut ui = nalgebra::DVector::<f64>::zeros(interior.len());
        for (k, &i) in interior.iter().enumerate() {
            let v = rng.gen_range(-1.0..1.0);
            full[i] = v;
            ui[k] = v;
        }
        let u = VertexFunction::new(&g, full).unwrap();
        let quad = (ui.transpose() * &mat * &ui)[(0, 0)];
        assert_relative_eq!(quad, energy(&g, &u, false).unwrap(), epsilon = 1e-10);
    }

    #[test]
    fn synthetic_square_spectrum_fits_half() {
        // λ_k = k² has counting function N(λ) = λ^{1/2}
        let spec = SpectrumResult {
            level: 0,
            normalization: 1.0,
            eigenvalues: (1..=400).map(|k| (k * k) as f64).collect(),
        };
        let fit = spectral_dimension_fit(&spec, (0.1, 0.9)).unwrap();
        assert_relative_eq!(fit.slope, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn fit_invariant_under_time_rescaling() {
        let base: Vec<f64> = (1..=400).map(|k| (k * k) as f64).collect();
        let s1 = SpectrumResult {
            level: 0,
            normalization: 1.0,
            eigenvalues: base.clone(),
        };
        let s2 = SpectrumResult {
            level: 0,
            normalization: 125.0,
            eigenvalues: base.iter().map(|ev| 125.0 * ev).collect(),
        };
        let f1 = spectral_dimension_fit(&s1, (0.1, 0.9)).unwrap();
        let f2 = spectral_dimension_fit(&s2, (0.1, 0.9)).unwrap();
        assert_relative_eq!(f1.slope, f2.slope, epsilon = 1e-9);
    }

    #[test]
    fn rejects_short_spectra_and_bad_windows() {
        let spec = SpectrumResult {
            level: 0,
            normalization: 1.0,
            eigenvalues: vec![1.0; 10],
        };
        assert!(spectral_dimension_fit(&spec, (0.1, 0.6)).is_err());
        let spec = SpectrumResult {
            level: 0,
            normalization: 1.0,
            eigenvalues: (1..=40).map(|k| k as f64).collect(),
        };
        assert!(spectral_dimension_fit(&spec, (0.6, 0.1)).is_err());
        assert!(spectral_dimension_fit(&spec, (0.0, 0.5)).is_err());
    }

    #[test]
    fn disk_ground_state_near_bessel_zero() {
        // first Dirichlet eigenvalue of the unit disk is j_{0,1}² ≈ 5.7832;
        // the staircase boundary is only first-order accurate (the effective
        // radius sits about half a cell outside), so expect O(h) error that
        // shrinks with the grid
        let target = 5.7832;
        let coarse = disk_dirichlet_spectrum(0.1).unwrap().eigenvalues[0];
        let fine = disk_dirichlet_spectrum(0.05).unwrap().eigenvalues[0];
        assert!((coarse - target).abs() < 0.06 * target, "h=0.1: {coarse}");
        assert!((fine - target).abs() < 0.03 * target, "h=0.05: {fine}");
        assert!((fine - target).abs() < (coarse - target).abs());
    }

    #[test]
    fn counting_function_is_inclusive() {
        let spec = SpectrumResult {
            level: 0,
            normalization: 1.0,
            eigenvalues: vec![1.0, 2.0, 2.0, 3.0],
        };
        assert_eq!(eigenvalue_counting(&spec, 2.0), 3);
        assert_eq!(eigenvalue_counting(&spec, 1.999), 1);
        assert_eq!(eigenvalue_counting(&spec, 10.0), 4);
    }
}
