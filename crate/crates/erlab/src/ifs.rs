//! Iterated function systems of planar similitudes: similarity dimension via
//! the Moran equation, attractor sampling by the chaos game, and box-counting
//! estimates of the resulting point clouds.

use std::collections::HashSet;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{log_log_fit, LineFit};

/// A contracting similarity `x ↦ ratio · R x + b` of the plane.
#[derive(Debug, Clone)]
pub struct Similitude {
    pub ratio: f64,
    /// Orthogonal part times the ratio, row-major.
    pub linear: [[f64; 2]; 2],
    pub translation: [f64; 2],
}

impl Similitude {
    /// Pure scaling toward a translation offset (no rotation/reflection).
    pub fn scaling(ratio: f64, translation: [f64; 2]) -> Result<Self> {
        if !(0.0..1.0).contains(&ratio) || ratio <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "contraction ratio must lie in (0,1), got {ratio}"
            )));
        }
        Ok(Similitude {
            ratio,
            linear: [[ratio, 0.0], [0.0, ratio]],
            translation,
        })
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        [
            self.linear[0][0] * p[0] + self.linear[0][1] * p[1] + self.translation[0],
            self.linear[1][0] * p[0] + self.linear[1][1] * p[1] + self.translation[1],
        ]
    }

    /// The unique fixed point, `(I − A)^{-1} b`.
    pub fn fixed_point(&self) -> [f64; 2] {
        let a = self.linear;
        let m = [[1.0 - a[0][0], -a[0][1]], [-a[1][0], 1.0 - a[1][1]]];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let b = self.translation;
        [
            (m[1][1] * b[0] - m[0][1] * b[1]) / det,
            (-m[1][0] * b[0] + m[0][0] * b[1]) / det,
        ]
    }
}

/// A finite family of contracting similitudes.
#[derive(Debug, Clone)]
pub struct IFSystem {
    maps: Vec<Similitude>,
}

impl IFSystem {
    pub fn new(maps: Vec<Similitude>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidParameter("IFS needs at least one map".into()));
        }
        Ok(IFSystem { maps })
    }

    /// The three-map gasket system with unit-side corner triangle.
    pub fn sierpinski() -> Self {
        let maps = crate::sg::corners()
            .iter()
            .map(|&c| Similitude::scaling(0.5, [c[0] / 2.0, c[1] / 2.0]).unwrap())
            .collect();
        IFSystem { maps }
    }

    pub fn maps(&self) -> &[Similitude] {
        &self.maps
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(|m| m.ratio).collect()
    }

    /// Samples the attractor by the chaos game: random maps applied to the
    /// fixed point of the first map, with a 100-step burn-in discarded.
    pub fn chaos_game(&self, n_points: usize, rng: &mut impl Rng) -> Vec<[f64; 2]> {
        const BURN_IN: usize = 100;
        let mut p = self.maps[0].fixed_point();
        let mut out = Vec::with_capacity(n_points);
        for step in 0..n_points + BURN_IN {
            let k = rng.gen_range(0..self.maps.len());
            p = self.maps[k].apply(p);
            if step >= BURN_IN {
                out.push(p);
            }
        }
        out
    }
}

/// Solves the Moran equation `Σ r_i^s = 1` for the similarity dimension `s`
/// by bisection, to absolute residual 1e-12.
pub fn moran_dimension(ratios: &[f64]) -> Result<f64> {
    if ratios.is_empty() {
        return Err(Error::InvalidParameter("need at least one ratio".into()));
    }
    if ratios.iter().any(|&r| r <= 0.0 || r >= 1.0) {
        return Err(Error::InvalidParameter(
            "contraction ratios must lie in (0,1)".into(),
        ));
    }
    let f = |s: f64| ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0;
    // f(0) = N − 1 ≥ 0; an upper bound where f < 0 always exists because
    // Σ r_i^s ≤ N (max r)^s.
    let n = ratios.len() as f64;
    let rmax = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let mut lo = 0.0;
    let mut hi = n.ln() / (1.0 / rmax).ln() + 1.0;
    debug_assert!(f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let s = 0.5 * (lo + hi);
    if f(s).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "Moran bisection failed to converge, residual {}",
            f(s)
        )));
    }
    Ok(s)
}

/// Box-counting estimate over a fixed set of dyadic scales.
#[derive(Debug, Clone, Serialize)]
pub struct BoxCountResult {
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    pub fit: LineFit,
    /// Fit after dropping the extreme scales, if the full fit had `r2 < 0.99`.
    pub refit: Option<LineFit>,
}

impl BoxCountResult {
    /// The dimension estimate: the refit slope when present, else the full fit.
    pub fn dimension(&self) -> f64 {
        self.refit.map_or(self.fit.slope, |f| f.slope)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("scale,count\n");
        for (d, c) in self.scales.iter().zip(&self.counts) {
            s.push_str(&format!("{d},{c}\n"));
        }
        s
    }
}

/// Counts occupied boxes of side `delta` on the grid anchored at the origin.
pub fn box_count(points: &[[f64; 2]], delta: f64) -> usize {
    let mut boxes: HashSet<(i64, i64)> = HashSet::new();
    for p in points {
        boxes.insert(((p[0] / delta).floor() as i64, (p[1] / delta).floor() as i64));
    }
    boxes.len()
}

/// Fits `log N(δ)` against `log(1/δ)`. If the fit is poor (`r2 < 0.99`) the
/// extreme scales are dropped once and both fits are reported.
pub fn box_counting_dimension(points: &[[f64; 2]], scales: &[f64]) -> Result<BoxCountResult> {
    if scales.len() < 3 {
        return Err(Error::NotEnoughData("need ≥ 3 box-counting scales".into()));
    }
    if points.is_empty() {
        return Err(Error::NotEnoughData("no points to box-count".into()));
    }
    let counts: Vec<usize> = scales.iter().map(|&d| box_count(points, d)).collect();
    let inv: Vec<f64> = scales.iter().map(|&d| 1.0 / d).collect();
    let cf: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let fit = log_log_fit(&inv, &cf)?;
    let refit = if fit.r2 < 0.99 && scales.len() >= 5 {
        Some(log_log_fit(
            &inv[1..inv.len() - 1],
            &cf[1..cf.len() - 1],
        )?)
    } else {
        None
    };
    Ok(BoxCountResult {
        scales: scales.to_vec(),
        counts,
        fit,
        refit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moran_equal_ratio_closed_forms() {
        let s = moran_dimension(&[0.5, 0.5, 0.5]).unwrap();
        assert_relative_eq!(s, 3f64.ln() / 2f64.ln(), epsilon = 1e-10);
        let s = moran_dimension(&[1.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert_relative_eq!(s, 2f64.ln() / 3f64.ln(), epsilon = 1e-10);
        // single map: s = 0
        let s = moran_dimension(&[0.7]).unwrap();
        assert!(s.abs() < 1e-9);
    }

    #[test]
    fn moran_matches_log_formula_for_equal_ratios() {
        for n in 2..=6 {
            for &r in &[0.2f64, 0.3, 0.45] {
                let ratios = vec![r; n];
                let expect = (n as f64).ln() / (1.0 / r).ln();
                if expect > 2.0 {
                    continue; // not a planar IFS regime, but Moran still solves it
                }
                let s = moran_dimension(&ratios).unwrap();
                assert_relative_eq!(s, expect, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn moran_monotone_in_ratios() {
        let s1 = moran_dimension(&[0.3, 0.3]).unwrap();
        let s2 = moran_dimension(&[0.4, 0.4]).unwrap();
        assert!(s2 > s1);
    }

    #[test]
    fn moran_rejects_bad_ratios() {
        assert!(moran_dimension(&[]).is_err());
        assert!(moran_dimension(&[0.0]).is_err());
        assert!(moran_dimension(&[1.0]).is_err());
        assert!(moran_dimension(&[-0.5]).is_err());
    }

    #[test]
    fn sierpinski_moran_dimension() {
        let ifs = IFSystem::sierpinski();
        let s = moran_dimension(&ifs.ratios()).unwrap();
        assert_relative_eq!(s, 3f64.ln() / 2f64.ln(), epsilon = 1e-10);
    }

    #[test]
    fn fixed_points_of_gasket_maps_are_corners() {
        let ifs = IFSystem::sierpinski();
        for (m, c) in ifs.maps().iter().zip(crate::sg::corners()) {
            let p = m.fixed_point();
            assert_relative_eq!(p[0], c[0], epsilon = 1e-12);
            assert_relative_eq!(p[1], c[1], epsilon = 1e-12);
        }
    }

    #[test]
    fn chaos_game_stays_in_hull() {
        let ifs = IFSystem::sierpinski();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts = ifs.chaos_game(20_000, &mut rng);
        assert_eq!(pts.len(), 20_000);
        let h = 3f64.sqrt() / 2.0;
        for p in &pts {
            assert!(p[1] >= -1e-12 && p[1] <= h + 1e-12);
            // sides of the triangle: y ≤ √3 x and y ≤ √3 (1 − x)
            assert!(p[1] <= 3f64.sqrt() * p[0] + 1e-9);
            assert!(p[1] <= 3f64.sqrt() * (1.0 - p[0]) + 1e-9);
        }
    }

    #[test]
    fn chaos_game_avoids_cantor_gap() {
        // middle-thirds Cantor set on the x-axis: no point in (1/3, 2/3)
        let maps = vec![
            Similitude::scaling(1.0 / 3.0, [0.0, 0.0]).unwrap(),
            Similitude::scaling(1.0 / 3.0, [2.0 / 3.0, 0.0]).unwrap(),
        ];
        let ifs = IFSystem::new(maps).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in ifs.chaos_game(50_000, &mut rng) {
            assert!(p[0] <= 1.0 / 3.0 + 1e-12 || p[0] >= 2.0 / 3.0 - 1e-12);
        }
    }

    #[test]
    fn box_count_of_filled_square() {
        // a dense grid in the unit square should box-count to dimension 2
        let mut pts = Vec::new();
        let m = 512;
        for i in 0..m {
            for j in 0..m {
                pts.push([
                    (i as f64 + 0.5) / m as f64,
                    (j as f64 + 0.5) / m as f64,
                ]);
            }
        }
        let scales: Vec<f64> = (2..=6).map(|k| 0.5f64.powi(k)).collect();
        let res = box_counting_dimension(&pts, &scales).unwrap();
        assert_relative_eq!(res.fit.slope, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn gasket_box_counting_near_log3_log2() {
        let ifs = IFSystem::sierpinski();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let pts = ifs.chaos_game(100_000, &mut rng);
        let scales: Vec<f64> = (3..=8).map(|k| 0.5f64.powi(k)).collect();
        let res = box_counting_dimension(&pts, &scales).unwrap();
        let d = res.dimension();
        assert!(
            (d - 3f64.ln() / 2f64.ln()).abs() < 0.05,
            "box-counting slope {d}"
        );
    }

    proptest::proptest! {
        #[test]
        fn moran_solution_is_bracketed(
            ratios in proptest::collection::vec(0.05f64..0.95, 1..6)
        ) {
            let s = moran_dimension(&ratios).unwrap();
            proptest::prop_assert!(s >= 0.0);
            // Σ rᵢˢ is decreasing in s with value N at 0, so the root is
            // below log N / log(1/max r)
            let n = ratios.len() as f64;
            let rmax = ratios.iter().cloned().fold(f64::MIN, f64::max);
            proptest::prop_assert!(s <= n.ln() / (1.0 / rmax).ln() + 1e-9);
            let residual: f64 = ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0;
            proptest::prop_assert!(residual.abs() <= 1e-12);
        }
    }

    #[test]
    fn csv_export_shape() {
        let pts = vec![[0.1, 0.1], [0.9, 0.9]];
        let res = box_counting_dimension(&pts, &[0.5, 0.25, 0.125]).unwrap();
        let csv = res.to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("scale,count\n"));
    }
}
