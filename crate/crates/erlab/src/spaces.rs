//! The concrete metric spaces every experiment runs on.
//!
//! All descriptors are immutable after construction and safe to share across
//! worker threads.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sg::GraphApprox;

/// A point with finite real coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("point needs ≥ 1 coordinate".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "point coordinates must be finite".into(),
            ));
        }
        Ok(Point { coords })
    }

    pub fn one(x: f64) -> Self {
        Point::new(vec![x]).expect("finite coordinate")
    }

    pub fn two(x: f64, y: f64) -> Self {
        Point::new(vec![x, y]).expect("finite coordinates")
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// A sampled real function on a uniform-in-order (strictly increasing) time
/// grid, linearly interpolated between samples.
#[derive(Debug, Clone)]
pub struct SampledPath {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl SampledPath {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "times/values length mismatch: {} vs {}",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::NotEnoughData("need ≥ 2 samples".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "times must be strictly increasing".into(),
            ));
        }
        Ok(SampledPath { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Linear interpolation; clamps outside the sampled range.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.times[0] {
            return self.values[0];
        }
        if t >= *self.times.last().unwrap() {
            return *self.values.last().unwrap();
        }
        let i = self.times.partition_point(|&s| s <= t) - 1;
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }
}

/// The metric spaces of the laboratory.
#[derive(Debug, Clone)]
pub enum SpaceDescriptor {
    /// `R^n` with the Euclidean metric and Lebesgue measure.
    Euclidean { dim: usize },
    /// The real line with `d(x,y) = |arctan x − arctan y|`; bounded by π.
    ArctanLine,
    /// `R^2` with `d((x1,x2),(y1,y2)) = |x1−y1|^α + |x2−y2|`.
    HolderProduct { alpha: f64 },
    /// Graph of a sampled function with the sup metric
    /// `d((s,u),(t,v)) = max(|s−t|, |u−v|)`.
    FunctionGraphSup { path: Arc<SampledPath> },
    /// Vertex set of a pre-fractal graph with hop distance scaled by the
    /// edge length `2^-level`.
    GraphMetric { graph: Arc<GraphApprox> },
}

impl SpaceDescriptor {
    pub fn holder_product(alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) || alpha <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Hölder exponent must lie in (0,1), got {alpha}"
            )));
        }
        Ok(SpaceDescriptor::HolderProduct { alpha })
    }

    /// Coordinate dimension points of this space are expected to have.
    pub fn ambient_dim(&self) -> usize {
        match self {
            SpaceDescriptor::Euclidean { dim } => *dim,
            SpaceDescriptor::ArctanLine => 1,
            SpaceDescriptor::HolderProduct { .. } => 2,
            SpaceDescriptor::FunctionGraphSup { .. } => 2,
            SpaceDescriptor::GraphMetric { .. } => 2,
        }
    }

    fn check_dims(&self, p: &Point, q: &Point) -> Result<()> {
        let want = self.ambient_dim();
        for pt in [p, q] {
            if pt.dim() != want {
                return Err(Error::DimensionMismatch {
                    expected: want,
                    got: pt.dim(),
                });
            }
        }
        Ok(())
    }
}

/// Distance between two points of the space.
pub fn distance(space: &SpaceDescriptor, p: &Point, q: &Point) -> Result<f64> {
    space.check_dims(p, q)?;
    let a = p.coords();
    let b = q.coords();
    Ok(match space {
        SpaceDescriptor::Euclidean { .. } => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
        SpaceDescriptor::ArctanLine => (a[0].atan() - b[0].atan()).abs(),
        SpaceDescriptor::HolderProduct { alpha } => {
            (a[0] - b[0]).abs().powf(*alpha) + (a[1] - b[1]).abs()
        }
        SpaceDescriptor::FunctionGraphSup { .. } => {
            (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
        }
        SpaceDescriptor::GraphMetric { graph } => {
            let i = graph
                .find_vertex([a[0], a[1]])
                .ok_or_else(|| Error::InvalidParameter("point is not a graph vertex".into()))?;
            let j = graph
                .find_vertex([b[0], b[1]])
                .ok_or_else(|| Error::InvalidParameter("point is not a graph vertex".into()))?;
            hop_distance(graph, i, j) as f64 * 0.5f64.powi(graph.level as i32)
        }
    })
}

/// Distance from the ball center; named separately so exit-detection sites
/// read as `ball_exit_radius(..) >= r`.
pub fn ball_exit_radius(space: &SpaceDescriptor, center: &Point, p: &Point) -> Result<f64> {
    distance(space, center, p)
}

/// Builds the sup-metric graph space of a sampled function, together with the
/// embedding `φ: t ↦ (t, f(t))` available via [`graph_point`].
pub fn graph_of_function_space(times: Vec<f64>, values: Vec<f64>) -> Result<SpaceDescriptor> {
    Ok(SpaceDescriptor::FunctionGraphSup {
        path: Arc::new(SampledPath::new(times, values)?),
    })
}

/// The homeomorphism `φ(t) = (t, f(t))` of a function-graph space.
pub fn graph_point(space: &SpaceDescriptor, t: f64) -> Result<Point> {
    match space {
        SpaceDescriptor::FunctionGraphSup { path } => Ok(Point::two(t, path.eval(t))),
        _ => Err(Error::InvalidParameter(
            "graph_point needs a function-graph space".into(),
        )),
    }
}

/// The inverse projection `π(x, f(x)) = x`.
pub fn graph_project(space: &SpaceDescriptor, p: &Point) -> Result<f64> {
    match space {
        SpaceDescriptor::FunctionGraphSup { .. } => Ok(p.coords()[0]),
        _ => Err(Error::InvalidParameter(
            "graph_project needs a function-graph space".into(),
        )),
    }
}

fn hop_distance(graph: &GraphApprox, from: usize, to: usize) -> usize {
    if from == to {
        return 0;
    }
    let adj = graph.adjacency();
    let mut dist = vec![usize::MAX; graph.vertex_count()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                if w == to {
                    return dist[w];
                }
                queue.push_back(w);
            }
        }
    }
    usize::MAX
}
